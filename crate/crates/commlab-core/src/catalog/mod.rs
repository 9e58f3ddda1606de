//! Group constructors: a small zoo of finitely generated groups with exact
//! normal forms, addressed by compact spec strings.
//!
//! | spec                          | group                                          |
//! |-------------------------------|------------------------------------------------|
//! | `free:n`                      | free group F_n                                 |
//! | `abelian:n`                   | free abelian Z^n                               |
//! | `cyclic:n`                    | finite cyclic Z_n                              |
//! | `bs:m,n`                      | Baumslag–Solitar ⟨t,x \| t⁻¹xᵐt = xⁿ⟩          |
//! | `bs-britton:m,n`              | same group, forced stable-letter normal forms  |
//! | `ex3`                         | ⟨x,y,t \| x²=y², t⁻¹x²t=x⁴⟩                    |
//! | `hladder:n`                   | ⟨x₀..x_n \| abelian, x_k²=x₀^{2^k}⟩            |
//! | `ex2hnn:n`                    | ⟨hladder:n, t \| t⁻¹x₀t=x₀²⟩                   |
//! | `asc-hnn:abelian:n:IMAGES`    | ⟨Z^n, t \| t⁻¹xᵢt = imageᵢ⟩                    |
//! | `fsub:PATH`                   | free group with an embedded coset table        |
//!
//! `bs:1,n` uses the b-adic model; other (m,n) go through the generic HNN
//! machinery. The two `bs` routes are deliberately independent so they can
//! cross-check each other.

pub mod abelian;
pub mod asc;
pub mod dyadic;
pub mod ex3;
pub mod free;
pub mod hnn;
pub mod hom;
pub mod ladder;
pub mod table;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{CommError, Result};
use crate::group::GroupHandle;
use crate::words::{Alphabet, GeneratorSymbol, Word};

pub use hom::HomHandle;
pub use table::CosetTable;

/// Default generator names: x, y, z for small ranks, g0.. beyond.
pub fn gen_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("g{i}")).collect()
    }
}

fn parse_count(text: &str, what: &str, max: usize) -> Result<usize> {
    let n: usize = text
        .trim()
        .parse()
        .map_err(|_| CommError::InvalidSpec(format!("{what} must be a number, got `{text}`")))?;
    if n < 1 || n > max {
        return Err(CommError::InvalidSpec(format!(
            "{what} must be between 1 and {max}, got {n}"
        )));
    }
    Ok(n)
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let (m, n) = text.split_once(',').ok_or_else(|| {
        CommError::InvalidSpec(format!("expected `m,n` parameters, got `{text}`"))
    })?;
    Ok((
        parse_count(m, "first parameter", 1 << 16)?,
        parse_count(n, "second parameter", 1 << 16)?,
    ))
}

fn commutators(lo: usize, hi: usize) -> Vec<(Word, Word)> {
    let mut rels = Vec::new();
    for i in lo..hi {
        for j in (i + 1)..hi {
            rels.push((
                Word(vec![
                    GeneratorSymbol::positive(i),
                    GeneratorSymbol::positive(j),
                ]),
                Word(vec![
                    GeneratorSymbol::positive(j),
                    GeneratorSymbol::positive(i),
                ]),
            ));
        }
    }
    rels
}

/// BS(m,n) through the generic stable-letter machinery; used directly for
/// m > 1 and kept available for m = 1 as an independent route to cross-check
/// the b-adic model.
pub fn bs_via_britton(m: usize, n: usize, spec: String) -> GroupHandle {
    let alphabet = Alphabet::new(vec!["t", "x"]);
    let base = Arc::new(hnn::ZPowers {
        x_index: 1,
        m: m as i128,
        n: n as i128,
    });
    let mut left = vec![GeneratorSymbol::negative(0)];
    left.extend(std::iter::repeat(GeneratorSymbol::positive(1)).take(m));
    left.push(GeneratorSymbol::positive(0));
    let right = vec![GeneratorSymbol::positive(1); n];
    GroupHandle::from_engine(Arc::new(hnn::HnnEngine::new(
        alphabet,
        0,
        base,
        spec,
        vec![(Word(left), Word(right))],
    )))
}

fn build_asc_hnn(spec: &str, rest: &str) -> Result<GroupHandle> {
    let (base_spec, images_text) = rest.rsplit_once(':').ok_or_else(|| {
        CommError::InvalidSpec(
            "expected `asc-hnn:abelian:n:IMAGES` with `;`-separated image words".into(),
        )
    })?;
    let n = match base_spec.strip_prefix("abelian:") {
        Some(count) => parse_count(count, "base rank", 16)?,
        None => {
            return Err(CommError::InvalidSpec(format!(
                "ascending extensions support `abelian:n` bases, got `{base_spec}`"
            )))
        }
    };
    let mut names = vec!["t".to_string()];
    names.extend(gen_names(n));
    let alphabet = Alphabet::new(names);

    let image_words: Vec<&str> = images_text.split(';').collect();
    if image_words.len() != n {
        return Err(CommError::InvalidSpec(format!(
            "need {n} image words, got {}",
            image_words.len()
        )));
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut relations = commutators(1, n + 1);
    for (i, text) in image_words.iter().enumerate() {
        let runs = alphabet.parse_runs(text)?;
        if runs.iter().any(|&(idx, _)| idx == 0) {
            return Err(CommError::InvalidSpec(format!(
                "image word `{text}` may not use the stable letter"
            )));
        }
        let mut row = vec![BigInt::from(0); n];
        for &(idx, e) in &runs {
            row[idx - 1] += BigInt::from(e);
        }
        rows.push(row);
        // t⁻¹ x_i t = image_i.
        let left = Word(vec![
            GeneratorSymbol::negative(0),
            GeneratorSymbol::positive(1 + i),
            GeneratorSymbol::positive(0),
        ]);
        let right = crate::words::runs_to_word(&runs);
        relations.push((left, right));
    }
    let base = Arc::new(asc::AbelianImageBase::new(1, rows)?);
    Ok(GroupHandle::from_engine(Arc::new(hnn::HnnEngine::new(
        alphabet,
        0,
        base,
        spec.to_string(),
        relations,
    ))))
}

/// Builds a group from its spec string. Equal spec strings always produce
/// interchangeable handles.
pub fn build_group(spec: &str) -> Result<GroupHandle> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("free:") {
        let n = parse_count(rest, "rank", 64)?;
        return Ok(GroupHandle::from_engine(Arc::new(free::FreeEngine::new(
            Alphabet::new(gen_names(n)),
            spec.to_string(),
            None,
        ))));
    }
    if let Some(rest) = spec.strip_prefix("abelian:") {
        let n = parse_count(rest, "rank", 64)?;
        return Ok(GroupHandle::from_engine(Arc::new(
            abelian::AbelianEngine::new(Alphabet::new(gen_names(n)), spec.to_string()),
        )));
    }
    if let Some(rest) = spec.strip_prefix("cyclic:") {
        let n = parse_count(rest, "order", 1 << 30)?;
        return Ok(GroupHandle::from_engine(Arc::new(
            abelian::CyclicEngine::new(n as u64, spec.to_string()),
        )));
    }
    if let Some(rest) = spec.strip_prefix("bs-britton:") {
        let (m, n) = parse_pair(rest)?;
        return Ok(bs_via_britton(m, n, spec.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("bs:") {
        let (m, n) = parse_pair(rest)?;
        if m == 1 {
            return Ok(GroupHandle::from_engine(Arc::new(
                dyadic::DyadicBsEngine::new(n as u64, spec.to_string()),
            )));
        }
        return Ok(bs_via_britton(m, n, spec.to_string()));
    }
    if spec == "ex3" {
        let alphabet = Alphabet::new(vec!["x", "y", "t"]);
        let base = Arc::new(ex3::KleinBase {
            x_index: 0,
            y_index: 1,
        });
        let relations = vec![
            // x² = y².
            (
                Word(vec![GeneratorSymbol::positive(0); 2]),
                Word(vec![GeneratorSymbol::positive(1); 2]),
            ),
            // t⁻¹ x² t = x⁴.
            (
                Word(vec![
                    GeneratorSymbol::negative(2),
                    GeneratorSymbol::positive(0),
                    GeneratorSymbol::positive(0),
                    GeneratorSymbol::positive(2),
                ]),
                Word(vec![GeneratorSymbol::positive(0); 4]),
            ),
        ];
        return Ok(GroupHandle::from_engine(Arc::new(hnn::HnnEngine::new(
            alphabet,
            2,
            base,
            spec.to_string(),
            relations,
        ))));
    }
    if let Some(rest) = spec.strip_prefix("hladder:") {
        let n = parse_count(rest, "tower height", 16)?;
        return Ok(GroupHandle::from_engine(Arc::new(
            ladder::LadderEngine::new(n, spec.to_string()),
        )));
    }
    if let Some(rest) = spec.strip_prefix("ex2hnn:") {
        let n = parse_count(rest, "tower height", 16)?;
        let mut names = vec!["t".to_string()];
        names.extend((0..=n).map(|k| format!("x{k}")));
        let alphabet = Alphabet::new(names);
        let base = Arc::new(ladder::LadderBase {
            core: ladder::LadderCore::new(n, 1),
        });
        // t⁻¹ x₀ t = x₀².
        let mut relations = vec![(
            Word(vec![
                GeneratorSymbol::negative(0),
                GeneratorSymbol::positive(1),
                GeneratorSymbol::positive(0),
            ]),
            Word(vec![GeneratorSymbol::positive(1); 2]),
        )];
        relations.extend(commutators(1, n + 2));
        relations.extend(ladder::ladder_relations(n, 1));
        return Ok(GroupHandle::from_engine(Arc::new(hnn::HnnEngine::new(
            alphabet,
            0,
            base,
            spec.to_string(),
            relations,
        ))));
    }
    if let Some(rest) = spec.strip_prefix("asc-hnn:") {
        return build_asc_hnn(spec, rest);
    }
    if let Some(path) = spec.strip_prefix("fsub:") {
        let text = std::fs::read_to_string(path.trim())?;
        let table = table::CosetTable::parse(&text)?;
        return Ok(GroupHandle::from_engine(Arc::new(free::FreeEngine::new(
            Alphabet::new(gen_names(table.n_gens)),
            spec.to_string(),
            Some(Arc::new(table)),
        ))));
    }
    Err(CommError::InvalidSpec(format!(
        "unknown group spec `{spec}`; see the catalog table for supported forms"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_specs_build() {
        for spec in [
            "free:2",
            "free:3",
            "abelian:2",
            "cyclic:6",
            "bs:1,2",
            "bs:2,3",
            "bs-britton:1,2",
            "ex3",
            "hladder:2",
            "ex2hnn:1",
            "asc-hnn:abelian:2:x y; y^2",
        ] {
            let g = build_group(spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert_eq!(g.spec(), spec.trim());
            assert!(g.alphabet().len() >= 1);
        }
    }

    #[test]
    fn bad_specs_are_rejected_with_context() {
        for bad in [
            "free:0",
            "free:abc",
            "bs:1",
            "bs:0,2",
            "wat",
            "asc-hnn:free:2:x",
            "asc-hnn:abelian:2:x",
        ] {
            let err = build_group(bad).unwrap_err().to_string();
            assert!(!err.is_empty(), "{bad} should fail loudly");
        }
    }

    #[test]
    fn dyadic_and_britton_routes_agree_on_bs12() {
        let d = build_group("bs:1,2").unwrap();
        let b = build_group("bs-britton:1,2").unwrap();
        let words = [
            "1",
            "t",
            "x",
            "t^-1",
            "x^-3",
            "t x t^-1",
            "t^-1 x t",
            "x t x t^-1",
            "t^2 x t^-2",
            "t^-1 x^5 t^2",
            "x t^-1 x t x^-1",
            "t x^2 t x^-1 t^-1",
            "t^-1 t x x^-1",
        ];
        // Same partition into equal elements on both routes.
        for u in words {
            for v in words {
                let du = d.parse_runs(u).unwrap();
                let dv = d.parse_runs(v).unwrap();
                let bu = b.parse_runs(u).unwrap();
                let bv = b.parse_runs(v).unwrap();
                assert_eq!(
                    d.equal_runs(&du, &dv),
                    b.equal_runs(&bu, &bv),
                    "routes disagree on {u} vs {v}"
                );
            }
        }
    }

    #[test]
    fn embedded_tables_load_from_disk() {
        let dir = std::env::temp_dir();
        let path = dir.join(format!("commlab-fsub-{}.txt", std::process::id()));
        // Index-2 subgroup of F_2: parity of total exponent. Both generators
        // swap the two cosets.
        std::fs::write(&path, "2 2\n1 0\n1 0\n").unwrap();
        let g = build_group(&format!("fsub:{}", path.display())).unwrap();
        let h = crate::subgroup::subgroup_of(&g, "table", None).unwrap();
        assert!(h.membership(&g.parse("x y").unwrap()).is_yes());
        assert!(h.membership(&g.parse("x^2").unwrap()).is_yes());
        assert!(h.membership(&g.parse("x").unwrap()).is_no());
        std::fs::remove_file(&path).ok();
    }
}
