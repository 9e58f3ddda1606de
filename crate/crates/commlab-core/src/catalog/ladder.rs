//! The tower groups H_n = ⟨x₀, …, x_n | all commute, x_k² = x₀^{2^k}⟩ and the
//! ascending extension ⟨H_n, t | t⁻¹ x₀ t = x₀²⟩.
//!
//! H_n is the quotient of Z^{n+1} by the lattice spanned by the rows
//! 2^k e₀ − 2 e_k (k = 1..n). The functional j(v) = v₀ + Σ_{k≥1} v_k 2^{k−1}
//! kills every relation row, so it is a well-defined homomorphism H_n → Z
//! and v lies in ⟨x₀⟩ exactly when v ≡ j(v)·e₀ modulo the lattice.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::catalog::abelian::{commutator_relations, encode_big};
use crate::catalog::hnn::{BaseGroup, BaseRule};
use crate::group::GroupEngine;
use crate::lattice::RowLattice;
use crate::subgroup::{Membership, MembershipFn, SubgroupSpec};
use crate::words::{Alphabet, GeneratorSymbol, Runs, Word};

/// Shared arithmetic for H_n, parameterized by where the x-block starts in
/// the ambient alphabet (0 standalone, 1 under a stable letter).
pub struct LadderCore {
    pub n: usize,
    pub offset: usize,
    pub lattice: RowLattice,
    rows: Vec<Vec<BigInt>>,
}

impl LadderCore {
    pub fn new(n: usize, offset: usize) -> LadderCore {
        assert!(n >= 1 && n <= 16, "tower height out of supported range");
        let mut rows = Vec::new();
        for k in 1..=n {
            let mut row = vec![BigInt::zero(); n + 1];
            row[0] = BigInt::from(1i64 << k);
            row[k] = BigInt::from(-2);
            rows.push(row);
        }
        LadderCore {
            n,
            offset,
            lattice: RowLattice::from_rows(n + 1, rows.clone()),
            rows,
        }
    }

    pub fn coords(&self, r: &Runs) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n + 1];
        for &(i, e) in r {
            assert!(
                (self.offset..=self.offset + self.n).contains(&i),
                "letter index {i} outside the tower block"
            );
            v[i - self.offset] += BigInt::from(e);
        }
        v
    }

    pub fn encode(&self, v: &[BigInt]) -> Runs {
        let local = encode_big(v);
        local.into_iter().map(|(i, e)| (i + self.offset, e)).collect()
    }

    pub fn nf(&self, r: &Runs) -> Runs {
        self.encode(&self.lattice.reduce(&self.coords(r)))
    }

    pub fn j_of(&self, v: &[BigInt]) -> BigInt {
        let mut j = v[0].clone();
        for k in 1..=self.n {
            j += &v[k] * BigInt::from(1i64 << (k - 1));
        }
        j
    }

    pub fn relation_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.clone()
    }

    /// Lattice of the subgroup generated by the given vectors, together with
    /// all relation rows.
    pub fn span_lattice(&self, extra: &[Vec<BigInt>]) -> RowLattice {
        let mut rows = self.rows.clone();
        rows.extend(extra.iter().cloned());
        RowLattice::from_rows(self.n + 1, rows)
    }

    fn x0(&self, e: &BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n + 1];
        v[0] = e.clone();
        v
    }
}

pub struct LadderEngine {
    alphabet: Alphabet,
    spec: String,
    pub core: LadderCore,
}

impl LadderEngine {
    pub fn new(n: usize, spec: String) -> LadderEngine {
        let names: Vec<String> = (0..=n).map(|k| format!("x{k}")).collect();
        LadderEngine {
            alphabet: Alphabet::new(names),
            spec,
            core: LadderCore::new(n, 0),
        }
    }
}

/// Relations x_k² = x₀^{2^k} rendered as word pairs (offset-aware).
pub fn ladder_relations(n: usize, offset: usize) -> Vec<(Word, Word)> {
    let mut rels = Vec::new();
    for k in 1..=n {
        let left = Word(vec![GeneratorSymbol::positive(offset + k); 2]);
        let right = Word(vec![GeneratorSymbol::positive(offset); 1 << k]);
        rels.push((left, right));
    }
    rels
}

impl GroupEngine for LadderEngine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn spec(&self) -> &str {
        &self.spec
    }

    fn nf(&self, r: &Runs) -> Runs {
        self.core.nf(r)
    }

    fn relations(&self) -> Vec<(Word, Word)> {
        let mut rels = commutator_relations(&self.alphabet);
        rels.extend(ladder_relations(self.core.n, 0));
        rels
    }

    fn abelian_presentation(&self) -> Option<(usize, Vec<Vec<BigInt>>)> {
        Some((self.core.n + 1, self.core.relation_rows()))
    }

    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        let words = match spec {
            SubgroupSpec::CyclicSpan(w) => vec![w.clone()],
            SubgroupSpec::AbelianSpan(ws) | SubgroupSpec::Gens(ws) => ws.clone(),
            _ => return None,
        };
        let mut rows = Vec::new();
        for w in &words {
            rows.push(self.core.coords(&self.alphabet.parse_runs(w).ok()?));
        }
        let span = self.core.span_lattice(&rows);
        let n = self.core.n;
        Some(Box::new(move |g: &Runs| {
            let mut v = vec![BigInt::zero(); n + 1];
            for &(i, e) in g {
                v[i] += BigInt::from(e);
            }
            Membership::from_bool(span.contains(&v))
        }))
    }
}

/// H_n as the base of an ascending extension with A = ⟨x₀⟩, φ(x₀) = x₀².
pub struct LadderBase {
    pub core: LadderCore,
}

impl LadderBase {
    fn split_at(&self, h: &Runs, j: &BigInt) -> (Runs, Runs) {
        let v = self.core.coords(h);
        let mut shifted = v.clone();
        shifted[0] -= j;
        let rep = self.core.encode(&self.core.lattice.reduce(&shifted));
        let part = self.core.encode(&self.core.x0(j));
        (rep, part)
    }
}

impl BaseGroup for LadderBase {
    fn base_indexes(&self) -> Vec<usize> {
        (self.core.offset..=self.core.offset + self.core.n).collect()
    }

    fn nf(&self, r: &Runs) -> Runs {
        self.core.nf(r)
    }

    fn in_assoc(&self, h: &Runs) -> bool {
        let v = self.core.coords(h);
        let j = self.core.j_of(&v);
        let mut shifted = v;
        shifted[0] -= &j;
        self.core.lattice.contains(&shifted)
    }

    fn in_image(&self, h: &Runs) -> bool {
        let v = self.core.coords(h);
        let j = self.core.j_of(&v);
        if (&j % BigInt::from(2)) != BigInt::zero() {
            return false;
        }
        let mut shifted = v;
        shifted[0] -= &j;
        self.core.lattice.contains(&shifted)
    }

    fn phi(&self, a: &Runs) -> Runs {
        let j = self.core.j_of(&self.core.coords(a));
        self.core
            .encode(&self.core.lattice.reduce(&self.core.x0(&(j * 2))))
    }

    fn phi_inv(&self, b: &Runs) -> Runs {
        let j = self.core.j_of(&self.core.coords(b));
        self.core
            .encode(&self.core.lattice.reduce(&self.core.x0(&(j / 2))))
    }

    fn rep_assoc(&self, h: &Runs) -> (Runs, Runs) {
        let j = self.core.j_of(&self.core.coords(h));
        self.split_at(h, &j)
    }

    fn rep_image(&self, h: &Runs) -> (Runs, Runs) {
        let j = self.core.j_of(&self.core.coords(h));
        let r = (&j % BigInt::from(2) + BigInt::from(2)) % BigInt::from(2);
        self.split_at(h, &(j - r))
    }

    fn cyclic_rule(&self, w: &Runs) -> Option<BaseRule> {
        self.span_rule(std::slice::from_ref(w))
    }

    fn span_rule(&self, ws: &[Runs]) -> Option<BaseRule> {
        let rows: Vec<Vec<BigInt>> = ws.iter().map(|w| self.core.coords(w)).collect();
        let span = self.core.span_lattice(&rows);
        let n = self.core.n;
        let offset = self.core.offset;
        Some(Box::new(move |g: &Runs| {
            let mut v = vec![BigInt::zero(); n + 1];
            for &(i, e) in g {
                if !(offset..=offset + n).contains(&i) {
                    return false;
                }
                v[i - offset] += BigInt::from(e);
            }
            span.contains(&v)
        }))
    }
}
