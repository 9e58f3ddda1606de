//! Free abelian groups Z^n and finite cyclic groups Z_n.
//!
//! Normal forms are exponent vectors rendered in generator order, so all the
//! subgroup questions reduce to integer lattice arithmetic.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::group::{CosetRule, GroupEngine};
use crate::lattice::RowLattice;
use crate::subgroup::{Membership, MembershipFn, SubgroupSpec};
use crate::words::{single_run, Alphabet, Runs, Word};

pub struct AbelianEngine {
    alphabet: Alphabet,
    spec: String,
}

impl AbelianEngine {
    pub fn new(alphabet: Alphabet, spec: String) -> AbelianEngine {
        AbelianEngine { alphabet, spec }
    }

    fn coords(&self, r: &Runs) -> Vec<i128> {
        let mut v = vec![0i128; self.alphabet.len()];
        for &(i, e) in r {
            v[i] = v[i].checked_add(e).expect("exponent overflow");
        }
        v
    }
}

/// Renders an exponent vector as canonical runs (zeros dropped).
pub fn vector_runs(v: &[i128]) -> Runs {
    let mut out = Vec::new();
    for (i, &e) in v.iter().enumerate() {
        if e != 0 {
            out.push((i, e));
        }
    }
    out
}

pub fn coords_big(n: usize, r: &Runs) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    for &(i, e) in r {
        v[i] += BigInt::from(e);
    }
    v
}

pub fn encode_big(v: &[BigInt]) -> Runs {
    let mut out = Vec::new();
    for (i, e) in v.iter().enumerate() {
        if !e.is_zero() {
            let e: i128 = e.try_into().expect("coordinate exceeds i128 range");
            out.push((i, e));
        }
    }
    out
}

/// Commutator relations [g_i, g_j] = 1 for all i < j.
pub fn commutator_relations(alphabet: &Alphabet) -> Vec<(Word, Word)> {
    let mut rels = Vec::new();
    for i in 0..alphabet.len() {
        for j in (i + 1)..alphabet.len() {
            let left = Word(vec![
                crate::words::GeneratorSymbol::positive(i),
                crate::words::GeneratorSymbol::positive(j),
            ]);
            let right = Word(vec![
                crate::words::GeneratorSymbol::positive(j),
                crate::words::GeneratorSymbol::positive(i),
            ]);
            rels.push((left, right));
        }
    }
    rels
}

/// Membership of `g` in ⟨w⟩ inside a free abelian group: is `g` an integer
/// multiple of the vector `w`?
pub(crate) fn multiple_of(w: &[BigInt], g: &[BigInt]) -> bool {
    // Find the first nonzero coordinate of w and derive the only possible
    // multiplier from it.
    let pivot = match w.iter().position(|c| !c.is_zero()) {
        Some(p) => p,
        None => return g.iter().all(|c| c.is_zero()),
    };
    if (&g[pivot] % &w[pivot]).is_zero() {
        let k = &g[pivot] / &w[pivot];
        w.iter().zip(g).all(|(wc, gc)| wc * &k == *gc)
    } else {
        false
    }
}

struct AbelianCosetRule {
    index: usize,
    modulus: i128,
    n_gens: usize,
}

impl CosetRule for AbelianCosetRule {
    fn coset_id(&self, g: &Runs) -> String {
        let mut v = vec![0i128; self.n_gens];
        for &(i, e) in g {
            v[i] += e;
        }
        if self.modulus == 0 {
            v[self.index] = 0;
        } else {
            v[self.index] = v[self.index].rem_euclid(self.modulus.abs());
        }
        let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }

    fn steps(&self, _g: &Runs) -> Vec<Runs> {
        let mut out = Vec::new();
        for i in 0..self.n_gens {
            out.push(single_run(i, 1));
            out.push(single_run(i, -1));
        }
        out
    }
}

impl GroupEngine for AbelianEngine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn spec(&self) -> &str {
        &self.spec
    }

    fn nf(&self, r: &Runs) -> Runs {
        vector_runs(&self.coords(r))
    }

    fn relations(&self) -> Vec<(Word, Word)> {
        commutator_relations(&self.alphabet)
    }

    fn abelian_presentation(&self) -> Option<(usize, Vec<Vec<BigInt>>)> {
        Some((self.alphabet.len(), Vec::new()))
    }

    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        let n = self.alphabet.len();
        match spec {
            SubgroupSpec::CyclicSpan(w) => {
                let w = coords_big(n, &self.alphabet.parse_runs(w).ok()?);
                Some(Box::new(move |g: &Runs| {
                    Membership::from_bool(multiple_of(&w, &coords_big(n, g)))
                }))
            }
            SubgroupSpec::AbelianSpan(ws) | SubgroupSpec::Gens(ws) => {
                // In an abelian group any generating set spans the same
                // subgroup as its abelian span, so `gens:` gets the exact
                // lattice treatment too.
                let mut rows = Vec::new();
                for w in ws {
                    rows.push(coords_big(n, &self.alphabet.parse_runs(w).ok()?));
                }
                let lattice = RowLattice::from_rows(n, rows);
                Some(Box::new(move |g: &Runs| {
                    Membership::from_bool(lattice.contains(&coords_big(n, g)))
                }))
            }
            _ => None,
        }
    }

    fn coset_rule(&self, spec: &SubgroupSpec) -> Option<Box<dyn CosetRule>> {
        if let SubgroupSpec::CyclicSpan(w) = spec {
            let w = self.nf(&self.alphabet.parse_runs(w).ok()?);
            // Only spans of a (power of a) single generator admit the
            // coordinate-wise coset id.
            if w.len() == 1 {
                let (index, exp) = w[0];
                return Some(Box::new(AbelianCosetRule {
                    index,
                    modulus: exp.abs(),
                    n_gens: self.alphabet.len(),
                }));
            }
            if w.is_empty() {
                return None;
            }
        }
        None
    }
}

pub struct CyclicEngine {
    alphabet: Alphabet,
    spec: String,
    order: u64,
}

impl CyclicEngine {
    pub fn new(order: u64, spec: String) -> CyclicEngine {
        assert!(order >= 1, "cyclic order must be positive");
        CyclicEngine {
            alphabet: Alphabet::new(vec!["x"]),
            spec,
            order,
        }
    }

    fn residue(&self, r: &Runs) -> i128 {
        let mut e: i128 = 0;
        for &(_, k) in r {
            e = e.checked_add(k).expect("exponent overflow");
        }
        e.rem_euclid(self.order as i128)
    }
}

impl GroupEngine for CyclicEngine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn spec(&self) -> &str {
        &self.spec
    }

    fn nf(&self, r: &Runs) -> Runs {
        let e = self.residue(r);
        if e == 0 {
            Vec::new()
        } else {
            single_run(0, e)
        }
    }

    fn relations(&self) -> Vec<(Word, Word)> {
        let mut w = Vec::new();
        for _ in 0..self.order {
            w.push(crate::words::GeneratorSymbol::positive(0));
        }
        vec![(Word(w), Word::empty())]
    }

    fn abelian_presentation(&self) -> Option<(usize, Vec<Vec<BigInt>>)> {
        Some((1, vec![vec![BigInt::from(self.order)]]))
    }

    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        match spec {
            SubgroupSpec::CyclicSpan(w) => {
                let p = self.residue(&self.alphabet.parse_runs(w).ok()?);
                let order = self.order as i128;
                // ⟨x^p⟩ in Z_n is the set of multiples of gcd(p, n).
                let d = num_integer::gcd(p, order);
                Some(Box::new(move |g: &Runs| {
                    let mut e: i128 = 0;
                    for &(_, k) in g {
                        e += k;
                    }
                    Membership::from_bool(if d == 0 {
                        e.rem_euclid(order) == 0
                    } else {
                        e.rem_euclid(order) % d == 0
                    })
                }))
            }
            SubgroupSpec::AbelianSpan(ws) | SubgroupSpec::Gens(ws) => {
                let mut d: i128 = 0;
                for w in ws {
                    d = num_integer::gcd(d, self.residue(&self.alphabet.parse_runs(w).ok()?));
                }
                let order = self.order as i128;
                Some(Box::new(move |g: &Runs| {
                    let mut e: i128 = 0;
                    for &(_, k) in g {
                        e += k;
                    }
                    Membership::from_bool(if d == 0 {
                        e.rem_euclid(order) == 0
                    } else {
                        e.rem_euclid(order) % d == 0
                    })
                }))
            }
            _ => None,
        }
    }
}

/// Hook consumed by the quotient-invariants computation: generator count and
/// relation rows of an explicit abelianized presentation.
pub fn quotient_presentation(
    n_gens: usize,
    relation_rows: Vec<Vec<BigInt>>,
    subgroup_words: &[Vec<BigInt>],
) -> (usize, Vec<Vec<BigInt>>) {
    let mut rows = relation_rows;
    for w in subgroup_words {
        rows.push(w.clone());
    }
    (n_gens, rows)
}
