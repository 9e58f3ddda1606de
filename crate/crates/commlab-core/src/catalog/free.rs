//! Free groups, optionally carrying an embedded coset table for a designated
//! finite-index subgroup.

use std::sync::Arc;

use crate::catalog::table::CosetTable;
use crate::group::GroupEngine;
use crate::subgroup::{Membership, MembershipFn, SubgroupSpec};
use crate::words::{
    push_run, runs_concat, runs_inverse, runs_len, single_run, Alphabet, Runs, Word,
};

pub struct FreeEngine {
    alphabet: Alphabet,
    spec: String,
    /// Embedded table for `fsub:` groups; coset 0 is the designated subgroup.
    pub table: Option<Arc<CosetTable>>,
}

impl FreeEngine {
    pub fn new(alphabet: Alphabet, spec: String, table: Option<Arc<CosetTable>>) -> FreeEngine {
        FreeEngine {
            alphabet,
            spec,
            table,
        }
    }
}

/// Re-merges runs; for single-letter runs this is exactly free reduction.
pub fn canonical_runs(r: &Runs) -> Runs {
    let mut out = Vec::with_capacity(r.len());
    for &(i, e) in r {
        push_run(&mut out, i, e);
    }
    out
}

/// Splits a reduced word as `c · core · c^-1` with `core` cyclically reduced.
fn cyclic_decompose(w: &Runs) -> (Runs, Runs) {
    let mut core = canonical_runs(w);
    let mut conj: Runs = Vec::new();
    loop {
        if core.len() < 2 {
            break;
        }
        let first = core[0];
        let last = *core.last().unwrap();
        if first.0 == last.0 && (first.1 < 0) != (last.1 < 0) {
            // Peel one letter off both ends.
            let sign = if first.1 > 0 { 1 } else { -1 };
            push_run(&mut conj, first.0, sign);
            let stripped = {
                let mut s: Runs = Vec::new();
                push_run(&mut s, first.0, first.1 - sign);
                for &(i, e) in &core[1..core.len() - 1] {
                    push_run(&mut s, i, e);
                }
                push_run(&mut s, last.0, last.1 + sign);
                s
            };
            core = stripped;
        } else {
            break;
        }
    }
    (conj, core)
}

/// Power of a cyclically reduced word (free concatenation).
fn free_pow(r: &Runs, k: i128) -> Runs {
    let base = if k < 0 { runs_inverse(r) } else { r.clone() };
    let mut out: Runs = Vec::new();
    for _ in 0..k.unsigned_abs() {
        out = runs_concat(&out, &base);
    }
    out
}

/// Exponent cap for materializing powers inside the cyclic-span rule; beyond
/// this the rule answers `Unknown` instead of allocating unboundedly.
const CYCLIC_RULE_CAP: u128 = 65536;

fn cyclic_span_rule(w: &Runs) -> Box<MembershipFn> {
    let (conj, core) = cyclic_decompose(w);
    Box::new(move |g: &Runs| {
        if core.is_empty() {
            return Membership::from_bool(g.is_empty());
        }
        // g ∈ ⟨w⟩ = ⟨c · core · c^-1⟩ iff c^-1 g c is a power of core.
        let inner = runs_concat(&runs_inverse(&conj), &runs_concat(g, &conj));
        let (gl, cl) = (runs_len(&inner), runs_len(&core));
        if gl % cl != 0 {
            return Membership::No;
        }
        let k = gl / cl;
        if k == 0 {
            return Membership::from_bool(inner.is_empty());
        }
        if k > CYCLIC_RULE_CAP {
            return Membership::Unknown {
                budget: CYCLIC_RULE_CAP as u64,
            };
        }
        let k = k as i128;
        Membership::from_bool(free_pow(&core, k) == inner || free_pow(&core, -k) == inner)
    })
}

impl GroupEngine for FreeEngine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn spec(&self) -> &str {
        &self.spec
    }

    fn nf(&self, r: &Runs) -> Runs {
        canonical_runs(r)
    }

    fn relations(&self) -> Vec<(Word, Word)> {
        Vec::new()
    }

    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        match spec {
            SubgroupSpec::CyclicSpan(w) => {
                let w = self.alphabet.parse_runs(w).ok()?;
                Some(cyclic_span_rule(&canonical_runs(&w)))
            }
            SubgroupSpec::EmbeddedTable => {
                let table = self.table.clone()?;
                Some(Box::new(move |g: &Runs| {
                    Membership::from_bool(table.contains(g))
                }))
            }
            _ => None,
        }
    }
}

/// Convenience used in a few places: the single positive letter as runs.
pub fn letter_runs(index: usize) -> Runs {
    single_run(index, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupHandle;
    use crate::words::word_to_runs;
    use proptest::prelude::*;

    fn f2() -> GroupHandle {
        GroupHandle::from_engine(Arc::new(FreeEngine::new(
            Alphabet::new(vec!["x", "y"]),
            "free:2".into(),
            None,
        )))
    }

    #[test]
    fn free_normal_form_reduces() {
        let g = f2();
        let w = g.parse("x y y^-1 x").unwrap();
        assert_eq!(g.key_of_word(&w), "x^2");
        assert!(g.equal(
            &g.parse("x y x^-1 x y^-1").unwrap(),
            &g.parse("x").unwrap()
        ));
    }

    #[test]
    fn cyclic_span_rule_handles_conjugates() {
        let g = f2();
        // w = (x y x^-1)^1: ⟨w⟩ = {x y^k x^-1}.
        let rule = cyclic_span_rule(&g.parse_runs("x y x^-1").unwrap());
        let m = |s: &str| rule(&g.nf(&g.parse_runs(s).unwrap()));
        assert_eq!(m("x y^5 x^-1"), Membership::Yes);
        assert_eq!(m("x y^-2 x^-1"), Membership::Yes);
        assert_eq!(m("1"), Membership::Yes);
        assert_eq!(m("y"), Membership::No);
        assert_eq!(m("x y x"), Membership::No);
    }

    proptest! {
        #[test]
        fn cyclic_rule_agrees_with_direct_powers(k in -12i128..=12, seed in 0usize..4) {
            let g = f2();
            let words = ["x", "x y", "x y x^-1", "x^2 y^-1"];
            let w = g.parse_runs(words[seed]).unwrap();
            let rule = cyclic_span_rule(&w);
            let power = g.pow(&w, k);
            prop_assert_eq!(rule(&power), Membership::Yes);
            // A power times one stray generator letter never lands in the span
            // when the span has infinite index; spot-check non-membership.
            let stray = g.mul(&power, &word_to_runs(&g.parse("y").unwrap()));
            if rule(&stray) == Membership::Yes {
                // Only possible when y itself generates into the span, i.e.
                // the span contains y; rule out for our sample words.
                prop_assert_eq!(words[seed], "x y");
                // even for "x y", power·y is in ⟨xy⟩ only if xy-power aligns;
                // verify via direct equality with some small power.
                let mut hit = false;
                for j in -13i128..=13 {
                    if g.pow(&w, j) == stray { hit = true; }
                }
                prop_assert!(hit);
            }
        }
    }
}
