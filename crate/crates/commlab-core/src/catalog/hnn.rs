//! HNN extensions G = ⟨base, t | t^-1 a t = φ(a) for a in A⟩ with a pluggable
//! base group, associated subgroup A, and image B = φ(A).
//!
//! Elements are kept in the stable-letter normal form
//! `r_1 t^{ε_1} r_2 t^{ε_2} … r_k t^{ε_k} · h`: each `r_i` is the canonical
//! representative of a left coset of A (when ε_i = +1) or of B (when
//! ε_i = -1), `h` is an arbitrary base element, and no `r_i` is trivial while
//! sitting between opposite-sign stable letters. A single left-to-right
//! automaton folds arbitrary words into this form, pinching t^-1 a t and
//! t b t^-1 subwords as they appear.

use std::sync::Arc;

use crate::group::{BrittonForm, CosetRule, GroupEngine};
use crate::subgroup::{Membership, MembershipFn, SubgroupSpec};
use crate::words::{push_run, runs_concat, single_run, Alphabet, Runs, Word};

/// Cap on a single t-run so malformed inputs fail loudly instead of spinning.
const MAX_T_RUN: u128 = 1 << 20;

/// Exact membership predicate over canonical base elements.
pub type BaseRule = Box<dyn Fn(&Runs) -> bool + Send + Sync>;

/// What an HNN engine needs from its base group. All `Runs` use the indexes
/// of the *full* extension alphabet; implementations know which indexes are
/// theirs. Canonical means "output of `nf`".
pub trait BaseGroup: Send + Sync + 'static {
    /// Alphabet indexes belonging to the base group.
    fn base_indexes(&self) -> Vec<usize>;

    /// Canonical form of a base word.
    fn nf(&self, r: &Runs) -> Runs;

    /// Does a canonical base element lie in the associated subgroup A?
    fn in_assoc(&self, h: &Runs) -> bool;

    /// Does a canonical base element lie in the image B = φ(A)?
    fn in_image(&self, h: &Runs) -> bool;

    /// φ on elements of A (input canonical, output canonical).
    fn phi(&self, a: &Runs) -> Runs;

    /// φ^-1 on elements of B.
    fn phi_inv(&self, b: &Runs) -> Runs;

    /// Splits h = rep · a with a ∈ A and rep the canonical representative of
    /// the coset hA; members of the transversal must be their own reps.
    fn rep_assoc(&self, h: &Runs) -> (Runs, Runs);

    /// Splits h = rep · b with b ∈ B, rep canonical for hB.
    fn rep_image(&self, h: &Runs) -> (Runs, Runs);

    /// Exact membership rule for ⟨w⟩ with w a canonical base element, when
    /// the base can decide it.
    fn cyclic_rule(&self, _w: &Runs) -> Option<BaseRule> {
        None
    }

    /// Exact membership rule for the subgroup generated by several base
    /// elements together with all commutation available in the base.
    fn span_rule(&self, _ws: &[Runs]) -> Option<BaseRule> {
        None
    }

    /// Coset identification for distinguished subgroups, if available. The
    /// returned rule may assume its inputs are canonical for the extension.
    fn coset_rule(
        &self,
        _spec: &SubgroupSpec,
        _t_index: usize,
        _alphabet: &Alphabet,
    ) -> Option<Box<dyn CosetRule>> {
        None
    }
}

pub struct HnnEngine<B: BaseGroup> {
    alphabet: Alphabet,
    spec: String,
    pub t_index: usize,
    pub base: Arc<B>,
    relations: Vec<(Word, Word)>,
}

impl<B: BaseGroup> HnnEngine<B> {
    pub fn new(
        alphabet: Alphabet,
        t_index: usize,
        base: Arc<B>,
        spec: String,
        relations: Vec<(Word, Word)>,
    ) -> HnnEngine<B> {
        HnnEngine {
            alphabet,
            spec,
            t_index,
            base,
            relations,
        }
    }

    fn push_t(&self, prefix: &mut Vec<(Runs, i8)>, tail: &mut Runs, step: i8) {
        let (rep, part) = if step > 0 {
            self.base.rep_assoc(tail)
        } else {
            self.base.rep_image(tail)
        };
        let mapped = if step > 0 {
            self.base.phi(&part)
        } else {
            self.base.phi_inv(&part)
        };
        match prefix.last() {
            Some(&(_, last_eps)) if last_eps == -step && rep.is_empty() => {
                let (prev, _) = prefix.pop().unwrap();
                *tail = self.base.nf(&runs_concat(&prev, &mapped));
            }
            _ => {
                prefix.push((rep, step));
                *tail = mapped;
            }
        }
    }

    /// Left-to-right fold of an arbitrary word into (stable prefix, tail).
    fn fold(&self, r: &Runs) -> (Vec<(Runs, i8)>, Runs) {
        let mut prefix: Vec<(Runs, i8)> = Vec::new();
        let mut tail: Runs = Vec::new();
        for &(i, e) in r {
            if i == self.t_index {
                assert!(
                    e.unsigned_abs() <= MAX_T_RUN,
                    "t-run of length {e} exceeds supported range"
                );
                let step: i8 = if e > 0 { 1 } else { -1 };
                for _ in 0..e.unsigned_abs() {
                    self.push_t(&mut prefix, &mut tail, step);
                }
            } else {
                tail = self.base.nf(&runs_concat(&tail, &single_run(i, e)));
            }
        }
        (prefix, tail)
    }

    fn extract(&self, prefix: &[(Runs, i8)], tail: &Runs) -> Runs {
        let mut out: Runs = Vec::new();
        for (rep, eps) in prefix {
            for &(i, e) in rep {
                push_run(&mut out, i, e);
            }
            push_run(&mut out, self.t_index, *eps as i128);
        }
        for &(i, e) in tail {
            push_run(&mut out, i, e);
        }
        out
    }

    fn has_t(&self, r: &Runs) -> bool {
        r.iter().any(|&(i, _)| i == self.t_index)
    }
}

impl<B: BaseGroup> GroupEngine for HnnEngine<B> {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn spec(&self) -> &str {
        &self.spec
    }

    fn nf(&self, r: &Runs) -> Runs {
        let (prefix, tail) = self.fold(r);
        self.extract(&prefix, &tail)
    }

    fn relations(&self) -> Vec<(Word, Word)> {
        self.relations.clone()
    }

    fn britton(&self, r: &Runs) -> Option<BrittonForm> {
        let (prefix, tail) = self.fold(r);
        Some(BrittonForm {
            word: self.extract(&prefix, &tail),
            t_length: prefix.len() as u32,
        })
    }

    fn base_generator_indexes(&self) -> Option<Vec<usize>> {
        Some(self.base.base_indexes())
    }

    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        let t_index = self.t_index;
        match spec {
            SubgroupSpec::Base => Some(Box::new(move |g: &Runs| {
                Membership::from_bool(!g.iter().any(|&(i, _)| i == t_index))
            })),
            SubgroupSpec::CyclicSpan(w) => {
                let w = self.nf(&self.alphabet.parse_runs(w).ok()?);
                if self.has_t(&w) {
                    return None;
                }
                let rule = self.base.cyclic_rule(&w)?;
                Some(Box::new(move |g: &Runs| {
                    if g.iter().any(|&(i, _)| i == t_index) {
                        return Membership::No;
                    }
                    Membership::from_bool(rule(g))
                }))
            }
            SubgroupSpec::AbelianSpan(ws) => {
                let mut base_words = Vec::new();
                for w in ws {
                    let w = self.nf(&self.alphabet.parse_runs(w).ok()?);
                    if self.has_t(&w) {
                        return None;
                    }
                    base_words.push(w);
                }
                let rule = self.base.span_rule(&base_words)?;
                Some(Box::new(move |g: &Runs| {
                    if g.iter().any(|&(i, _)| i == t_index) {
                        return Membership::No;
                    }
                    Membership::from_bool(rule(g))
                }))
            }
            _ => None,
        }
    }

    fn coset_rule(&self, spec: &SubgroupSpec) -> Option<Box<dyn CosetRule>> {
        self.base.coset_rule(spec, self.t_index, &self.alphabet)
    }
}

/// Cyclic base ⟨x⟩ with A = ⟨x^m⟩, B = ⟨x^n⟩, φ(x^m) = x^n: plugging this in
/// yields the full Baumslag–Solitar family BS(m,n).
pub struct ZPowers {
    pub x_index: usize,
    pub m: i128,
    pub n: i128,
}

impl ZPowers {
    fn exp(&self, h: &Runs) -> i128 {
        let mut e: i128 = 0;
        for &(i, k) in h {
            assert_eq!(i, self.x_index, "letter outside the cyclic base");
            e = e.checked_add(k).expect("exponent overflow");
        }
        e
    }

    fn enc(&self, e: i128) -> Runs {
        if e == 0 {
            Vec::new()
        } else {
            single_run(self.x_index, e)
        }
    }
}

impl BaseGroup for ZPowers {
    fn base_indexes(&self) -> Vec<usize> {
        vec![self.x_index]
    }

    fn nf(&self, r: &Runs) -> Runs {
        self.enc(self.exp(r))
    }

    fn in_assoc(&self, h: &Runs) -> bool {
        self.exp(h) % self.m == 0
    }

    fn in_image(&self, h: &Runs) -> bool {
        self.exp(h) % self.n == 0
    }

    fn phi(&self, a: &Runs) -> Runs {
        let k = self.exp(a) / self.m;
        self.enc(k.checked_mul(self.n).expect("exponent overflow"))
    }

    fn phi_inv(&self, b: &Runs) -> Runs {
        let k = self.exp(b) / self.n;
        self.enc(k.checked_mul(self.m).expect("exponent overflow"))
    }

    fn rep_assoc(&self, h: &Runs) -> (Runs, Runs) {
        let e = self.exp(h);
        let r = e.rem_euclid(self.m);
        (self.enc(r), self.enc(e - r))
    }

    fn rep_image(&self, h: &Runs) -> (Runs, Runs) {
        let e = self.exp(h);
        let r = e.rem_euclid(self.n);
        (self.enc(r), self.enc(e - r))
    }

    fn cyclic_rule(&self, w: &Runs) -> Option<BaseRule> {
        let p = self.exp(w);
        let x_index = self.x_index;
        Some(Box::new(move |g: &Runs| {
            let mut e: i128 = 0;
            for &(i, k) in g {
                if i != x_index {
                    return false;
                }
                e += k;
            }
            if p == 0 {
                e == 0
            } else {
                e % p == 0
            }
        }))
    }

    fn span_rule(&self, ws: &[Runs]) -> Option<BaseRule> {
        let mut d: i128 = 0;
        for w in ws {
            d = num_integer::gcd(d, self.exp(w));
        }
        let x_index = self.x_index;
        Some(Box::new(move |g: &Runs| {
            let mut e: i128 = 0;
            for &(i, k) in g {
                if i != x_index {
                    return false;
                }
                e += k;
            }
            if d == 0 {
                e == 0
            } else {
                e % d == 0
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupHandle;
    use crate::words::GeneratorSymbol;

    fn bs(m: i128, n: i128) -> GroupHandle {
        let alphabet = Alphabet::new(vec!["t", "x"]);
        let base = Arc::new(ZPowers {
            x_index: 1,
            m,
            n,
        });
        let left = Word(vec![
            GeneratorSymbol::negative(0),
            GeneratorSymbol::positive(1),
            GeneratorSymbol::positive(0),
        ]);
        // Relation rendered for m = 1 only in these tests; catalog builds the
        // general t^-1 x^m t = x^n form.
        let right = Word(vec![GeneratorSymbol::positive(1); n.unsigned_abs() as usize]);
        GroupHandle::from_engine(Arc::new(HnnEngine::new(
            alphabet,
            0,
            base,
            format!("bs-britton:{m},{n}"),
            if m == 1 { vec![(left, right)] } else { Vec::new() },
        )))
    }

    #[test]
    fn britton_pinches_match_defining_relation() {
        let g = bs(1, 2);
        assert!(g.equal(&g.parse("t^-1 x t").unwrap(), &g.parse("x^2").unwrap()));
        assert!(g.equal(&g.parse("t x^2 t^-1").unwrap(), &g.parse("x").unwrap()));
        // t x t^-1 stays length three: the pinch needs an even power.
        let b = g
            .britton(&g.parse_runs("t x t^-1").unwrap())
            .expect("HNN engines expose stable-letter forms");
        assert_eq!(b.t_length, 2);
        assert!(g.is_identity(&g.parse_runs("t x t^-1 t x^-1 t^-1").unwrap()));
    }

    #[test]
    fn bs23_normal_forms() {
        let g = bs(2, 3);
        assert!(g.equal(&g.parse("t^-1 x^2 t").unwrap(), &g.parse("x^3").unwrap()));
        assert!(g.equal(&g.parse("t x^3 t^-1").unwrap(), &g.parse("x^2").unwrap()));
        // x t: no pinch, rep of xA is x (A = ⟨x^2⟩).
        assert_eq!(g.key(&g.parse_runs("x^3 t").unwrap()), "x t x^3");
        // Stable-letter count survives non-pinchable conjugation.
        let form = g.britton(&g.parse_runs("t^-1 x t").unwrap()).unwrap();
        assert_eq!(form.t_length, 2);
    }

    #[test]
    fn exact_rules_from_the_cyclic_base() {
        let g = bs(1, 2);
        let h = crate::subgroup::subgroup_of(&g, "cyclic-span:x^4", None).unwrap();
        assert!(h.membership(&g.parse("x^-12").unwrap()).is_yes());
        assert!(h.membership(&g.parse("x^2").unwrap()).is_no());
        assert!(h.membership(&g.parse("t x^4 t^-1").unwrap()).is_no());
        let base = crate::subgroup::subgroup_of(&g, "base", None).unwrap();
        assert!(base.membership(&g.parse("t x^2 t^-1").unwrap()).is_yes());
        assert!(base.membership(&g.parse("t x t^-1").unwrap()).is_no());
    }
}
