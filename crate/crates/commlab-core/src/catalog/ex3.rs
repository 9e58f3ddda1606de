//! The HNN extension ⟨x, y, t | x² = y², t⁻¹ x² t = x⁴⟩ over the Klein-bottle
//! group K = ⟨x, y | x² = y²⟩.
//!
//! Writing z = x² (central in K: x z x⁻¹ = z and y z y⁻¹ = y·y²·y⁻¹ = z),
//! every element of K is uniquely z^a · s with s an alternating positive word
//! in x, y. The stable letter conjugates A = ⟨z⟩ onto B = ⟨z²⟩ by z ↦ z².

use crate::catalog::hnn::{BaseGroup, BaseRule};
use crate::group::CosetRule;
use crate::subgroup::SubgroupSpec;
use crate::words::{push_run, Alphabet, Runs};

pub struct KleinBase {
    pub x_index: usize,
    pub y_index: usize,
}

impl KleinBase {
    /// Folds a base word into (central exponent a, alternating word s).
    ///
    /// Each letter run g^e splits as z^⌊e/2⌋ · g^{e mod 2} since g² = z for
    /// both generators; a trailing single letter then cancels or extends the
    /// alternating part.
    pub fn decode(&self, r: &Runs) -> (i128, Vec<usize>) {
        let mut a: i128 = 0;
        let mut s: Vec<usize> = Vec::new();
        for &(i, e) in r {
            assert!(
                i == self.x_index || i == self.y_index,
                "letter index {i} outside the Klein-bottle base"
            );
            a = a.checked_add(e.div_euclid(2)).expect("exponent overflow");
            if e.rem_euclid(2) == 1 {
                if s.last() == Some(&i) {
                    s.pop();
                    a += 1;
                } else {
                    s.push(i);
                }
            }
        }
        (a, s)
    }

    pub fn encode(&self, a: i128, s: &[usize]) -> Runs {
        let mut out: Runs = Vec::new();
        push_run(
            &mut out,
            self.x_index,
            a.checked_mul(2).expect("exponent overflow"),
        );
        for &g in s {
            push_run(&mut out, g, 1);
        }
        out
    }
}

impl BaseGroup for KleinBase {
    fn base_indexes(&self) -> Vec<usize> {
        vec![self.x_index, self.y_index]
    }

    fn nf(&self, r: &Runs) -> Runs {
        let (a, s) = self.decode(r);
        self.encode(a, &s)
    }

    fn in_assoc(&self, h: &Runs) -> bool {
        let (_, s) = self.decode(h);
        s.is_empty()
    }

    fn in_image(&self, h: &Runs) -> bool {
        let (a, s) = self.decode(h);
        s.is_empty() && a % 2 == 0
    }

    fn phi(&self, a: &Runs) -> Runs {
        let (c, s) = self.decode(a);
        debug_assert!(s.is_empty());
        self.encode(c * 2, &[])
    }

    fn phi_inv(&self, b: &Runs) -> Runs {
        let (c, s) = self.decode(b);
        debug_assert!(s.is_empty() && c % 2 == 0);
        self.encode(c / 2, &[])
    }

    fn rep_assoc(&self, h: &Runs) -> (Runs, Runs) {
        let (a, s) = self.decode(h);
        (self.encode(0, &s), self.encode(a, &[]))
    }

    fn rep_image(&self, h: &Runs) -> (Runs, Runs) {
        let (a, s) = self.decode(h);
        let r = a.rem_euclid(2);
        (self.encode(r, &s), self.encode(a - r, &[]))
    }

    fn cyclic_rule(&self, w: &Runs) -> Option<BaseRule> {
        let (c, sw) = self.decode(w);
        let me = KleinBase {
            x_index: self.x_index,
            y_index: self.y_index,
        };
        if sw.is_empty() {
            // ⟨z^c⟩.
            return Some(Box::new(move |g: &Runs| {
                let (a, s) = me.decode(g);
                s.is_empty() && if c == 0 { a == 0 } else { a % c == 0 }
            }));
        }
        if sw.len() == 1 {
            // w = z^c g₁ with g₁² = z, so w² = z^{2c+1}: even powers are the
            // multiples of z^{2c+1}, odd powers carry a single g₁.
            let g1 = sw[0];
            let modulus = (2 * c + 1).unsigned_abs() as i128;
            return Some(Box::new(move |g: &Runs| {
                let (a, s) = me.decode(g);
                if s.is_empty() {
                    a.rem_euclid(modulus) == 0
                } else {
                    s.len() == 1 && s[0] == g1 && (a - c).rem_euclid(modulus) == 0
                }
            }));
        }
        None
    }

    fn span_rule(&self, ws: &[Runs]) -> Option<BaseRule> {
        // Only central spans get the exact treatment.
        let mut d: i128 = 0;
        for w in ws {
            let (c, s) = self.decode(w);
            if !s.is_empty() {
                return None;
            }
            d = num_integer::gcd(d, c);
        }
        let me = KleinBase {
            x_index: self.x_index,
            y_index: self.y_index,
        };
        Some(Box::new(move |g: &Runs| {
            let (a, s) = me.decode(g);
            s.is_empty() && if d == 0 { a == 0 } else { a % d == 0 }
        }))
    }

    fn coset_rule(
        &self,
        spec: &SubgroupSpec,
        t_index: usize,
        alphabet: &Alphabet,
    ) -> Option<Box<dyn CosetRule>> {
        if let SubgroupSpec::CyclicSpan(w) = spec {
            let w = alphabet.parse_runs(w).ok()?;
            if w.iter().any(|&(i, _)| i == t_index) {
                return None;
            }
            let (c, s) = self.decode(&w);
            // Only the full central subgroup ⟨z⟩ = ⟨x²⟩.
            if s.is_empty() && c.abs() == 1 {
                return Some(Box::new(KleinCentralCosets {
                    base: KleinBase {
                        x_index: self.x_index,
                        y_index: self.y_index,
                    },
                    t_index,
                    alphabet: alphabet.clone(),
                }));
            }
        }
        None
    }
}

/// Cosets g⟨z⟩: the stable prefix of the canonical form is ⟨z⟩-invariant, and
/// the base tail z^a·s matters only through s.
struct KleinCentralCosets {
    base: KleinBase,
    t_index: usize,
    alphabet: Alphabet,
}

impl CosetRule for KleinCentralCosets {
    fn coset_id(&self, g: &Runs) -> String {
        // Split canonical runs after the last stable letter.
        let cut = g
            .iter()
            .rposition(|&(i, _)| i == self.t_index)
            .map(|p| p + 1)
            .unwrap_or(0);
        let (_, s) = self.base.decode(&g[cut..].to_vec());
        let mut id: Runs = g[..cut].to_vec();
        for &(i, e) in &self.base.encode(0, &s) {
            push_run(&mut id, i, e);
        }
        self.alphabet.runs_text(&id)
    }

    fn steps(&self, _g: &Runs) -> Vec<Runs> {
        vec![
            vec![(self.base.x_index, 1)],
            vec![(self.base.x_index, -1)],
            vec![(self.base.y_index, 1)],
            vec![(self.base.y_index, -1)],
            vec![(self.t_index, 1)],
            vec![(self.t_index, -1)],
            vec![(self.base.x_index, 2), (self.t_index, -1)],
        ]
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog::build_group;
    use crate::subgroup::subgroup_of;

    #[test]
    fn klein_bottle_relation_and_centrality() {
        let g = build_group("ex3").unwrap();
        assert!(g.equal(&g.parse("x^2").unwrap(), &g.parse("y^2").unwrap()));
        assert!(g.equal(&g.parse("x^2 y").unwrap(), &g.parse("y x^2").unwrap()));
        assert!(g.equal(&g.parse("x^2 x y").unwrap(), &g.parse("x y x^2").unwrap()));
        assert!(g.equal(&g.parse("y^-1 x^2 y").unwrap(), &g.parse("x^2").unwrap()));
        // Normal forms are idempotent under re-parsing.
        let w = g.parse_runs("y x y x^-1 y^3").unwrap();
        let key = g.key(&w);
        assert_eq!(g.key(&g.parse_runs(&key).unwrap()), key);
    }

    #[test]
    fn stable_letter_conjugation() {
        let g = build_group("ex3").unwrap();
        assert!(g.equal(&g.parse("t^-1 x^2 t").unwrap(), &g.parse("x^4").unwrap()));
        assert!(g.equal(&g.parse("t^-1 y^2 t").unwrap(), &g.parse("x^4").unwrap()));
        assert!(g.equal(&g.parse("t x^4 t^-1").unwrap(), &g.parse("x^2").unwrap()));
        // t x² t⁻¹ does not pinch: x² = z is not in B = ⟨z²⟩.
        let form = g.britton(&g.parse_runs("t x^2 t^-1").unwrap()).unwrap();
        assert_eq!(form.t_length, 2);
    }

    #[test]
    fn base_membership_and_conjugation_correspondence() {
        let g = build_group("ex3").unwrap();
        let base = subgroup_of(&g, "base", None).unwrap();
        for (w, expect) in [
            ("x^4", true),
            ("x^2", true),
            ("x y", true),
            ("t", false),
            ("t^-1 x t", false),
        ] {
            assert_eq!(
                base.membership(&g.parse(w).unwrap()).is_yes(),
                expect,
                "base membership of {w}"
            );
        }
        // t w t⁻¹ lands in the base exactly when w ∈ ⟨x⁴⟩.
        for (w, expect) in [
            ("x^4", true),
            ("x^-8", true),
            ("x^2", false),
            ("x y", false),
            ("y^2", false),
            ("x^4 y", false),
        ] {
            let conj = g.parse_runs(&format!("t {w} t^-1")).unwrap();
            assert_eq!(
                base.membership_runs(&conj).is_yes(),
                expect,
                "t {w} t^-1 in base"
            );
        }
    }

    #[test]
    fn central_coset_ids() {
        let g = build_group("ex3").unwrap();
        let spec = crate::subgroup::parse_subgroup_spec("cyclic-span:x^2").unwrap();
        let rule = g.coset_rule(&spec).expect("exact coset rule");
        let id = |s: &str| rule.coset_id(&g.nf(&g.parse_runs(s).unwrap()));
        assert_eq!(id("x^2"), id("1"));
        assert_eq!(id("x^3"), id("x"));
        assert_eq!(id("y x^2"), id("y"));
        assert_ne!(id("x"), id("y"));
        assert_ne!(id("t"), id("1"));
        // Odd central powers split t⁻¹-cosets in two.
        assert_eq!(id("x^4 t^-1"), id("t^-1"));
        assert_ne!(id("x^2 t^-1"), id("t^-1"));
        assert_eq!(id("x^6 t^-1"), id("x^2 t^-1"));
    }
}
