//! Witness certificates for commensuration.
//!
//! An element g commensurates a subgroup Q when the double coset QgQ is only
//! finitely wide on both sides. The checkable artifact is a **witness**: two
//! finite sets A and B together with maps α, β defined on Q such that
//!
//! * h · α(h) ∈ gQ with α(h) ∈ A for every h ∈ Q, and
//! * g · h · β(h) ∈ Q with β(h) ∈ B for every h ∈ Q.
//!
//! Consequently every element of gQ lies in some Q·c for c ∈ A ∪ B⁻¹, so the
//! finite set A ∪ B⁻¹ ⊆ QgQ certifies that gQ is covered by finitely many
//! right translates of Q. Witnesses are found by bounded greedy search,
//! derived from one another by exact formulas, and always validated by an
//! independent sweep ([`verify_witness`]) that replays nothing from the
//! construction.

use std::sync::Arc;

use crate::error::{CommError, Result};
use crate::exec::Exec;
use crate::graph::{build_ball, BallOptions};
use crate::group::GroupHandle;
use crate::subgroup::{Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, runs_shortlex_cmp, Runs};

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// Subgroup members are sampled out to this radius when searching and
    /// when materializing derived witness sets.
    pub h_ball_radius: usize,
    /// Candidate values for α/β and auxiliary elements are scanned in
    /// shortlex ball order out to this radius.
    pub search_radius: usize,
    /// Give up if a witness set would exceed this size: unbounded growth of
    /// the value set is evidence against commensuration, not a certificate.
    pub max_set_size: usize,
    pub max_vertices: usize,
    pub exec: Exec,
}

impl Default for WitnessOptions {
    fn default() -> WitnessOptions {
        WitnessOptions {
            h_ball_radius: 6,
            search_radius: 6,
            max_set_size: 64,
            max_vertices: 200_000,
            exec: Exec::default(),
        }
    }
}

pub(crate) type ValueMap = Arc<dyn Fn(&Runs) -> Result<Runs> + Send + Sync>;

/// A commensuration certificate for a single element g against a subgroup Q.
/// The maps recompute their answer on every call (no memoized state), so a
/// witness is a pure value that can be verified independently of how it was
/// built. Cloning shares the underlying maps.
#[derive(Clone)]
pub struct Witness {
    pub group: GroupHandle,
    pub q: SubgroupHandle,
    /// Canonical form of the commensurating element.
    pub g: Runs,
    /// Canonical α values, shortlex-sorted.
    pub a_set: Vec<Runs>,
    /// Canonical β values, shortlex-sorted.
    pub b_set: Vec<Runs>,
    /// Largest radius at which [`verify_witness`] has succeeded; 0 while
    /// unverified.
    pub verified_radius: usize,
    alpha: ValueMap,
    beta: ValueMap,
}

impl Witness {
    pub(crate) fn assemble(
        group: GroupHandle,
        q: SubgroupHandle,
        g: Runs,
        mut a_set: Vec<Runs>,
        mut b_set: Vec<Runs>,
        alpha: ValueMap,
        beta: ValueMap,
    ) -> Witness {
        a_set.sort_unstable_by(|x, y| runs_shortlex_cmp(x, y));
        a_set.dedup();
        b_set.sort_unstable_by(|x, y| runs_shortlex_cmp(x, y));
        b_set.dedup();
        Witness {
            group,
            q,
            g,
            a_set,
            b_set,
            verified_radius: 0,
            alpha,
            beta,
        }
    }

    /// Rebuilds a witness from its declared value sets alone, e.g. after a
    /// round trip through a report file. The maps rescan the sets in
    /// shortlex order, so the result verifies exactly when the sets cover.
    pub fn from_sets(
        group: &GroupHandle,
        q: &SubgroupHandle,
        g_elt: &Runs,
        a_set: &[Runs],
        b_set: &[Runs],
    ) -> Witness {
        let g_can = group.nf(g_elt);
        let a_can: Vec<Runs> = a_set.iter().map(|r| group.nf(r)).collect();
        let b_can: Vec<Runs> = b_set.iter().map(|r| group.nf(r)).collect();
        let (alpha, beta) = scan_maps(group, q, &g_can, &a_can, &b_can);
        Witness::assemble(group.clone(), q.clone(), g_can, a_can, b_can, alpha, beta)
    }

    /// α(h): a value a with h·a ∈ gQ.
    pub fn alpha(&self, h: &Runs) -> Result<Runs> {
        (self.alpha)(h)
    }

    /// β(h): a value b with g·h·b ∈ Q.
    pub fn beta(&self, h: &Runs) -> Result<Runs> {
        (self.beta)(h)
    }

    /// The finite covering set A ∪ B⁻¹ ⊆ QgQ, canonical and sorted.
    pub fn covering_set(&self) -> Vec<Runs> {
        let mut out = self.a_set.clone();
        for b in &self.b_set {
            out.push(self.group.nf(&runs_inverse(b)));
        }
        out.sort_unstable_by(|x, y| runs_shortlex_cmp(x, y));
        out.dedup();
        out
    }

    pub fn describe(&self) -> String {
        let ab = self.group.alphabet();
        let fmt = |set: &[Runs]| {
            set.iter()
                .map(|r| ab.runs_text(r))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "g = {} | A = {{{}}} | B = {{{}}} | verified to {}",
            ab.runs_text(&self.g),
            fmt(&self.a_set),
            fmt(&self.b_set),
            self.verified_radius
        )
    }
}

impl std::fmt::Debug for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Witness({})", self.describe())
    }
}

/// Maps that rescan the declared value sets in shortlex order and return the
/// first value satisfying the defining condition. Used for searched
/// witnesses, where the sets themselves carry all the information.
pub(crate) fn scan_maps(
    group: &GroupHandle,
    q: &SubgroupHandle,
    g_can: &Runs,
    a_set: &[Runs],
    b_set: &[Runs],
) -> (ValueMap, ValueMap) {
    let g_inv = group.nf(&runs_inverse(g_can));
    let alpha = {
        let (group, q, a_set, g_inv) =
            (group.clone(), q.clone(), a_set.to_vec(), g_inv.clone());
        Arc::new(move |h: &Runs| -> Result<Runs> {
            for a in &a_set {
                let w = group.nf(&runs_concat(&g_inv, &runs_concat(h, a)));
                if q.membership_canonical(&w) == Membership::Yes {
                    return Ok(a.clone());
                }
            }
            Err(CommError::AuxiliarySearchFailed(format!(
                "no declared α value works for {}",
                group.alphabet().runs_text(h)
            )))
        }) as ValueMap
    };
    let beta = {
        let (group, q, b_set, g_can) =
            (group.clone(), q.clone(), b_set.to_vec(), g_can.clone());
        Arc::new(move |h: &Runs| -> Result<Runs> {
            for b in &b_set {
                let w = group.nf(&runs_concat(&g_can, &runs_concat(h, b)));
                if q.membership_canonical(&w) == Membership::Yes {
                    return Ok(b.clone());
                }
            }
            Err(CommError::AuxiliarySearchFailed(format!(
                "no declared β value works for {}",
                group.alphabet().runs_text(h)
            )))
        }) as ValueMap
    };
    (alpha, beta)
}

/// Greedy bounded search for a witness: for each subgroup member h in the
/// sample ball, take the shortlex-first candidate value that satisfies the
/// defining condition, and pool the values found. Fails loudly when some h
/// has no in-radius value or the pooled sets keep growing past the cap.
pub fn search_witness(
    q: &SubgroupHandle,
    g_elt: &Runs,
    opts: &WitnessOptions,
) -> Result<Witness> {
    let group = q.ambient().clone();
    let g_can = group.nf(g_elt);
    let g_inv = group.nf(&runs_inverse(&g_can));
    let radius = opts.h_ball_radius.max(opts.search_radius);
    let ball = build_ball(
        &group,
        radius,
        &BallOptions {
            exec: opts.exec,
            max_vertices: opts.max_vertices,
        },
    )?;

    let mut members: Vec<&Runs> = Vec::new();
    for e in 0..ball.len() as u32 {
        if ball.dist(e) as usize > opts.h_ball_radius {
            break;
        }
        if q.membership_canonical(ball.elem(e)) == Membership::Yes {
            members.push(ball.elem(e));
        }
    }

    // Candidate values in ball order (distance, then shortlex).
    let n_candidates = ball.layer(opts.search_radius).end;
    let searches: Vec<Result<(Runs, Runs)>> = opts.exec.map(&members, |h| {
        let mut alpha_val = None;
        let mut beta_val = None;
        for c in 0..n_candidates as u32 {
            let u = ball.elem(c);
            if alpha_val.is_none() {
                let w = group.nf(&runs_concat(&g_inv, &runs_concat(h, u)));
                if q.membership_canonical(&w) == Membership::Yes {
                    alpha_val = Some(u.clone());
                }
            }
            if beta_val.is_none() {
                let w = group.nf(&runs_concat(&g_can, &runs_concat(h, u)));
                if q.membership_canonical(&w) == Membership::Yes {
                    beta_val = Some(u.clone());
                }
            }
            if alpha_val.is_some() && beta_val.is_some() {
                break;
            }
        }
        match (alpha_val, beta_val) {
            (Some(a), Some(b)) => Ok((a, b)),
            (a, _) => Err(CommError::AuxiliarySearchFailed(format!(
                "no {} value within radius {} for member {}",
                if a.is_none() { "α" } else { "β" },
                opts.search_radius,
                group.alphabet().runs_text(h)
            ))),
        }
    });

    let mut a_set = Vec::new();
    let mut b_set = Vec::new();
    for s in searches {
        let (a, b) = s?;
        if !a_set.contains(&a) {
            a_set.push(a);
        }
        if !b_set.contains(&b) {
            b_set.push(b);
        }
        if a_set.len() > opts.max_set_size || b_set.len() > opts.max_set_size {
            return Err(CommError::AuxiliarySearchFailed(format!(
                "witness sets exceeded {} values; the double coset looks too wide for \
                 a certificate at this budget",
                opts.max_set_size
            )));
        }
    }

    let (alpha, beta) = scan_maps(&group, q, &g_can, &a_set, &b_set);
    let mut w = Witness::assemble(group, q.clone(), g_can, a_set, b_set, alpha, beta);
    if let VerifyOutcome::Verified = verify_witness(&w, opts.h_ball_radius, opts)? {
        w.verified_radius = opts.h_ball_radius;
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Verified,
    /// The certificate failed on a concrete element.
    Counterexample { element: String, reason: String },
}

/// Independent validation sweep over the radius-R ball:
///
/// 1. every subgroup member h has α(h) ∈ A with h·α(h) ∈ gQ,
/// 2. every subgroup member h has β(h) ∈ B with g·h·β(h) ∈ Q,
/// 3. every element of gQ in the ball lies in Q·c for some c ∈ A ∪ B⁻¹.
///
/// Any membership that comes back unknown aborts with an error: a certificate
/// is only as good as its memberships are decidable.
pub fn verify_witness(w: &Witness, radius: usize, opts: &WitnessOptions) -> Result<VerifyOutcome> {
    let group = &w.group;
    let ball = build_ball(
        group,
        radius,
        &BallOptions {
            exec: opts.exec,
            max_vertices: opts.max_vertices,
        },
    )?;
    let g_inv = group.nf(&runs_inverse(&w.g));
    let covering = w.covering_set();

    let decide = |r: &Runs| -> Result<bool> {
        match w.q.membership_canonical(r) {
            Membership::Yes => Ok(true),
            Membership::No => Ok(false),
            Membership::Unknown { budget } => Err(CommError::MembershipUnknown { budget }),
        }
    };

    let elems: Vec<u32> = (0..ball.len() as u32).collect();
    let checks: Vec<Result<Option<VerifyOutcome>>> = opts.exec.map(&elems, |&e| {
        let u = ball.elem(e);
        let text = || group.alphabet().runs_text(u);
        if decide(u)? {
            // u is a subgroup member: both maps must produce working values
            // from the declared sets.
            let a = match w.alpha(u) {
                Ok(a) => a,
                Err(err) => {
                    return Ok(Some(VerifyOutcome::Counterexample {
                        element: text(),
                        reason: format!("α failed: {err}"),
                    }))
                }
            };
            if !w.a_set.contains(&a) {
                return Ok(Some(VerifyOutcome::Counterexample {
                    element: text(),
                    reason: "α value escapes the declared finite set".to_string(),
                }));
            }
            if !decide(&group.nf(&runs_concat(&g_inv, &runs_concat(u, &a))))? {
                return Ok(Some(VerifyOutcome::Counterexample {
                    element: text(),
                    reason: "h·α(h) is not in gQ".to_string(),
                }));
            }
            let b = match w.beta(u) {
                Ok(b) => b,
                Err(err) => {
                    return Ok(Some(VerifyOutcome::Counterexample {
                        element: text(),
                        reason: format!("β failed: {err}"),
                    }))
                }
            };
            if !w.b_set.contains(&b) {
                return Ok(Some(VerifyOutcome::Counterexample {
                    element: text(),
                    reason: "β value escapes the declared finite set".to_string(),
                }));
            }
            if !decide(&group.nf(&runs_concat(&w.g, &runs_concat(u, &b))))? {
                return Ok(Some(VerifyOutcome::Counterexample {
                    element: text(),
                    reason: "g·h·β(h) is not in Q".to_string(),
                }));
            }
        }
        // Coverage: elements of gQ must lie in ∪ Q·c.
        if decide(&group.nf(&runs_concat(&g_inv, u)))? {
            let mut covered = false;
            for c in &covering {
                let probe = group.nf(&runs_concat(u, &group.nf(&runs_inverse(c))));
                if decide(&probe)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Ok(Some(VerifyOutcome::Counterexample {
                    element: text(),
                    reason: "element of gQ not covered by Q·(A ∪ B⁻¹)".to_string(),
                }));
            }
        }
        Ok(None)
    });

    for c in checks {
        if let Some(bad) = c? {
            return Ok(bad);
        }
    }
    Ok(VerifyOutcome::Verified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;
    use crate::subgroup::subgroup_of;

    fn opts() -> WitnessOptions {
        WitnessOptions {
            exec: Exec::Seq,
            ..WitnessOptions::default()
        }
    }

    #[test]
    fn doubling_element_witness_is_tiny() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let w = search_witness(&q, &t, &opts()).unwrap();
        assert_eq!(w.verified_radius, 6);
        // Every x^k·t lands in t⟨x⟩ via the single value t.
        let names: Vec<String> = w
            .a_set
            .iter()
            .map(|r| g.alphabet().runs_text(r))
            .collect();
        assert_eq!(names, vec!["t"]);
        assert!(w.b_set.len() <= 2, "{:?}", w.describe());
        // Maps work pointwise on a deep member.
        let h = g.parse_runs("x^9").unwrap();
        let a = w.alpha(&h).unwrap();
        let probe = g.nf(&runs_concat(
            &g.nf(&runs_inverse(&w.g)),
            &runs_concat(&h, &a),
        ));
        assert_eq!(q.membership_canonical(&probe), Membership::Yes);
    }

    #[test]
    fn subgroup_element_witnesses_itself() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let x = g.parse_runs("x").unwrap();
        let w = search_witness(&q, &x, &opts()).unwrap();
        assert_eq!(w.verified_radius, 6);
        // x⟨x⟩ = ⟨x⟩: the identity value suffices in both directions.
        assert_eq!(w.a_set, vec![Vec::new()]);
        assert_eq!(w.b_set, vec![Vec::new()]);
    }

    #[test]
    fn non_commensurating_element_is_rejected() {
        let g = build_group("free:2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let y = g.parse_runs("y").unwrap();
        // y⟨x⟩ ∩ ⟨x⟩-translates: each x^k needs its own value x^-k·y·x^j, so
        // the pooled set blows past any cap.
        let err = search_witness(&q, &y, &opts()).unwrap_err();
        assert!(matches!(err, CommError::AuxiliarySearchFailed(_)), "{err}");
    }

    #[test]
    fn verify_rejects_a_doctored_witness() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let w = search_witness(&q, &t, &opts()).unwrap();
        // Rebuild the witness with a truncated β set: the scan maps lose the
        // value that handles odd powers.
        let (alpha, beta) = scan_maps(&g, &q, &w.g, &w.a_set, &w.b_set[..1].to_vec());
        let doctored = Witness::assemble(
            g.clone(),
            q.clone(),
            w.g.clone(),
            w.a_set.clone(),
            w.b_set[..1].to_vec(),
            alpha,
            beta,
        );
        let out = verify_witness(&doctored, 6, &opts()).unwrap();
        assert!(matches!(out, VerifyOutcome::Counterexample { .. }), "{out:?}");
    }

    #[test]
    fn klein_bottle_center_has_witness_for_stable_letter() {
        // In ex3 the center ⟨x²⟩ of the base is commensurated by t:
        // t⁻¹x²t = x⁴ on one side, and x² pulls back to x alternately.
        let g = build_group("ex3").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x^2", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let mut o = opts();
        o.h_ball_radius = 5;
        o.search_radius = 5;
        let w = search_witness(&q, &t, &o).unwrap();
        assert_eq!(w.verified_radius, 5);
    }
}
