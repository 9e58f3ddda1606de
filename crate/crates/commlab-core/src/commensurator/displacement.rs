//! The displacement constant and the inequalities it buys.
//!
//! Once every generator's coset profile plateaus, the plateau maximum plus
//! one — written k throughout — bounds how far multiplication can move
//! cosets of Q: D(bQ, Q) ≤ k·|b|, D(bQb⁻¹, Q) ≤ (k+1)·|b|, D(QbQ, Q) ≤ k·|b|
//! and D(QbQ, bQ) ≤ 2k·|b|. The last inequality is exactly the defect bound
//! that makes g ↦ gQ a quasi-homomorphism, so this module also measures the
//! per-pair defect D(aQbQ, abQ) and checks the kernel/invariant-set identity
//! of that map on a ball.
//!
//! All measured numbers are windowed lower bounds for suprema over infinite
//! sets; the reports carry exactness flags and the windows used.

use std::collections::BTreeSet;

use crate::error::{CommError, Result};
use crate::graph::{build_ball, Ball, BallOptions};
use crate::group::GroupHandle;
use crate::subgroup::{parse_subgroup_spec, Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, runs_len, Runs};

use super::profile::{
    conjugate_pred, coset_profile, left_coset_pred, metric_steps, profile_over_sources,
    sources_in_ball, subgroup_pred, ProfileOptions,
};
use super::GrowthVerdict;

/// Double-coset sweeps multiply member pairs; more members only widen the
/// certified lower bounds, so the sweep is capped rather than exhaustive.
const MAX_SWEEP_MEMBERS: usize = 1024;

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    /// (signed generator, plateau value of its coset profile).
    pub per_generator: Vec<(String, u32)>,
    /// Displacement constant: max plateau + 1.
    pub k: u32,
    pub tainted: bool,
}

/// Computes the displacement constant k from the generator coset profiles.
/// Every signed generator must have a certified plateau; a growing or
/// inconclusive generator profile means no finite k exists at this window.
pub fn stabilization_constant(
    q: &SubgroupHandle,
    opts: &ProfileOptions,
) -> Result<StabilizationReport> {
    let g = q.ambient().clone();
    let steps = metric_steps(&g, &opts.metric_gens);
    let mut per_generator = Vec::new();
    let mut tainted = false;
    let mut max_d = 0u32;
    for step in steps {
        let name = g.alphabet().runs_text(&step);
        let p = coset_profile(q, &step, opts)?;
        if p.verdict != GrowthVerdict::Bounded {
            return Err(CommError::ProfileNotStabilized(format!(
                "coset profile of generator {} reads {} over radii 0..={} (values {:?}); \
                 no displacement constant is certified at this window",
                name,
                p.verdict.name(),
                opts.r_max,
                p.lower_bounds
            )));
        }
        let (value, _) = p.last();
        tainted |= p.tainted;
        max_d = max_d.max(value);
        per_generator.push((name, value));
    }
    Ok(StabilizationReport {
        per_generator,
        k: max_d + 1,
        tainted,
    })
}

/// Word-metric norm of an element, read off the reference ball.
fn word_norm(g: &GroupHandle, ball: &Ball, w: &Runs) -> Result<u32> {
    ball.get(w).map(|id| ball.dist(id)).ok_or_else(|| {
        CommError::InvalidSpec(format!(
            "element {} lies outside the radius-{} sampling ball",
            g.alphabet().runs_text(w),
            ball.radius
        ))
    })
}

fn ball_opts(opts: &ProfileOptions) -> BallOptions {
    BallOptions {
        exec: opts.exec,
        max_vertices: opts.max_vertices,
    }
}

/// Elements of `prefix·Q·b·Q` inside the ball, tagged with their norms.
/// Products sweep member pairs of Q drawn from the same ball; products that
/// leave the ball are outside the window and dropped.
fn double_coset_sources(
    q: &SubgroupHandle,
    prefix: Option<&Runs>,
    b: &Runs,
    ball: &Ball,
) -> (Vec<(u32, Runs)>, bool) {
    let g = q.ambient();
    let mut members = Vec::new();
    let mut tainted = false;
    for e in 0..ball.len() as u32 {
        match q.membership_canonical(ball.elem(e)) {
            Membership::Yes => {
                if members.len() == MAX_SWEEP_MEMBERS {
                    tainted = true;
                    break;
                }
                members.push(ball.elem(e).clone());
            }
            Membership::No => {}
            Membership::Unknown { .. } => tainted = true,
        }
    }
    let mut ids = BTreeSet::new();
    for q1 in &members {
        let head = match prefix {
            Some(p) => g.mul(p, q1),
            None => q1.clone(),
        };
        let head = g.mul(&head, b);
        for q2 in &members {
            if let Some(id) = ball.get(&g.mul(&head, q2)) {
                ids.insert(id);
            }
        }
    }
    let sources = ids
        .into_iter()
        .map(|id| (ball.dist(id), ball.elem(id).clone()))
        .collect();
    (sources, tainted)
}

#[derive(Clone, Debug)]
pub struct DisplacementCheck {
    /// Which inequality this row measures.
    pub label: &'static str,
    /// Windowed lower bound for the left-hand Hausdorff distance.
    pub measured: u32,
    /// Whether every source distance was resolved exactly.
    pub exact: bool,
    /// Right-hand side k-multiple of |b|.
    pub bound: u32,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct DisplacementReport {
    pub element: String,
    pub norm: u32,
    pub k: u32,
    pub checks: Vec<DisplacementCheck>,
    pub all_hold: bool,
    pub tainted: bool,
}

/// Measures the four displacement inequalities for a single element b.
/// A measured value is a certified lower bound, so `holds == false` is a
/// genuine violation; `holds == true` with `exact == false` is evidence
/// within the window only.
pub fn displacement_checks(
    q: &SubgroupHandle,
    b: &Runs,
    k: u32,
    opts: &ProfileOptions,
) -> Result<DisplacementReport> {
    let g = q.ambient().clone();
    let b_can = g.nf(b);
    let radius = opts.r_max.max(runs_len(&b_can) as usize);
    let ball = build_ball(&g, radius, &ball_opts(opts))?;
    let norm = word_norm(&g, &ball, &b_can)?;
    let mut tainted = false;
    let mut checks = Vec::new();

    // 1. D(bQ, Q) ≤ k|b|, both directions.
    {
        let coset = left_coset_pred(q, &b_can);
        let sub = subgroup_pred(q);
        let p = super::profile::symmetric_profile(&g, &coset, &sub, opts)?;
        tainted |= p.tainted;
        let (measured, exact) = p.last();
        let bound = k * norm;
        checks.push(DisplacementCheck {
            label: "coset-vs-subgroup",
            measured,
            exact,
            bound,
            holds: measured <= bound,
        });
    }

    // 2. D(bQb⁻¹, Q) ≤ (k+1)|b|, both directions.
    {
        let conj = conjugate_pred(q, &b_can);
        let sub = subgroup_pred(q);
        let p = super::profile::symmetric_profile(&g, &conj, &sub, opts)?;
        tainted |= p.tainted;
        let (measured, exact) = p.last();
        let bound = (k + 1) * norm;
        checks.push(DisplacementCheck {
            label: "conjugate-vs-subgroup",
            measured,
            exact,
            bound,
            holds: measured <= bound,
        });
    }

    // 3 and 4. The double coset QbQ against Q and against bQ; QbQ is swept
    // as an explicit source list since it is not a cheap predicate.
    let (sources, sweep_taint) = double_coset_sources(q, None, &b_can, &ball);
    tainted |= sweep_taint;
    {
        let sub = subgroup_pred(q);
        let p = profile_over_sources(&g, &sources, &sub, opts, sweep_taint)?;
        tainted |= p.tainted;
        let (measured, exact) = p.last();
        let bound = k * norm;
        checks.push(DisplacementCheck {
            label: "double-coset-vs-subgroup",
            measured,
            exact,
            bound,
            holds: measured <= bound,
        });
    }
    {
        let coset = left_coset_pred(q, &b_can);
        let p = profile_over_sources(&g, &sources, &coset, opts, sweep_taint)?;
        tainted |= p.tainted;
        let (measured, exact) = p.last();
        let bound = 2 * k * norm;
        checks.push(DisplacementCheck {
            label: "double-coset-vs-coset",
            measured,
            exact,
            bound,
            holds: measured <= bound,
        });
    }

    let all_hold = checks.iter().all(|c| c.holds);
    Ok(DisplacementReport {
        element: g.alphabet().runs_text(&b_can),
        norm,
        k,
        checks,
        all_hold,
        tainted,
    })
}

#[derive(Clone, Debug)]
pub struct DefectReport {
    pub a: String,
    pub b: String,
    pub norm_b: u32,
    /// Windowed lower bound for D(aQbQ, abQ).
    pub measured: u32,
    pub exact: bool,
    /// 2k|b|.
    pub bound: u32,
    pub holds: bool,
    pub tainted: bool,
}

/// Defect of the coset product at a pair (a, b): how far the set (aQ)(bQ)
/// strays from the single coset abQ. Bounded by 2k|b| exactly when the
/// coset map is a quasi-homomorphism.
pub fn product_defect(
    q: &SubgroupHandle,
    a: &Runs,
    b: &Runs,
    k: u32,
    opts: &ProfileOptions,
) -> Result<DefectReport> {
    let g = q.ambient().clone();
    let a_can = g.nf(a);
    let b_can = g.nf(b);
    let ab = g.mul(&a_can, &b_can);
    let radius = opts
        .r_max
        .max(runs_len(&b_can) as usize)
        .max(runs_len(&a_can) as usize);
    let ball = build_ball(&g, radius, &ball_opts(opts))?;
    let norm_b = word_norm(&g, &ball, &b_can)?;

    let (sources, sweep_taint) = double_coset_sources(q, Some(&a_can), &b_can, &ball);
    let target = left_coset_pred(q, &ab);
    let p = profile_over_sources(&g, &sources, &target, opts, sweep_taint)?;
    let (measured, exact) = p.last();
    let bound = 2 * k * norm_b;
    Ok(DefectReport {
        a: g.alphabet().runs_text(&a_can),
        b: g.alphabet().runs_text(&b_can),
        norm_b,
        measured,
        exact,
        bound,
        holds: measured <= bound,
        tainted: p.tainted,
    })
}

#[derive(Clone, Debug)]
pub struct InvariantSetReport {
    pub radius: usize,
    pub members: usize,
    /// Products g·q checked for coset agreement with g.
    pub products_checked: usize,
    /// Non-members whose coset separated from the base coset.
    pub outsiders_separated: usize,
    pub holds: bool,
    pub tainted: bool,
}

/// Kernel/invariant-set identity for the coset map g ↦ gQ on a ball: every
/// member q of Q leaves every coset fixed (gqQ = gQ for all sampled g), and
/// every non-member y is separated from the base coset (yQ ≠ Q). With an
/// exact coset rule this cross-validates the rule against the membership
/// oracle; otherwise cosets are compared through membership directly.
pub fn invariant_set_check(
    q: &SubgroupHandle,
    radius: usize,
    opts: &ProfileOptions,
) -> Result<InvariantSetReport> {
    let g = q.ambient().clone();
    let ball = build_ball(&g, radius, &ball_opts(opts))?;
    let rule = parse_subgroup_spec(q.spec_text())
        .ok()
        .and_then(|spec| g.coset_rule(&spec));

    let coset_key = |w: &Runs| -> Result<String> {
        if let Some(rule) = &rule {
            return Ok(rule.coset_id(w));
        }
        // Pairing fallback: name the coset after its first ball element.
        for e in 0..ball.len() as u32 {
            let v = ball.elem(e);
            let probe = g.nf(&runs_concat(&runs_inverse(v), w));
            match q.membership_canonical(&probe) {
                Membership::Yes => return Ok(g.key(v)),
                Membership::No => {}
                Membership::Unknown { budget } => {
                    return Err(CommError::MembershipUnknown { budget })
                }
            }
        }
        Ok(g.key(w))
    };

    let (members, tainted) = sources_in_ball(&ball, radius, &subgroup_pred(q));
    let mut products_checked = 0usize;
    let mut outsiders_separated = 0usize;
    let mut holds = true;

    let base_key = coset_key(&Runs::new())?;
    for e in 0..ball.len() as u32 {
        let w = ball.elem(e);
        let key_w = coset_key(w)?;
        for (_, m) in &members {
            let key_prod = coset_key(&g.mul(w, m))?;
            products_checked += 1;
            if key_prod != key_w {
                holds = false;
            }
        }
        if q.membership_canonical(w) == Membership::No {
            if key_w == base_key {
                holds = false;
            } else {
                outsiders_separated += 1;
            }
        }
    }

    Ok(InvariantSetReport {
        radius,
        members: members.len(),
        products_checked,
        outsiders_separated,
        holds,
        tainted,
    })
}
