//! Hausdorff-distance profiles between coset-like sets.
//!
//! The quantity of interest is D(X, Y) = sup over x ∈ X of d(x, Y) in the
//! word metric (and its symmetric max with the other side). Both sets are
//! infinite, so the laboratory reports a *profile*: for each radius r, the
//! largest distance seen from a source in X ∩ B_r, together with whether the
//! value is exact or only a certified lower bound. A subgroup stays within
//! bounded Hausdorff distance of its translate gQ iff the profile plateaus;
//! unbounded straying shows up as a growing sequence of exact lower bounds.

use std::collections::{HashMap, VecDeque};

use crate::error::{CommError, Result};
use crate::exec::Exec;
use crate::group::GroupHandle;
use crate::subgroup::{Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, runs_len, word_to_runs, Runs, Word};

use super::GrowthVerdict;
use crate::graph::{build_ball, letter_steps, Ball, BallOptions};

/// Membership-valued predicate over canonical runs, the common currency for
/// source and target sets.
pub type SetPred<'a> = dyn Fn(&Runs) -> Membership + Sync + 'a;

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// Sources are enumerated in the letter ball of this radius.
    pub r_max: usize,
    /// Distances are certified inside the ball of this radius: a search from
    /// h may take up to (big_radius − |h|)/L steps of length ≤ L.
    pub big_radius: usize,
    pub max_vertices: usize,
    pub exec: Exec,
    /// Alternative metric generators (each counts as one step); `None` means
    /// the group's own letters.
    pub metric_gens: Option<Vec<Word>>,
}

impl Default for ProfileOptions {
    fn default() -> ProfileOptions {
        ProfileOptions {
            r_max: 6,
            big_radius: 14,
            max_vertices: 200_000,
            exec: Exec::default(),
            metric_gens: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HausdorffProfile {
    pub radii: Vec<usize>,
    /// Largest distance from a source in B_r to the target set; always a
    /// valid lower bound for the supremum over the full source set.
    pub lower_bounds: Vec<u32>,
    /// Whether every source in B_r had its distance resolved exactly.
    pub exact: Vec<bool>,
    pub verdict: GrowthVerdict,
    pub tainted: bool,
}

impl HausdorffProfile {
    /// Final (largest-radius) entry.
    pub fn last(&self) -> (u32, bool) {
        (
            *self.lower_bounds.last().unwrap_or(&0),
            *self.exact.last().unwrap_or(&true),
        )
    }
}

pub(crate) fn metric_steps(g: &GroupHandle, metric_gens: &Option<Vec<Word>>) -> Vec<Runs> {
    match metric_gens {
        None => letter_steps(g),
        Some(words) => {
            let mut steps = Vec::new();
            for w in words {
                let r = g.nf(&word_to_runs(w));
                let inv = g.nf(&runs_inverse(&r));
                if !r.is_empty() && !steps.contains(&r) {
                    steps.push(r);
                }
                if !inv.is_empty() && !steps.contains(&inv) {
                    steps.push(inv);
                }
            }
            steps
        }
    }
}

/// Distance from `h` to the target set by breadth-first search, abandoned
/// after `cap` steps. `Ok((d, true))` is the exact distance; `Ok((lb, false))`
/// means every point within `cap` steps was tested negative, so the true
/// distance is at least `lb = cap + 1`. The boolean in the error position of
/// the tuple's third slot reports whether an unknown membership was seen.
pub(crate) fn capped_distance(
    g: &GroupHandle,
    target: &SetPred,
    h: &Runs,
    cap: usize,
    steps: &[Runs],
    max_visits: usize,
) -> Result<(u32, bool, bool)> {
    let mut tainted = false;
    let mut probe = |w: &Runs| -> bool {
        match target(w) {
            Membership::Yes => true,
            Membership::No => false,
            Membership::Unknown { .. } => {
                tainted = true;
                false
            }
        }
    };
    if probe(h) {
        return Ok((0, true, tainted));
    }
    let mut seen: HashMap<Runs, ()> = HashMap::new();
    seen.insert(h.clone(), ());
    let mut queue: VecDeque<(Runs, u32)> = VecDeque::new();
    queue.push_back((h.clone(), 0));
    while let Some((w, d)) = queue.pop_front() {
        if d as usize >= cap {
            continue;
        }
        for s in steps {
            let v = g.mul(&w, s);
            if seen.contains_key(&v) {
                continue;
            }
            if probe(&v) {
                return Ok((d + 1, true, tainted));
            }
            if seen.len() >= max_visits {
                return Err(CommError::BudgetExceeded { cap: max_visits });
            }
            seen.insert(v.clone(), ());
            queue.push_back((v, d + 1));
        }
    }
    Ok((cap as u32 + 1, false, tainted))
}

/// Profile of D(X → Y) over explicitly listed sources (each tagged with the
/// radius at which it enters the window).
pub(crate) fn profile_over_sources(
    g: &GroupHandle,
    sources: &[(u32, Runs)],
    target: &SetPred,
    opts: &ProfileOptions,
    taint_in: bool,
) -> Result<HausdorffProfile> {
    let steps = metric_steps(g, &opts.metric_gens);
    let step_len = steps.iter().map(|s| runs_len(s)).max().unwrap_or(1).max(1) as usize;

    let results: Vec<Result<(u32, u32, bool, bool)>> = opts.exec.map(sources, |(d, h)| {
        let budget = opts.big_radius.saturating_sub(*d as usize);
        let cap = budget / step_len;
        let (val, exact, taint) = capped_distance(g, target, h, cap, &steps, opts.max_vertices)?;
        Ok((*d, val, exact, taint))
    });

    let mut tainted = taint_in;
    let mut per_source = Vec::with_capacity(results.len());
    for r in results {
        let (d, val, exact, taint) = r?;
        tainted |= taint;
        per_source.push((d, val, exact));
    }

    let radii: Vec<usize> = (0..=opts.r_max).collect();
    let mut lower_bounds = vec![0u32; radii.len()];
    let mut exact = vec![true; radii.len()];
    for &(d, val, ex) in &per_source {
        for (i, &r) in radii.iter().enumerate() {
            if d as usize <= r {
                if val > lower_bounds[i] {
                    lower_bounds[i] = val;
                }
                exact[i] &= ex;
            }
        }
    }

    let verdict = classify(&lower_bounds, &exact);
    Ok(HausdorffProfile {
        radii,
        lower_bounds,
        exact,
        verdict,
        tainted,
    })
}

fn classify(lb: &[u32], exact: &[bool]) -> GrowthVerdict {
    if lb.len() < 3 {
        return GrowthVerdict::Inconclusive;
    }
    let tail_start = lb.len() / 2;
    let tail = &lb[tail_start..];
    if tail.iter().all(|&v| v == tail[0]) {
        // A plateau of approximations proves nothing; it must be exact.
        if exact[tail_start..].iter().all(|&e| e) {
            return GrowthVerdict::Bounded;
        }
        return GrowthVerdict::Inconclusive;
    }
    // Lower bounds are valid regardless of exactness, so growth across the
    // tail is genuine growth.
    if lb.last().unwrap() > &lb[tail_start] && lb.windows(2).all(|w| w[1] >= w[0]) {
        return GrowthVerdict::Growing;
    }
    GrowthVerdict::Inconclusive
}

/// Sources drawn from a ball by a membership predicate.
pub(crate) fn sources_in_ball(
    ball: &Ball,
    r_max: usize,
    pred: &SetPred,
) -> (Vec<(u32, Runs)>, bool) {
    let mut out = Vec::new();
    let mut tainted = false;
    for e in 0..ball.len() as u32 {
        let d = ball.dist(e);
        if d as usize > r_max {
            break;
        }
        match pred(ball.elem(e)) {
            Membership::Yes => out.push((d, ball.elem(e).clone())),
            Membership::No => {}
            Membership::Unknown { .. } => tainted = true,
        }
    }
    (out, tainted)
}

/// One-sided profile D(X → Y) with both sets given by predicates.
pub fn directed_profile(
    g: &GroupHandle,
    source: &SetPred,
    target: &SetPred,
    opts: &ProfileOptions,
) -> Result<HausdorffProfile> {
    let ball = build_ball(
        g,
        opts.r_max,
        &BallOptions {
            exec: opts.exec,
            max_vertices: opts.max_vertices,
        },
    )?;
    let (sources, tainted) = sources_in_ball(&ball, opts.r_max, source);
    profile_over_sources(g, &sources, target, opts, tainted)
}

/// Symmetric Hausdorff profile: per-radius max of the two directed profiles.
pub fn symmetric_profile(
    g: &GroupHandle,
    x: &SetPred,
    y: &SetPred,
    opts: &ProfileOptions,
) -> Result<HausdorffProfile> {
    let fwd = directed_profile(g, x, y, opts)?;
    let bwd = directed_profile(g, y, x, opts)?;
    let lower_bounds: Vec<u32> = fwd
        .lower_bounds
        .iter()
        .zip(&bwd.lower_bounds)
        .map(|(&a, &b)| a.max(b))
        .collect();
    let exact: Vec<bool> = fwd
        .exact
        .iter()
        .zip(&bwd.exact)
        .map(|(&a, &b)| a && b)
        .collect();
    let verdict = classify(&lower_bounds, &exact);
    Ok(HausdorffProfile {
        radii: fwd.radii,
        lower_bounds,
        exact,
        verdict,
        tainted: fwd.tainted || bwd.tainted,
    })
}

/// Predicate for the left coset t·Q (t need not be canonical).
pub fn left_coset_pred<'a>(q: &'a SubgroupHandle, t: &Runs) -> impl Fn(&Runs) -> Membership + Sync + 'a {
    let g = q.ambient().clone();
    let t_inv = g.nf(&runs_inverse(t));
    move |w: &Runs| q.membership_canonical(&g.nf(&runs_concat(&t_inv, w)))
}

/// Predicate for the conjugate t·Q·t⁻¹.
pub fn conjugate_pred<'a>(q: &'a SubgroupHandle, t: &Runs) -> impl Fn(&Runs) -> Membership + Sync + 'a {
    let g = q.ambient().clone();
    let t_can = g.nf(t);
    let t_inv = g.nf(&runs_inverse(t));
    move |w: &Runs| {
        let mid = g.nf(&runs_concat(&runs_concat(&t_inv, w), &t_can));
        q.membership_canonical(&mid)
    }
}

pub fn subgroup_pred(q: &SubgroupHandle) -> impl Fn(&Runs) -> Membership + Sync + '_ {
    move |w: &Runs| q.membership_canonical(w)
}

/// Profile of the symmetric Hausdorff distance between g·Q and Q: the basic
/// commensuration probe for a single element.
pub fn coset_profile(
    q: &SubgroupHandle,
    g_elt: &Runs,
    opts: &ProfileOptions,
) -> Result<HausdorffProfile> {
    let g = q.ambient().clone();
    let coset = left_coset_pred(q, g_elt);
    let sub = subgroup_pred(q);
    symmetric_profile(&g, &coset, &sub, opts)
}
