//! Coset packing census: how many distinct left cosets crowd within a fixed
//! distance of the subgroup as the sampling window grows.
//!
//! For each radius r in a caller-supplied list, the census counts the
//! distinct cosets uQ owned by elements u of the r-ball whose distance to Q
//! is certified ≤ D. A count that plateaus over the last half of the radius
//! list is evidence that only finitely many cosets ever come that close; a
//! count that keeps climbing is evidence against it.
//!
//! Cosets are deduplicated by the group's exact coset rule when the subgroup
//! spec admits one, and otherwise by pairwise membership probes u⁻¹v ∈ Q
//! against previously seen representatives (which can taint the census when
//! a probe comes back undecided).

use crate::error::{CommError, Result};
use crate::graph::{build_ball, BallOptions};
use crate::subgroup::{parse_subgroup_spec, Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, Runs};

use super::profile::{capped_distance, metric_steps, subgroup_pred, ProfileOptions};
use super::GrowthVerdict;

#[derive(Clone, Debug)]
pub struct PackingCensus {
    /// Closeness threshold: a coset counts when some window element of it
    /// sits within this distance of the subgroup.
    pub near_distance: u32,
    /// Sampling radii, as supplied.
    pub radii: Vec<usize>,
    /// counts[i] = distinct near cosets discovered within radius radii[i].
    /// Non-decreasing because larger balls only reveal more elements.
    pub counts: Vec<usize>,
    /// Bounded when the count plateaus over the last half of the radii.
    pub verdict: GrowthVerdict,
    pub tainted: bool,
}

/// Counts distinct cosets within `near_distance` of the subgroup, windowed
/// at each radius in `radii` (which must be strictly increasing).
pub fn packing_census(
    q: &SubgroupHandle,
    near_distance: u32,
    radii: &[usize],
    opts: &ProfileOptions,
) -> Result<PackingCensus> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CommError::InvalidSpec(
            "packing census needs a strictly increasing, non-empty radius list".into(),
        ));
    }
    let g = q.ambient().clone();
    let r_max = *radii.last().unwrap();
    let ball = build_ball(
        &g,
        r_max,
        &BallOptions {
            max_vertices: opts.max_vertices,
            exec: opts.exec,
        },
    )?;
    let steps = metric_steps(&g, &opts.metric_gens);
    let target = subgroup_pred(q);

    // Distance of every window element to Q, capped just past the threshold.
    let ids: Vec<u32> = (0..ball.len() as u32).collect();
    let probes: Vec<Result<(u32, bool, bool)>> = opts.exec.map(&ids, |&u| {
        capped_distance(
            &g,
            &target,
            ball.elem(u),
            near_distance as usize,
            &steps,
            opts.max_vertices,
        )
    });

    let rule = parse_subgroup_spec(q.spec_text())
        .ok()
        .and_then(|spec| g.coset_rule(&spec));

    let mut tainted = false;
    // Near cosets in discovery order, each tagged with the radius at which
    // its first-found element entered the window. Representatives are coset
    // ids under an exact rule, or ball elements under the pairwise fallback.
    let mut seen_ids: Vec<String> = Vec::new();
    let mut seen_reps: Vec<Runs> = Vec::new();
    let mut entry_radii: Vec<u32> = Vec::new();
    for (u, probe) in probes.into_iter().enumerate() {
        let u = u as u32;
        let (val, exact, taint) = probe?;
        tainted |= taint;
        if !(exact && val <= near_distance) {
            continue;
        }
        let w = ball.elem(u);
        let fresh = match &rule {
            Some(rule) => {
                let id = rule.coset_id(w);
                if seen_ids.contains(&id) {
                    false
                } else {
                    seen_ids.push(id);
                    true
                }
            }
            None => {
                let mut fresh = true;
                for rep in &seen_reps {
                    let diff = g.nf(&runs_concat(&runs_inverse(rep), w));
                    match q.membership_canonical(&diff) {
                        Membership::Yes => {
                            fresh = false;
                            break;
                        }
                        Membership::No => {}
                        Membership::Unknown { .. } => {
                            // Undecided probes may split one coset in two.
                            tainted = true;
                        }
                    }
                }
                if fresh {
                    seen_reps.push(w.clone());
                }
                fresh
            }
        };
        if fresh {
            entry_radii.push(ball.dist(u));
        }
    }

    let counts: Vec<usize> = radii
        .iter()
        .map(|&r| entry_radii.iter().filter(|&&d| d as usize <= r).count())
        .collect();

    let verdict = if counts.len() < 3 {
        GrowthVerdict::Inconclusive
    } else {
        let tail = &counts[counts.len() - counts.len().div_ceil(2)..];
        if tail.iter().all(|&c| c == tail[0]) {
            GrowthVerdict::Bounded
        } else {
            GrowthVerdict::Growing
        }
    };

    Ok(PackingCensus {
        near_distance,
        radii: radii.to_vec(),
        counts,
        verdict,
        tainted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;
    use crate::exec::Exec;
    use crate::subgroup::subgroup_of;

    fn opts() -> ProfileOptions {
        ProfileOptions {
            exec: Exec::Seq,
            ..ProfileOptions::default()
        }
    }

    #[test]
    fn grid_axis_has_three_near_cosets() {
        let g = build_group("abelian:2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let census = packing_census(&q, 1, &[1, 2, 3, 4, 5], &opts()).unwrap();
        // Only the cosets y⁻¹Q, Q, yQ touch the distance-1 tube around Q.
        assert_eq!(census.counts, vec![3, 3, 3, 3, 3]);
        assert_eq!(census.verdict, GrowthVerdict::Bounded);
        assert!(!census.tainted);
    }

    #[test]
    fn doubling_axis_plateaus_at_four_near_cosets() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let census = packing_census(&q, 1, &[1, 2, 3, 4, 5], &opts()).unwrap();
        // Q·{1, x^±1, t, t⁻¹} meets exactly Q, tQ, t⁻¹Q and xt⁻¹Q; the
        // last of these first shows an element (x·t⁻¹) at radius 2.
        assert_eq!(census.counts, vec![3, 4, 4, 4, 4]);
        assert_eq!(census.verdict, GrowthVerdict::Bounded);
        assert!(!census.tainted);
    }

    #[test]
    fn free_axis_keeps_finding_new_near_cosets() {
        let g = build_group("free:2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let census = packing_census(&q, 1, &[1, 2, 3, 4, 5], &opts()).unwrap();
        // Every x^a·y^±1 starts a fresh coset one step from Q.
        assert_eq!(census.counts, vec![3, 7, 11, 15, 19]);
        assert_eq!(census.verdict, GrowthVerdict::Growing);
        assert!(!census.tainted);
    }

    #[test]
    fn radius_list_must_increase() {
        let g = build_group("free:2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        assert!(packing_census(&q, 1, &[], &opts()).is_err());
        assert!(packing_census(&q, 1, &[2, 2], &opts()).is_err());
    }
}
