//! Closure operations on witnesses: the structural reasons commensuration
//! survives inversion, double-coset moves, intersections, finite-index
//! passage, and transport along homomorphisms. Each constructor returns an
//! *unverified* witness whose maps implement the exact formula; callers are
//! expected to run [`super::witness::verify_witness`] as the independent
//! check.

use std::sync::Arc;

use crate::catalog::HomHandle;
use crate::error::{CommError, Result};
use crate::graph::{build_ball, BallOptions};
use crate::group::GroupHandle;
use crate::subgroup::{preimage_via, Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, Runs};

use super::witness::{ValueMap, Witness, WitnessOptions};

fn ball_opts(opts: &WitnessOptions) -> BallOptions {
    BallOptions {
        exec: opts.exec,
        max_vertices: opts.max_vertices,
    }
}

fn yes(q: &SubgroupHandle, w: &Runs) -> bool {
    q.membership_canonical(w) == Membership::Yes
}

/// Members of `q` in the sample ball, canonical.
fn sample_members(q: &SubgroupHandle, opts: &WitnessOptions) -> Result<Vec<Runs>> {
    let ball = build_ball(q.ambient(), opts.h_ball_radius, &ball_opts(opts))?;
    let mut out = Vec::new();
    for e in 0..ball.len() as u32 {
        if yes(q, ball.elem(e)) {
            out.push(ball.elem(e).clone());
        }
    }
    Ok(out)
}

/// Witness for g⁻¹ from a witness for g: the defining conditions swap roles.
/// h·a ∈ g⁻¹Q is the same condition as g·h·a ∈ Q, so α and β exchange along
/// with their value sets.
pub fn invert(w: &Witness) -> Witness {
    let g_inv = w.group.nf(&runs_inverse(&w.g));
    let src = w.clone();
    let alpha: ValueMap = Arc::new(move |h: &Runs| src.beta(h));
    let src = w.clone();
    let beta: ValueMap = Arc::new(move |h: &Runs| src.alpha(h));
    Witness::assemble(
        w.group.clone(),
        w.q.clone(),
        g_inv,
        w.b_set.clone(),
        w.a_set.clone(),
        alpha,
        beta,
    )
}

/// Witness for any k in the same double coset QgQ. Auxiliary elements are
/// found by bounded search: h₁ ∈ Q with h₁·k ∈ gQ rewrites kQ as h₁⁻¹gQ, so
/// α_k(h) = α_g(h₁·h); symmetrically h₂ ∈ Q with g·h₂·k⁻¹ ∈ Q gives
/// β_k(h) = β_g(h₂·h). The value sets do not grow.
pub fn transport(w: &Witness, k: &Runs, opts: &WitnessOptions) -> Result<Witness> {
    let group = w.group.clone();
    let k_can = group.nf(k);
    let k_inv = group.nf(&runs_inverse(&k_can));
    let g_inv = group.nf(&runs_inverse(&w.g));
    let ball = build_ball(&group, opts.search_radius, &ball_opts(opts))?;

    let mut h1 = None;
    let mut h2 = None;
    for e in 0..ball.len() as u32 {
        let cand = ball.elem(e);
        if !yes(&w.q, cand) {
            continue;
        }
        if h1.is_none() {
            let probe = group.nf(&runs_concat(&g_inv, &runs_concat(cand, &k_can)));
            if yes(&w.q, &probe) {
                h1 = Some(cand.clone());
            }
        }
        if h2.is_none() {
            let probe = group.nf(&runs_concat(&w.g, &runs_concat(cand, &k_inv)));
            if yes(&w.q, &probe) {
                h2 = Some(cand.clone());
            }
        }
        if h1.is_some() && h2.is_some() {
            break;
        }
    }
    let h1 = h1.ok_or_else(|| {
        CommError::AuxiliarySearchFailed(format!(
            "no h1 in Q with h1·k ∈ gQ within radius {}; k may not lie in QgQ",
            opts.search_radius
        ))
    })?;
    let h2 = h2.ok_or_else(|| {
        CommError::AuxiliarySearchFailed(format!(
            "no h2 in Q with g·h2·k⁻¹ ∈ Q within radius {}; k may not lie in QgQ",
            opts.search_radius
        ))
    })?;

    let src = w.clone();
    let (grp, h1c) = (group.clone(), h1);
    let alpha: ValueMap = Arc::new(move |h: &Runs| src.alpha(&grp.nf(&runs_concat(&h1c, h))));
    let src = w.clone();
    let (grp, h2c) = (group.clone(), h2);
    let beta: ValueMap = Arc::new(move |h: &Runs| src.beta(&grp.nf(&runs_concat(&h2c, h))));
    Ok(Witness::assemble(
        group,
        w.q.clone(),
        k_can,
        w.a_set.clone(),
        w.b_set.clone(),
        alpha,
        beta,
    ))
}

/// Witness for the intersection Q_A ∩ Q_B from witnesses for the same g over
/// Q_A and Q_B.
///
/// For a member q of the intersection, u_A = g⁻¹·q·α_A(q) ∈ Q_A and
/// u_B = g⁻¹·q·α_B(q) ∈ Q_B differ by τ = α_A(q)⁻¹·α_B(q) = u_A⁻¹·u_B, which
/// ranges over the finite set A_A⁻¹·A_B. Any x ∈ Q_A ∩ τ·Q_B (u_A⁻¹ realizes
/// one, so the shortlex-first search terminates) turns α_A(q)·x into an
/// intersection value: g⁻¹·q·α_A(q)·x = u_A·x lands in Q_A and equals
/// u_B·(τ⁻¹x) ∈ Q_B. The β side is identical with v = g·q·β(q).
pub fn intersect_witnesses(
    wa: &Witness,
    wb: &Witness,
    opts: &WitnessOptions,
) -> Result<Witness> {
    let group = wa.group.clone();
    if !group.same_group(&wb.group) || group.key(&wa.g) != group.key(&wb.g) {
        return Err(CommError::InvalidSpec(
            "intersection needs witnesses for the same element of the same group".to_string(),
        ));
    }
    let q_meet = wa.q.intersect(&wb.q)?;
    let ball = Arc::new(build_ball(&group, opts.search_radius, &ball_opts(opts))?);

    // x(τ): shortlex-first x with x ∈ Q_A and τ⁻¹·x ∈ Q_B. Pure function of
    // τ, recomputed per call.
    let realizer = {
        let (group, qa, qb, ball) =
            (group.clone(), wa.q.clone(), wb.q.clone(), ball.clone());
        move |tau: &Runs| -> Result<Runs> {
            let tau_inv = group.nf(&runs_inverse(tau));
            for e in 0..ball.len() as u32 {
                let x = ball.elem(e);
                if yes(&qa, x) && yes(&qb, &group.nf(&runs_concat(&tau_inv, x))) {
                    return Ok(x.clone());
                }
            }
            Err(CommError::AuxiliarySearchFailed(format!(
                "no realizer for τ = {} within radius {}",
                group.alphabet().runs_text(tau),
                ball.radius
            )))
        }
    };

    let alpha: ValueMap = {
        let (wa, wb, group, realizer) = (wa.clone(), wb.clone(), group.clone(), realizer.clone());
        Arc::new(move |h: &Runs| {
            let a1 = wa.alpha(h)?;
            let a2 = wb.alpha(h)?;
            let tau = group.nf(&runs_concat(&runs_inverse(&a1), &a2));
            let x = realizer(&tau)?;
            Ok(group.nf(&runs_concat(&a1, &x)))
        })
    };
    let beta: ValueMap = {
        let (wa, wb, group, realizer) = (wa.clone(), wb.clone(), group.clone(), realizer);
        Arc::new(move |h: &Runs| {
            let b1 = wa.beta(h)?;
            let b2 = wb.beta(h)?;
            let tau = group.nf(&runs_concat(&runs_inverse(&b1), &b2));
            let y = realizer(&tau)?;
            Ok(group.nf(&runs_concat(&b1, &y)))
        })
    };

    // Materialize the value sets over sampled members of the intersection.
    let mut a_set = Vec::new();
    let mut b_set = Vec::new();
    for h in sample_members(&q_meet, opts)? {
        let a = alpha(&h)?;
        if !a_set.contains(&a) {
            a_set.push(a);
        }
        let b = beta(&h)?;
        if !b_set.contains(&b) {
            b_set.push(b);
        }
        if a_set.len() > opts.max_set_size || b_set.len() > opts.max_set_size {
            return Err(CommError::AuxiliarySearchFailed(format!(
                "intersection witness sets exceeded {} values",
                opts.max_set_size
            )));
        }
    }
    Ok(Witness::assemble(
        group,
        q_meet,
        wa.g.clone(),
        a_set,
        b_set,
        alpha,
        beta,
    ))
}

fn validate_transversal(
    group: &GroupHandle,
    fine: &SubgroupHandle,
    coarse_members: &[Runs],
    reps: &[Runs],
) -> Result<()> {
    if reps.is_empty() {
        return Err(CommError::TransversalIncomplete(
            "empty representative list".to_string(),
        ));
    }
    for (i, a) in reps.iter().enumerate() {
        for b in reps.iter().skip(i + 1) {
            let probe = group.nf(&runs_concat(a, &runs_inverse(b)));
            if yes(fine, &probe) {
                return Err(CommError::InvalidSpec(format!(
                    "transversal entries {} and {} represent the same coset",
                    group.alphabet().runs_text(a),
                    group.alphabet().runs_text(b)
                )));
            }
        }
    }
    for m in coarse_members {
        if !reps
            .iter()
            .any(|r| yes(fine, &group.nf(&runs_concat(m, &runs_inverse(r)))))
        {
            return Err(CommError::TransversalIncomplete(format!(
                "{} matches no representative",
                group.alphabet().runs_text(m)
            )));
        }
    }
    Ok(())
}

/// Witness for a finite-index subgroup Q′ ≤ Q, given right-coset
/// representatives Q = ⊔ Q′·qᵢ. Whenever u = g⁻¹·h·α(h) lands in Q, exactly
/// one u·qᵢ⁻¹ lands in Q′, and α(h)·qᵢ⁻¹ is the corrected value; same on the
/// β side with g·h·β(h).
pub fn restrict_to_finite_index(
    w: &Witness,
    q_sub: &SubgroupHandle,
    reps: &[Runs],
    opts: &WitnessOptions,
) -> Result<Witness> {
    let group = w.group.clone();
    let reps: Vec<Runs> = reps.iter().map(|r| group.nf(r)).collect();
    // Representatives must lie in Q and name distinct Q′-cosets; coverage of
    // the sampled members of Q doubles as the completeness check.
    for r in &reps {
        if !yes(&w.q, r) {
            return Err(CommError::InvalidSpec(format!(
                "transversal entry {} is not in the coarse subgroup",
                group.alphabet().runs_text(r)
            )));
        }
    }
    let coarse_members = sample_members(&w.q, opts)?;
    validate_transversal(&group, q_sub, &coarse_members, &reps)?;

    let g_inv = group.nf(&runs_inverse(&w.g));
    let correct = {
        let (group, q_sub, reps) = (group.clone(), q_sub.clone(), reps.clone());
        move |landed: &Runs, value: &Runs| -> Result<Runs> {
            for r in &reps {
                let probe = group.nf(&runs_concat(landed, &runs_inverse(r)));
                if yes(&q_sub, &probe) {
                    return Ok(group.nf(&runs_concat(value, &runs_inverse(r))));
                }
            }
            Err(CommError::TransversalIncomplete(format!(
                "{} matches no representative",
                group.alphabet().runs_text(landed)
            )))
        }
    };

    let alpha: ValueMap = {
        let (src, group, g_inv, correct) =
            (w.clone(), group.clone(), g_inv.clone(), correct.clone());
        Arc::new(move |h: &Runs| {
            let a = src.alpha(h)?;
            let landed = group.nf(&runs_concat(&g_inv, &runs_concat(h, &a)));
            correct(&landed, &a)
        })
    };
    let beta: ValueMap = {
        let (src, group, correct) = (w.clone(), group.clone(), correct);
        Arc::new(move |h: &Runs| {
            let b = src.beta(h)?;
            let landed = group.nf(&runs_concat(&src.g, &runs_concat(h, &b)));
            correct(&landed, &b)
        })
    };

    let mut a_set = Vec::new();
    let mut b_set = Vec::new();
    for h in sample_members(q_sub, opts)? {
        let a = alpha(&h)?;
        if !a_set.contains(&a) {
            a_set.push(a);
        }
        let b = beta(&h)?;
        if !b_set.contains(&b) {
            b_set.push(b);
        }
    }
    Ok(Witness::assemble(
        group,
        q_sub.clone(),
        w.g.clone(),
        a_set,
        b_set,
        alpha,
        beta,
    ))
}

/// Witness for a finite-index overgroup Q′ ≥ Q, given representatives
/// Q′ = ⊔ Q·qᵢ. Each member h′ factors uniquely as (h′·qᵢ⁻¹)·qᵢ with the
/// first factor in Q, and prefixing qᵢ⁻¹ to the inner value works:
/// h′·(qᵢ⁻¹·α(h′qᵢ⁻¹)) = (h′qᵢ⁻¹)·α(h′qᵢ⁻¹) ∈ gQ ⊆ gQ′.
pub fn extend_to_finite_index(
    w: &Witness,
    q_super: &SubgroupHandle,
    reps: &[Runs],
    opts: &WitnessOptions,
) -> Result<Witness> {
    let group = w.group.clone();
    let reps: Vec<Runs> = reps.iter().map(|r| group.nf(r)).collect();
    for r in &reps {
        if !yes(q_super, r) {
            return Err(CommError::InvalidSpec(format!(
                "transversal entry {} is not in the overgroup",
                group.alphabet().runs_text(r)
            )));
        }
    }
    let super_members = sample_members(q_super, opts)?;
    validate_transversal(&group, &w.q, &super_members, &reps)?;

    // h′ ↦ (its representative index's factorization), shared by both maps.
    let factor = {
        let (group, q, reps) = (group.clone(), w.q.clone(), reps.clone());
        move |h_prime: &Runs| -> Result<(Runs, Runs)> {
            for r in &reps {
                let inner = group.nf(&runs_concat(h_prime, &runs_inverse(r)));
                if yes(&q, &inner) {
                    return Ok((inner, r.clone()));
                }
            }
            Err(CommError::TransversalIncomplete(format!(
                "{} matches no representative",
                group.alphabet().runs_text(h_prime)
            )))
        }
    };

    let alpha: ValueMap = {
        let (src, group, factor) = (w.clone(), group.clone(), factor.clone());
        Arc::new(move |h: &Runs| {
            let (inner, rep) = factor(h)?;
            let a = src.alpha(&inner)?;
            Ok(group.nf(&runs_concat(&runs_inverse(&rep), &a)))
        })
    };
    let beta: ValueMap = {
        let (src, group, factor) = (w.clone(), group.clone(), factor);
        Arc::new(move |h: &Runs| {
            let (inner, rep) = factor(h)?;
            let b = src.beta(&inner)?;
            Ok(group.nf(&runs_concat(&runs_inverse(&rep), &b)))
        })
    };

    let mut a_set = Vec::new();
    let mut b_set = Vec::new();
    for h in super_members {
        let a = alpha(&h)?;
        if !a_set.contains(&a) {
            a_set.push(a);
        }
        let b = beta(&h)?;
        if !b_set.contains(&b) {
            b_set.push(b);
        }
    }
    Ok(Witness::assemble(
        group,
        q_super.clone(),
        w.g.clone(),
        a_set,
        b_set,
        alpha,
        beta,
    ))
}

/// Shortlex-first source element satisfying a predicate; the workhorse for
/// both homomorphism directions.
fn lift_search(
    source: &GroupHandle,
    radius: usize,
    opts: &WitnessOptions,
    pred: impl Fn(&Runs) -> bool,
    what: &str,
) -> Result<Runs> {
    let ball = build_ball(source, radius, &ball_opts(opts))?;
    for e in 0..ball.len() as u32 {
        if pred(ball.elem(e)) {
            return Ok(ball.elem(e).clone());
        }
    }
    Err(CommError::LiftSearchFailed(format!(
        "{what} has no preimage within radius {radius}"
    )))
}

/// Push a witness along a homomorphism f with f(Q₁) = Q₂ (the caller names
/// Q₂ by a spec the target group understands). Values map through f; each
/// target member is lifted back to a sampled member of Q₁ first.
pub fn pushforward(
    w: &Witness,
    hom: &HomHandle,
    q2: &SubgroupHandle,
    opts: &WitnessOptions,
) -> Result<Witness> {
    if !hom.source().same_group(&w.group) || !hom.target().same_group(q2.ambient()) {
        return Err(CommError::InvalidSpec(
            "homomorphism endpoints do not match the witness and target subgroup".to_string(),
        ));
    }
    let g2 = hom.apply_runs(&w.g);
    let target = q2.ambient().clone();

    let lift_member = {
        let (hom, src_q, src_group, opts) =
            (hom.clone(), w.q.clone(), w.group.clone(), opts.clone());
        move |h2: &Runs| -> Result<Runs> {
            let key = hom.target().key(h2);
            lift_search(
                &src_group,
                opts.search_radius,
                &opts,
                |cand| yes(&src_q, cand) && hom.target().key(&hom.apply_runs(cand)) == key,
                &format!("subgroup member {}", hom.target().alphabet().runs_text(h2)),
            )
        }
    };

    let alpha: ValueMap = {
        let (src, hom, lift_member) = (w.clone(), hom.clone(), lift_member.clone());
        Arc::new(move |h2: &Runs| {
            let h1 = lift_member(h2)?;
            Ok(hom.apply_runs(&src.alpha(&h1)?))
        })
    };
    let beta: ValueMap = {
        let (src, hom, lift_member) = (w.clone(), hom.clone(), lift_member);
        Arc::new(move |h2: &Runs| {
            let h1 = lift_member(h2)?;
            Ok(hom.apply_runs(&src.beta(&h1)?))
        })
    };

    let a_set = w.a_set.iter().map(|a| hom.apply_runs(a)).collect();
    let b_set = w.b_set.iter().map(|b| hom.apply_runs(b)).collect();
    Ok(Witness::assemble(
        target,
        q2.clone(),
        g2,
        a_set,
        b_set,
        alpha,
        beta,
    ))
}

/// Pull a witness back along a homomorphism: Q₁ = f⁻¹(Q₂) commensurated by
/// any g₁ with f(g₁) = g₂. Values lift through f with no membership
/// constraint: h₁·a₁ ∈ g₁Q₁ ⟺ f(h₁)·f(a₁) ∈ g₂Q₂.
pub fn pullback(
    w: &Witness,
    hom: &HomHandle,
    g1: &Runs,
    opts: &WitnessOptions,
) -> Result<Witness> {
    if !hom.target().same_group(&w.group) {
        return Err(CommError::InvalidSpec(
            "homomorphism target does not match the witness group".to_string(),
        ));
    }
    let source = hom.source().clone();
    let g1_can = source.nf(g1);
    if hom.target().key(&hom.apply_runs(&g1_can)) != hom.target().key(&w.g) {
        return Err(CommError::InvalidSpec(
            "supplied source element does not map to the witness element".to_string(),
        ));
    }
    let q1 = preimage_via(hom, &w.q)?;

    let lift_value = {
        let (hom, source, opts) = (hom.clone(), source.clone(), opts.clone());
        move |v2: &Runs| -> Result<Runs> {
            let key = hom.target().key(v2);
            lift_search(
                &source,
                opts.search_radius,
                &opts,
                |cand| hom.target().key(&hom.apply_runs(cand)) == key,
                &format!("value {}", hom.target().alphabet().runs_text(v2)),
            )
        }
    };

    // Lift the declared sets once; the maps reuse the same lifting rule, so
    // values stay inside the lifted sets.
    let mut a_set = Vec::new();
    for a in &w.a_set {
        a_set.push(lift_value(a)?);
    }
    let mut b_set = Vec::new();
    for b in &w.b_set {
        b_set.push(lift_value(b)?);
    }

    let alpha: ValueMap = {
        let (src, hom, lift_value) = (w.clone(), hom.clone(), lift_value.clone());
        Arc::new(move |h1: &Runs| {
            let a2 = src.alpha(&hom.apply_runs(h1))?;
            lift_value(&a2)
        })
    };
    let beta: ValueMap = {
        let (src, hom, lift_value) = (w.clone(), hom.clone(), lift_value);
        Arc::new(move |h1: &Runs| {
            let b2 = src.beta(&hom.apply_runs(h1))?;
            lift_value(&b2)
        })
    };

    Ok(Witness::assemble(
        source,
        q1,
        g1_can,
        a_set,
        b_set,
        alpha,
        beta,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;
    use crate::commensurator::witness::{search_witness, verify_witness, VerifyOutcome};
    use crate::exec::Exec;
    use crate::subgroup::subgroup_of;

    fn opts() -> WitnessOptions {
        WitnessOptions {
            exec: Exec::Seq,
            ..WitnessOptions::default()
        }
    }

    fn assert_verified(w: &Witness, radius: usize) {
        let out = verify_witness(w, radius, &opts()).unwrap();
        assert_eq!(out, VerifyOutcome::Verified, "{}", w.describe());
    }

    #[test]
    fn inverted_witness_verifies() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let w = search_witness(&q, &t, &opts()).unwrap();
        let wi = invert(&w);
        assert_eq!(g.key(&wi.g), "t^-1");
        assert_eq!(wi.a_set, w.b_set);
        assert_eq!(wi.b_set, w.a_set);
        assert_verified(&wi, 6);
    }

    #[test]
    fn transported_witness_covers_the_double_coset() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let w = search_witness(&q, &t, &opts()).unwrap();
        // k = x·t·x lies in QtQ; the formula witness must verify cold.
        let k = g.parse_runs("x t x").unwrap();
        let wk = transport(&w, &k, &opts()).unwrap();
        assert_eq!(wk.a_set, w.a_set);
        assert_verified(&wk, 5);
        // An element outside the double coset is refused.
        let t2 = g.parse_runs("t^2").unwrap();
        assert!(transport(&w, &t2, &opts()).is_err());
    }

    #[test]
    fn intersection_witness_verifies() {
        // Two index-2 subgroups of F2 sharing the commensurating element
        // g = x: words with even x-letter count and words of even length.
        // Their intersection (even x-count and even y-count) has index 4.
        let dir = std::env::temp_dir().join("commlab-intersect");
        std::fs::create_dir_all(&dir).unwrap();
        let even_x = dir.join("even-x.tbl");
        let even_len = dir.join("even-len.tbl");
        std::fs::write(&even_x, "2 2\n1 0\n0 1\n").unwrap();
        std::fs::write(&even_len, "2 2\n1 0\n1 0\n").unwrap();
        let g = build_group("free:2").unwrap();
        let qa = subgroup_of(&g, &format!("table:{}", even_x.display()), None).unwrap();
        let qb = subgroup_of(&g, &format!("table:{}", even_len.display()), None).unwrap();
        std::fs::remove_file(&even_x).ok();
        std::fs::remove_file(&even_len).ok();

        let gx = g.parse_runs("x").unwrap();
        let mut o = opts();
        o.h_ball_radius = 4;
        o.search_radius = 4;
        let wa = search_witness(&qa, &gx, &o).unwrap();
        let wb = search_witness(&qb, &gx, &o).unwrap();
        let wm = intersect_witnesses(&wa, &wb, &o).unwrap();
        let out = verify_witness(&wm, 4, &o).unwrap();
        assert_eq!(out, VerifyOutcome::Verified, "{}", wm.describe());
    }

    #[test]
    fn finite_index_passage_down_and_up() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let q2 = subgroup_of(&g, "cyclic-span:x^2", None).unwrap();
        let t = g.parse_runs("t").unwrap();
        let w = search_witness(&q, &t, &opts()).unwrap();

        // Down: ⟨x²⟩ ≤ ⟨x⟩ with transversal {1, x}.
        let reps = vec![g.parse_runs("").unwrap(), g.parse_runs("x").unwrap()];
        let wd = restrict_to_finite_index(&w, &q2, &reps, &opts()).unwrap();
        assert_verified(&wd, 5);

        // Up: ⟨x²⟩ ≤ ⟨x⟩ seen from below.
        let w2 = search_witness(&q2, &t, &opts()).unwrap();
        let wu = extend_to_finite_index(&w2, &q, &reps, &opts()).unwrap();
        assert_verified(&wu, 5);

        // A broken transversal is rejected: 1 and x² name the same ⟨x²⟩-coset.
        let bad = vec![g.parse_runs("").unwrap(), g.parse_runs("x^2").unwrap()];
        assert!(restrict_to_finite_index(&w, &q2, &bad, &opts()).is_err());
    }

    #[test]
    fn pushforward_and_pullback_along_abelianization() {
        // f: F2 → Z², Q1 = ⟨x⟩ pushes to the first axis; then pull back.
        let f2 = build_group("free:2").unwrap();
        let z2 = build_group("abelian:2").unwrap();
        let hom = HomHandle::parse(&f2, &z2, "x;y").unwrap();
        let q1 = subgroup_of(&f2, "cyclic-span:x", None).unwrap();
        let x = f2.parse_runs("x").unwrap();
        let mut o = opts();
        o.h_ball_radius = 4;
        o.search_radius = 4;
        let w1 = search_witness(&q1, &x, &o).unwrap();

        let q2 = subgroup_of(&z2, "cyclic-span:x", None).unwrap();
        let w2 = pushforward(&w1, &hom, &q2, &o).unwrap();
        let out = verify_witness(&w2, 4, &o).unwrap();
        assert_eq!(out, VerifyOutcome::Verified);

        // Pull the pushed witness back: Q = f⁻¹(axis) is the kernel-enlarged
        // subgroup {words with zero y-exponent}, commensurated by x.
        let back = pullback(&w2, &hom, &x, &o).unwrap();
        let out = verify_witness(&back, 4, &o).unwrap();
        assert_eq!(out, VerifyOutcome::Verified);

        // Mismatched source element is rejected.
        let y = f2.parse_runs("y").unwrap();
        assert!(pullback(&w2, &hom, &y, &o).is_err());
    }
}
