//! Scripted verification bundles for the four worked example families in
//! the catalog: the doubling group, the ladder-group HNN family, the
//! twisted Klein-bottle HNN group, and the coset-graph/quotient-graph
//! contrast. Each bundle runs a fixed list of checks and reports one
//! pass/fail row per check; the run is conclusive only when every check
//! passed with untainted evidence.

use commlab_core::catalog::build_group;
use commlab_core::commensurator::{
    coset_profile, search_witness, verify_witness, GrowthVerdict, ProfileOptions, VerifyOutcome,
    WitnessOptions,
};
use commlab_core::error::{CommError, Result};
use commlab_core::exec::Exec;
use commlab_core::graph::{
    build_ball, cayley_ball, coset_graph_ball, ends_estimate, quotient_graph_ball, BallOptions,
    EndsVerdict,
};
use commlab_core::group::GroupHandle;
use commlab_core::lattice::quotient_invariants;
use commlab_core::subgroup::{parse_subgroup_spec, subgroup_of, Membership, SubgroupHandle};
use commlab_core::words::{runs_concat, runs_inverse, Runs};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::report;

pub fn run(n: u32, exec: Exec, cap: usize) -> Result<(Value, bool)> {
    match n {
        1 => doubling_witness_bundle(exec, cap),
        2 => ladder_bundle(exec, cap),
        3 => twisted_base_bundle(exec, cap),
        4 => graph_contrast_bundle(exec, cap),
        _ => Err(CommError::InvalidSpec(format!(
            "example number {n} is out of range 1..=4"
        ))),
    }
}

/// Three-valued membership fold: `Some(true/false)` when decided, `None`
/// (taint) when a budget-limited oracle gave up.
fn decided(m: Membership) -> Option<bool> {
    match m {
        Membership::Yes => Some(true),
        Membership::No => Some(false),
        Membership::Unknown { .. } => None,
    }
}

/// Checks that two membership conditions agree on every element of a ball:
/// `w ∈ Q ∧ conj(w) ∈ Q ⟺ w ∈ rhs`. Returns (holds, tainted, first failure).
fn conjugate_intersection_matches(
    g: &GroupHandle,
    q: &SubgroupHandle,
    rhs: &SubgroupHandle,
    t_word: &Runs,
    radius: usize,
    exec: Exec,
    cap: usize,
) -> Result<(bool, bool, Option<String>)> {
    let ball = build_ball(
        g,
        radius,
        &BallOptions {
            exec,
            max_vertices: cap,
        },
    )?;
    let t_inv = g.nf(&runs_inverse(t_word));
    let mut tainted = false;
    for i in 0..ball.len() as u32 {
        let w = ball.elem(i);
        let conj = g.nf(&runs_concat(&runs_concat(t_word, w), &t_inv));
        let in_q = decided(q.membership_canonical(w));
        let in_conj = decided(q.membership_canonical(&conj));
        let in_rhs = decided(rhs.membership_canonical(w));
        let (Some(in_q), Some(in_conj), Some(in_rhs)) = (in_q, in_conj, in_rhs) else {
            tainted = true;
            continue;
        };
        if (in_q && in_conj) != in_rhs {
            return Ok((false, tainted, Some(g.alphabet().runs_text(w))));
        }
    }
    Ok((true, tainted, None))
}

fn profile_check(
    q: &SubgroupHandle,
    g_word: &str,
    want: GrowthVerdict,
    opts: &ProfileOptions,
) -> Result<(Value, bool, bool)> {
    let g = q.ambient().clone();
    let g_elt = g.parse_runs(g_word)?;
    let p = coset_profile(q, &g_elt, opts)?;
    let holds = p.verdict == want;
    let value = json!({
        "name": format!("profile-{}-vs-{}", q.spec_text(), g_word),
        "expected": want.name(),
        "report": report::profile_json(&g, q, &g_elt, &p),
        "holds": holds,
    });
    Ok((value, holds, p.tainted))
}

/// Example bundle 1: in the doubling group, the stable letter carries a
/// one-element A-side witness over ⟨x⟩, and conjugation by it intersects
/// ⟨x⟩ in exactly the even powers (full cosets in the reverse direction).
fn doubling_witness_bundle(exec: Exec, cap: usize) -> Result<(Value, bool)> {
    let g = build_group("bs:1,2")?;
    let q = subgroup_of(&g, "cyclic-span:x", None)?;
    let q_even = subgroup_of(&g, "cyclic-span:x^2", None)?;
    let radius = 8usize;

    let opts = WitnessOptions {
        h_ball_radius: radius,
        search_radius: 6,
        max_set_size: 64,
        max_vertices: cap,
        exec,
    };
    let t = g.parse_runs("t")?;
    let w = search_witness(&q, &t, &opts)?;
    let outcome = verify_witness(&w, radius, &opts)?;
    let a_words: Vec<String> = w.a_set.iter().map(|r| g.alphabet().runs_text(r)).collect();
    let witness_ok =
        matches!(outcome, VerifyOutcome::Verified) && a_words == ["t"] && w.b_set.len() <= 2;
    let witness_report = report::witness_json(&w, radius, &outcome, &opts, "search")?;

    let t_inv = g.nf(&runs_inverse(&t));
    let (even_ok, taint_a, fail_a) =
        conjugate_intersection_matches(&g, &q, &q_even, &t, radius, exec, cap)?;
    let (full_ok, taint_b, fail_b) =
        conjugate_intersection_matches(&g, &q, &q, &t_inv, radius, exec, cap)?;

    let all_pass = witness_ok && even_ok && full_ok;
    let tainted = taint_a || taint_b;
    let value = json!({
        "kind": "paper-example",
        "example": 1,
        "checks": [
            {
                "name": "stable-letter-witness",
                "holds": witness_ok,
                "report": witness_report,
            },
            {
                "name": "conjugate-intersection-is-even-powers",
                "ball_radius": radius,
                "holds": even_ok,
                "failure": fail_a,
            },
            {
                "name": "reverse-conjugate-intersection-is-full",
                "ball_radius": radius,
                "holds": full_ok,
                "failure": fail_b,
            },
        ],
        "all_pass": all_pass,
        "tainted": tainted,
    });
    Ok((value, all_pass && !tainted))
}

/// Example bundle 2: the ladder groups have quotient ⊕ⁿ Z₂ by the first
/// rung, and in the HNN group over the two-rung ladder the rung subgroup
/// stays at bounded distance from its stable-letter translate while the
/// whole base strays.
fn ladder_bundle(exec: Exec, cap: usize) -> Result<(Value, bool)> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for n in 1..=8usize {
        let g = build_group(&format!("hladder:{n}"))?;
        let q = subgroup_of(&g, "cyclic-span:x0", None)?;
        let inv = quotient_invariants(&g, &q)?;
        let want = vec![BigUint::from(2u32); n];
        let holds = inv.free_rank == 0 && inv.torsion == want;
        all_pass &= holds;
        rows.push(json!({
            "name": format!("ladder-{n}-quotient"),
            "torsion": inv.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "free_rank": inv.free_rank,
            "expected": format!("Z2^{n}"),
            "holds": holds,
        }));
    }

    let g = build_group("ex2hnn:2")?;
    let opts = ProfileOptions {
        r_max: 6,
        big_radius: 12,
        max_vertices: cap,
        exec,
        metric_gens: None,
    };
    let rung = subgroup_of(&g, "cyclic-span:x0", None)?;
    let base = subgroup_of(&g, "base", None)?;
    let (row, ok, taint_a) = profile_check(&rung, "t", GrowthVerdict::Bounded, &opts)?;
    all_pass &= ok;
    rows.push(row);
    let (row, ok, taint_b) = profile_check(&base, "t", GrowthVerdict::Growing, &opts)?;
    all_pass &= ok;
    rows.push(row);

    let tainted = taint_a || taint_b;
    let value = json!({
        "kind": "paper-example",
        "example": 2,
        "checks": rows,
        "all_pass": all_pass,
        "tainted": tainted,
    });
    Ok((value, all_pass && !tainted))
}

/// Example bundle 3: in the twisted HNN group the base subgroup meets its
/// stable-letter conjugate in exactly ⟨x⁴⟩, and the base's coset profile
/// against the stable letter grows.
fn twisted_base_bundle(exec: Exec, cap: usize) -> Result<(Value, bool)> {
    let g = build_group("ex3")?;
    let base = subgroup_of(&g, "base", None)?;
    let fourth = subgroup_of(&g, "cyclic-span:x^4", None)?;
    let radius = 8usize;
    let t = g.parse_runs("t")?;

    let (meet_ok, taint_a, fail) =
        conjugate_intersection_matches(&g, &base, &fourth, &t, radius, exec, cap)?;

    let opts = ProfileOptions {
        r_max: 6,
        big_radius: 12,
        max_vertices: cap,
        exec,
        metric_gens: None,
    };
    let (row, profile_ok, taint_b) = profile_check(&base, "t", GrowthVerdict::Growing, &opts)?;

    let all_pass = meet_ok && profile_ok;
    let tainted = taint_a || taint_b;
    let value = json!({
        "kind": "paper-example",
        "example": 3,
        "checks": [
            {
                "name": "conjugate-intersection-is-fourth-powers",
                "ball_radius": radius,
                "holds": meet_ok,
                "failure": fail,
            },
            row,
        ],
        "all_pass": all_pass,
        "tainted": tainted,
    });
    Ok((value, all_pass && !tainted))
}

/// Example bundle 4: the coset graph of ⟨x⟩ in the doubling group is a
/// trivalent tree with a Cantor set of ends, while its quotient graph folds
/// the x-direction into 2^k-cycles above the base level and x-self-loops
/// below it.
fn graph_contrast_bundle(exec: Exec, cap: usize) -> Result<(Value, bool)> {
    let g = build_group("bs:1,2")?;
    let q = subgroup_of(&g, "cyclic-span:x", None)?;
    let ball_opts = BallOptions {
        exec,
        max_vertices: cap,
    };

    let lam = coset_graph_ball(&q, 6, &ball_opts)?;
    let mut tree_ok = lam.is_tree();
    for v in 0..lam.vertex_count() as u32 {
        if lam.dist[v as usize] <= 5 && lam.simple_valence(v) != 3 {
            tree_ok = false;
            break;
        }
    }

    let quot = quotient_graph_ball(&q, 7, &ball_opts)?;
    let x_label = quot
        .labels
        .iter()
        .position(|l| l == "x")
        .ok_or_else(|| CommError::InvalidSpec("quotient window lost the x label".into()))?;
    let cycles = quot.label_cycle_lengths(x_label);
    let mut fold_ok = [2usize, 4, 8].iter().all(|c| cycles.contains(c));
    // Below the base level the x-direction collapses to self-loops on the
    // pure stable-letter cosets.
    let spec = parse_subgroup_spec(q.spec_text())?;
    let rule = g
        .coset_rule(&spec)
        .ok_or_else(|| CommError::InvalidSpec("no exact coset naming for ⟨x⟩".into()))?;
    for m in 1..=3 {
        let w = g.parse_runs(&format!("t^-{m}"))?;
        let name = rule.coset_id(&g.nf(&runs_inverse(&w)));
        let holds = quot
            .vertices
            .iter()
            .position(|v| v == &name)
            .map(|v| quot.self_loops.contains(&(v as u32, x_label)))
            .unwrap_or(false);
        fold_ok &= holds;
    }

    let lam_ends = ends_estimate(&lam, &[1, 2, 3]);
    let ends_ok =
        lam_ends.counts == [3, 6, 12] && lam_ends.verdict == EndsVerdict::Many { growing: true };
    let quot_ends = ends_estimate(&quot, &[1, 2, 3]);
    let cayley = cayley_ball(&g, 6, &ball_opts)?;
    let cayley_ends = ends_estimate(&cayley, &[1, 2, 3]);

    let all_pass = tree_ok && fold_ok && ends_ok;
    let tainted = lam.tainted || quot.tainted || lam_ends.tainted || quot_ends.tainted;
    let value = json!({
        "kind": "paper-example",
        "example": 4,
        "checks": [
            {
                "name": "coset-graph-is-trivalent-tree",
                "radius": 6,
                "holds": tree_ok,
            },
            {
                "name": "quotient-folds-x-into-doubling-cycles",
                "radius": 7,
                "cycles": cycles,
                "holds": fold_ok,
            },
            {
                "name": "coset-graph-ends-double-per-probe",
                "probes": lam_ends.radii,
                "counts": lam_ends.counts,
                "verdict": lam_ends.verdict.name(),
                "holds": ends_ok,
            },
            {
                "name": "quotient-and-cayley-ends-for-contrast",
                "quotient": { "counts": quot_ends.counts, "verdict": quot_ends.verdict.name() },
                "cayley": { "counts": cayley_ends.counts, "verdict": cayley_ends.verdict.name() },
                "holds": true,
            },
        ],
        "all_pass": all_pass,
        "tainted": tainted,
    });
    Ok((value, all_pass && !tainted))
}
