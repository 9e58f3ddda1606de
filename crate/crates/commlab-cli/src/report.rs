//! JSON report builders and the reverse direction: rebuilding a witness
//! from a previously emitted report file.
//!
//! `serde_json` maps serialize with sorted keys here because every object is
//! built through `json!` with literal keys; combined with the deterministic
//! ball enumerations underneath, reports are byte-stable across runs and
//! worker counts.

use commlab_core::catalog::build_group;
use commlab_core::commensurator::{
    DisplacementReport, HausdorffProfile, VerifyOutcome, Witness, WitnessOptions,
};
use commlab_core::error::{CommError, Result};
use commlab_core::graph::{build_ball, BallOptions};
use commlab_core::group::GroupHandle;
use commlab_core::subgroup::{subgroup_of, Membership, SubgroupHandle};
use commlab_core::words::Runs;
use serde_json::{json, Value};

pub fn profile_json(
    group: &GroupHandle,
    q: &SubgroupHandle,
    g_elt: &Runs,
    p: &HausdorffProfile,
) -> Value {
    json!({
        "kind": "hausdorff-profile",
        "group": group.spec(),
        "subgroup": q.spec_text(),
        "g": group.alphabet().runs_text(&group.nf(g_elt)),
        "radii": p.radii,
        "lower_bounds": p.lower_bounds,
        "verdict": p.verdict.name(),
        "tainted": p.tainted,
    })
}

pub fn displacement_json(rep: &DisplacementReport) -> Value {
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "measured": c.measured,
                "exact": c.exact,
                "bound": c.bound,
                "holds": c.holds,
            })
        })
        .collect();
    json!({
        "element": rep.element,
        "norm": rep.norm,
        "checks": checks,
        "all_hold": rep.all_hold,
        "tainted": rep.tainted,
    })
}

/// Full witness report: declared sets, the covering set A ∪ B⁻¹, the verify
/// outcome, and — when verification succeeded — the α/β tables over the
/// subgroup members of the verified ball.
pub fn witness_json(
    w: &Witness,
    radius: usize,
    outcome: &VerifyOutcome,
    opts: &WitnessOptions,
    operation: &str,
) -> Result<Value> {
    let g = &w.group;
    let text = |r: &Runs| g.alphabet().runs_text(r);
    let words = |set: &[Runs]| set.iter().map(|r| text(r)).collect::<Vec<_>>();

    let verify = match outcome {
        VerifyOutcome::Verified => json!({ "radius": radius, "outcome": "verified" }),
        VerifyOutcome::Counterexample { element, reason } => json!({
            "radius": radius,
            "outcome": "counterexample",
            "element": element,
            "reason": reason,
        }),
    };

    let (alpha, beta) = if matches!(outcome, VerifyOutcome::Verified) {
        let ball = build_ball(
            g,
            radius,
            &BallOptions {
                exec: opts.exec,
                max_vertices: opts.max_vertices,
            },
        )?;
        let mut alpha_rows = Vec::new();
        let mut beta_rows = Vec::new();
        for i in 0..ball.len() as u32 {
            let h = ball.elem(i);
            if w.q.membership_canonical(h) != Membership::Yes {
                continue;
            }
            alpha_rows.push(json!([text(h), text(&w.alpha(h)?)]));
            beta_rows.push(json!([text(h), text(&w.beta(h)?)]));
        }
        (Value::Array(alpha_rows), Value::Array(beta_rows))
    } else {
        (Value::Null, Value::Null)
    };

    Ok(json!({
        "kind": "witness",
        "operation": operation,
        "group": g.spec(),
        "subgroup": w.q.spec_text(),
        "g": text(&w.g),
        "a": words(&w.a_set),
        "b": words(&w.b_set),
        "covering": words(&w.covering_set()),
        "verify": verify,
        "alpha": alpha,
        "beta": beta,
    }))
}

/// Rebuilds a witness from a report produced by [`witness_json`]. Only plain
/// subgroup specs survive the round trip; reports over derived subgroups
/// (intersections, preimages) must be re-derived from their inputs.
pub fn witness_from_json(v: &Value) -> Result<(Witness, Option<usize>)> {
    let field = |name: &str| -> Result<&str> {
        v.get(name).and_then(Value::as_str).ok_or_else(|| {
            CommError::InvalidSpec(format!("witness report is missing the `{name}` field"))
        })
    };
    let word_list = |name: &str| -> Result<Vec<String>> {
        let arr = v.get(name).and_then(Value::as_array).ok_or_else(|| {
            CommError::InvalidSpec(format!("witness report is missing the `{name}` list"))
        })?;
        arr.iter()
            .map(|e| {
                e.as_str().map(str::to_string).ok_or_else(|| {
                    CommError::InvalidSpec(format!("non-string entry in `{name}`"))
                })
            })
            .collect()
    };

    let group = build_group(field("group")?)?;
    let q = subgroup_of(&group, field("subgroup")?, None)?;
    let g_elt = group.parse_runs(field("g")?)?;
    let a_set: Vec<Runs> = word_list("a")?
        .iter()
        .map(|s| group.parse_runs(s))
        .collect::<Result<_>>()?;
    let b_set: Vec<Runs> = word_list("b")?
        .iter()
        .map(|s| group.parse_runs(s))
        .collect::<Result<_>>()?;
    let radius = v
        .pointer("/verify/radius")
        .and_then(Value::as_u64)
        .map(|r| r as usize);
    Ok((Witness::from_sets(&group, &q, &g_elt, &a_set, &b_set), radius))
}
