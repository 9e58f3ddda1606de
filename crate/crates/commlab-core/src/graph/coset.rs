//! The left-coset graph Λ(G, Q): vertices are cosets gQ, and two cosets are
//! adjacent when some representative of one reaches the other by a single
//! generator on the right (equivalently, uQ ~ vQ iff v⁻¹u meets Q·s·Q for a
//! generator s). Degenerate steps that stay inside the same coset are not
//! edges.
//!
//! Local finiteness of this graph at the base vertex is exactly the
//! quasi-normality probe: QsQ splits into finitely many left cosets for each
//! generator s iff the base valence stabilizes as the search budget grows.

use std::collections::{HashMap, VecDeque};

use crate::error::{CommError, Result};
use crate::group::{CosetRule, GroupHandle};
use crate::subgroup::{parse_subgroup_spec, Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, single_run, Runs};

use super::ball::{build_ball, multi_source_distances, BallOptions};
use super::{GraphKind, LabeledGraph};

/// Signed-letter label names in a fixed order: x, x⁻¹, y, y⁻¹, …
pub(crate) fn signed_labels(g: &GroupHandle) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..g.alphabet().len() {
        out.push(g.alphabet().runs_text(&single_run(i, 1)));
        out.push(g.alphabet().runs_text(&single_run(i, -1)));
    }
    out
}

pub(crate) fn signed_steps(g: &GroupHandle) -> Vec<Runs> {
    let mut out = Vec::new();
    for i in 0..g.alphabet().len() {
        out.push(single_run(i, 1));
        out.push(single_run(i, -1));
    }
    out
}

/// Label index of the final letter of a step word (steps from coset rules end
/// in the generator that crosses between cosets).
fn step_label(step: &Runs) -> usize {
    let &(i, e) = step.last().expect("coset steps are nonempty");
    2 * i + usize::from(e < 0)
}

/// Exact route: breadth-first search over coset identifiers supplied by a
/// registered rule.
fn coset_graph_exact(
    g: &GroupHandle,
    q: &SubgroupHandle,
    rule: &dyn CosetRule,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let labels = signed_labels(g);
    let base = g.nf(&Vec::new());
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut reps: Vec<Runs> = Vec::new();
    let mut dist: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, usize, u32)> = Vec::new();

    let id0 = rule.coset_id(&base);
    ids.insert(id0.clone(), 0);
    names.push(id0);
    reps.push(base);
    dist.push(0);

    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for step in rule.steps(&reps[u as usize]) {
            let w = g.mul(&reps[u as usize], &step);
            let id = rule.coset_id(&w);
            let v = match ids.get(&id) {
                Some(&v) => v,
                None => {
                    if du as usize >= radius {
                        continue; // frontier: do not open new cosets
                    }
                    if names.len() >= opts.max_vertices {
                        return Err(CommError::BudgetExceeded {
                            cap: opts.max_vertices,
                        });
                    }
                    let v = names.len() as u32;
                    ids.insert(id.clone(), v);
                    names.push(id);
                    reps.push(w);
                    dist.push(du + 1);
                    queue.push_back(v);
                    v
                }
            };
            if v != u {
                edges.push((u, step_label(&step), v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(LabeledGraph {
        group: g.spec().to_string(),
        subgroup: q.spec_text().to_string(),
        kind: GraphKind::Coset,
        radius,
        tainted: false,
        labels,
        vertices: names,
        edges,
        self_loops: Vec::new(),
        dist,
    })
}

/// Partition of a ball into left cosets of `q` by pairwise membership tests.
/// `class[e]` is the coset index of element `e`, or `u32::MAX` when an
/// unknown membership prevented classification (which taints the window).
pub(crate) struct BallCosets {
    pub class: Vec<u32>,
    /// Index into the ball of the first (hence shortlex-least) member seen.
    pub rep_elem: Vec<u32>,
    pub tainted: bool,
}

pub(crate) fn pair_into_left_cosets(
    g: &GroupHandle,
    q: &SubgroupHandle,
    ball: &super::Ball,
) -> BallCosets {
    let mut class = vec![u32::MAX; ball.len()];
    let mut rep_elem: Vec<u32> = Vec::new();
    let mut tainted = false;
    for e in 0..ball.len() as u32 {
        let w = ball.elem(e);
        let mut unknown = false;
        let mut found = None;
        for (ci, &r) in rep_elem.iter().enumerate() {
            // Same left coset iff rep⁻¹ · w lies in Q.
            let probe = g.nf(&runs_concat(&runs_inverse(ball.elem(r)), w));
            match q.membership_canonical(&probe) {
                Membership::Yes => {
                    found = Some(ci as u32);
                    break;
                }
                Membership::No => {}
                Membership::Unknown { .. } => unknown = true,
            }
        }
        match found {
            Some(ci) => class[e as usize] = ci,
            None if unknown => tainted = true, // leave unclassified
            None => {
                class[e as usize] = rep_elem.len() as u32;
                rep_elem.push(e);
            }
        }
    }
    BallCosets {
        class,
        rep_elem,
        tainted,
    }
}

/// Generic route: materialize a ball, partition it into cosets via
/// membership, and project generator steps.
fn coset_graph_paired(
    g: &GroupHandle,
    q: &SubgroupHandle,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let ball = build_ball(g, radius, opts)?;
    let cosets = pair_into_left_cosets(g, q, &ball);
    let labels = signed_labels(g);
    let steps = signed_steps(g);
    let n_cosets = cosets.rep_elem.len();

    let mut edges: Vec<(u32, usize, u32)> = Vec::new();
    for e in 0..ball.len() as u32 {
        let cu = cosets.class[e as usize];
        if cu == u32::MAX {
            continue;
        }
        for (li, s) in steps.iter().enumerate() {
            let w = g.mul(ball.elem(e), s);
            if let Some(j) = ball.get(&w) {
                let cv = cosets.class[j as usize];
                if cv != u32::MAX && cv != cu {
                    edges.push((cu, li, cv));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    // Coset-graph distances from the base coset.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n_cosets];
    for &(u, _, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let dist = multi_source_distances(&adj, &[0]);

    let vertices = cosets
        .rep_elem
        .iter()
        .map(|&r| g.key(ball.elem(r)))
        .collect();
    Ok(LabeledGraph {
        group: g.spec().to_string(),
        subgroup: q.spec_text().to_string(),
        kind: GraphKind::Coset,
        radius,
        tainted: cosets.tainted,
        labels,
        vertices,
        edges,
        self_loops: Vec::new(),
        dist,
    })
}

/// Window onto Λ(G, Q). Uses an exact coset rule when the group engine
/// registers one for this subgroup; otherwise partitions a radius-R element
/// ball by membership.
pub fn coset_graph_ball(
    q: &SubgroupHandle,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let g = q.ambient().clone();
    if let Ok(spec) = parse_subgroup_spec(q.spec_text()) {
        if let Some(rule) = g.coset_rule(&spec) {
            return coset_graph_exact(&g, q, rule.as_ref(), radius, opts);
        }
    }
    coset_graph_paired(&g, q, radius, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValenceVerdict {
    /// The base valence was constant over the trailing half of the budgets.
    Bounded,
    /// Strictly increasing at every budget step: evidence the base vertex has
    /// infinite valence (Q is not quasi-normal).
    UnboundedEvidence,
    Inconclusive,
}

impl ValenceVerdict {
    pub fn name(self) -> &'static str {
        match self {
            ValenceVerdict::Bounded => "bounded",
            ValenceVerdict::UnboundedEvidence => "unbounded-evidence",
            ValenceVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValenceReport {
    pub budgets: Vec<usize>,
    pub valences: Vec<usize>,
    pub verdict: ValenceVerdict,
    pub tainted: bool,
}

/// Valence of the base vertex of Λ(G, Q) as a function of discovery budget:
/// the number of distinct neighboring cosets q·s·Q over subgroup members q of
/// word length at most the budget. A quasi-normal subgroup gives a plateau; a
/// strictly growing profile certifies vertices of Λ acquire new neighbors at
/// every depth.
pub fn valence_profile(
    q: &SubgroupHandle,
    budgets: &[usize],
    opts: &BallOptions,
) -> Result<ValenceReport> {
    assert!(!budgets.is_empty(), "need at least one budget");
    let g = q.ambient().clone();
    let max_budget = *budgets.iter().max().unwrap();
    let ball = build_ball(&g, max_budget + 1, opts)?;
    let steps = signed_steps(&g);
    let mut tainted = false;

    // Subgroup members within the largest budget, by distance.
    let mut members: Vec<u32> = Vec::new();
    for e in 0..ball.len() as u32 {
        if ball.dist(e) as usize > max_budget {
            break;
        }
        match q.membership_canonical(ball.elem(e)) {
            Membership::Yes => members.push(e),
            Membership::No => {}
            Membership::Unknown { .. } => tainted = true,
        }
    }

    let rule = parse_subgroup_spec(q.spec_text())
        .ok()
        .and_then(|spec| g.coset_rule(&spec));

    // Neighbor candidates q·s (s a signed letter), tagged by |q|.
    let mut cand: Vec<(usize, Runs)> = Vec::new();
    for &m in &members {
        let d = ball.dist(m) as usize;
        for s in &steps {
            cand.push((d, g.mul(ball.elem(m), s)));
        }
    }

    let mut valences = Vec::with_capacity(budgets.len());
    match rule {
        Some(rule) => {
            let base_id = rule.coset_id(&g.nf(&Vec::new()));
            for &b in budgets {
                let mut ids: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
                for (d, w) in &cand {
                    if *d <= b {
                        let id = rule.coset_id(w);
                        if id != base_id {
                            ids.insert(id);
                        }
                    }
                }
                valences.push(ids.len());
            }
        }
        None => {
            // Pair candidates against each other by membership.
            let mut reps: Vec<Runs> = Vec::new(); // distinct non-base cosets
            let mut classes: Vec<Option<usize>> = Vec::new(); // per candidate; None = base or unknown
            for (_, w) in &cand {
                match q.membership_canonical(w) {
                    Membership::Yes => {
                        classes.push(None); // lands back in Q: not a neighbor
                        continue;
                    }
                    Membership::Unknown { .. } => {
                        tainted = true;
                        classes.push(None);
                        continue;
                    }
                    Membership::No => {}
                }
                let mut found = None;
                let mut unknown = false;
                for (ci, r) in reps.iter().enumerate() {
                    let probe = g.nf(&runs_concat(&runs_inverse(r), w));
                    match q.membership_canonical(&probe) {
                        Membership::Yes => {
                            found = Some(ci);
                            break;
                        }
                        Membership::No => {}
                        Membership::Unknown { .. } => unknown = true,
                    }
                }
                if found.is_none() && unknown {
                    tainted = true;
                    classes.push(None);
                } else if let Some(ci) = found {
                    classes.push(Some(ci));
                } else {
                    reps.push(w.clone());
                    classes.push(Some(reps.len() - 1));
                }
            }
            for &b in budgets {
                let mut seen: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
                for ((d, _), cls) in cand.iter().zip(&classes) {
                    if *d <= b {
                        if let Some(ci) = cls {
                            seen.insert(*ci);
                        }
                    }
                }
                valences.push(seen.len());
            }
        }
    }

    let verdict = growth_verdict(&valences);
    Ok(ValenceReport {
        budgets: budgets.to_vec(),
        valences,
        verdict,
        tainted,
    })
}

/// Shared plateau-vs-growth call used by budgeted profiles.
pub(crate) fn growth_verdict(values: &[usize]) -> ValenceVerdict {
    if values.len() < 2 {
        return ValenceVerdict::Inconclusive;
    }
    let tail = &values[values.len() / 2..];
    if tail.iter().all(|&v| v == tail[0]) {
        return ValenceVerdict::Bounded;
    }
    if values.windows(2).all(|w| w[1] > w[0]) {
        return ValenceVerdict::UnboundedEvidence;
    }
    ValenceVerdict::Inconclusive
}
