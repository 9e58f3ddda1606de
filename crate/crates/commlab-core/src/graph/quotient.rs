//! The Schreier graph of right cosets Q\G: vertices Qg, one edge Qg → Qgs per
//! signed generator s. Unlike the left-coset graph this is always locally
//! finite, and each label acts as a partial permutation of the window, so
//! self-loops and label cycles are meaningful (and kept).

use std::collections::{HashMap, VecDeque};

use crate::error::{CommError, Result};
use crate::group::{CosetRule, GroupHandle};
use crate::subgroup::{parse_subgroup_spec, Membership, SubgroupHandle};
use crate::words::{runs_concat, runs_inverse, Runs};

use super::ball::{build_ball, multi_source_distances, BallOptions};
use super::coset::{signed_labels, signed_steps};
use super::{GraphKind, LabeledGraph};

/// Qg is determined by g⁻¹Q, so a left-coset identifier applied to the
/// inverse names right cosets canonically.
fn right_id(g: &GroupHandle, rule: &dyn CosetRule, w: &Runs) -> String {
    rule.coset_id(&g.nf(&runs_inverse(w)))
}

fn quotient_graph_exact(
    g: &GroupHandle,
    q: &SubgroupHandle,
    rule: &dyn CosetRule,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let labels = signed_labels(g);
    let steps = signed_steps(g);
    let base = g.nf(&Vec::new());

    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut reps: Vec<Runs> = Vec::new();
    let mut dist: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, usize, u32)> = Vec::new();
    let mut self_loops: Vec<(u32, usize)> = Vec::new();

    let id0 = right_id(g, rule, &base);
    ids.insert(id0.clone(), 0);
    names.push(id0);
    reps.push(base);
    dist.push(0);

    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for (li, s) in steps.iter().enumerate() {
            let w = g.mul(&reps[u as usize], s);
            let id = right_id(g, rule, &w);
            let v = match ids.get(&id) {
                Some(&v) => v,
                None => {
                    if du as usize >= radius {
                        continue;
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
            if v == u {
                self_loops.push((u, li));
            } else {
                edges.push((u, li, v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    self_loops.sort_unstable();
    self_loops.dedup();
    Ok(LabeledGraph {
        group: g.spec().to_string(),
        subgroup: q.spec_text().to_string(),
        kind: GraphKind::Quotient,
        radius,
        tainted: false,
        labels,
        vertices: names,
        edges,
        self_loops,
        dist,
    })
}

fn quotient_graph_paired(
    g: &GroupHandle,
    q: &SubgroupHandle,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let ball = build_ball(g, radius, opts)?;
    let labels = signed_labels(g);
    let steps = signed_steps(g);
    let mut tainted = false;

    // Partition elements into right cosets: Qu == Qv iff u·v⁻¹ ∈ Q.
    let mut class = vec![u32::MAX; ball.len()];
    let mut rep_elem: Vec<u32> = Vec::new();
    for e in 0..ball.len() as u32 {
        let w = ball.elem(e);
        let mut unknown = false;
        let mut found = None;
        for (ci, &r) in rep_elem.iter().enumerate() {
            let probe = g.nf(&runs_concat(w, &runs_inverse(ball.elem(r))));
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
            None if unknown => tainted = true,
            None => {
                class[e as usize] = rep_elem.len() as u32;
                rep_elem.push(e);
            }
        }
    }

    let n_cosets = rep_elem.len();
    let mut edges: Vec<(u32, usize, u32)> = Vec::new();
    let mut self_loops: Vec<(u32, usize)> = Vec::new();
    for e in 0..ball.len() as u32 {
        let cu = class[e as usize];
        if cu == u32::MAX {
            continue;
        }
        for (li, s) in steps.iter().enumerate() {
            let w = g.mul(ball.elem(e), s);
            if let Some(j) = ball.get(&w) {
                let cv = class[j as usize];
                if cv == u32::MAX {
                    continue;
                }
                if cv == cu {
                    self_loops.push((cu, li));
                } else {
                    edges.push((cu, li, cv));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    self_loops.sort_unstable();
    self_loops.dedup();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n_cosets];
    for &(u, _, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let dist = multi_source_distances(&adj, &[0]);
    let vertices = rep_elem.iter().map(|&r| g.key(ball.elem(r))).collect();
    Ok(LabeledGraph {
        group: g.spec().to_string(),
        subgroup: q.spec_text().to_string(),
        kind: GraphKind::Quotient,
        radius,
        tainted,
        labels,
        vertices,
        edges,
        self_loops,
        dist,
    })
}

/// Window onto the Schreier graph of right cosets of `q`, out to coset-graph
/// distance `radius` from the base coset.
pub fn quotient_graph_ball(
    q: &SubgroupHandle,
    radius: usize,
    opts: &BallOptions,
) -> Result<LabeledGraph> {
    let g = q.ambient().clone();
    if let Ok(spec) = parse_subgroup_spec(q.spec_text()) {
        if let Some(rule) = g.coset_rule(&spec) {
            return quotient_graph_exact(&g, q, rule.as_ref(), radius, opts);
        }
    }
    quotient_graph_paired(&g, q, radius, opts)
}
