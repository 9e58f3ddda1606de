//! Finite windows onto three graphs attached to a group G and a subgroup Q:
//!
//! * the **Cayley graph** of G (vertices: elements, edges: right
//!   multiplication by generators);
//! * the **left-coset graph** Λ(G, Q) (vertices: cosets gQ, edges: gQ — sgQ
//!   for generators s applied on the left of the coset); its local finiteness
//!   at the base vertex is the graph-side signature of quasi-normality;
//! * the **Schreier quotient graph** (vertices: right cosets Qg, edges: right
//!   multiplication), which is always locally finite.
//!
//! Every builder works inside a radius-R ball and records enough metadata
//! (distances, taint flags) for downstream verdicts to stay honest about
//! truncation.

pub mod ball;
pub mod coset;
pub mod ends;
pub mod export;
pub mod quotient;

pub use ball::{build_ball, letter_steps, multi_source_distances, Ball, BallOptions};
pub use coset::{coset_graph_ball, valence_profile, ValenceReport, ValenceVerdict};
pub use ends::{ends_estimate, EndsReport, EndsVerdict};
pub use export::{from_json, to_dot, to_json};
pub use quotient::quotient_graph_ball;

use std::collections::BTreeSet;

use crate::error::Result;
use crate::group::GroupHandle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Cayley,
    Coset,
    Quotient,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Cayley => "cayley",
            GraphKind::Coset => "coset",
            GraphKind::Quotient => "quotient",
        }
    }

    pub fn parse(s: &str) -> Option<GraphKind> {
        match s {
            "cayley" => Some(GraphKind::Cayley),
            "coset" => Some(GraphKind::Coset),
            "quotient" => Some(GraphKind::Quotient),
            _ => None,
        }
    }
}

/// A finite edge-labeled graph window. Vertex 0 is always the base point
/// (identity element or coset), `dist` is graph distance from it as
/// discovered, and `tainted` records that some membership query came back
/// unknown, so structural verdicts read off this window are advisory.
pub struct LabeledGraph {
    pub group: String,
    pub subgroup: String,
    pub kind: GraphKind,
    pub radius: usize,
    pub tainted: bool,
    pub labels: Vec<String>,
    /// Canonical vertex names; unique within the graph.
    pub vertices: Vec<String>,
    /// Directed labeled edges (src, label, dst) with src != dst, deduplicated.
    pub edges: Vec<(u32, usize, u32)>,
    pub self_loops: Vec<(u32, usize)>,
    pub dist: Vec<u32>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Undirected simple-graph neighbor sets (labels and duplicates dropped).
    pub fn simple_neighbors(&self) -> Vec<BTreeSet<u32>> {
        let mut nb = vec![BTreeSet::new(); self.vertices.len()];
        for &(u, _, v) in &self.edges {
            nb[u as usize].insert(v);
            nb[v as usize].insert(u);
        }
        nb
    }

    pub fn simple_edge_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        for &(u, _, v) in &self.edges {
            seen.insert((u.min(v), u.max(v)));
        }
        seen.len()
    }

    /// Number of distinct neighbors of a vertex (self-loops excluded).
    pub fn simple_valence(&self, v: u32) -> usize {
        let mut nb = BTreeSet::new();
        for &(a, _, b) in &self.edges {
            if a == v {
                nb.insert(b);
            }
            if b == v {
                nb.insert(a);
            }
        }
        nb.len()
    }

    /// Connected, acyclic as a simple undirected graph, and loop-free.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        if !self.self_loops.is_empty() {
            return false;
        }
        let nb = self.simple_neighbors();
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(u) = stack.pop() {
            for &v in &nb[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n && self.simple_edge_count() == n - 1
    }

    /// Edges of a given label leaving each vertex, as (src, dst) pairs.
    pub fn edges_with_label(&self, label: usize) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .filter(|&&(_, l, _)| l == label)
            .map(|&(u, _, v)| (u, v))
            .collect()
    }

    /// Cycle lengths of the permutation-like action of one label, restricted
    /// to vertices where the labeled step stays inside the window. Each cycle
    /// is reported once; fixed points come from self-loops.
    pub fn label_cycle_lengths(&self, label: usize) -> Vec<usize> {
        let n = self.vertices.len();
        let mut next = vec![u32::MAX; n];
        for (u, v) in self.edges_with_label(label) {
            next[u as usize] = v;
        }
        for &(u, l) in &self.self_loops {
            if l == label {
                next[u as usize] = u;
            }
        }
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] || next[start] == u32::MAX {
                continue;
            }
            // Walk until revisiting or falling off the window.
            let mut path = Vec::new();
            let mut cur = start;
            loop {
                if seen[cur] {
                    // Closed back onto this walk: the tail from `cur` onward
                    // is a genuine cycle only if cur is on the current path.
                    if let Some(pos) = path.iter().position(|&p| p == cur) {
                        lengths.push(path.len() - pos);
                    }
                    break;
                }
                seen[cur] = true;
                path.push(cur);
                let nx = next[cur];
                if nx == u32::MAX {
                    break;
                }
                cur = nx as usize;
            }
        }
        lengths.sort_unstable();
        lengths
    }
}

/// The Cayley graph of `g` out to the given radius.
pub fn cayley_ball(g: &GroupHandle, radius: usize, opts: &BallOptions) -> Result<LabeledGraph> {
    let ball = build_ball(g, radius, opts)?;
    let labels: Vec<String> = g.alphabet().names().to_vec();
    let n = ball.len();
    let per_vertex = opts.exec.map(&(0..n as u32).collect::<Vec<u32>>(), |&u| {
        let mut es = Vec::new();
        let mut loops = Vec::new();
        for i in 0..labels.len() {
            let v = g.mul(ball.elem(u), &crate::words::single_run(i, 1));
            if let Some(j) = ball.get(&v) {
                if j == u {
                    loops.push((u, i));
                } else {
                    es.push((u, i, j));
                }
            }
        }
        (es, loops)
    });
    let mut edges = Vec::new();
    let mut self_loops = Vec::new();
    for (es, loops) in per_vertex {
        edges.extend(es);
        self_loops.extend(loops);
    }
    let vertices = (0..n as u32).map(|i| g.key(ball.elem(i))).collect();
    let dist = (0..n as u32).map(|i| ball.dist(i)).collect();
    Ok(LabeledGraph {
        group: g.spec().to_string(),
        subgroup: String::new(),
        kind: GraphKind::Cayley,
        radius,
        tainted: false,
        labels,
        vertices,
        edges,
        self_loops,
        dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;

    #[test]
    fn free_rank_two_radius_one() {
        let g = build_group("free:2").unwrap();
        let gr = cayley_ball(&g, 1, &BallOptions::default()).unwrap();
        assert_eq!(gr.vertex_count(), 5);
        assert_eq!(gr.simple_edge_count(), 4);
        assert!(gr.self_loops.is_empty());
        assert!(gr.is_tree());
        assert_eq!(gr.vertices[0], "1");
        assert_eq!(gr.dist[0], 0);
    }

    #[test]
    fn free_cayley_balls_are_trees() {
        let g = build_group("free:2").unwrap();
        for r in 1..=4 {
            let gr = cayley_ball(&g, r, &BallOptions::default()).unwrap();
            assert!(gr.is_tree(), "radius {r}");
        }
    }

    #[test]
    fn cyclic_cayley_graph_closes_up() {
        let g = build_group("cyclic:6").unwrap();
        let gr = cayley_ball(&g, 6, &BallOptions::default()).unwrap();
        assert_eq!(gr.vertex_count(), 6);
        // A single 6-cycle: 6 simple edges, no tree.
        assert_eq!(gr.simple_edge_count(), 6);
        assert!(!gr.is_tree());
        assert_eq!(gr.label_cycle_lengths(0), vec![6]);
    }

    #[test]
    fn order_one_group_is_a_loop() {
        let g = build_group("cyclic:1").unwrap();
        let gr = cayley_ball(&g, 3, &BallOptions::default()).unwrap();
        assert_eq!(gr.vertex_count(), 1);
        assert_eq!(gr.self_loops, vec![(0, 0)]);
        assert!(!gr.is_tree());
    }

    #[test]
    fn relation_creates_cycle_in_bs_ball() {
        let g = build_group("bs:1,2").unwrap();
        let gr = cayley_ball(&g, 3, &BallOptions::default()).unwrap();
        assert!(!gr.is_tree());
        // Vertex names are canonical forms, so lookups are stable.
        assert!(gr.vertices.iter().any(|v| v == "x^2"));
    }
}
