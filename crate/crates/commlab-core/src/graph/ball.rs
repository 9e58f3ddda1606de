//! Metric balls: all group elements within a given word length, stored as
//! canonical runs with exact distances.

use std::collections::HashMap;

use crate::error::{CommError, Result};
use crate::exec::Exec;
use crate::group::GroupHandle;
use crate::words::{runs_shortlex_cmp, single_run, Runs};

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    pub exec: Exec,
    /// Hard cap on ball size; exceeding it aborts with a budget error rather
    /// than silently truncating.
    pub max_vertices: usize,
}

impl Default for BallOptions {
    fn default() -> BallOptions {
        BallOptions {
            exec: Exec::default(),
            max_vertices: 200_000,
        }
    }
}

/// A radius-R ball around the identity. Elements are sorted by (distance,
/// shortlex of canonical runs), so indexes are deterministic across runs and
/// execution modes.
#[derive(Debug)]
pub struct Ball {
    pub radius: usize,
    elems: Vec<Runs>,
    dist: Vec<u32>,
    index: HashMap<Runs, u32>,
    /// `layer_start[d]..layer_start[d+1]` indexes the distance-d layer.
    layer_start: Vec<usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, i: u32) -> &Runs {
        &self.elems[i as usize]
    }

    pub fn elems(&self) -> &[Runs] {
        &self.elems
    }

    pub fn dist(&self, i: u32) -> u32 {
        self.dist[i as usize]
    }

    /// Index of a canonical element, if it lies in the ball.
    pub fn get(&self, r: &Runs) -> Option<u32> {
        self.index.get(r).copied()
    }

    /// Indexes of the distance-d layer.
    pub fn layer(&self, d: usize) -> std::ops::Range<usize> {
        self.layer_start[d]..self.layer_start[d + 1]
    }

    /// Neighbor lists under right multiplication by the given steps, with
    /// edges leaving the ball dropped. Symmetric when the step set is.
    pub fn adjacency(&self, g: &GroupHandle, steps: &[Runs], exec: Exec) -> Vec<Vec<u32>> {
        exec.map(&self.elems, |w| {
            let mut out = Vec::with_capacity(steps.len());
            for s in steps {
                let v = g.mul(w, s);
                if let Some(j) = self.get(&v) {
                    out.push(j);
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
    }
}

/// Both-signs generator steps: the standard word metric.
pub fn letter_steps(g: &GroupHandle) -> Vec<Runs> {
    let mut steps = Vec::new();
    for i in 0..g.alphabet().len() {
        steps.push(single_run(i, 1));
        steps.push(single_run(i, -1));
    }
    steps
}

pub fn build_ball(g: &GroupHandle, radius: usize, opts: &BallOptions) -> Result<Ball> {
    let steps = letter_steps(g);
    build_ball_with_steps(g, &steps, radius, opts)
}

/// Ball in the word metric generated by arbitrary step words (each counted as
/// length one).
pub fn build_ball_with_steps(
    g: &GroupHandle,
    steps: &[Runs],
    radius: usize,
    opts: &BallOptions,
) -> Result<Ball> {
    let mut elems: Vec<Runs> = vec![Vec::new()];
    let mut dist: Vec<u32> = vec![0];
    let mut index: HashMap<Runs, u32> = HashMap::new();
    index.insert(Vec::new(), 0);
    let mut layer_start = vec![0usize, 1];

    let mut frontier: Vec<Runs> = vec![Vec::new()];
    for d in 1..=radius {
        let batches = opts.exec.map(&frontier, |w| {
            steps.iter().map(|s| g.mul(w, s)).collect::<Vec<Runs>>()
        });
        let mut fresh: Vec<Runs> = Vec::new();
        for batch in batches {
            for v in batch {
                if !index.contains_key(&v) {
                    // Mark eagerly so duplicates within the layer collapse.
                    index.insert(v.clone(), u32::MAX);
                    fresh.push(v);
                }
            }
        }
        fresh.sort_unstable_by(|a, b| runs_shortlex_cmp(a, b));
        if elems.len() + fresh.len() > opts.max_vertices {
            return Err(CommError::BudgetExceeded {
                cap: opts.max_vertices,
            });
        }
        for v in &fresh {
            let id = elems.len() as u32;
            index.insert(v.clone(), id);
            elems.push(v.clone());
            dist.push(d as u32);
        }
        layer_start.push(elems.len());
        frontier = fresh;
        if frontier.is_empty() {
            // The group is exhausted; pad layer bounds.
            for _ in d + 1..=radius {
                layer_start.push(elems.len());
            }
            break;
        }
    }
    Ok(Ball {
        radius,
        elems,
        dist,
        index,
        layer_start,
    })
}

/// BFS distances from a source set along precomputed adjacency; `u32::MAX`
/// marks unreachable vertices.
pub fn multi_source_distances(adj: &[Vec<u32>], sources: &[u32]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if dist[s as usize] == u32::MAX {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in &adj[u as usize] {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;

    #[test]
    fn free_group_ball_counts() {
        let g = build_group("free:2").unwrap();
        let ball = build_ball(&g, 3, &BallOptions::default()).unwrap();
        // 1 + 4 + 12 + 36.
        assert_eq!(ball.len(), 53);
        assert_eq!(ball.layer(0).len(), 1);
        assert_eq!(ball.layer(1).len(), 4);
        assert_eq!(ball.layer(2).len(), 12);
        assert_eq!(ball.layer(3).len(), 36);
        // Identity first, layer ordering by distance.
        assert!(ball.elem(0).is_empty());
        assert_eq!(ball.dist(0), 0);
    }

    #[test]
    fn relations_shrink_balls() {
        let free = build_group("free:2").unwrap();
        let bs = build_group("bs:1,2").unwrap();
        let bf = build_ball(&free, 3, &BallOptions::default()).unwrap();
        let bb = build_ball(&bs, 3, &BallOptions::default()).unwrap();
        // Up to radius 2 the Cayley balls agree (the defining relation has
        // length 5); at radius 3 identifications like t⁻¹xt = x² bite.
        assert_eq!(bf.layer(2).len(), bb.layer(2).len());
        assert!(bb.len() < bf.len());
        // t⁻¹ x t sits at distance 2, as the element x².
        let w = bs.parse_runs("t^-1 x t").unwrap();
        let idx = bb.get(&bs.nf(&w)).unwrap();
        assert_eq!(bb.dist(idx), 2);
    }

    #[test]
    fn budget_overflow_is_loud() {
        let g = build_group("free:2").unwrap();
        let err = build_ball(
            &g,
            5,
            &BallOptions {
                exec: Exec::Seq,
                max_vertices: 50,
            },
        )
        .unwrap_err();
        assert!(matches!(err, CommError::BudgetExceeded { cap: 50 }));
    }

    #[test]
    fn finite_groups_exhaust() {
        let g = build_group("cyclic:6").unwrap();
        let ball = build_ball(&g, 10, &BallOptions::default()).unwrap();
        assert_eq!(ball.len(), 6);
        assert_eq!(ball.layer(3).len(), 1); // x^3 is the antipode
        assert_eq!(ball.layer(4).len(), 0);
    }

    #[test]
    fn executors_agree_on_ball_contents() {
        let g = build_group("bs:1,2").unwrap();
        let seq = build_ball(
            &g,
            4,
            &BallOptions {
                exec: Exec::Seq,
                max_vertices: 100_000,
            },
        )
        .unwrap();
        let par = build_ball(
            &g,
            4,
            &BallOptions {
                exec: Exec::Par,
                max_vertices: 100_000,
            },
        )
        .unwrap();
        assert_eq!(seq.len(), par.len());
        for i in 0..seq.len() as u32 {
            assert_eq!(seq.elem(i), par.elem(i));
            assert_eq!(seq.dist(i), par.dist(i));
        }
    }

    #[test]
    fn distances_via_adjacency_match_layers() {
        let g = build_group("bs:1,2").unwrap();
        let ball = build_ball(&g, 4, &BallOptions::default()).unwrap();
        let adj = ball.adjacency(&g, &letter_steps(&g), Exec::Seq);
        let dist = multi_source_distances(&adj, &[0]);
        for i in 0..ball.len() {
            assert_eq!(dist[i], ball.dist(i as u32), "element {i}");
        }
    }
}
