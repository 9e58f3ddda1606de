//! End-count estimation from a finite graph window: delete a ball of each
//! probe radius around the base vertex and count the unbounded-looking
//! components, i.e. those that reach the window frontier. A component that
//! dies before the frontier is a bounded island and says nothing about ends.

use super::LabeledGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndsVerdict {
    /// The window exhausted the graph strictly inside its radius.
    Zero,
    One,
    Two,
    /// At least three frontier components; `growing` records that the count
    /// increased at every probe, the signature of a tree-like object with a
    /// Cantor set of ends.
    Many { growing: bool },
    Inconclusive,
}

impl EndsVerdict {
    pub fn name(self) -> &'static str {
        match self {
            EndsVerdict::Zero => "zero",
            EndsVerdict::One => "one",
            EndsVerdict::Two => "two",
            EndsVerdict::Many { growing: true } => "many-growing",
            EndsVerdict::Many { growing: false } => "many",
            EndsVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EndsReport {
    pub radii: Vec<usize>,
    /// Frontier-touching component counts after deleting each ball.
    pub counts: Vec<usize>,
    pub verdict: EndsVerdict,
    pub tainted: bool,
}

/// Count components of {dist ≥ r} that contain a vertex of the outermost
/// layer. Probe radii must stay below the window radius; callers usually
/// probe up to half of it.
pub fn ends_estimate(graph: &LabeledGraph, radii: &[usize]) -> EndsReport {
    let n = graph.vertex_count();
    let reachable: Vec<bool> = graph.dist.iter().map(|&d| d != u32::MAX).collect();
    let max_dist = graph
        .dist
        .iter()
        .filter(|&&d| d != u32::MAX)
        .max()
        .copied()
        .unwrap_or(0);

    if (max_dist as usize) < graph.radius {
        // The breadth-first search ran out of graph before the radius: the
        // object is finite, so it has no ends.
        return EndsReport {
            radii: radii.to_vec(),
            counts: vec![0; radii.len()],
            verdict: EndsVerdict::Zero,
            tainted: graph.tainted,
        };
    }

    let nb = graph.simple_neighbors();
    let mut counts = Vec::with_capacity(radii.len());
    for &r in radii {
        assert!(r >= 1 && r < graph.radius, "probe radius {r} out of range");
        // Flood the surviving subgraph.
        let mut comp = vec![u32::MAX; n];
        let mut next = 0u32;
        for start in 0..n {
            if !reachable[start] || (graph.dist[start] as usize) < r || comp[start] != u32::MAX {
                continue;
            }
            let id = next;
            next += 1;
            let mut stack = vec![start as u32];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                for &v in &nb[u as usize] {
                    let vi = v as usize;
                    if reachable[vi] && graph.dist[vi] as usize >= r && comp[vi] == u32::MAX {
                        comp[vi] = id;
                        stack.push(v);
                    }
                }
            }
        }
        let mut touching = std::collections::BTreeSet::new();
        for v in 0..n {
            if reachable[v] && graph.dist[v] == max_dist && comp[v] != u32::MAX {
                touching.insert(comp[v]);
            }
        }
        counts.push(touching.len());
    }

    let verdict = classify(&counts);
    EndsReport {
        radii: radii.to_vec(),
        counts,
        verdict,
        tainted: graph.tainted,
    }
}

fn classify(counts: &[usize]) -> EndsVerdict {
    if counts.is_empty() {
        return EndsVerdict::Inconclusive;
    }
    let tail = &counts[counts.len() / 2..];
    if tail.iter().all(|&c| c == tail[0]) {
        return match tail[0] {
            0 => EndsVerdict::Inconclusive,
            1 => EndsVerdict::One,
            2 => EndsVerdict::Two,
            _ => EndsVerdict::Many { growing: false },
        };
    }
    if counts.windows(2).all(|w| w[1] > w[0]) && *counts.last().unwrap() >= 3 {
        return EndsVerdict::Many { growing: true };
    }
    EndsVerdict::Inconclusive
}
