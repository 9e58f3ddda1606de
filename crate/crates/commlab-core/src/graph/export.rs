//! Serialization of graph windows: a JSON document that round-trips losslessly
//! (distances are recomputed on load) and a Graphviz rendering for eyeballs.

use serde::{Deserialize, Serialize};

use crate::error::{CommError, Result};

use super::ball::multi_source_distances;
use super::{GraphKind, LabeledGraph};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GraphJson {
    group: String,
    subgroup: String,
    kind: String,
    radius: usize,
    tainted: bool,
    labels: Vec<String>,
    vertices: Vec<String>,
    /// Triples [source name, label name, target name].
    edges: Vec<[String; 3]>,
    self_loops: Vec<[String; 2]>,
}

pub fn to_json(graph: &LabeledGraph) -> String {
    let doc = GraphJson {
        group: graph.group.clone(),
        subgroup: graph.subgroup.clone(),
        kind: graph.kind.name().to_string(),
        radius: graph.radius,
        tainted: graph.tainted,
        labels: graph.labels.clone(),
        vertices: graph.vertices.clone(),
        edges: graph
            .edges
            .iter()
            .map(|&(u, l, v)| {
                [
                    graph.vertices[u as usize].clone(),
                    graph.labels[l].clone(),
                    graph.vertices[v as usize].clone(),
                ]
            })
            .collect(),
        self_loops: graph
            .self_loops
            .iter()
            .map(|&(u, l)| [graph.vertices[u as usize].clone(), graph.labels[l].clone()])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<LabeledGraph> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let kind = GraphKind::parse(&doc.kind)
        .ok_or_else(|| CommError::InvalidSpec(format!("unknown graph kind `{}`", doc.kind)))?;
    let mut v_idx = std::collections::HashMap::new();
    for (i, name) in doc.vertices.iter().enumerate() {
        if v_idx.insert(name.as_str(), i as u32).is_some() {
            return Err(CommError::InvalidSpec(format!(
                "duplicate vertex `{name}` in graph document"
            )));
        }
    }
    let mut l_idx = std::collections::HashMap::new();
    for (i, name) in doc.labels.iter().enumerate() {
        l_idx.insert(name.as_str(), i);
    }
    let resolve_v = |name: &str| -> Result<u32> {
        v_idx
            .get(name)
            .copied()
            .ok_or_else(|| CommError::InvalidSpec(format!("edge references unknown vertex `{name}`")))
    };
    let resolve_l = |name: &str| -> Result<usize> {
        l_idx
            .get(name)
            .copied()
            .ok_or_else(|| CommError::InvalidSpec(format!("edge references unknown label `{name}`")))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for [u, l, v] in &doc.edges {
        edges.push((resolve_v(u)?, resolve_l(l)?, resolve_v(v)?));
    }
    let mut self_loops = Vec::with_capacity(doc.self_loops.len());
    for [u, l] in &doc.self_loops {
        self_loops.push((resolve_v(u)?, resolve_l(l)?));
    }

    // Distances are derived data: rebuild them from the base vertex.
    let mut adj = vec![Vec::new(); doc.vertices.len()];
    for &(u, _, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let dist = if doc.vertices.is_empty() {
        Vec::new()
    } else {
        multi_source_distances(&adj, &[0])
    };

    Ok(LabeledGraph {
        group: doc.group,
        subgroup: doc.subgroup,
        kind,
        radius: doc.radius,
        tainted: doc.tainted,
        labels: doc.labels,
        vertices: doc.vertices,
        edges,
        self_loops,
        dist,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph; edges appear exactly as stored, so Cayley windows show
/// one arc per positive generator and coset windows show each direction it
/// was discovered in.
pub fn to_dot(graph: &LabeledGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph window {\n");
    out.push_str(&format!(
        "  // kind={} group=\"{}\" subgroup=\"{}\" radius={}{}\n",
        graph.kind.name(),
        dot_escape(&graph.group),
        dot_escape(&graph.subgroup),
        graph.radius,
        if graph.tainted { " tainted" } else { "" },
    ));
    for (i, name) in graph.vertices.iter().enumerate() {
        let d = graph.dist.get(i).copied().unwrap_or(u32::MAX);
        if d == u32::MAX {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", dot_escape(name)));
        } else {
            out.push_str(&format!(
                "  n{i} [label=\"{}\" dist={d}];\n",
                dot_escape(name)
            ));
        }
    }
    for &(u, l, v) in &graph.edges {
        out.push_str(&format!(
            "  n{u} -> n{v} [label=\"{}\"];\n",
            dot_escape(&graph.labels[l])
        ));
    }
    for &(u, l) in &graph.self_loops {
        out.push_str(&format!(
            "  n{u} -> n{u} [label=\"{}\"];\n",
            dot_escape(&graph.labels[l])
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;
    use crate::graph::{cayley_ball, quotient_graph_ball, BallOptions};
    use crate::subgroup::subgroup_of;

    #[test]
    fn json_round_trip_preserves_structure() {
        let g = build_group("bs:1,2").unwrap();
        let q = subgroup_of(&g, "cyclic-span:x", None).unwrap();
        let gr = quotient_graph_ball(&q, 4, &BallOptions::default()).unwrap();
        let text = to_json(&gr);
        let back = from_json(&text).unwrap();
        assert_eq!(back.kind, gr.kind);
        assert_eq!(back.group, gr.group);
        assert_eq!(back.subgroup, gr.subgroup);
        assert_eq!(back.radius, gr.radius);
        assert_eq!(back.tainted, gr.tainted);
        assert_eq!(back.labels, gr.labels);
        assert_eq!(back.vertices, gr.vertices);
        assert_eq!(back.edges, gr.edges);
        assert_eq!(back.self_loops, gr.self_loops);
        assert_eq!(back.dist, gr.dist);
    }

    #[test]
    fn json_uses_camel_case_and_names_not_indexes() {
        let g = build_group("free:2").unwrap();
        let gr = cayley_ball(&g, 1, &BallOptions::default()).unwrap();
        let text = to_json(&gr);
        assert!(text.contains("\"selfLoops\""));
        assert!(text.contains("\"kind\": \"cayley\""));
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let edges = doc["edges"].as_array().unwrap();
        assert!(edges
            .iter()
            .any(|e| e[0] == "1" && e[1] == "x" && e[2] == "x"));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let bad_kind = r#"{"group":"free:2","subgroup":"","kind":"mystery","radius":1,
            "tainted":false,"labels":[],"vertices":["1"],"edges":[],"selfLoops":[]}"#;
        assert!(from_json(bad_kind).is_err());
        let bad_edge = r#"{"group":"free:2","subgroup":"","kind":"cayley","radius":1,
            "tainted":false,"labels":["x"],"vertices":["1"],
            "edges":[["1","x","ghost"]],"selfLoops":[]}"#;
        assert!(from_json(bad_edge).is_err());
    }

    #[test]
    fn dot_output_is_a_digraph_with_labels() {
        let g = build_group("cyclic:3").unwrap();
        let gr = cayley_ball(&g, 3, &BallOptions::default()).unwrap();
        let dot = to_dot(&gr);
        assert!(dot.starts_with("digraph window {"));
        assert!(dot.contains("n0 [label=\"1\" dist=0];"));
        assert!(dot.contains("[label=\"x\"];"));
        assert!(dot.ends_with("}\n"));
    }
}
