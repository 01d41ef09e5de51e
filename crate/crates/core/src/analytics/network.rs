use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::escape::escape;
use serde::{Deserialize, Serialize};

use super::{AnalyticsError, Bucket, PaperClassification};

/// Undirected institution pair with `inst_a < inst_b`; weight counts the
/// collaborative papers both appear on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoauthorEdge {
    pub inst_a: String,
    pub inst_b: String,
    pub weight: usize,
}

/// Every pair of distinct labelled institutions on a collaborative paper adds
/// one to that pair's weight. Edges come out sorted by endpoints.
pub fn build_collab_network(classifications: &[PaperClassification]) -> Vec<CoauthorEdge> {
    let mut weights: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for c in classifications.iter().filter(|c| c.bucket == Bucket::Collaborative) {
        let insts = c.institutions();
        for (i, a) in insts.iter().enumerate() {
            for b in &insts[i + 1..] {
                *weights.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    weights
        .into_iter()
        .map(|((a, b), weight)| CoauthorEdge {
            inst_a: a.to_string(),
            inst_b: b.to_string(),
            weight,
        })
        .collect()
}

/// Keeps edges whose weight is strictly greater than `min_exclusive`.
pub fn filter_edges(edges: &[CoauthorEdge], min_exclusive: usize) -> Vec<CoauthorEdge> {
    edges
        .iter()
        .filter(|e| e.weight > min_exclusive)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    Json,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 3] = [GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::Json];

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Dot => "dot",
            GraphFormat::Json => "json",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = AnalyticsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            "json" => Ok(GraphFormat::Json),
            _ => Err(AnalyticsError::UnknownFormat(s.to_string())),
        }
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    comment: Option<&'a str>,
    nodes: Vec<JsonNode<'a>>,
    edges: Vec<JsonEdge<'a>>,
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: &'a str,
    name: &'a str,
}

#[derive(Serialize)]
struct JsonEdge<'a> {
    source: &'a str,
    target: &'a str,
    weight: usize,
}

/// Renders the network. Nodes are every edge endpoint in key order; `name`
/// supplies display labels and `comment` is embedded as a description.
pub fn export_graph<'a>(
    edges: &'a [CoauthorEdge],
    name: impl Fn(&'a str) -> &'a str,
    format: GraphFormat,
    comment: Option<&str>,
) -> String {
    let mut sorted: Vec<&CoauthorEdge> = edges.iter().collect();
    sorted.sort();
    let nodes: BTreeSet<&str> = sorted
        .iter()
        .flat_map(|e| [e.inst_a.as_str(), e.inst_b.as_str()])
        .collect();
    let mut out = String::new();
    match format {
        GraphFormat::GraphMl => {
            let ids: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
            out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
            out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
            if let Some(c) = comment {
                let _ = writeln!(out, "  <desc>{}</desc>", escape(c));
            }
            out.push_str("  <key id=\"key\" for=\"node\" attr.name=\"key\" attr.type=\"string\"/>\n");
            out.push_str("  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n");
            out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
            out.push_str("  <graph id=\"collaboration\" edgedefault=\"undirected\">\n");
            for (n, i) in &ids {
                let _ = writeln!(
                    out,
                    "    <node id=\"n{i}\"><data key=\"key\">{}</data><data key=\"name\">{}</data></node>",
                    escape(*n),
                    escape(name(n))
                );
            }
            for (i, e) in sorted.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\"><data key=\"weight\">{}</data></edge>",
                    ids[e.inst_a.as_str()],
                    ids[e.inst_b.as_str()],
                    e.weight
                );
            }
            out.push_str("  </graph>\n</graphml>\n");
        }
        GraphFormat::Dot => {
            if let Some(c) = comment {
                for line in c.lines() {
                    let _ = writeln!(out, "// {line}");
                }
            }
            out.push_str("graph collaboration {\n");
            for n in &nodes {
                let _ = writeln!(out, "  {} [label={}];", dot_quote(n), dot_quote(name(n)));
            }
            for e in &sorted {
                let _ = writeln!(
                    out,
                    "  {} -- {} [weight={}];",
                    dot_quote(&e.inst_a),
                    dot_quote(&e.inst_b),
                    e.weight
                );
            }
            out.push_str("}\n");
        }
        GraphFormat::Json => {
            let graph = JsonGraph {
                comment,
                nodes: nodes.iter().map(|n| JsonNode { id: n, name: name(n) }).collect(),
                edges: sorted
                    .iter()
                    .map(|e| JsonEdge {
                        source: &e.inst_a,
                        target: &e.inst_b,
                        weight: e.weight,
                    })
                    .collect(),
            };
            out = serde_json::to_string_pretty(&graph).expect("graph serializes");
            out.push('\n');
        }
    }
    out
}
