//! Snapshot writers: edge list, DOT, and JSON with provenance.

use clap::ValueEnum;
use igm::seed::write_edge_list;
use igm::{GraphSnapshot, NodeId, NodeRef};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `n <count>` header plus one `u v` line per edge, 0-based ids.
    Edgelist,
    /// Undirected DOT; clones carry their level and parent subset.
    Dot,
    /// Full structure including per-node provenance.
    Json,
}

pub fn extension(format: Format) -> &'static str {
    match format {
        Format::Edgelist => "edgelist",
        Format::Dot => "dot",
        Format::Json => "json",
    }
}

pub fn render(g: &GraphSnapshot, format: Format) -> String {
    match format {
        Format::Edgelist => write_edge_list(g),
        Format::Dot => render_dot(g),
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&JsonGraph::of(g)).expect("snapshot serializes");
            s.push('\n');
            s
        }
    }
}

/// Every level in one stream; edge lists and DOT get comment banners,
/// JSON becomes an array.
pub fn render_all(levels: &[GraphSnapshot], format: Format) -> String {
    match format {
        Format::Edgelist => levels
            .iter()
            .map(|g| format!("# level {}\n{}", g.level(), render(g, format)))
            .collect(),
        Format::Dot => levels
            .iter()
            .map(|g| format!("// level {}\n{}", g.level(), render(g, format)))
            .collect(),
        Format::Json => {
            let all: Vec<JsonGraph> = levels.iter().map(JsonGraph::of).collect();
            let mut s = serde_json::to_string_pretty(&all).expect("snapshots serialize");
            s.push('\n');
            s
        }
    }
}

fn render_dot(g: &GraphSnapshot) -> String {
    let mut out = String::from("graph g {\n");
    for v in 0..g.node_count() as NodeId {
        match g.provenance(v) {
            NodeRef::Original { .. } => out.push_str(&format!("  {v};\n")),
            NodeRef::Clone { level, parents } => {
                let parents = parents
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&format!(
                    "  {v} [label=\"{v} clone L{level} {{{parents}}}\"];\n"
                ));
            }
        }
    }
    for (u, w) in g.edges() {
        out.push_str(&format!("  {u} -- {w};\n"));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    level: usize,
    node_count: usize,
    edge_count: u64,
    nodes: Vec<JsonNode<'a>>,
    edges: Vec<(NodeId, NodeId)>,
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: NodeId,
    #[serde(flatten)]
    provenance: &'a NodeRef,
}

impl<'a> JsonGraph<'a> {
    fn of(g: &'a GraphSnapshot) -> Self {
        JsonGraph {
            level: g.level(),
            node_count: g.node_count(),
            edge_count: g.edge_count(),
            nodes: (0..g.node_count() as NodeId)
                .map(|id| JsonNode {
                    id,
                    provenance: g.provenance(id),
                })
                .collect(),
            edges: g.edges().collect(),
        }
    }
}
