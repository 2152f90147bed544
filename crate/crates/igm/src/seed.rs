//! Seed graph construction: named families and edge-list files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{GraphSnapshot, NodeId};

/// A seed graph description, as accepted on the command line.
///
/// Named families: `K<n>` complete, `C<n>` cycle (n >= 3), `P<n>` path,
/// `E<n>` edgeless. Anything else is treated as an edge-list file path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Empty(usize),
    EdgeList(PathBuf),
}

impl FromStr for SeedSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix(['K', 'C', 'P', 'E']) {
            if let Ok(n) = rest.parse::<usize>() {
                if n == 0 {
                    return Err(Error::Seed(format!("{s}: need at least one node")));
                }
                return match s.as_bytes()[0] {
                    b'K' => Ok(SeedSpec::Complete(n)),
                    b'C' if n >= 3 => Ok(SeedSpec::Cycle(n)),
                    b'C' => Err(Error::Seed(format!(
                        "{s}: cycles need at least 3 nodes to stay simple"
                    ))),
                    b'P' => Ok(SeedSpec::Path(n)),
                    _ => Ok(SeedSpec::Empty(n)),
                };
            }
        }
        Ok(SeedSpec::EdgeList(PathBuf::from(s)))
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Complete(n) => write!(f, "K{n}"),
            SeedSpec::Cycle(n) => write!(f, "C{n}"),
            SeedSpec::Path(n) => write!(f, "P{n}"),
            SeedSpec::Empty(n) => write!(f, "E{n}"),
            SeedSpec::EdgeList(p) => write!(f, "{}", p.display()),
        }
    }
}

impl SeedSpec {
    /// Materializes the level-0 snapshot.
    pub fn build(&self) -> Result<GraphSnapshot> {
        match self {
            SeedSpec::Complete(n) => {
                let mut edges = Vec::new();
                for u in 0..*n {
                    for v in (u + 1)..*n {
                        edges.push((u as NodeId, v as NodeId));
                    }
                }
                GraphSnapshot::from_edges(*n, &edges)
            }
            SeedSpec::Cycle(n) => {
                let edges: Vec<_> = (0..*n)
                    .map(|u| (u as NodeId, ((u + 1) % n) as NodeId))
                    .collect();
                GraphSnapshot::from_edges(*n, &edges)
            }
            SeedSpec::Path(n) => {
                let edges: Vec<_> = (0..n.saturating_sub(1))
                    .map(|u| (u as NodeId, (u + 1) as NodeId))
                    .collect();
                GraphSnapshot::from_edges(*n, &edges)
            }
            SeedSpec::Empty(n) => GraphSnapshot::from_edges(*n, &[]),
            SeedSpec::EdgeList(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Seed(format!(
                        "{}: not a named family and not a readable edge list ({e})",
                        path.display()
                    ))
                })?;
                parse_edge_list(&text)
            }
        }
    }
}

/// Parses the edge-list format: optional `n <count>` header, then one
/// `u v` pair per line, ids 0-based. Blank lines and `#` comments are
/// skipped. Without a header the node count is `1 + max id`.
pub fn parse_edge_list(text: &str) -> Result<GraphSnapshot> {
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut max_id: Option<NodeId> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let first = fields.next().unwrap();
        if first == "n" {
            if declared_n.is_some() || !edges.is_empty() {
                return Err(Error::EdgeList {
                    line,
                    msg: "header must come first, once".into(),
                });
            }
            let count = fields
                .next()
                .and_then(|f| f.parse::<usize>().ok())
                .ok_or_else(|| Error::EdgeList {
                    line,
                    msg: "expected `n <count>`".into(),
                })?;
            if fields.next().is_some() {
                return Err(Error::EdgeList {
                    line,
                    msg: "trailing fields after header".into(),
                });
            }
            declared_n = Some(count);
            continue;
        }
        let u = first.parse::<NodeId>().map_err(|_| Error::EdgeList {
            line,
            msg: format!("bad node id `{first}`"),
        })?;
        let second = fields.next().ok_or_else(|| Error::EdgeList {
            line,
            msg: "expected `u v`".into(),
        })?;
        let v = second.parse::<NodeId>().map_err(|_| Error::EdgeList {
            line,
            msg: format!("bad node id `{second}`"),
        })?;
        if fields.next().is_some() {
            return Err(Error::EdgeList {
                line,
                msg: "trailing fields after edge".into(),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = match declared_n {
        Some(n) => n,
        None => match max_id {
            Some(m) => m as usize + 1,
            None => {
                return Err(Error::EdgeList {
                    line: 0,
                    msg: "empty input: declare `n <count>` or list edges".into(),
                })
            }
        },
    };
    GraphSnapshot::from_edges(n, &edges)
}

/// Renders a snapshot back into the edge-list format (with header, so
/// isolated trailing nodes survive a round trip).
pub fn write_edge_list(g: &GraphSnapshot) -> String {
    let mut out = format!("n {}\n", g.node_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Reads a seed from a file on disk.
pub fn read_edge_list(path: &Path) -> Result<GraphSnapshot> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        let k4 = "K4".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((k4.node_count(), k4.edge_count()), (4, 6));
        let c5 = "C5".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((c5.node_count(), c5.edge_count()), (5, 5));
        assert!(c5.has_edge(4, 0));
        let p3 = "P3".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((p3.node_count(), p3.edge_count()), (3, 2));
        let p1 = "P1".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((p1.node_count(), p1.edge_count()), (1, 0));
        let e3 = "E3".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((e3.node_count(), e3.edge_count()), (3, 0));
        // K1 is the smallest seed.
        let k1 = "K1".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!((k1.node_count(), k1.edge_count()), (1, 0));
    }

    #[test]
    fn short_cycles_rejected() {
        assert!("C2".parse::<SeedSpec>().is_err());
        assert!("C1".parse::<SeedSpec>().is_err());
        assert!("K0".parse::<SeedSpec>().is_err());
    }

    #[test]
    fn non_family_strings_are_paths() {
        assert_eq!(
            "graph.txt".parse::<SeedSpec>().unwrap(),
            SeedSpec::EdgeList(PathBuf::from("graph.txt"))
        );
        // `K4x` does not parse as a count, so it is a path too.
        assert!(matches!(
            "K4x".parse::<SeedSpec>().unwrap(),
            SeedSpec::EdgeList(_)
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# square\nn 5\n0 1\n1 2\n2 3\n3 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(4), 0);
        let again = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn edge_list_without_header_infers_count() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\nn 4\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_edge_list("0 x\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("0 1 2\n").is_err());
    }
}
