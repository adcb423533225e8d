//! The plain-text instance format and a DIMACS edge-list import shim.
//!
//! An instance file is line-oriented:
//!
//! ```text
//! n m          header: vertex and edge counts
//! u v          m edge lines
//! v: c1 [c2 [c3]]   optional list lines; unlisted vertices get {1,2,3}
//! ```
//!
//! Blank lines and `#` comment lines are skipped. Writing normalizes
//! whitespace and orders edges and list lines ascending, so a written
//! instance re-reads identically.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::lists::{colour_bit, mask_colours, ColourMask, ListAssignment, FULL_MASK};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    Range { line: usize, vertex: u64, n: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header line")]
    MissingHeader,
}

fn parse_vertex(field: &str, n: usize, line: usize) -> Result<Vertex, InstanceError> {
    let value: u64 = field.parse().map_err(|_| InstanceError::Syntax {
        line,
        msg: format!("bad vertex {field:?}"),
    })?;
    if value >= n as u64 {
        return Err(InstanceError::Range {
            line,
            vertex: value,
            n,
        });
    }
    Ok(value as Vertex)
}

/// Parses an instance from text.
pub fn read_instance_str(text: &str) -> Result<(Graph, ListAssignment), InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(InstanceError::MissingHeader)?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    if fields.len() != 2 {
        return Err(InstanceError::Syntax {
            line: header_line,
            msg: format!("expected header \"n m\", got {header:?}"),
        });
    }
    let n: usize = fields[0].parse().map_err(|_| InstanceError::Syntax {
        line: header_line,
        msg: format!("bad vertex count {:?}", fields[0]),
    })?;
    let m: usize = fields[1].parse().map_err(|_| InstanceError::Syntax {
        line: header_line,
        msg: format!("bad edge count {:?}", fields[1]),
    })?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next().ok_or(InstanceError::Syntax {
            line: 0,
            msg: format!("expected {m} edge lines, file ended early"),
        })?;
        let fields: Vec<&str> = text.split_ascii_whitespace().collect();
        if fields.len() != 2 {
            return Err(InstanceError::Syntax {
                line,
                msg: format!("expected an edge \"u v\", got {text:?}"),
            });
        }
        let u = parse_vertex(fields[0], n, line)?;
        let v = parse_vertex(fields[1], n, line)?;
        if u == v {
            return Err(InstanceError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        edges.push((u, v));
    }
    let graph = Graph::new(n, &edges).map_err(|source| InstanceError::Graph { line: 0, source })?;

    let mut masks = vec![FULL_MASK; n];
    for (line, text) in lines {
        let Some((vertex_part, colours_part)) = text.split_once(':') else {
            return Err(InstanceError::Syntax {
                line,
                msg: format!("expected a list line \"v: c1 [c2 [c3]]\", got {text:?}"),
            });
        };
        let v = parse_vertex(vertex_part.trim(), n, line)?;
        let mut mask: ColourMask = 0;
        for field in colours_part.split_ascii_whitespace() {
            let c: u8 = field.parse().map_err(|_| InstanceError::Syntax {
                line,
                msg: format!("bad colour {field:?}"),
            })?;
            if !(1..=3).contains(&c) {
                return Err(InstanceError::Syntax {
                    line,
                    msg: format!("colour {c} outside 1..=3"),
                });
            }
            mask |= colour_bit(c);
        }
        masks[v as usize] = mask;
    }
    let lists = ListAssignment::from_masks(masks).expect("masks built from palette colours");
    Ok((graph, lists))
}

pub fn read_instance(path: &Path) -> Result<(Graph, ListAssignment), std::io::Error> {
    let text = fs::read_to_string(path)?;
    read_instance_str(&text).map_err(|e| {
        std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("{}: {e}", path.display()),
        )
    })
}

/// Renders an instance; full lists are omitted.
pub fn write_instance(g: &Graph, lists: &ListAssignment) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for v in g.vertices() {
        let mask = lists.get(v);
        if mask != FULL_MASK {
            let cs: Vec<String> = mask_colours(mask).map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{v}: {}", cs.join(" "));
        }
    }
    out
}

/// DIMACS edge-format import (graph only, 1-based vertices):
/// `p edge n m` header and `e u v` lines.
pub fn read_dimacs_str(text: &str) -> Result<Graph, InstanceError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = text.split_ascii_whitespace().collect();
        match fields[0] {
            "p" => {
                if fields.len() != 4 {
                    return Err(InstanceError::Syntax {
                        line,
                        msg: format!("bad problem line {text:?}"),
                    });
                }
                n = Some(fields[2].parse().map_err(|_| InstanceError::Syntax {
                    line,
                    msg: format!("bad vertex count {:?}", fields[2]),
                })?);
            }
            "e" => {
                let n = n.ok_or(InstanceError::Syntax {
                    line,
                    msg: "edge before problem line".into(),
                })?;
                if fields.len() != 3 {
                    return Err(InstanceError::Syntax {
                        line,
                        msg: format!("bad edge line {text:?}"),
                    });
                }
                let mut pair = [0 as Vertex; 2];
                for (i, f) in fields[1..].iter().enumerate() {
                    let value: u64 = f.parse().map_err(|_| InstanceError::Syntax {
                        line,
                        msg: format!("bad vertex {f:?}"),
                    })?;
                    if value == 0 || value > n as u64 {
                        return Err(InstanceError::Range {
                            line,
                            vertex: value,
                            n,
                        });
                    }
                    pair[i] = (value - 1) as Vertex;
                }
                edges.push((pair[0], pair[1]));
            }
            _ => {
                return Err(InstanceError::Syntax {
                    line,
                    msg: format!("unrecognized line {text:?}"),
                })
            }
        }
    }
    let n = n.ok_or(InstanceError::MissingHeader)?;
    Graph::new(n, &edges).map_err(|source| InstanceError::Graph { line: 0, source })
}
