//! DIMACS `.col` reading and writing.
//!
//! Comment lines start with `c`; a single `p edge <n> <m>` header precedes
//! all `e <u> <v>` lines, whose ids are 1-based. The edge count in the header
//! is informational: duplicate and reversed edges are merged on load.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, what: &str, token: Option<&str>) -> Result<T> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token.parse().map_err(|_| {
        parse_err(
            line,
            format!("{what} is not a nonnegative integer: {token:?}"),
        )
    })
}

pub fn load_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(kind) = tokens.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if n.is_some() {
                    return Err(parse_err(line, "second problem line"));
                }
                match tokens.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(parse_err(
                            line,
                            format!("expected \"p edge\", found {other:?}"),
                        ))
                    }
                }
                let vertices: usize = parse_field(line, "vertex count", tokens.next())?;
                let _declared_edges: usize = parse_field(line, "edge count", tokens.next())?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after problem line"));
                }
                n = Some(vertices);
            }
            "e" => {
                let vertices = n.ok_or_else(|| parse_err(line, "edge line before problem line"))?;
                let u: usize = parse_field(line, "endpoint", tokens.next())?;
                let v: usize = parse_field(line, "endpoint", tokens.next())?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after edge"));
                }
                for x in [u, v] {
                    if x == 0 || x > vertices {
                        return Err(parse_err(
                            line,
                            format!("vertex {x} out of range 1..={vertices}"),
                        ));
                    }
                }
                if u == v {
                    return Err(parse_err(line, format!("self-loop at vertex {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }

    let n = n.ok_or_else(|| parse_err(text.lines().count().max(1), "missing \"p edge\" header"))?;
    Graph::from_edges(n, edges)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 1));
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}
