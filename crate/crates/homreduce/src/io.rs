//! Text formats: DIMACS-style graph files and list files.
//!
//! Graphs: comment lines `c ...`, one `p edge <n> <m>` header, then `m`
//! lines `e <u> <v>` with 1-based endpoints. Lists: one line `l <v> <t1>
//! <t2> ...` per pattern vertex, 1-based; an empty tail is an empty list.
//! Writers emit a canonical form that reads back bit-exactly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{SimpleGraph, Vertex};
use crate::solver::Witness;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: loop edge")]
    LoopEdge { line: usize },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("line {line}: vertex out of range")]
    VertexOutOfRange { line: usize },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Parses a graph file. Tokens after the mandatory fields of a line are
/// rejected; comments may appear anywhere.
pub fn read_graph(text: &str) -> Result<SimpleGraph, FormatError> {
    let mut n: Option<u32> = None;
    let mut declared_m = 0usize;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_ascii_whitespace();
        match tokens.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                if tokens.next() != Some("edge") {
                    return Err(parse_err(line, "expected `p edge <n> <m>`"));
                }
                let nv: u32 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "bad vertex count"))?;
                let m: usize = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "bad edge count"))?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "trailing tokens"));
                }
                n = Some(nv);
                declared_m = m;
            }
            Some("e") => {
                let nv = n.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let u: u64 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "bad endpoint"))?;
                let v: u64 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "bad endpoint"))?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "trailing tokens"));
                }
                if u < 1 || v < 1 || u > nv as u64 || v > nv as u64 {
                    return Err(FormatError::VertexOutOfRange { line });
                }
                if u == v {
                    return Err(FormatError::LoopEdge { line });
                }
                edges.push((u as Vertex - 1, v as Vertex - 1));
                edge_lines.push(line);
            }
            _ => return Err(parse_err(line, "unknown line type")),
        }
    }

    let n = n.ok_or_else(|| parse_err(text.lines().count() + 1, "missing problem line"))?;
    if edges.len() != declared_m {
        return Err(parse_err(
            text.lines().count() + 1,
            format!("declared {declared_m} edges, found {}", edges.len()),
        ));
    }
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for (&(u, v), &line) in edges.iter().zip(&edge_lines) {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(FormatError::DuplicateEdge { line });
        }
    }
    Ok(SimpleGraph::new(n, edges).expect("validated above"))
}

/// Canonical graph text: header then edges sorted with `u < v`,
/// lexicographically.
pub fn write_graph(g: &SimpleGraph) -> String {
    write_graph_with_comments(g, &[])
}

/// As [`write_graph`] with leading comment lines (the `c ` prefix is added).
pub fn write_graph_with_comments(g: &SimpleGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for comment in comments {
        writeln!(out, "c {comment}").unwrap();
    }
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses a list file for `pattern_n` pattern vertices over `target_n`
/// target vertices: every pattern vertex must get exactly one `l` line.
pub fn read_lists(text: &str, pattern_n: u32, target_n: u32) -> Result<Vec<Vec<Vertex>>, FormatError> {
    let mut lists: Vec<Option<Vec<Vertex>>> = vec![None; pattern_n as usize];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_ascii_whitespace();
        if tokens.next() != Some("l") {
            return Err(parse_err(line, "expected `l <v> <t1> <t2> ...`"));
        }
        let v: u64 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(line, "bad vertex"))?;
        if v < 1 || v > pattern_n as u64 {
            return Err(FormatError::VertexOutOfRange { line });
        }
        let slot = &mut lists[v as usize - 1];
        if slot.is_some() {
            return Err(parse_err(line, format!("vertex {v} listed twice")));
        }
        let mut list = Vec::new();
        for token in tokens {
            let t: u64 = token.parse().map_err(|_| parse_err(line, "bad list entry"))?;
            if t < 1 || t > target_n as u64 {
                return Err(FormatError::VertexOutOfRange { line });
            }
            list.push(t as Vertex - 1);
        }
        *slot = Some(list);
    }
    lists
        .into_iter()
        .enumerate()
        .map(|(v, slot)| {
            slot.ok_or_else(|| parse_err(0, format!("vertex {} has no list line", v + 1)))
        })
        .collect()
}

/// Canonical list text: one line per vertex in ascending order, entries
/// sorted.
pub fn write_lists(lists: &[Vec<Vertex>]) -> String {
    let mut out = String::new();
    for (v, list) in lists.iter().enumerate() {
        write!(out, "l {}", v + 1).unwrap();
        let mut sorted = list.clone();
        sorted.sort_unstable();
        for t in sorted {
            write!(out, " {}", t + 1).unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// Witness text: one `m <u> <v>` line per pattern vertex, 1-based.
pub fn write_witness(w: &Witness) -> String {
    let mut out = String::new();
    for (v, &img) in w.as_slice().iter().enumerate() {
        writeln!(out, "m {} {}", v + 1, img + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_k2() {
        let g = read_graph("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(g, SimpleGraph::complete(2));
    }

    #[test]
    fn writes_k3_sorted() {
        assert_eq!(write_graph(&SimpleGraph::complete(3)), "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    }

    #[test]
    fn loops_duplicates_and_ranges_are_rejected() {
        assert_eq!(
            read_graph("p edge 2 1\ne 1 1\n"),
            Err(FormatError::LoopEdge { line: 2 })
        );
        assert_eq!(
            read_graph("p edge 2 2\ne 1 2\ne 2 1\n"),
            Err(FormatError::DuplicateEdge { line: 3 })
        );
        assert_eq!(
            read_graph("p edge 2 1\ne 1 3\n"),
            Err(FormatError::VertexOutOfRange { line: 2 })
        );
    }

    #[test]
    fn graph_roundtrip() {
        let g = SimpleGraph::cycle(7);
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
        let text = write_graph(&g);
        assert_eq!(write_graph(&read_graph(&text).unwrap()), text);
    }

    #[test]
    fn list_lines() {
        let lists = read_lists("l 1 2 3\n", 1, 3).unwrap();
        assert_eq!(lists, vec![vec![1, 2]]);
        let lists = read_lists("l 1\n", 1, 3).unwrap();
        assert_eq!(lists, vec![Vec::<Vertex>::new()]);
    }

    #[test]
    fn list_roundtrip() {
        let lists = vec![vec![0, 2], vec![], vec![1]];
        let text = write_lists(&lists);
        assert_eq!(read_lists(&text, 3, 3).unwrap(), lists);
        assert_eq!(write_lists(&read_lists(&text, 3, 3).unwrap()), text);
    }

    #[test]
    fn missing_list_line_is_an_error() {
        assert!(read_lists("l 1 2\n", 2, 3).is_err());
    }
}
