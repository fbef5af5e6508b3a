//! Plain-text graph exchange format.
//!
//! Line 1: `n m`. Then exactly `m` lines `u v` with `u < v`, ASCII decimal,
//! every line newline-terminated. The reader is strict and reports the line
//! number of the first violation.

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct GraphReadError {
    pub line: usize,
    pub message: String,
}

impl GraphReadError {
    fn new(line: usize, message: impl Into<String>) -> GraphReadError {
        GraphReadError {
            line,
            message: message.into(),
        }
    }
}

pub fn parse_graph_text(text: &str) -> Result<Graph, GraphReadError> {
    if !text.is_empty() && !text.ends_with('\n') {
        let last = text.lines().count();
        return Err(GraphReadError::new(last, "missing trailing newline"));
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphReadError::new(1, "empty file, expected `n m` header"))?;
    let mut it = header.split_ascii_whitespace();
    let n: usize = parse_field(it.next(), 1, "vertex count")?;
    let m: usize = parse_field(it.next(), 1, "edge count")?;
    if it.next().is_some() {
        return Err(GraphReadError::new(1, "expected exactly two fields `n m`"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(m * 2);
    for _ in 0..m {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| GraphReadError::new(m + 1, format!("expected {m} edge lines")))?;
        let mut it = line.split_ascii_whitespace();
        let u: u32 = parse_field(it.next(), lineno, "edge endpoint")?;
        let v: u32 = parse_field(it.next(), lineno, "edge endpoint")?;
        if it.next().is_some() {
            return Err(GraphReadError::new(lineno, "expected exactly two fields `u v`"));
        }
        if u >= v {
            return Err(GraphReadError::new(
                lineno,
                format!("endpoints must satisfy u < v, got {u} {v}"),
            ));
        }
        if v as usize >= n {
            return Err(GraphReadError::new(
                lineno,
                format!("endpoint {v} out of range for {n} vertices"),
            ));
        }
        if !seen.insert((u, v)) {
            return Err(GraphReadError::new(lineno, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if let Some((lineno, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(GraphReadError::new(lineno, "trailing content after edge list"));
        }
        return Err(GraphReadError::new(lineno, "blank line after edge list"));
    }

    Graph::build(n, &edges).map_err(|e| GraphReadError::new(1, e.to_string()))
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphReadError> {
    let field = field.ok_or_else(|| GraphReadError::new(line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| GraphReadError::new(line, format!("invalid {what} `{field}`")))
}

pub fn write_graph_text(g: &Graph, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn graph_to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph_text(g, &mut buf).expect("write to vec");
    String::from_utf8(buf).expect("ascii output")
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{source}")]
    Parse {
        path: String,
        #[source]
        source: GraphReadError,
    },
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<Graph, GraphFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_graph_text(&text).map_err(|source| GraphFileError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_graph_file(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphFileError> {
    let path = path.as_ref();
    fs::write(path, graph_to_string(g)).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })
}
