//! Text formats: graphs, seed lists, path decompositions and edge orders.
//!
//! Graph files start with the vertex count; every further line is
//! `tail head p`. Endpoints are either all integers in `0..n` or arbitrary
//! labels, which are numbered in order of first appearance. `#` starts a
//! comment anywhere on a line.

use std::collections::HashMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use icspread_core::{Edge, GraphError, PathDecomposition, SeedSet, UncertainDigraph, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Vertex labels and their ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl SymbolTable {
    /// Labels `"0"`, `"1"`, ... for plain integer ids.
    pub fn numeric(n: usize) -> Self {
        Self::from_labels((0..n).map(|v| v.to_string()).collect())
    }

    fn from_labels(labels: Vec<String>) -> Self {
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as VertexId)).collect();
        SymbolTable { labels, index }
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn resolve(&self, label: &str) -> Result<VertexId, FormatError> {
        self.index.get(label).copied().ok_or_else(|| FormatError::UnknownLabel(label.to_string()))
    }

    pub fn is_numeric(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A parsed graph file.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub graph: UncertainDigraph,
    pub symbols: SymbolTable,
    /// Number of self-loops that were dropped.
    pub self_loops: usize,
    /// For every edge line of the file, in order, the index of the edge it
    /// became (`None` for a dropped self-loop).
    pub entries: Vec<Option<usize>>,
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| syntax(1, "missing vertex count"))?;
    let n: usize = header.parse().map_err(|_| syntax(first, format!("expected vertex count, found {header:?}")))?;
    if n > VertexId::MAX as usize {
        return Err(syntax(first, format!("vertex count {n} too large")));
    }

    let mut raw = Vec::new();
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let [tail, head, p] = tokens[..] else {
            return Err(syntax(line, format!("expected `tail head p`, found {} fields", tokens.len())));
        };
        let p: f64 = p.parse().map_err(|_| syntax(line, format!("malformed probability {p:?}")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(syntax(line, format!("probability out of range: {p}")));
        }
        raw.push((line, tail, head, p));
    }

    let numeric = raw.iter().all(|(_, a, b, _)| a.parse::<u32>().is_ok() && b.parse::<u32>().is_ok());
    let mut ids = Vec::with_capacity(raw.len());
    let symbols = if numeric {
        for &(line, a, b, _) in &raw {
            let (a, b): (u32, u32) = (a.parse().unwrap(), b.parse().unwrap());
            for v in [a, b] {
                if v as usize >= n {
                    return Err(FormatError::Graph { line, source: GraphError::VertexOutOfRange { vertex: v as usize, n } });
                }
            }
            ids.push((a, b));
        }
        SymbolTable::numeric(n)
    } else {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<&str, VertexId> = HashMap::new();
        for &(line, a, b, _) in &raw {
            let mut pair = [0; 2];
            for (slot, label) in pair.iter_mut().zip([a, b]) {
                *slot = match index.get(label) {
                    Some(&v) => v,
                    None if labels.len() == n => {
                        return Err(syntax(line, format!("label {label:?} exceeds the declared {n} vertices")));
                    }
                    None => {
                        labels.push(label.to_string());
                        index.insert(label, labels.len() as VertexId - 1);
                        labels.len() as VertexId - 1
                    }
                };
            }
            ids.push((pair[0], pair[1]));
        }
        for k in labels.len()..n {
            labels.push(format!("_{k}"));
        }
        SymbolTable::from_labels(labels)
    };

    let mut edges = Vec::with_capacity(raw.len());
    let mut entries = Vec::with_capacity(raw.len());
    for (&(a, b), &(_, _, _, p)) in ids.iter().zip(&raw) {
        if a == b {
            entries.push(None);
        } else {
            entries.push(Some(edges.len()));
            edges.push(Edge::new(a, b, p));
        }
    }
    let self_loops = entries.iter().filter(|e| e.is_none()).count();
    let graph = UncertainDigraph::new(n, edges).map_err(|source| FormatError::Graph { line: first, source })?;
    Ok(GraphFile { graph, symbols, self_loops, entries })
}

/// Writes `g` in the graph file format with the given labels.
pub fn serialize_graph(g: &UncertainDigraph, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", g.n());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", symbols.label(e.tail), symbols.label(e.head), e.p);
    }
    out
}

/// Seeds given as labels separated by commas or whitespace.
pub fn parse_seeds(list: &str, symbols: &SymbolTable) -> Result<SeedSet, FormatError> {
    let ids = list
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| symbols.resolve(t))
        .collect::<Result<Vec<_>, _>>()?;
    SeedSet::new(ids, symbols.len()).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// One bag per line, vertex labels separated by whitespace.
pub fn parse_pathdec(text: &str, symbols: &SymbolTable) -> Result<PathDecomposition, FormatError> {
    let mut bags = Vec::new();
    for (line, l) in content_lines(text) {
        let bag = l
            .split_whitespace()
            .map(|t| symbols.resolve(t).map_err(|e| syntax(line, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        bags.push(bag);
    }
    Ok(PathDecomposition::new(bags))
}

/// Edge order: 0-based indices of the graph file's edge lines, whitespace
/// separated. Indices of dropped self-loops may appear and are ignored.
pub fn parse_order(text: &str, file: &GraphFile) -> Result<Vec<usize>, FormatError> {
    let mut order = Vec::with_capacity(file.graph.m());
    for (line, l) in content_lines(text) {
        for t in l.split_whitespace() {
            let i: usize = t.parse().map_err(|_| syntax(line, format!("malformed edge index {t:?}")))?;
            match file.entries.get(i) {
                None => return Err(syntax(line, format!("edge index {i} out of range ({} edge lines)", file.entries.len()))),
                Some(None) => {}
                Some(Some(e)) => order.push(*e),
            }
        }
    }
    Ok(order)
}
