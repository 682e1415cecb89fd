//! Plain-text edge lists.
//!
//! One edge per line as two whitespace-separated labels. Lines starting with
//! `#` are comments, blank lines are skipped, and `%nodes a b c` declares
//! nodes up front so isolated nodes can be represented. Labels are mapped to
//! dense indices in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph together with the external label of each node index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Default)]
struct Interner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }
}

pub fn parse_edge_list(text: &str, directed: bool) -> Result<LabeledGraph> {
    let mut nodes = Interner::default();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('%') {
            let mut tokens = rest.split_whitespace();
            match tokens.next() {
                Some("nodes") => {
                    for label in tokens {
                        nodes.intern(label);
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown directive `%{}`", other.unwrap_or("")),
                    })
                }
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected two labels, found {}", tokens.len()),
            });
        };
        if a == b {
            return Err(Error::SelfLoop {
                line: lineno,
                label: a.to_owned(),
            });
        }
        let u = nodes.intern(a);
        let v = nodes.intern(b);
        edges.push((lineno, u, v));
    }

    let mut graph = Graph::empty(nodes.labels.len(), directed);
    for (lineno, u, v) in edges {
        if !graph.insert(u, v) {
            warn!(
                "line {lineno}: duplicate edge {} {} ignored",
                nodes.labels[u], nodes.labels[v]
            );
        }
    }
    Ok(LabeledGraph {
        graph,
        labels: nodes.labels,
    })
}

pub fn load_graph(path: impl AsRef<Path>, directed: bool) -> Result<LabeledGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?, directed)
}

/// Serializes a graph as an edge list. All nodes are declared first so that
/// parsing the output reproduces the same indices.
pub fn write_edge_list(g: &Graph, labels: &[String]) -> String {
    assert_eq!(labels.len(), g.n(), "one label per node");
    let mut out = String::new();
    if !labels.is_empty() {
        out.push_str("%nodes");
        for l in labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", labels[u], labels[v]);
    }
    out
}

pub fn save_graph(path: impl AsRef<Path>, g: &LabeledGraph) -> Result<()> {
    std::fs::write(path, write_edge_list(&g.graph, &g.labels))?;
    Ok(())
}
