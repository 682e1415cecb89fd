//! Binary and weighted graphs over dense node indices, plus node tuples and
//! relabeling utilities.
//!
//! Both graph types store a row-major `n × n` matrix with a zero diagonal.
//! Undirected graphs keep the matrix symmetric; every constructor enforces
//! this so downstream kernels can index either triangle.

use crate::error::{Error, Result};

/// Read access shared by binary and weighted graphs. For a binary graph the
/// weight of a pair is `0.0` or `1.0`; for a weighted graph it is the link
/// probability.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn is_directed(&self) -> bool;
    fn weight(&self, u: usize, v: usize) -> f64;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    directed: bool,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Self {
        Graph {
            n,
            directed,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize, directed: bool) -> Self {
        let mut g = Graph::empty(n, directed);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.adj[u * n + v] = true;
                }
            }
        }
        g
    }

    /// Builds a graph from an edge list. Undirected edges are mirrored;
    /// repeated edges are idempotent.
    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n, directed);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop on node {u}")));
            }
            g.insert(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a 0/1 matrix, checking squareness, the zero
    /// diagonal and (when undirected) symmetry.
    pub fn from_matrix(directed: bool, rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n, directed);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (v, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 if u == v => return Err(Error::Validation(format!("self-loop on node {u}"))),
                    1 => g.adj[u * n + v] = true,
                    _ => {
                        return Err(Error::Validation(format!(
                            "entry ({u}, {v}) is {x}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        if !directed {
            check_symmetric(n, |u, v| g.adj[u * n + v] == g.adj[v * n + u])?;
        }
        Ok(g)
    }

    /// Inserts `u → v` (and `v → u` when undirected). Returns `false` when the
    /// edge was already present.
    pub(crate) fn insert(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        let fresh = !self.adj[u * self.n + v];
        self.adj[u * self.n + v] = true;
        if !self.directed {
            self.adj[v * self.n + u] = true;
        }
        fresh
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Edges in row-major order; undirected edges are reported once with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| {
            let start = if self.directed { 0 } else { u + 1 };
            (start..n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.has_edge(u, v) as u8).collect())
            .collect()
    }
}

impl Adjacency for Graph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    fn weight(&self, u: usize, v: usize) -> f64 {
        if self.adj[u * self.n + v] {
            1.0
        } else {
            0.0
        }
    }
}

/// An expected adjacency matrix: entry `(u, v)` is the probability that the
/// link `u → v` is present.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    directed: bool,
    probs: Vec<f64>,
}

impl WeightedGraph {
    pub fn from_matrix(directed: bool, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut probs = Vec::with_capacity(n * n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            probs.extend_from_slice(row);
        }
        WeightedGraph::from_flat(n, directed, probs)
    }

    /// Row-major constructor. Validates range, zero diagonal and symmetry.
    pub fn from_flat(n: usize, directed: bool, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: probs.len(),
            });
        }
        for u in 0..n {
            for v in 0..n {
                let p = probs[u * n + v];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Validation(format!(
                        "probability ({u}, {v}) = {p} is outside [0, 1]"
                    )));
                }
                if u == v && p != 0.0 {
                    return Err(Error::Validation(format!(
                        "diagonal entry ({u}, {u}) = {p}; self-loops are not allowed"
                    )));
                }
            }
        }
        if !directed {
            check_symmetric(n, |u, v| probs[u * n + v] == probs[v * n + u])?;
        }
        Ok(WeightedGraph { n, directed, probs })
    }

    /// Every off-diagonal entry set to `p`.
    pub fn uniform(n: usize, directed: bool, p: f64) -> Result<Self> {
        let probs = (0..n * n)
            .map(|i| if i / n == i % n { 0.0 } else { p })
            .collect();
        WeightedGraph::from_flat(n, directed, probs)
    }

    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let probs = (0..n * n).map(|i| g.weight(i / n, i % n)).collect();
        WeightedGraph {
            n,
            directed: g.directed(),
            probs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.probs[u * self.n + v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.probs
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }
}

impl Adjacency for WeightedGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    fn weight(&self, u: usize, v: usize) -> f64 {
        self.probs[u * self.n + v]
    }
}

fn check_symmetric(n: usize, eq: impl Fn(usize, usize) -> bool) -> Result<()> {
    for u in 0..n {
        for v in u + 1..n {
            if !eq(u, v) {
                return Err(Error::Validation(format!(
                    "undirected matrix is not symmetric at ({u}, {v})"
                )));
            }
        }
    }
    Ok(())
}

/// An ordered list of distinct node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeTuple(Vec<usize>);

impl NodeTuple {
    pub fn new(nodes: Vec<usize>, n: usize) -> Result<Self> {
        for (i, &v) in nodes.iter().enumerate() {
            if v >= n {
                return Err(Error::Validation(format!(
                    "node {v} out of range for {n} nodes"
                )));
            }
            if nodes[..i].contains(&v) {
                return Err(Error::NonInjective(v));
            }
        }
        Ok(NodeTuple(nodes))
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Validation(format!(
            "permutation has {} entries for {n} nodes",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Validation("permutation is not a bijection".into()));
        }
    }
    Ok(())
}

/// Relabels nodes so that node `i` becomes node `perm[i]`.
pub fn permute_nodes(g: &Graph, perm: &[usize]) -> Result<Graph> {
    let n = g.n();
    check_permutation(perm, n)?;
    let mut out = Graph::empty(n, g.directed());
    for (u, v) in g.edges() {
        out.insert(perm[u], perm[v]);
    }
    Ok(out)
}

/// Converts a weighted graph whose entries are all exactly 0 or 1 into the
/// corresponding binary graph.
pub fn threshold_to_graph(wg: &WeightedGraph) -> Result<Graph> {
    let n = wg.n();
    let mut g = Graph::empty(n, wg.directed());
    for u in 0..n {
        for v in 0..n {
            let p = wg.prob(u, v);
            if p == 1.0 {
                g.adj[u * n + v] = true;
            } else if p != 0.0 {
                return Err(Error::Validation(format!(
                    "entry ({u}, {v}) = {p} is not binary"
                )));
            }
        }
    }
    Ok(g)
}
