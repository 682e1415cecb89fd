//! Motif templates: a `k × k` binary adjacency matrix plus a directedness flag.
//!
//! A tuple of nodes matches the template when every required link is present
//! and every other link among the tuple's nodes is absent.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counting enumerates `n^k` tuples, so arity is capped unless the caller
/// raises the limit explicitly.
pub const DEFAULT_MAX_ARITY: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Motif {
    k: usize,
    directed: bool,
    template: Vec<bool>,
}

/// On-disk form: `{"k": 3, "directed": false, "matrix": [[0,1,0],[1,0,0],[0,0,0]]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MotifFile {
    k: usize,
    directed: bool,
    matrix: Vec<Vec<u8>>,
}

impl Motif {
    pub fn new(directed: bool, matrix: &[Vec<u8>]) -> Result<Self> {
        Motif::with_max_arity(directed, matrix, DEFAULT_MAX_ARITY)
    }

    pub fn with_max_arity(directed: bool, matrix: &[Vec<u8>], max_arity: usize) -> Result<Self> {
        let k = matrix.len();
        if k < 2 {
            return Err(Error::Validation(format!("motif arity {k} is below 2")));
        }
        if k > max_arity {
            return Err(Error::Validation(format!(
                "motif arity {k} exceeds the maximum arity {max_arity}"
            )));
        }
        let mut template = vec![false; k * k];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Validation(format!(
                    "motif row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                match (x, i == j) {
                    (0, _) => {}
                    (1, true) => {
                        return Err(Error::Validation(format!(
                            "motif diagonal entry ({i}, {i}) must be 0"
                        )))
                    }
                    (1, false) => template[i * k + j] = true,
                    _ => {
                        return Err(Error::Validation(format!(
                            "motif entry ({i}, {j}) is {x}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        if !directed {
            for i in 0..k {
                for j in i + 1..k {
                    if template[i * k + j] != template[j * k + i] {
                        return Err(Error::Validation(format!(
                            "undirected motif is not symmetric at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(Motif {
            k,
            directed,
            template,
        })
    }

    /// Builds a motif from its edges; undirected edges are mirrored.
    pub fn from_edges(k: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = vec![vec![0u8; k]; k];
        for &(i, j) in edges {
            if i >= k || j >= k {
                return Err(Error::Validation(format!(
                    "motif edge ({i}, {j}) out of range"
                )));
            }
            m[i][j] = 1;
            if !directed {
                m[j][i] = 1;
            }
        }
        Motif::with_max_arity(directed, &m, k.max(DEFAULT_MAX_ARITY))
    }

    /// Template with no links: matches every tuple whose nodes are pairwise
    /// unlinked.
    pub fn empty(k: usize, directed: bool) -> Result<Self> {
        Motif::from_edges(k, directed, &[])
    }

    /// Template with every off-diagonal link required.
    pub fn complete(k: usize, directed: bool) -> Result<Self> {
        let edges: Vec<_> = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        Motif::from_edges(k, directed, &edges)
    }

    /// The undirected triangle.
    pub fn triangle() -> Self {
        Motif::complete(3, false).expect("valid template")
    }

    pub fn single_edge(directed: bool) -> Self {
        Motif::from_edges(2, directed, &[(0, 1)]).expect("valid template")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn edge(&self, i: usize, j: usize) -> bool {
        self.template[i * self.k + j]
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.edge(i, j) as u8).collect())
            .collect()
    }

    /// True when every off-diagonal entry is 1.
    pub fn is_complete(&self) -> bool {
        (0..self.k).all(|i| (0..self.k).all(|j| i == j || self.edge(i, j)))
    }

    pub fn from_json_str(s: &str, max_arity: usize) -> Result<Self> {
        let file: MotifFile = serde_json::from_str(s)?;
        if file.k != file.matrix.len() {
            return Err(Error::Validation(format!(
                "motif declares k = {} but the matrix has {} rows",
                file.k,
                file.matrix.len()
            )));
        }
        Motif::with_max_arity(file.directed, &file.matrix, max_arity)
    }

    pub fn to_json_string(&self) -> String {
        let file = MotifFile {
            k: self.k,
            directed: self.directed,
            matrix: self.to_matrix(),
        };
        serde_json::to_string(&file).expect("motif serializes")
    }

    pub fn load(path: impl AsRef<Path>, max_arity: usize) -> Result<Self> {
        Motif::from_json_str(&std::fs::read_to_string(path)?, max_arity)
    }
}
