//! Motif counting on binary and weighted graphs.
//!
//! The ordered count sums the motif indicator over every injective `k`-tuple
//! of nodes. On a weighted graph the indicator is a product with one factor
//! per independent link among the tuple's nodes: `w` where the template
//! requires the link, `1 - w` where it forbids it. Directed graphs contribute
//! one factor per ordered pair `i != j`; undirected graphs one factor per
//! unordered pair `i < j`. With these conventions the count on an expected
//! adjacency matrix equals the expected count over the graphs it generates.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, NodeTuple};
use crate::motif::Motif;
use crate::sum::KahanSum;

/// Below this many candidate tuples the per-first-node partitions are summed
/// on the calling thread. Results are identical either way.
const PARALLEL_TUPLES: f64 = 65_536.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotifCountResult {
    pub ordered_count: f64,
    pub set_count: Option<u64>,
    pub aut: Option<u64>,
}

impl MotifCountResult {
    /// Ordered count, set count and automorphism count of a binary graph.
    pub fn for_graph(g: &Graph, m: &Motif) -> Result<Self> {
        Ok(MotifCountResult {
            ordered_count: ordered_count_binary(g, m)? as f64,
            set_count: Some(set_count(g, m)?),
            aut: Some(automorphism_count(m)),
        })
    }

    /// `ordered = aut × set`, when both are known.
    pub fn identity_holds(&self) -> Option<bool> {
        match (self.set_count, self.aut) {
            (Some(s), Some(a)) => Some(self.ordered_count == (a * s) as f64),
            _ => None,
        }
    }
}

fn check_compatible(g: &impl Adjacency, m: &Motif) -> Result<()> {
    if g.is_directed() != m.directed() {
        return Err(Error::directedness(
            "graph",
            g.is_directed(),
            "motif",
            m.directed(),
        ));
    }
    if g.node_count() < m.k() {
        return Err(Error::GraphTooSmall {
            n: g.node_count(),
            k: m.k(),
        });
    }
    Ok(())
}

#[inline]
fn factor(w: f64, required: bool) -> f64 {
    if required {
        w
    } else {
        1.0 - w
    }
}

/// Motif indicator of an injective tuple: in `[0, 1]` on weighted graphs,
/// exactly `0.0` or `1.0` on binary ones.
pub fn motif_indicator(g: &impl Adjacency, m: &Motif, t: &NodeTuple) -> Result<f64> {
    if t.len() != m.k() {
        return Err(Error::ArityMismatch {
            expected: m.k(),
            got: t.len(),
        });
    }
    if g.is_directed() != m.directed() {
        return Err(Error::directedness(
            "graph",
            g.is_directed(),
            "motif",
            m.directed(),
        ));
    }
    let v = t.nodes();
    if let Some(&bad) = v.iter().find(|&&x| x >= g.node_count()) {
        return Err(Error::Validation(format!(
            "node {bad} out of range for {} nodes",
            g.node_count()
        )));
    }
    let k = m.k();
    let mut p = 1.0;
    for i in 0..k {
        for j in 0..k {
            let counted = if m.directed() { i != j } else { i < j };
            if counted {
                p *= factor(g.weight(v[i], v[j]), m.edge(i, j));
            }
        }
    }
    Ok(p)
}

/// Depth-first enumeration of injective tuples in lexicographic order. At
/// depth `d` the factors linking position `d` to earlier positions are
/// multiplied in; a zero partial product prunes the subtree.
struct TupleWalk<'a, G> {
    g: &'a G,
    m: &'a Motif,
    tuple: Vec<usize>,
    used: Vec<bool>,
}

impl<'a, G: Adjacency> TupleWalk<'a, G> {
    fn new(g: &'a G, m: &'a Motif) -> Self {
        TupleWalk {
            g,
            m,
            tuple: Vec::with_capacity(m.k()),
            used: vec![false; g.node_count()],
        }
    }

    fn step_factor(&self, v: usize) -> f64 {
        let d = self.tuple.len();
        let mut p = 1.0;
        for (i, &u) in self.tuple.iter().enumerate() {
            p *= factor(self.g.weight(u, v), self.m.edge(i, d));
            if self.m.directed() {
                p *= factor(self.g.weight(v, u), self.m.edge(d, i));
            }
        }
        p
    }

    fn walk(&mut self, acc: f64, out: &mut KahanSum) {
        if self.tuple.len() == self.m.k() {
            out.add(acc);
            return;
        }
        for v in 0..self.g.node_count() {
            if self.used[v] {
                continue;
            }
            let p = acc * self.step_factor(v);
            if p == 0.0 {
                continue;
            }
            self.used[v] = true;
            self.tuple.push(v);
            self.walk(p, out);
            self.tuple.pop();
            self.used[v] = false;
        }
    }

    /// Sum over all tuples whose first node is `first`.
    fn partition(mut self, first: usize) -> f64 {
        let mut out = KahanSum::default();
        self.used[first] = true;
        self.tuple.push(first);
        self.walk(1.0, &mut out);
        out.value()
    }
}

/// Ordered motif count: the sum of the indicator over all injective tuples.
///
/// The sum is split by first node; each partition is compensated-summed and
/// the partitions are combined in node order, so the value does not depend on
/// how many worker threads run.
pub fn ordered_count<G: Adjacency + Sync>(g: &G, m: &Motif) -> Result<f64> {
    check_compatible(g, m)?;
    let n = g.node_count();
    let partials: Vec<f64> = if (n as f64).powi(m.k() as i32) >= PARALLEL_TUPLES {
        (0..n)
            .into_par_iter()
            .map(|v| TupleWalk::new(g, m).partition(v))
            .collect()
    } else {
        (0..n).map(|v| TupleWalk::new(g, m).partition(v)).collect()
    };
    Ok(partials.into_iter().collect::<KahanSum>().value())
}

/// Ordered count of a binary graph as an exact integer.
pub fn ordered_count_binary(g: &Graph, m: &Motif) -> Result<u64> {
    check_compatible(g, m)?;
    let mut tuple = Vec::with_capacity(m.k());
    let mut used = vec![false; g.n()];
    Ok(count_binary(g, m, &mut tuple, &mut used))
}

fn extends(g: &Graph, m: &Motif, tuple: &[usize], v: usize) -> bool {
    let d = tuple.len();
    tuple.iter().enumerate().all(|(i, &u)| {
        g.has_edge(u, v) == m.edge(i, d) && (!m.directed() || g.has_edge(v, u) == m.edge(d, i))
    })
}

fn count_binary(g: &Graph, m: &Motif, tuple: &mut Vec<usize>, used: &mut [bool]) -> u64 {
    if tuple.len() == m.k() {
        return 1;
    }
    let mut total = 0;
    for v in 0..g.n() {
        if used[v] || !extends(g, m, tuple, v) {
            continue;
        }
        used[v] = true;
        tuple.push(v);
        total += count_binary(g, m, tuple, used);
        tuple.pop();
        used[v] = false;
    }
    total
}

fn ordering_matches(g: &Graph, m: &Motif, order: &[usize]) -> bool {
    (1..order.len()).all(|d| extends(g, m, &order[..d], order[d]))
}

/// Number of `k`-subsets of nodes admitting at least one ordering that matches
/// the template. Each subset tries its `k!` orderings and stops at the first
/// match.
pub fn set_count(g: &Graph, m: &Motif) -> Result<u64> {
    check_compatible(g, m)?;
    let k = m.k();
    let count = (0..g.n())
        .combinations(k)
        .filter(|subset| {
            subset
                .iter()
                .copied()
                .permutations(k)
                .any(|order| ordering_matches(g, m, &order))
        })
        .count();
    Ok(count as u64)
}

/// All index permutations `π` with `M[i][j] = M[π(i)][π(j)]` for every `i, j`,
/// in lexicographic order. The identity is always first.
pub fn automorphisms(m: &Motif) -> Vec<Vec<usize>> {
    let k = m.k();
    (0..k)
        .permutations(k)
        .filter(|p| (0..k).all(|i| (0..k).all(|j| m.edge(i, j) == m.edge(p[i], p[j]))))
        .collect()
}

pub fn automorphism_count(m: &Motif) -> u64 {
    automorphisms(m).len() as u64
}

/// Trace of the cubed adjacency (or probability) matrix of an undirected
/// graph: the number of closed 3-walks, i.e. six times the number of
/// triangles. With a zero diagonal this equals the ordered count of the
/// triangle motif, on binary and weighted graphs alike.
///
/// Row `i` of `A²` is formed as a combination of the rows of `A` and dotted
/// with row `i` of `A` (which is column `i` by symmetry), so `A³` is never
/// materialized.
pub fn triangle_count_trace<G: Adjacency + Sync>(g: &G) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::Validation(
            "the trace triangle kernel requires an undirected graph".into(),
        ));
    }
    let n = g.node_count();
    let a: Vec<f64> = (0..n * n).map(|x| g.weight(x / n, x % n)).collect();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |sq_row, i| {
                sq_row.fill(0.0);
                let row_i = &a[i * n..(i + 1) * n];
                for (j, &aij) in row_i.iter().enumerate() {
                    if aij == 0.0 {
                        continue;
                    }
                    let row_j = &a[j * n..(j + 1) * n];
                    for (s, &ajk) in sq_row.iter_mut().zip(row_j) {
                        *s += aij * ajk;
                    }
                }
                sq_row.iter().zip(row_i).map(|(s, a)| s * a).sum::<f64>()
            },
        )
        .collect();
    Ok(rows.into_iter().collect::<KahanSum>().value())
}
