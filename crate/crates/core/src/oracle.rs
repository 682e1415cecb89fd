//! Ground truth by exhaustive enumeration.
//!
//! Every graph on `n` nodes corresponds to a bitmask over the `L` independent
//! links (`n(n−1)` directed, `n(n−1)/2` undirected), listed in row-major
//! order. Enumerating all `2^L` masks gives exact expectations and exact count
//! distributions under an expected adjacency matrix, which is what the fast
//! path is checked against.
//!
//! Ordered counts here come from [`brute_force_ordered_count`], a direct scan
//! of all `n^k` tuples that shares no code with [`crate::count`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::count::{automorphism_count, ordered_count, ordered_count_binary, set_count};
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::mixture::{graph_log_likelihood, links};
use crate::motif::Motif;
use crate::sum::KahanSum;

/// Default cap on the number of independent links, i.e. at most `2^30` graphs.
pub const DEFAULT_MAX_LINKS: usize = 30;

/// Absolute tolerance for fast-path versus oracle agreement.
pub const TOLERANCE: f64 = 1e-9;

/// Masks per parallel work unit. Chunk boundaries are fixed, so sums do not
/// depend on the number of worker threads.
const CHUNK: u64 = 1 << 12;

pub fn link_count(n: usize, directed: bool) -> usize {
    let pairs = n * n.saturating_sub(1);
    if directed {
        pairs
    } else {
        pairs / 2
    }
}

fn check_size(n: usize, directed: bool, max_links: usize) -> Result<usize> {
    let l = link_count(n, directed);
    // a u64 mask range caps L at 63 regardless of the configured limit
    if l > max_links || l > 63 {
        return Err(Error::SizeLimit {
            n,
            links: l,
            limit: max_links.min(63),
        });
    }
    Ok(l)
}

/// All graphs on `n` nodes in link-bitmask order.
#[derive(Debug, Clone)]
pub struct GraphEnumeration {
    n: usize,
    directed: bool,
    links: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl GraphEnumeration {
    pub fn len(&self) -> u64 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Iterator for GraphEnumeration {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.next == self.end {
            return None;
        }
        let g = graph_from_mask(self.n, self.directed, &self.links, self.next);
        self.next += 1;
        Some(g)
    }
}

pub fn enumerate_graphs(n: usize, directed: bool) -> Result<GraphEnumeration> {
    enumerate_graphs_with_limit(n, directed, DEFAULT_MAX_LINKS)
}

pub fn enumerate_graphs_with_limit(
    n: usize,
    directed: bool,
    max_links: usize,
) -> Result<GraphEnumeration> {
    let l = check_size(n, directed, max_links)?;
    Ok(GraphEnumeration {
        n,
        directed,
        links: links(n, directed).collect(),
        next: 0,
        end: 1 << l,
    })
}

fn graph_from_mask(n: usize, directed: bool, links: &[(usize, usize)], mask: u64) -> Graph {
    let mut g = Graph::empty(n, directed);
    for (bit, &(u, v)) in links.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            g.insert(u, v);
        }
    }
    g
}

fn mask_probability(wg: &WeightedGraph, links: &[(usize, usize)], mask: u64) -> f64 {
    links
        .iter()
        .enumerate()
        .map(|(bit, &(u, v))| {
            let p = wg.prob(u, v);
            if mask >> bit & 1 == 1 {
                p
            } else {
                1.0 - p
            }
        })
        .product()
}

/// Sums `f(graph, mask)` over every mask, chunk-parallel with an ordered merge.
fn sum_over_graphs(
    n: usize,
    directed: bool,
    max_links: usize,
    f: impl Fn(&Graph, u64) -> f64 + Sync,
) -> Result<f64> {
    let l = check_size(n, directed, max_links)?;
    let links: Vec<_> = links(n, directed).collect();
    let total = 1u64 << l;
    let chunks = total.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = KahanSum::default();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                acc.add(f(&graph_from_mask(n, directed, &links, mask), mask));
            }
            acc.value()
        })
        .collect();
    Ok(partials.into_iter().collect::<KahanSum>().value())
}

/// Ordered motif count by scanning every tuple in `V^k`, skipping tuples that
/// repeat a node, and comparing the full template against the induced
/// ordered subgraph.
pub fn brute_force_ordered_count(g: &Graph, m: &Motif) -> u64 {
    let (n, k) = (g.n(), m.k());
    if n < k {
        return 0;
    }
    let mut tuple = vec![0usize; k];
    let mut count = 0;
    loop {
        let injective = (0..k).all(|i| (0..i).all(|j| tuple[i] != tuple[j]));
        if injective {
            let matched = (0..k)
                .all(|i| (0..k).all(|j| i == j || g.has_edge(tuple[i], tuple[j]) == m.edge(i, j)));
            count += matched as u64;
        }
        // odometer increment, last position fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return count;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn check_motif(wg: &WeightedGraph, m: &Motif) -> Result<()> {
    if wg.directed() != m.directed() {
        return Err(Error::directedness(
            "graph",
            wg.directed(),
            "motif",
            m.directed(),
        ));
    }
    Ok(())
}

/// `Σ_G P(G | wg) · count(G)` over all graphs on `wg.n()` nodes.
pub fn exact_conditional_expectation(wg: &WeightedGraph, m: &Motif) -> Result<f64> {
    exact_conditional_expectation_with_limit(wg, m, DEFAULT_MAX_LINKS)
}

pub fn exact_conditional_expectation_with_limit(
    wg: &WeightedGraph,
    m: &Motif,
    max_links: usize,
) -> Result<f64> {
    check_motif(wg, m)?;
    let links: Vec<_> = links(wg.n(), wg.directed()).collect();
    sum_over_graphs(
        wg.n(),
        wg.directed(),
        max_links,
        |g, mask| match brute_force_ordered_count(g, m) {
            0 => 0.0,
            c => mask_probability(wg, &links, mask) * c as f64,
        },
    )
}

/// `Σ_G exp(log P(G | wg))`; 1 up to rounding for any valid `wg`.
pub fn likelihood_mass(wg: &WeightedGraph) -> Result<f64> {
    sum_over_graphs(wg.n(), wg.directed(), DEFAULT_MAX_LINKS, |g, _| {
        graph_log_likelihood(g, wg)
            .expect("enumerated graph matches wg")
            .exp()
    })
}

/// Exact probability mass function of a motif count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactDistribution {
    /// `(count, probability)` pairs in increasing count order.
    pub support: Vec<(u64, f64)>,
}

impl ExactDistribution {
    pub fn total_mass(&self) -> f64 {
        self.support
            .iter()
            .map(|&(_, p)| p)
            .collect::<KahanSum>()
            .value()
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .map(|&(c, p)| c as f64 * p)
            .collect::<KahanSum>()
            .value()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.support
            .iter()
            .map(|&(c, p)| (c as f64 - mu).powi(2) * p)
            .collect::<KahanSum>()
            .value()
    }

    pub fn probability(&self, count: u64) -> f64 {
        self.support
            .iter()
            .find(|&&(c, _)| c == count)
            .map_or(0.0, |&(_, p)| p)
    }
}

/// Distribution of the ordered count (or, with `set_based`, the set count)
/// over all graphs.
pub fn exact_count_distribution(
    wg: &WeightedGraph,
    m: &Motif,
    set_based: bool,
) -> Result<ExactDistribution> {
    exact_count_distribution_with_limit(wg, m, set_based, DEFAULT_MAX_LINKS)
}

pub fn exact_count_distribution_with_limit(
    wg: &WeightedGraph,
    m: &Motif,
    set_based: bool,
    max_links: usize,
) -> Result<ExactDistribution> {
    check_motif(wg, m)?;
    let (n, directed) = (wg.n(), wg.directed());
    let l = check_size(n, directed, max_links)?;
    let links: Vec<_> = links(n, directed).collect();
    let total = 1u64 << l;
    let chunks = total.div_ceil(CHUNK);
    let partials: Vec<BTreeMap<u64, KahanSum>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc: BTreeMap<u64, KahanSum> = BTreeMap::new();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let g = graph_from_mask(n, directed, &links, mask);
                let count = if set_based {
                    set_count(&g, m).unwrap_or(0)
                } else {
                    brute_force_ordered_count(&g, m)
                };
                acc.entry(count)
                    .or_default()
                    .add(mask_probability(wg, &links, mask));
            }
            acc
        })
        .collect();
    let mut merged: BTreeMap<u64, KahanSum> = BTreeMap::new();
    for part in partials {
        for (c, s) in part {
            merged.entry(c).or_default().add(s.value());
        }
    }
    Ok(ExactDistribution {
        support: merged.into_iter().map(|(c, s)| (c, s.value())).collect(),
    })
}

/// Fast path versus oracle for one expected adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FastPathCheck {
    pub fast_path: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

pub fn check_fast_path(wg: &WeightedGraph, m: &Motif, max_links: usize) -> Result<FastPathCheck> {
    let oracle = exact_conditional_expectation_with_limit(wg, m, max_links)?;
    let fast_path = ordered_count(wg, m)?;
    let abs_diff = (fast_path - oracle).abs();
    Ok(FastPathCheck {
        fast_path,
        oracle,
        abs_diff,
        pass: abs_diff <= TOLERANCE,
    })
}

/// `Aut × E[set count]` versus `E[ordered count]`, both exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedIdentityCheck {
    pub aut: u64,
    pub expected_set: f64,
    pub expected_ordered: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

pub fn check_expected_identity(
    wg: &WeightedGraph,
    m: &Motif,
    max_links: usize,
) -> Result<ExpectedIdentityCheck> {
    let aut = automorphism_count(m);
    let expected_set = exact_count_distribution_with_limit(wg, m, true, max_links)?.mean();
    let expected_ordered = exact_conditional_expectation_with_limit(wg, m, max_links)?;
    let abs_diff = (aut as f64 * expected_set - expected_ordered).abs();
    Ok(ExpectedIdentityCheck {
        aut,
        expected_set,
        expected_ordered,
        abs_diff,
        pass: abs_diff <= TOLERANCE,
    })
}

/// A graph on which `ordered = aut × set` fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
    pub ordered: u64,
    pub set: u64,
    pub aut: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub aut: u64,
    pub graphs_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn check_identity_on(g: &Graph, m: &Motif) -> Result<Option<Counterexample>> {
    let ordered = ordered_count_binary(g, m)?;
    let set = set_count(g, m)?;
    let aut = automorphism_count(m);
    Ok((ordered != aut * set).then(|| Counterexample {
        n: g.n(),
        directed: g.directed(),
        edges: g.edges().collect(),
        ordered,
        set,
        aut,
    }))
}

/// Largest node count used for random trials.
pub const IDENTITY_MAX_N: usize = 7;
/// Graphs up to this many nodes are checked exhaustively.
pub const IDENTITY_EXHAUSTIVE_N: usize = 4;

/// Checks `ordered = aut × set` on every graph with `k ≤ n ≤ 4` nodes and on
/// `trials` random graphs with `k ≤ n ≤ max(k, 7)` nodes and a random edge
/// density. Stops at the first counterexample.
pub fn check_identity(m: &Motif, trials: usize, seed: u64) -> Result<IdentityReport> {
    let aut = automorphism_count(m);
    let mut checked = 0;
    let report = |checked, counterexample| IdentityReport {
        aut,
        graphs_checked: checked,
        counterexample,
    };

    for n in m.k()..=IDENTITY_EXHAUSTIVE_N {
        for g in enumerate_graphs(n, m.directed())? {
            checked += 1;
            if let Some(c) = check_identity_on(&g, m)? {
                return Ok(report(checked, Some(c)));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = IDENTITY_MAX_N.max(m.k());
    for _ in 0..trials {
        let n = rng.random_range(m.k()..=max_n);
        let density: f64 = rng.random();
        let mut g = Graph::empty(n, m.directed());
        for (u, v) in links(n, m.directed()) {
            if rng.random::<f64>() < density {
                g.insert(u, v);
            }
        }
        checked += 1;
        if let Some(c) = check_identity_on(&g, m)? {
            return Ok(report(checked, Some(c)));
        }
    }
    Ok(report(checked, None))
}
