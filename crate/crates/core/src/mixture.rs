//! Latent-variable mixture models with conditionally independent links.
//!
//! A latent vector `z` drawn from a standard normal prior is decoded into a
//! [`WeightedGraph`] of link probabilities; a graph is then drawn by sampling
//! each independent link once. Undirected links are sampled once and mirrored.
//!
//! Randomness comes from ChaCha8 with explicit 64-bit seeds. Independent
//! draws use disjoint ChaCha streams of the same key (see [`substream`]), so a
//! draw depends only on `(seed, stream)`, never on thread scheduling.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::sum::KahanSum;

/// Stream used for latent draws; graph `i` of an estimator run uses stream
/// `GRAPH_STREAM_BASE + i`.
pub(crate) const LATENT_STREAM: u64 = 0;
pub(crate) const GRAPH_STREAM_BASE: u64 = 1;

pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatentVector(pub Vec<f64>);

impl LatentVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Standard normal prior over `R^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriorSpec {
    pub dim: usize,
    pub seed: u64,
}

impl PriorSpec {
    pub fn standard_normal(dim: usize, seed: u64) -> Self {
        PriorSpec { dim, seed }
    }
}

/// Draws `count` latent vectors. Entries are drawn row by row from a single
/// stream, so the first `m` vectors of a larger draw equal a draw of `m`.
pub fn sample_latent(p: &PriorSpec, count: usize) -> Vec<LatentVector> {
    let mut rng = substream(p.seed, LATENT_STREAM);
    (0..count)
        .map(|_| LatentVector((0..p.dim).map(|_| rng.sample(StandardNormal)).collect()))
        .collect()
}

/// Parses a latent-samples file: one whitespace-separated vector per line,
/// blank lines and `#` comments skipped. All vectors must share a dimension.
pub fn parse_latents(text: &str) -> Result<Vec<LatentVector>> {
    let mut out: Vec<LatentVector> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let z = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("`{tok}` is not a finite number"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            if first.dim() != z.len() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("vector has {} entries, expected {}", z.len(), first.dim()),
                });
            }
        }
        out.push(LatentVector(z));
    }
    Ok(out)
}

#[inline]
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum DecoderKind {
    /// Fixed probability matrix; the latent vector is ignored.
    Table(WeightedGraph),
    /// `p(i, j) = logistic(Σ_d E[i][d] · z[d] · E[j][d] + bias)`, a bilinear
    /// inner product whose per-dimension weights are the latent vector.
    InnerProduct {
        dim: usize,
        embeddings: Vec<Vec<f64>>,
        bias: f64,
    },
}

/// Deterministic map from a latent vector to an expected adjacency matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoder {
    n: usize,
    directed: bool,
    kind: DecoderKind,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum DecoderFile {
    Table {
        directed: bool,
        probs: Vec<Vec<f64>>,
    },
    InnerProduct {
        directed: bool,
        dim: usize,
        embeddings: Vec<Vec<f64>>,
        bias: f64,
    },
}

impl Decoder {
    pub fn table(probs: WeightedGraph) -> Self {
        Decoder {
            n: probs.n(),
            directed: probs.directed(),
            kind: DecoderKind::Table(probs),
        }
    }

    /// `embeddings` holds one row of length `dim` per node.
    pub fn inner_product(
        directed: bool,
        dim: usize,
        embeddings: Vec<Vec<f64>>,
        bias: f64,
    ) -> Result<Self> {
        for (i, row) in embeddings.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Validation(format!(
                    "embedding row {i} has {} entries, expected dim = {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!(
                    "embedding row {i} is not finite"
                )));
            }
        }
        if !bias.is_finite() {
            return Err(Error::Validation("bias is not finite".into()));
        }
        Ok(Decoder {
            n: embeddings.len(),
            directed,
            kind: DecoderKind::InnerProduct {
                dim,
                embeddings,
                bias,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Latent dimension consumed by [`Decoder::decode`]; 0 for table decoders.
    pub fn latent_dim(&self) -> usize {
        match &self.kind {
            DecoderKind::Table(_) => 0,
            DecoderKind::InnerProduct { dim, .. } => *dim,
        }
    }

    /// True when the output does not depend on the latent vector.
    pub fn is_latent_free(&self) -> bool {
        matches!(self.kind, DecoderKind::Table(_))
    }

    /// Table decoders ignore `z` whatever its length; inner-product decoders
    /// require `z.dim() == latent_dim()`.
    pub fn decode(&self, z: &LatentVector) -> Result<WeightedGraph> {
        match &self.kind {
            DecoderKind::Table(wg) => Ok(wg.clone()),
            DecoderKind::InnerProduct {
                dim,
                embeddings,
                bias,
            } => {
                if z.dim() != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        got: z.dim(),
                    });
                }
                if z.0.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Validation("latent vector is not finite".into()));
                }
                let n = self.n;
                let mut probs = vec![0.0; n * n];
                for i in 0..n {
                    for j in i + 1..n {
                        let score: f64 = embeddings[i]
                            .iter()
                            .zip(&z.0)
                            .zip(&embeddings[j])
                            .map(|((a, w), b)| a * w * b)
                            .sum();
                        let p = logistic(score + bias);
                        probs[i * n + j] = p;
                        probs[j * n + i] = p;
                    }
                }
                WeightedGraph::from_flat(n, self.directed, probs)
            }
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        match serde_json::from_str(s)? {
            DecoderFile::Table { directed, probs } => Ok(Decoder::table(
                WeightedGraph::from_matrix(directed, &probs)?,
            )),
            DecoderFile::InnerProduct {
                directed,
                dim,
                embeddings,
                bias,
            } => Decoder::inner_product(directed, dim, embeddings, bias),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Decoder::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let file = match &self.kind {
            DecoderKind::Table(wg) => DecoderFile::Table {
                directed: self.directed,
                probs: wg.to_matrix(),
            },
            DecoderKind::InnerProduct {
                dim,
                embeddings,
                bias,
            } => DecoderFile::InnerProduct {
                directed: self.directed,
                dim: *dim,
                embeddings: embeddings.clone(),
                bias: *bias,
            },
        };
        serde_json::to_string(&file).expect("decoder serializes")
    }
}

fn check_same_shape(g: &Graph, wg: &WeightedGraph) -> Result<()> {
    if g.n() != wg.n() {
        return Err(Error::DimensionMismatch {
            expected: wg.n(),
            got: g.n(),
        });
    }
    if g.directed() != wg.directed() {
        return Err(Error::directedness(
            "graph",
            g.directed(),
            "model",
            wg.directed(),
        ));
    }
    Ok(())
}

/// Independent links of an `n`-node graph: ordered pairs `u != v` when
/// directed, pairs `u < v` when undirected, in row-major order.
pub fn links(n: usize, directed: bool) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| {
        let start = if directed { 0 } else { u + 1 };
        (start..n).filter(move |&v| v != u).map(move |v| (u, v))
    })
}

/// Log-probability of `g` under independent Bernoulli links, one factor per
/// independent link. Returns `-inf` when some factor is exactly zero.
pub fn graph_log_likelihood(g: &Graph, wg: &WeightedGraph) -> Result<f64> {
    check_same_shape(g, wg)?;
    let mut acc = KahanSum::default();
    for (u, v) in links(g.n(), g.directed()) {
        let p = wg.prob(u, v);
        let term = if g.has_edge(u, v) {
            p.ln()
        } else {
            (-p).ln_1p()
        };
        if term == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        acc.add(term);
    }
    Ok(acc.value())
}

pub(crate) fn sample_graph_with(wg: &WeightedGraph, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(wg.n(), wg.directed());
    for (u, v) in links(wg.n(), wg.directed()) {
        if rng.random::<f64>() < wg.prob(u, v) {
            g.insert(u, v);
        }
    }
    g
}

/// Draws one graph. Links are visited in row-major order and each consumes
/// exactly one uniform draw, so the result depends only on `wg` and `seed`.
pub fn sample_graph(wg: &WeightedGraph, seed: u64) -> Graph {
    sample_graph_with(wg, &mut substream(seed, GRAPH_STREAM_BASE))
}
