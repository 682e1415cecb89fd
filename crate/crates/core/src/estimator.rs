//! Estimators for the expected motif count of a mixture model.
//!
//! The conditional estimator decodes each latent sample into its expected
//! adjacency matrix and evaluates the ordered count on that matrix directly,
//! which is the exact conditional expectation given the latent. Only the
//! latents are sampled. The naive estimator additionally samples graphs from
//! each decoded matrix and averages their binary counts; it exists to
//! cross-check the conditional estimator.
//!
//! Per-sample work runs in parallel, but values are collected by sample index
//! and aggregated sequentially, so reports are identical at any thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::count::{ordered_count, ordered_count_binary};
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::mixture::{
    sample_graph_with, sample_latent, substream, Decoder, LatentVector, PriorSpec,
    GRAPH_STREAM_BASE,
};
use crate::motif::Motif;
use crate::sum::Moments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Count on the expected adjacency matrix per latent sample.
    Conditional,
    /// Count on graphs sampled from the model.
    Naive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`; 0 for a single sample
    /// or a constant integrand.
    pub std_error: f64,
    pub samples: usize,
    pub method: Method,
    pub seed: u64,
}

impl EstimateReport {
    fn from_values(values: impl IntoIterator<Item = f64>, method: Method, seed: u64) -> Self {
        let m: Moments = values.into_iter().collect();
        EstimateReport {
            mean: m.mean(),
            std_error: m.std_dev() / (m.count() as f64).sqrt(),
            samples: m.count(),
            method,
            seed,
        }
    }
}

fn check_pair(d: &Decoder, m: &Motif) -> Result<()> {
    if d.directed() != m.directed() {
        return Err(Error::directedness(
            "decoder",
            d.directed(),
            "motif",
            m.directed(),
        ));
    }
    if d.n() < m.k() {
        return Err(Error::GraphTooSmall { n: d.n(), k: m.k() });
    }
    Ok(())
}

fn require_positive(what: &str, x: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::Validation(format!("{what} must be at least 1")));
    }
    Ok(())
}

/// Exact `E[count | z]`: the ordered count of the decoded expected adjacency
/// matrix. No graphs are sampled.
pub fn conditional_expected_count(d: &Decoder, z: &LatentVector, m: &Motif) -> Result<f64> {
    check_pair(d, m)?;
    ordered_count(&d.decode(z)?, m)
}

/// Conditional values for each latent, in latent order.
fn conditional_values(d: &Decoder, latents: &[LatentVector], m: &Motif) -> Result<Vec<f64>> {
    check_pair(d, m)?;
    require_positive("number of latent samples", latents.len())?;
    if d.is_latent_free() {
        let v = conditional_expected_count(d, &latents[0], m)?;
        return Ok(vec![v; latents.len()]);
    }
    latents
        .par_iter()
        .map(|z| conditional_expected_count(d, z, m))
        .collect()
}

/// Monte Carlo average of the conditional expectation over the given latent
/// samples (from the prior or from any external posterior sampler).
pub fn estimate_from_latents(
    d: &Decoder,
    latents: &[LatentVector],
    m: &Motif,
    seed: u64,
) -> Result<EstimateReport> {
    let values = conditional_values(d, latents, m)?;
    Ok(EstimateReport::from_values(
        values,
        Method::Conditional,
        seed,
    ))
}

/// Conditional estimator with `samples` latents drawn from the prior.
pub fn estimate_expected_count(
    d: &Decoder,
    p: &PriorSpec,
    m: &Motif,
    samples: usize,
) -> Result<EstimateReport> {
    require_positive("samples", samples)?;
    estimate_from_latents(d, &sample_latent(p, samples), m, p.seed)
}

/// Binary ordered counts of `graphs_per_z` sampled graphs per latent. Graph
/// `i` (latent `i / graphs_per_z`) is drawn from its own stream of `seed`.
pub fn naive_counts(
    d: &Decoder,
    latents: &[LatentVector],
    m: &Motif,
    graphs_per_z: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    check_pair(d, m)?;
    require_positive("number of latent samples", latents.len())?;
    require_positive("graphs per latent", graphs_per_z)?;
    let decoded: Vec<WeightedGraph> = if d.is_latent_free() {
        vec![d.decode(&latents[0])?]
    } else {
        latents
            .par_iter()
            .map(|z| d.decode(z))
            .collect::<Result<_>>()?
    };
    let total = latents.len() * graphs_per_z;
    (0..total)
        .into_par_iter()
        .map(|i| {
            let wg = &decoded[(i / graphs_per_z).min(decoded.len() - 1)];
            let mut rng = substream(seed, GRAPH_STREAM_BASE + i as u64);
            ordered_count_binary(&sample_graph_with(wg, &mut rng), m)
        })
        .collect()
}

pub fn naive_from_latents(
    d: &Decoder,
    latents: &[LatentVector],
    m: &Motif,
    graphs_per_z: usize,
    seed: u64,
) -> Result<EstimateReport> {
    let counts = naive_counts(d, latents, m, graphs_per_z, seed)?;
    Ok(EstimateReport::from_values(
        counts.into_iter().map(|c| c as f64),
        Method::Naive,
        seed,
    ))
}

/// Direct Monte Carlo estimate: sample latents, then graphs, then count.
/// `std_error` treats all `z_samples × graphs_per_z` counts as one sample.
pub fn naive_estimate(
    d: &Decoder,
    p: &PriorSpec,
    m: &Motif,
    z_samples: usize,
    graphs_per_z: usize,
) -> Result<EstimateReport> {
    require_positive("z samples", z_samples)?;
    naive_from_latents(d, &sample_latent(p, z_samples), m, graphs_per_z, p.seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignificanceMode {
    /// Spread of `E[count | z]` across latents only. Ignores the variance of
    /// the count within each `z`, so it understates the model variance.
    ConditionalSpread,
    /// Spread of counts over sampled graphs: the full model variance.
    TotalVariance,
}

impl std::str::FromStr for SignificanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conditional-spread" => Ok(SignificanceMode::ConditionalSpread),
            "total-variance" => Ok(SignificanceMode::TotalVariance),
            _ => Err(Error::Validation(format!(
                "unknown significance mode `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceReport {
    pub observed: f64,
    pub expected_mean: f64,
    pub expected_std: f64,
    /// `(observed − expected_mean) / expected_std`; `None` when the spread is 0.
    pub score: Option<f64>,
    pub undefined_score: bool,
    pub mode: SignificanceMode,
    pub samples: usize,
    pub seed: u64,
}

pub fn significance_from_latents(
    observed: &Graph,
    d: &Decoder,
    latents: &[LatentVector],
    m: &Motif,
    mode: SignificanceMode,
    graphs_per_z: usize,
    seed: u64,
) -> Result<SignificanceReport> {
    if observed.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            got: observed.n(),
        });
    }
    if observed.directed() != d.directed() {
        return Err(Error::directedness(
            "observed graph",
            observed.directed(),
            "decoder",
            d.directed(),
        ));
    }
    let obs = ordered_count_binary(observed, m)? as f64;
    let moments: Moments = match mode {
        SignificanceMode::ConditionalSpread => {
            conditional_values(d, latents, m)?.into_iter().collect()
        }
        SignificanceMode::TotalVariance => naive_counts(d, latents, m, graphs_per_z, seed)?
            .into_iter()
            .map(|c| c as f64)
            .collect(),
    };
    let expected_std = moments.std_dev();
    let score = (expected_std > 0.0).then(|| (obs - moments.mean()) / expected_std);
    Ok(SignificanceReport {
        observed: obs,
        expected_mean: moments.mean(),
        expected_std,
        score,
        undefined_score: score.is_none(),
        mode,
        samples: moments.count(),
        seed,
    })
}

/// Standardized score of the observed count against the model. `samples`
/// latents are drawn from the prior; total-variance mode samples
/// `graphs_per_z` graphs for each.
pub fn significance(
    observed: &Graph,
    d: &Decoder,
    p: &PriorSpec,
    m: &Motif,
    mode: SignificanceMode,
    samples: usize,
    graphs_per_z: usize,
) -> Result<SignificanceReport> {
    require_positive("samples", samples)?;
    significance_from_latents(
        observed,
        d,
        &sample_latent(p, samples),
        m,
        mode,
        graphs_per_z,
        p.seed,
    )
}
