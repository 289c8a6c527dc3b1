//! Numeric cross-checks for the exact engine: tensor Gauss-Legendre
//! quadrature, rejection and Metropolis samplers, Haar sampling.

pub mod haar;
pub mod quadrature;
pub mod sampler;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use haar::{haar_estimate, haar_sample, Group};
pub use quadrature::{quadrature, Domain, Payload, QuadratureResult, QuadratureSpec, Weight};
pub use sampler::{
    mcmc_eigenvalue_sample, rejection_estimate, rejection_sample_ball, BallEnsemble, BallSampler, LogGas, McmcConfig,
    Observable,
};

/// Minimum number of batches behind every standard error.
pub const MIN_BATCHES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Acceptance rate of the rejection or Metropolis step.
    pub acceptance_rate: f64,
    pub effective_sample_size: f64,
    pub batches: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub diagnostics: Diagnostics,
}

impl SampleEstimate {
    /// Distance to `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.stderr
    }

    pub fn agrees_with(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target).abs() <= sigmas
    }
}

/// Independent stream for chain `chain` of a run seeded with `seed`.
pub(crate) fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

/// Running batch means for a fixed set of statistics.
#[derive(Clone, Debug)]
pub(crate) struct BatchStats {
    batch_size: u64,
    in_batch: u64,
    partial: Vec<f64>,
    means: Vec<Vec<f64>>,
    sum: Vec<f64>,
    sumsq: Vec<f64>,
    count: u64,
}

impl BatchStats {
    pub(crate) fn new(stats: usize, batch_size: u64) -> Self {
        BatchStats {
            batch_size: batch_size.max(1),
            in_batch: 0,
            partial: vec![0.0; stats],
            means: vec![Vec::new(); stats],
            sum: vec![0.0; stats],
            sumsq: vec![0.0; stats],
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            self.partial[i] += v;
            self.sum[i] += v;
            self.sumsq[i] += v * v;
        }
        self.count += 1;
        self.in_batch += 1;
        if self.in_batch == self.batch_size {
            for (m, p) in self.means.iter_mut().zip(self.partial.iter_mut()) {
                m.push(*p / self.batch_size as f64);
                *p = 0.0;
            }
            self.in_batch = 0;
        }
    }
}

/// Merge per-chain statistics in chain order. Only complete batches enter
/// the standard error; the mean uses every sample.
pub(crate) fn merge_batches(chains: &[BatchStats], seed: u64, acceptance_rate: f64, warnings: Vec<String>) -> Vec<SampleEstimate> {
    let stats = chains.first().map_or(0, |c| c.sum.len());
    (0..stats)
        .map(|i| {
            let count: u64 = chains.iter().map(|c| c.count).sum();
            let sum: f64 = chains.iter().map(|c| c.sum[i]).sum();
            let sumsq: f64 = chains.iter().map(|c| c.sumsq[i]).sum();
            let mean = sum / count as f64;
            let batch_means: Vec<f64> = chains.iter().flat_map(|c| c.means[i].iter().copied()).collect();
            let b = batch_means.len();
            let bm = batch_means.iter().sum::<f64>() / b as f64;
            let bvar = batch_means.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (b as f64 - 1.0);
            let stderr = (bvar / b as f64).sqrt();
            let var = (sumsq / count as f64 - mean * mean).max(0.0);
            let ess = if stderr > 0.0 { var / (stderr * stderr) } else { count as f64 };
            let mut warnings = warnings.clone();
            if b < MIN_BATCHES {
                warnings.push(format!("only {b} batches"));
            }
            SampleEstimate {
                mean,
                stderr,
                n_samples: count,
                seed,
                diagnostics: Diagnostics {
                    acceptance_rate,
                    effective_sample_size: ess,
                    batches: b,
                    warnings,
                },
            }
        })
        .collect()
}

/// Split `total` into `parts` near-equal shares, larger shares first.
pub(crate) fn split_evenly(total: u64, parts: usize) -> Vec<u64> {
    let parts = parts.max(1) as u64;
    (0..parts).map(|i| total / parts + u64::from(i < total % parts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_means_of_constant_stream() {
        let mut b = BatchStats::new(1, 10);
        for _ in 0..400 {
            b.push(&[2.0]);
        }
        let e = &merge_batches(&[b], 0, 1.0, vec![])[0];
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.stderr, 0.0);
        assert_eq!(e.diagnostics.batches, 40);
    }

    #[test]
    fn split() {
        assert_eq!(split_evenly(10, 3), vec![4, 3, 3]);
        assert_eq!(split_evenly(10, 3).iter().sum::<u64>(), 10);
    }
}
