//! Rejection sampling from operator-norm balls and Metropolis sampling of
//! log-gas eigenvalue densities.

use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{chain_rng, merge_batches, split_evenly, BatchStats, SampleEstimate, MIN_BATCHES};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Rejection sampling stops being practical beyond this size.
pub const MAX_BALL_DIMENSION: usize = 4;
pub const MAX_MCMC_DIMENSION: usize = 64;
pub const MIN_BURN_IN: u64 = 10_000;
const LOW_ACCEPTANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallEnsemble {
    Hermitian,
    RealSymmetric,
    RealFull,
    ComplexFull,
}

impl FromStr for BallEnsemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "her" | "hermitian" => BallEnsemble::Hermitian,
            "sym" | "real-symmetric" => BallEnsemble::RealSymmetric,
            "real-full" => BallEnsemble::RealFull,
            "complex-full" => BallEnsemble::ComplexFull,
            _ => return Err(Error::Parse(format!("unknown ball ensemble {s:?}"))),
        })
    }
}

impl BallEnsemble {
    fn propose(&self, n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut u = || rng.random_range(-1.0..1.0);
        let mut m = CMatrix::zeros(n, n);
        match self {
            BallEnsemble::Hermitian | BallEnsemble::RealSymmetric => {
                let complex = *self == BallEnsemble::Hermitian;
                for i in 0..n {
                    m[(i, i)] = Complex64::new(u(), 0.0);
                    for j in i + 1..n {
                        let z = Complex64::new(u(), if complex { u() } else { 0.0 });
                        m[(i, j)] = z;
                        m[(j, i)] = z.conj();
                    }
                }
            }
            BallEnsemble::RealFull => {
                for z in m.iter_mut() {
                    *z = Complex64::new(u(), 0.0);
                }
            }
            BallEnsemble::ComplexFull => {
                for z in m.iter_mut() {
                    *z = Complex64::new(u(), u());
                }
            }
        }
        m
    }

    /// Spectral norm at most one, tested through positive definiteness of
    /// the real embedding (complex Cholesky is not used here).
    fn in_ball(&self, m: &CMatrix) -> bool {
        let r = match self {
            BallEnsemble::RealSymmetric | BallEnsemble::RealFull => m.map(|z| z.re),
            _ => real_embedding(m),
        };
        let id = DMatrix::<f64>::identity(r.nrows(), r.ncols());
        match self {
            BallEnsemble::Hermitian | BallEnsemble::RealSymmetric => {
                Cholesky::new(&id - &r).is_some() && Cholesky::new(&id + &r).is_some()
            }
            BallEnsemble::RealFull | BallEnsemble::ComplexFull => Cholesky::new(&id - r.transpose() * &r).is_some(),
        }
    }
}

/// `A + iB` as `[[A, -B], [B, A]]`; singular values and eigenvalues are
/// preserved with doubled multiplicity.
fn real_embedding(m: &CMatrix) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Endless stream of uniform samples from one ball, for one chain.
pub struct BallSampler {
    ensemble: BallEnsemble,
    n: usize,
    rng: ChaCha8Rng,
    pub proposals: u64,
    pub accepted: u64,
}

impl BallSampler {
    pub fn new(ensemble: BallEnsemble, n: usize, seed: u64, chain: usize) -> Result<Self> {
        if n == 0 || n > MAX_BALL_DIMENSION {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(BallSampler {
            ensemble,
            n,
            rng: chain_rng(seed, chain),
            proposals: 0,
            accepted: 0,
        })
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals.max(1) as f64
    }
}

impl Iterator for BallSampler {
    type Item = CMatrix;

    fn next(&mut self) -> Option<CMatrix> {
        loop {
            self.proposals += 1;
            let m = self.ensemble.propose(self.n, &mut self.rng);
            if self.ensemble.in_ball(&m) {
                self.accepted += 1;
                return Some(m);
            }
        }
    }
}

pub fn rejection_sample_ball(ensemble: BallEnsemble, n: usize, count: usize, seed: u64) -> Result<Vec<CMatrix>> {
    Ok(BallSampler::new(ensemble, n, seed, 0)?.take(count).collect())
}

fn batches_per_chain(chains: usize) -> u64 {
    (2 * MIN_BATCHES).div_ceil(chains.max(1)) as u64
}

/// Estimate `E[stats(T)]` from `count` accepted samples split over
/// independent chains. The result does not depend on the thread count.
pub fn rejection_estimate<F>(
    ensemble: BallEnsemble,
    n: usize,
    count: u64,
    seed: u64,
    chains: usize,
    stats: F,
) -> Result<Vec<SampleEstimate>>
where
    F: Fn(&CMatrix) -> Vec<f64> + Sync,
{
    let chains = chains.max(1);
    // Validate before spawning work.
    BallSampler::new(ensemble, n, seed, 0)?;
    let per_chain = batches_per_chain(chains);
    let width = stats(&CMatrix::zeros(n, n)).len();
    let runs: Vec<(BatchStats, u64, u64)> = split_evenly(count, chains)
        .into_par_iter()
        .enumerate()
        .map(|(c, share)| {
            let mut s = BallSampler::new(ensemble, n, seed, c).expect("validated");
            let mut b = BatchStats::new(width, share / per_chain);
            for m in s.by_ref().take(share as usize) {
                b.push(&stats(&m));
            }
            (b, s.proposals, s.accepted)
        })
        .collect();
    let proposals: u64 = runs.iter().map(|r| r.1).sum();
    let accepted: u64 = runs.iter().map(|r| r.2).sum();
    let rate = accepted as f64 / proposals.max(1) as f64;
    let mut warnings = Vec::new();
    if rate < LOW_ACCEPTANCE {
        warnings.push(format!("LowAcceptance: rate {rate:.3e}"));
    }
    let batches: Vec<BatchStats> = runs.into_iter().map(|r| r.0).collect();
    Ok(merge_batches(&batches, seed, rate, warnings))
}

/// Log-gas density `prod_{i<j} |x_i^a - x_j^a|^b prod |x_i|^c` on `[-1,1]^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogGas {
    pub a: u32,
    pub b: f64,
    pub c: f64,
}

impl LogGas {
    /// Terms of the log-density that involve coordinate `i` at value `xi`.
    fn local_log_density(&self, x: &[f64], i: usize, xi: f64) -> f64 {
        let a = self.a as i32;
        let xa = xi.powi(a);
        let mut s = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if j != i {
                s += (xa - xj.powi(a)).abs().ln();
            }
        }
        self.b * s + if self.c != 0.0 { self.c * xi.abs().ln() } else { 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "power", rename_all = "kebab-case")]
pub enum Observable {
    /// `Σ x_i^p`
    PowerSum(u32),
    /// `(Σ x_i^p)^2`
    PowerSumSquared(u32),
}

impl Observable {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Observable::PowerSum(p) => x.iter().map(|v| v.powi(p as i32)).sum(),
            Observable::PowerSumSquared(p) => x.iter().map(|v| v.powi(p as i32)).sum::<f64>().powi(2),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// `p2` for `Σx^2`, `p2^2` for its square.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown observable {s:?}, expected pK or pK^2"));
        let body = s.strip_prefix('p').ok_or_else(bad)?;
        if let Some(k) = body.strip_suffix("^2") {
            Ok(Observable::PowerSumSquared(k.parse().map_err(|_| bad())?))
        } else {
            Ok(Observable::PowerSum(body.parse().map_err(|_| bad())?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McmcConfig {
    pub n: usize,
    /// Sweeps per chain after burn-in; a sweep updates every coordinate once.
    pub steps: u64,
    pub burn_in: u64,
    pub chains: usize,
    pub seed: u64,
}

const TARGET_ACCEPTANCE: f64 = 0.3;

struct Chain {
    x: Vec<f64>,
    width: f64,
    proposed: u64,
    accepted: u64,
}

impl Chain {
    fn new(n: usize) -> Self {
        // Distinct positive starting points keep every factor nonzero.
        let x = (0..n).map(|i| 0.9 * (i as f64 + 0.5) / n as f64).collect();
        Chain {
            x,
            width: 0.5,
            proposed: 0,
            accepted: 0,
        }
    }

    fn sweep(&mut self, density: &LogGas, rng: &mut ChaCha8Rng) {
        for i in 0..self.x.len() {
            let cand = self.x[i] + self.width * rng.random_range(-1.0..1.0);
            self.proposed += 1;
            if !(-1.0..=1.0).contains(&cand) {
                continue;
            }
            let delta = density.local_log_density(&self.x, i, cand) - density.local_log_density(&self.x, i, self.x[i]);
            if delta >= 0.0 || rng.random::<f64>() < delta.exp() {
                self.x[i] = cand;
                self.accepted += 1;
            }
        }
    }
}

/// Metropolis estimates of `E[observable]` under a log-gas density, with
/// single-coordinate uniform proposals. The proposal width adapts during
/// burn-in towards 30% acceptance and is then frozen.
pub fn mcmc_eigenvalue_sample(density: LogGas, cfg: McmcConfig, observables: &[Observable]) -> Result<Vec<SampleEstimate>> {
    if cfg.n == 0 || cfg.n > MAX_MCMC_DIMENSION {
        return Err(Error::UnsupportedDimension(cfg.n));
    }
    if cfg.burn_in < MIN_BURN_IN {
        return Err(Error::ParamOutOfRange(format!("burn-in {} is below {MIN_BURN_IN}", cfg.burn_in)));
    }
    if observables.is_empty() {
        return Err(Error::ParamOutOfRange("no observables requested".into()));
    }
    let chains = cfg.chains.max(1);
    let batch = (cfg.steps / batches_per_chain(chains)).max(1);
    let runs: Vec<(BatchStats, u64, u64)> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let mut rng = chain_rng(cfg.seed, c);
            let mut ch = Chain::new(cfg.n);
            let block = 100;
            let mut done = 0;
            while done < cfg.burn_in {
                let (p0, a0) = (ch.proposed, ch.accepted);
                for _ in 0..block.min(cfg.burn_in - done) {
                    ch.sweep(&density, &mut rng);
                }
                done += block;
                let rate = (ch.accepted - a0) as f64 / (ch.proposed - p0) as f64;
                ch.width = (ch.width * (rate - TARGET_ACCEPTANCE).exp()).clamp(1e-4, 2.0);
            }
            ch.proposed = 0;
            ch.accepted = 0;
            let mut b = BatchStats::new(observables.len(), batch);
            let mut vals = vec![0.0; observables.len()];
            for _ in 0..cfg.steps {
                ch.sweep(&density, &mut rng);
                for (v, o) in vals.iter_mut().zip(observables) {
                    *v = o.eval(&ch.x);
                }
                b.push(&vals);
            }
            (b, ch.proposed, ch.accepted)
        })
        .collect();
    let proposed: u64 = runs.iter().map(|r| r.1).sum();
    let accepted: u64 = runs.iter().map(|r| r.2).sum();
    let rate = accepted as f64 / proposed.max(1) as f64;
    let mut warnings = Vec::new();
    if !(0.1..=0.7).contains(&rate) {
        warnings.push(format!("NonErgodic: acceptance rate {rate:.3} after adaptation"));
    }
    let batches: Vec<BatchStats> = runs.into_iter().map(|r| r.0).collect();
    Ok(merge_batches(&batches, cfg.seed, rate, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_ball_is_uniform() {
        let e = rejection_estimate(BallEnsemble::Hermitian, 1, 200_000, 7, 4, |m| vec![m[(0, 0)].re.powi(2)]).unwrap();
        assert!(e[0].agrees_with(1.0 / 3.0, 4.0), "{:?}", e[0]);
        assert_eq!(e[0].diagnostics.acceptance_rate, 1.0);
    }

    #[test]
    fn samples_lie_in_the_ball() {
        for ens in [BallEnsemble::Hermitian, BallEnsemble::RealFull, BallEnsemble::ComplexFull] {
            for m in rejection_sample_ball(ens, 2, 50, 1).unwrap() {
                let s = m.clone().singular_values();
                assert!(s.iter().all(|&v| v <= 1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |m: &CMatrix| vec![m[(0, 1)].norm_sqr()];
        let a = rejection_estimate(BallEnsemble::RealSymmetric, 2, 20_000, 3, 8, f).unwrap();
        let b = rejection_estimate(BallEnsemble::RealSymmetric, 2, 20_000, 3, 8, f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_limits() {
        assert!(matches!(
            rejection_sample_ball(BallEnsemble::Hermitian, 5, 1, 0),
            Err(Error::UnsupportedDimension(5))
        ));
        let cfg = McmcConfig {
            n: 65,
            steps: 10,
            burn_in: MIN_BURN_IN,
            chains: 1,
            seed: 0,
        };
        let d = LogGas { a: 1, b: 2.0, c: 0.0 };
        assert!(matches!(
            mcmc_eigenvalue_sample(d, cfg, &[Observable::PowerSum(2)]),
            Err(Error::UnsupportedDimension(65))
        ));
    }

    #[test]
    fn observable_parse() {
        assert_eq!("p2".parse::<Observable>().unwrap(), Observable::PowerSum(2));
        assert_eq!("p2^2".parse::<Observable>().unwrap(), Observable::PowerSumSquared(2));
        assert!("q2".parse::<Observable>().is_err());
    }
}
