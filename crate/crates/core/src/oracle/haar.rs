//! Haar-distributed unitary and orthogonal matrices by QR of a Gaussian
//! matrix with the phases of `R`'s diagonal moved into `Q`.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::sampler::CMatrix;
use super::{chain_rng, merge_batches, split_evenly, BatchStats, SampleEstimate, MIN_BATCHES};
use crate::error::{Error, Result};

pub const MAX_HAAR_DIMENSION: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Unitary,
    Orthogonal,
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary" | "u" => Ok(Group::Unitary),
            "orthogonal" | "o" => Ok(Group::Orthogonal),
            _ => Err(Error::Parse(format!("unknown group {s:?}"))),
        }
    }
}

pub(crate) fn haar_matrix<R: Rng>(group: Group, n: usize, rng: &mut R) -> CMatrix {
    let mut g = || -> f64 { rng.sample(StandardNormal) };
    let z = DMatrix::from_fn(n, n, |_, _| match group {
        Group::Unitary => Complex64::new(g(), g()),
        Group::Orthogonal => Complex64::new(g(), 0.0),
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// One Haar sample from the stream seeded with `seed`.
pub fn haar_sample(group: Group, n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 || n > MAX_HAAR_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(haar_matrix(group, n, &mut chain_rng(seed, 0)))
}

/// Batch-mean estimates of `E[stats(U)]` over `count` Haar samples.
pub fn haar_estimate<F>(group: Group, n: usize, count: u64, seed: u64, chains: usize, stats: F) -> Result<Vec<SampleEstimate>>
where
    F: Fn(&CMatrix) -> Vec<f64> + Sync,
{
    if n == 0 || n > MAX_HAAR_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    let chains = chains.max(1);
    let per_chain = (2 * MIN_BATCHES).div_ceil(chains) as u64;
    let width = stats(&CMatrix::identity(n, n)).len();
    let batches: Vec<BatchStats> = split_evenly(count, chains)
        .into_par_iter()
        .enumerate()
        .map(|(c, share)| {
            let mut rng = chain_rng(seed, c);
            let mut b = BatchStats::new(width, share / per_chain);
            for _ in 0..share {
                b.push(&stats(&haar_matrix(group, n, &mut rng)));
            }
            b
        })
        .collect();
    Ok(merge_batches(&batches, seed, 1.0, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unitary() {
        for group in [Group::Unitary, Group::Orthogonal] {
            let u = haar_sample(group, 5, 11).unwrap();
            let err = (&u.adjoint() * &u - CMatrix::identity(5, 5)).norm();
            assert!(err < 1e-12);
        }
        let o = haar_sample(Group::Orthogonal, 4, 2).unwrap();
        assert!(o.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn entry_second_moment() {
        let n = 4;
        for group in [Group::Unitary, Group::Orthogonal] {
            let e = haar_estimate(group, n, 40_000, 5, 4, |u| vec![u[(0, 0)].norm_sqr()]).unwrap();
            assert!(e[0].agrees_with(1.0 / n as f64, 4.0), "{group:?} {:?}", e[0]);
        }
    }
}
