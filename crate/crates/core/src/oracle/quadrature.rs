//! Tensor-product Gauss-Legendre quadrature for `n <= 4` dimensional
//! Selberg-type integrals.
//!
//! The integrand is symmetric in the coordinates up to the payload, so we
//! integrate over the ordered sector `t_1 < ... < t_n` and sum the payload
//! over coordinate permutations. On the sector `|t_i - t_j|` is smooth. The
//! sector is parametrised by `t_n = x_n`, `t_k = x_k t_{k+1}`, and each `x_k`
//! by `sin^2(pi s / 2)`, which also smooths square-root endpoint behaviour.

use std::f64::consts::FRAC_PI_2;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::combinat::{all_permutations, Partition};
use crate::error::{Error, Result};
use crate::jack::SymPoly;

pub const MAX_DIMENSION: usize = 4;
pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// `[0,1]^n`
    Unit,
    /// `[-1,1]^n`
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    /// `prod t^(u-1) (1-t)^(w-1) |Δ(t)|^(2 kappa)`
    Selberg { u: f64, w: f64, kappa: f64 },
    /// `prod_{i<j} |x_i^a - x_j^a|^b prod |x_i|^c`
    LogGas { a: u32, b: f64, c: f64 },
}

impl Weight {
    fn eval(&self, t: &[f64]) -> f64 {
        match *self {
            Weight::Selberg { u, w, kappa } => {
                let mut v = 1.0;
                for &x in t {
                    v *= x.powf(u - 1.0) * (1.0 - x).powf(w - 1.0);
                }
                for i in 0..t.len() {
                    for j in i + 1..t.len() {
                        v *= (t[j] - t[i]).abs().powf(2.0 * kappa);
                    }
                }
                v
            }
            Weight::LogGas { a, b, c } => {
                let mut v = 1.0;
                for &x in t {
                    v *= x.abs().powf(c);
                }
                for i in 0..t.len() {
                    for j in i + 1..t.len() {
                        v *= (t[j].powi(a as i32) - t[i].powi(a as i32)).abs().powf(b);
                    }
                }
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    One,
    /// `prod_i t_i^{e_i}`, one exponent per leading coordinate.
    Coordinates { exponents: Vec<u32> },
    /// `t_1...t_{m1} (1-t_{m1+1-m3})...(1-t_{m1+m2-m3})`
    Aomoto { m1: u32, m2: u32, m3: u32 },
    Symmetric { poly: SymPoly },
}

impl Payload {
    pub fn monomial(lambda: &Partition) -> Payload {
        Payload::Symmetric {
            poly: SymPoly::monomial(lambda),
        }
    }

    fn is_symmetric(&self) -> bool {
        matches!(self, Payload::One | Payload::Symmetric { .. })
    }

    fn eval(&self, t: &[f64]) -> f64 {
        match self {
            Payload::One => 1.0,
            Payload::Coordinates { exponents } => exponents.iter().zip(t).map(|(&e, x)| x.powi(e as i32)).product(),
            Payload::Aomoto { m1, m2, m3 } => {
                let first: f64 = t[..*m1 as usize].iter().product();
                let lo = (m1 - m3) as usize;
                let second: f64 = t[lo..lo + *m2 as usize].iter().map(|x| 1.0 - x).product();
                first * second
            }
            Payload::Symmetric { poly } => poly.eval(t),
        }
    }

    fn arity(&self) -> usize {
        match self {
            Payload::One | Payload::Symmetric { .. } => 0,
            Payload::Coordinates { exponents } => exponents.len(),
            Payload::Aomoto { m1, m2, m3 } => (m1 + m2 - m3) as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub n: usize,
    pub points_per_axis: usize,
    pub weight: Weight,
    pub payloads: Vec<Payload>,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    /// One integral per payload, at the finer resolution.
    pub values: Vec<f64>,
    /// Difference between the two resolutions.
    pub error_estimates: Vec<f64>,
    pub points_per_axis: [usize; 2],
}

impl QuadratureResult {
    /// `values[i] / values[j]` with a first-order error estimate.
    pub fn ratio(&self, i: usize, j: usize) -> (f64, f64) {
        let r = self.values[i] / self.values[j];
        let err = r.abs() * (self.error_estimates[i] / self.values[i].abs() + self.error_estimates[j] / self.values[j].abs());
        (r, err)
    }
}

pub fn quadrature(q: &QuadratureSpec) -> Result<QuadratureResult> {
    if q.n == 0 || q.n > MAX_DIMENSION {
        return Err(Error::UnsupportedDimension(q.n));
    }
    if q.points_per_axis < MIN_POINTS {
        return Err(Error::ParamOutOfRange(format!(
            "points_per_axis = {} is below {MIN_POINTS}",
            q.points_per_axis
        )));
    }
    if let Some(p) = q.payloads.iter().find(|p| p.arity() > q.n) {
        return Err(Error::IndexConstraint(format!("payload {p:?} needs more than {} coordinates", q.n)));
    }
    let coarse = q.points_per_axis;
    let fine = coarse + coarse / 2;
    let a = sector_rule(q, coarse);
    let b = sector_rule(q, fine);
    Ok(QuadratureResult {
        error_estimates: a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect(),
        values: b,
        points_per_axis: [coarse, fine],
    })
}

fn sector_rule(q: &QuadratureSpec, m: usize) -> Vec<f64> {
    let n = q.n;
    let rule = GaussLegendre::new(NonZeroUsize::new(m).unwrap());
    // Nodes in x ∈ [0,1] after the sin^2 substitution, with weights.
    let axis: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(z, wt)| {
            let s = 0.5 * (z + 1.0);
            let x = (FRAC_PI_2 * s).sin().powi(2);
            let dx = FRAC_PI_2 * (std::f64::consts::PI * s).sin();
            (x, 0.5 * wt * dx)
        })
        .collect();
    let perms: Vec<Vec<usize>> = all_permutations(n).iter().map(|p| p.images()).collect();
    let nfact = perms.len() as f64;
    let mut acc = vec![0.0; q.payloads.len()];
    let mut idx = vec![0usize; n];
    let mut t = vec![0.0; n];
    let mut point = vec![0.0; n];
    let mut permuted = vec![0.0; n];
    loop {
        // t_n = x_n, t_k = x_k t_{k+1}; Jacobian prod_{k<n} t_{k+1}.
        let mut jac = 1.0;
        let mut upper = 1.0;
        for k in (0..n).rev() {
            let (x, wt) = axis[idx[k]];
            jac *= wt * upper;
            t[k] = x * upper;
            upper = t[k];
        }
        match q.domain {
            Domain::Unit => point.copy_from_slice(&t),
            Domain::Symmetric => {
                for (p, &s) in point.iter_mut().zip(&t) {
                    *p = 2.0 * s - 1.0;
                }
                jac *= (2.0f64).powi(n as i32);
            }
        }
        let base = jac * q.weight.eval(&point);
        if base != 0.0 {
            for (a, p) in acc.iter_mut().zip(&q.payloads) {
                if p.is_symmetric() {
                    *a += nfact * base * p.eval(&point);
                } else {
                    let mut s = 0.0;
                    for perm in &perms {
                        for (dst, &src) in permuted.iter_mut().zip(perm) {
                            *dst = point[src - 1];
                        }
                        s += p.eval(&permuted);
                    }
                    *a += base * s;
                }
            }
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn selberg(n: usize, u: f64, w: f64, kappa: f64, payloads: Vec<Payload>, m: usize) -> QuadratureResult {
        quadrature(&QuadratureSpec {
            n,
            points_per_axis: m,
            weight: Weight::Selberg { u, w, kappa },
            payloads,
            domain: Domain::Unit,
        })
        .unwrap()
    }

    #[test]
    fn selberg_small_cases() {
        let r = selberg(2, 1.0, 1.0, 1.0, vec![Payload::One], 16);
        assert!((r.values[0] - 1.0 / 6.0).abs() < 1e-10);
        let r = selberg(2, 1.0, 1.0, 0.5, vec![Payload::One], 16);
        assert!((r.values[0] - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn kadell_small_case() {
        // P_{(1,1)} = t_1 t_2 at n = 2
        let r = selberg(2, 1.0, 1.0, 1.0, vec![Payload::monomial(&"1,1".parse().unwrap()), Payload::One], 16);
        let (v, _) = r.ratio(0, 1);
        assert!((v - 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn half_integer_exponents_converge() {
        // n = 1 is a Beta integral: B(3/2, 3/2) = π/8
        let r = selberg(1, 1.5, 1.5, 1.0, vec![Payload::One], 16);
        assert!((r.values[0] - std::f64::consts::PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_domain() {
        // ∫_{[-1,1]^2} |x - y| = 8/3
        let r = quadrature(&QuadratureSpec {
            n: 2,
            points_per_axis: 12,
            weight: Weight::LogGas { a: 1, b: 1.0, c: 0.0 },
            payloads: vec![Payload::One],
            domain: Domain::Symmetric,
        })
        .unwrap();
        assert!((r.values[0] - 8.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_large_dimension() {
        let q = QuadratureSpec {
            n: 5,
            points_per_axis: 8,
            weight: Weight::Selberg { u: 1.0, w: 1.0, kappa: 1.0 },
            payloads: vec![Payload::One],
            domain: Domain::Unit,
        };
        assert_eq!(quadrature(&q), Err(Error::UnsupportedDimension(5)));
    }
}
