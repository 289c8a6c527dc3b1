//! Selberg's integral and Aomoto's extensions.
//!
//! The weight is `prod t_i^(u-1) (1-t_i)^(w-1) prod_{i<j} |t_i - t_j|^(2 kappa)`
//! on `[0,1]^n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, GammaProduct, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelbergParams {
    pub n: u32,
    pub u: Rational,
    pub w: Rational,
    pub kappa: Rational,
}

impl SelbergParams {
    pub fn new(n: u32, u: Rational, w: Rational, kappa: Rational) -> Result<Self> {
        let p = SelbergParams { n, u, w, kappa };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ParamOutOfRange("n must be positive".into()));
        }
        if !self.u.is_positive() || !self.w.is_positive() {
            return Err(Error::ParamOutOfRange(format!(
                "need u > 0 and w > 0, got u = {}, w = {}",
                self.u, self.w
            )));
        }
        let n = Rational::from(self.n);
        let mut bound = n.recip();
        if self.n > 1 {
            let m = Rational::from(self.n - 1);
            bound = bound.min(&self.u / &m).min(&self.w / &m);
        }
        if self.kappa <= -bound.clone() {
            return Err(Error::ParamOutOfRange(format!(
                "kappa = {} must exceed {}",
                self.kappa, -bound
            )));
        }
        Ok(())
    }
}

/// Selberg's integral `I_0(n; u, w, kappa)` as a product of Gamma values.
pub fn selberg_i0(p: &SelbergParams) -> Result<GammaProduct> {
    p.validate()?;
    let one = Rational::one();
    let mut g = GammaProduct::one();
    let n = p.n as i64;
    for i in 1..=n {
        let k = &p.kappa;
        let f = GammaProduct::from_factors(
            Rational::one(),
            [
                (&(&one + k * (n - i + 1)), 1),
                (&(&one + k), -1),
                (&(&p.u + k * (n - i)), 1),
                (&(&p.w + k * (n - i)), 1),
                (&(&p.u + &p.w + k * (2 * n - i - 1)), -1),
            ],
        )?;
        g = g.mul(&f);
    }
    Ok(g)
}

/// Exact ratio of two products of rational factors, cancelling equal factors
/// first so removable zero-over-zero cases come out right.
pub(crate) fn factor_ratio(mut num: Vec<Rational>, den: Vec<Rational>) -> Result<Rational> {
    let mut rest = Vec::new();
    for d in den {
        if let Some(pos) = num.iter().position(|x| *x == d) {
            num.swap_remove(pos);
        } else {
            rest.push(d);
        }
    }
    if rest.iter().any(|d| d.is_zero()) {
        return Err(Error::ParamOutOfRange("ratio has a vanishing denominator".into()));
    }
    let n: Rational = num.into_iter().product();
    let d: Rational = rest.into_iter().product();
    Ok(n / d)
}

/// `I_m / I_0`: the normalized integral of `e_m(t)`.
pub fn aomoto_ratio(p: &SelbergParams, m: u32) -> Result<Rational> {
    p.validate()?;
    if m > p.n {
        return Err(Error::IndexConstraint(format!("m = {m} exceeds n = {}", p.n)));
    }
    let n = p.n as i64;
    let k = &p.kappa;
    let num = (1..=m as i64).map(|i| &p.u + k * (n - i)).collect();
    let den = (1..=m as i64).map(|i| &p.u + &p.w + k * (2 * n - i - 1)).collect();
    Ok(binomial(p.n as u64, m as u64) * factor_ratio(num, den)?)
}

/// `I_{m1,m2,m3} / I_0`: the normalized integral of
/// `t_1...t_{m1} (1-t_{m1+1-m3})...(1-t_{m1+m2-m3})`.
pub fn aomoto_general_ratio(p: &SelbergParams, m1: u32, m2: u32, m3: u32) -> Result<Rational> {
    p.validate()?;
    if m3 > m1 || m1 + m2 > p.n + m3 || m3 > m2 {
        return Err(Error::IndexConstraint(format!(
            "need m3 <= m1, m3 <= m2 and m1 + m2 - m3 <= n; got ({m1}, {m2}, {m3}) with n = {}",
            p.n
        )));
    }
    let n = p.n as i64;
    let k = &p.kappa;
    let uw = &p.u + &p.w;
    let mut num: Vec<Rational> = Vec::new();
    let mut den: Vec<Rational> = Vec::new();
    for i in 1..=m3 as i64 {
        num.push(&uw + k * (n - i - 1));
        den.push(&uw + 1 + k * (2 * n - i - 1));
    }
    for i in 1..=m1 as i64 {
        num.push(&p.u + k * (n - i));
    }
    for i in 1..=m2 as i64 {
        num.push(&p.w + k * (n - i));
    }
    for i in 1..=(m1 + m2) as i64 {
        den.push(&uw + k * (2 * n - i - 1));
    }
    factor_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn params(n: u32, u: &str, w: &str, k: &str) -> SelbergParams {
        SelbergParams::new(n, q(u), q(w), q(k)).unwrap()
    }

    #[test]
    fn selberg_values() {
        let v = selberg_i0(&params(1, "2", "1", "7/3")).unwrap();
        assert_eq!(v.as_rational(), Some(q("1/2")));
        let v = selberg_i0(&params(2, "1", "1", "1")).unwrap();
        assert_eq!(v.as_rational(), Some(q("1/6")));
        let v = selberg_i0(&params(2, "1", "1", "1/2")).unwrap();
        assert_eq!(v.as_rational(), Some(q("1/3")));
    }

    #[test]
    fn irrational_value_is_a_gamma_product() {
        let v = selberg_i0(&params(1, "1/2", "1/3", "2")).unwrap();
        assert!(v.as_rational().is_none());
        // n = 1 is the beta function
        let g = statrs::function::gamma::gamma;
        let expect = g(0.5) * g(1.0 / 3.0) / g(5.0 / 6.0);
        assert!((v.to_approx().value - expect).abs() < 1e-13);
    }

    #[test]
    fn out_of_range() {
        assert!(SelbergParams::new(2, q("0"), q("1"), q("1")).is_err());
        assert!(SelbergParams::new(2, q("1"), q("1"), q("-1/2")).is_err());
        assert!(SelbergParams::new(2, q("1"), q("1"), q("-1/3")).is_ok());
        assert!(SelbergParams::new(3, q("1/2"), q("1"), q("-1/4")).is_err());
    }

    #[test]
    fn aomoto_values() {
        let p = params(2, "1", "1", "1");
        assert_eq!(aomoto_ratio(&p, 0).unwrap(), q("1"));
        assert_eq!(aomoto_ratio(&p, 1).unwrap(), q("1"));
        assert_eq!(aomoto_ratio(&p, 2).unwrap(), q("1/6"));
        assert_eq!(aomoto_general_ratio(&p, 1, 1, 0).unwrap(), q("1/3"));
        for k in ["1/2", "1", "2", "5"] {
            let p = params(1, "1", "1", k);
            assert_eq!(aomoto_general_ratio(&p, 1, 1, 1).unwrap(), q("1/6"));
        }
    }

    #[test]
    fn general_reduces_to_plain() {
        let p = params(5, "3/2", "2", "1/2");
        for m in 0..=5 {
            assert_eq!(
                aomoto_general_ratio(&p, m, 0, 0).unwrap(),
                aomoto_ratio(&p, m).unwrap() / binomial(5, m as u64)
            );
        }
    }

    #[test]
    fn index_constraints() {
        let p = params(2, "1", "1", "1");
        assert!(matches!(aomoto_general_ratio(&p, 0, 1, 1), Err(Error::IndexConstraint(_))));
        assert!(matches!(aomoto_general_ratio(&p, 2, 1, 0), Err(Error::IndexConstraint(_))));
        assert!(matches!(aomoto_ratio(&p, 3), Err(Error::IndexConstraint(_))));
    }
}
