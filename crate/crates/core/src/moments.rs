//! Eigenvalue and singular-value moments of operator-norm balls, variance
//! constants and exact large-n expansions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinat::{monomial_principal, Partition};
use crate::error::{Error, Result};
use crate::exact::{binomial, integer_content, nullspace, Approx, Rational};
use crate::jack::monomial_moment;
use crate::selberg::{aomoto_general_ratio, SelbergParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SelfAdjoint,
    FullMatrix,
}

/// One of the six matrix ensembles: self-adjoint or full, over R, C or H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnsembleSpec {
    pub family: Family,
    pub beta: u32,
}

impl EnsembleSpec {
    pub fn new(family: Family, beta: u32) -> Result<Self> {
        if ![1, 2, 4].contains(&beta) {
            return Err(Error::ParamOutOfRange(format!("beta must be 1, 2 or 4, got {beta}")));
        }
        Ok(EnsembleSpec { family, beta })
    }

    pub const HERMITIAN: EnsembleSpec = EnsembleSpec { family: Family::SelfAdjoint, beta: 2 };
    pub const REAL_SYMMETRIC: EnsembleSpec = EnsembleSpec { family: Family::SelfAdjoint, beta: 1 };
    pub const QUATERNION_SELF_ADJOINT: EnsembleSpec = EnsembleSpec { family: Family::SelfAdjoint, beta: 4 };
    pub const REAL_FULL: EnsembleSpec = EnsembleSpec { family: Family::FullMatrix, beta: 1 };
    pub const COMPLEX_FULL: EnsembleSpec = EnsembleSpec { family: Family::FullMatrix, beta: 2 };
    pub const QUATERNION_FULL: EnsembleSpec = EnsembleSpec { family: Family::FullMatrix, beta: 4 };

    pub fn all() -> [EnsembleSpec; 6] {
        [
            Self::HERMITIAN,
            Self::REAL_SYMMETRIC,
            Self::QUATERNION_SELF_ADJOINT,
            Self::REAL_FULL,
            Self::COMPLEX_FULL,
            Self::QUATERNION_FULL,
        ]
    }

    /// Exponent on the variables inside the Vandermonde factor.
    pub fn a(&self) -> u32 {
        match self.family {
            Family::SelfAdjoint => 1,
            Family::FullMatrix => 2,
        }
    }

    pub fn b(&self) -> u32 {
        self.beta
    }

    pub fn c(&self) -> u32 {
        match self.family {
            Family::SelfAdjoint => 0,
            Family::FullMatrix => self.beta - 1,
        }
    }

    pub fn kappa(&self) -> Rational {
        Rational::new(self.beta as i64, 2)
    }

    /// Real dimension of the ambient matrix space.
    pub fn dimension(&self, n: u32) -> Rational {
        let n = Rational::from(n);
        let b = Rational::from(self.beta);
        match self.family {
            Family::SelfAdjoint => &n + &b * &n * (&n - 1) / 2,
            Family::FullMatrix => b * &n * &n,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.family, self.beta) {
            (Family::SelfAdjoint, 1) => "real-symmetric",
            (Family::SelfAdjoint, 2) => "hermitian",
            (Family::SelfAdjoint, _) => "quaternion-self-adjoint",
            (Family::FullMatrix, 1) => "real-full",
            (Family::FullMatrix, 2) => "complex-full",
            (Family::FullMatrix, _) => "quaternion-full",
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let e = match s {
            "hermitian" | "her" => Self::HERMITIAN,
            "real-symmetric" | "sym" => Self::REAL_SYMMETRIC,
            "quaternion-self-adjoint" | "quat-sa" => Self::QUATERNION_SELF_ADJOINT,
            "real-full" => Self::REAL_FULL,
            "complex-full" => Self::COMPLEX_FULL,
            "quaternion-full" => Self::QUATERNION_FULL,
            _ => return Err(Error::Parse(format!("unknown ensemble {s:?}"))),
        };
        Ok(e)
    }
}

impl Serialize for EnsembleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            name: &'static str,
            family: Family,
            beta: u32,
            a: u32,
            b: u32,
            c: u32,
            kappa: Rational,
        }
        Repr {
            name: self.name(),
            family: self.family,
            beta: self.beta,
            a: self.a(),
            b: self.b(),
            c: self.c(),
            kappa: self.kappa(),
        }
        .serialize(s)
    }
}

/// Scaling of self-adjoint moments from `[0,1]` back to `[-1,1]`.
///
/// `Forced` applies the factor `2^s` that the substitution `x = 2t - 1`
/// produces for a degree-`s` payload; `Paper` uses `2^(s/2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Forced,
    Paper,
}

impl Convention {
    fn scale(&self, degree: i32) -> Rational {
        match self {
            Convention::Forced => Rational::integer(2).pow(degree),
            Convention::Paper => Rational::integer(2).pow(degree / 2),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forced" => Ok(Convention::Forced),
            "paper" => Ok(Convention::Paper),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Forced => "forced",
            Convention::Paper => "paper",
        })
    }
}

/// Centered payloads on `[0,1]^n` with the symmetric weight `u = w = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftedPayload {
    /// `(t_1 - 1/2)^2`
    Square,
    /// `(t_1 - 1/2)(t_2 - 1/2)`
    CrossLinear,
    /// `(t_1 - 1/2)^2 (t_2 - 1/2)^2`
    CrossSquare,
    /// `(t_1 - 1/2)^4`
    Fourth,
}

impl ShiftedPayload {
    pub fn exponents(&self) -> &'static [u32] {
        match self {
            ShiftedPayload::Square => &[2],
            ShiftedPayload::CrossLinear => &[1, 1],
            ShiftedPayload::CrossSquare => &[2, 2],
            ShiftedPayload::Fourth => &[4],
        }
    }

    pub fn degree(&self) -> i32 {
        self.exponents().iter().sum::<u32>() as i32
    }
}

/// Normalized integral of `t^alpha` (one variable per entry of `alpha`)
/// against the Selberg weight, using exchangeability of the coordinates.
pub fn coordinate_moment(alpha: &[u32], n: u32, u: &Rational, w: &Rational, kappa: &Rational) -> Result<Rational> {
    if alpha.len() > n as usize {
        return Err(Error::ParamOutOfRange(format!("{} variables need n >= {}", alpha.len(), alpha.len())));
    }
    let mu = Partition::new(alpha.to_vec());
    if mu.is_empty() {
        return Ok(Rational::one());
    }
    Ok(monomial_moment(&mu, n, u, w, kappa)? / monomial_principal(&mu, n))
}

/// `E[payload]` under the `[0,1]` Selberg weight with `u = w = 1`.
pub fn shifted_moment_ratio(payload: ShiftedPayload, n: u32, kappa: &Rational) -> Result<Rational> {
    shifted_monomial_moment(payload.exponents(), n, kappa)
}

/// `E[prod_i (t_i - 1/2)^{e_i}]` under the `u = w = 1` Selberg weight.
pub fn shifted_monomial_moment(exps: &[u32], n: u32, kappa: &Rational) -> Result<Rational> {
    if exps.len() > n as usize {
        return Err(Error::ParamOutOfRange(format!("payload needs n >= {}", exps.len())));
    }
    let one = Rational::one();
    let half = Rational::new(-1, 2);
    let mut acc = Rational::zero();
    let mut sub = vec![0u32; exps.len()];
    loop {
        let mut c = Rational::one();
        for (&e, &a) in exps.iter().zip(&sub) {
            c *= binomial(e as u64, a as u64) * half.pow((e - a) as i32);
        }
        acc += c * coordinate_moment(&sub, n, &one, &one, kappa)?;
        // Odometer over 0 <= sub[i] <= exps[i].
        let mut i = 0;
        while i < sub.len() && sub[i] == exps[i] {
            sub[i] = 0;
            i += 1;
        }
        if i == sub.len() {
            break;
        }
        sub[i] += 1;
    }
    Ok(acc)
}

/// Squared-singular-value payloads of full matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FullPayload {
    /// `x_1^2`
    Square,
    /// `x_1^2 x_2^2`
    CrossSquare,
    /// `x_1^4`
    Fourth,
}

/// Per-coordinate singular-value moment of the full-matrix ball.
///
/// With `t = x^2` the singular-value density becomes the Selberg weight with
/// `u = beta/2`, `w = 1`, `kappa = beta/2`.
pub fn full_matrix_moment_ratio(payload: FullPayload, n: u32, beta: &Rational) -> Result<Rational> {
    let kappa = beta / 2;
    let p = SelbergParams::new(n, kappa.clone(), Rational::one(), kappa)?;
    let first = aomoto_general_ratio(&p, 1, 0, 0)?;
    Ok(match payload {
        FullPayload::Square => first,
        FullPayload::CrossSquare => first - aomoto_general_ratio(&p, 1, 1, 0)?,
        FullPayload::Fourth => first - aomoto_general_ratio(&p, 1, 1, 1)?,
    })
}

/// The closed form of the full-matrix variance as a rational function of
/// `n` and `beta`.
pub fn full_matrix_variance_closed_form(n: u32, beta: &Rational) -> Rational {
    let n = Rational::from(n);
    let b = beta;
    let half = Rational::new(1, 2);
    let d1 = Rational::one() + (&n * 2 - 1) * b / 2;
    let d2 = Rational::one() + (&n - 1) * b;
    let d3 = Rational::integer(2) + (&n * 2 - 1) * b / 2;
    let n3b2 = n.pow(3) * b * b / 8;
    let inner = (&half - b / 4) * (Rational::integer(2) - b / 2) + b / 4 * (Rational::one() - b / 2);
    let first = (&n3b2 + n.pow(2) * b / 2 * inner) / (&d3 * &d1 * &d2);
    let second = &n3b2 * (b / 2 - 1) / (&d3 * d1.pow(2) * &d2);
    first + second
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentFloats {
    pub m2: Approx,
    pub m4: Approx,
    pub m22: Approx,
    pub m11: Option<Approx>,
    pub var: Approx,
    pub sigma2: Approx,
}

/// Per-coordinate eigenvalue (self-adjoint) or singular-value (full)
/// moments, the variance of `||T||_HS^2` and the thin-shell constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: u32,
    pub ensemble: EnsembleSpec,
    pub convention: Convention,
    pub m2: Rational,
    pub m4: Rational,
    pub m22: Rational,
    /// Cross linear moment; only defined for self-adjoint ensembles.
    pub m11: Option<Rational>,
    pub var: Rational,
    pub sigma2: Rational,
    pub approx: MomentFloats,
}

impl MomentReport {
    /// `E||T||_HS^2`
    pub fn t2(&self) -> Rational {
        Rational::from(self.n) * &self.m2
    }

    /// `E||T||_HS^4`
    pub fn t4(&self) -> Rational {
        let n = Rational::from(self.n);
        &n * &self.m4 + &n * (&n - 1) * &self.m22
    }

    /// Expected trace products keyed by cycle (or coset) type, for the
    /// Weingarten moment formulas: `Tr T` powers for self-adjoint ensembles,
    /// `Tr (TT*)` powers for full ones.
    pub fn trace_moments(&self) -> crate::weingarten::TraceMoments {
        let n = Rational::from(self.n);
        let mut tm = crate::weingarten::TraceMoments::default();
        match self.ensemble.family {
            Family::SelfAdjoint => {
                let m11 = self.m11.clone().expect("self-adjoint report carries m11");
                tm.insert("1".parse().unwrap(), Rational::zero());
                tm.insert("1,1".parse().unwrap(), &n * &self.m2 + &n * (&n - 1) * m11);
                tm.insert("2".parse().unwrap(), &n * &self.m2);
            }
            Family::FullMatrix => {
                tm.insert("1".parse().unwrap(), &n * &self.m2);
                tm.insert("1,1".parse().unwrap(), self.t4());
                tm.insert("2".parse().unwrap(), &n * &self.m4);
            }
        }
        tm
    }
}

pub fn ensemble_moments(e: EnsembleSpec, n: u32, convention: Convention) -> Result<MomentReport> {
    if n < 2 {
        return Err(Error::ParamOutOfRange("ensemble moments need n >= 2".into()));
    }
    let kappa = e.kappa();
    let (m2, m4, m22, m11) = match e.family {
        Family::SelfAdjoint => {
            let s = |p: ShiftedPayload| -> Result<Rational> {
                Ok(convention.scale(p.degree()) * shifted_moment_ratio(p, n, &kappa)?)
            };
            (
                s(ShiftedPayload::Square)?,
                s(ShiftedPayload::Fourth)?,
                s(ShiftedPayload::CrossSquare)?,
                Some(s(ShiftedPayload::CrossLinear)?),
            )
        }
        Family::FullMatrix => {
            let beta = Rational::from(e.beta);
            (
                full_matrix_moment_ratio(FullPayload::Square, n, &beta)?,
                full_matrix_moment_ratio(FullPayload::Fourth, n, &beta)?,
                full_matrix_moment_ratio(FullPayload::CrossSquare, n, &beta)?,
                None,
            )
        }
    };
    let nn = Rational::from(n);
    let t2 = &nn * &m2;
    let t4 = &nn * &m4 + &nn * (&nn - 1) * &m22;
    let var = &t4 - t2.pow(2);
    let sigma2 = e.dimension(n) * (&t4 / t2.pow(2) - 1);
    let approx = MomentFloats {
        m2: m2.to_approx(),
        m4: m4.to_approx(),
        m22: m22.to_approx(),
        m11: m11.as_ref().map(Rational::to_approx),
        var: var.to_approx(),
        sigma2: sigma2.to_approx(),
    };
    Ok(MomentReport {
        n,
        ensemble: e,
        convention,
        m2,
        m4,
        m22,
        m11,
        var,
        sigma2,
        approx,
    })
}

/// `n E(t-1/2)^4 + n(n-1) E(t_1-1/2)^2(t_2-1/2)^2 - n^2 (E(t-1/2)^2)^2`
/// on `[-1/2,1/2]^n` at `kappa = beta/2`, for any `beta > 0`.
pub fn beta_remark_combination(n: u32, beta: &Rational) -> Result<Rational> {
    if !beta.is_positive() {
        return Err(Error::ParamOutOfRange(format!("beta = {beta} must be positive")));
    }
    if n < 2 {
        return Err(Error::ParamOutOfRange("need n >= 2".into()));
    }
    let kappa = beta / 2;
    let nn = Rational::from(n);
    let a2 = shifted_moment_ratio(ShiftedPayload::Square, n, &kappa)?;
    let a22 = shifted_moment_ratio(ShiftedPayload::CrossSquare, n, &kappa)?;
    let a4 = shifted_moment_ratio(ShiftedPayload::Fourth, n, &kappa)?;
    Ok(&nn * a4 + &nn * (&nn - 1) * a22 - nn.pow(2) * a2.pow(2))
}

/// Ratio of two integer-coefficient polynomials in `n`; coefficients are
/// stored from the constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Vec<Rational>,
    denominator: Vec<Rational>,
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn poly_to_string(p: &[Rational]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
        match i {
            0 => out.push_str(&coef),
            1 => out.push_str(&format!("{coef}n")),
            _ => out.push_str(&format!("{coef}n^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl RationalFunction {
    /// Builds `num/den`, scaled to coprime integer coefficients with a
    /// positive leading denominator coefficient.
    pub fn new(numerator: Vec<Rational>, denominator: Vec<Rational>) -> Self {
        let numerator = trim(numerator);
        let denominator = trim(denominator);
        assert!(denominator.iter().any(|c| !c.is_zero()), "zero denominator");
        let mut all = numerator.clone();
        all.extend(denominator.iter().cloned());
        let mut s = integer_content(&all);
        if denominator.last().unwrap().is_negative() {
            s = -s;
        }
        RationalFunction {
            numerator: numerator.iter().map(|c| c * &s).collect(),
            denominator: denominator.iter().map(|c| c * &s).collect(),
        }
    }

    pub fn numerator(&self) -> &[Rational] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Rational] {
        &self.denominator
    }

    pub fn eval(&self, n: &Rational) -> Rational {
        poly_eval(&self.numerator, n) / poly_eval(&self.denominator, n)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", poly_to_string(&self.numerator), poly_to_string(&self.denominator))
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The lowest-degree rational function of `n` through all samples.
///
/// Degrees of numerator and denominator are searched in order of their sum,
/// each up to `deg_bound`; every candidate must fit all samples exactly, with
/// at least one sample left over as a check.
pub fn reconstruct_rational(samples: &[(i64, Rational)], deg_bound: usize) -> Result<RationalFunction> {
    if samples.len() < 2 * deg_bound + 2 {
        return Err(Error::ParamOutOfRange(format!(
            "degree bound {deg_bound} needs at least {} samples, got {}",
            2 * deg_bound + 2,
            samples.len()
        )));
    }
    for total in 0..=2 * deg_bound {
        for dp in 0..=total.min(deg_bound) {
            let dq = total - dp;
            if dq > deg_bound || samples.len() < dp + dq + 2 {
                continue;
            }
            let rows: Vec<Vec<Rational>> = samples
                .iter()
                .map(|(n, v)| {
                    let x = Rational::integer(*n);
                    let mut row: Vec<Rational> = (0..=dp).map(|i| x.pow(i as i32)).collect();
                    row.extend((0..=dq).map(|j| -(v * x.pow(j as i32))));
                    row
                })
                .collect();
            let ns = nullspace(&rows, dp + dq + 2);
            if ns.len() != 1 {
                continue;
            }
            let v = &ns[0];
            let num = v[..=dp].to_vec();
            let den = v[dp + 1..].to_vec();
            if samples.iter().any(|(n, _)| poly_eval(&den, &Rational::integer(*n)).is_zero()) {
                continue;
            }
            return Ok(RationalFunction::new(num, den));
        }
    }
    Err(Error::InconsistentSamples(deg_bound))
}

/// Coefficients of `n^0, n^-1, ..., n^-order` in the expansion at infinity,
/// after discarding any polynomial part.
pub fn laurent_coefficients(f: &RationalFunction, order: usize) -> Vec<Rational> {
    let dp = f.numerator.len() - 1;
    let dq = f.denominator.len() - 1;
    let d = dp.max(dq);
    // In x = 1/n: f = P(x)/Q(x) with P_k = p_{d-k}, Q_k = q_{d-k}.
    let p: Vec<Rational> = (0..=d)
        .map(|k| f.numerator.get(d - k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    let q: Vec<Rational> = (0..=d)
        .map(|k| f.denominator.get(d - k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    let shift = d - dq;
    let q = &q[shift..];
    // Power series P/Q' with Q'(0) != 0, then f's x^k coefficient is S_{k+shift}.
    let len = order + shift + 1;
    let mut s: Vec<Rational> = Vec::with_capacity(len);
    let q0 = q[0].recip();
    for k in 0..len {
        let mut acc = p.get(k).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=k.min(q.len() - 1) {
            acc -= &q[j] * &s[k - j];
        }
        s.push(acc * &q0);
    }
    s[shift..].to_vec()
}

/// Polynomial extrapolation in `1/n` of `(n, value)` samples to `n = ∞`.
pub fn richardson(samples: &[(i64, Rational)]) -> Rational {
    let h: Vec<Rational> = samples.iter().map(|(n, _)| Rational::integer(*n).recip()).collect();
    let mut p: Vec<Rational> = samples.iter().map(|(_, v)| v.clone()).collect();
    let m = p.len();
    // Neville's scheme evaluated at 0.
    for k in 1..m {
        for i in 0..m - k {
            p[i] = (&h[i + k] * &p[i] - &h[i] * &p[i + 1]) / (&h[i + k] - &h[i]);
        }
    }
    p[0].clone()
}

/// Named scalar sequences with exact large-n expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `E(t_1-1/2)^2` at a given kappa.
    Second,
    /// `E(t_1-1/2)(t_2-1/2)`
    CrossLinear,
    /// `E(t_1-1/2)^2(t_2-1/2)^2`
    CrossSquare,
    /// `E(t_1-1/2)^4`
    Fourth,
    /// The variance combination on `[-1/2,1/2]^n` at `beta = 2 kappa`.
    Remark,
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "second" => Quantity::Second,
            "cross-linear" => Quantity::CrossLinear,
            "cross-square" => Quantity::CrossSquare,
            "fourth" => Quantity::Fourth,
            "remark" => Quantity::Remark,
            _ => return Err(Error::Parse(format!("unknown quantity {s:?}"))),
        })
    }
}

impl Quantity {
    pub fn value(&self, n: u32, kappa: &Rational) -> Result<Rational> {
        match self {
            Quantity::Second => shifted_moment_ratio(ShiftedPayload::Square, n, kappa),
            Quantity::CrossLinear => shifted_moment_ratio(ShiftedPayload::CrossLinear, n, kappa),
            Quantity::CrossSquare => shifted_moment_ratio(ShiftedPayload::CrossSquare, n, kappa),
            Quantity::Fourth => shifted_moment_ratio(ShiftedPayload::Fourth, n, kappa),
            Quantity::Remark => beta_remark_combination(n, &(kappa * 2)),
        }
    }
}

/// Exact asymptotic expansion of a quantity from samples at `ns`.
pub fn expansion(q: Quantity, kappa: &Rational, ns: &[u32], deg_bound: usize, order: usize) -> Result<(RationalFunction, Vec<Rational>)> {
    let samples = ns
        .iter()
        .map(|&n| Ok((n as i64, q.value(n, kappa)?)))
        .collect::<Result<Vec<_>>>()?;
    let f = reconstruct_rational(&samples, deg_bound)?;
    let c = laurent_coefficients(&f, order);
    Ok((f, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn reconstruct_simple() {
        let samples: Vec<(i64, Rational)> = (1..=6).map(|n| (n, Rational::new(n, 2 * n + 1))).collect();
        let f = reconstruct_rational(&samples, 2).unwrap();
        assert_eq!(f.numerator(), &qs(&["0", "1"])[..]);
        assert_eq!(f.denominator(), &qs(&["1", "2"])[..]);
        assert_eq!(laurent_coefficients(&f, 2), qs(&["1/2", "-1/4", "1/8"]));
    }

    #[test]
    fn reconstruct_constant() {
        let samples: Vec<(i64, Rational)> = (1..=6).map(|n| (n, q("1/6"))).collect();
        let f = reconstruct_rational(&samples, 2).unwrap();
        assert_eq!(laurent_coefficients(&f, 2), qs(&["1/6", "0", "0"]));
    }

    #[test]
    fn reconstruct_rejects_non_rational_data() {
        let samples: Vec<(i64, Rational)> = (1..=6).map(|n| (n, Rational::integer(1 << n))).collect();
        assert_eq!(reconstruct_rational(&samples, 2), Err(Error::InconsistentSamples(2)));
    }

    #[test]
    fn laurent_drops_polynomial_part() {
        // (n^2 + 1)/n = n + 1/n
        let f = RationalFunction::new(qs(&["1", "0", "1"]), qs(&["0", "1"]));
        assert_eq!(laurent_coefficients(&f, 2), qs(&["0", "1", "0"]));
    }

    #[test]
    fn second_moment_kappa_one() {
        for n in 2..10u32 {
            let nn = Rational::from(n);
            let expect = (nn.pow(2) * 2 - 1) / ((&nn * 2 - 1) * (&nn * 2 + 1) * 4);
            assert_eq!(shifted_moment_ratio(ShiftedPayload::Square, n, &q("1")).unwrap(), expect);
        }
    }

    #[test]
    fn full_matrix_entry_moment() {
        for n in 2..10u32 {
            let nn = Rational::from(n);
            let m2 = full_matrix_moment_ratio(FullPayload::Square, n, &q("1")).unwrap();
            assert_eq!(&m2 / &nn, (&nn * 2 + 1).recip());
        }
    }

    #[test]
    fn closed_form_chain() {
        for beta in ["1", "2", "4", "3/2"] {
            let b = q(beta);
            for n in 2..12 {
                let e = full_variance(n, &b);
                assert_eq!(e, full_matrix_variance_closed_form(n, &b));
            }
        }
    }

    fn full_variance(n: u32, b: &Rational) -> Rational {
        let nn = Rational::from(n);
        let m2 = full_matrix_moment_ratio(FullPayload::Square, n, b).unwrap();
        let m22 = full_matrix_moment_ratio(FullPayload::CrossSquare, n, b).unwrap();
        let m4 = full_matrix_moment_ratio(FullPayload::Fourth, n, b).unwrap();
        &nn * m4 + &nn * (&nn - 1) * m22 - (&nn * m2).pow(2)
    }

    #[test]
    fn convention_invariance() {
        for e in EnsembleSpec::all() {
            for n in [2, 3, 7] {
                let a = ensemble_moments(e, n, Convention::Forced).unwrap();
                let b = ensemble_moments(e, n, Convention::Paper).unwrap();
                assert_eq!(a.sigma2, b.sigma2);
            }
        }
    }

    #[test]
    fn report_serializes() {
        let r = ensemble_moments(EnsembleSpec::HERMITIAN, 3, Convention::Paper).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["convention"], "paper");
        assert_eq!(v["ensemble"]["name"], "hermitian");
        let back: Rational = v["var"].as_str().unwrap().parse().unwrap();
        assert_eq!(back, r.var);
    }

    #[test]
    fn richardson_exact_on_rational_in_inverse_n() {
        let samples: Vec<(i64, Rational)> = (10..16)
            .map(|n| (n, q("1/3") + Rational::new(2, n) - Rational::new(5, n * n)))
            .collect();
        assert_eq!(richardson(&samples), q("1/3"));
    }
}
