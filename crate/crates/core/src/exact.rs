//! Exact rationals, rising factorials and formal products of Gamma values.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn integer(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= self;
        }
        acc
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (sign, log) = ln_abs_ratio(self.numer(), self.denom());
        if sign == 0 {
            0.0
        } else {
            sign as f64 * log.exp()
        }
    }

    pub fn to_approx(&self) -> Approx {
        let (sign, log) = ln_abs_ratio(self.numer(), self.denom());
        Approx::from_log(sign, log)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

/// Natural log of |p/q| computed without overflowing f64 on huge operands.
fn ln_abs_ratio(p: &BigInt, q: &BigInt) -> (i8, f64) {
    if p.is_zero() {
        return (0, f64::NEG_INFINITY);
    }
    let sign = if p.is_negative() { -1 } else { 1 };
    (sign, ln_abs_bigint(p) - ln_abs_bigint(q))
}

fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        x.abs().to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = x.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::from_bigints(p, q))
            }
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(p)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self {
                Rational(BigRational::from_integer(BigInt::from(v)))
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $m(self, rhs: i64) -> Rational {
                self.$m(Rational::integer(rhs))
            }
        }
        impl<'a> $tr<i64> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: i64) -> Rational {
                self.$m(Rational::integer(rhs))
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                (self.0).$am(rhs.0)
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, rhs: &'a Rational) {
                (self.0).$am(&rhs.0)
            }
        }
    };
}
binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// Rising factorial x(x+1)...(x+m-1).
pub fn pochhammer(x: &Rational, m: u32) -> Rational {
    (0..m).map(|i| x + i64::from(i)).product()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Rational::from(acc)
}

/// A floating-point value carried together with its log-magnitude, so that
/// quantities far outside the f64 range keep their logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: f64,
    pub log_value: f64,
    pub sign: i8,
}

impl Approx {
    fn from_log(sign: i8, log_value: f64) -> Self {
        let value = if sign == 0 { 0.0 } else { sign as f64 * log_value.exp() };
        Approx {
            value,
            log_value,
            sign,
        }
    }
}

/// `prefactor * prod Gamma(arg)^exp`, with every argument kept in (0, 1).
///
/// Arguments equal to 1 are dropped since Gamma(1) = 1. A value of zero is
/// represented by a zero prefactor and no factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaProduct {
    prefactor: Rational,
    factors: BTreeMap<Rational, i64>,
}

impl GammaProduct {
    pub fn constant(prefactor: Rational) -> Self {
        GammaProduct {
            prefactor,
            factors: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `Gamma(arg)^exponent` as a normalized product.
    pub fn gamma(arg: &Rational, exponent: i64) -> Result<Self> {
        let mut g = Self::one();
        g.push(arg, exponent)?;
        Ok(g)
    }

    /// Builds a product from a list of `(argument, exponent)` pairs.
    pub fn from_factors<'a, I>(prefactor: Rational, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Rational, i64)>,
    {
        let mut g = Self::constant(prefactor);
        for (a, e) in factors {
            g.push(a, e)?;
        }
        Ok(g)
    }

    pub fn prefactor(&self) -> &Rational {
        &self.prefactor
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Rational, i64)> {
        self.factors.iter().map(|(a, e)| (a, *e))
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// Multiplies in `Gamma(arg)^exponent`, shifting the argument into (0, 1].
    fn push(&mut self, arg: &Rational, exponent: i64) -> Result<()> {
        if exponent == 0 || self.is_zero() {
            return Ok(());
        }
        if arg.is_integer() && !arg.is_positive() {
            if exponent > 0 {
                return Err(Error::Pole(arg.to_string()));
            }
            // 1/Gamma at a pole vanishes.
            self.prefactor = Rational::zero();
            self.factors.clear();
            return Ok(());
        }
        // arg = r + s with r in (0, 1] and integer s.
        let mut s = arg.floor();
        let mut r = arg - Rational::from(s.clone());
        if r.is_zero() {
            r = Rational::one();
            s -= 1;
        }
        // Gamma(r + s) = Gamma(r) * (r)_s for s >= 0, Gamma(r) / (r + s)_{-s} otherwise.
        let shift = if s.is_negative() {
            let m = (-s).to_u32().expect("shift too large");
            pochhammer(&(arg), m).recip()
        } else {
            pochhammer(&r, s.to_u32().expect("shift too large"))
        };
        self.prefactor *= shift.pow(exponent as i32);
        if !r.is_one() {
            let e = self.factors.entry(r.clone()).or_insert(0);
            *e += exponent;
            if *e == 0 {
                self.factors.remove(&r);
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &GammaProduct) -> GammaProduct {
        let mut out = self.clone();
        out.prefactor *= &other.prefactor;
        if out.prefactor.is_zero() {
            out.factors.clear();
            return out;
        }
        for (a, e) in &other.factors {
            let x = out.factors.entry(a.clone()).or_insert(0);
            *x += e;
            if *x == 0 {
                out.factors.remove(a);
            }
        }
        out
    }

    pub fn recip(&self) -> Result<GammaProduct> {
        if self.is_zero() {
            return Err(Error::Pole("reciprocal of a vanishing Gamma product".into()));
        }
        Ok(GammaProduct {
            prefactor: self.prefactor.recip(),
            factors: self.factors.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<GammaProduct> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let mut acc = GammaProduct::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// The exact rational value when every Gamma factor has cancelled.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.factors.is_empty() {
            Some(self.prefactor.clone())
        } else {
            None
        }
    }

    pub fn simplify(self) -> GammaValue {
        match self.as_rational() {
            Some(r) => GammaValue::Rational(r),
            None => GammaValue::Product(self),
        }
    }

    pub fn to_approx(&self) -> Approx {
        let p = self.prefactor.to_approx();
        if p.sign == 0 {
            return p;
        }
        let mut log = p.log_value;
        let mut sign = p.sign;
        for (a, e) in &self.factors {
            // Arguments lie in (0, 1) where Gamma is positive.
            log += *e as f64 * statrs::function::gamma::ln_gamma(a.to_f64());
            debug_assert!(a.is_positive());
        }
        if sign == 0 {
            sign = 1;
        }
        Approx::from_log(sign, log)
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefactor)?;
        for (a, e) in &self.factors {
            if *e == 1 {
                write!(f, "*G({a})")?;
            } else {
                write!(f, "*G({a})^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GammaProductRepr {
    prefactor: Rational,
    factors: Vec<(Rational, i64)>,
}

impl Serialize for GammaProduct {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GammaProductRepr {
            prefactor: self.prefactor.clone(),
            factors: self.factors.iter().map(|(a, e)| (a.clone(), *e)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaProduct {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GammaProductRepr::deserialize(d)?;
        GammaProduct::from_factors(r.prefactor, r.factors.iter().map(|(a, e)| (a, *e)))
            .map_err(serde::de::Error::custom)
    }
}

/// Result of simplifying a Gamma product: rational when all factors cancel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GammaValue {
    Rational(Rational),
    Product(GammaProduct),
}

impl GammaValue {
    pub fn to_approx(&self) -> Approx {
        match self {
            GammaValue::Rational(r) => r.to_approx(),
            GammaValue::Product(g) => g.to_approx(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            GammaValue::Rational(r) => Some(r),
            GammaValue::Product(_) => None,
        }
    }
}

pub fn gamma_product_ratio(num: &GammaProduct, den: &GammaProduct) -> Result<GammaValue> {
    Ok(num.mul(&den.recip()?).simplify())
}

/// Exact Gaussian elimination over the rationals. Returns a basis of the right
/// nullspace of `rows` (each row has the same length).
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][fc].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` exactly for square nonsingular `a`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Greatest common divisor of the numerators times lcm of the denominators,
/// used to scale a rational vector to coprime integers.
pub(crate) fn integer_content(v: &[Rational]) -> Rational {
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for x in v {
        l = l.lcm(x.denom());
    }
    for x in v {
        let scaled = x.numer() * (&l / x.denom());
        g = g.gcd(&scaled);
    }
    if g.is_zero() {
        Rational::one()
    } else {
        Rational::from_bigints(l, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&q("3"), 2), q("12"));
        assert_eq!(pochhammer(&q("1/2"), 0), q("1"));
        assert_eq!(pochhammer(&q("-3/2"), 3), q("3/8"));
    }

    #[test]
    fn gamma_ratios() {
        let num = GammaProduct::gamma(&q("5"), 1).unwrap();
        let den = GammaProduct::gamma(&q("3"), 1).unwrap();
        assert_eq!(gamma_product_ratio(&num, &den).unwrap(), GammaValue::Rational(q("12")));

        let num = GammaProduct::from_factors(Rational::one(), [(&q("3/2"), 2), (&q("2"), 1)]).unwrap();
        let den = GammaProduct::from_factors(Rational::one(), [(&q("3/2"), 1), (&q("5/2"), 1), (&q("3"), 1)])
            .unwrap();
        assert_eq!(gamma_product_ratio(&num, &den).unwrap(), GammaValue::Rational(q("1/3")));

        let num = GammaProduct::gamma(&q("1"), 1).unwrap();
        let ratio = GammaProduct::gamma(&q("0"), 1).and_then(|den| gamma_product_ratio(&num, &den));
        assert!(matches!(ratio, Err(Error::Pole(_))));
    }

    #[test]
    fn pole_with_positive_exponent() {
        assert!(matches!(GammaProduct::gamma(&q("-2"), 1), Err(Error::Pole(_))));
        assert!(GammaProduct::gamma(&q("-2"), -1).unwrap().is_zero());
    }

    #[test]
    fn floats() {
        assert!((q("1/3").to_f64() - 1.0 / 3.0).abs() < 1e-16);
        let g = GammaProduct::gamma(&q("1/2"), 1).unwrap();
        assert!((g.to_approx().value - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        let g = GammaProduct::from_factors(q("1/2"), [(&q("3/2"), 1)]).unwrap();
        assert!((g.to_approx().value - 0.4431134627263790).abs() < 1e-14);
    }

    #[test]
    fn negative_arguments_shift() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let g = GammaProduct::gamma(&q("-1/2"), 1).unwrap();
        assert_eq!(g.prefactor(), &q("-2"));
        assert!((g.to_approx().value + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn huge_values_keep_their_log() {
        let big = Rational::from(factorial(400));
        let a = big.to_approx();
        assert!(a.value.is_infinite());
        let expected = statrs::function::gamma::ln_gamma(401.0);
        assert!((a.log_value - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let g = GammaProduct::from_factors(q("3/4"), [(&q("7/3"), 2), (&q("1/2"), -1)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: GammaProduct = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert_eq!(serde_json::to_string(&q("-6/4")).unwrap(), "\"-3/2\"");
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![vec![q("1"), q("2"), q("3")], vec![q("2"), q("4"), q("6")]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rational = rows[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        let a = vec![vec![q("2"), q("1")], vec![q("1"), q("3")]];
        let x = solve(&a, &[q("3"), q("5")]).unwrap();
        assert_eq!(x, vec![q("4/5"), q("7/5")]);
    }
}
