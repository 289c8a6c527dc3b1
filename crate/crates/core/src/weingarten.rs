//! Unitary and orthogonal Weingarten functions and the moment formulas for
//! unitarily / orthogonally invariant random matrices.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::combinat::{
    all_permutations, character, hyperoctahedral, pair_partitions, partitions_of, Partition, Permutation,
};
use crate::error::{Error, Result};
use crate::exact::{factorial, Rational};
use crate::moments::{ensemble_moments, Convention, EnsembleSpec};

/// `prod_{(i,j) in λ} (z + j - i)`
pub fn c_lambda(lambda: &Partition, z: &Rational) -> Rational {
    let mut acc = Rational::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 1..=row as i64 {
            acc *= z + (j - 1 - i as i64);
        }
    }
    acc
}

/// `prod_{(i,j) in λ} (z + 2j - i - 1)`
pub fn c_lambda_prime(lambda: &Partition, z: &Rational) -> Rational {
    let mut acc = Rational::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 1..=row as i64 {
            acc *= z + (2 * j - (i as i64 + 1) - 1);
        }
    }
    acc
}

/// Unitary Weingarten function at a permutation of the given cycle type,
/// with one parameter, or two when `w` is given.
pub fn wg_unitary(cycle_type: &Partition, z: &Rational, w: Option<&Rational>) -> Result<Rational> {
    let k = cycle_type.weight();
    if k > 8 {
        return Err(Error::ParamOutOfRange(format!("k = {k} too large")));
    }
    let mut acc = Rational::zero();
    let mut terms = 0;
    for lambda in partitions_of(k) {
        let mut c = c_lambda(&lambda, z);
        if let Some(w) = w {
            c *= c_lambda(&lambda, w);
        }
        if c.is_zero() {
            continue;
        }
        terms += 1;
        let dim = character(&lambda, &Partition::new(vec![1; k as usize]))?;
        let chi = character(&lambda, cycle_type)?;
        acc += Rational::integer(dim * chi) / c;
    }
    if terms == 0 {
        return Err(Error::PoleAtInteger(z.to_string()));
    }
    Ok(acc / Rational::from(factorial(k as u64)))
}

/// All values of a unitary Weingarten function, keyed by cycle type.
#[derive(Clone, Debug, Serialize)]
pub struct WgUnitary {
    pub k: u32,
    pub z: Rational,
    pub w: Option<Rational>,
    pub values: BTreeMap<Partition, Rational>,
}

impl WgUnitary {
    pub fn new(k: u32, z: &Rational, w: Option<&Rational>) -> Result<Self> {
        let values = partitions_of(k)
            .into_iter()
            .map(|mu| Ok((mu.clone(), wg_unitary(&mu, z, w)?)))
            .collect::<Result<_>>()?;
        Ok(WgUnitary {
            k,
            z: z.clone(),
            w: w.cloned(),
            values,
        })
    }

    pub fn at(&self, pi: &Permutation) -> &Rational {
        &self.values[&pi.cycle_type()]
    }
}

fn hyperoctahedral_cached(k: usize) -> Arc<Vec<Permutation>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Permutation>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache
        .lock()
        .unwrap()
        .entry(k)
        .or_insert_with(|| Arc::new(hyperoctahedral(k)))
        .clone()
}

/// Zonal spherical function `ω^λ(σ) = (1/|H_k|) Σ_{ζ ∈ H_k} χ^{2λ}(σζ)`.
pub fn zonal_spherical(lambda: &Partition, sigma: &Permutation) -> Result<Rational> {
    let k = lambda.weight() as usize;
    if sigma.degree() != 2 * k {
        return Err(Error::ParamOutOfRange(format!(
            "σ must lie in S_{}, got degree {}",
            2 * k,
            sigma.degree()
        )));
    }
    if k > 4 {
        return Err(Error::ParamOutOfRange(format!("k = {k} too large")));
    }
    let h = hyperoctahedral_cached(k);
    let doubled = lambda.doubled();
    let mut acc = 0i64;
    for zeta in h.iter() {
        acc += character(&doubled, &sigma.compose(zeta).cycle_type())?;
    }
    Ok(Rational::new(acc, h.len() as i64))
}

/// A pair partition whose permutation has the given coset type.
pub fn coset_representative(coset_type: &Partition) -> Permutation {
    let k = coset_type.weight() as usize;
    pair_partitions(k)
        .into_iter()
        .map(|p| p.to_permutation())
        .find(|s| &s.coset_type() == coset_type)
        .expect("every coset type has a pair-partition representative")
}

fn zonal_by_coset_type(lambda: &Partition, mu: &Partition) -> Result<Rational> {
    type Key = (Partition, Partition);
    static CACHE: OnceLock<Mutex<HashMap<Key, Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = zonal_spherical(lambda, &coset_representative(mu))?;
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// Orthogonal Weingarten function at a permutation of the given coset type.
pub fn wg_orthogonal(coset_type: &Partition, z: &Rational) -> Result<Rational> {
    let k = coset_type.weight();
    if k > 4 {
        return Err(Error::ParamOutOfRange(format!("k = {k} too large")));
    }
    let mut acc = Rational::zero();
    let mut terms = 0;
    let identity = Partition::new(vec![1; 2 * k as usize]);
    for lambda in partitions_of(k) {
        let c = c_lambda_prime(&lambda, z);
        if c.is_zero() {
            continue;
        }
        terms += 1;
        let dim = character(&lambda.doubled(), &identity)?;
        acc += Rational::integer(dim) * zonal_by_coset_type(&lambda, coset_type)? / c;
    }
    if terms == 0 {
        return Err(Error::PoleAtInteger(z.to_string()));
    }
    let k = k as u64;
    Ok(acc * Rational::from(factorial(k) * (1u64 << k)) / Rational::from(factorial(2 * k)))
}

/// All values of an orthogonal Weingarten function, keyed by coset type.
#[derive(Clone, Debug, Serialize)]
pub struct WgOrthogonal {
    pub k: u32,
    pub z: Rational,
    pub values: BTreeMap<Partition, Rational>,
}

impl WgOrthogonal {
    pub fn new(k: u32, z: &Rational) -> Result<Self> {
        let values = partitions_of(k)
            .into_iter()
            .map(|mu| Ok((mu.clone(), wg_orthogonal(&mu, z)?)))
            .collect::<Result<_>>()?;
        Ok(WgOrthogonal { k, z: z.clone(), values })
    }

    pub fn at(&self, sigma: &Permutation) -> &Rational {
        &self.values[&sigma.coset_type()]
    }
}

/// Expected trace products `E[Tr_τ]`, keyed by cycle or coset type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceMoments(BTreeMap<Partition, Rational>);

impl TraceMoments {
    pub fn insert(&mut self, ty: Partition, v: Rational) {
        self.0.insert(ty, v);
    }

    pub fn get(&self, ty: &Partition) -> Result<&Rational> {
        self.0
            .get(ty)
            .ok_or_else(|| Error::ParamOutOfRange(format!("no trace moment supplied for type {ty}")))
    }
}

impl Serialize for TraceMoments {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `δ_σ(i, j) = prod_s [i_{σ(s)} = j_s]`
fn delta(sigma: &Permutation, i: &[usize], j: &[usize]) -> bool {
    (1..=i.len()).all(|s| i[sigma.apply(s) - 1] == j[s - 1])
}

/// `δ'_σ(i) = prod_s [i_{σ(2s-1)} = i_{σ(2s)}]`
fn delta_pairs(sigma: &Permutation, i: &[usize]) -> bool {
    (1..=i.len() / 2).all(|s| i[sigma.apply(2 * s - 1) - 1] == i[sigma.apply(2 * s) - 1])
}

fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::ParamOutOfRange(format!("moment order k = {k} must be in 1..={max}")));
    }
    Ok(())
}

/// `E[T_{i1 j1} ... T_{ik jk}]` for a unitarily conjugation-invariant
/// Hermitian matrix of size `n`.
pub fn conj_invariant_moment_unitary(i: &[usize], j: &[usize], n: u32, tm: &TraceMoments) -> Result<Rational> {
    let k = i.len();
    check_k(k, 3)?;
    if j.len() != k {
        return Err(Error::IndexConstraint("index sequences differ in length".into()));
    }
    let wg = WgUnitary::new(k as u32, &Rational::from(n), None)?;
    let perms = all_permutations(k);
    let mut acc = Rational::zero();
    for sigma in perms.iter().filter(|s| delta(s, i, j)) {
        let inv = sigma.inverse();
        for tau in &perms {
            acc += wg.at(&inv.compose(tau)) * tm.get(&tau.cycle_type())?;
        }
    }
    Ok(acc)
}

/// `E[T_{i1 i2} T_{i3 i4} ...]` for an orthogonally conjugation-invariant
/// real symmetric matrix of size `n`.
pub fn conj_invariant_moment_orthogonal(idx: &[usize], n: u32, tm: &TraceMoments) -> Result<Rational> {
    if idx.len() % 2 != 0 {
        return Err(Error::IndexConstraint("need an even number of indices".into()));
    }
    let k = idx.len() / 2;
    check_k(k, 3)?;
    let wg = WgOrthogonal::new(k as u32, &Rational::from(n))?;
    let pairs: Vec<Permutation> = pair_partitions(k).iter().map(|p| p.to_permutation()).collect();
    let mut acc = Rational::zero();
    for sigma in pairs.iter().filter(|s| delta_pairs(s, idx)) {
        let inv = sigma.inverse();
        for tau in &pairs {
            acc += wg.at(&inv.compose(tau)) * tm.get(&tau.coset_type())?;
        }
    }
    Ok(acc)
}

/// `E[X_{i1 j1}...X_{ik jk} conj(X_{i'1 j'1}...X_{i'k j'k})]` for a complex
/// `n x n` matrix invariant under `X -> UXV`; trace moments of `XX*`.
pub fn lr_invariant_moment_complex(
    i: &[usize],
    j: &[usize],
    ip: &[usize],
    jp: &[usize],
    n: u32,
    tm: &TraceMoments,
) -> Result<Rational> {
    let k = i.len();
    check_k(k, 3)?;
    if [j.len(), ip.len(), jp.len()].iter().any(|&l| l != k) {
        return Err(Error::IndexConstraint("index sequences differ in length".into()));
    }
    let nn = Rational::from(n);
    let wg = WgUnitary::new(k as u32, &nn, Some(&nn))?;
    let perms = all_permutations(k);
    let mut acc = Rational::zero();
    for s1 in perms.iter().filter(|s| delta(s, i, ip)) {
        let s1_inv = s1.inverse();
        for s2 in perms.iter().filter(|s| delta(s, j, jp)) {
            let rest = s1_inv.compose(s2);
            for tau in &perms {
                acc += wg.at(&tau.compose(&rest)) * tm.get(&tau.cycle_type())?;
            }
        }
    }
    Ok(acc)
}

/// `E[X_{i1 j1} ... X_{i2k j2k}]` for a real `n x n` matrix invariant under
/// `X -> OXQ`; trace moments of `XX^t`.
pub fn lr_invariant_moment_real(i: &[usize], j: &[usize], n: u32, tm: &TraceMoments) -> Result<Rational> {
    if i.len() % 2 != 0 || j.len() != i.len() {
        return Err(Error::IndexConstraint("need two index sequences of equal even length".into()));
    }
    let k = i.len() / 2;
    check_k(k, 3)?;
    let wg = WgOrthogonal::new(k as u32, &Rational::from(n))?;
    let pairs: Vec<Permutation> = pair_partitions(k).iter().map(|p| p.to_permutation()).collect();
    let mut acc = Rational::zero();
    for s1 in pairs.iter().filter(|s| delta_pairs(s, i)) {
        let s1_inv = s1.inverse();
        for s2 in pairs.iter().filter(|s| delta_pairs(s, j)) {
            let s2_inv = s2.inverse();
            for t1 in &pairs {
                let w1 = wg.at(&s1_inv.compose(t1));
                let t1_inv = t1.inverse();
                for t2 in &pairs {
                    let w2 = wg.at(&s2_inv.compose(t2));
                    acc += w1 * w2 * tm.get(&t1_inv.compose(t2).coset_type())?;
                }
            }
        }
    }
    Ok(acc)
}

/// Haar unitary moment `∫ U_{i j}... conj(U_{i' j'}...) dU`.
pub fn haar_unitary_moment(i: &[usize], j: &[usize], ip: &[usize], jp: &[usize], n: u32) -> Result<Rational> {
    let k = i.len();
    check_k(k, 4)?;
    let wg = WgUnitary::new(k as u32, &Rational::from(n), None)?;
    let perms = all_permutations(k);
    let mut acc = Rational::zero();
    for s in perms.iter().filter(|s| delta(s, i, ip)) {
        let inv = s.inverse();
        for t in perms.iter().filter(|t| delta(t, j, jp)) {
            acc += wg.at(&inv.compose(t));
        }
    }
    Ok(acc)
}

/// Haar orthogonal moment `∫ O_{i1 j1} ... O_{i2k j2k} dO`.
pub fn haar_orthogonal_moment(i: &[usize], j: &[usize], n: u32) -> Result<Rational> {
    if i.len() % 2 != 0 || j.len() != i.len() {
        return Err(Error::IndexConstraint("need two index sequences of equal even length".into()));
    }
    let k = i.len() / 2;
    check_k(k, 3)?;
    let wg = WgOrthogonal::new(k as u32, &Rational::from(n))?;
    let pairs: Vec<Permutation> = pair_partitions(k).iter().map(|p| p.to_permutation()).collect();
    let mut acc = Rational::zero();
    for s in pairs.iter().filter(|s| delta_pairs(s, i)) {
        let inv = s.inverse();
        for t in pairs.iter().filter(|t| delta_pairs(t, j)) {
            acc += wg.at(&inv.compose(t));
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfAdjointField {
    Hermitian,
    RealSymmetric,
}

impl SelfAdjointField {
    pub fn ensemble(&self) -> EnsembleSpec {
        match self {
            SelfAdjointField::Hermitian => EnsembleSpec::HERMITIAN,
            SelfAdjointField::RealSymmetric => EnsembleSpec::REAL_SYMMETRIC,
        }
    }
}

impl FromStr for SelfAdjointField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "her" | "hermitian" => Ok(SelfAdjointField::Hermitian),
            "sym" | "real-symmetric" => Ok(SelfAdjointField::RealSymmetric),
            _ => Err(Error::Parse(format!("unknown self-adjoint ensemble {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Eigenvalue along the identity direction, `a + (n-1) b`.
    pub eig_trace_direction: Rational,
    /// Eigenvalue on its orthogonal complement and on the off-diagonal coordinates, `a - b`.
    pub eig_bulk: Rational,
}

/// A moment that must vanish by index matching, with its computed value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingCheck {
    pub moment: String,
    pub value: Rational,
}

/// Covariance of the entries of a uniform random matrix from the
/// self-adjoint operator-norm ball, in orthonormal coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub ensemble: SelfAdjointField,
    pub n: u32,
    pub convention: Convention,
    /// `a = E[T_kk^2]`
    pub diag_variance: Rational,
    /// Variance of one off-diagonal orthonormal coordinate.
    pub offdiag_variance: Rational,
    /// `b = E[T_kk T_ll]`, `k != l`
    pub diag_diag_covariance: Rational,
    pub spectrum: Spectrum,
    pub condition_number: Rational,
    pub vanishing: Vec<VanishingCheck>,
    /// `a = b + offdiag_variance` holds exactly.
    pub identity_holds: bool,
}

impl CovarianceReport {
    pub fn zero_pattern_exact(&self) -> bool {
        self.vanishing.iter().all(|c| c.value.is_zero())
    }
}

pub fn covariance_report(field: SelfAdjointField, n: u32, convention: Convention) -> Result<CovarianceReport> {
    if n < 2 {
        return Err(Error::ParamOutOfRange("covariance needs n >= 2".into()));
    }
    let report = ensemble_moments(field.ensemble(), n, convention)?;
    let tm = report.trace_moments();
    let mut vanishing = Vec::new();
    let (a, b, off) = match field {
        SelfAdjointField::Hermitian => {
            let m = |i: &[usize], j: &[usize]| conj_invariant_moment_unitary(i, j, n, &tm);
            let a = m(&[1, 1], &[1, 1])?;
            let b = m(&[1, 2], &[1, 2])?;
            // E|T_12|^2 = E[T_12 T_21]
            let off = m(&[1, 2], &[2, 1])?;
            let mut checks: Vec<(&str, [usize; 2], [usize; 2])> = vec![
                ("E[T_12 T_12]", [1, 1], [2, 2]),
                ("E[T_11 T_12]", [1, 1], [1, 2]),
                ("E[T_11]", [1, 0], [1, 0]),
            ];
            if n >= 3 {
                checks.push(("E[T_12 T_13]", [1, 1], [2, 3]));
                checks.push(("E[T_11 T_23]", [1, 2], [1, 3]));
                checks.push(("E[T_12 T_23]", [1, 2], [2, 3]));
            }
            if n >= 4 {
                checks.push(("E[T_12 T_34]", [1, 3], [2, 4]));
            }
            for (name, i, j) in checks {
                let value = if i[1] == 0 {
                    conj_invariant_moment_unitary(&i[..1], &j[..1], n, &tm)?
                } else {
                    m(&i, &j)?
                };
                vanishing.push(VanishingCheck {
                    moment: name.to_string(),
                    value,
                });
            }
            (a, b, off)
        }
        SelfAdjointField::RealSymmetric => {
            let m = |idx: &[usize]| conj_invariant_moment_orthogonal(idx, n, &tm);
            let a = m(&[1, 1, 1, 1])?;
            let b = m(&[1, 1, 2, 2])?;
            let off = m(&[1, 2, 1, 2])? * 2;
            let mut checks: Vec<(&str, Vec<usize>)> = vec![
                ("E[T_11 T_12]", vec![1, 1, 1, 2]),
                ("E[T_11]", vec![1, 1]),
                ("E[T_12]", vec![1, 2]),
            ];
            if n >= 3 {
                checks.push(("E[T_12 T_13]", vec![1, 2, 1, 3]));
                checks.push(("E[T_11 T_23]", vec![1, 1, 2, 3]));
            }
            if n >= 4 {
                checks.push(("E[T_12 T_34]", vec![1, 2, 3, 4]));
            }
            for (name, idx) in checks {
                vanishing.push(VanishingCheck {
                    moment: name.to_string(),
                    value: m(&idx)?,
                });
            }
            (a, b, off)
        }
    };
    let nn = Rational::from(n);
    let trace_dir = &a + (&nn - 1) * &b;
    let bulk = &a - &b;
    let (hi, lo) = if trace_dir > bulk { (&trace_dir, &bulk) } else { (&bulk, &trace_dir) };
    let condition_number = hi / lo;
    Ok(CovarianceReport {
        ensemble: field,
        n,
        convention,
        identity_holds: a == &b + &off,
        diag_variance: a,
        offdiag_variance: off,
        diag_diag_covariance: b,
        spectrum: Spectrum {
            eig_trace_direction: trace_dir,
            eig_bulk: bulk,
        },
        condition_number,
        vanishing,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    #[serde(rename = "r")]
    Real,
    #[serde(rename = "c")]
    Complex,
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" | "real" => Ok(Field::Real),
            "c" | "complex" => Ok(Field::Complex),
            _ => Err(Error::Parse(format!("unknown field {s:?}"))),
        }
    }
}

/// Fourth-order entry moments of the full-matrix operator-norm ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegCorrReport {
    /// `E[|T_11|^2 |T_22|^2]`: entries in distinct rows and columns.
    pub cross: Rational,
    /// `E[|T_11|^2 |T_12|^2]`: entries sharing a row.
    pub same_row: Rational,
    /// `(E|T_11|^2)^2`
    pub second_moment_sq: Rational,
    #[serde(skip)]
    pub second_moment: Rational,
}

impl NegCorrReport {
    /// Positive correlation across rows and columns, negative within a row.
    pub fn pattern_holds(&self) -> bool {
        self.cross > self.second_moment_sq && self.second_moment_sq > self.same_row
    }
}

pub fn negcorr(field: Field, n: u32) -> Result<NegCorrReport> {
    if n < 2 {
        return Err(Error::ParamOutOfRange("need n >= 2".into()));
    }
    let e = match field {
        Field::Real => EnsembleSpec::REAL_FULL,
        Field::Complex => EnsembleSpec::COMPLEX_FULL,
    };
    let tm = ensemble_moments(e, n, Convention::Forced)?.trace_moments();
    let (cross, same_row, second) = match field {
        Field::Complex => {
            let m = |i: &[usize], j: &[usize]| lr_invariant_moment_complex(i, j, i, j, n, &tm);
            (m(&[1, 2], &[1, 2])?, m(&[1, 1], &[1, 2])?, m(&[1], &[1])?)
        }
        Field::Real => {
            let m = |i: &[usize], j: &[usize]| lr_invariant_moment_real(i, j, n, &tm);
            (
                m(&[1, 1, 2, 2], &[1, 1, 2, 2])?,
                m(&[1, 1, 1, 1], &[1, 1, 2, 2])?,
                m(&[1, 1], &[1, 1])?,
            )
        }
    };
    Ok(NegCorrReport {
        cross,
        same_row,
        second_moment_sq: second.pow(2),
        second_moment: second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn content_products() {
        assert_eq!(c_lambda(&p("2"), &q("3")), q("12"));
        assert_eq!(c_lambda(&p("1,1"), &q("3")), q("6"));
        assert_eq!(c_lambda_prime(&p("2"), &q("5")), q("35"));
        assert_eq!(c_lambda_prime(&p("1,1"), &q("5")), q("20"));
        assert_eq!(c_lambda_prime(&p("1"), &q("5")), q("5"));
    }

    #[test]
    fn unitary_k2() {
        for n in 2..12i64 {
            let z = Rational::integer(n);
            assert_eq!(wg_unitary(&p("1,1"), &z, None).unwrap(), Rational::new(1, n * n - 1));
            assert_eq!(wg_unitary(&p("2"), &z, None).unwrap(), Rational::new(-1, n * (n * n - 1)));
            assert_eq!(wg_unitary(&p("1"), &z, None).unwrap(), Rational::new(1, n));
        }
    }

    #[test]
    fn two_parameter_is_a_convolution() {
        let (z, w) = (q("5"), q("7/2"));
        for k in 1..=4u32 {
            let a = WgUnitary::new(k, &z, None).unwrap();
            let b = WgUnitary::new(k, &w, None).unwrap();
            let perms = all_permutations(k as usize);
            for pi in &perms {
                let conv: Rational = perms
                    .iter()
                    .map(|t| a.at(t) * b.at(&t.inverse().compose(pi)))
                    .sum();
                assert_eq!(conv, wg_unitary(&pi.cycle_type(), &z, Some(&w)).unwrap());
            }
        }
    }

    #[test]
    fn pole_filtering() {
        // At z = 1 the (1,1) term drops out and the rest is finite.
        assert_eq!(wg_unitary(&p("1,1"), &q("1"), None).unwrap(), q("1/4"));
        assert!(matches!(wg_unitary(&p("1"), &q("0"), None), Err(Error::PoleAtInteger(_))));
    }

    #[test]
    fn zonal_values() {
        for s in all_permutations(4) {
            assert_eq!(zonal_spherical(&p("2"), &s).unwrap(), q("1"));
        }
        assert_eq!(zonal_spherical(&p("1,1"), &Permutation::identity(4)).unwrap(), q("1"));
        let t = Permutation::from_cycles(4, &[&[2, 3]]).unwrap();
        assert_eq!(zonal_spherical(&p("1,1"), &t).unwrap(), q("-1/2"));
    }

    #[test]
    fn orthogonal_k2() {
        for n in 3..12i64 {
            let z = Rational::integer(n);
            assert_eq!(
                wg_orthogonal(&p("1,1"), &z).unwrap(),
                Rational::new(n + 1, n * (n - 1) * (n + 2))
            );
            assert_eq!(wg_orthogonal(&p("2"), &z).unwrap(), Rational::new(-1, n * (n - 1) * (n + 2)));
            assert_eq!(wg_orthogonal(&p("1"), &z).unwrap(), Rational::new(1, n));
        }
        assert_eq!(wg_orthogonal(&p("2"), &q("5")).unwrap(), q("-1/140"));
    }

    #[test]
    fn haar_column_norms() {
        for n in 2..6u32 {
            // Σ_j |U_1j|^2 = 1 and Σ_j O_1j^2 = 1
            let s: Rational = (1..=n as usize)
                .map(|j| haar_unitary_moment(&[1], &[j], &[1], &[j], n).unwrap())
                .sum();
            assert_eq!(s, q("1"));
            let s: Rational = (1..=n as usize)
                .map(|j| haar_orthogonal_moment(&[1, 1], &[j, j], n).unwrap())
                .sum();
            assert_eq!(s, q("1"));
            // Σ_j |U_1j|^2 |U_1k|^2 summed over k gives E|U_1j|^2
            let s: Rational = (1..=n as usize)
                .map(|k| haar_unitary_moment(&[1, 1], &[1, k], &[1, 1], &[1, k], n).unwrap())
                .sum();
            assert_eq!(s, Rational::from(n).recip());
        }
    }

    #[test]
    fn negcorr_complex_n10() {
        let r = negcorr(Field::Complex, 10).unwrap();
        assert_eq!(r.cross, q("1/399"));
        assert_eq!(r.same_row, q("1/420"));
        assert_eq!(r.second_moment_sq, q("1/400"));
    }

    #[test]
    fn negcorr_real() {
        for n in 2..8i64 {
            let r = negcorr(Field::Real, n as u32).unwrap();
            assert_eq!(r.cross, Rational::new(n + 1, n * (2 * n + 1) * (2 * n + 3)));
            assert_eq!(r.same_row, Rational::new(1, (2 * n + 1) * (2 * n + 3)));
            assert_eq!(r.second_moment, Rational::new(1, 2 * n + 1));
        }
    }

    #[test]
    fn covariance_structure() {
        for field in [SelfAdjointField::Hermitian, SelfAdjointField::RealSymmetric] {
            for n in 2..8 {
                let r = covariance_report(field, n, Convention::Paper).unwrap();
                assert!(r.identity_holds);
                assert!(r.zero_pattern_exact(), "{:?}", r.vanishing);
            }
        }
    }

    #[test]
    fn hermitian_diag_covariance_matches_closed_form() {
        for n in 2..10u32 {
            let r = covariance_report(SelfAdjointField::Hermitian, n, Convention::Paper).unwrap();
            let rep = ensemble_moments(EnsembleSpec::HERMITIAN, n, Convention::Paper).unwrap();
            let nn = Rational::from(n);
            let expect = (&rep.m2 + &nn * rep.m11.unwrap()) / (&nn + 1);
            assert_eq!(r.diag_diag_covariance, expect);
        }
    }
}
