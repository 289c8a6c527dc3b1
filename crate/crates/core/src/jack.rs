//! Jack polynomials `P_λ^{1/κ}` in the monomial basis and Kadell's integral.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::combinat::{dominance_leq, monomial_principal, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::exact::{pochhammer, solve, GammaProduct, GammaValue, Rational};
use crate::selberg::SelbergParams;

pub const MAX_DEGREE: u32 = 12;

/// Homogeneous symmetric polynomial in the monomial basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    degree: u32,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymPoly {
    pub fn zero(degree: u32) -> Self {
        SymPoly {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(lambda: &Partition) -> Self {
        let mut p = Self::zero(lambda.weight());
        p.coeffs.insert(lambda.clone(), Rational::one());
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, mu: &Partition) -> Rational {
        self.coeffs.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in reverse-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter().rev()
    }

    pub fn add_term(&mut self, mu: &Partition, c: &Rational) {
        assert_eq!(mu.weight(), self.degree, "term of the wrong degree");
        let e = self.coeffs.entry(mu.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(mu);
        }
    }

    /// Value at `(1, ..., 1)` with `n` ones.
    pub fn principal(&self, n: u32) -> Rational {
        self.coeffs
            .iter()
            .map(|(mu, c)| c * monomial_principal(mu, n))
            .sum()
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(mu, c)| c.to_f64() * crate::combinat::monomial_eval(mu, t))
            .sum()
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.terms().map(|(mu, c)| format!("({c})*m[{mu}]")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (mu, c) in self.terms() {
            m.serialize_entry(mu, c)?;
        }
        m.end()
    }
}

/// Monomial coefficients of all Jack polynomials of one degree.
#[derive(Debug)]
pub struct JackBasis {
    pub kappa: Rational,
    pub degree: u32,
    /// Partitions of `degree` in reverse-lexicographic order.
    pub partitions: Vec<Partition>,
    /// `matrix[i][j]`: coefficient of `m_{partitions[j]}` in `P_{partitions[i]}`.
    pub matrix: Vec<Vec<Rational>>,
    /// `inverse[i][j]`: coefficient of `P_{partitions[j]}` in `m_{partitions[i]}`.
    pub inverse: Vec<Vec<Rational>>,
}

impl JackBasis {
    fn build(kappa: &Rational, degree: u32) -> Self {
        let partitions = partitions_of(degree);
        let index: HashMap<&Partition, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = partitions.len();
        let vars = degree.max(1) as usize;
        let energy: Vec<Rational> = partitions.iter().map(|p| energy(p, kappa, vars)).collect();

        let mut matrix = vec![vec![Rational::zero(); n]; n];
        for (li, lambda) in partitions.iter().enumerate() {
            matrix[li][li] = Rational::one();
            for ni in li + 1..n {
                let nu = &partitions[ni];
                if !dominance_leq(nu, lambda).unwrap() {
                    continue;
                }
                let mut acc = Rational::zero();
                for (mu, weight) in raisings(nu) {
                    let mi = index[&mu];
                    if !matrix[li][mi].is_zero() {
                        acc += &matrix[li][mi] * Rational::from(weight);
                    }
                }
                if !acc.is_zero() {
                    matrix[li][ni] = kappa * acc / (&energy[li] - &energy[ni]);
                }
            }
        }

        // Back substitution for the inverse of the unitriangular matrix.
        let mut inverse = vec![vec![Rational::zero(); n]; n];
        for i in (0..n).rev() {
            inverse[i][i] = Rational::one();
            for j in i + 1..n {
                let mut s = Rational::zero();
                for k in i + 1..=j {
                    if !matrix[i][k].is_zero() && !inverse[k][j].is_zero() {
                        s += &matrix[i][k] * &inverse[k][j];
                    }
                }
                inverse[i][j] = -s;
            }
        }

        JackBasis {
            kappa: kappa.clone(),
            degree,
            partitions,
            matrix,
            inverse,
        }
    }

    fn position(&self, p: &Partition) -> usize {
        self.partitions.iter().position(|q| q == p).expect("partition of the basis degree")
    }
}

/// Eigenvalue of the Laplace–Beltrami type operator, up to a degree-only shift.
fn energy(p: &Partition, kappa: &Rational, vars: usize) -> Rational {
    let mut e = Rational::zero();
    for i in 0..vars {
        let x = p.part(i) as i64;
        e += Rational::integer(x * x) + kappa * (x * (vars as i64 + 1 - 2 * (i as i64 + 1)));
    }
    e
}

/// Partitions reached by moving `r` boxes from row `j` up to row `i < j`,
/// with the weight `2(ν_i − ν_j + 2r)`.
fn raisings(nu: &Partition) -> Vec<(Partition, i64)> {
    let parts = nu.parts();
    let mut out = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            for r in 1..=parts[j] {
                let mut m = parts.to_vec();
                m[i] += r;
                m[j] -= r;
                let w = 2 * (parts[i] as i64 - parts[j] as i64 + 2 * r as i64);
                out.push((Partition::new(m), w));
            }
        }
    }
    out
}

type BasisKey = (Rational, u32);

fn basis_cache() -> &'static RwLock<HashMap<BasisKey, Arc<JackBasis>>> {
    static CACHE: OnceLock<RwLock<HashMap<BasisKey, Arc<JackBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn check_kappa(kappa: &Rational) -> Result<()> {
    if kappa.is_negative() {
        return Err(Error::ParamOutOfRange(format!("Jack parameter kappa = {kappa} must be >= 0")));
    }
    Ok(())
}

/// The cached Jack basis of one degree.
pub fn jack_basis(kappa: &Rational, degree: u32) -> Result<Arc<JackBasis>> {
    check_kappa(kappa)?;
    if degree > MAX_DEGREE {
        return Err(Error::ParamOutOfRange(format!("degree {degree} exceeds {MAX_DEGREE}")));
    }
    let key = (kappa.clone(), degree);
    if let Some(b) = basis_cache().read().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let b = Arc::new(JackBasis::build(kappa, degree));
    basis_cache().write().unwrap().entry(key).or_insert(b.clone());
    Ok(b)
}

/// The monic Jack polynomial `P_λ^{1/κ}` expanded in monomials.
pub fn jack_in_monomials(lambda: &Partition, kappa: &Rational) -> Result<SymPoly> {
    let b = jack_basis(kappa, lambda.weight())?;
    let row = &b.matrix[b.position(lambda)];
    let mut p = SymPoly::zero(lambda.weight());
    for (mu, c) in b.partitions.iter().zip(row) {
        if !c.is_zero() {
            p.add_term(mu, c);
        }
    }
    Ok(p)
}

/// Coefficients of `m_μ` in the Jack basis.
pub fn monomial_to_jack(mu: &Partition, kappa: &Rational) -> Result<BTreeMap<Partition, Rational>> {
    let b = jack_basis(kappa, mu.weight())?;
    let row = &b.inverse[b.position(mu)];
    Ok(b.partitions
        .iter()
        .zip(row)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| (l.clone(), c.clone()))
        .collect())
}

/// `P_λ^{1/κ}(1^n)` via the monomial expansion.
pub fn principal_specialization(lambda: &Partition, kappa: &Rational, n: u32) -> Result<Rational> {
    Ok(jack_in_monomials(lambda, kappa)?.principal(n))
}

/// `P_λ^{1/κ}(1^n)` as the Gamma-product ratio `f_n[λ] / f_n[0]`.
pub fn principal_specialization_gamma(lambda: &Partition, kappa: &Rational, n: u32) -> Result<GammaValue> {
    check_kappa(kappa)?;
    if lambda.len() > n as usize {
        return Ok(GammaValue::Rational(Rational::zero()));
    }
    let f = |p: &Partition| -> Result<GammaProduct> {
        let mut g = GammaProduct::one();
        for i in 0..n as usize {
            for j in i + 1..n as usize {
                let d = p.part(i) as i64 - p.part(j) as i64;
                let gap = (j - i) as i64;
                // (x)_κ = Γ(x + κ) / Γ(x)
                let x = if d > 0 {
                    Rational::integer(d) + kappa * gap
                } else {
                    g = g.mul(&GammaProduct::constant(Rational::new(gap, gap + 1)));
                    Rational::one() + kappa * gap
                };
                let term = GammaProduct::from_factors(Rational::one(), [(&(&x + kappa), 1), (&x, -1)])?;
                g = g.mul(&term);
            }
        }
        Ok(g)
    };
    crate::exact::gamma_product_ratio(&f(lambda)?, &f(&Partition::empty())?)
}

/// Kadell's normalized integral `∫ P_λ h / ∫ h` against the Selberg weight.
pub fn kadell_ratio(lambda: &Partition, n: u32, u: &Rational, w: &Rational, kappa: &Rational) -> Result<Rational> {
    let p = SelbergParams::new(n, u.clone(), w.clone(), kappa.clone())?;
    check_kappa(kappa)?;
    if lambda.len() > n as usize {
        return Ok(Rational::zero());
    }
    let mut r = principal_specialization(lambda, kappa, n)?;
    let nn = n as i64;
    for i in 1..=lambda.len() as i64 {
        let part = lambda.part(i as usize - 1);
        r *= pochhammer(&(&p.u + kappa * (nn - i)), part);
        r /= pochhammer(&(&p.u + &p.w + kappa * (2 * nn - i - 1)), part);
    }
    Ok(r)
}

/// Normalized Selberg-weight integral of the monomial symmetric function `m_μ`.
pub fn monomial_moment(mu: &Partition, n: u32, u: &Rational, w: &Rational, kappa: &Rational) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (lambda, c) in monomial_to_jack(mu, kappa)? {
        acc += c * kadell_ratio(&lambda, n, u, w, kappa)?;
    }
    Ok(acc)
}

/// `power_sum[i][j]`: coefficient of `m_{partitions[j]}` in `p_{partitions[i]}`.
pub fn power_sum_to_monomial(degree: u32) -> (Vec<Partition>, Vec<Vec<Rational>>) {
    let parts = partitions_of(degree);
    let vars = degree as usize;
    let matrix = parts
        .iter()
        .map(|rho| {
            parts
                .iter()
                .map(|nu| {
                    // Count assignments of the parts of ρ to variables whose
                    // exponent vector is ν (padded with zeros).
                    let target: Vec<u32> = (0..vars).map(|i| nu.part(i)).collect();
                    let l = rho.len();
                    let mut count = 0i64;
                    let total = vars.pow(l as u32);
                    for code in 0..total {
                        let mut e = vec![0u32; vars];
                        let mut c = code;
                        for &r in rho.parts() {
                            e[c % vars] += r;
                            c /= vars;
                        }
                        if e == target {
                            count += 1;
                        }
                    }
                    Rational::integer(count)
                })
                .collect()
        })
        .collect();
    (parts, matrix)
}

/// The scalar product `<p_λ, p_μ> = δ z_λ ξ^{l(λ)}` extended to monomial-basis polynomials.
pub fn power_sum_inner_product(f: &SymPoly, g: &SymPoly, xi: &Rational) -> Rational {
    assert_eq!(f.degree(), g.degree());
    let (parts, l) = power_sum_to_monomial(f.degree());
    let n = parts.len();
    // Solve for power-sum coordinates: f = Σ_ρ a_ρ p_ρ, so f_ν = Σ_ρ a_ρ l[ρ][ν].
    let transposed: Vec<Vec<Rational>> = (0..n).map(|j| (0..n).map(|i| l[i][j].clone()).collect()).collect();
    let coords = |p: &SymPoly| {
        let rhs: Vec<Rational> = parts.iter().map(|nu| p.coeff(nu)).collect();
        solve(&transposed, &rhs).expect("power sums form a basis")
    };
    let (a, b) = (coords(f), coords(g));
    parts
        .iter()
        .enumerate()
        .map(|(i, rho)| &a[i] * &b[i] * Rational::from(rho.centralizer_order()) * xi.pow(rho.len() as i32))
        .sum()
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
    fn low_degree_examples() {
        let k = q("3/5");
        let j = jack_in_monomials(&p("2"), &k).unwrap();
        assert_eq!(j.coeff(&p("2")), q("1"));
        assert_eq!(j.coeff(&p("1,1")), Rational::integer(2) * &k / (&k + 1));

        let j = jack_in_monomials(&p("2,1"), &q("1")).unwrap();
        assert_eq!(j.coeff(&p("1,1,1")), q("2"));

        let j = jack_in_monomials(&p("1,1,1,1"), &k).unwrap();
        assert_eq!(j, SymPoly::monomial(&p("1,1,1,1")));
    }

    #[test]
    fn zero_kappa_gives_monomials() {
        for lam in partitions_of(5) {
            assert_eq!(jack_in_monomials(&lam, &q("0")).unwrap(), SymPoly::monomial(&lam));
        }
    }

    #[test]
    fn schur_at_kappa_one() {
        // s_{(2,2)} = m_{22} + m_{211} + 2 m_{1111}
        let j = jack_in_monomials(&p("2,2"), &q("1")).unwrap();
        assert_eq!(j.coeff(&p("2,1,1")), q("1"));
        assert_eq!(j.coeff(&p("1,1,1,1")), q("2"));
        assert_eq!(j.coeff(&p("3,1")), q("0"));
    }

    #[test]
    fn inverse_rows() {
        let k = q("2");
        let inv = monomial_to_jack(&p("2"), &k).unwrap();
        assert_eq!(inv[&p("1,1")], q("-4/3"));
        assert_eq!(monomial_to_jack(&p("1,1,1"), &k).unwrap().len(), 1);
    }

    #[test]
    fn principal_values() {
        for k in ["1/2", "1", "2", "3"] {
            let k = q(k);
            assert_eq!(principal_specialization(&p("1,1"), &k, 3).unwrap(), q("3"));
            for n in 1..8u32 {
                let nn = Rational::from(n);
                let expect = &nn + &k * &nn * (&nn - 1) / (&k + 1);
                assert_eq!(principal_specialization(&p("2"), &k, n).unwrap(), expect);
            }
        }
        assert_eq!(principal_specialization(&p("2"), &q("1"), 2).unwrap(), q("3"));
    }

    #[test]
    fn principal_gamma_cross_check() {
        for k in ["1/2", "1", "2", "3", "2/3"] {
            let k = q(k);
            for d in 1..=5 {
                for lam in partitions_of(d) {
                    for n in 1..=5 {
                        let a = principal_specialization(&lam, &k, n).unwrap();
                        let b = principal_specialization_gamma(&lam, &k, n).unwrap();
                        assert_eq!(b.as_rational(), Some(&a), "{lam:?} n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn kadell_examples() {
        let one = q("1");
        for n in 2..10u32 {
            let nn = Rational::from(n);
            let expect = &nn * (&nn - 1) / 4 * ((&nn - 1) / (&nn * 2 - 1));
            assert_eq!(kadell_ratio(&p("1,1"), n, &one, &one, &one).unwrap(), expect);
            let expect = &nn * (&nn + 3) / 12;
            assert_eq!(kadell_ratio(&p("2"), n, &one, &one, &q("1/2")).unwrap(), expect);
        }
        assert_eq!(kadell_ratio(&p("1,1"), 2, &one, &one, &one).unwrap(), q("1/6"));
        assert_eq!(kadell_ratio(&p("1,1,1"), 2, &one, &one, &one).unwrap(), q("0"));
    }

    #[test]
    fn orthogonality() {
        for k in ["1/2", "1", "2", "3"] {
            let k = q(k);
            let xi = k.recip();
            for d in 2..=4 {
                let ps: Vec<SymPoly> = partitions_of(d).iter().map(|l| jack_in_monomials(l, &k).unwrap()).collect();
                for i in 0..ps.len() {
                    for j in 0..ps.len() {
                        let v = power_sum_inner_product(&ps[i], &ps[j], &xi);
                        assert_eq!(v.is_zero(), i != j);
                    }
                }
            }
        }
    }

    #[test]
    fn serializes_in_listing_order() {
        let j = jack_in_monomials(&p("2"), &q("1")).unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"2":"1","1,1":"1"}"#);
    }
}
