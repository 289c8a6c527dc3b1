//! The acceptance suite: every check behind `selmat verify`.
//!
//! Each criterion returns a deterministic record; nothing time- or
//! machine-dependent goes into the output.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{partitions_of, Partition, Permutation};
use crate::error::Result;
use crate::exact::Rational;
use crate::jack::{jack_in_monomials, kadell_ratio, monomial_to_jack};
use crate::moments::{
    beta_remark_combination, ensemble_moments, expansion, full_matrix_moment_ratio, full_matrix_variance_closed_form,
    richardson, Convention, EnsembleSpec, Family, FullPayload, Quantity,
};
use crate::oracle::{quadrature, rejection_estimate, BallEnsemble, Domain, Payload, QuadratureSpec, Weight};
use crate::selberg::{aomoto_general_ratio, selberg_i0, SelbergParams};
use crate::weingarten::{
    covariance_report, negcorr, wg_orthogonal, wg_unitary, zonal_spherical, Field, SelfAdjointField,
};

pub const CRITERIA: u32 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Accepted samples per ensemble in the rejection-sampling check.
    pub samples: u64,
    /// Independent sampling streams; fixed so results do not depend on
    /// the number of threads.
    pub chains: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20_240_601,
            samples: 1_000_000,
            chains: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}: {} ({})", self.criterion, self.name, self.detail)
    }
}

fn result(criterion: u32, name: &'static str, outcome: Result<(bool, String)>) -> CriterionResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        criterion,
        name,
        passed,
        detail,
    }
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "Selberg, Aomoto and Kadell integrals against quadrature",
        2 => "Jack polynomial tables",
        3 => "exact large-n expansions",
        4 => "variance constants",
        5 => "beta combination constant term",
        6 => "thin-shell constant bounds and limit",
        7 => "Weingarten and zonal spherical values",
        8 => "covariance structure and almost isotropy",
        9 => "full-matrix entry correlations",
        10 => "rejection-sampling concordance",
        11 => "determinism",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u32, cfg: &VerifyConfig) -> CriterionResult {
    let outcome = match id {
        1 => selberg_vs_quadrature(),
        2 => jack_tables(),
        3 => expansions(),
        4 => variance_constants(),
        5 => remark_constant(),
        6 => thin_shell(),
        7 => weingarten_values(),
        8 => covariance(),
        9 => correlations(),
        10 => sampling_concordance(cfg),
        11 => determinism(cfg),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    result(id, criterion_name(id), outcome)
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect()
}

/// JSON lines, one per criterion.
pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r).expect("plain data serializes"));
        out.push('\n');
    }
    out
}

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

fn p(s: &str) -> Partition {
    s.parse().expect("literal partition")
}

fn selberg_vs_quadrature() -> Result<(bool, String)> {
    let kappas = ["1/2", "1", "2"];
    let exps = ["1", "3/2", "2"];
    let mut cases = Vec::new();
    for n in [2u32, 3] {
        for k in kappas {
            for u in exps {
                for w in exps {
                    cases.push((n, q(k), q(u), q(w)));
                }
            }
        }
    }
    let mut triples = Vec::new();
    for m1 in 0..=3u32 {
        for m2 in 0..=3 - m1 {
            for m3 in 0..=m1.min(m2) {
                triples.push((m1, m2, m3));
            }
        }
    }
    let lambdas: Vec<Partition> = (1..=4).flat_map(partitions_of).collect();
    // (worst error, case count) for smooth kappa and for kappa = 1/2
    let errors: Vec<Result<(bool, f64, usize)>> = cases
        .par_iter()
        .map(|(n, kappa, u, w)| {
            let params = SelbergParams::new(*n, u.clone(), w.clone(), kappa.clone())?;
            let triples: Vec<_> = triples.iter().filter(|t| t.0 + t.1 - t.2 <= *n).copied().collect();
            let mut payloads = vec![Payload::One];
            payloads.extend(triples.iter().map(|&(m1, m2, m3)| Payload::Aomoto { m1, m2, m3 }));
            for l in &lambdas {
                payloads.push(Payload::Symmetric {
                    poly: jack_in_monomials(l, kappa)?,
                });
            }
            let spec = QuadratureSpec {
                n: *n as usize,
                points_per_axis: if *n == 2 { 40 } else { 28 },
                weight: Weight::Selberg {
                    u: u.to_f64(),
                    w: w.to_f64(),
                    kappa: kappa.to_f64(),
                },
                payloads,
                domain: Domain::Unit,
            };
            let res = quadrature(&spec)?;
            let i0 = selberg_i0(&params)?.to_approx().value;
            let mut worst = (res.values[0] / i0 - 1.0).abs();
            let mut count = 1;
            for (i, &(m1, m2, m3)) in triples.iter().enumerate() {
                let exact = aomoto_general_ratio(&params, m1, m2, m3)?.to_f64();
                worst = worst.max((res.ratio(i + 1, 0).0 - exact).abs());
                count += 1;
            }
            let off = 1 + triples.len();
            for (i, l) in lambdas.iter().enumerate() {
                let exact = kadell_ratio(l, *n, u, w, kappa)?.to_f64();
                worst = worst.max((res.ratio(off + i, 0).0 - exact).abs());
                count += 1;
            }
            Ok((*kappa == q("1/2"), worst, count))
        })
        .collect();
    let mut smooth = (0.0f64, 0usize);
    let mut half = (0.0f64, 0usize);
    for e in errors {
        let (is_half, worst, count) = e?;
        let slot = if is_half { &mut half } else { &mut smooth };
        slot.0 = slot.0.max(worst);
        slot.1 += count;
    }
    let passed = smooth.0 <= 1e-6 && half.0 <= 1e-3;
    Ok((
        passed,
        format!(
            "{} checks at kappa in {{1,2}}: max error {:.2e} (tol 1e-6); {} checks at kappa = 1/2: max error {:.2e} (tol 1e-3)",
            smooth.1, smooth.0, half.1, half.0
        ),
    ))
}

type Entry = fn(&Rational) -> Rational;

/// Printed coefficients of `P_λ` in monomials, by row.
fn printed_jack_rows() -> Vec<(&'static str, Vec<(&'static str, Entry)>)> {
    let one: Entry = |_| Rational::one();
    vec![
        ("1", vec![("1", one)]),
        ("2", vec![("2", one), ("1,1", |k| k * 2 / (k + 1))]),
        ("1,1", vec![("1,1", one)]),
        (
            "3",
            vec![
                ("3", one),
                ("2,1", |k| k * 3 / (k + 2)),
                ("1,1,1", |k| k.pow(2) * 6 / ((k + 1) * (k + 2))),
            ],
        ),
        ("2,1", vec![("2,1", one), ("1,1,1", |k| k * 6 / (k * 2 + 1))]),
        ("1,1,1", vec![("1,1,1", one)]),
        (
            "4",
            vec![
                ("4", one),
                ("3,1", |k| k * 4 / (k + 3)),
                ("2,2", |k| k * (k + 1) * 6 / ((k + 2) * (k + 3))),
                ("2,1,1", |k| k.pow(2) * 12 / ((k + 2) * (k + 3))),
                ("1,1,1,1", |k| k.pow(3) * 24 / ((k + 1) * (k + 2) * (k + 3))),
            ],
        ),
        (
            "3,1",
            vec![
                ("3,1", one),
                ("2,2", |k| k * 2 / (k + 1)),
                ("2,1,1", |k| (k * 5 + 3) * k / (k + 1).pow(2)),
                ("1,1,1,1", |k| k.pow(2) * 12 / (k + 1).pow(2)),
            ],
        ),
        (
            "2,2",
            vec![
                ("2,2", one),
                ("2,1,1", |k| k * 2 / (k + 1)),
                ("1,1,1,1", |k| k.pow(2) * 12 / ((k + 1) * (k * 2 + 1))),
            ],
        ),
        ("2,1,1", vec![("2,1,1", one), ("1,1,1,1", |k| k * 12 / (k * 3 + 1))]),
        ("1,1,1,1", vec![("1,1,1,1", one)]),
    ]
}

/// Printed coefficients of `m_μ` in the Jack basis, by row.
fn printed_monomial_rows() -> Vec<(&'static str, Vec<(&'static str, Entry)>)> {
    let one: Entry = |_| Rational::one();
    vec![
        ("2", vec![("2", one), ("1,1", |k| -(k * 2 / (k + 1)))]),
        ("1,1", vec![("1,1", one)]),
        (
            "3",
            vec![
                ("3", one),
                ("2,1", |k| -(k * 3 / (k + 2))),
                ("1,1,1", |k| k.pow(2) * 6 / ((k + 1) * (k * 2 + 1))),
            ],
        ),
        ("2,1", vec![("2,1", one), ("1,1,1", |k| -(k * 6 / (k * 2 + 1)))]),
        ("1,1,1", vec![("1,1,1", one)]),
        (
            "4",
            vec![
                ("4", one),
                ("3,1", |k| -(k * 4 / (k + 3))),
                ("2,2", |k| k * (k - 1) * 2 / ((k + 1) * (k + 2))),
                ("2,1,1", |k| k.pow(2) * 4 / (k + 1).pow(2)),
                ("1,1,1,1", |k| -(k.pow(3) * 24 / ((k + 1) * (k * 2 + 1) * (k * 3 + 1)))),
            ],
        ),
        (
            "3,1",
            vec![
                ("3,1", one),
                ("2,2", |k| -(k * 2 / (k + 1))),
                ("2,1,1", |k| -(k * (k + 3) / (k + 1).pow(2))),
                ("1,1,1,1", |k| k.pow(2) * 24 / ((k * 2 + 1) * (k * 3 + 1))),
            ],
        ),
        (
            "2,2",
            vec![
                ("2,2", one),
                ("2,1,1", |k| -(k * 2 / (k + 1))),
                ("1,1,1,1", |k| k.pow(2) * 12 / ((k * 2 + 1) * (k * 3 + 1))),
            ],
        ),
        ("2,1,1", vec![("2,1,1", one), ("1,1,1,1", |k| -(k * 12 / (k * 3 + 1)))]),
        ("1,1,1,1", vec![("1,1,1,1", one)]),
    ]
}

fn jack_tables() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for kappa in ["1/2", "1", "2", "3"].map(q) {
        for (row, entries) in printed_jack_rows() {
            let poly = jack_in_monomials(&p(row), &kappa)?;
            for mu in partitions_of(p(row).weight()) {
                let printed = entries
                    .iter()
                    .find(|(c, _)| p(c) == mu)
                    .map_or(Rational::zero(), |(_, f)| f(&kappa));
                checked += 1;
                if poly.coeff(&mu) != printed {
                    mismatches.push(format!("P_{row} m_{mu} at kappa {kappa}"));
                }
            }
        }
        for (row, entries) in printed_monomial_rows() {
            let coeffs = monomial_to_jack(&p(row), &kappa)?;
            for lambda in partitions_of(p(row).weight()) {
                let printed = entries
                    .iter()
                    .find(|(c, _)| p(c) == lambda)
                    .map_or(Rational::zero(), |(_, f)| f(&kappa));
                checked += 1;
                if coeffs.get(&lambda).cloned().unwrap_or_else(Rational::zero) != printed {
                    mismatches.push(format!("m_{row} P_{lambda} at kappa {kappa}"));
                }
            }
        }
    }
    Ok((
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{checked} table entries match exactly")
        } else {
            format!("{} of {checked} entries differ: {}", mismatches.len(), mismatches.join(", "))
        },
    ))
}

/// Sample points and degree bound used for exact expansions. Below `n = 4`
/// some degree-4 moments leave the rational function of `n` that describes
/// them for larger `n` (a Kadell pole meets a vanishing principal
/// specialization), so sampling starts at 4.
pub const EXPANSION_NS: std::ops::RangeInclusive<u32> = 4..=18;
pub const EXPANSION_DEGREE: usize = 6;

fn expansions() -> Result<(bool, String)> {
    use Quantity::*;
    let printed: Vec<(&str, Quantity, Vec<&str>)> = vec![
        ("1", Second, vec!["1/8", "0", "-1/32"]),
        ("1", CrossLinear, vec!["0", "-1/8", "-1/16", "-1/32"]),
        ("1", CrossSquare, vec!["1/64", "-1/128", "-1/128"]),
        ("1", Fourth, vec!["3/128", "0"]),
        ("1/2", Second, vec!["1/8", "-1/16", "1/32"]),
        ("1/2", CrossLinear, vec!["0", "-1/8", "1/16", "-1/32"]),
        ("1/2", CrossSquare, vec!["1/64", "-3/128", "3/128"]),
        ("1/2", Fourth, vec!["3/128", "-5/256"]),
        ("2", Second, vec!["1/8", "1/32", "1/128"]),
        ("2", CrossSquare, vec!["1/64", "0", "-3/1024"]),
        ("2", Fourth, vec!["3/128", "5/512"]),
    ];
    let ns: Vec<u32> = EXPANSION_NS.collect();
    let mut bad = Vec::new();
    for (kappa, quantity, coeffs) in &printed {
        let want: Vec<Rational> = coeffs.iter().map(|c| q(c)).collect();
        let (_, got) = expansion(*quantity, &q(kappa), &ns, EXPANSION_DEGREE, want.len() - 1)?;
        if got != want {
            bad.push(format!(
                "{quantity:?} at kappa {kappa}: got ({})",
                got.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} expansions reproduced exactly", printed.len())
        } else {
            bad.join("; ")
        },
    ))
}

/// Richardson samples: every tenth n from 110 to 200.
fn extrapolation_ns() -> impl Iterator<Item = u32> {
    (110..=200).step_by(10)
}

fn variance_constants() -> Result<(bool, String)> {
    let mut passed = true;
    let mut parts = Vec::new();
    for e in EnsembleSpec::all() {
        let c = match e.family {
            Family::SelfAdjoint => Rational::new(1, 16 * e.beta as i64),
            Family::FullMatrix => Rational::new(1, 8 * e.beta as i64),
        };
        let vars: Vec<(u32, Rational)> = (20..=200u32)
            .into_par_iter()
            .map(|n| Ok((n, ensemble_moments(e, n, Convention::Paper)?.var)))
            .collect::<Result<_>>()?;
        let within = vars
            .iter()
            .all(|(n, v)| (v - &c).abs() <= Rational::new(2, *n as i64));
        let samples: Vec<(i64, Rational)> = vars
            .iter()
            .filter(|(n, _)| extrapolation_ns().any(|m| m == *n))
            .map(|(n, v)| (*n as i64, v.clone()))
            .collect();
        let limit = richardson(&samples);
        let limit_err = (&limit - &c).abs().to_f64();
        let mut ok = within && limit_err <= 1e-8;
        if e.family == Family::FullMatrix {
            let beta = Rational::from(e.beta);
            let chain = (20..=200u32).all(|n| {
                full_matrix_variance_closed_form(n, &beta)
                    == vars[(n - 20) as usize].1
            });
            // The report assembles var from the Aomoto ratios; recompute
            // from the ratios directly as a second witness.
            let direct = {
                let n = 37u32;
                let nn = Rational::from(n);
                let m2 = full_matrix_moment_ratio(FullPayload::Square, n, &beta)?;
                let m22 = full_matrix_moment_ratio(FullPayload::CrossSquare, n, &beta)?;
                let m4 = full_matrix_moment_ratio(FullPayload::Fourth, n, &beta)?;
                &nn * m4 + &nn * (&nn - 1) * m22 - (&nn * m2).pow(2)
            };
            ok &= chain && direct == full_matrix_variance_closed_form(37, &beta);
        }
        passed &= ok;
        parts.push(format!("{e}: limit {c} extrapolated error {limit_err:.1e}{}", if ok { "" } else { " FAIL" }));
    }
    Ok((passed, parts.join("; ")))
}

fn remark_constant() -> Result<(bool, String)> {
    let ns: Vec<u32> = EXPANSION_NS.collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for beta in [1i64, 2, 4, 6] {
        let kappa = Rational::new(beta, 2);
        let (_, c) = expansion(Quantity::Remark, &kappa, &ns, EXPANSION_DEGREE, 0)?;
        let ok = c[0] == Rational::new(1, 64 * beta);
        passed &= ok;
        parts.push(format!("beta {beta}: {}", c[0]));
    }
    let mut scaled = true;
    for e in EnsembleSpec::all().into_iter().filter(|e| e.family == Family::SelfAdjoint) {
        for n in 2..=30 {
            let forced = ensemble_moments(e, n, Convention::Forced)?.var;
            scaled &= forced == beta_remark_combination(n, &Rational::from(e.beta))? * 16;
        }
    }
    parts.push(format!("forced variance = 16 x combination: {scaled}"));
    Ok((passed && scaled, parts.join("; ")))
}

fn thin_shell() -> Result<(bool, String)> {
    let mut passed = true;
    let mut parts = Vec::new();
    for e in EnsembleSpec::all() {
        let sig: Vec<(u32, Rational)> = (2..=200u32)
            .into_par_iter()
            .map(|n| Ok((n, ensemble_moments(e, n, Convention::Forced)?.sigma2)))
            .collect::<Result<_>>()?;
        let (lo, hi) = (q("1/10"), q("10"));
        let bounded = sig.iter().all(|(_, s)| *s >= lo && *s <= hi);
        let samples: Vec<(i64, Rational)> = sig
            .iter()
            .filter(|(n, _)| extrapolation_ns().any(|m| m == *n))
            .map(|(n, s)| (*n as i64, s.clone()))
            .collect();
        let limit = richardson(&samples).to_f64();
        let ok = bounded && (limit - 0.5).abs() <= 0.01;
        passed &= ok;
        parts.push(format!("{e}: limit {limit:.6}{}", if bounded { "" } else { " out of bounds" }));
    }
    Ok((passed, parts.join("; ")))
}

fn weingarten_values() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut check = |label: String, got: Rational, want: Rational| {
        checked += 1;
        if got != want {
            bad.push(format!("{label}: {got} != {want}"));
        }
    };
    for n in 3..=20i64 {
        let z = Rational::integer(n);
        check(format!("Wg^U(e;{n})"), wg_unitary(&p("1,1"), &z, None)?, Rational::new(1, n * n - 1));
        check(
            format!("Wg^U((12);{n})"),
            wg_unitary(&p("2"), &z, None)?,
            Rational::new(-1, n * (n * n - 1)),
        );
        check(
            format!("Wg^O((1,1);{n})"),
            wg_orthogonal(&p("1,1"), &z)?,
            Rational::new(n + 1, n * (n - 1) * (n + 2)),
        );
        check(
            format!("Wg^O((2);{n})"),
            wg_orthogonal(&p("2"), &z)?,
            Rational::new(-1, n * (n - 1) * (n + 2)),
        );
    }
    for sigma in crate::combinat::all_permutations(4) {
        check(format!("omega^(2)({sigma})"), zonal_spherical(&p("2"), &sigma)?, Rational::one());
    }
    check("omega^(1,1)(e)".into(), zonal_spherical(&p("1,1"), &Permutation::identity(4))?, Rational::one());
    let t = Permutation::from_cycles(4, &[&[2, 3]])?;
    check("omega^(1,1)((23))".into(), zonal_spherical(&p("1,1"), &t)?, q("-1/2"));
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} values exact")
        } else {
            bad.join("; ")
        },
    ))
}

fn covariance() -> Result<(bool, String)> {
    let mut passed = true;
    let mut parts = Vec::new();
    for field in [SelfAdjointField::Hermitian, SelfAdjointField::RealSymmetric] {
        let reports = (2..=100u32)
            .into_par_iter()
            .map(|n| covariance_report(field, n, Convention::Forced))
            .collect::<Result<Vec<_>>>()?;
        let structure = reports
            .iter()
            .filter(|r| r.n <= 50)
            .all(|r| r.identity_holds && r.zero_pattern_exact());
        let three = Rational::integer(3);
        let bounded = reports.iter().all(|r| r.condition_number <= three);
        let at_100 = reports.last().expect("n = 100 present").condition_number.to_f64();
        let ok = structure && bounded && (at_100 - 2.0).abs() <= 0.05;
        passed &= ok;
        parts.push(format!(
            "{field:?}: zero pattern and identity {}, condition number <= 3: {bounded}, at n = 100: {at_100:.4}",
            if structure { "exact" } else { "violated" }
        ));
    }
    Ok((passed, parts.join("; ")))
}

fn correlations() -> Result<(bool, String)> {
    let mut passed = true;
    for n in 2..=50i64 {
        let c = negcorr(Field::Complex, n as u32)?;
        passed &= c.cross == Rational::new(1, 4 * n * n - 1)
            && c.same_row == Rational::new(1, 2 * n * (2 * n + 1))
            && c.second_moment == Rational::new(1, 2 * n)
            && c.pattern_holds();
        let r = negcorr(Field::Real, n as u32)?;
        passed &= r.cross == Rational::new(n + 1, n * (2 * n + 1) * (2 * n + 3))
            && r.same_row == Rational::new(1, (2 * n + 1) * (2 * n + 3))
            && r.second_moment == Rational::new(1, 2 * n + 1)
            && r.pattern_holds();
    }
    Ok((
        passed,
        format!("closed forms and sign pattern for 2 <= n <= 50: {}", if passed { "exact" } else { "violated" }),
    ))
}

/// z-scores of sampled `E[T11 T22]`, `E[|T12|^2]`, `E[T11^2]` at `n = 3`
/// against the exact values in each convention.
fn sampling_concordance(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let n = 3u32;
    let mut passed = true;
    let mut parts = Vec::new();
    for (field, ball) in [
        (SelfAdjointField::Hermitian, BallEnsemble::Hermitian),
        (SelfAdjointField::RealSymmetric, BallEnsemble::RealSymmetric),
    ] {
        let est = rejection_estimate(ball, n as usize, cfg.samples, cfg.seed, cfg.chains, |m| {
            vec![(m[(0, 0)] * m[(1, 1)]).re, m[(0, 1)].norm_sqr(), m[(0, 0)].re.powi(2)]
        })?;
        let exact = |conv| -> Result<[f64; 3]> {
            let r = covariance_report(field, n, conv)?;
            let off = match field {
                SelfAdjointField::Hermitian => r.offdiag_variance.clone(),
                SelfAdjointField::RealSymmetric => &r.offdiag_variance / 2,
            };
            Ok([r.diag_diag_covariance.to_f64(), off.to_f64(), r.diag_variance.to_f64()])
        };
        let forced = exact(Convention::Forced)?;
        let paper = exact(Convention::Paper)?;
        let zf: Vec<f64> = est.iter().zip(forced).map(|(e, x)| e.z_score(x)).collect();
        let zp: Vec<f64> = est.iter().zip(paper).map(|(e, x)| e.z_score(x)).collect();
        let forced_ok = zf.iter().all(|z| z.abs() <= 4.0);
        let paper_rejected = zp.iter().any(|z| z.abs() > 4.0);
        passed &= forced_ok && paper_rejected;
        let fmt = |zs: &[f64]| zs.iter().map(|z| format!("{z:+.2}")).collect::<Vec<_>>().join(", ");
        parts.push(format!(
            "{field:?}: {} samples, acceptance {:.4}, z forced ({}), z paper ({})",
            est[0].n_samples,
            est[0].diagnostics.acceptance_rate,
            fmt(&zf),
            fmt(&zp)
        ));
    }
    Ok((passed, parts.join("; ")))
}

/// Re-runs the seeded and the exact checks and compares the records.
fn determinism(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let small = VerifyConfig {
        samples: (cfg.samples / 10).max(10_000),
        ..*cfg
    };
    let runs: Vec<String> = (0..2)
        .map(|_| render(&[run_criterion(10, &small), run_criterion(3, &small), run_criterion(7, &small)]))
        .collect();
    let same = runs[0] == runs[1];
    Ok((same, format!("repeated seeded runs byte-identical: {same}")))
}
