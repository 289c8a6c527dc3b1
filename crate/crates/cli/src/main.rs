mod output;

use std::io::{self, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use selmat_core::jack::{jack_in_monomials, kadell_ratio, monomial_to_jack, principal_specialization, principal_specialization_gamma};
use selmat_core::moments::{beta_remark_combination, ensemble_moments, expansion, richardson, Quantity};
use selmat_core::oracle::{
    haar_estimate, mcmc_eigenvalue_sample, quadrature, rejection_estimate, BallEnsemble, Domain, Group, LogGas,
    McmcConfig, Observable, Payload, QuadratureSpec, Weight,
};
use selmat_core::selberg::{aomoto_general_ratio, aomoto_ratio, selberg_i0};
use selmat_core::verify::{run_all, VerifyConfig};
use selmat_core::weingarten::{
    covariance_report, haar_unitary_moment, negcorr, wg_orthogonal, wg_unitary, Field, SelfAdjointField,
};
use selmat_core::{Convention, EnsembleSpec, Error, Partition, Rational, SelbergParams};

use output::{object, Format, Sink};

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `2,5,10`, `20..200` or `20..200:10`, or any comma-separated mix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
struct NList(Vec<u32>);

impl FromStr for NList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let num = |x: &str| x.parse::<u32>().map_err(|_| format!("bad n value {x:?}"));
            if let Some((lo, rest)) = item.split_once("..") {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (num(hi)?, num(step)?),
                    None => (num(rest)?, 1),
                };
                if step == 0 {
                    return Err("range step must be positive".into());
                }
                out.extend((num(lo)?..=hi).step_by(step as usize));
            } else {
                out.push(num(item)?);
            }
        }
        if out.is_empty() {
            return Err("empty n list".into());
        }
        Ok(NList(out))
    }
}

#[derive(Parser, Serialize)]
#[command(name = "selmat", version, about = "Exact moments of operator-norm balls of random matrices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Scaling convention for self-adjoint moments: forced or paper.
    #[arg(long, global = true, default_value = "forced", value_parser = parse::<Convention>)]
    convention: Convention,
    /// Seed for every sampler.
    #[arg(long, global = true, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct SelbergArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_parser = parse::<Rational>)]
    u: Rational,
    #[arg(long, value_parser = parse::<Rational>)]
    w: Rational,
    #[arg(long, value_parser = parse::<Rational>)]
    kappa: Rational,
}

impl SelbergArgs {
    fn params(&self) -> selmat_core::Result<SelbergParams> {
        SelbergParams::new(self.n, self.u.clone(), self.w.clone(), self.kappa.clone())
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum JackCommand {
    /// Jack polynomial in monomials, or with --inverse a monomial in Jack polynomials.
    Expand {
        #[arg(long, value_parser = parse::<Partition>)]
        lambda: Partition,
        #[arg(long, value_parser = parse::<Rational>)]
        kappa: Rational,
        #[arg(long)]
        inverse: bool,
    },
    /// Value at (1, ..., 1) with n ones.
    Principal {
        #[arg(long, value_parser = parse::<Partition>)]
        lambda: Partition,
        #[arg(long, value_parser = parse::<Rational>)]
        kappa: Rational,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OracleCommand {
    /// Gauss-Legendre quadrature of a Selberg integral, optionally with a Jack payload.
    Quad {
        #[command(flatten)]
        params: SelbergArgs,
        #[arg(long, value_parser = parse::<Partition>)]
        lambda: Option<Partition>,
        #[arg(long, default_value_t = 24)]
        points: usize,
    },
    /// Rejection sampling of a ball (--ball) or Metropolis sampling of a log-gas (--log-gas a,b,c).
    Sample {
        #[arg(long, value_parser = parse::<BallEnsemble>, conflicts_with = "log_gas", required_unless_present = "log_gas")]
        ball: Option<BallEnsemble>,
        #[arg(long, value_parser = parse_log_gas)]
        log_gas: Option<LogGasArg>,
        #[arg(long)]
        n: usize,
        /// Accepted samples (ball) or sweeps per chain (log-gas).
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 16)]
        chains: usize,
        #[arg(long, default_value_t = 10_000)]
        burn_in: u64,
        #[arg(long, value_delimiter = ',', default_value = "p2", value_parser = parse::<Observable>)]
        observables: Vec<Observable>,
    },
    /// Haar sampling; estimates |U_11|^2 and |U_11 U_22|^2.
    Haar {
        #[arg(value_parser = parse::<Group>)]
        group: Group,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 16)]
        chains: usize,
    },
}

#[derive(Clone, Copy, Debug, Serialize)]
struct LogGasArg {
    a: u32,
    b: f64,
    c: f64,
}

fn parse_log_gas(s: &str) -> Result<LogGasArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || format!("expected a,b,c, got {s:?}");
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(LogGasArg {
        a: parts[0].trim().parse().map_err(|_| bad())?,
        b: parts[1].trim().parse().map_err(|_| bad())?,
        c: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Selberg's integral as a Gamma product.
    Selberg(SelbergArgs),
    /// Normalized Aomoto integral for (m1, m2, m3).
    Aomoto {
        #[command(flatten)]
        params: SelbergArgs,
        #[arg(long)]
        m1: u32,
        #[arg(long, default_value_t = 0)]
        m2: u32,
        #[arg(long, default_value_t = 0)]
        m3: u32,
    },
    /// Jack polynomials.
    Jack {
        #[command(subcommand)]
        command: JackCommand,
    },
    /// Normalized Kadell integral of a Jack polynomial.
    Kadell {
        #[arg(long, value_parser = parse::<Partition>)]
        lambda: Partition,
        #[command(flatten)]
        params: SelbergArgs,
    },
    /// Eigenvalue or singular-value moments of a ball.
    Moments {
        #[arg(long, value_parser = parse::<EnsembleSpec>)]
        ensemble: EnsembleSpec,
        #[arg(long)]
        n: u32,
    },
    /// Variance of the squared Hilbert-Schmidt norm, with extrapolated limit.
    Variance {
        #[arg(long, value_parser = parse::<EnsembleSpec>)]
        ensemble: EnsembleSpec,
        #[arg(long)]
        n: NList,
    },
    /// Thin-shell constant, with extrapolated limit.
    Sigma {
        #[arg(long, value_parser = parse::<EnsembleSpec>)]
        ensemble: EnsembleSpec,
        #[arg(long)]
        n: NList,
    },
    /// Exact large-n expansion of a named quantity.
    Asympt {
        /// second, cross-linear, cross-square, fourth or remark.
        #[arg(long, value_parser = parse::<QuantityArg>)]
        quantity: QuantityArg,
        #[arg(long, value_parser = parse::<Rational>)]
        kappa: Rational,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value = "4..18")]
        ns: NList,
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// The beta combination on [-1/2, 1/2]^n.
    RemarkBeta {
        #[arg(long, value_parser = parse::<Rational>)]
        beta: Rational,
        #[arg(long)]
        n: NList,
    },
    /// Entry covariance of the Hermitian (her) or real symmetric (sym) ball.
    Covariance {
        #[arg(long, value_parser = parse::<SelfAdjointField>)]
        ensemble: SelfAdjointField,
        #[arg(long)]
        n: u32,
    },
    /// Fourth-order entry correlations of the real (r) or complex (c) full-matrix ball.
    Negcorr {
        #[arg(long, value_parser = parse::<Field>)]
        field: Field,
        #[arg(long)]
        n: u32,
    },
    /// Weingarten function value.
    Weingarten {
        #[arg(value_parser = parse::<Group>)]
        group: Group,
        #[arg(long)]
        k: u32,
        /// Cycle type (unitary) or coset type (orthogonal).
        #[arg(long = "type", visible_aliases = ["cycle-type", "coset-type"], value_parser = parse::<Partition>)]
        #[serde(rename = "type")]
        ty: Partition,
        #[arg(long, value_parser = parse::<Rational>)]
        z: Rational,
        /// Second parameter of the two-parameter unitary function.
        #[arg(long, value_parser = parse::<Rational>)]
        w: Option<Rational>,
    },
    /// Numeric oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, default_value_t = VerifyConfig::default().samples)]
        samples: u64,
        #[arg(long, default_value_t = VerifyConfig::default().chains)]
        chains: usize,
    },
}

#[derive(Clone, Copy, Debug)]
struct QuantityArg(Quantity);

impl Serialize for QuantityArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:?}", self.0).to_lowercase())
    }
}

impl From<Quantity> for QuantityArg {
    fn from(q: Quantity) -> Self {
        QuantityArg(q)
    }
}

impl FromStr for QuantityArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.parse().map(QuantityArg)
    }
}

enum Failure {
    /// Invalid input: exit code 2.
    Usage(String),
    /// A verification check failed: exit code 1.
    VerificationWith(Records),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

type Records = Vec<Value>;

fn exact(m: &mut Map<String, Value>, key: &str, v: &Rational) {
    m.insert(key.into(), json!(v));
    m.insert(format!("{key}_f64"), json!(v.to_f64()));
}

fn extrapolated(values: &[(u32, Rational)]) -> Value {
    // Neville in 1/n over the largest few n; more points add nothing but size.
    let mut tail: Vec<(i64, Rational)> = values.iter().map(|(n, v)| (*n as i64, v.clone())).collect();
    tail.sort_by_key(|(n, _)| *n);
    tail.dedup_by_key(|(n, _)| *n);
    let tail = &tail[tail.len().saturating_sub(10)..];
    let limit = richardson(tail);
    let mut m = Map::new();
    exact(&mut m, "extrapolated_limit", &limit);
    m.insert("from_n".into(), json!(tail.iter().map(|(n, _)| n).collect::<Vec<_>>()));
    Value::Object(m)
}

fn per_n<F>(ns: &NList, f: F) -> Result<Vec<(u32, Rational)>, Failure>
where
    F: Fn(u32) -> selmat_core::Result<Rational> + Sync,
{
    Ok(ns.0.par_iter().map(|&n| Ok((n, f(n)?))).collect::<selmat_core::Result<_>>()?)
}

fn run(cli: &Cli) -> Result<Records, Failure> {
    let conv = cli.convention;
    let mut out = Vec::new();
    match &cli.command {
        Command::Selberg(a) => {
            let g = selberg_i0(&a.params()?)?.simplify();
            out.push(json!({ "value": g, "approx": g.to_approx() }));
        }
        Command::Aomoto { params, m1, m2, m3 } => {
            let p = params.params()?;
            let mut m = Map::new();
            exact(&mut m, "ratio", &aomoto_general_ratio(&p, *m1, *m2, *m3)?);
            if *m2 == 0 && *m3 == 0 {
                exact(&mut m, "elementary_ratio", &aomoto_ratio(&p, *m1)?);
            }
            out.push(Value::Object(m));
        }
        Command::Jack { command } => match command {
            JackCommand::Expand { lambda, kappa, inverse } => {
                if *inverse {
                    let coeffs = monomial_to_jack(lambda, kappa)?;
                    out.push(json!({ "monomial": lambda, "jack_coefficients": coeffs }));
                } else {
                    let p = jack_in_monomials(lambda, kappa)?;
                    out.push(json!({ "jack": lambda, "monomial_coefficients": p, "display": p.to_string() }));
                }
            }
            JackCommand::Principal { lambda, kappa, n } => {
                let mut m = Map::new();
                exact(&mut m, "value", &principal_specialization(lambda, kappa, *n)?);
                m.insert("gamma_form".into(), json!(principal_specialization_gamma(lambda, kappa, *n)?));
                out.push(Value::Object(m));
            }
        },
        Command::Kadell { lambda, params } => {
            params.params()?;
            let mut m = Map::new();
            exact(
                &mut m,
                "ratio",
                &kadell_ratio(lambda, params.n, &params.u, &params.w, &params.kappa)?,
            );
            out.push(Value::Object(m));
        }
        Command::Moments { ensemble, n } => {
            let r = ensemble_moments(*ensemble, *n, conv)?;
            let mut m = object(&r);
            m.insert("t2".into(), json!(r.t2()));
            m.insert("t4".into(), json!(r.t4()));
            out.push(Value::Object(m));
        }
        Command::Variance { ensemble, n } | Command::Sigma { ensemble, n } => {
            let sigma = matches!(cli.command, Command::Sigma { .. });
            let key = if sigma { "sigma2" } else { "var" };
            let values = per_n(n, |n| {
                let r = ensemble_moments(*ensemble, n, conv)?;
                Ok(if sigma { r.sigma2 } else { r.var })
            })?;
            for (n, v) in &values {
                let mut m = Map::new();
                m.insert("ensemble".into(), json!(ensemble.name()));
                m.insert("n".into(), json!(n));
                exact(&mut m, key, v);
                out.push(Value::Object(m));
            }
            out.push(extrapolated(&values));
        }
        Command::Asympt {
            quantity,
            kappa,
            order,
            ns,
            degree,
        } => {
            let (f, coeffs) = expansion(quantity.0, kappa, &ns.0, *degree, *order)?;
            out.push(json!({
                "rational_function": f,
                "coefficients": coeffs,
                "coefficients_f64": coeffs.iter().map(Rational::to_f64).collect::<Vec<_>>(),
            }));
        }
        Command::RemarkBeta { beta, n } => {
            let values = per_n(n, |n| beta_remark_combination(n, beta))?;
            for (n, v) in &values {
                let mut m = Map::new();
                m.insert("n".into(), json!(n));
                exact(&mut m, "value", v);
                out.push(Value::Object(m));
            }
            out.push(extrapolated(&values));
        }
        Command::Covariance { ensemble, n } => {
            let r = covariance_report(*ensemble, *n, conv)?;
            let mut m = object(&r);
            m.insert("condition_number_f64".into(), json!(r.condition_number.to_f64()));
            m.insert("zero_pattern_exact".into(), json!(r.zero_pattern_exact()));
            out.push(Value::Object(m));
        }
        Command::Negcorr { field, n } => {
            let r = negcorr(*field, *n)?;
            out.push(serde_json::to_value(&r).expect("records serialize"));
            out.push(json!({ "approx": {
                "cross": r.cross.to_f64(),
                "same_row": r.same_row.to_f64(),
                "second_moment_sq": r.second_moment_sq.to_f64(),
            }}));
        }
        Command::Weingarten { group, k, ty, z, w } => {
            if ty.weight() != *k {
                return Err(Failure::Usage(format!("type {ty} is not a partition of k = {k}")));
            }
            let v = match group {
                Group::Unitary => wg_unitary(ty, z, w.as_ref())?,
                Group::Orthogonal => {
                    if w.is_some() {
                        return Err(Failure::Usage("--w applies to the unitary group only".into()));
                    }
                    wg_orthogonal(ty, z)?
                }
            };
            let mut m = Map::new();
            exact(&mut m, "value", &v);
            out.push(Value::Object(m));
        }
        Command::Oracle { command } => oracle(command, cli.seed, &mut out)?,
        Command::Verify { samples, chains } => {
            let cfg = VerifyConfig {
                seed: cli.seed,
                samples: *samples,
                chains: *chains,
            };
            let results = run_all(&cfg);
            let failed = results.iter().any(|r| !r.passed);
            out.extend(results.iter().map(|r| serde_json::to_value(r).expect("records serialize")));
            if failed {
                return Err(Failure::VerificationWith(out));
            }
        }
    }
    Ok(out)
}

fn oracle(command: &OracleCommand, seed: u64, out: &mut Records) -> Result<(), Failure> {
    match command {
        OracleCommand::Quad { params, lambda, points } => {
            let p = params.params()?;
            let mut payloads = vec![Payload::One];
            if let Some(l) = lambda {
                payloads.push(Payload::Symmetric {
                    poly: jack_in_monomials(l, &p.kappa)?,
                });
            }
            let res = quadrature(&QuadratureSpec {
                n: p.n as usize,
                points_per_axis: *points,
                weight: Weight::Selberg {
                    u: p.u.to_f64(),
                    w: p.w.to_f64(),
                    kappa: p.kappa.to_f64(),
                },
                payloads,
                domain: Domain::Unit,
            })?;
            out.push(json!({
                "integral": res.values[0],
                "error_estimate": res.error_estimates[0],
                "exact_f64": selberg_i0(&p)?.to_approx().value,
                "points_per_axis": res.points_per_axis,
            }));
            if let Some(l) = lambda {
                let (r, err) = res.ratio(1, 0);
                out.push(json!({
                    "lambda": l,
                    "ratio": r,
                    "error_estimate": err,
                    "exact": kadell_ratio(l, p.n, &p.u, &p.w, &p.kappa)?,
                }));
            }
        }
        OracleCommand::Sample {
            ball,
            log_gas,
            n,
            count,
            chains,
            burn_in,
            observables,
        } => {
            if let Some(ball) = ball {
                let names = ["T11^2", "T11*T22", "|T12|^2"];
                let est = rejection_estimate(*ball, *n, *count, seed, *chains, |m| {
                    let off = if m.nrows() > 1 { m[(0, 1)].norm_sqr() } else { 0.0 };
                    let dd = if m.nrows() > 1 { (m[(0, 0)] * m[(1, 1)].conj()).re } else { 0.0 };
                    vec![m[(0, 0)].norm_sqr(), dd, off]
                })?;
                for (name, e) in names.iter().zip(est) {
                    let mut m = object(&e);
                    m.insert("statistic".into(), json!(name));
                    out.push(Value::Object(m));
                }
            } else if let Some(g) = log_gas {
                let cfg = McmcConfig {
                    n: *n,
                    steps: *count,
                    burn_in: *burn_in,
                    chains: *chains,
                    seed,
                };
                let est = mcmc_eigenvalue_sample(LogGas { a: g.a, b: g.b, c: g.c }, cfg, observables)?;
                for (o, e) in observables.iter().zip(est) {
                    let mut m = object(&e);
                    m.insert("observable".into(), json!(o));
                    out.push(Value::Object(m));
                }
            }
        }
        OracleCommand::Haar { group, n, count, chains } => {
            let est = haar_estimate(*group, *n, *count, seed, *chains, |u| {
                let a = u[(0, 0)].norm_sqr();
                let b = if u.nrows() > 1 { a * u[(1, 1)].norm_sqr() } else { a * a };
                vec![a, b]
            })?;
            let nn = *n as u32;
            let predictions: [Option<Rational>; 2] = match group {
                Group::Unitary => [
                    Some(haar_unitary_moment(&[1], &[1], &[1], &[1], nn)?),
                    Some(if nn > 1 {
                        haar_unitary_moment(&[1, 2], &[1, 2], &[1, 2], &[1, 2], nn)?
                    } else {
                        haar_unitary_moment(&[1, 1], &[1, 1], &[1, 1], &[1, 1], nn)?
                    }),
                ],
                Group::Orthogonal => [Some(Rational::from(nn).recip()), None],
            };
            for ((name, e), exact) in ["|U11|^2", "|U11|^2|U22|^2"].iter().zip(est).zip(predictions) {
                let mut m = object(&e);
                m.insert("statistic".into(), json!(name));
                if let Some(x) = exact {
                    m.insert("exact".into(), json!(x));
                    m.insert("z_score".into(), json!(e.z_score(x.to_f64())));
                }
                out.push(Value::Object(m));
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Option<usize> {
    let threads = std::env::var("SELMAT_THREADS").ok()?.parse::<usize>().ok()?;
    if threads > 0 {
        // Fails only if the pool already exists, which it cannot here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Some(threads)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let threads = configure_threads();
    let mut config = object(&cli);
    config.insert("threads".into(), json!(threads));
    let stdout = io::stdout();
    let mut sink = Sink::new(cli.format, stdout.lock());
    let (records, code) = match run(&cli) {
        Ok(r) => (r, 0),
        Err(Failure::VerificationWith(r)) => (r, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = sink
        .header(&Value::Object(config))
        .and_then(|_| records.iter().try_for_each(|r| sink.record(r)));
    if let Err(e) = written.and_then(|_| io::stdout().flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
