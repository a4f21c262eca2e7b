//! Command-line front end. Every subcommand prints one table, as CSV (with a
//! header) or as a JSON array of records with the same fields.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::asymptotics::{compare_exact_vs_asymptotic, Family};
use crate::error::{Error, Result};
use crate::evalnum::{
    centered_poisson_moment_series, eval_exact_poly, log_bell, log_restricted_bell, poisson_moment_series,
    LogValue, DEFAULT_PRECISION_BITS,
};
use crate::lambert::{lambert_expansion, solve_lambert, LambertKind, DEFAULT_TOL};
use crate::moments::{exact_binomial_moment, pmf_ratio_check, poisson_limit_gap_with, BernoulliSumSpec, SummandCount};
use crate::partitions::{
    bell_polynomial, even_block_bell_polynomial, restricted_bell_polynomial, EvenExponent, ExactPolynomial,
    StirlingTable, TableKind,
};
use crate::tailsim::{
    markov_bound, sample_degree_experiment, tail_threshold, theorem_verdict, ExperimentConfig, KStrategy,
    TailBoundQuery,
};
use crate::verify;

pub const THREADS_ENV: &str = "BELLCORD_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bellcord", version, about = "Bell-family polynomials, Lambert roots and degree tail experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyFamily {
    Bell,
    Restricted,
    EvenBlock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AsymFamily {
    Bell,
    Restricted,
}

impl From<AsymFamily> for Family {
    fn from(f: AsymFamily) -> Family {
        match f {
            AsymFamily::Bell => Family::Bell,
            AsymFamily::Restricted => Family::Restricted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Classical,
    Modified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalMethod {
    /// Horner on the exact polynomial.
    Exact,
    /// Dobinski-type Poisson moment series.
    Series,
    /// Log-domain recurrence or series, for large k.
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Count {
    N,
    #[value(name = "n-1")]
    NMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MomentsMode {
    /// Exact moment of the Bernoulli sum.
    Moment,
    /// Relative distance of raw and centred moments from the Poisson limits.
    Gap,
    /// Binomial/Poisson pmf ratios for j = 0..=k.
    Pmf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SimulateView {
    /// One record per (n, threshold).
    Rows,
    /// One record per n.
    Summary,
    /// Rows paired with the theorems' predictions.
    Verdict,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangular table of partition counts.
    #[command(after_help = "CSV columns: k,r,count")]
    Table {
        #[arg(long, value_enum, default_value_t = PolyFamily::Bell)]
        kind: PolyFamily,
        #[arg(long)]
        max_k: usize,
    },
    /// Coefficients of one polynomial.
    #[command(after_help = "CSV columns: k,c0,c1,...  (coefficient of x^j in column cj)")]
    Poly {
        #[arg(long, value_enum)]
        family: PolyFamily,
        #[arg(long)]
        k: usize,
        /// Even-block family only: use x^{2·#blocks} instead of x^{#blocks}.
        #[arg(long)]
        doubled_exponent: bool,
    },
    /// Value of a polynomial at real x.
    #[command(after_help = "CSV columns: family,k,x,method,value,ln_abs,log10_abs,terms,tail_bound\nvalue is empty when it lies outside the f64 range.")]
    Eval {
        #[arg(long, value_enum)]
        family: AsymFamily,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value_t = EvalMethod::Exact)]
        method: EvalMethod,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: usize,
        /// Relative tolerance for the series method.
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Positive root of u·e^u = β or u·(e^u − 1) = β.
    #[command(after_help = "CSV columns: beta,kind,u,residual,iterations,expansion")]
    Lambert {
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Kind::Classical)]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Exact per-k log value against every asymptotic formula of a family.
    #[command(after_help = "CSV columns: k,x,family,regime,chi,exact_log_per_k,formula,estimate,gap,in_regime")]
    Asymptotics {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum)]
        family: AsymFamily,
    },
    /// Moments of sums of Bernoulli(ρ/n) variables.
    #[command(after_help = "CSV columns:\n  moment: n,rho,k,centered,count,value,ln_abs\n  gap:    n,rho,k,count,raw_gap,centered_gap\n  pmf:    n,rho,j,ratio")]
    Moments {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = MomentsMode::Moment)]
        mode: MomentsMode,
        #[arg(long)]
        centered: bool,
        #[arg(long, value_enum, default_value_t = Count::N)]
        count: Count,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: usize,
    },
    /// Markov bound for the centred degree.
    #[command(after_help = "CSV columns: n,rho,s,k_used,log10_bound,log10_finite_n")]
    Bound(BoundArgs),
    /// Seeded Monte Carlo run described by a JSON configuration.
    #[command(after_help = "CSV columns:\n  rows:    n,rho,threshold,trials,count,frequency,log10_bound,k_used\n  summary: n,rho,chi,mean,max,p99_scaled_deviation\n  verdict: n,threshold,frequency,log10_bound,prediction,bound_respected\nWorker threads: BELLCORD_THREADS (default: all cores).")]
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = SimulateView::Rows)]
        view: SimulateView,
        /// Append the wall time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Run the acceptance criteria; exits nonzero if any fails.
    #[command(after_help = "CSV columns: id,title,passed,elapsed,detail")]
    Verify {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    n: u64,
    /// ρ directly.
    #[arg(long, conflicts_with = "rho_chi", required_unless_present = "rho_chi")]
    rho: Option<f64>,
    /// ρ = χ̃·ln n.
    #[arg(long)]
    rho_chi: Option<f64>,
    /// Absolute deviation s.
    #[arg(long, conflicts_with_all = ["s_rel", "s_mult"])]
    s: Option<f64>,
    /// Relative deviation s̃ (s = s̃ρ − ρ/n).
    #[arg(long, conflicts_with = "s_mult")]
    s_rel: Option<f64>,
    /// s̃ as a multiple of e^{ṽ}; needs --rho-chi.
    #[arg(long, requires = "rho_chi")]
    s_mult: Option<f64>,
    /// floor-log-n, optimize, optimize:K, K or K*M.
    #[arg(long, default_value = "floor-log-n")]
    k: String,
    /// Multiply by n to cover the maximal degree.
    #[arg(long)]
    union: bool,
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell)).map_err(io)?;
                }
                w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                        Value::Object(map)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&records)
                    .map_err(|e| Error::Config(format!("json: {e}")))?;
                s.push('\n');
                Ok(s.into_bytes())
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn int<T: Into<u64>>(x: T) -> Value {
    Value::from(x.into())
}

fn big(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

fn text(s: &str) -> Value {
    Value::String(s.to_string())
}

fn log_cells(v: &LogValue) -> [Value; 3] {
    [num(v.to_f64()), num(v.log_abs()), num(v.log10_abs())]
}

fn polynomial(family: PolyFamily, k: usize, doubled: bool) -> Result<ExactPolynomial> {
    match family {
        PolyFamily::Bell => bell_polynomial(k),
        PolyFamily::Restricted => restricted_bell_polynomial(k),
        PolyFamily::EvenBlock => {
            let e = if doubled { EvenExponent::Doubled } else { EvenExponent::BlockCount };
            even_block_bell_polynomial(k, e)
        }
    }
}

fn table_kind(f: PolyFamily) -> TableKind {
    match f {
        PolyFamily::Bell => TableKind::Classical,
        PolyFamily::Restricted => TableKind::Restricted,
        PolyFamily::EvenBlock => TableKind::EvenBlock,
    }
}

fn lambert_kind(k: Kind) -> LambertKind {
    match k {
        Kind::Classical => LambertKind::Classical,
        Kind::Modified => LambertKind::Modified,
    }
}

fn summand_count(c: Count) -> SummandCount {
    match c {
        Count::N => SummandCount::N,
        Count::NMinusOne => SummandCount::NMinusOne,
    }
}

/// Worker count from `BELLCORD_THREADS`, defaulting to all cores.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn command_table(cmd: Command) -> Result<(Table, bool)> {
    let mut ok = true;
    let table = match cmd {
        Command::Table { kind, max_k } => {
            let t = StirlingTable::build(table_kind(kind), max_k)?;
            let mut out = Table::new(&["k", "r", "count"]);
            for k in 0..=max_k {
                for (r, v) in t.row(k).iter().enumerate() {
                    out.push(vec![int(k as u64), int(r as u64), big(&BigInt::from(v.clone()))]);
                }
            }
            out
        }
        Command::Poly {
            family,
            k,
            doubled_exponent,
        } => {
            if doubled_exponent && family != PolyFamily::EvenBlock {
                return Err(Error::domain("--doubled-exponent applies to the even-block family only"));
            }
            let p = polynomial(family, k, doubled_exponent)?;
            let len = (k + 1).max(p.coeffs().len());
            let mut cols = vec!["k".to_string()];
            cols.extend((0..len).map(|j| format!("c{j}")));
            let mut row = vec![int(k as u64)];
            row.extend(p.padded(len).iter().map(big));
            Table {
                columns: cols,
                rows: vec![row],
            }
        }
        Command::Eval {
            family,
            k,
            x,
            method,
            precision_bits,
            tol,
        } => {
            let mut out = Table::new(&[
                "family", "k", "x", "method", "value", "ln_abs", "log10_abs", "terms", "tail_bound",
            ]);
            let fam: Family = family.into();
            let (v, terms, tail) = match method {
                EvalMethod::Exact => {
                    let p = match fam {
                        Family::Bell => bell_polynomial(k)?,
                        Family::Restricted => restricted_bell_polynomial(k)?,
                    };
                    (eval_exact_poly(&p, x, precision_bits)?, None, None)
                }
                EvalMethod::Series => {
                    let (v, t) = match fam {
                        Family::Bell => poisson_moment_series(k, x, tol)?,
                        Family::Restricted => centered_poisson_moment_series(k, x, tol)?,
                    };
                    (v, Some(t.terms_used), Some(t.tail_bound))
                }
                EvalMethod::Log => {
                    let v = match fam {
                        Family::Bell => log_bell(k, x)?,
                        Family::Restricted => log_restricted_bell(k, x)?,
                    };
                    (v, None, None)
                }
            };
            let name = match method {
                EvalMethod::Exact => "exact",
                EvalMethod::Series => "series",
                EvalMethod::Log => "log",
            };
            let [a, b, c] = log_cells(&v);
            out.push(vec![
                text(fam.name()),
                int(k as u64),
                num(x),
                text(name),
                a,
                b,
                c,
                terms.map_or(Value::Null, |t| int(t as u64)),
                opt_num(tail),
            ]);
            out
        }
        Command::Lambert { beta, kind, tol } => {
            let kind = lambert_kind(kind);
            let s = solve_lambert(beta, kind, tol)?;
            let mut out = Table::new(&["beta", "kind", "u", "residual", "iterations", "expansion"]);
            out.push(vec![
                num(beta),
                text(kind.name()),
                num(s.u),
                num(s.residual),
                int(s.iterations as u64),
                opt_num(lambert_expansion(beta, kind).ok()),
            ]);
            out
        }
        Command::Asymptotics { k, x, family } => {
            let c = compare_exact_vs_asymptotic(k, x, family.into())?;
            let mut out = Table::new(&[
                "k",
                "x",
                "family",
                "regime",
                "chi",
                "exact_log_per_k",
                "formula",
                "estimate",
                "gap",
                "in_regime",
            ]);
            for r in &c.rows {
                out.push(vec![
                    int(k as u64),
                    num(x),
                    text(c.family.name()),
                    text(c.regime.regime.name()),
                    num(c.regime.chi),
                    num(c.exact_log_per_k),
                    text(r.formula.id()),
                    num(r.estimate),
                    num(r.gap),
                    Value::Bool(r.in_regime),
                ]);
            }
            out
        }
        Command::Moments {
            n,
            rho,
            k,
            mode,
            centered,
            count,
            precision_bits,
        } => {
            let count = summand_count(count);
            let count_name = match count {
                SummandCount::N => "n",
                SummandCount::NMinusOne => "n-1",
            };
            match mode {
                MomentsMode::Moment => {
                    let spec = BernoulliSumSpec::new(n, rho, centered, count)?;
                    let v = exact_binomial_moment(&spec, k, precision_bits)?;
                    let mut out = Table::new(&["n", "rho", "k", "centered", "count", "value", "ln_abs"]);
                    out.push(vec![
                        int(n),
                        num(rho),
                        int(k as u64),
                        Value::Bool(centered),
                        text(count_name),
                        num(v.to_f64()),
                        num(v.log_abs()),
                    ]);
                    out
                }
                MomentsMode::Gap => {
                    let (raw, cen) = poisson_limit_gap_with(n, rho, k, count)?;
                    let mut out = Table::new(&["n", "rho", "k", "count", "raw_gap", "centered_gap"]);
                    out.push(vec![int(n), num(rho), int(k as u64), text(count_name), num(raw), num(cen)]);
                    out
                }
                MomentsMode::Pmf => {
                    let r = pmf_ratio_check(n, rho, k)?;
                    let mut out = Table::new(&["n", "rho", "j", "ratio"]);
                    for (j, ratio) in r.ratios.iter().enumerate() {
                        out.push(vec![int(n), num(rho), int(j as u64), num(*ratio)]);
                    }
                    out
                }
            }
        }
        Command::Bound(a) => {
            let rho = match (a.rho, a.rho_chi) {
                (Some(r), _) => r,
                (None, Some(chi)) => chi * (a.n as f64).ln(),
                (None, None) => return Err(Error::domain("one of --rho or --rho-chi is required")),
            };
            let strategy: KStrategy = a.k.parse()?;
            let query = match (a.s, a.s_rel, a.s_mult) {
                (Some(s), _, _) => TailBoundQuery {
                    n: a.n,
                    rho,
                    s,
                    k_strategy: strategy,
                    union_bound: a.union,
                },
                (None, Some(rel), _) => TailBoundQuery::relative(a.n, rho, rel, strategy, a.union),
                (None, None, Some(mult)) => {
                    let chi = a.rho_chi.ok_or_else(|| Error::domain("--s-mult needs --rho-chi"))?;
                    TailBoundQuery::relative(a.n, rho, mult * tail_threshold(chi)?, strategy, a.union)
                }
                (None, None, None) => return Err(Error::domain("one of --s, --s-rel or --s-mult is required")),
            };
            let b = markov_bound(&query)?;
            let mut out = Table::new(&["n", "rho", "s", "k_used", "log10_bound", "log10_finite_n"]);
            out.push(vec![
                int(a.n),
                num(rho),
                num(query.s),
                int(b.k_used as u64),
                num(b.bell_approx.log10_abs()),
                opt_num(b.finite_n.map(|v| v.log10_abs())),
            ]);
            out
        }
        Command::Simulate {
            config,
            seed,
            view,
            timing,
        } => {
            let text_cfg = std::fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text_cfg)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let threads = threads_from_env()?;
            let r = sample_degree_experiment(&cfg, threads)?;
            let mut out = match view {
                SimulateView::Rows => {
                    let mut out = Table::new(&[
                        "n",
                        "rho",
                        "threshold",
                        "trials",
                        "count",
                        "frequency",
                        "log10_bound",
                        "k_used",
                    ]);
                    for row in &r.rows {
                        out.push(vec![
                            int(row.n),
                            num(row.rho),
                            num(row.threshold),
                            int(row.trials),
                            int(row.count),
                            num(row.frequency),
                            opt_num(row.log10_bound),
                            row.k_used.map_or(Value::Null, |k| int(k as u64)),
                        ]);
                    }
                    out
                }
                SimulateView::Summary => {
                    let mut out = Table::new(&["n", "rho", "chi", "mean", "max", "p99_scaled_deviation"]);
                    for s in &r.summaries {
                        out.push(vec![
                            int(s.n),
                            num(s.rho),
                            num(s.chi),
                            num(s.mean),
                            int(s.max),
                            num(s.p99_scaled_deviation),
                        ]);
                    }
                    out
                }
                SimulateView::Verdict => {
                    let v = theorem_verdict(&cfg, &r)?;
                    let mut out = Table::new(&[
                        "n",
                        "threshold",
                        "frequency",
                        "log10_bound",
                        "prediction",
                        "bound_respected",
                    ]);
                    for row in &v.rows {
                        let p = match row.prediction {
                            crate::tailsim::Prediction::VanishingFrequency => "vanishing_frequency",
                            crate::tailsim::Prediction::OutsideScope => "outside_scope",
                        };
                        out.push(vec![
                            int(row.n),
                            num(row.threshold),
                            num(row.frequency),
                            opt_num(row.log10_bound),
                            text(p),
                            Value::Bool(row.bound_respected),
                        ]);
                    }
                    out
                }
            };
            if timing {
                out.columns.push("wall_time".into());
                for row in &mut out.rows {
                    row.push(num(r.wall_time));
                }
            }
            out
        }
        Command::Verify { criteria } => {
            let threads = threads_from_env()?;
            let outcomes = verify::run_selected(&criteria, threads);
            let mut out = Table::new(&["id", "title", "passed", "elapsed", "detail"]);
            for o in &outcomes {
                ok &= o.passed;
                out.push(vec![
                    int(o.id),
                    text(o.title),
                    Value::Bool(o.passed),
                    num(o.elapsed),
                    text(&o.detail),
                ]);
            }
            out
        }
    };
    Ok((table, ok))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Size { .. } | Error::Config(_) | Error::Budget { .. } => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status: 0 on success, 2 for usage or precondition errors, 1 for
/// computation errors and failed verification.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let reason = first.trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {reason}");
            let _ = write!(err, "{rendered}");
            return 2;
        }
    };
    let format = cli.format;
    let target = cli.out.clone();
    let result = command_table(cli.command).and_then(|(table, ok)| Ok((table.render(format)?, ok)));
    match result {
        Ok((bytes, ok)) => {
            let written = match &target {
                Some(path) => std::fs::write(path, &bytes)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(&bytes).map_err(|e| format!("cannot write output: {e}")),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: io: {msg}");
                return 1;
            }
            if ok {
                0
            } else {
                let _ = writeln!(err, "error: verify: at least one criterion failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.kind(), e);
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["bellcord".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn poly_row() {
        let (code, out, _) = call(&["poly", "--family", "restricted", "--k", "6"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("6,0,1,25,15,0,0,0"));
        assert!(out.starts_with("k,c0,"));
    }

    #[test]
    fn lambert_at_e() {
        let (code, out, _) = call(&["lambert", "--beta", "2.718281828459045", "--kind", "classical"]);
        assert_eq!(code, 0);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        let u: f64 = row[2].parse().unwrap();
        assert!((u - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bound_uses_floor_log_n() {
        let (code, out, _) = call(&["bound", "--n", "100000", "--rho-chi", "2", "--s-rel", "1.5", "--k", "floor-log-n"]);
        assert_eq!(code, 0, "{out}");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').nth(3), Some("11"));
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.lines().next().unwrap().starts_with("error: usage:"));
        let (code, _, _) = call(&["poly", "--family", "bell", "--k", "3", "--bogus"]);
        assert_eq!(code, 2);
        let (code, _, err) = call(&["poly", "--family", "even-block", "--k", "3"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: domain:"));
        let (code, _, err) = call(&["table", "--max-k", "100000"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: size:"));
        let (code, _, _) = call(&["lambert", "--beta", "-1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["simulate", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("CSV columns"));
    }

    #[test]
    fn json_mirrors_csv() {
        let (_, out, _) = call(&["--format", "json", "poly", "--family", "bell", "--k", "3"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["c2"], Value::from(3));
        assert_eq!(v[0]["k"], Value::from(3));
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let (_, out, _) = call(&["poly", "--family", "bell", "--k", "40"]);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        // S(40, 20) does not fit in 64 bits
        let s = bell_polynomial(40).unwrap().coeff(20).to_string();
        assert_eq!(row[21], s);
    }

    #[test]
    fn eval_methods_agree() {
        let mut vals = Vec::new();
        for m in ["exact", "series", "log"] {
            let (code, out, err) = call(&["eval", "--family", "restricted", "--k", "10", "--x", "2.5", "--method", m]);
            assert_eq!(code, 0, "{err}");
            let row: Vec<String> = out.lines().nth(1).unwrap().split(',').map(String::from).collect();
            vals.push(row[5].parse::<f64>().unwrap());
        }
        assert!((vals[0] - vals[1]).abs() < 1e-10 && (vals[0] - vals[2]).abs() < 1e-10);
    }

    #[test]
    fn asymptotics_rows() {
        let (code, out, _) = call(&["asymptotics", "--k", "100", "--x", "100", "--family", "bell"]);
        assert_eq!(code, 0);
        assert!(out.contains("bell-linear"));
        assert!(out.lines().count() >= 4);
    }

    #[test]
    fn moments_modes() {
        let (code, out, _) = call(&["moments", "--n", "10", "--rho", "2", "--k", "2", "--centered"]);
        assert_eq!(code, 0);
        let v: f64 = out.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
        assert!((v - 1.6).abs() < 1e-14);
        let (code, out, _) = call(&["moments", "--n", "1000", "--rho", "2", "--k", "2", "--mode", "gap"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
        let (code, out, _) = call(&["moments", "--n", "10000", "--rho", "2", "--k", "5", "--mode", "pmf"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 7);
    }
}
