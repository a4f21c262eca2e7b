//! Markov-type tail bounds for vertex degrees of G(n, ρ/n) and seeded Monte
//! Carlo experiments that measure the corresponding frequencies.

mod bound;
pub mod rng;
pub mod sampler;
mod verdict;

pub use bound::{markov_bound, KStrategy, MarkovBound, TailBoundQuery};
pub use verdict::{theorem_verdict, Prediction, VerdictReport, VerdictRow};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambert::{restricted_exponent, solve_lambert, LambertKind, DEFAULT_TOL};

pub const MAX_N: u64 = 10_000_000;
pub const DEFAULT_BUDGET: f64 = 4e9;

/// `e^{ṽ}` for `ρ = χ̃·ln n`: the relative deviation above which the
/// single-vertex frequency vanishes. `u` solves `u(e^u − 1) = 1/χ̃`.
pub fn tail_threshold(chi_tilde: f64) -> Result<f64> {
    if !(chi_tilde > 0.0) || !chi_tilde.is_finite() {
        return Err(Error::domain(format!("chi must be positive, got {chi_tilde}")));
    }
    let u = solve_lambert(1.0 / chi_tilde, LambertKind::Modified, DEFAULT_TOL)?.u;
    Ok(restricted_exponent(u)?.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoRule {
    Fixed { rho: f64 },
    /// `ρ = χ̃·ln n`
    ChiLogN { chi: f64 },
    /// `ρ = χ_n·ln n` with `χ_n = coefficient·(ln n)^power`.
    ChiNLogN { coefficient: f64, power: f64 },
}

impl RhoRule {
    pub fn rho(&self, n: u64) -> f64 {
        let l = (n as f64).ln();
        match *self {
            RhoRule::Fixed { rho } => rho,
            RhoRule::ChiLogN { chi } => chi * l,
            RhoRule::ChiNLogN { coefficient, power } => coefficient * l.powf(power) * l,
        }
    }

    /// `χ` with `ρ = χ·ln n`.
    pub fn chi(&self, n: u64) -> f64 {
        self.rho(n) / (n as f64).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    SingleVertex,
    MaxDegree,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::SingleVertex => "single_vertex",
            Measure::MaxDegree => "max_degree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<u64>,
    pub rho_rule: RhoRule,
    pub trials: u64,
    pub seed: u64,
    /// Relative deviations `s̃`; a trial counts when `|D/ρ − 1| ≥ s̃`.
    pub thresholds: Vec<f64>,
    pub measure: Measure,
    /// Refuse runs whose estimated work exceeds this many units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values must not be empty".into()));
        }
        if self.thresholds.is_empty() {
            return Err(Error::Config("thresholds must not be empty".into()));
        }
        if self.trials == 0 || self.trials >= rng::MAX_TRIALS {
            return Err(Error::Config(format!("trials must lie in 1..{}", rng::MAX_TRIALS)));
        }
        for &s in &self.thresholds {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::Config(format!("threshold {s} must be a non-negative number")));
            }
        }
        for &n in &self.n_values {
            if !(2..=MAX_N).contains(&n) {
                return Err(Error::Config(format!("n={n} outside 2..={MAX_N}")));
            }
            let rho = self.rho_rule.rho(n);
            if !(rho > 0.0 && rho < n as f64) {
                return Err(Error::Config(format!("rho={rho} at n={n} must satisfy 0 < rho < n")));
            }
        }
        if let Some(b) = self.budget {
            if !(b > 0.0) {
                return Err(Error::Config("budget must be positive".into()));
            }
        }
        Ok(())
    }

    /// Work units: one per single-vertex draw, `n + nρ/2` per graph sample.
    pub fn work_estimate(&self) -> f64 {
        self.n_values
            .iter()
            .map(|&n| {
                let per_trial = match self.measure {
                    Measure::SingleVertex => 1.0,
                    Measure::MaxDegree => n as f64 * (1.0 + self.rho_rule.rho(n) / 2.0),
                };
                per_trial * self.trials as f64
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: u64,
    pub rho: f64,
    pub threshold: f64,
    pub trials: u64,
    /// Trials with `|D/ρ − 1| ≥ threshold`.
    pub count: u64,
    pub frequency: f64,
    /// `log10` of the Markov bound with `k = ⌊ln n⌋` (`None` when the shifted
    /// deviation is not positive).
    pub log10_bound: Option<f64>,
    pub k_used: Option<usize>,
}

impl ExperimentRow {
    pub fn bound(&self) -> Option<f64> {
        self.log10_bound.map(|l| 10f64.powf(l))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NSummary {
    pub n: u64,
    pub rho: f64,
    pub chi: f64,
    pub mean: f64,
    pub max: u64,
    /// 99th percentile of `√χ·|D − c|/ρ`, with `c = ρ(n − 1)/n` for a single
    /// vertex and `c = ρ` for the maximal degree.
    pub p99_scaled_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub measure: Measure,
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<NSummary>,
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentResult {
    pub fn row(&self, n: u64, threshold: f64) -> Option<&ExperimentRow> {
        self.rows.iter().find(|r| r.n == n && r.threshold == threshold)
    }

    pub fn summary(&self, n: u64) -> Option<&NSummary> {
        self.summaries.iter().find(|s| s.n == n)
    }
}

fn draw(measure: Measure, n: u64, rho: f64, seed: u64, n_index: usize, trials: u64) -> Result<Vec<u64>> {
    (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |scratch, t| {
            let mut rng = rng::trial_rng(seed, n_index, t);
            match measure {
                Measure::SingleVertex => sampler::single_vertex_degree(n, rho, &mut rng),
                Measure::MaxDegree => sampler::max_degree(n, rho, &mut rng, scratch),
            }
        })
        .collect()
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Runs the experiment on `threads` workers.
///
/// Each trial owns a generator derived from `(seed, n index, trial)`, so the
/// counts do not depend on `threads`.
pub fn sample_degree_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentResult> {
    cfg.validate()?;
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let estimate = cfg.work_estimate();
    if estimate > budget {
        return Err(Error::Budget { estimate, budget });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (n_index, &n) in cfg.n_values.iter().enumerate() {
        let rho = cfg.rho_rule.rho(n);
        let samples = pool.install(|| draw(cfg.measure, n, rho, cfg.seed, n_index, cfg.trials))?;
        for &s in &cfg.thresholds {
            let count = samples.iter().filter(|&&d| (d as f64 / rho - 1.0).abs() >= s).count() as u64;
            let query = TailBoundQuery::relative(n, rho, s, KStrategy::FloorLogN, cfg.measure == Measure::MaxDegree);
            let (log10_bound, k_used) = if query.s > 0.0 {
                let b = markov_bound(&query)?;
                (Some(b.bell_approx.log10_abs()), Some(b.k_used))
            } else {
                (None, None)
            };
            rows.push(ExperimentRow {
                n,
                rho,
                threshold: s,
                trials: cfg.trials,
                count,
                frequency: count as f64 / cfg.trials as f64,
                log10_bound,
                k_used,
            });
        }
        let chi = cfg.rho_rule.chi(n);
        let center = match cfg.measure {
            Measure::SingleVertex => rho * (n - 1) as f64 / n as f64,
            Measure::MaxDegree => rho,
        };
        let mut scaled: Vec<f64> = samples
            .iter()
            .map(|&d| chi.sqrt() * (d as f64 - center).abs() / rho)
            .collect();
        scaled.sort_by(f64::total_cmp);
        summaries.push(NSummary {
            n,
            rho,
            chi,
            mean: samples.iter().sum::<u64>() as f64 / samples.len() as f64,
            max: samples.iter().copied().max().unwrap_or(0),
            p99_scaled_deviation: percentile(&scaled, 0.99),
        });
    }
    Ok(ExperimentResult {
        seed: cfg.seed,
        measure: cfg.measure,
        rows,
        summaries,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
