//! The acceptance checks, runnable from tests, examples and `bellcord verify`.

use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;

use crate::asymptotics::{compare_exact_vs_asymptotic, Family, Formula};
use crate::error::Result;
use crate::evalnum::{
    centered_poisson_moment_series, eval_exact_poly, poisson_moment_series,
    DEFAULT_PRECISION_BITS,
};
use crate::lambert::{lambert_expansion, solve_lambert, LambertKind};
use crate::moments::poisson_limit_gap;
use crate::partitions::{
    bell_polynomial, egf_bell_family, enumerate_partitions_oracle, restricted_bell_polynomial, BlockFilter,
    StirlingTable, TableKind,
};
use crate::tailsim::{sample_degree_experiment, tail_threshold, ExperimentConfig, Measure, RhoRule};

pub const SEED_SINGLE_VERTEX: u64 = 0x5EED_0009;
pub const SEED_MAX_DEGREE: u64 = 0x5EED_000A;
pub const SEED_GROWING_CHI: u64 = 0x5EED_000B;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: f64,
    pub time_limit: Option<f64>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}  {}: {} [{:.2} s]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(
    id: u8,
    title: &'static str,
    time_limit: Option<f64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionOutcome {
    let start = Instant::now();
    let (mut passed, mut detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(limit) = time_limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; exceeded {limit} s"));
        }
    }
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        elapsed,
        time_limit,
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn criterion_1() -> CriterionOutcome {
    timed(1, "recurrences equal partition enumeration", Some(10.0), || {
        let mut checked = 0;
        for (kind, filter) in [
            (TableKind::Classical, BlockFilter::All),
            (TableKind::Restricted, BlockFilter::MinBlock2),
            (TableKind::EvenBlock, BlockFilter::EvenBlocks),
        ] {
            let table = StirlingTable::build(kind, 12)?;
            for k in 0..=12 {
                if table.polynomial(k) != enumerate_partitions_oracle(k, filter)? {
                    return Ok((false, format!("{kind:?} differs at k={k}")));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} polynomials identical")))
    })
}

pub fn criterion_2() -> CriterionOutcome {
    timed(2, "generating functions reproduce the polynomials", None, || {
        for (filter, kind) in [
            (BlockFilter::All, TableKind::Classical),
            (BlockFilter::MinBlock2, TableKind::Restricted),
            (BlockFilter::EvenBlocks, TableKind::EvenBlock),
        ] {
            let series = egf_bell_family(filter, 12);
            let table = StirlingTable::build(kind, 12)?;
            for (k, coeffs) in series.iter().enumerate() {
                let want: Vec<BigRational> = table
                    .polynomial(k)
                    .coeffs()
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect();
                if *coeffs != want {
                    return Ok((false, format!("{filter:?} differs at k={k}")));
                }
            }
        }
        Ok((true, "exact match for k <= 12 in all three families".into()))
    })
}

pub fn criterion_3() -> CriterionOutcome {
    timed(3, "Touchard recurrence", None, || {
        let table = StirlingTable::build(TableKind::Classical, 31)?;
        for k in 0..=30 {
            let b = table.polynomial(k);
            let rhs = (&b.derivative() + &b).shift_up();
            if table.polynomial(k + 1) != rhs {
                return Ok((false, format!("fails at k={k}")));
            }
        }
        Ok((true, "B_{k+1} = x(B_k' + B_k) for k <= 30".into()))
    })
}

pub fn criterion_4() -> CriterionOutcome {
    timed(4, "Dobinski series against exact evaluation", Some(5.0), || {
        let mut worst: f64 = 0.0;
        for k in 0..=20 {
            let b = bell_polynomial(k)?;
            let r = restricted_bell_polynomial(k)?;
            for x in [0.5, 1.0, 2.0, 5.0] {
                let (s, _) = poisson_moment_series(k, x, 1e-14)?;
                worst = worst.max(s.relative_diff(&eval_exact_poly(&b, x, DEFAULT_PRECISION_BITS)?));
                let (s, _) = centered_poisson_moment_series(k, x, 1e-14)?;
                let exact = eval_exact_poly(&r, x, DEFAULT_PRECISION_BITS)?;
                worst = worst.max(s.relative_diff(&exact));
            }
        }
        Ok((worst <= 1e-10, format!("max relative error {worst:.2e}")))
    })
}

fn bisect(beta: f64, kind: LambertKind) -> f64 {
    let (mut a, mut b) = (0.0, 1.0 + beta.ln_1p());
    for _ in 0..300 {
        let m = 0.5 * (a + b);
        if kind.lhs(m) < beta {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn criterion_5() -> CriterionOutcome {
    timed(5, "Lambert solvers and expansion", None, || {
        let mut worst_res: f64 = 0.0;
        let mut worst_root: f64 = 0.0;
        for kind in [LambertKind::Classical, LambertKind::Modified] {
            for i in 0..=180 {
                let beta = 10f64.powf(-6.0 + i as f64 * 0.1);
                let s = solve_lambert(beta, kind, 1e-12)?;
                worst_res = worst_res.max(s.residual.abs() / beta.max(1.0));
                worst_root = worst_root.max((s.u - bisect(beta, kind)).abs() / s.u.max(1.0));
            }
        }
        let mut ok = worst_res <= 1e-12 && worst_root <= 1e-9;
        let mut detail = format!("max scaled residual {worst_res:.1e}, max root error {worst_root:.1e}");
        for kind in [LambertKind::Classical, LambertKind::Modified] {
            let gaps: Vec<f64> = (2..=8)
                .map(|e| {
                    let beta = 10f64.powi(e);
                    Ok((bisect(beta, kind) - lambert_expansion(beta, kind)?).abs())
                })
                .collect::<Result<_>>()?;
            let last = gaps[gaps.len() - 1];
            ok &= strictly_decreasing(&gaps) && last <= 0.35;
            detail.push_str(&format!("; {} gaps {}", kind.name(), fmt_list(&gaps)));
        }
        Ok((ok, detail))
    })
}

pub fn criterion_6() -> CriterionOutcome {
    timed(6, "linear regime at chi = 1", Some(60.0), || {
        let mut ok = true;
        let mut detail = String::new();
        for (family, formula) in [
            (Family::Bell, Formula::BellLinear),
            (Family::Restricted, Formula::RestrictedLinear),
        ] {
            let gaps: Vec<f64> = [25usize, 50, 100, 200]
                .iter()
                .map(|&k| {
                    let c = compare_exact_vs_asymptotic(k, k as f64, family)?;
                    Ok(c.gap(formula).unwrap_or(f64::INFINITY))
                })
                .collect::<Result<_>>()?;
            ok &= strictly_decreasing(&gaps) && gaps[3] <= 0.02;
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(&format!("{} gaps {}", family.name(), fmt_list(&gaps)));
        }
        Ok((ok, detail))
    })
}

fn superlinear_gap(k: usize, x: f64) -> Result<f64> {
    let c = compare_exact_vs_asymptotic(k, x, Family::Restricted)?;
    Ok(c.gap(Formula::RestrictedSuperlinear).unwrap_or(f64::INFINITY))
}

pub fn criterion_7() -> CriterionOutcome {
    timed(7, "superlinear regime of the restricted family", None, || {
        let fixed: Vec<f64> = [256.0, 512.0]
            .iter()
            .map(|&x| superlinear_gap(64, x))
            .collect::<Result<_>>()?;
        let schedule: Vec<f64> = [64usize, 128, 256]
            .iter()
            .map(|&k| superlinear_gap(k, (k as f64).powf(1.25)))
            .collect::<Result<_>>()?;
        let ok = fixed.iter().chain(&schedule).all(|&g| g <= 0.1) && strictly_decreasing(&schedule);
        Ok((
            ok,
            format!("k=64 gaps {}; x=k^1.25 gaps {}", fmt_list(&fixed), fmt_list(&schedule)),
        ))
    })
}

pub fn criterion_8() -> CriterionOutcome {
    timed(8, "binomial moments approach Poisson moments", Some(10.0), || {
        let k = 6;
        let ns = [1u64 << 10, 1 << 12, 1 << 14, 1 << 16];
        let gaps: Vec<(f64, f64)> = ns.iter().map(|&n| poisson_limit_gap(n, 3.0, k)).collect::<Result<_>>()?;
        let raw: Vec<f64> = gaps.iter().map(|g| g.0).collect();
        let cen: Vec<f64> = gaps.iter().map(|g| g.1).collect();
        let limit = 2.0 * (k * k) as f64 / ns[3] as f64;
        let ok = strictly_decreasing(&raw) && strictly_decreasing(&cen) && raw[3] <= limit;
        Ok((ok, format!("raw {}, centred {}, limit {limit:.2e}", fmt_list(&raw), fmt_list(&cen))))
    })
}

/// Single vertex, `n = 10^5`, `ρ = 2 ln n`, three thresholds around `e^{ṽ}`.
pub fn criterion_9_config() -> Result<ExperimentConfig> {
    let t = tail_threshold(2.0)?;
    Ok(ExperimentConfig {
        n_values: vec![100_000],
        rho_rule: RhoRule::ChiLogN { chi: 2.0 },
        trials: 100_000,
        seed: SEED_SINGLE_VERTEX,
        thresholds: vec![1.1 * t, 1.5 * t, 2.0 * t],
        measure: Measure::SingleVertex,
        budget: None,
    })
}

pub fn criterion_9(threads: usize) -> CriterionOutcome {
    timed(9, "single-vertex frequencies against the Markov bound", Some(120.0), || {
        let cfg = criterion_9_config()?;
        let r = sample_degree_experiment(&cfg, threads)?;
        let trials = cfg.trials as f64;
        let mut ok = true;
        let mut freqs = Vec::new();
        let mut detail = Vec::new();
        for row in &r.rows {
            let bound = row.bound().unwrap_or(f64::INFINITY);
            if bound >= 10.0 / trials {
                ok &= row.frequency <= 3.0 * bound;
            }
            freqs.push(row.frequency);
            detail.push(format!("s={:.4}: {} hits, bound {:.3e}", row.threshold, row.count, bound));
        }
        ok &= strictly_decreasing(&freqs);
        Ok((ok, detail.join("; ")))
    })
}

pub fn criterion_10(threads: usize) -> CriterionOutcome {
    timed(10, "maximal-degree frequency along n", Some(600.0), || {
        let s = 1.5 * tail_threshold(2.0)?;
        let mut freqs = Vec::new();
        for (i, (n, trials)) in [(1_000u64, 400u64), (10_000, 200), (100_000, 100)].into_iter().enumerate() {
            let cfg = ExperimentConfig {
                n_values: vec![n],
                rho_rule: RhoRule::ChiLogN { chi: 2.0 },
                trials,
                seed: SEED_MAX_DEGREE + i as u64,
                thresholds: vec![s],
                measure: Measure::MaxDegree,
                budget: None,
            };
            let r = sample_degree_experiment(&cfg, threads)?;
            freqs.push(r.rows[0].frequency);
        }
        let ok = freqs.windows(2).all(|w| w[1] <= w[0]);
        Ok((ok, format!("s={s:.4}, frequencies {freqs:?} for n = 1e3, 1e4, 1e5")))
    })
}

pub fn criterion_11(threads: usize) -> CriterionOutcome {
    timed(11, "growing-chi regime", Some(180.0), || {
        let cfg = ExperimentConfig {
            n_values: vec![1_000, 10_000, 100_000],
            rho_rule: RhoRule::ChiNLogN {
                coefficient: 1.0,
                power: 1.0,
            },
            trials: 100_000,
            seed: SEED_GROWING_CHI,
            thresholds: vec![0.5],
            measure: Measure::SingleVertex,
            budget: None,
        };
        let r = sample_degree_experiment(&cfg, threads)?;
        let freqs: Vec<f64> = r.rows.iter().map(|row| row.frequency).collect();
        // strictly smaller while positive, then stays at zero
        let trend = freqs.windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
        let p99 = r.summary(100_000).map_or(f64::INFINITY, |s| s.p99_scaled_deviation);
        let limit = std::f64::consts::E + 1.0;
        Ok((
            trend && freqs[freqs.len() - 1] < freqs[0] && p99 <= limit,
            format!("frequencies {freqs:?}; p99 of scaled deviation {p99:.4} (limit {limit:.4})"),
        ))
    })
}

pub fn criterion_12() -> CriterionOutcome {
    timed(12, "counts independent of worker threads", None, || {
        let cfg = criterion_9_config()?;
        let counts: Vec<Vec<u64>> = [1usize, 4, 8]
            .iter()
            .map(|&t| Ok(sample_degree_experiment(&cfg, t)?.rows.iter().map(|r| r.count).collect()))
            .collect::<Result<_>>()?;
        let ok = counts.windows(2).all(|w| w[0] == w[1]);
        Ok((ok, format!("counts with 1/4/8 threads: {counts:?}")))
    })
}

/// Every criterion in order.
pub fn run_all(threads: usize) -> Vec<CriterionOutcome> {
    run_selected(&[], threads)
}

/// Runs the criteria selected by `ids` (all when empty).
pub fn run_selected(ids: &[u8], threads: usize) -> Vec<CriterionOutcome> {
    let pick = |id: u8| ids.is_empty() || ids.contains(&id);
    let mut out = Vec::new();
    let table: [(u8, &dyn Fn() -> CriterionOutcome); 12] = [
        (1, &criterion_1),
        (2, &criterion_2),
        (3, &criterion_3),
        (4, &criterion_4),
        (5, &criterion_5),
        (6, &criterion_6),
        (7, &criterion_7),
        (8, &criterion_8),
        (9, &|| criterion_9(threads)),
        (10, &|| criterion_10(threads)),
        (11, &|| criterion_11(threads)),
        (12, &criterion_12),
    ];
    for (id, f) in table {
        if pick(id) {
            out.push(f());
        }
    }
    out
}
