use serde::Serialize;

use super::{tail_threshold, ExperimentConfig, ExperimentResult, Measure, RhoRule};
use crate::error::{Error, Result};

/// What the limit theorems say about a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    /// The frequency tends to zero as `n` grows.
    VanishingFrequency,
    /// The theorems are silent for this threshold or ρ schedule.
    OutsideScope,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRow {
    pub n: u64,
    pub threshold: f64,
    pub frequency: f64,
    pub log10_bound: Option<f64>,
    pub prediction: Prediction,
    /// `frequency ≤ bound` (always true without a bound).
    pub bound_respected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub measure: Measure,
    /// `e^{ṽ}` for a `χ̃·ln n` schedule.
    pub threshold_scale: Option<f64>,
    pub rows: Vec<VerdictRow>,
    /// Per threshold: whether the frequency is non-increasing along `n`.
    pub trend_decreasing: Vec<(f64, bool)>,
    /// For growing `χ_n`: the largest 99th percentile of `√χ·|D − c|/ρ`
    /// next to its limiting bound (`e` for one vertex, `1` for the maximum).
    pub scaled_deviation: Option<(f64, f64)>,
}

/// Pairs each measured frequency with its bound and the theorems' prediction.
/// The report is descriptive; it never asserts a limit.
pub fn theorem_verdict(cfg: &ExperimentConfig, results: &ExperimentResult) -> Result<VerdictReport> {
    if cfg.measure != results.measure || cfg.seed != results.seed {
        return Err(Error::Config("results were not produced by this configuration".into()));
    }
    let threshold_scale = match cfg.rho_rule {
        RhoRule::ChiLogN { chi } => Some(tail_threshold(chi)?),
        _ => None,
    };
    let mut rows = Vec::new();
    let mut trend_decreasing = Vec::new();
    for &s in &cfg.thresholds {
        let mut prev: Option<f64> = None;
        let mut decreasing = true;
        for &n in &cfg.n_values {
            let row = results
                .row(n, s)
                .ok_or_else(|| Error::Config(format!("no result row for n={n}, threshold={s}")))?;
            let prediction = match cfg.rho_rule {
                RhoRule::ChiLogN { .. } if s > threshold_scale.unwrap_or(f64::INFINITY) => {
                    Prediction::VanishingFrequency
                }
                RhoRule::ChiNLogN { .. } if s > 0.0 => Prediction::VanishingFrequency,
                _ => Prediction::OutsideScope,
            };
            let bound_respected = row.bound().is_none_or(|b| row.frequency <= b);
            if let Some(p) = prev {
                decreasing &= row.frequency <= p;
            }
            prev = Some(row.frequency);
            rows.push(VerdictRow {
                n,
                threshold: s,
                frequency: row.frequency,
                log10_bound: row.log10_bound,
                prediction,
                bound_respected,
            });
        }
        trend_decreasing.push((s, decreasing));
    }
    let scaled_deviation = match cfg.rho_rule {
        RhoRule::ChiNLogN { .. } => {
            let worst = results
                .summaries
                .iter()
                .map(|s| s.p99_scaled_deviation)
                .fold(0.0, f64::max);
            let limit = match cfg.measure {
                Measure::SingleVertex => std::f64::consts::E,
                Measure::MaxDegree => 1.0,
            };
            Some((worst, limit))
        }
        _ => None,
    };
    Ok(VerdictReport {
        measure: cfg.measure,
        threshold_scale,
        rows,
        trend_decreasing,
        scaled_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tailsim::sample_degree_experiment;

    fn cfg(thresholds: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            n_values: vec![1000, 10_000],
            rho_rule: RhoRule::ChiLogN { chi: 2.0 },
            trials: 2000,
            seed: 3,
            thresholds,
            measure: Measure::SingleVertex,
            budget: None,
        }
    }

    #[test]
    fn scope_follows_threshold() {
        let t = tail_threshold(2.0).unwrap();
        let c = cfg(vec![0.5 * t, 1.2 * t]);
        let r = sample_degree_experiment(&c, 2).unwrap();
        let v = theorem_verdict(&c, &r).unwrap();
        assert_eq!(v.rows[0].prediction, Prediction::OutsideScope);
        assert_eq!(v.rows[2].prediction, Prediction::VanishingFrequency);
        assert!(v.scaled_deviation.is_none());
    }

    #[test]
    fn zero_frequency_respects_bound() {
        let c = cfg(vec![5.0]);
        let r = sample_degree_experiment(&c, 2).unwrap();
        let v = theorem_verdict(&c, &r).unwrap();
        assert!(v.rows.iter().all(|row| row.frequency == 0.0 && row.bound_respected));
        assert!(v.trend_decreasing[0].1);
    }

    #[test]
    fn mismatch_rejected() {
        let c = cfg(vec![0.5]);
        let r = sample_degree_experiment(&c, 1).unwrap();
        let other = ExperimentConfig { seed: 4, ..c.clone() };
        assert!(theorem_verdict(&other, &r).is_err());
        let other = ExperimentConfig { thresholds: vec![0.6], ..c };
        assert!(theorem_verdict(&other, &r).is_err());
    }
}
