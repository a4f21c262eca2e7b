use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalnum::{log_restricted_bell, LogValue, DEFAULT_PRECISION_BITS};
use crate::moments::{exact_binomial_moment, BernoulliSumSpec, SummandCount, MAX_MOMENT_K};

/// How the moment order `2k` of the Markov bound is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KStrategy {
    /// `k = ⌊ln n⌋`
    FloorLogN,
    /// Minimum over `k = 1..=max_k`; `max_k` defaults to `4⌊ln n⌋`.
    Optimize { max_k: Option<usize> },
    /// Moment order `2·multiplier·k`.
    Fixed { k: usize, multiplier: usize },
}

impl KStrategy {
    fn candidates(&self, n: u64) -> Result<Vec<usize>> {
        let floor_ln = ((n as f64).ln().floor() as usize).max(1);
        match *self {
            KStrategy::FloorLogN => Ok(vec![floor_ln]),
            KStrategy::Optimize { max_k } => {
                let top = max_k.unwrap_or(4 * floor_ln);
                if top == 0 {
                    return Err(Error::domain("max_k must be positive"));
                }
                Ok((1..=top).collect())
            }
            KStrategy::Fixed { k, multiplier } => {
                if k == 0 || multiplier == 0 {
                    return Err(Error::domain("fixed k and multiplier must be positive"));
                }
                Ok(vec![k * multiplier])
            }
        }
    }
}

impl std::str::FromStr for KStrategy {
    type Err = Error;

    /// `floor-log-n`, `optimize`, `optimize:K`, `K` or `K*M`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("unknown k strategy '{s}'"));
        match s {
            "floor-log-n" => Ok(KStrategy::FloorLogN),
            "optimize" => Ok(KStrategy::Optimize { max_k: None }),
            _ => {
                if let Some(rest) = s.strip_prefix("optimize:") {
                    let max_k = rest.parse().map_err(|_| bad())?;
                    return Ok(KStrategy::Optimize { max_k: Some(max_k) });
                }
                let (k, m) = match s.split_once('*') {
                    Some((k, m)) => (k, m),
                    None => (s, "1"),
                };
                Ok(KStrategy::Fixed {
                    k: k.parse().map_err(|_| bad())?,
                    multiplier: m.parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBoundQuery {
    pub n: u64,
    pub rho: f64,
    /// Absolute deviation threshold.
    pub s: f64,
    pub k_strategy: KStrategy,
    /// Multiply by `n` to cover the maximum over all vertices.
    pub union_bound: bool,
}

impl TailBoundQuery {
    /// Query for the event `|D/ρ − 1| ≥ s_rel`, shifted by the gap between
    /// `ρ` and the centre `ρ(n − 1)/n` so the bound covers it rigorously.
    pub fn relative(n: u64, rho: f64, s_rel: f64, k_strategy: KStrategy, union_bound: bool) -> Self {
        TailBoundQuery {
            n,
            rho,
            s: s_rel * rho - rho / n as f64,
            k_strategy,
            union_bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarkovBound {
    /// `s^{-2k}·B̃_{2k}(ρ)`, times `n` under the union bound.
    pub bell_approx: LogValue,
    /// `k` of the minimising moment order `2k`.
    pub k_used: usize,
    /// The same bound with the exact central moment of Binomial(n − 1, ρ/n),
    /// when `2k` is small enough to compute it.
    pub finite_n: Option<LogValue>,
}

/// Markov inequality for the centred degree with the Poisson-limit moment.
pub fn markov_bound(q: &TailBoundQuery) -> Result<MarkovBound> {
    if q.n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    if !(q.rho > 0.0 && q.rho < q.n as f64) {
        return Err(Error::domain(format!("rho must satisfy 0 < rho < n, got {}", q.rho)));
    }
    if !(q.s > 0.0) || !q.s.is_finite() {
        return Err(Error::domain(format!("s must be positive, got {}", q.s)));
    }
    let ln_s = q.s.ln();
    let mut best: Option<(LogValue, usize)> = None;
    for k in q.k_strategy.candidates(q.n)? {
        let moment = log_restricted_bell(2 * k, q.rho)?;
        let value = moment * LogValue::from_ln(-2.0 * k as f64 * ln_s);
        if best.is_none_or(|(b, _)| value.total_cmp(&b).is_lt()) {
            best = Some((value, k));
        }
    }
    let (mut value, k_used) = best.expect("at least one candidate k");
    let union = LogValue::from_ln((q.n as f64).ln());
    if q.union_bound {
        value = value * union;
    }
    let finite_n = if 2 * k_used <= MAX_MOMENT_K {
        let spec = BernoulliSumSpec::new(q.n, q.rho, true, SummandCount::NMinusOne)?;
        let m = exact_binomial_moment(&spec, 2 * k_used, DEFAULT_PRECISION_BITS)?;
        let mut v = m * LogValue::from_ln(-2.0 * k_used as f64 * ln_s);
        if q.union_bound {
            v = v * union;
        }
        Some(v)
    } else {
        None
    };
    Ok(MarkovBound {
        bell_approx: value,
        k_used,
        finite_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::{restricted_exponent, solve_lambert, LambertKind, DEFAULT_TOL};
    use crate::partitions::restricted_bell_polynomial;
    use crate::evalnum::eval_exact_poly;

    #[test]
    fn chebyshev_case() {
        for s in [2.0, 10.0, 1e3] {
            let q = TailBoundQuery {
                n: 1000,
                rho: 1.0,
                s,
                k_strategy: KStrategy::Fixed { k: 1, multiplier: 1 },
                union_bound: false,
            };
            let b = markov_bound(&q).unwrap();
            assert!(b.bell_approx.relative_diff(&LogValue::from_f64(1.0 / (s * s))) < 1e-13);
            assert_eq!(b.k_used, 1);
        }
    }

    #[test]
    fn floor_log_n_instance() {
        let n = 100_000u64;
        let rho = 2.0 * (n as f64).ln();
        let u = solve_lambert(0.5, LambertKind::Modified, DEFAULT_TOL).unwrap().u;
        let s_rel = 1.5 * restricted_exponent(u).unwrap().exp();
        let q = TailBoundQuery::relative(n, rho, s_rel, KStrategy::FloorLogN, false);
        let b = markov_bound(&q).unwrap();
        assert_eq!(b.k_used, 11);
        assert!(b.bell_approx.to_f64() < 1.0);
        let direct = eval_exact_poly(&restricted_bell_polynomial(22).unwrap(), rho, 256).unwrap()
            * LogValue::from_f64(q.s).powi(-22);
        assert!(b.bell_approx.relative_diff(&direct) < 1e-12);
        let fin = b.finite_n.unwrap();
        assert!(fin.relative_diff(&b.bell_approx) < 0.05);
        let bigger = markov_bound(&TailBoundQuery::relative(10 * n, 2.0 * (10.0 * n as f64).ln(), s_rel, KStrategy::FloorLogN, false)).unwrap();
        assert!(bigger.bell_approx.total_cmp(&b.bell_approx).is_lt());
    }

    #[test]
    fn optimize_never_worse() {
        let n = 50_000u64;
        let rho = 30.0;
        for s_rel in [0.4, 0.8, 1.5] {
            let a = markov_bound(&TailBoundQuery::relative(n, rho, s_rel, KStrategy::FloorLogN, false)).unwrap();
            let b = markov_bound(&TailBoundQuery::relative(n, rho, s_rel, KStrategy::Optimize { max_k: None }, false)).unwrap();
            assert!(!b.bell_approx.total_cmp(&a.bell_approx).is_gt());
        }
    }

    #[test]
    fn union_adds_ln_n() {
        let n = 10_000u64;
        let base = TailBoundQuery::relative(n, 12.0, 0.7, KStrategy::FloorLogN, false);
        let union = TailBoundQuery { union_bound: true, ..base };
        let a = markov_bound(&base).unwrap();
        let b = markov_bound(&union).unwrap();
        let d = b.bell_approx.log_abs() - a.bell_approx.log_abs();
        assert!((d - (n as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("floor-log-n".parse::<KStrategy>().unwrap(), KStrategy::FloorLogN);
        assert_eq!("optimize:9".parse::<KStrategy>().unwrap(), KStrategy::Optimize { max_k: Some(9) });
        assert_eq!("5*2".parse::<KStrategy>().unwrap(), KStrategy::Fixed { k: 5, multiplier: 2 });
        assert_eq!("5".parse::<KStrategy>().unwrap(), KStrategy::Fixed { k: 5, multiplier: 1 });
        assert!("fast".parse::<KStrategy>().is_err());
    }

    #[test]
    fn rejects_bad_queries() {
        let q = TailBoundQuery::relative(1000, 5.0, 0.5, KStrategy::FloorLogN, false);
        assert!(markov_bound(&TailBoundQuery { s: -1.0, ..q }).is_err());
        assert!(markov_bound(&TailBoundQuery { rho: 2000.0, ..q }).is_err());
        assert!(markov_bound(&TailBoundQuery { k_strategy: KStrategy::Fixed { k: 0, multiplier: 1 }, ..q }).is_err());
    }
}
