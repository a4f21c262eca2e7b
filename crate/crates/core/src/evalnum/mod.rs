//! Numeric evaluation of Bell-family quantities at real arguments.
//!
//! Three routes are available: high-precision Horner evaluation of an exact
//! polynomial, Dobinski-type Poisson moment series with a certified tail,
//! and log-domain evaluation that scales to very large `k`.

mod hp;
mod logvalue;

pub use hp::HpFloat;
pub use logvalue::LogValue;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{ExactPolynomial, DEFAULT_CAP};

pub const DEFAULT_PRECISION_BITS: usize = 256;

/// Largest index accepted by the moment series.
pub const SERIES_MAX_K: usize = 2000;

/// Largest index accepted by [`log_restricted_bell`] and [`log_bell`].
pub const LOG_MAX_K: usize = 100_000;

/// Hard limit on the number of series terms.
pub const SERIES_TERM_CAP: usize = 2_000_000;

const MAX_PRECISION_BITS: usize = 1 << 17;

/// How a series was cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTruncation {
    pub terms_used: usize,
    /// Upper bound on the omitted tail relative to the returned value.
    pub tail_bound: f64,
    pub requested_tol: f64,
}

/// Evaluates `p(x)` by Horner's rule in `precision_bits` of binary precision.
///
/// When cancellation would eat more than half the working precision the
/// value is recomputed exactly over the rationals, so the result is never
/// silently degraded.
pub fn eval_exact_poly(p: &ExactPolynomial, x: f64, precision_bits: usize) -> Result<LogValue> {
    Ok(eval_exact_poly_hp(p, x, precision_bits)?.to_log_value())
}

/// Same as [`eval_exact_poly`] but keeps the full-precision value.
pub fn eval_exact_poly_hp(p: &ExactPolynomial, x: f64, precision_bits: usize) -> Result<HpFloat> {
    if precision_bits < 64 {
        return Err(Error::domain(format!("precision_bits must be at least 64, got {precision_bits}")));
    }
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite, got {x}")));
    }
    let prec = precision_bits;
    if p.is_zero() {
        return Ok(HpFloat::zero(prec));
    }
    let hx = HpFloat::from_f64(x, prec);
    let ax = hx.abs();
    let mut acc = HpFloat::zero(prec);
    let mut acc_abs = HpFloat::zero(prec);
    for c in p.coeffs().iter().rev() {
        let hc = HpFloat::from_bigint(c, prec);
        acc = acc.mul(&hx).add(&hc);
        acc_abs = acc_abs.mul(&ax).add(&hc.abs());
    }
    let lost = if acc.is_zero() {
        f64::INFINITY
    } else {
        acc_abs.log2_abs() - acc.log2_abs()
    };
    if lost <= (prec / 2) as f64 - 2.0 {
        return Ok(acc);
    }
    let xr = BigRational::from_float(x).ok_or_else(|| Error::domain("x is not representable"))?;
    let exact = p.eval_rational(&xr);
    if exact.is_zero() {
        return Ok(HpFloat::zero(prec));
    }
    let num = HpFloat::from_bigint(exact.numer(), prec);
    let den = HpFloat::from_bigint(exact.denom(), prec);
    Ok(num.div(&den))
}

fn check_series_args(k: usize, x: f64, tol: f64) -> Result<()> {
    if k > SERIES_MAX_K {
        return Err(Error::Size {
            what: "moment series index",
            requested: k as u64,
            cap: SERIES_MAX_K as u64,
        });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be positive and finite, got {x}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!("tol must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

/// `B_k(x) = e^{-x} Σ_j j^k x^j / j!`, the k-th moment of Poisson(x).
pub fn poisson_moment_series(k: usize, x: f64, tol: f64) -> Result<(LogValue, SeriesTruncation)> {
    check_series_args(k, x, tol)?;
    moment_series(k, x, 0.0, tol)
}

/// `B̃_k(x) = e^{-x} Σ_j (j - x)^k x^j / j!`, the k-th central moment of Poisson(x).
pub fn centered_poisson_moment_series(
    k: usize,
    x: f64,
    tol: f64,
) -> Result<(LogValue, SeriesTruncation)> {
    check_series_args(k, x, tol)?;
    if k == 1 {
        return Ok((
            LogValue::ZERO,
            SeriesTruncation {
                terms_used: 0,
                tail_bound: 0.0,
                requested_tol: tol,
            },
        ));
    }
    moment_series(k, x, x, tol)
}

/// Sums `e^{-x} Σ_j (j - c)^k x^j / j!` with `c ∈ {0, x}`.
///
/// A fast pass carries each term as a [`LogValue`] and splits positive and
/// negative contributions. If the two streams cancel too much for double
/// precision to resolve the result, the same terms are resummed in high
/// precision with the working precision raised until the difference is
/// resolved.
fn moment_series(k: usize, x: f64, c: f64, tol: f64) -> Result<(LogValue, SeriesTruncation)> {
    let kf = k as f64;
    let lnx = x.ln();
    let mut lw = 0.0;
    let mut pos = LogValue::ZERO;
    let mut neg = LogValue::ZERO;
    let mut max_log = 0.0f64;
    let mut j = 0usize;
    let tail_rel;
    loop {
        if j >= SERIES_TERM_CAP {
            return Err(Error::Truncation {
                terms: j,
                tail_bound: f64::INFINITY,
            });
        }
        let jf = j as f64;
        if j > 0 {
            lw += lnx - jf.ln();
        }
        let d = jf - c;
        let term = if k == 0 {
            LogValue::from_ln(lw)
        } else if d == 0.0 {
            LogValue::ZERO
        } else {
            let s = if d < 0.0 && k % 2 == 1 { -1 } else { 1 };
            LogValue::new(s, kf * d.abs().ln() + lw)
        };
        if !term.is_zero() {
            max_log = max_log.max(term.log_abs().abs());
            if term.is_positive() {
                pos = pos + term;
            } else {
                neg = neg + term.abs();
            }
        }
        if d > 0.0 && !term.is_zero() {
            let ln_ratio = kf * (1.0 / d).ln_1p() + lnx - (jf + 1.0).ln();
            if ln_ratio < -std::f64::consts::LN_2 {
                let r = ln_ratio.exp();
                let tail = term * LogValue::from_f64(r / (1.0 - r));
                let current = pos - neg;
                if current.is_positive() {
                    let rel = (tail.log_abs() - current.log_abs()).exp();
                    if rel <= tol {
                        tail_rel = rel;
                        j += 1;
                        break;
                    }
                }
            }
        }
        j += 1;
    }
    let terms_used = j;
    let scale = LogValue::from_ln(-x);
    let trunc = SeriesTruncation {
        terms_used,
        tail_bound: tail_rel,
        requested_tol: tol,
    };
    if neg.is_zero() {
        return Ok((pos * scale, trunc));
    }
    let diff = pos - neg;
    let lost_bits = if diff.is_positive() {
        (pos.log_abs() - diff.log_abs()) / std::f64::consts::LN_2
    } else {
        f64::INFINITY
    };
    // per-term error of the log-domain pass is a few ulps of the log magnitude
    let fast_err = 8.0 * f64::EPSILON * max_log.max(1.0) * 2f64.powf(lost_bits.min(1e4));
    if diff.is_positive() && fast_err <= tol * 1e-2 {
        return Ok((diff * scale, trunc));
    }
    let want = (-tol.log2()).ceil() as usize + 32;
    let mut prec = (64 + want + lost_bits.min(1e5) as usize).max(128);
    while prec <= MAX_PRECISION_BITS {
        let (hpos, hneg) = hp_moment_streams(k, x, c, terms_used, prec);
        let hdiff = hpos.sub(&hneg);
        if !hdiff.is_zero() && !hdiff.is_negative() {
            let lost = hpos.log2_abs() - hdiff.log2_abs();
            if lost + (want as f64) < prec as f64 {
                return Ok((hdiff.to_log_value() * scale, trunc));
            }
        }
        prec *= 2;
    }
    Err(Error::Precision(format!(
        "moment series for k={k}, x={x} did not resolve within {MAX_PRECISION_BITS} bits"
    )))
}

fn hp_moment_streams(k: usize, x: f64, c: f64, terms: usize, prec: usize) -> (HpFloat, HpFloat) {
    let hx = HpFloat::from_f64(x, prec);
    let hc = HpFloat::from_f64(c, prec);
    let mut w = HpFloat::one(prec);
    let mut pos = HpFloat::zero(prec);
    let mut neg = HpFloat::zero(prec);
    for j in 0..terms {
        if j > 0 {
            w = w.mul(&hx).div(&HpFloat::from_u64(j as u64, prec));
        }
        let d = HpFloat::from_u64(j as u64, prec).sub(&hc);
        let t = d.powi(k).mul(&w);
        if t.is_negative() {
            neg = neg.add(&t.abs());
        } else {
            pos = pos.add(&t);
        }
    }
    (pos, neg)
}

fn check_log_args(k: usize, x: f64) -> Result<()> {
    if k > LOG_MAX_K {
        return Err(Error::Size {
            what: "log-domain index",
            requested: k as u64,
            cap: LOG_MAX_K as u64,
        });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

const LOG_SERIES_TOL: f64 = 1e-13;

/// `B̃_k(x)` as a [`LogValue`] for `k` up to 10^5.
///
/// Up to the table cap the restricted Stirling row is built in log-domain
/// arithmetic; beyond it the central moment series is used.
pub fn log_restricted_bell(k: usize, x: f64) -> Result<LogValue> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    check_log_args(k, x)?;
    if k == 1 {
        return Ok(LogValue::ZERO);
    }
    if k <= DEFAULT_CAP {
        return Ok(eval_log_row(&restricted_log_row(k), x));
    }
    log_series(k, x, x)
}

/// `B_k(x)` as a [`LogValue`] for `k` up to 10^5.
pub fn log_bell(k: usize, x: f64) -> Result<LogValue> {
    check_log_args(k, x)?;
    if k <= DEFAULT_CAP {
        return Ok(eval_log_row(&classical_log_row(k), x));
    }
    log_series(k, x, 0.0)
}

fn log_series(k: usize, x: f64, c: f64) -> Result<LogValue> {
    moment_series(k, x, c, LOG_SERIES_TOL).map(|(v, _)| v)
}

fn eval_log_row(row: &[LogValue], x: f64) -> LogValue {
    let lnx = x.ln();
    row.iter()
        .enumerate()
        .map(|(r, s)| *s * LogValue::from_ln(r as f64 * lnx))
        .sum()
}

fn scaled(v: LogValue, m: usize) -> LogValue {
    if m == 0 {
        LogValue::ZERO
    } else {
        v * LogValue::from_ln((m as f64).ln())
    }
}

fn restricted_log_row(k: usize) -> Vec<LogValue> {
    // rows k-1 and k of S̃(k, r) = r S̃(k-1, r) + (k-1) S̃(k-2, r-1)
    let mut prev = vec![LogValue::ONE];
    let mut cur = vec![LogValue::ZERO, LogValue::ZERO];
    for n in 1..k {
        let mut next = vec![LogValue::ZERO; n + 2];
        for (r, slot) in next.iter_mut().enumerate() {
            let a = cur.get(r).copied().map_or(LogValue::ZERO, |v| scaled(v, r));
            let b = if r >= 1 {
                prev.get(r - 1).copied().map_or(LogValue::ZERO, |v| scaled(v, n))
            } else {
                LogValue::ZERO
            };
            *slot = a + b;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn classical_log_row(k: usize) -> Vec<LogValue> {
    let mut row = vec![LogValue::ONE];
    for _ in 0..k {
        let mut next = vec![LogValue::ZERO; row.len() + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            let a = row.get(r).copied().map_or(LogValue::ZERO, |v| scaled(v, r));
            let b = if r >= 1 { row[r - 1] } else { LogValue::ZERO };
            *slot = a + b;
        }
        row = next;
    }
    row
}

/// Exact rational evaluation, converted to a [`LogValue`].
pub fn eval_rational_log(p: &ExactPolynomial, x: &BigRational) -> LogValue {
    let v = p.eval_rational(x);
    if v.is_zero() {
        return LogValue::ZERO;
    }
    LogValue::from_bigint(v.numer()) / LogValue::from_bigint(v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{bell_polynomial, restricted_bell_polynomial};
    use proptest::prelude::*;

    fn close(a: LogValue, b: f64, tol: f64) -> bool {
        a.relative_diff(&LogValue::from_f64(b)) <= tol
    }

    #[test]
    fn horner_examples() {
        let p = ExactPolynomial::from_i64s(&[0, 1, 3]);
        assert!(close(eval_exact_poly(&p, 2.0, 128).unwrap(), 14.0, 1e-15));
        let b4 = bell_polynomial(4).unwrap();
        assert!(close(eval_exact_poly(&b4, 1.0, 128).unwrap(), 15.0, 1e-15));
        let z = ExactPolynomial::zero();
        assert!(eval_exact_poly(&z, 7.0, 128).unwrap().is_zero());
        assert!(eval_exact_poly(&p, 2.0, 32).is_err());
    }

    #[test]
    fn cancellation_falls_back_to_exact() {
        // (x - 1)^6 near its root
        let p = ExactPolynomial::from_i64s(&[1, -6, 15, -20, 15, -6, 1]);
        let x = 1.0 + 2f64.powi(-20);
        let v = eval_exact_poly(&p, x, 64).unwrap();
        assert!(close(v, 2f64.powi(-120), 1e-14), "{v}");
        let root = eval_exact_poly(&p, 1.0, 64).unwrap();
        assert!(root.is_zero());
    }

    #[test]
    fn negative_argument() {
        let b3 = bell_polynomial(3).unwrap();
        // -2 + 12 - 8
        assert!(close(eval_exact_poly(&b3, -2.0, 128).unwrap(), 2.0, 1e-15));
    }

    #[test]
    fn series_examples() {
        let (v, t) = poisson_moment_series(2, 1.0, 1e-14).unwrap();
        assert!(close(v, 2.0, 1e-13));
        assert!(t.tail_bound <= t.requested_tol);
        assert!(close(poisson_moment_series(0, 5.0, 1e-14).unwrap().0, 1.0, 1e-13));
        assert!(close(poisson_moment_series(3, 2.0, 1e-14).unwrap().0, 22.0, 1e-13));
        assert!(close(centered_poisson_moment_series(2, 3.0, 1e-14).unwrap().0, 3.0, 1e-12));
        assert!(close(centered_poisson_moment_series(3, 3.0, 1e-14).unwrap().0, 3.0, 1e-12));
        assert!(close(centered_poisson_moment_series(4, 2.0, 1e-14).unwrap().0, 14.0, 1e-12));
        assert!(centered_poisson_moment_series(1, 4.0, 1e-14).unwrap().0.is_zero());
    }

    #[test]
    fn series_argument_checks() {
        assert!(matches!(poisson_moment_series(2001, 1.0, 1e-10), Err(Error::Size { .. })));
        assert!(poisson_moment_series(2, 0.0, 1e-10).is_err());
        assert!(poisson_moment_series(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn cross_path_agreement() {
        for k in 0..=20 {
            let b = bell_polynomial(k).unwrap();
            let r = restricted_bell_polynomial(k).unwrap();
            for x in [0.5, 1.0, 2.0, 5.0] {
                let exact = eval_exact_poly(&b, x, DEFAULT_PRECISION_BITS).unwrap();
                let (series, _) = poisson_moment_series(k, x, 1e-14).unwrap();
                assert!(series.relative_diff(&exact) <= 1e-10, "bell k={k} x={x}");
                let exact = eval_exact_poly(&r, x, DEFAULT_PRECISION_BITS).unwrap();
                let (series, _) = centered_poisson_moment_series(k, x, 1e-14).unwrap();
                if exact.is_zero() {
                    assert!(series.is_zero(), "k={k}");
                } else {
                    assert!(series.relative_diff(&exact) <= 1e-10, "restricted k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn strong_cancellation_resolved() {
        // odd central moment with large x: streams nearly cancel
        let k = 15;
        let x = 400.0;
        let r = restricted_bell_polynomial(k).unwrap();
        let exact = eval_exact_poly(&r, x, DEFAULT_PRECISION_BITS).unwrap();
        let (series, _) = centered_poisson_moment_series(k, x, 1e-12).unwrap();
        assert!(series.relative_diff(&exact) <= 1e-10, "{series} vs {exact}");
    }

    #[test]
    fn log_restricted_examples() {
        assert!((log_restricted_bell(4, 1.0).unwrap().log_abs() - 4f64.ln()).abs() < 1e-14);
        assert!((log_restricted_bell(2, 10.0).unwrap().log_abs() - 10f64.ln()).abs() < 1e-14);
        let p = restricted_bell_polynomial(40).unwrap();
        let exact = eval_exact_poly(&p, 5.0, DEFAULT_PRECISION_BITS).unwrap();
        let lv = log_restricted_bell(40, 5.0).unwrap();
        assert!(((lv.log_abs() - exact.log_abs()) / exact.log_abs()).abs() <= 1e-9);
        assert!(log_restricted_bell(0, 1.0).is_err());
        assert!(log_restricted_bell(100_001, 1.0).is_err());
    }

    #[test]
    fn table_and_series_paths_meet() {
        // both backends valid at the cap boundary
        for x in [0.7, 3.0, 40.0] {
            let k = DEFAULT_CAP;
            let table = eval_log_row(&restricted_log_row(k), x);
            let series = log_series(k, x, x).unwrap();
            let rel = ((table.log_abs() - series.log_abs()) / table.log_abs()).abs();
            assert!(rel <= 1e-9, "x={x}: {table} vs {series}");
            let table = eval_log_row(&classical_log_row(k), x);
            let series = log_series(k, x, 0.0).unwrap();
            let rel = ((table.log_abs() - series.log_abs()) / table.log_abs()).abs();
            assert!(rel <= 1e-9, "x={x}");
        }
    }

    #[test]
    fn large_k_series() {
        let v = log_restricted_bell(20_000, 5.0).unwrap();
        assert!(v.is_positive() && v.log_abs().is_finite());
        let lower = log_restricted_bell(19_998, 5.0).unwrap();
        assert!(v.log_abs() > lower.log_abs());
    }

    #[test]
    fn log_bell_matches_table() {
        let b = bell_polynomial(60).unwrap();
        for x in [0.3, 2.0, 9.0] {
            let exact = eval_exact_poly(&b, x, DEFAULT_PRECISION_BITS).unwrap();
            let lv = log_bell(60, x).unwrap();
            assert!(lv.relative_diff(&exact) < 1e-12);
        }
    }

    #[test]
    fn even_moments_lyapunov() {
        for x in [1.0, 2.0, 5.0] {
            for k in 1..=10usize {
                let a = log_restricted_bell(2 * k, x).unwrap();
                let b = log_restricted_bell(2 * k + 2, x).unwrap();
                assert!(a.is_positive());
                let kf = k as f64;
                assert!(b.log_abs() >= a.log_abs() * (kf + 1.0) / kf - 1e-12, "k={k} x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn centered_series_positive(k in 2usize..40, x in 0.05f64..50.0) {
            let (v, t) = centered_poisson_moment_series(k, x, 1e-12).unwrap();
            prop_assert!(v.is_positive());
            prop_assert!(t.tail_bound <= 1e-12);
        }
    }
}
