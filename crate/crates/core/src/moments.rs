//! Exact moments of sums of independent Bernoulli(ρ/n) variables and their
//! Poisson limits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalnum::{eval_exact_poly, HpFloat, LogValue, DEFAULT_PRECISION_BITS};
use crate::partitions::{bell_polynomial, restricted_bell_polynomial};

pub const MAX_MOMENT_K: usize = 500;
pub const MAX_SUMMANDS: u64 = 10_000_000;

/// Number of Bernoulli summands: `n` for a generic sum, `n − 1` for the
/// degree of a fixed vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandCount {
    #[default]
    N,
    NMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BernoulliSumSpec {
    n: u64,
    rho: f64,
    centered: bool,
    count: SummandCount,
}

impl BernoulliSumSpec {
    pub fn new(n: u64, rho: f64, centered: bool, count: SummandCount) -> Result<Self> {
        if n == 0 || n > MAX_SUMMANDS {
            return Err(Error::domain(format!("n must lie in 1..={MAX_SUMMANDS}, got {n}")));
        }
        if !(rho > 0.0 && rho < n as f64) {
            return Err(Error::domain(format!("rho must satisfy 0 < rho < n, got {rho}")));
        }
        Ok(BernoulliSumSpec {
            n,
            rho,
            centered,
            count,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    pub fn count(&self) -> SummandCount {
        self.count
    }

    /// Number of summands `m`.
    pub fn summands(&self) -> u64 {
        match self.count {
            SummandCount::N => self.n,
            SummandCount::NMinusOne => self.n - 1,
        }
    }

    pub fn p(&self) -> f64 {
        self.rho / self.n as f64
    }

    /// The centre `c`: `m·p` when centred, `0` otherwise.
    pub fn center(&self) -> f64 {
        if self.centered {
            self.summands() as f64 * self.p()
        } else {
            0.0
        }
    }
}

/// `E(S − c)^k` for `S ~ Binomial(m, ρ/n)`, by summing the pmf.
///
/// The pmf is generated by its ratio recurrence in `precision_bits` of
/// binary precision. Past the centre the summands decay with decreasing
/// ratios, so summation stops once a geometric bound on the remainder is
/// below `2^{-precision_bits/4}` of the partial sum.
pub fn exact_binomial_moment(spec: &BernoulliSumSpec, k: usize, precision_bits: usize) -> Result<LogValue> {
    if k > MAX_MOMENT_K {
        return Err(Error::Size {
            what: "moment order",
            requested: k as u64,
            cap: MAX_MOMENT_K as u64,
        });
    }
    if precision_bits < 64 {
        return Err(Error::domain(format!("precision_bits must be at least 64, got {precision_bits}")));
    }
    let prec = precision_bits;
    let m = spec.summands();
    if spec.centered && k == 1 {
        return Ok(LogValue::ZERO);
    }
    if m == 0 {
        return Ok(if k == 0 { LogValue::ONE } else { LogValue::ZERO });
    }
    let hn = HpFloat::from_u64(spec.n, prec);
    let hrho = HpFloat::from_f64(spec.rho, prec);
    let hp = hrho.div(&hn);
    let hq = HpFloat::one(prec).sub(&hp);
    let odds = hp.div(&hq);
    let hm = HpFloat::from_u64(m, prec);
    let hc = if spec.centered {
        hm.mul(&hp)
    } else {
        HpFloat::zero(prec)
    };
    let c = spec.center();
    let p = spec.p();
    let ln_odds = p.ln() - (-p).ln_1p();
    let tol_log2 = -((prec / 4) as f64) - 4.0;
    let kf = k as f64;

    let mut w = hq.powi(m as usize);
    let mut pos = HpFloat::zero(prec);
    let mut neg = HpFloat::zero(prec);
    let mut j: u64 = 0;
    loop {
        let d = HpFloat::from_u64(j, prec).sub(&hc);
        let t = if k == 0 { w.clone() } else { d.powi(k).mul(&w) };
        if t.is_negative() {
            neg = neg.add(&t.abs());
        } else {
            pos = pos.add(&t);
        }
        if j == m {
            break;
        }
        let jf = j as f64;
        let dj = jf - c;
        if dj > 0.0 && !t.is_zero() {
            let ln_ratio = kf * (1.0 / dj).ln_1p() + ((m - j) as f64 / (jf + 1.0)).ln() + ln_odds;
            if ln_ratio < -std::f64::consts::LN_2 {
                let r = ln_ratio.exp();
                let tail_log2 = t.log2_abs() + (r / (1.0 - r)).log2() + 1.0;
                let sum = pos.sub(&neg);
                if !sum.is_zero() && !sum.is_negative() && tail_log2 - sum.log2_abs() <= tol_log2 {
                    break;
                }
            }
        }
        w = w
            .mul(&HpFloat::from_u64(m - j, prec))
            .div(&HpFloat::from_u64(j + 1, prec))
            .mul(&odds);
        j += 1;
    }
    let total = pos.sub(&neg);
    if total.is_zero() {
        return Ok(LogValue::ZERO);
    }
    let lost = pos.log2_abs().max(neg.log2_abs()) - total.log2_abs();
    if lost > (3 * prec / 4) as f64 - 8.0 {
        return Err(Error::Precision(format!(
            "cancellation of {lost:.0} bits in binomial moment k={k}, n={}, rho={}",
            spec.n, spec.rho
        )));
    }
    Ok(total.to_log_value())
}

/// Relative distance of the raw and centred moments from their Poisson
/// limits: `(|M_k/B_k(ρ) − 1|, |M̃_k/B̃_k(ρ) − 1|)`.
pub fn poisson_limit_gap(n: u64, rho: f64, k: usize) -> Result<(f64, f64)> {
    poisson_limit_gap_with(n, rho, k, SummandCount::N)
}

pub fn poisson_limit_gap_with(n: u64, rho: f64, k: usize, count: SummandCount) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let nf = n as f64;
    let kf = k as f64;
    if !(kf * kf < nf && kf * rho < nf) {
        return Err(Error::domain(format!(
            "need k^2 < n and k*rho < n, got n={n}, rho={rho}, k={k}"
        )));
    }
    let prec = DEFAULT_PRECISION_BITS;
    let raw = exact_binomial_moment(&BernoulliSumSpec::new(n, rho, false, count)?, k, prec)?;
    let cen = exact_binomial_moment(&BernoulliSumSpec::new(n, rho, true, count)?, k, prec)?;
    let b = eval_exact_poly(&bell_polynomial(k)?, rho, prec)?;
    let bt = eval_exact_poly(&restricted_bell_polynomial(k)?, rho, prec)?;
    Ok((relative_gap(raw, b), relative_gap(cen, bt)))
}

fn relative_gap(a: LogValue, b: LogValue) -> f64 {
    if b.is_zero() {
        if a.is_zero() {
            0.0
        } else {
            a.abs().to_f64()
        }
    } else {
        ((a / b).to_f64() - 1.0).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PmfRatioReport {
    pub n: u64,
    pub rho: f64,
    /// `P(X = j) / P(Poisson(ρ) = j)` for `j = 0..=k_max`.
    pub ratios: Vec<f64>,
    pub max_deviation: f64,
}

/// Compares the Binomial(n, ρ/n) pmf with the Poisson(ρ) pmf pointwise.
pub fn pmf_ratio_check(n: u64, rho: f64, k_max: usize) -> Result<PmfRatioReport> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if !(rho > 0.0 && rho <= n as f64) {
        return Err(Error::domain(format!("rho must satisfy 0 < rho <= n, got {rho}")));
    }
    if (k_max as f64) > (n as f64).sqrt() {
        return Err(Error::domain(format!("k_max must not exceed sqrt(n), got {k_max}")));
    }
    let prec = 160;
    let hp = HpFloat::from_f64(rho, prec).div(&HpFloat::from_u64(n, prec));
    let hq = HpFloat::one(prec).sub(&hp);
    let hrho = HpFloat::from_f64(rho, prec);
    let mut binom = hq.powi(n as usize);
    let mut poisson = HpFloat::from_f64(-rho, prec).exp();
    let mut ratios = Vec::with_capacity(k_max + 1);
    for j in 0..=k_max as u64 {
        ratios.push(binom.div(&poisson).to_f64());
        let next = HpFloat::from_u64(j + 1, prec);
        binom = binom.mul(&HpFloat::from_u64(n - j, prec)).mul(&hp).div(&next);
        if !hq.is_zero() {
            binom = binom.div(&hq);
        }
        poisson = poisson.mul(&hrho).div(&next);
    }
    let max_deviation = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    Ok(PmfRatioReport {
        n,
        rho,
        ratios,
        max_deviation,
    })
}

/// `Q_m(p) = E(a − p)^m / p` for `a ~ Bernoulli(p)`, i.e.
/// `(1 − p)^m − (1 − p)(−p)^{m−1}`.
pub fn centered_bernoulli_q(m: u32, p: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    let q = 1.0 - p;
    Ok(q.powi(m as i32) - q * (-p).powi(m as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn rational_moment(n: u64, rho: i64, k: u32, centered: bool, count: SummandCount) -> BigRational {
        let m = match count {
            SummandCount::N => n,
            SummandCount::NMinusOne => n - 1,
        };
        let p = BigRational::new(BigInt::from(rho), BigInt::from(n));
        let q = BigRational::one() - &p;
        let c = if centered {
            BigRational::from_integer(BigInt::from(m)) * &p
        } else {
            BigRational::zero()
        };
        let mut total = BigRational::zero();
        let mut binom = BigInt::one();
        for j in 0..=m {
            if j > 0 {
                binom = binom * BigInt::from(m - j + 1) / BigInt::from(j);
            }
            let d = BigRational::from_integer(BigInt::from(j)) - &c;
            let mut term = BigRational::from_integer(binom.clone());
            term *= num_traits::pow(p.clone(), j as usize);
            term *= num_traits::pow(q.clone(), (m - j) as usize);
            term *= num_traits::pow(d, k as usize);
            total += term;
        }
        total
    }

    fn rational_log(v: &BigRational) -> LogValue {
        if v.is_zero() {
            LogValue::ZERO
        } else {
            LogValue::from_bigint(v.numer()) / LogValue::from_bigint(v.denom())
        }
    }

    #[test]
    fn closed_forms() {
        let raw = BernoulliSumSpec::new(10, 2.0, false, SummandCount::N).unwrap();
        let v = exact_binomial_moment(&raw, 1, 128).unwrap();
        assert!((v.to_f64() - 2.0).abs() < 1e-15);
        let cen = BernoulliSumSpec::new(10, 2.0, true, SummandCount::N).unwrap();
        let v = exact_binomial_moment(&cen, 2, 128).unwrap();
        assert!((v.to_f64() - 1.6).abs() < 1e-15);
        assert!(exact_binomial_moment(&cen, 1, 128).unwrap().is_zero());
    }

    #[test]
    fn spec_validation() {
        assert!(BernoulliSumSpec::new(0, 1.0, false, SummandCount::N).is_err());
        assert!(BernoulliSumSpec::new(10, 10.0, false, SummandCount::N).is_err());
        assert!(BernoulliSumSpec::new(10, 0.0, false, SummandCount::N).is_err());
        let s = BernoulliSumSpec::new(10, 1.0, false, SummandCount::N).unwrap();
        assert!(exact_binomial_moment(&s, 501, 128).is_err());
        assert!(exact_binomial_moment(&s, 2, 32).is_err());
    }

    #[test]
    fn matches_rational_oracle() {
        for n in [5u64, 17, 60] {
            for rho in [1i64, 3] {
                for count in [SummandCount::N, SummandCount::NMinusOne] {
                    for centered in [false, true] {
                        let spec = BernoulliSumSpec::new(n, rho as f64, centered, count).unwrap();
                        for k in 0..=8u32 {
                            let got = exact_binomial_moment(&spec, k as usize, DEFAULT_PRECISION_BITS).unwrap_or_else(|e| panic!("n={n} rho={rho} k={k} {centered} {count:?}: {e}"));
                            let want = rational_log(&rational_moment(n, rho, k, centered, count));
                            if want.is_zero() {
                                assert!(got.is_zero() || got.abs().to_f64() < 1e-40);
                            } else {
                                assert!(got.relative_diff(&want) < 1e-15, "n={n} rho={rho} k={k} {centered} {count:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hundred_summands_oracle() {
        let spec = BernoulliSumSpec::new(100, 3.0, true, SummandCount::N).unwrap();
        let got = exact_binomial_moment(&spec, 4, DEFAULT_PRECISION_BITS).unwrap();
        let want = rational_log(&rational_moment(100, 3, 4, true, SummandCount::N));
        assert!(got.relative_diff(&want) < 1e-15);
    }

    #[test]
    fn third_central_moment() {
        for (n, rho) in [(50u64, 3.0), (1000, 7.5), (100_000, 2.0)] {
            let spec = BernoulliSumSpec::new(n, rho, true, SummandCount::N).unwrap();
            let got = exact_binomial_moment(&spec, 3, DEFAULT_PRECISION_BITS).unwrap().to_f64();
            let p = rho / n as f64;
            let want = rho * (1.0 - p) * (1.0 - 2.0 * p);
            assert!((got / want - 1.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn gap_examples() {
        let (raw, _) = poisson_limit_gap(10_000, 3.0, 1).unwrap();
        assert!(raw < 1e-15);
        let (_, cen) = poisson_limit_gap(1000, 2.0, 2).unwrap();
        assert!((cen - 0.002).abs() < 1e-12);
        assert!(poisson_limit_gap(30, 3.0, 6).is_err());
    }

    #[test]
    fn gaps_shrink_with_n() {
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for n in [100u64, 1000, 10_000] {
            let g = poisson_limit_gap(n, 3.0, 6).unwrap();
            assert!(g.0 < prev.0 && g.1 < prev.1, "n={n}");
            prev = g;
        }
    }

    #[test]
    fn raw_gap_halves() {
        let mut prev = None;
        for e in 10..=16 {
            let (raw, _) = poisson_limit_gap(1u64 << e, 3.0, 6).unwrap();
            if let Some(p) = prev {
                let ratio = raw / p;
                assert!((0.35..=0.65).contains(&ratio), "2^{e}: {ratio}");
            }
            prev = Some(raw);
        }
    }

    #[test]
    fn pmf_ratios() {
        let r = pmf_ratio_check(1_000_000, 2.0, 10).unwrap();
        assert_eq!(r.ratios.len(), 11);
        assert!(r.max_deviation < 1e-4);
        let n = 500u64;
        let rho = 4.0;
        let r = pmf_ratio_check(n, rho, 0).unwrap();
        let closed = (1.0 - rho / n as f64).powi(n as i32) * rho.exp();
        assert!((r.ratios[0] - closed).abs() < 1e-12);
        let far = pmf_ratio_check(10, 10.0, 3).unwrap();
        assert!(far.max_deviation > 0.5);
        assert!(pmf_ratio_check(100, 1.0, 11).is_err());
    }

    #[test]
    fn q_m_matches_definition() {
        for p in [0.001, 0.01, 0.1] {
            for m in 1..=20u32 {
                let q = centered_bernoulli_q(m, p).unwrap();
                let direct = (p * (1.0 - p).powi(m as i32) + (1.0 - p) * (-p).powi(m as i32)) / p;
                assert!((q - direct).abs() < 1e-14);
                assert!(q <= (1.0 + 2.0 * p).powi(m as i32));
            }
        }
        assert!((centered_bernoulli_q(2, 0.3).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(centered_bernoulli_q(1, 0.3).unwrap(), 0.0);
    }
}
