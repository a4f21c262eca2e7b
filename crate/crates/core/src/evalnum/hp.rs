//! Thin adapter over `astro_float` so the rest of the crate never touches
//! rounding modes or constant caches.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};

use super::LogValue;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Binary floating-point value with a fixed working precision in bits.
#[derive(Clone, Debug)]
pub struct HpFloat {
    v: BigFloat,
    p: usize,
}

impl HpFloat {
    pub fn zero(p: usize) -> Self {
        Self::from_f64(0.0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_f64(1.0, p)
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        HpFloat {
            v: BigFloat::from_f64(x, p),
            p,
        }
    }

    pub fn from_u64(x: u64, p: usize) -> Self {
        HpFloat {
            v: BigFloat::from_u64(x, p),
            p,
        }
    }

    /// Exact conversion followed by rounding to `p` bits.
    pub fn from_bigint(x: &BigInt, p: usize) -> Self {
        let (sign, digits) = x.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(p);
        }
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let bits = 64 * digits.len();
        let mut v = BigFloat::from_words(&digits, s, bits as i32);
        v.set_precision(p.max(64), RM).ok();
        HpFloat { v, p }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    fn prec(&self, o: &HpFloat) -> usize {
        self.p.max(o.p)
    }

    pub fn add(&self, o: &HpFloat) -> HpFloat {
        let p = self.prec(o);
        HpFloat {
            v: self.v.add(&o.v, p, RM),
            p,
        }
    }

    pub fn sub(&self, o: &HpFloat) -> HpFloat {
        let p = self.prec(o);
        HpFloat {
            v: self.v.sub(&o.v, p, RM),
            p,
        }
    }

    pub fn mul(&self, o: &HpFloat) -> HpFloat {
        let p = self.prec(o);
        HpFloat {
            v: self.v.mul(&o.v, p, RM),
            p,
        }
    }

    pub fn div(&self, o: &HpFloat) -> HpFloat {
        let p = self.prec(o);
        HpFloat {
            v: self.v.div(&o.v, p, RM),
            p,
        }
    }

    pub fn abs(&self) -> HpFloat {
        HpFloat {
            v: self.v.abs(),
            p: self.p,
        }
    }

    pub fn powi(&self, n: usize) -> HpFloat {
        HpFloat {
            v: self.v.powi(n, self.p, RM),
            p: self.p,
        }
    }

    pub fn exp(&self) -> HpFloat {
        let v = CONSTS.with(|c| self.v.exp(self.p, RM, &mut c.borrow_mut()));
        HpFloat { v, p: self.p }
    }

    pub fn ln(&self) -> HpFloat {
        let v = CONSTS.with(|c| self.v.ln(self.p, RM, &mut c.borrow_mut()));
        HpFloat { v, p: self.p }
    }

    /// Sign and natural log of the magnitude, with the exponent folded in
    /// so values far outside the double range survive.
    pub fn to_log_value(&self) -> LogValue {
        if self.v.is_zero() {
            return LogValue::ZERO;
        }
        match self.v.as_raw_parts() {
            Some((words, _, sign, exp, _)) => {
                let top = *words.last().unwrap_or(&0);
                let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
                let frac = top as f64 + next as f64 / 18446744073709551616.0;
                let s = if sign == Sign::Neg { -frac } else { frac };
                LogValue::from_parts(s, i64::from(exp) - 64)
            }
            None => LogValue::new(1, f64::NAN),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_log_value().to_f64()
    }

    /// `log2 |self|`, or `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        self.to_log_value().log_abs() / std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip() {
        for v in [1i64, 5, -12, 1 << 40, i64::MAX] {
            let h = HpFloat::from_bigint(&BigInt::from(v), 128);
            assert_eq!(h.to_f64(), v as f64, "{v}");
        }
        let big = BigInt::from(7u32).pow(400);
        let h = HpFloat::from_bigint(&big, 256);
        let expected = 400.0 * 7f64.ln();
        assert!((h.to_log_value().log_abs() - expected).abs() < 1e-12);
    }

    #[test]
    fn arithmetic_and_transcendentals() {
        let p = 192;
        let a = HpFloat::from_f64(2.5, p);
        let b = HpFloat::from_f64(-0.75, p);
        assert_eq!(a.add(&b).to_f64(), 1.75);
        assert_eq!(a.mul(&b).to_f64(), -1.875);
        assert!((a.div(&b).to_f64() + 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.powi(3).to_f64(), 15.625);
        assert!((a.ln().to_f64() - 2.5f64.ln()).abs() < 1e-15);
        assert!((a.exp().to_f64() - 2.5f64.exp()).abs() < 1e-13);
        assert!(a.sub(&a).is_zero());
        assert!(b.is_negative());
    }

    #[test]
    fn beyond_double_range() {
        let h = HpFloat::from_f64(10.0, 128).powi(1000);
        let lv = h.to_log_value();
        assert!((lv.log_abs() - 1000.0 * 10f64.ln()).abs() < 1e-10);
    }
}
