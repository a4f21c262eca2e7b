use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{Signed, ToPrimitive, Zero};

const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// A real number `sign · exp(log_abs)` with a range far beyond `f64`.
///
/// Internally the magnitude is a binary mantissa in `[1, 2)` and a 64-bit
/// exponent, so conversion from a double is exact and products lose at most
/// an ulp. Zero is exact (`sign == 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    sign: i8,
    mant: f64,
    exp: i64,
}

fn split(m: f64) -> (f64, i64) {
    // m positive and finite
    let (m, bias) = if m < f64::MIN_POSITIVE {
        (m * 2f64.powi(64), -64)
    } else {
        (m, 0)
    };
    let bits = m.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mant = f64::from_bits((bits & ((1u64 << 52) - 1)) | (1023u64 << 52));
    (mant, e + bias)
}

fn ldexp(m: f64, e: i64) -> f64 {
    let e = e.clamp(-2200, 2200) as i32;
    let h = e / 2;
    m * 2f64.powi(h) * 2f64.powi(e - h)
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        mant: 0.0,
        exp: 0,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        mant: 1.0,
        exp: 0,
    };

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn one() -> Self {
        Self::ONE
    }

    fn build(sign: i8, m: f64, e: i64) -> Self {
        if sign == 0 || m == 0.0 {
            return Self::ZERO;
        }
        if !m.is_finite() {
            return LogValue {
                sign: sign.signum(),
                mant: m.abs(),
                exp: 0,
            };
        }
        let (mant, de) = split(m.abs());
        LogValue {
            sign: sign.signum(),
            mant,
            exp: e.saturating_add(de),
        }
    }

    /// `sign · exp(log_abs)`; a zero sign or `log_abs = -inf` gives zero.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if !log_abs.is_finite() {
            return Self::build(sign, log_abs.exp(), 0);
        }
        let e = (log_abs / std::f64::consts::LN_2).floor();
        let r = (log_abs - e * LN2_HI) - e * LN2_LO;
        Self::build(sign, r.exp(), e as i64)
    }

    /// Positive value with the given natural log.
    pub fn from_ln(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    /// `m · 2^e` without rounding.
    pub fn from_parts(m: f64, e: i64) -> Self {
        let sign = if m > 0.0 {
            1
        } else if m < 0.0 {
            -1
        } else {
            0
        };
        Self::build(sign, m, e)
    }

    pub fn from_f64(v: f64) -> Self {
        Self::from_parts(v, 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        if v.is_zero() {
            return Self::ZERO;
        }
        let sign = if v.sign() == BigSign::Minus { -1.0 } else { 1.0 };
        let mag = v.abs();
        let bits = mag.bits();
        if bits <= 64 {
            return Self::from_parts(sign * mag.to_f64().unwrap_or(0.0), 0);
        }
        let shift = bits - 64;
        let top: BigInt = &mag >> shift;
        Self::from_parts(sign * top.to_f64().unwrap_or(0.0), shift as i64)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the absolute value (`-inf` for zero).
    pub fn log_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.mant.ln() + self.exp as f64 * std::f64::consts::LN_2
        }
    }

    /// Binary exponent and mantissa in `[1, 2)`.
    pub fn parts(&self) -> (f64, i64) {
        (f64::from(self.sign) * self.mant, self.exp)
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_abs() / std::f64::consts::LN_10
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.is_finite()
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * ldexp(self.mant, self.exp)
        }
    }

    pub fn abs(&self) -> Self {
        LogValue {
            sign: self.sign.abs(),
            ..*self
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let mut base = if n < 0 { Self::ONE / *self } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// `|self|^y` through the logarithm.
    pub fn powf(&self, y: f64) -> Self {
        if y == 0.0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self::from_ln(y * self.log_abs())
    }

    /// `|self/other − 1|`; infinite when exactly one side is zero or the
    /// signs differ.
    pub fn relative_diff(&self, other: &LogValue) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (a, b) if a == b => ((*self / *other).to_f64() - 1.0).abs(),
            _ => f64::INFINITY,
        }
    }

    /// Orders by value.
    pub fn total_cmp(&self, other: &LogValue) -> Ordering {
        let mag = |a: &LogValue, b: &LogValue| a.exp.cmp(&b.exp).then(a.mant.total_cmp(&b.mant));
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => mag(self, other),
                _ => mag(other, self),
            },
            o => o,
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.total_cmp_abs(&rhs) == Ordering::Less {
            (rhs, self)
        } else {
            (self, rhs)
        };
        let shift = small.exp - big.exp;
        if shift < -60 {
            return big;
        }
        let s = ldexp(small.mant, shift);
        let m = if big.sign == small.sign {
            big.mant + s
        } else {
            big.mant - s
        };
        LogValue::build(big.sign, m, big.exp)
    }
}

impl LogValue {
    fn total_cmp_abs(&self, o: &LogValue) -> Ordering {
        self.exp.cmp(&o.exp).then(self.mant.total_cmp(&o.mant))
    }
}

impl Neg for LogValue {
    type Output = LogValue;

    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            ..self
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;

    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogValue::build(self.sign * rhs.sign, self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl Div for LogValue {
    type Output = LogValue;

    /// Division by zero gives an infinite magnitude.
    fn div(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return Self::ZERO;
        }
        if rhs.sign == 0 {
            return LogValue::build(self.sign, f64::INFINITY, 0);
        }
        LogValue::build(self.sign * rhs.sign, self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, v| acc + v)
    }
}

impl serde::Serialize for LogValue {
    /// `{ "sign": s, "ln_abs": l }`
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LogValue", 2)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("ln_abs", &self.log_abs())?;
        st.end()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let l10 = self.log10_abs();
        let exp = l10.floor();
        let mant = 10f64.powf(l10 - exp);
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}{mant:.12}e{exp}")
    }
}
