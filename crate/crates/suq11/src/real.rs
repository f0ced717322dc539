//! Arbitrary-precision real arithmetic used throughout the crate.
//!
//! [`Real`] wraps an `astro-float` big float at a precision fixed by the
//! [`QContext`] that created it. All operations round to nearest-even at the
//! context precision, which carries a guard margin above the requested
//! decimal digits so that stated tolerances hold after cancellation-heavy
//! sums.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::QError;
use crate::halfint::{Frac, HalfInt};

const RM: RoundingMode = RoundingMode::ToEven;

/// Guard digits added on top of the requested working precision.
const GUARD_DIGITS: u32 = 25;

fn bits_for_digits(digits: u32) -> usize {
    // log2(10) ~ 3.322; round up and keep the mantissa word-aligned.
    let bits = ((digits + GUARD_DIGITS) as f64 * 3.3219280948873626).ceil() as usize + 8;
    (bits + 63) / 64 * 64
}

thread_local! {
    static CONSTS: std::cell::RefCell<Consts> =
        std::cell::RefCell::new(Consts::new().expect("constants cache"));
}

/// High-precision real number.
#[derive(Clone, Debug)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn neg(&self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }

    pub fn add(&self, rhs: &Real) -> Real {
        Real::wrap(self.v.add(&rhs.v, self.prec, RM), self.prec)
    }

    pub fn sub(&self, rhs: &Real) -> Real {
        Real::wrap(self.v.sub(&rhs.v, self.prec, RM), self.prec)
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        Real::wrap(self.v.mul(&rhs.v, self.prec, RM), self.prec)
    }

    pub fn div(&self, rhs: &Real) -> Real {
        Real::wrap(self.v.div(&rhs.v, self.prec, RM), self.prec)
    }

    pub fn recip(&self) -> Real {
        Real::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    /// Principal square root; negative input yields NaN, surfaced by callers.
    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Real {
        CONSTS.with(|c| Real::wrap(self.v.exp(self.prec, RM, &mut c.borrow_mut()), self.prec))
    }

    pub fn ln(&self) -> Real {
        CONSTS.with(|c| Real::wrap(self.v.ln(self.prec, RM, &mut c.borrow_mut()), self.prec))
    }

    /// Integer power by binary exponentiation (exact exponent arithmetic).
    pub fn powi(&self, mut e: i64) -> Real {
        let mut base = self.clone();
        if e < 0 {
            base = base.recip();
            e = -e;
        }
        let mut acc = Real::wrap(BigFloat::from_i8(1, self.prec), self.prec);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        // round-trip through the decimal writer; good to ~17 digits
        format_decimal(&self.v, 17).parse().unwrap_or(f64::NAN)
    }

    /// Decimal string with `digits` significant digits, deterministic.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_decimal(&self.v, digits as usize)
    }

    pub fn cmp_abs(&self, rhs: &Real) -> Ordering {
        self.v.abs().cmp(&rhs.v.abs()).unwrap_or(Ordering::Equal)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_decimal(&self.v, 30))
    }
}

/// Render a big float as `[-]d.ddd...e[+/-]exp` with `digits` significant digits.
fn format_decimal(v: &BigFloat, digits: usize) -> String {
    if v.is_zero() {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_inf() {
        return if v.is_negative() { "-inf".into() } else { "inf".into() };
    }
    let (sign, mantissa, exp) = match v.convert_to_radix(Radix::Dec, RM) {
        Ok(t) => t,
        Err(_) => return "nan".into(),
    };
    // mantissa is a digit vector d_0 d_1 ... with value 0.d0d1... * 10^exp
    let mut ds: Vec<u8> = mantissa;
    while ds.first() == Some(&0) {
        ds.remove(0);
    }
    if ds.is_empty() {
        return "0".into();
    }
    let mut e10 = exp as i64;
    // round to `digits` significant digits (half-up on the digit string)
    if ds.len() > digits {
        let roundup = ds[digits] >= 5;
        ds.truncate(digits);
        if roundup {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let mut out = String::new();
    if sign == Sign::Neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if ds.len() > 1 {
        out.push('.');
        for d in &ds[1..] {
            out.push((b'0' + d) as char);
        }
    }
    // value = 0.d0d1.. * 10^exp = d0.d1.. * 10^(exp-1)
    let sci = e10 - 1;
    if sci != 0 {
        out.push('e');
        out.push_str(&sci.to_string());
    }
    out
}

/// Deformation parameter and working precision shared by every operation.
///
/// Invariants: `q > 0`, `q != 1`, `digits >= 20`.
#[derive(Clone, Debug)]
pub struct QContext {
    q: Real,
    sqrt_q: Real,
    digits: u32,
    prec: usize,
}

impl QContext {
    /// Build a context from a decimal string for `q` (kept exact to the
    /// working precision) and a number of decimal digits.
    pub fn new(q: &str, digits: u32) -> Result<QContext, QError> {
        if digits < 20 {
            return Err(QError::Domain(format!("digits must be >= 20, got {digits}")));
        }
        let prec = bits_for_digits(digits);
        let qv = CONSTS.with(|c| BigFloat::parse(q, Radix::Dec, prec, RM, &mut c.borrow_mut()));
        if qv.is_nan() || qv.is_inf() {
            return Err(QError::Domain(format!("cannot parse q = {q:?}")));
        }
        let q = Real::wrap(qv, prec);
        let one = Real::wrap(BigFloat::from_i8(1, prec), prec);
        if !(q > Real::wrap(BigFloat::from_i8(0, prec), prec)) || q == one {
            return Err(QError::Domain("q must be positive and different from 1".into()));
        }
        let sqrt_q = q.sqrt();
        Ok(QContext { q, sqrt_q, digits, prec })
    }

    pub fn from_f64(q: f64, digits: u32) -> Result<QContext, QError> {
        Self::new(&format!("{q:.17e}"), digits)
    }

    /// Same precision, deformation parameter replaced by `1/q`.
    pub fn recip_q(&self) -> QContext {
        let q = self.q.recip();
        let sqrt_q = q.sqrt();
        QContext { q, sqrt_q, digits: self.digits, prec: self.prec }
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> Real {
        Real::wrap(BigFloat::from_i8(0, self.prec), self.prec)
    }

    pub fn one(&self) -> Real {
        Real::wrap(BigFloat::from_i8(1, self.prec), self.prec)
    }

    pub fn int(&self, k: i64) -> Real {
        Real::wrap(BigFloat::from_i64(k, self.prec), self.prec)
    }

    pub fn from_f64_val(&self, x: f64) -> Real {
        Real::wrap(BigFloat::from_f64(x, self.prec), self.prec)
    }

    pub fn parse_real(&self, s: &str) -> Result<Real, QError> {
        let v = CONSTS.with(|c| BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut c.borrow_mut()));
        if v.is_nan() {
            return Err(QError::Domain(format!("cannot parse real {s:?}")));
        }
        Ok(Real::wrap(v, self.prec))
    }

    /// `10^e`, used to build tolerances `10^-(digits-k)`.
    pub fn pow10(&self, e: i64) -> Real {
        self.int(10).powi(e)
    }

    /// Relative tolerance `10^-(digits - slack)`.
    pub fn tol(&self, slack: u32) -> Real {
        self.pow10(-((self.digits.saturating_sub(slack)) as i64))
    }

    /// `q^h` for an exact half-integer exponent: an integer power of `sqrt(q)`.
    pub fn qpow_half(&self, h: HalfInt) -> Real {
        self.sqrt_q.powi(h.twice())
    }

    /// `q^f` for an exact rational exponent. Half-integer exponents evaluate
    /// through integer powers of `sqrt(q)`; anything finer goes through
    /// `exp(f * ln q)`.
    pub fn qpow_frac(&self, f: Frac) -> Real {
        if let Some(h) = f.as_halfint() {
            return self.qpow_half(h);
        }
        let num = self.int(f.num());
        let den = self.int(f.den());
        self.q.ln().mul(&num).div(&den).exp()
    }

    /// `q^x` for a real exponent.
    pub fn qpow_real(&self, x: &Real) -> Real {
        self.q.ln().mul(x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_formatting_is_stable() {
        let ctx = QContext::new("0.5", 30).unwrap();
        let x = ctx.int(1).div(&ctx.int(3));
        assert_eq!(x.to_decimal(10), "3.333333333e-1");
        assert_eq!(ctx.int(250).to_decimal(8), "2.5e2");
        assert_eq!(ctx.int(0).to_decimal(8), "0");
        assert_eq!(ctx.int(-12).to_decimal(4), "-1.2e1");
        let y = ctx.parse_real("9.9999").unwrap();
        assert_eq!(y.to_decimal(4), "1e1");
    }

    #[test]
    fn qpow_half_matches_powi() {
        let ctx = QContext::new("0.37", 40).unwrap();
        let a = ctx.qpow_half(HalfInt::from_twice(4)); // q^2
        let b = ctx.q().powi(2);
        assert!(a.sub(&b).abs() < ctx.tol(5));
        let c = ctx.qpow_half(HalfInt::from_twice(-3)); // q^{-3/2}
        let d = ctx.q().powi(3).sqrt().recip();
        assert!(c.sub(&d).abs().div(&d) < ctx.tol(5));
    }

    #[test]
    fn context_rejects_bad_parameters() {
        assert!(QContext::new("1.0", 50).is_err());
        assert!(QContext::new("-0.5", 50).is_err());
        assert!(QContext::new("0.5", 10).is_err());
    }
}
