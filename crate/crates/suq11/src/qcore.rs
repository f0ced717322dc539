//! Symmetric q-arithmetic: q-numbers, q-factorials, q-Pochhammer symbols and
//! the terminating symmetric q-hypergeometric series.
//!
//! The symmetric conventions are
//! `[x]_q = (q^x - q^-x)/(q - q^-1)`,
//! `(a|q)_n = [a][a+1]...[a+n-1]`,
//! `[n]_q! = (1|q)_n`,
//! and the series `sum_k prod_i (a_i|q)_k / prod_j (b_j|q)_k * z^k / (1|q)_k`
//! terminating at the smallest `|a|` over nonpositive-integer upper
//! parameters. `1/[n]_q!` is extended by `0` for negative integer `n`, which
//! lets every coefficient sum run over all nonnegative indices.

use crate::error::{QError, QResult};
use crate::halfint::HalfInt;
use crate::real::{QContext, Real};

/// A series parameter: exact half-integer or arbitrary real.
///
/// Termination and pole detection use only the exact variant; real parameters
/// never count as nonpositive integers.
#[derive(Clone, Debug)]
pub enum QParam {
    Exact(HalfInt),
    Real(Real),
}

impl QParam {
    pub fn int(n: i64) -> QParam {
        QParam::Exact(HalfInt::from_int(n))
    }

    fn shifted_qnum(&self, k: i64, ctx: &QContext) -> Real {
        match self {
            QParam::Exact(h) => qnum_half(*h + k, ctx),
            QParam::Real(r) => qnum_real(&r.add(&ctx.int(k)), ctx),
        }
    }

    fn is_zero_at(&self, k: i64) -> bool {
        matches!(self, QParam::Exact(h) if (*h + k) == HalfInt::ZERO)
    }
}

impl From<HalfInt> for QParam {
    fn from(h: HalfInt) -> QParam {
        QParam::Exact(h)
    }
}

/// Upper/lower parameter lists and argument of a terminating series.
#[derive(Clone, Debug)]
pub struct HypSeriesSpec {
    pub upper: Vec<QParam>,
    pub lower: Vec<QParam>,
    pub z: Real,
}

impl HypSeriesSpec {
    pub fn new(upper: Vec<QParam>, lower: Vec<QParam>, z: Real) -> HypSeriesSpec {
        HypSeriesSpec { upper, lower, z }
    }

    /// Terminating index: smallest `-a` over exact nonpositive-integer uppers.
    pub fn terminating_index(&self) -> Option<i64> {
        self.upper
            .iter()
            .filter_map(|p| match p {
                QParam::Exact(h) => h.as_int().filter(|&n| n <= 0).map(|n| -n),
                QParam::Real(_) => None,
            })
            .min()
    }
}

/// Symmetric q-number `[x]_q` for a real argument.
pub fn qnum_real(x: &Real, ctx: &QContext) -> Real {
    if x.is_zero() {
        return ctx.zero();
    }
    let qx = ctx.qpow_real(x);
    let qmx = qx.recip();
    qx.sub(&qmx).div(&ctx.q().sub(&ctx.q().recip()))
}

/// Symmetric q-number `[h]_q` for an exact half-integer argument.
pub fn qnum_half(h: HalfInt, ctx: &QContext) -> Real {
    if h == HalfInt::ZERO {
        return ctx.zero();
    }
    let qx = ctx.qpow_half(h);
    let qmx = qx.recip();
    qx.sub(&qmx).div(&ctx.q().sub(&ctx.q().recip()))
}

/// `[x]_q` with `x` given as an f64 (convenience for tests and the CLI).
pub fn qnum(x: f64, ctx: &QContext) -> Real {
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && twice.abs() < 1e15 {
        qnum_half(HalfInt::from_twice(twice as i64), ctx)
    } else {
        qnum_real(&ctx.from_f64_val(x), ctx)
    }
}

/// Symmetric q-factorial `[n]_q!` for integer `n >= 0`.
pub fn qfact(n: HalfInt, ctx: &QContext) -> QResult<Real> {
    let k = n
        .as_nonneg_int()
        .ok_or_else(|| QError::Domain(format!("q-factorial needs a nonnegative integer, got {n}")))?;
    let mut acc = ctx.one();
    for m in 1..=k {
        acc = acc.mul(&qnum_half(HalfInt::from_int(m), ctx));
    }
    Ok(acc)
}

/// `1/[n]_q!` with the vanishing convention: exactly `0` for negative integer `n`.
///
/// This is the primitive every coefficient sum is built on, so that summation
/// limits can be taken over all nonnegative integers.
pub fn qfact_recip(n: HalfInt, ctx: &QContext) -> QResult<Real> {
    match n.as_int() {
        None => Err(QError::Domain(format!("q-factorial reciprocal needs an integer, got {n}"))),
        Some(k) if k < 0 => Ok(ctx.zero()),
        Some(_) => Ok(qfact(n, ctx)?.recip()),
    }
}

/// Symmetric q-Pochhammer `(a|q)_n` for a half-integer `a`.
pub fn qpoch(a: HalfInt, n: u32, ctx: &QContext) -> Real {
    let mut acc = ctx.one();
    for m in 0..n as i64 {
        acc = acc.mul(&qnum_half(a + m, ctx));
    }
    acc
}

/// Symmetric q-Pochhammer `(a|q)_n` for a real `a`.
pub fn qpoch_real(a: &Real, n: u32, ctx: &QContext) -> Real {
    let mut acc = ctx.one();
    for m in 0..n as i64 {
        acc = acc.mul(&qnum_real(&a.add(&ctx.int(m)), ctx));
    }
    acc
}

/// Evaluate a terminating symmetric q-hypergeometric series.
///
/// Errors if no exact upper parameter terminates the series, or if a lower
/// parameter hits zero at an index where the running numerator is nonzero.
pub fn qhyper(spec: &HypSeriesSpec, ctx: &QContext) -> QResult<Real> {
    let nterm = spec.terminating_index().ok_or(QError::NonTerminating)?;
    let mut sum = ctx.one();
    let mut term = ctx.one();
    for k in 1..=nterm {
        let mut num = ctx.one();
        for a in &spec.upper {
            num = num.mul(&a.shifted_qnum(k - 1, ctx));
        }
        let mut den = ctx.one();
        for (j, b) in spec.lower.iter().enumerate() {
            if b.is_zero_at(k - 1) {
                return Err(QError::PoleBeforeTermination {
                    parameter: format!("b{}", j + 1),
                    index: k as usize,
                });
            }
            den = den.mul(&b.shifted_qnum(k - 1, ctx));
        }
        den = den.mul(&qnum_half(HalfInt::from_int(k), ctx));
        term = term.mul(&num).div(&den).mul(&spec.z);
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// Terminating `2F1`/`3F2` built from half-integer data; helper used by the
/// coefficient formulas and polynomial evaluators.
pub fn qhyper_exact(upper: &[HalfInt], lower: &[HalfInt], z: Real, ctx: &QContext) -> QResult<Real> {
    let spec = HypSeriesSpec::new(
        upper.iter().map(|&h| QParam::Exact(h)).collect(),
        lower.iter().map(|&h| QParam::Exact(h)).collect(),
        z,
    );
    qhyper(&spec, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::Frac;

    fn ctx() -> QContext {
        QContext::new("0.5", 40).unwrap()
    }

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn qnum_basics() {
        let c = ctx();
        assert!(qnum(0.0, &c).is_zero());
        assert!(qnum(1.0, &c).sub(&c.one()).abs() < c.tol(5));
        // [2]_q = q + 1/q = 2.5 at q = 0.5
        let expect = c.parse_real("2.5").unwrap();
        assert!(qnum(2.0, &c).sub(&expect).abs() < c.tol(5));
    }

    #[test]
    fn qnum_q_recip_symmetry() {
        let c = QContext::new("0.73", 40).unwrap();
        let ci = c.recip_q();
        for &x in &[0.5f64, 1.0, 2.5, -3.0, 7.5, 0.123] {
            let a = qnum(x, &c);
            let b = qnum(x, &ci);
            assert!(a.sub(&b).abs() <= a.abs().mul(&c.tol(10)), "x={x}");
        }
    }

    #[test]
    fn qfact_values() {
        let c = ctx();
        assert!(qfact(h(0), &c).unwrap().sub(&c.one()).is_zero());
        assert!(qfact(h(2), &c).unwrap().sub(&c.one()).is_zero());
        // [3]_q! = 1 * 2.5 * 5.25 = 13.125 at q = 0.5
        let expect = c.parse_real("13.125").unwrap();
        assert!(qfact(h(6), &c).unwrap().sub(&expect).abs() < c.tol(5));
        assert!(qfact(h(-2), &c).is_err());
        assert!(qfact(h(3), &c).is_err());
    }

    #[test]
    fn qfact_recip_convention() {
        let c = ctx();
        assert!(qfact_recip(h(-2), &c).unwrap().is_zero());
        assert!(qfact_recip(h(0), &c).unwrap().sub(&c.one()).is_zero());
        let expect = c.parse_real("0.4").unwrap(); // 1/[2]_q at q = 0.5
        assert!(qfact_recip(h(4), &c).unwrap().sub(&expect).abs() < c.tol(5));
    }

    #[test]
    fn qpoch_factorial_identities() {
        let c = ctx();
        // (a|q)_0 = 1
        assert!(qpoch(h(7), 0, &c).sub(&c.one()).is_zero());
        // (-2|q)_3 = 0 since a < n in the negative-argument convention
        assert!(qpoch(h(-4), 3, &c).is_zero());
        // (1|q)_4 = [4]!
        let lhs = qpoch(h(2), 4, &c);
        let rhs = qfact(h(8), &c).unwrap();
        assert!(lhs.sub(&rhs).abs() <= rhs.abs().mul(&c.tol(10)));
        // (a|q)_n (a+n|q)_m = (a|q)_{n+m}, including half-integer a
        for &(ta, n, m) in &[(3i64, 4u32, 5u32), (-5, 2, 7), (1, 6, 3)] {
            let a = h(ta);
            let lhs = qpoch(a, n, &c).mul(&qpoch(a + n as i64, m, &c));
            let rhs = qpoch(a, n + m, &c);
            assert!(lhs.sub(&rhs).abs() <= rhs.abs().mul(&c.tol(10)).add(&c.tol(10)));
        }
    }

    #[test]
    fn qhyper_trivial_and_errors() {
        let c = ctx();
        // 0 among uppers: single k=0 term
        let one = qhyper_exact(&[h(0), h(4)], &[h(6)], c.one(), &c).unwrap();
        assert!(one.sub(&c.one()).is_zero());
        // no terminating parameter
        let spec = HypSeriesSpec::new(vec![QParam::int(1)], vec![QParam::int(2)], c.one());
        assert!(matches!(qhyper(&spec, &c), Err(QError::NonTerminating)));
        // pole before termination: lower -2 hits zero at k = 3 <= nterm = 5
        let err = qhyper_exact(&[h(-10), h(8)], &[h(-4)], c.one(), &c);
        assert!(matches!(err, Err(QError::PoleBeforeTermination { index: 3, .. })));
    }

    /// Chu-Vandermonde evaluation, `b < c` branch:
    /// `2F1(-n,-b;-c | q, q^{+-(b-c+n-1)}) = [c-n]![c-b]!/([c]![c-b-n]!) q^{+-bn}`.
    #[test]
    fn chu_vandermonde_b_lt_c() {
        let c = QContext::new("0.63", 45).unwrap();
        for &(n, b, cc) in &[(1i64, 2i64, 3i64), (2, 4, 7), (3, 5, 9), (2, 3, 8)] {
            for sign in [1i64, -1] {
                let z = c.qpow_half(HalfInt::from_int(sign * (b - cc + n - 1)));
                let lhs = qhyper_exact(
                    &[HalfInt::from_int(-n), HalfInt::from_int(-b)],
                    &[HalfInt::from_int(-cc)],
                    z,
                    &c,
                )
                .unwrap();
                let rhs = qfact(HalfInt::from_int(cc - n), &c)
                    .unwrap()
                    .mul(&qfact(HalfInt::from_int(cc - b), &c).unwrap())
                    .div(&qfact(HalfInt::from_int(cc), &c).unwrap())
                    .div(&qfact(HalfInt::from_int(cc - b - n), &c).unwrap())
                    .mul(&c.qpow_half(HalfInt::from_int(sign * b * n)));
                assert!(
                    lhs.sub(&rhs).abs() <= rhs.abs().mul(&c.tol(10)),
                    "n={n} b={b} c={cc} sign={sign}"
                );
            }
        }
    }

    /// Summation `2F1(-n,b;-c | q, q^{+-(b+c-n+1)}) = [c-n]![b+c]!/([c]![b+c-n]!) q^{+-bn}`.
    #[test]
    fn summation_positive_upper() {
        let c = QContext::new("0.63", 45).unwrap();
        for &(n, b, cc) in &[(1i64, 1i64, 2i64), (2, 3, 5), (3, 2, 7)] {
            for sign in [1i64, -1] {
                let z = c.qpow_half(HalfInt::from_int(sign * (b + cc - n + 1)));
                let lhs = qhyper_exact(
                    &[HalfInt::from_int(-n), HalfInt::from_int(b)],
                    &[HalfInt::from_int(-cc)],
                    z,
                    &c,
                )
                .unwrap();
                let rhs = qfact(HalfInt::from_int(cc - n), &c)
                    .unwrap()
                    .mul(&qfact(HalfInt::from_int(b + cc), &c).unwrap())
                    .div(&qfact(HalfInt::from_int(cc), &c).unwrap())
                    .div(&qfact(HalfInt::from_int(b + cc - n), &c).unwrap())
                    .mul(&c.qpow_half(HalfInt::from_int(sign * b * n)));
                assert!(
                    lhs.sub(&rhs).abs() <= rhs.abs().mul(&c.tol(10)),
                    "n={n} b={b} c={cc} sign={sign}"
                );
            }
        }
    }

    /// Transformation of a terminating 3F2 under parameter exchange:
    /// `3F2(-n,a,b; d,e | q, q^{s(a+b-n-d-e+1)})
    ///   = q^{s a n} (e-a|q)_n/(e|q)_n 3F2(-n,a,d-b; d,a-e-n+1 | q, q^{s(b-e)})`.
    #[test]
    fn transformation_142q() {
        let c = QContext::new("0.58", 45).unwrap();
        let cases = [
            (2i64, h(3), h(5), h(9), h(7)),   // n=2, a=3/2, b=5/2, d=9/2, e=7/2
            (3, h(2), h(8), h(11), h(9)),
            (1, h(5), h(4), h(13), h(6)),
        ];
        for &(n, a, b, d, e) in &cases {
            for sign in [1i64, -1] {
                let arg = (a + b - HalfInt::from_int(n) - d - e + 1) * sign;
                let lhs = qhyper_exact(
                    &[HalfInt::from_int(-n), a, b],
                    &[d, e],
                    c.qpow_half(arg),
                    &c,
                )
                .unwrap();
                let pref = c
                    .qpow_frac(Frac::new((sign * n) as i128 * a.twice() as i128, 2))
                    .mul(&qpoch(e - a, n as u32, &c))
                    .div(&qpoch(e, n as u32, &c));
                let rhs = pref
                    .mul(
                        &qhyper_exact(
                            &[HalfInt::from_int(-n), a, d - b],
                            &[d, a - e - HalfInt::from_int(n) + 1],
                            c.qpow_half((b - e) * sign),
                            &c,
                        )
                        .unwrap(),
                    );
                assert!(
                    lhs.sub(&rhs).abs() <= lhs.abs().mul(&c.tol(10)),
                    "n={n} a={a} b={b} d={d} e={e} sign={sign}"
                );
            }
        }
    }
}
