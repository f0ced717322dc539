//! Generator actions on the positive discrete series of su_q(1,1) and on the
//! finite-dimensional su_q(2) representations, plus the coupled-generator
//! binomial expansion used by tensor products.
//!
//! Conventions: `K0|k,mu> = mu|k,mu>`,
//! `K-|k,mu> = sqrt([mu+k][mu-k-1]) |k,mu-1>`,
//! `K+|k,mu> = sqrt([mu-k][mu+k+1]) |k,mu+1>`;
//! basis `|k,mu>` with `k = 0, 1/2, 1, ...` and `mu = k+1, k+2, ...`.
//! Ladder steps that leave the admissible label set annihilate: they return
//! coefficient zero with no target label.

use crate::error::{QError, QResult};
use crate::halfint::HalfInt;
use crate::qcore::{qfact, qfact_recip, qnum_half};
use crate::real::{QContext, Real};

/// Raising or lowering direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LadderSign {
    Plus,
    Minus,
}

/// Which tensor product a coupled operator acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CouplingKind {
    /// Two positive discrete series.
    PosPos,
    /// Positive discrete series times a finite su_q(2) representation.
    Mixed,
}

/// Basis label of a positive discrete series representation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PosSeriesLabel {
    pub kappa: HalfInt,
    pub mu: HalfInt,
}

impl PosSeriesLabel {
    pub fn new(kappa: HalfInt, mu: HalfInt) -> QResult<PosSeriesLabel> {
        if !kappa.is_nonneg() {
            return Err(QError::Domain(format!("kappa must be >= 0, got {kappa}")));
        }
        if !(mu - kappa - 1).as_nonneg_int().is_some() {
            return Err(QError::Domain(format!(
                "mu must be kappa+1, kappa+2, ...; got kappa={kappa}, mu={mu}"
            )));
        }
        Ok(PosSeriesLabel { kappa, mu })
    }
}

/// Basis label of a finite-dimensional representation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FiniteRepLabel {
    pub j: HalfInt,
    pub m: HalfInt,
}

impl FiniteRepLabel {
    pub fn new(j: HalfInt, m: HalfInt) -> QResult<FiniteRepLabel> {
        if !j.is_nonneg() {
            return Err(QError::Domain(format!("j must be >= 0, got {j}")));
        }
        if !(j - m).as_nonneg_int().is_some() || !(j + m).as_nonneg_int().is_some() {
            return Err(QError::Domain(format!("m must lie in -j..j with j-m integral; got j={j}, m={m}")));
        }
        Ok(FiniteRepLabel { j, m })
    }
}

/// Result of a ladder application: a coefficient and the target label.
///
/// `label == None` exactly when the step annihilates (coefficient zero).
#[derive(Clone, Debug)]
pub struct LadderResult<L> {
    pub coefficient: Real,
    pub label: Option<L>,
}

/// Eigenvalue of `K0` on `|kappa, mu>`.
pub fn k0_action(s: &PosSeriesLabel) -> HalfInt {
    s.mu
}

/// Single application of `K+` or `K-` on a positive-series basis vector.
pub fn kpm_action(sign: LadderSign, s: &PosSeriesLabel, ctx: &QContext) -> LadderResult<PosSeriesLabel> {
    match sign {
        LadderSign::Plus => {
            let c = qnum_half(s.mu - s.kappa, ctx)
                .mul(&qnum_half(s.mu + s.kappa + 1, ctx))
                .sqrt();
            LadderResult {
                coefficient: c,
                label: Some(PosSeriesLabel { kappa: s.kappa, mu: s.mu + 1 }),
            }
        }
        LadderSign::Minus => {
            if s.mu - 1 < s.kappa + 1 {
                return LadderResult { coefficient: ctx.zero(), label: None };
            }
            let c = qnum_half(s.mu + s.kappa, ctx)
                .mul(&qnum_half(s.mu - s.kappa - 1, ctx))
                .sqrt();
            LadderResult {
                coefficient: c,
                label: Some(PosSeriesLabel { kappa: s.kappa, mu: s.mu - 1 }),
            }
        }
    }
}

/// Closed-form coefficient of `K+^r` or `K-^r` on a positive-series vector.
pub fn kpm_power_coeff(
    sign: LadderSign,
    r: u32,
    s: &PosSeriesLabel,
    ctx: &QContext,
) -> QResult<LadderResult<PosSeriesLabel>> {
    let r = r as i64;
    match sign {
        LadderSign::Plus => {
            let num = qfact(s.mu + s.kappa + r, ctx)?.mul(&qfact(s.mu - s.kappa - 1 + r, ctx)?);
            let den = qfact(s.mu + s.kappa, ctx)?.mul(&qfact(s.mu - s.kappa - 1, ctx)?);
            Ok(LadderResult {
                coefficient: num.div(&den).sqrt(),
                label: Some(PosSeriesLabel { kappa: s.kappa, mu: s.mu + r }),
            })
        }
        LadderSign::Minus => {
            // [mu-k-1-r]! reciprocal vanishes once the state drops below the
            // minimal weight.
            let rec = qfact_recip(s.mu + s.kappa - r, ctx)?
                .mul(&qfact_recip(s.mu - s.kappa - 1 - r, ctx)?);
            if rec.is_zero() {
                return Ok(LadderResult { coefficient: ctx.zero(), label: None });
            }
            let num = qfact(s.mu + s.kappa, ctx)?.mul(&qfact(s.mu - s.kappa - 1, ctx)?);
            Ok(LadderResult {
                coefficient: num.mul(&rec).sqrt(),
                label: Some(PosSeriesLabel { kappa: s.kappa, mu: s.mu - r }),
            })
        }
    }
}

/// Casimir eigenvalue `[kappa+1]_q [kappa]_q` on the series labelled `kappa`.
pub fn casimir_eigenvalue(kappa: HalfInt, ctx: &QContext) -> Real {
    qnum_half(kappa + 1, ctx).mul(&qnum_half(kappa, ctx))
}

/// Coefficient of `J+^r` or `J-^r` on a finite-representation vector.
pub fn jpm_action(
    sign: LadderSign,
    s: &FiniteRepLabel,
    r: u32,
    ctx: &QContext,
) -> QResult<LadderResult<FiniteRepLabel>> {
    let r = r as i64;
    let (num_a, num_b, rec_a, rec_b, tgt) = match sign {
        LadderSign::Plus => (
            s.j - s.m,
            s.j + s.m + r,
            s.j + s.m,
            s.j - s.m - r,
            s.m + r,
        ),
        LadderSign::Minus => (
            s.j + s.m,
            s.j - s.m + r,
            s.j - s.m,
            s.j + s.m - r,
            s.m - r,
        ),
    };
    let rec = qfact_recip(rec_a, ctx)?.mul(&qfact_recip(rec_b, ctx)?);
    if rec.is_zero() || !num_b.is_nonneg() {
        return Ok(LadderResult { coefficient: ctx.zero(), label: None });
    }
    let num = qfact(num_a, ctx)?.mul(&qfact(num_b, ctx)?);
    Ok(LadderResult {
        coefficient: num.mul(&rec).sqrt(),
        label: Some(FiniteRepLabel { j: s.j, m: tgt }),
    })
}

/// One term of the coupled-generator binomial expansion
/// `Kpm^r(12) = sum_l pre_l Kpm^l(1) Xpm^{r-l}(2) q^{l K0(2) - (r-l) K0(1)}`,
/// where the second factor is `K` again for two positive series and `J` for
/// the mixed product, in which case the lowering branch picks up `(-1)^{r-l}`.
#[derive(Clone, Debug)]
pub struct CoupledTerm {
    /// q-binomial prefactor `[r]!/([l]![r-l]!)`.
    pub prefactor: Real,
    /// `+1`, or `-1` on mixed lowering terms with odd `r - l`.
    pub sign: i8,
    /// Power applied to the first factor.
    pub pow_first: u32,
    /// Power applied to the second factor.
    pub pow_second: u32,
    /// Coefficient of `K0(2)` in the exponent of the trailing q-power.
    pub exp_k0_second: i64,
    /// Coefficient of `K0(1)` in the exponent of the trailing q-power.
    pub exp_k0_first: i64,
}

pub fn coupled_generator_term(
    kind: CouplingKind,
    sign: LadderSign,
    ell: u32,
    r: u32,
    ctx: &QContext,
) -> QResult<CoupledTerm> {
    if ell > r {
        return Err(QError::Domain(format!("ell = {ell} exceeds r = {r}")));
    }
    let pre = qfact(HalfInt::from_int(r as i64), ctx)?
        .mul(&qfact_recip(HalfInt::from_int(ell as i64), ctx)?)
        .mul(&qfact_recip(HalfInt::from_int((r - ell) as i64), ctx)?);
    let s = match (kind, sign) {
        (CouplingKind::Mixed, LadderSign::Minus) if (r - ell) % 2 == 1 => -1,
        _ => 1,
    };
    Ok(CoupledTerm {
        prefactor: pre,
        sign: s,
        pow_first: ell,
        pow_second: r - ell,
        exp_k0_second: ell as i64,
        exp_k0_first: -((r - ell) as i64),
    })
}
