//! Brute-force reconstruction of coupling coefficients by literal operator
//! application on truncated tensor-product spaces.
//!
//! Two independent routes are provided. The projection route builds
//! `P = sum_r (-1)^r [2k-r]!/([r]![2k]!) K+^r K-^r` and applies it to the seed
//! vector; the kernel route solves for the one-dimensional kernel of the
//! coupled lowering operator on a weight space and fixes scale and phase by a
//! linear decomposition of the seed. Closed forms elsewhere in the crate are
//! validated against both.

use std::collections::BTreeMap;

use crate::error::{QError, QResult};
use crate::halfint::HalfInt;
use crate::qcore::{qfact, qnum_half};
use crate::real::{QContext, Real};
use crate::reps::{jpm_action, kpm_action, CouplingKind, FiniteRepLabel, LadderSign, PosSeriesLabel};

/// The two component representations of a tensor product.
#[derive(Clone, Copy, Debug)]
pub enum ProductSystem {
    PosPos { kappa1: HalfInt, kappa2: HalfInt },
    Mixed { kappa: HalfInt, j: HalfInt },
}

impl ProductSystem {
    pub fn kind(&self) -> CouplingKind {
        match self {
            ProductSystem::PosPos { .. } => CouplingKind::PosPos,
            ProductSystem::Mixed { .. } => CouplingKind::Mixed,
        }
    }

    /// Pairs `(x1, x2)` with `x1 + x2 = w` admissible for both components.
    pub fn weight_basis(&self, w: HalfInt) -> Vec<(HalfInt, HalfInt)> {
        let mut out = Vec::new();
        match *self {
            ProductSystem::PosPos { kappa1, kappa2 } => {
                let mut mu1 = kappa1 + 1;
                while mu1 <= w - kappa2 - 1 {
                    out.push((mu1, w - mu1));
                    mu1 = mu1 + 1;
                }
            }
            ProductSystem::Mixed { kappa, j } => {
                let mut m = -j;
                while m <= j {
                    let mu = w - m;
                    if mu >= kappa + 1 {
                        out.push((mu, m));
                    }
                    m = m + 1;
                }
            }
        }
        out
    }
}

/// Sparse tensor-product state: amplitudes over component label pairs, keyed
/// by twice-values. Raising past `mu_cut` marks the state tainted.
#[derive(Clone, Debug)]
pub struct TensorState {
    pub kind: CouplingKind,
    pub amps: BTreeMap<(i64, i64), Real>,
    pub mu_cut: HalfInt,
    pub tainted: bool,
}

impl TensorState {
    pub fn zero(kind: CouplingKind, mu_cut: HalfInt) -> TensorState {
        TensorState { kind, amps: BTreeMap::new(), mu_cut, tainted: false }
    }

    pub fn basis(sys: &ProductSystem, a: HalfInt, b: HalfInt, mu_cut: HalfInt, ctx: &QContext) -> TensorState {
        let mut st = TensorState::zero(sys.kind(), mu_cut);
        st.amps.insert((a.twice(), b.twice()), ctx.one());
        st
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amp(&self, a: HalfInt, b: HalfInt, ctx: &QContext) -> Real {
        self.amps.get(&(a.twice(), b.twice())).cloned().unwrap_or_else(|| ctx.zero())
    }

    fn push(&mut self, key: (i64, i64), v: Real) {
        if v.is_zero() {
            return;
        }
        match self.amps.get_mut(&key) {
            Some(w) => *w = w.add(&v),
            None => {
                self.amps.insert(key, v);
            }
        }
    }

    /// Drop exact zeros created by cancellation.
    fn prune(&mut self) {
        self.amps.retain(|_, v| !v.is_zero());
    }

    pub fn norm2(&self, ctx: &QContext) -> Real {
        let mut acc = ctx.zero();
        for v in self.amps.values() {
            acc = acc.add(&v.mul(v));
        }
        acc
    }

    pub fn dot(&self, other: &TensorState, ctx: &QContext) -> Real {
        let mut acc = ctx.zero();
        for (k, v) in &self.amps {
            if let Some(w) = other.amps.get(k) {
                acc = acc.add(&v.mul(w));
            }
        }
        acc
    }

    pub fn scaled(&self, c: &Real) -> TensorState {
        let mut out = self.clone();
        for v in out.amps.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &TensorState, c: &Real) {
        self.tainted |= other.tainted;
        for (k, v) in &other.amps {
            self.push(*k, v.mul(c));
        }
        self.prune();
    }
}

/// Apply the coupled raising or lowering generator once.
///
/// For two positive series: `Kpm(12) = Kpm(1) q^{K0(2)} + q^{-K0(1)} Kpm(2)`;
/// for the mixed product: `K'pm(12) = Kpm q^{J0} +- q^{-K0} Jpm`.
pub fn apply_coupled(
    sign: LadderSign,
    sys: &ProductSystem,
    state: &TensorState,
    ctx: &QContext,
) -> TensorState {
    let mut out = TensorState::zero(state.kind, state.mu_cut);
    out.tainted = state.tainted;
    for (&(ta, tb), amp) in &state.amps {
        let (a, b) = (HalfInt::from_twice(ta), HalfInt::from_twice(tb));
        match *sys {
            ProductSystem::PosPos { kappa1, kappa2 } => {
                let s1 = PosSeriesLabel { kappa: kappa1, mu: a };
                let r1 = kpm_action(sign, &s1, ctx);
                if let Some(l) = r1.label {
                    if l.mu + b > state.mu_cut {
                        out.tainted = true;
                    } else {
                        let c = r1.coefficient.mul(&ctx.qpow_half(b));
                        out.push((l.mu.twice(), tb), amp.mul(&c));
                    }
                }
                let s2 = PosSeriesLabel { kappa: kappa2, mu: b };
                let r2 = kpm_action(sign, &s2, ctx);
                if let Some(l) = r2.label {
                    if a + l.mu > state.mu_cut {
                        out.tainted = true;
                    } else {
                        let c = ctx.qpow_half(-a).mul(&r2.coefficient);
                        out.push((ta, l.mu.twice()), amp.mul(&c));
                    }
                }
            }
            ProductSystem::Mixed { kappa, j } => {
                let s1 = PosSeriesLabel { kappa, mu: a };
                let r1 = kpm_action(sign, &s1, ctx);
                if let Some(l) = r1.label {
                    if l.mu + b > state.mu_cut {
                        out.tainted = true;
                    } else {
                        let c = r1.coefficient.mul(&ctx.qpow_half(b));
                        out.push((l.mu.twice(), tb), amp.mul(&c));
                    }
                }
                let s2 = FiniteRepLabel { j, m: b };
                let r2 = jpm_action(sign, &s2, 1, ctx).expect("single finite ladder step");
                if let Some(l) = r2.label {
                    let c = ctx.qpow_half(-a).mul(&r2.coefficient);
                    let signed = if sign == LadderSign::Minus { c.neg() } else { c };
                    out.push((ta, l.m.twice()), amp.mul(&signed));
                }
            }
        }
    }
    out.prune();
    out
}

/// Minimal-weight extraction `P = sum_r (-1)^r [2k-r]!/([r]![2k]!) K+^r K-^r`
/// applied to `state`; the series stops once repeated lowering annihilates.
pub fn project_minimal(
    sys: &ProductSystem,
    kappa: HalfInt,
    state: &TensorState,
    ctx: &QContext,
) -> QResult<TensorState> {
    let two_k = (kappa * 2)
        .as_nonneg_int()
        .ok_or_else(|| QError::Domain(format!("projection target kappa = {kappa} must be >= 0")))?;
    let fact_2k = qfact(kappa * 2, ctx)?;
    let mut acc = state.clone();
    let mut lowered = state.clone();
    let mut r: i64 = 0;
    loop {
        r += 1;
        lowered = apply_coupled(LadderSign::Minus, sys, &lowered, ctx);
        if lowered.is_zero() || r > two_k {
            break;
        }
        let mut cr = qfact(kappa * 2 - r, ctx)?
            .div(&qfact(HalfInt::from_int(r), ctx)?)
            .div(&fact_2k);
        if r % 2 == 1 {
            cr = cr.neg();
        }
        let mut raised = lowered.clone();
        for _ in 0..r {
            raised = apply_coupled(LadderSign::Plus, sys, &raised, ctx);
        }
        acc.add_scaled(&raised, &cr);
    }
    Ok(acc)
}

/// Target component and seed weight of a generalized projection.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionSpec {
    pub kappa: HalfInt,
    pub mu: HalfInt,
    pub mu_bar: HalfInt,
}

/// Generalized projector `N_mu K+^{mu-k-1} P_min K-^{mubar-k-1} N_mubar`.
pub fn apply_projection(
    sys: &ProductSystem,
    spec: &ProjectionSpec,
    state: &TensorState,
    ctx: &QContext,
) -> QResult<TensorState> {
    let norm = |mu: HalfInt| -> QResult<Real> {
        Ok(qfact(spec.kappa * 2 + 1, ctx)?
            .div(&qfact(mu + spec.kappa, ctx)?)
            .div(&qfact(mu - spec.kappa - 1, ctx)?)
            .sqrt())
    };
    let down = (spec.mu_bar - spec.kappa - 1)
        .as_nonneg_int()
        .ok_or_else(|| QError::Domain(format!("mu_bar = {} below minimal weight", spec.mu_bar)))?;
    let up = (spec.mu - spec.kappa - 1)
        .as_nonneg_int()
        .ok_or_else(|| QError::Domain(format!("mu = {} below minimal weight", spec.mu)))?;
    let mut st = state.clone();
    for _ in 0..down {
        st = apply_coupled(LadderSign::Minus, sys, &st, ctx);
    }
    st = project_minimal(sys, spec.kappa, &st, ctx)?;
    for _ in 0..up {
        st = apply_coupled(LadderSign::Plus, sys, &st, ctx);
    }
    let scale = norm(spec.mu)?.mul(&norm(spec.mu_bar)?);
    Ok(st.scaled(&scale))
}

fn seed_pair(sys: &ProductSystem, kappa: HalfInt) -> QResult<(HalfInt, HalfInt)> {
    match *sys {
        ProductSystem::PosPos { kappa1, kappa2 } => {
            let second = kappa - kappa1;
            if !(second - kappa2 - 1).as_nonneg_int().is_some() {
                return Err(QError::Domain(format!(
                    "target kappa = {kappa} outside the coupling range of ({kappa1}, {kappa2})"
                )));
            }
            Ok((kappa1 + 1, second))
        }
        ProductSystem::Mixed { kappa: k, j } => {
            let second = kappa - k;
            if second.abs() > j || !(j - second).is_integer() {
                return Err(QError::Domain(format!(
                    "target kappa' = {kappa} outside the coupling range of ({k}, {j})"
                )));
            }
            Ok((k + 1, second))
        }
    }
}

/// Coefficient rows of the coupled basis vectors `|kappa; mu>` for
/// `mu = kappa+1 ..= mu_max`, computed once per target component.
///
/// Each row maps product pairs to coefficients; the row for weight `mu` is
/// exactly the family of coupling coefficients with that `(kappa, mu)`.
pub fn coupled_rows(
    sys: &ProductSystem,
    kappa: HalfInt,
    mu_max: HalfInt,
    ctx: &QContext,
) -> QResult<Vec<(HalfInt, TensorState)>> {
    let (s1, s2) = seed_pair(sys, kappa)?;
    let mu_cut = mu_max + 4;
    let seed = TensorState::basis(sys, s1, s2, mu_cut, ctx);
    let projected = project_minimal(sys, kappa, &seed, ctx)?;
    let denom2 = projected.amp(s1, s2, ctx);
    if !(denom2 > ctx.zero()) {
        return Err(QError::Domain(format!(
            "projection norm is not positive for kappa = {kappa}"
        )));
    }
    let denom = denom2.sqrt();
    let mut out = Vec::new();
    let mut st = projected;
    let mut mu = kappa + 1;
    while mu <= mu_max {
        if st.tainted {
            return Err(QError::Truncated { needed: format!("{}", mu_max + 8) });
        }
        let norm = qfact(kappa * 2 + 1, ctx)?
            .div(&qfact(mu + kappa, ctx)?)
            .div(&qfact(mu - kappa - 1, ctx)?)
            .sqrt();
        out.push((mu, st.scaled(&norm.div(&denom))));
        st = apply_coupled(LadderSign::Plus, sys, &st, ctx);
        mu = mu + 1;
    }
    Ok(out)
}

/// Coupling coefficient `<pair | kappa, mu>` by the projection route.
pub fn cg_oracle(
    sys: &ProductSystem,
    kappa: HalfInt,
    mu: HalfInt,
    first: HalfInt,
    second: HalfInt,
    ctx: &QContext,
) -> QResult<Real> {
    let rows = coupled_rows(sys, kappa, mu, ctx)?;
    let (_, row) = rows
        .into_iter()
        .last()
        .ok_or_else(|| QError::Domain(format!("mu = {mu} below minimal weight of kappa = {kappa}")))?;
    Ok(row.amp(first, second, ctx))
}

/// Solve `M x = rhs` by Gaussian elimination with partial pivoting.
fn solve_dense(m: &mut Vec<Vec<Real>>, rhs: &mut Vec<Real>, ctx: &QContext) -> QResult<Vec<Real>> {
    let n = m.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if m[row][col].cmp_abs(&m[piv][col]) == std::cmp::Ordering::Greater {
                piv = row;
            }
        }
        if m[piv][col].is_zero() {
            return Err(QError::Domain("singular linear system".into()));
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col].div(&m[col][col]);
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = m[col][k].mul(&f);
                m[row][k] = m[row][k].sub(&t);
            }
            let t = rhs[col].mul(&f);
            rhs[row] = rhs[row].sub(&t);
        }
    }
    let mut x = vec![ctx.zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..n {
            acc = acc.sub(&m[row][k].mul(&x[k]));
        }
        x[row] = acc.div(&m[row][row]);
    }
    Ok(x)
}

/// Kernel of the coupled lowering operator on the weight-(kappa+1) space,
/// with the seed-pair amplitude normalized positive.
pub fn lowering_kernel(sys: &ProductSystem, kappa: HalfInt, ctx: &QContext) -> QResult<TensorState> {
    let wb = sys.weight_basis(kappa + 1);
    let wb_lo = sys.weight_basis(kappa);
    let cols = wb.len();
    if cols == 0 {
        return Err(QError::KernelDegenerate { dim: 0, weight: format!("{}", kappa + 1) });
    }
    let mu_cut = kappa + 4;
    // rows of K- restricted to the weight space
    let mut a: Vec<Vec<Real>> = vec![vec![ctx.zero(); cols]; wb_lo.len().max(1)];
    for (c, &(x1, x2)) in wb.iter().enumerate() {
        let img = apply_coupled(LadderSign::Minus, sys, &TensorState::basis(sys, x1, x2, mu_cut, ctx), ctx);
        for (r, &(y1, y2)) in wb_lo.iter().enumerate() {
            a[r][c] = img.amp(y1, y2, ctx);
        }
    }
    // reduced row echelon form with partial pivoting
    let rows = a.len();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    let tiny = ctx.tol(10);
    for c in 0..cols {
        let mut best = r;
        for i in r..rows {
            if a[i][c].cmp_abs(&a[best][c]) == std::cmp::Ordering::Greater {
                best = i;
            }
        }
        if r >= rows || a[best][c].abs() < tiny {
            continue;
        }
        a.swap(r, best);
        let inv = a[r][c].recip();
        for k in 0..cols {
            a[r][k] = a[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = a[r][k].mul(&f);
                    a[i][k] = a[i][k].sub(&t);
                }
            }
        }
        piv_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !piv_cols.contains(c)).collect();
    if free.len() != 1 {
        return Err(QError::KernelDegenerate { dim: free.len(), weight: format!("{}", kappa + 1) });
    }
    let f = free[0];
    let mut v = vec![ctx.zero(); cols];
    v[f] = ctx.one();
    for (i, &c) in piv_cols.iter().enumerate() {
        v[c] = a[i][f].neg();
    }
    let mut st = TensorState::zero(sys.kind(), mu_cut);
    for (i, &(x1, x2)) in wb.iter().enumerate() {
        st.push((x1.twice(), x2.twice()), v[i].clone());
    }
    st.prune();
    let (s1, s2) = seed_pair(sys, kappa)?;
    if st.amp(s1, s2, ctx).is_negative() {
        st = st.scaled(&ctx.one().neg());
    }
    Ok(st)
}

/// Coefficient rows by the kernel route.
///
/// The seed is decomposed as `a*v + K+ u` over the weight space (the image of
/// the raising operator is the complement of the kernel line), which fixes
/// the same scale the projection route produces, without using the projector
/// series.
pub fn kernel_rows(
    sys: &ProductSystem,
    kappa: HalfInt,
    mu_max: HalfInt,
    ctx: &QContext,
) -> QResult<Vec<(HalfInt, TensorState)>> {
    let v = lowering_kernel(sys, kappa, ctx)?;
    let wb = sys.weight_basis(kappa + 1);
    let wb_lo = sys.weight_basis(kappa);
    let n = wb.len();
    if n != wb_lo.len() + 1 {
        return Err(QError::KernelDegenerate { dim: n - wb_lo.len(), weight: format!("{}", kappa + 1) });
    }
    let (s1, s2) = seed_pair(sys, kappa)?;
    let mu_cut = mu_max + 4;
    // columns: v, then K+ images of the lower weight basis
    let mut m: Vec<Vec<Real>> = vec![vec![ctx.zero(); n]; n];
    let mut rhs = vec![ctx.zero(); n];
    for (i, &(x1, x2)) in wb.iter().enumerate() {
        m[i][0] = v.amp(x1, x2, ctx);
        if (x1, x2) == (s1, s2) {
            rhs[i] = ctx.one();
        }
    }
    for (u, &(y1, y2)) in wb_lo.iter().enumerate() {
        let img = apply_coupled(LadderSign::Plus, sys, &TensorState::basis(sys, y1, y2, mu_cut, ctx), ctx);
        for (i, &(x1, x2)) in wb.iter().enumerate() {
            m[i][1 + u] = img.amp(x1, x2, ctx);
        }
    }
    let sol = solve_dense(&mut m, &mut rhs, ctx)?;
    let a = sol[0].clone();
    let sv = v.amp(s1, s2, ctx);
    let ratio = a.div(&sv);
    if !(ratio > ctx.zero()) {
        return Err(QError::Domain(format!(
            "seed decomposition gave nonpositive scale for kappa = {kappa}"
        )));
    }
    let scale0 = ratio.sqrt();
    let mut out = Vec::new();
    let mut st = v.scaled(&ctx.one());
    let mut mu = kappa + 1;
    while mu <= mu_max {
        let norm = qfact(kappa * 2 + 1, ctx)?
            .div(&qfact(mu + kappa, ctx)?)
            .div(&qfact(mu - kappa - 1, ctx)?)
            .sqrt();
        out.push((mu, st.scaled(&norm.mul(&scale0))));
        st = apply_coupled(LadderSign::Plus, sys, &st, ctx);
        mu = mu + 1;
    }
    Ok(out)
}

/// Coupling coefficient by the kernel route.
pub fn cg_oracle_kernel(
    sys: &ProductSystem,
    kappa: HalfInt,
    mu: HalfInt,
    first: HalfInt,
    second: HalfInt,
    ctx: &QContext,
) -> QResult<Real> {
    let rows = kernel_rows(sys, kappa, mu, ctx)?;
    let (_, row) = rows
        .into_iter()
        .last()
        .ok_or_else(|| QError::Domain(format!("mu = {mu} below minimal weight of kappa = {kappa}")))?;
    Ok(row.amp(first, second, ctx))
}

/// `[2 K0(12)]_q`-weighted copy of a state; used by commutator checks.
pub fn apply_qnum_weight(state: &TensorState, coeff: i64, shift: HalfInt, ctx: &QContext) -> TensorState {
    let mut out = state.clone();
    for ((ta, tb), v) in out.amps.iter_mut() {
        let w = HalfInt::from_twice(ta + tb) * coeff + shift;
        *v = v.mul(&qnum_half(w, ctx));
    }
    out
}
