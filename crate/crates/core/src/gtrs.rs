//! RS, GRS and twisted RS codes, the `T_k` criterion, regimes, and the
//! span/dimension checks for Schur squares of standard twisted codes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::LinearCode;
use crate::gf::{Elem, FieldCtx, FieldError};
use crate::linalg::{LinalgError, Matrix};
use crate::poly::{dual_space_basis, twisted_basis, Poly, PolyError, SpaceBasis, TwistParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GtrsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("evaluation points repeat element {0}")]
    RepeatedPoint(u32),
    #[error("multiplier at position {0} is zero")]
    ZeroMultiplier(usize),
    #[error("{points} points but {multipliers} multipliers")]
    LengthMismatch { points: usize, multipliers: usize },
    #[error("{n} points exceed the field order {q}")]
    TooManyPoints { n: usize, q: u32 },
    #[error("length {n} is too short: {reason}")]
    TooShort { n: usize, reason: String },
    #[error("point at position {0} is zero, so its inverse is undefined")]
    ZeroPoint(usize),
    #[error("k = {k} lies in no regime for q = {q}, t = {t}; need 3 <= k <= q/2 and t >= 1")]
    NoRegime { q: u32, k: usize, t: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

/// Evaluation points and column multipliers, fixed in caller order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    ctx: Arc<FieldCtx>,
    points: Vec<Elem>,
    multipliers: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub points: Vec<u32>,
    pub multipliers: Vec<u32>,
}

impl EvalConfig {
    pub fn new(
        ctx: &Arc<FieldCtx>,
        points: Vec<Elem>,
        multipliers: Vec<Elem>,
    ) -> Result<Self, GtrsError> {
        let q = ctx.order();
        if points.len() != multipliers.len() {
            return Err(GtrsError::LengthMismatch {
                points: points.len(),
                multipliers: multipliers.len(),
            });
        }
        if points.len() > q as usize {
            return Err(GtrsError::TooManyPoints { n: points.len(), q });
        }
        let mut seen = BTreeSet::new();
        for &a in points.iter().chain(&multipliers) {
            ctx.elem(a.index().into())?;
        }
        for &a in &points {
            if !seen.insert(a) {
                return Err(GtrsError::RepeatedPoint(a.index()));
            }
        }
        if let Some(j) = multipliers.iter().position(|v| v.is_zero()) {
            return Err(GtrsError::ZeroMultiplier(j));
        }
        Ok(Self {
            ctx: ctx.clone(),
            points,
            multipliers,
        })
    }

    pub fn unit(ctx: &Arc<FieldCtx>, points: Vec<Elem>) -> Result<Self, GtrsError> {
        let n = points.len();
        Self::new(ctx, points, vec![Elem::ONE; n])
    }

    /// All field elements in canonical order with unit multipliers.
    pub fn standard(ctx: &Arc<FieldCtx>) -> Self {
        Self::unit(ctx, ctx.elements().collect()).expect("field elements are distinct")
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn multipliers(&self) -> &[Elem] {
        &self.multipliers
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn record(&self) -> EvalRecord {
        EvalRecord {
            points: self.points.iter().map(|e| e.index()).collect(),
            multipliers: self.multipliers.iter().map(|e| e.index()).collect(),
        }
    }

    /// Same points, every multiplier scaled by `c`.
    pub fn scaled(&self, c: Elem) -> Result<Self, GtrsError> {
        let v = self
            .multipliers
            .iter()
            .map(|&v| self.ctx.mul(c, v))
            .collect();
        Self::new(&self.ctx, self.points.clone(), v)
    }

    /// Rows `v * (b(a_1), ..., b(a_n))` for each `b` in `basis`.
    pub fn evaluate(&self, basis: &SpaceBasis) -> Matrix {
        let f = &self.ctx;
        let rows = basis
            .polys
            .iter()
            .map(|b| {
                b.eval_vector(&self.points)
                    .into_iter()
                    .zip(&self.multipliers)
                    .map(|(x, &v)| f.mul(x, v))
                    .collect()
            })
            .collect();
        Matrix::from_rows(f, rows, self.len()).expect("evaluations lie in the field")
    }
}

/// The raw generator matrix, one row per twisted basis polynomial.
pub fn gtrs_generator(cfg: &EvalConfig, params: &TwistParams) -> Result<Matrix, GtrsError> {
    params.validate()?;
    let n = cfg.len();
    if params.k + params.t > n {
        return Err(GtrsError::TooShort {
            n,
            reason: format!("need k + t <= n with k = {}, t = {}", params.k, params.t),
        });
    }
    if params.eta.index() >= cfg.ctx.order() {
        cfg.ctx.elem(params.eta.index().into())?;
    }
    let basis = twisted_basis(&cfg.ctx, params)?;
    Ok(cfg.evaluate(&basis))
}

pub fn gtrs_code(cfg: &EvalConfig, params: &TwistParams) -> Result<LinearCode, GtrsError> {
    Ok(LinearCode::from_matrix(&gtrs_generator(cfg, params)?))
}

pub fn grs_code(cfg: &EvalConfig, k: usize) -> Result<LinearCode, GtrsError> {
    if k > cfg.len() {
        return Err(GtrsError::TooShort {
            n: cfg.len(),
            reason: format!("need k <= n with k = {k}"),
        });
    }
    let basis = SpaceBasis {
        polys: (0..k)
            .map(|s| Poly::monomial(&cfg.ctx, s, Elem::ONE))
            .collect(),
    };
    Ok(LinearCode::from_matrix(&cfg.evaluate(&basis)))
}

/// `RS_k` on all `q` points.
pub fn rs_code(ctx: &Arc<FieldCtx>, k: usize) -> Result<LinearCode, GtrsError> {
    grs_code(&EvalConfig::standard(ctx), k)
}

/// `{(-1)^k prod_{i in I} a_i^{-1} : |I| = k}`.
pub fn t_k_set(
    ctx: &Arc<FieldCtx>,
    points: &[Elem],
    k: usize,
) -> Result<BTreeSet<Elem>, GtrsError> {
    let n = points.len();
    if k >= n {
        return Err(GtrsError::TooShort {
            n,
            reason: format!("need a proper subset, k = {k} < n"),
        });
    }
    let inverses = points
        .iter()
        .enumerate()
        .map(|(j, &a)| ctx.inv(a).map_err(|_| GtrsError::ZeroPoint(j)))
        .collect::<Result<Vec<_>, _>>()?;
    let sign = if k.is_multiple_of(2) {
        Elem::ONE
    } else {
        ctx.neg(Elem::ONE)
    };
    let mut out = BTreeSet::new();
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        let prod = comb.iter().fold(sign, |acc, &i| ctx.mul(acc, inverses[i]));
        out.insert(prod);
        // advance to the next k-subset
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if comb[i] < n - k + i {
                break;
            }
        }
        comb[i] += 1;
        for j in i + 1..k {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// The three parameter regimes, keyed on `k` against `q` and `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `(q-t+1)/2 < k <= q/2`
    R1,
    /// `(q-2t+1)/2 < k <= (q-t+1)/2`
    R2,
    /// `3 <= k <= (q-2t+1)/2`
    R3,
}

impl Regime {
    pub fn inequality(self) -> &'static str {
        match self {
            Regime::R1 => "(q-t+1)/2 < k <= q/2",
            Regime::R2 => "(q-2t+1)/2 < k <= (q-t+1)/2",
            Regime::R3 => "3 <= k <= (q-2t+1)/2",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self, self.inequality())
    }
}

pub fn regime(ctx: &FieldCtx, k: usize, t: usize) -> Result<Regime, GtrsError> {
    let q = ctx.order() as usize;
    if k < 3 || t < 1 || 2 * k > q {
        return Err(GtrsError::NoRegime { q: q as u32, k, t });
    }
    // doubled to stay in integers
    let (k2, t) = (2 * k as isize, t as isize);
    let q = q as isize;
    Ok(if k2 > q - t + 1 {
        Regime::R1
    } else if k2 > q - 2 * t + 1 {
        Regime::R2
    } else {
        Regime::R3
    })
}

/// MDS iff `eta` lies outside `T_k`, for the `(h, t) = (0, 1)` shape only.
pub fn classify_by_tk(
    cfg: &EvalConfig,
    params: &TwistParams,
) -> Result<crate::codes::ClassTag, GtrsError> {
    if params.h != 0 || params.t != 1 {
        return Err(GtrsError::OutOfRange(format!(
            "T_k classification needs (h, t) = (0, 1), got ({}, {})",
            params.h, params.t
        )));
    }
    let tk = t_k_set(&cfg.ctx, &cfg.points, params.k)?;
    Ok(if tk.contains(&params.eta) {
        crate::codes::ClassTag::Nmds
    } else {
        crate::codes::ClassTag::Mds
    })
}

/// Up to `count` distinct nonzero elements, in the order a seeded generator
/// first produces them.
pub fn seeded_nonzero(ctx: &FieldCtx, seed: u64, count: usize) -> Vec<Elem> {
    let q = ctx.order();
    let count = count.min(q as usize - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let e = Elem(rng.gen_range(0..q));
        if !e.is_zero() && !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

/// Shape of `(h, t)` against `k`, as used to pick a spanning set.
pub fn shape_label(params: &TwistParams) -> &'static str {
    if params.is_full_twist() {
        "h=0,t=k-1"
    } else if params.h == 0 {
        "h=0,t<=k-2"
    } else {
        "h>=1"
    }
}

/// Finer split of the `h >= 1` shape.
pub fn hook_label(params: &TwistParams) -> &'static str {
    let TwistParams { k, t, h, .. } = *params;
    match h {
        0 => shape_label(params),
        1 if k == 3 && t == 1 => "k=3,h=1,t=1",
        1 => "h=1",
        _ if h == k - 2 && t == 1 => "h=k-2,t=1",
        _ => "2<=h<=k-3",
    }
}

/// Outcome of comparing a computed row space with a closed-form one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub suite: String,
    pub case: String,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub h: usize,
    pub eta: u32,
    pub regime: Option<Regime>,
    pub verdict: bool,
    pub computed_dim: usize,
    pub expected_dim: usize,
    pub formula_dim: Option<usize>,
    pub computed_digest: String,
    pub expected_digest: String,
    /// Reduced rows of either side that the other side misses.
    pub distinguishing_rows: Vec<Vec<u32>>,
}

fn compare(
    suite: &str,
    case: String,
    cfg: &EvalConfig,
    params: &TwistParams,
    regime: Option<Regime>,
    computed: &Matrix,
    expected: &Matrix,
    formula_dim: Option<usize>,
) -> Result<SpanReport, GtrsError> {
    let a = computed.rref().matrix;
    let b = expected.rref().matrix;
    let mut distinguishing_rows = Vec::new();
    for (from, into) in [(&b, &a), (&a, &b)] {
        for row in from.rows() {
            let probe = Matrix::from_rows(cfg.ctx(), vec![row.to_vec()], cfg.len())?;
            if !into.row_space_contains(&probe)? {
                distinguishing_rows.push(row.iter().map(|e| e.index()).collect());
            }
        }
    }
    let dims_ok = formula_dim.is_none_or(|d| d == a.nrows());
    Ok(SpanReport {
        suite: suite.to_string(),
        case,
        q: cfg.ctx().order(),
        n: cfg.len(),
        k: params.k,
        t: params.t,
        h: params.h,
        eta: params.eta.index(),
        regime,
        verdict: distinguishing_rows.is_empty() && dims_ok,
        computed_dim: a.nrows(),
        expected_dim: b.nrows(),
        formula_dim,
        computed_digest: a.digest(),
        expected_digest: b.digest(),
        distinguishing_rows,
    })
}

fn poly(ctx: &Arc<FieldCtx>, terms: &[(usize, Elem)]) -> Poly {
    Poly::from_terms(ctx, terms)
}

fn monomials(ctx: &Arc<FieldCtx>, exps: impl IntoIterator<Item = usize>) -> Vec<Poly> {
    exps.into_iter()
        .map(|e| Poly::monomial(ctx, e, Elem::ONE))
        .collect()
}

/// Closed-form spanning set of the Schur square of a twisted space with
/// unit multipliers, valid at any set of points.
pub fn square_spanning_set(
    ctx: &Arc<FieldCtx>,
    params: &TwistParams,
) -> Result<SpaceBasis, GtrsError> {
    params.validate()?;
    let TwistParams { k, t, eta, .. } = *params;
    let eta2 = ctx.mul(eta, eta);
    let polys = match shape_label(params) {
        "h=0,t=k-1" => {
            let mut p = monomials(
                ctx,
                (0..=3 * k - 3).filter(|&s| s != 0 && s != 1 && s != 2 * k - 1),
            );
            p.push(poly(ctx, &[(1, Elem::ONE), (2 * k - 1, eta)]));
            p.push(poly(ctx, &[(0, Elem::ONE), (4 * k - 4, eta2)]));
            p
        }
        "h=0,t<=k-2" => {
            let mut p = monomials(ctx, 1..=2 * k - 2 + t);
            p.push(poly(ctx, &[(0, Elem::ONE), (2 * k + 2 * t - 2, eta2)]));
            p
        }
        _ if (k, t, params.h) == (3, 1, 1) => {
            // the sums i + j over {0, 2} miss 3
            let mut p = monomials(ctx, [0, 2, 4, 6]);
            p.push(poly(ctx, &[(1, Elem::ONE), (3, eta)]));
            p.push(poly(ctx, &[(3, Elem::ONE), (5, eta)]));
            p
        }
        _ => monomials(ctx, (0..=2 * k - 2 + t).chain([2 * k + 2 * t - 2])),
    };
    Ok(SpaceBasis { polys })
}

/// Closed-form spanning set and dimension of the Schur square of the standard
/// twisted code, on all `q` points, per regime.
pub fn standard_square_spanning_set(
    ctx: &Arc<FieldCtx>,
    params: &TwistParams,
) -> Result<(Regime, SpaceBasis, usize), GtrsError> {
    params.validate()?;
    let TwistParams { k, t, h, eta } = *params;
    let q = ctx.order() as usize;
    let reg = regime(ctx, k, t)?;
    let eta2 = ctx.mul(eta, eta);
    let (polys, dim) = match reg {
        Regime::R1 => (monomials(ctx, 0..q), q),
        Regime::R2 if params.is_full_twist() => {
            let mut p;
            if q == 4 * k - 4 {
                p = monomials(
                    ctx,
                    (0..=3 * k - 3).filter(|&s| s != 0 && s != 1 && s != 2 * k - 1),
                );
                p.push(poly(ctx, &[(1, Elem::ONE), (2 * k - 1, eta)]));
                p.push(poly(ctx, &[(0, Elem::ONE), (1, eta2)]));
            } else if q < 4 * k - 4 {
                p = monomials(ctx, (0..=3 * k - 3).filter(|&s| s != 1 && s != 2 * k - 1));
                p.push(poly(ctx, &[(1, Elem::ONE), (2 * k - 1, eta)]));
            } else {
                return Err(PolyError::Uncovered {
                    q: q as u32,
                    k,
                    t,
                    h,
                }
                .into());
            }
            (p, 3 * k - 3)
        }
        Regime::R2 => (monomials(ctx, 0..=2 * k - 2 + t), 2 * k - 1 + t),
        Regime::R3 => {
            let dim = match shape_label(params) {
                "h=0,t=k-1" => 3 * k - 3,
                "h=0,t<=k-2" => 2 * k - 1 + t,
                _ if (k, t, h) == (3, 1, 1) => 6,
                _ => 2 * k + t,
            };
            (square_spanning_set(ctx, params)?.polys, dim)
        }
    };
    Ok((reg, SpaceBasis { polys }, dim))
}

/// Schur square of the unit-multiplier twisted code on `points` against the
/// closed-form spanning set.
pub fn verify_square_span(cfg: &EvalConfig, params: &TwistParams) -> Result<SpanReport, GtrsError> {
    let unit = EvalConfig::unit(cfg.ctx(), cfg.points().to_vec())?;
    let square = gtrs_code(&unit, params)?.schur_square();
    let expected = unit.evaluate(&square_spanning_set(cfg.ctx(), params)?);
    let reg = regime(cfg.ctx(), params.k, params.t).ok();
    compare(
        "L31",
        hook_label(params).to_string(),
        &unit,
        params,
        reg,
        square.generator(),
        &expected,
        None,
    )
}

/// Schur square of the standard twisted code against the per-regime
/// spanning set and dimension.
pub fn verify_square_standard(
    ctx: &Arc<FieldCtx>,
    params: &TwistParams,
) -> Result<SpanReport, GtrsError> {
    let cfg = EvalConfig::standard(ctx);
    let (reg, basis, dim) = standard_square_spanning_set(ctx, params)?;
    let square = gtrs_code(&cfg, params)?.schur_square();
    compare(
        "L32",
        shape_label(params).to_string(),
        &cfg,
        params,
        Some(reg),
        square.generator(),
        &cfg.evaluate(&basis),
        Some(dim),
    )
}

/// Dual of the standard Schur square against the evaluations of the closed-form
/// polynomial space.
pub fn verify_square_dual(
    ctx: &Arc<FieldCtx>,
    params: &TwistParams,
) -> Result<SpanReport, GtrsError> {
    let cfg = EvalConfig::standard(ctx);
    let reg = regime(ctx, params.k, params.t)?;
    let square = gtrs_code(&cfg, params)?.schur_square();
    let dual = square.dual();
    let basis = dual_space_basis(ctx, params)?;
    let expected = cfg.evaluate(&basis);
    let mut report = compare(
        "L34",
        shape_label(params).to_string(),
        &cfg,
        params,
        Some(reg),
        dual.generator(),
        &expected,
        Some(basis.dim()),
    )?;
    // the closed-form basis must itself be independent
    report.verdict &= basis.is_independent(ctx);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumReport {
    pub q: u32,
    pub l: usize,
    pub pairs: usize,
    pub nonzero_pairs: Vec<(usize, usize)>,
    pub verdict: bool,
}

/// `sum_a a^(s1 + s2) = 0` for `s1 <= l` and `s2 <= q - 2 - l`.
pub fn verify_power_sums(ctx: &FieldCtx, l: usize) -> Result<PowerSumReport, GtrsError> {
    let q = ctx.order() as usize;
    if l == 0 || l >= q - 1 {
        return Err(GtrsError::OutOfRange(format!(
            "need 0 < l < q - 1, got l = {l}, q = {q}"
        )));
    }
    let elements: Vec<Elem> = ctx.elements().collect();
    let sums: Vec<Elem> = (0..=q - 2)
        .map(|e| ctx.sum(elements.iter().map(|&a| ctx.pow(a, e as u64))))
        .collect();
    let mut pairs = 0;
    let mut nonzero_pairs = Vec::new();
    for s1 in 0..=l {
        for s2 in 0..=q - 2 - l {
            pairs += 1;
            if !sums[s1 + s2].is_zero() {
                nonzero_pairs.push((s1, s2));
            }
        }
    }
    Ok(PowerSumReport {
        q: q as u32,
        l,
        pairs,
        verdict: nonzero_pairs.is_empty(),
        nonzero_pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub suite: String,
    pub q: u32,
    pub k: usize,
    pub expected: usize,
    pub computed: usize,
    pub digest: String,
    pub verdict: bool,
}

/// `RS_k` dual equals `RS_(q-k)`.
pub fn verify_rs_duality(ctx: &Arc<FieldCtx>, k: usize) -> Result<DimReport, GtrsError> {
    let q = ctx.order() as usize;
    if k == 0 || k >= q {
        return Err(GtrsError::OutOfRange(format!(
            "need 1 <= k <= q - 1, got {k}"
        )));
    }
    let dual = rs_code(ctx, k)?.dual();
    let other = rs_code(ctx, q - k)?;
    Ok(DimReport {
        suite: "rsdual".into(),
        q: q as u32,
        k,
        expected: q - k,
        computed: dual.dim(),
        digest: dual.generator().digest(),
        verdict: dual == other,
    })
}

/// Schur square of `RS_k` has dimension `2k - 1` when `2k - 1 <= q`.
pub fn verify_rs_square(ctx: &Arc<FieldCtx>, k: usize) -> Result<DimReport, GtrsError> {
    let q = ctx.order() as usize;
    if k == 0 || 2 * k > q + 1 {
        return Err(GtrsError::OutOfRange(format!(
            "need 1 <= k <= (q + 1)/2, got {k}"
        )));
    }
    let square = rs_code(ctx, k)?.schur_square();
    Ok(DimReport {
        suite: "rssquare".into(),
        q: q as u32,
        k,
        expected: 2 * k - 1,
        computed: square.dim(),
        digest: square.generator().digest(),
        verdict: square == rs_code(ctx, 2 * k - 1)?,
    })
}
