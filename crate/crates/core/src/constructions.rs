//! Self-orthogonality of twisted codes: the polynomial criterion as a linear
//! system, the non-existence predicates, explicit constructions, and a
//! witness-space search.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::LinearCode;
use crate::gf::{Elem, FieldCtx, FieldError, FieldSpec};
use crate::gtrs::{gtrs_generator, regime, EvalConfig, GtrsError, Regime};
use crate::linalg::{AffineSolution, LinalgError, Matrix};
use crate::poly::{dual_space_basis, Poly, PolyError, SpaceBasis, TwistParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Gtrs(#[from] GtrsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("window violated: {inequality} ({detail})")]
    Window { inequality: String, detail: String },
    #[error("no admissible k for q = {q}, t = {t}: {detail}")]
    EmptyWindow { q: u32, t: usize, detail: String },
    #[error("invalid construction input: {0}")]
    Invalid(String),
}

fn window(inequality: &str, detail: String) -> ConstructionError {
    ConstructionError::Window {
        inequality: inequality.to_string(),
        detail,
    }
}

/// `x / 2` rendered exactly.
fn half(x: isize) -> String {
    if x % 2 == 0 {
        format!("{}", x / 2)
    } else {
        format!("{}.5", (x - 1) / 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

/// Result of solving for a polynomial that certifies self-orthogonality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfOrthWitness {
    pub verdict: Feasibility,
    /// Dimension of the polynomial space searched.
    pub basis_dim: usize,
    /// Nonzero terms `exponent -> coefficient index` of the witness.
    pub witness: Option<BTreeMap<usize, u32>>,
    /// A vector `u` over the field elements (canonical order) with
    /// `u A = 0` and `u . b != 0` for the system `A y = b`.
    pub residual: Option<Vec<u32>>,
    /// Whether the witness or residual re-checked successfully.
    pub validated: bool,
}

impl SelfOrthWitness {
    pub fn is_feasible(&self) -> bool {
        self.verdict == Feasibility::Feasible
    }

    pub fn witness_poly(&self, ctx: &Arc<FieldCtx>) -> Option<Poly> {
        self.witness.as_ref().map(|terms| {
            let terms: Vec<(usize, Elem)> = terms.iter().map(|(&e, &c)| (e, Elem(c))).collect();
            Poly::from_terms(ctx, &terms)
        })
    }
}

fn check_criterion_window(cfg: &EvalConfig, params: &TwistParams) -> Result<(), ConstructionError> {
    params.validate()?;
    let n = cfg.len();
    if 2 * params.k > n {
        return Err(window("2k <= n", format!("2*{} <= {n} is false", params.k)));
    }
    Ok(())
}

/// Values `v_j^2` on the points and zero elsewhere, indexed by canonical element order.
fn target_vector(cfg: &EvalConfig) -> Vec<Elem> {
    let f = cfg.ctx();
    let mut b = vec![Elem::ZERO; f.order() as usize];
    for (&a, &v) in cfg.points().iter().zip(cfg.multipliers()) {
        b[a.index() as usize] = f.mul(v, v);
    }
    b
}

/// Decides self-orthogonality of the twisted code by searching the dual
/// polynomial space for `f` with `f(a_j) = v_j^2` on the points and `f = 0`
/// elsewhere.
pub fn self_orthogonality_check(
    cfg: &EvalConfig,
    params: &TwistParams,
) -> Result<SelfOrthWitness, ConstructionError> {
    check_criterion_window(cfg, params)?;
    let ctx = cfg.ctx();
    let basis = dual_space_basis(ctx, params)?;
    let all: Vec<Elem> = ctx.elements().collect();
    // rows indexed by field elements, columns by basis polynomials
    let a = basis.evaluation_matrix(ctx, &all).transpose();
    let a = if basis.is_empty() {
        Matrix::zeros(ctx, all.len(), 0)
    } else {
        a
    };
    let b = target_vector(cfg);
    match a.solve_affine(&b)? {
        AffineSolution::Feasible { particular, .. } => {
            let f = combine(ctx, &basis, &particular);
            let validated = validate_witness(cfg, params, &f)?;
            Ok(SelfOrthWitness {
                verdict: Feasibility::Feasible,
                basis_dim: basis.dim(),
                witness: Some(f.terms()),
                residual: None,
                validated,
            })
        }
        AffineSolution::Infeasible { .. } => {
            let u = a
                .transpose()
                .nullspace()
                .rows()
                .find(|u| !ctx.dot(u, &b).is_zero())
                .map(<[Elem]>::to_vec);
            let validated = u.as_ref().is_some_and(|u| {
                a.transpose().apply(u).iter().all(|e| e.is_zero()) && !ctx.dot(u, &b).is_zero()
            });
            Ok(SelfOrthWitness {
                verdict: Feasibility::Infeasible,
                basis_dim: basis.dim(),
                witness: None,
                residual: u.map(|u| u.iter().map(|e| e.index()).collect()),
                validated,
            })
        }
    }
}

fn combine(ctx: &Arc<FieldCtx>, basis: &SpaceBasis, coeffs: &[Elem]) -> Poly {
    basis
        .polys
        .iter()
        .zip(coeffs)
        .fold(Poly::zero(ctx), |acc, (p, &c)| {
            acc.add(&p.scale(c)).expect("same field")
        })
}

/// `f(a_j) = v_j^2`, `f = 0` off the points, and `f` in the dual polynomial space.
pub fn validate_witness(
    cfg: &EvalConfig,
    params: &TwistParams,
    f: &Poly,
) -> Result<bool, ConstructionError> {
    let ctx = cfg.ctx();
    let b = target_vector(cfg);
    let values_ok = ctx.elements().all(|x| f.eval(x) == b[x.index() as usize]);
    let basis = dual_space_basis(ctx, params)?;
    let member = if f.is_zero() {
        true
    } else {
        basis.contains(ctx, f)
    };
    Ok(values_ok && member)
}

/// Dimension alone rules out self-orthogonality: `k > (q-t+1)/2`.
pub fn excluded_by_dimension(q: u32, k: usize, t: usize) -> bool {
    2 * k as isize > q as isize - t as isize + 1
}

/// Length alone rules out self-orthogonality: `(h, t) != (0, k-1)`,
/// `3 <= k <= (q-t+1)/2` and `n < 2k + t`.
pub fn excluded_by_length(q: u32, n: usize, k: usize, t: usize, h: usize) -> bool {
    let full_twist = h == 0 && t + 1 == k;
    !full_twist && k >= 3 && !excluded_by_dimension(q, k, t) && n < 2 * k + t
}

/// Every polynomial of the dual space vanishing off `points`.
pub fn witness_space(
    ctx: &Arc<FieldCtx>,
    points: &[Elem],
    params: &TwistParams,
) -> Result<Vec<Poly>, ConstructionError> {
    let basis = dual_space_basis(ctx, params)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let off: Vec<Elem> = ctx.elements().filter(|a| !points.contains(a)).collect();
    let kernel = if off.is_empty() {
        Matrix::identity(ctx, basis.dim())
    } else {
        basis.evaluation_matrix(ctx, &off).transpose().nullspace()
    };
    Ok(kernel.rows().map(|y| combine(ctx, &basis, y)).collect())
}

/// Which explicit construction, with its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "which", rename_all = "lowercase")]
pub enum ConstructionSpec {
    /// All but `excluded` points, `v_j = prod (a_j - b)` over excluded `b`.
    Tc1 {
        field: FieldSpec,
        k: usize,
        t: usize,
        h: usize,
        eta: u32,
        excluded: Vec<u32>,
    },
    /// Characteristic two, `v_j = prod (a_j - b)^(2^(m-1))` over missing `b`.
    Tc2 {
        field: FieldSpec,
        k: usize,
        t: usize,
        h: usize,
        eta: u32,
        points: Vec<u32>,
    },
    /// The whole subfield of order `p^r`, unit multipliers.
    Ct4 {
        field: FieldSpec,
        r: u32,
        condition: u8,
        k: usize,
        t: usize,
        h: usize,
        eta: u32,
    },
    /// Nonzero elements of the subfield of order `2^r`, half-power multipliers.
    Ct5 {
        field: FieldSpec,
        r: u32,
        condition: u8,
        k: usize,
        t: usize,
        h: usize,
        eta: u32,
    },
}

/// A built construction and the polynomial its multipliers come from.
#[derive(Debug, Clone)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub config: EvalConfig,
    pub params: TwistParams,
    pub generator: Matrix,
    pub code: LinearCode,
    pub regime: Regime,
    pub witness: Poly,
}

impl Construction {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.config.ctx()
    }

    pub fn gram_is_zero(&self) -> bool {
        self.generator.gram().is_zero()
    }
}

impl ConstructionSpec {
    pub fn field(&self) -> &FieldSpec {
        match self {
            Self::Tc1 { field, .. }
            | Self::Tc2 { field, .. }
            | Self::Ct4 { field, .. }
            | Self::Ct5 { field, .. } => field,
        }
    }

    pub fn build(&self) -> Result<Construction, ConstructionError> {
        let ctx = FieldCtx::new(self.field().clone())?;
        let elems = |ix: &[u32]| -> Result<Vec<Elem>, FieldError> {
            ix.iter().map(|&i| ctx.elem(i.into())).collect()
        };
        match self {
            Self::Tc1 {
                k,
                t,
                h,
                eta,
                excluded,
                ..
            } => construct_punctured(
                &ctx,
                *k,
                *t,
                *h,
                ctx.elem((*eta).into())?,
                &elems(excluded)?,
                self,
            ),
            Self::Tc2 {
                k,
                t,
                h,
                eta,
                points,
                ..
            } => construct_binary_subset(
                &ctx,
                *k,
                *t,
                *h,
                ctx.elem((*eta).into())?,
                &elems(points)?,
                self,
            ),
            Self::Ct4 {
                r,
                condition,
                k,
                t,
                h,
                eta,
                ..
            } => construct_subfield(
                &ctx,
                *r,
                *condition,
                *k,
                *t,
                *h,
                ctx.elem((*eta).into())?,
                self,
            ),
            Self::Ct5 {
                r,
                condition,
                k,
                t,
                h,
                eta,
                ..
            } => construct_binary_subfield_units(
                &ctx,
                *r,
                *condition,
                *k,
                *t,
                *h,
                ctx.elem((*eta).into())?,
                self,
            ),
        }
    }
}

/// Strict window `(q-2t+1)/2 < k < (q-t+1)/2`.
fn check_strict_window(q: u32, k: usize, t: usize) -> Result<(), ConstructionError> {
    let (q, k2, t) = (q as isize, 2 * k as isize, t as isize);
    let (lo, hi) = (q - 2 * t + 1, q - t + 1);
    // integers k with lo < 2k < hi
    let first = lo.div_euclid(2) + 1;
    let last = (hi - 1).div_euclid(2);
    if first.max(3) > last {
        return Err(ConstructionError::EmptyWindow {
            q: q as u32,
            t: t as usize,
            detail: format!("no integer k >= 3 with {} < k < {}", half(lo), half(hi)),
        });
    }
    if k2 <= lo {
        return Err(window(
            "k > (q-2t+1)/2",
            format!("{} > {} is false", k2 / 2, half(lo)),
        ));
    }
    if k2 >= hi {
        return Err(window(
            "k < (q-t+1)/2",
            format!("{} < {} is false", k2 / 2, half(hi)),
        ));
    }
    Ok(())
}

fn finish(
    spec: &ConstructionSpec,
    ctx: &Arc<FieldCtx>,
    points: Vec<Elem>,
    multipliers: Vec<Elem>,
    params: TwistParams,
    witness: Poly,
) -> Result<Construction, ConstructionError> {
    let config = EvalConfig::new(ctx, points, multipliers)?;
    let generator = gtrs_generator(&config, &params)?;
    let code = LinearCode::from_matrix(&generator);
    let regime = regime(ctx, params.k, params.t)?;
    Ok(Construction {
        spec: spec.clone(),
        config,
        params,
        generator,
        code,
        regime,
        witness,
    })
}

fn vanishing_poly(ctx: &Arc<FieldCtx>, roots: impl IntoIterator<Item = Elem>) -> Poly {
    roots
        .into_iter()
        .fold(Poly::constant(ctx, Elem::ONE), |acc, b| {
            let lin = Poly::from_terms(ctx, &[(0, ctx.neg(b)), (1, Elem::ONE)]);
            acc.mul(&lin).expect("same field")
        })
}

fn product_at(ctx: &FieldCtx, a: Elem, others: &[Elem], power: u64) -> Elem {
    let base = ctx.product(others.iter().map(|&b| ctx.sub(a, b)));
    ctx.pow(base, power)
}

/// Punctures `excluded` from the full field; each multiplier is the product of
/// differences to the excluded points.
pub fn construct_punctured(
    ctx: &Arc<FieldCtx>,
    k: usize,
    t: usize,
    h: usize,
    eta: Elem,
    excluded: &[Elem],
    spec: &ConstructionSpec,
) -> Result<Construction, ConstructionError> {
    let params = TwistParams::new(k, t, h, eta)?;
    let q = ctx.order();
    check_strict_window(q, k, t)?;
    let l = excluded.len() as isize;
    let room = q as isize - 2 * k as isize - t as isize;
    if 2 * l > room {
        return Err(window(
            "l <= (q-2k-t)/2",
            format!("{l} <= {} is false", half(room)),
        ));
    }
    let mut sorted = excluded.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != excluded.len() {
        return Err(ConstructionError::Invalid(
            "excluded elements repeat".into(),
        ));
    }
    let points: Vec<Elem> = ctx.elements().filter(|a| !excluded.contains(a)).collect();
    let v = points
        .iter()
        .map(|&a| product_at(ctx, a, excluded, 1))
        .collect();
    let root = vanishing_poly(ctx, excluded.iter().copied());
    let witness = root.mul(&root)?;
    finish(spec, ctx, points, v, params, witness)
}

/// Characteristic two, arbitrary points; multipliers are square roots of the
/// vanishing polynomial of the missing points.
pub fn construct_binary_subset(
    ctx: &Arc<FieldCtx>,
    k: usize,
    t: usize,
    h: usize,
    eta: Elem,
    points: &[Elem],
    spec: &ConstructionSpec,
) -> Result<Construction, ConstructionError> {
    let params = TwistParams::new(k, t, h, eta)?;
    let (p, m) = (ctx.characteristic(), ctx.degree());
    if p != 2 || m <= 2 {
        return Err(window("q = 2^m with m > 2", format!("q = {}^{}", p, m)));
    }
    check_strict_window(ctx.order(), k, t)?;
    let n = points.len();
    if n < 2 * k + t {
        return Err(window(
            "n >= 2k+t",
            format!("{n} >= {} is false", 2 * k + t),
        ));
    }
    let missing: Vec<Elem> = ctx.elements().filter(|a| !points.contains(a)).collect();
    let power = 1u64 << (m - 1);
    let v = points
        .iter()
        .map(|&a| product_at(ctx, a, &missing, power))
        .collect();
    let witness = vanishing_poly(ctx, missing.iter().copied());
    finish(spec, ctx, points.to_vec(), v, params, witness)
}

fn check_subfield(ctx: &FieldCtx, r: u32) -> Result<(), ConstructionError> {
    let m = ctx.degree();
    if r < 3 {
        return Err(window("r >= 3", format!("r = {r}")));
    }
    if !m.is_multiple_of(r) {
        return Err(window("r | m", format!("{r} does not divide {m}")));
    }
    if r >= m {
        return Err(window("r < m", format!("r = {r}, m = {m}")));
    }
    Ok(())
}

/// The arithmetic condition tying `(k, t)` to the subset size `size`.
/// `order` lists the condition shapes in their numbering.
fn check_condition(
    condition: u8,
    order: [Shape; 4],
    size: u64,
    size_label: &str,
    k: usize,
    t: usize,
) -> Result<(), ConstructionError> {
    let Some(shape) = (condition as usize)
        .checked_sub(1)
        .and_then(|i| order.get(i))
    else {
        return Err(ConstructionError::Invalid(format!(
            "condition must be 1..=4, got {condition}"
        )));
    };
    let (k, t) = (k as u64, t as u64);
    let (shape_ok, shape_text, lhs, lhs_text) = match shape {
        Shape::TOne => (t == 1, "t = 1", 2 * k + 3, "2k+t+2"),
        Shape::TOdd => (t % 2 == 1 && t >= 3, "t odd, t >= 3", 2 * k + t, "2k+t"),
        Shape::TTwo => (t == 2, "t = 2", 2 * k + 5, "2k+t+3"),
        Shape::TEven => (
            t % 2 == 0 && t >= 4,
            "t even, t >= 4",
            2 * k + t + 1,
            "2k+t+1",
        ),
    };
    if !shape_ok {
        return Err(window(shape_text, format!("t = {t}")));
    }
    if lhs != size {
        return Err(window(
            &format!("{lhs_text} = {size_label}"),
            format!("{lhs} = {size} is false"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    TOne,
    TOdd,
    TTwo,
    TEven,
}

/// The subfield of order `p^r` as evaluation set with unit multipliers.
#[allow(clippy::too_many_arguments)]
pub fn construct_subfield(
    ctx: &Arc<FieldCtx>,
    r: u32,
    condition: u8,
    k: usize,
    t: usize,
    h: usize,
    eta: Elem,
    spec: &ConstructionSpec,
) -> Result<Construction, ConstructionError> {
    let params = TwistParams::new(k, t, h, eta)?;
    check_subfield(ctx, r)?;
    let size = u64::from(ctx.characteristic()).pow(r);
    check_condition(
        condition,
        [Shape::TOne, Shape::TOdd, Shape::TTwo, Shape::TEven],
        size,
        "p^r",
        k,
        t,
    )?;
    let points = ctx.subfield_elements(r)?;
    let outside: Vec<Elem> = ctx.elements().filter(|a| !points.contains(a)).collect();
    let witness = vanishing_poly(ctx, outside);
    let n = points.len();
    finish(spec, ctx, points, vec![Elem::ONE; n], params, witness)
}

/// Nonzero elements of the subfield of order `2^r`; multipliers are square roots
/// of the vanishing polynomial of everything else.
#[allow(clippy::too_many_arguments)]
pub fn construct_binary_subfield_units(
    ctx: &Arc<FieldCtx>,
    r: u32,
    condition: u8,
    k: usize,
    t: usize,
    h: usize,
    eta: Elem,
    spec: &ConstructionSpec,
) -> Result<Construction, ConstructionError> {
    let params = TwistParams::new(k, t, h, eta)?;
    if ctx.characteristic() != 2 {
        return Err(window(
            "q = 2^m",
            format!("characteristic {}", ctx.characteristic()),
        ));
    }
    check_subfield(ctx, r)?;
    check_condition(
        condition,
        [Shape::TTwo, Shape::TEven, Shape::TOne, Shape::TOdd],
        (1u64 << r) - 1,
        "2^r-1",
        k,
        t,
    )?;
    let points: Vec<Elem> = ctx
        .subfield_elements(r)?
        .into_iter()
        .filter(|a| !a.is_zero())
        .collect();
    let outside: Vec<Elem> = ctx.elements().filter(|a| !points.contains(a)).collect();
    let power = 1u64 << (ctx.degree() - 1);
    let v = points
        .iter()
        .map(|&a| product_at(ctx, a, &outside, power))
        .collect();
    let witness = vanishing_poly(ctx, outside);
    finish(spec, ctx, points, v, params, witness)
}

/// First element outside the subfield of order `p^r` drawn by a seeded generator.
pub fn sample_eta_outside_subfield(
    ctx: &FieldCtx,
    r: u32,
    seed: u64,
) -> Result<Elem, ConstructionError> {
    let sub = ctx.subfield_elements(r)?;
    if sub.len() == ctx.order() as usize {
        return Err(ConstructionError::Invalid(format!(
            "subfield of degree {r} is the whole field"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let e = Elem(rng.gen_range(0..ctx.order()));
        if !sub.contains(&e) {
            return Ok(e);
        }
    }
}

/// One self-orthogonal code found by the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub eta: u32,
    pub points: Vec<u32>,
    pub multipliers: Vec<u32>,
    pub witness: BTreeMap<usize, u32>,
    pub gram_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub h: usize,
    pub samples: usize,
    pub seed: u64,
    pub dual_dim: usize,
    pub excluded_by_dimension: bool,
    pub excluded_by_length: bool,
    pub reason: Option<String>,
    pub found: usize,
    pub findings: Vec<Finding>,
}

/// Largest number of witness-space elements examined per sample.
pub const SEARCH_CANDIDATES: usize = 4096;

/// Samples point sets and twist coefficients, and looks for a polynomial in the
/// dual space that vanishes off the points and is a nonzero square on them.
pub fn search_cell(
    ctx: &Arc<FieldCtx>,
    n: usize,
    k: usize,
    t: usize,
    h: usize,
    samples: usize,
    seed: u64,
    keep: usize,
) -> Result<SearchOutcome, ConstructionError> {
    let q = ctx.order();
    let probe = TwistParams::new(k, t, h, Elem::ONE)?;
    if n > q as usize || 2 * k > n {
        return Err(window("2k <= n <= q", format!("k = {k}, n = {n}, q = {q}")));
    }
    let dual_dim = dual_space_basis(ctx, &probe)?.dim();
    let mut out = SearchOutcome {
        q,
        n,
        k,
        t,
        h,
        samples,
        seed,
        dual_dim,
        excluded_by_dimension: excluded_by_dimension(q, k, t),
        excluded_by_length: excluded_by_length(q, n, k, t, h),
        reason: None,
        found: 0,
        findings: Vec::new(),
    };
    if dual_dim == 0 {
        out.reason = Some("V⊥ empty".into());
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Elem> = ctx.elements().collect();
    for _ in 0..samples {
        let mut points = all.clone();
        points.shuffle(&mut rng);
        points.truncate(n);
        points.sort();
        let eta = Elem(rng.gen_range(1..q));
        let params = TwistParams::new(k, t, h, eta)?;
        let space = witness_space(ctx, &points, &params)?;
        if space.is_empty() {
            continue;
        }
        let total = (q as u128).checked_pow(space.len() as u32);
        let candidates: Vec<Vec<Elem>> = match total {
            Some(total) if total <= SEARCH_CANDIDATES as u128 => (1..total as u64)
                .map(|mut i| {
                    (0..space.len())
                        .map(|_| {
                            let e = Elem((i % q as u64) as u32);
                            i /= q as u64;
                            e
                        })
                        .collect()
                })
                .collect(),
            _ => (0..SEARCH_CANDIDATES)
                .map(|_| {
                    (0..space.len())
                        .map(|_| Elem(rng.gen_range(0..q)))
                        .collect()
                })
                .collect(),
        };
        let hit = candidates.iter().find_map(|coeffs| {
            let f = space
                .iter()
                .zip(coeffs)
                .fold(Poly::zero(ctx), |acc, (p, &c)| {
                    acc.add(&p.scale(c)).expect("same field")
                });
            let v: Option<Vec<Elem>> = points
                .iter()
                .map(|&a| {
                    let y = f.eval(a);
                    if y.is_zero() {
                        None
                    } else {
                        ctx.sqrt(y)
                    }
                })
                .collect();
            v.map(|v| (f, v))
        });
        if let Some((f, v)) = hit {
            out.found += 1;
            if out.findings.len() < keep {
                let cfg = EvalConfig::new(ctx, points.clone(), v.clone())?;
                let gram_zero = gtrs_generator(&cfg, &params)?.gram().is_zero();
                out.findings.push(Finding {
                    eta: eta.index(),
                    points: points.iter().map(|e| e.index()).collect(),
                    multipliers: v.iter().map(|e| e.index()).collect(),
                    witness: f.terms(),
                    gram_zero,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtrs::gtrs_code;

    fn field(q: u64) -> Arc<FieldCtx> {
        FieldCtx::new(FieldSpec::for_order(q).unwrap()).unwrap()
    }

    fn tc1(q: u64, k: usize, t: usize, h: usize, excluded: Vec<u32>) -> ConstructionSpec {
        ConstructionSpec::Tc1 {
            field: FieldSpec::for_order(q).unwrap(),
            k,
            t,
            h,
            eta: 1,
            excluded,
        }
    }

    #[test]
    fn full_field_constant_witness() {
        let f = field(13);
        let cfg = EvalConfig::standard(&f);
        // R3 with h >= 1: the constant 1 lies in the dual space
        let p = TwistParams::new(3, 1, 1, Elem(2)).unwrap();
        let w = self_orthogonality_check(&cfg, &p).unwrap();
        assert!(w.is_feasible() && w.validated);
        assert_eq!(w.witness_poly(&f).unwrap(), Poly::constant(&f, Elem::ONE));
        assert!(gtrs_code(&cfg, &p).unwrap().is_self_orthogonal());
    }

    #[test]
    fn infeasible_has_residual() {
        let f = field(13);
        let cfg = EvalConfig::new(
            &f,
            (0..8).map(Elem).collect(),
            vec![
                Elem(1),
                Elem(2),
                Elem(3),
                Elem(1),
                Elem(1),
                Elem(1),
                Elem(1),
                Elem(1),
            ],
        )
        .unwrap();
        let p = TwistParams::new(3, 1, 1, Elem(2)).unwrap();
        let w = self_orthogonality_check(&cfg, &p).unwrap();
        assert_eq!(w.verdict, Feasibility::Infeasible);
        assert!(w.validated);
        assert!(!gtrs_code(&cfg, &p).unwrap().is_self_orthogonal());
    }

    #[test]
    fn window_checks() {
        let f = field(13);
        let cfg = EvalConfig::unit(&f, (0..5).map(Elem).collect()).unwrap();
        assert!(matches!(
            self_orthogonality_check(&cfg, &TwistParams::new(3, 1, 0, Elem(1)).unwrap()),
            Err(ConstructionError::Window { .. })
        ));
    }

    #[test]
    fn dimension_predicate() {
        assert!(excluded_by_dimension(13, 7, 2));
        assert!(!excluded_by_dimension(13, 5, 3));
        assert!(!excluded_by_length(13, 10, 4, 3, 0));
        assert!(excluded_by_length(16, 10, 4, 3, 1));
        assert!(!excluded_by_length(16, 10, 4, 2, 1));
        assert!(excluded_by_length(16, 9, 4, 2, 1));
    }

    #[test]
    fn punctured_examples() {
        let c = tc1(13, 5, 3, 0, vec![]).build().unwrap();
        assert_eq!(c.config.len(), 13);
        assert!(c.config.multipliers().iter().all(|&v| v == Elem::ONE));
        assert!(c.gram_is_zero());
        assert!(tc1(13, 5, 3, 1, vec![]).build().unwrap().gram_is_zero());
        assert!(tc1(17, 7, 3, 1, vec![]).build().unwrap().gram_is_zero());
        // 6 < 5.5 fails
        let err = tc1(13, 6, 3, 0, vec![]).build().unwrap_err();
        assert!(
            matches!(&err, ConstructionError::Window { inequality, .. } if inequality == "k < (q-t+1)/2"),
            "{err}"
        );
        assert!(matches!(
            tc1(13, 5, 1, 0, vec![]).build(),
            Err(ConstructionError::EmptyWindow { .. })
        ));
    }

    #[test]
    fn punctured_with_exclusions() {
        // q = 17, k = 6, t = 5: 4 < 6 < 6.5 and l <= (17-12-5)/2 = 0; pick t = 4, k = 6
        // window 5 < 6 < 7, l <= (17-12-4)/2 = 0.5
        let err = tc1(17, 6, 4, 0, vec![3]).build().unwrap_err();
        assert!(matches!(err, ConstructionError::Window { .. }));
        // q = 23, t = 5, k = 8: 7 < 8 < 9.5, l <= (23-16-5)/2 = 1
        let c = tc1(23, 8, 5, 0, vec![4]).build().unwrap();
        assert_eq!(c.config.len(), 22);
        assert!(c.gram_is_zero());
        assert!(validate_witness(&c.config, &c.params, &c.witness).unwrap());
    }

    #[test]
    fn binary_subset_examples() {
        let f = field(16);
        for h in 0..=4 {
            let spec = ConstructionSpec::Tc2 {
                field: f.spec().clone(),
                k: 7,
                t: 2,
                h,
                eta: 3,
                points: (0..16).collect(),
            };
            let c = spec.build().unwrap();
            assert!(c.gram_is_zero());
            assert!(c.config.multipliers().iter().all(|&v| v == Elem::ONE));
        }
        // q = 32, t = 3, k = 14: 13.5 < 14 < 15, n >= 31
        let f32 = field(32);
        let pts: Vec<u32> = (1..32).collect();
        let c = ConstructionSpec::Tc2 {
            field: f32.spec().clone(),
            k: 14,
            t: 3,
            h: 1,
            eta: 9,
            points: pts,
        }
        .build()
        .unwrap();
        assert!(c.gram_is_zero());
        assert!(validate_witness(&c.config, &c.params, &c.witness).unwrap());
    }

    #[test]
    fn subfield_witness_closed_form() {
        let f = field(729);
        let spec = ConstructionSpec::Ct4 {
            field: f.spec().clone(),
            r: 3,
            condition: 2,
            k: 12,
            t: 3,
            h: 0,
            eta: 100,
        };
        let c = spec.build().unwrap();
        assert_eq!(c.config.len(), 27);
        // prod over the complement of the subfield = sum x^(26 i), i < 28
        let terms: Vec<(usize, Elem)> = (0..28).map(|i| (26 * i, Elem::ONE)).collect();
        assert_eq!(c.witness, Poly::from_terms(&f, &terms));
        assert!(c.gram_is_zero());
        assert!(validate_witness(&c.config, &c.params, &c.witness).unwrap());
    }

    #[test]
    fn condition_arithmetic() {
        let f = field(729);
        let bad = ConstructionSpec::Ct4 {
            field: f.spec().clone(),
            r: 3,
            condition: 1,
            k: 11,
            t: 1,
            h: 0,
            eta: 5,
        };
        assert!(matches!(bad.build(), Err(ConstructionError::Window { .. })));
        let bad = ConstructionSpec::Ct4 {
            field: f.spec().clone(),
            r: 2,
            condition: 1,
            k: 11,
            t: 1,
            h: 0,
            eta: 5,
        };
        assert!(bad.build().is_err());
        let bad = ConstructionSpec::Ct4 {
            field: f.spec().clone(),
            r: 6,
            condition: 1,
            k: 11,
            t: 1,
            h: 0,
            eta: 5,
        };
        assert!(bad.build().is_err());
        let bad = ConstructionSpec::Ct4 {
            field: f.spec().clone(),
            r: 3,
            condition: 5,
            k: 12,
            t: 1,
            h: 0,
            eta: 5,
        };
        assert!(matches!(bad.build(), Err(ConstructionError::Invalid(_))));
    }

    #[test]
    fn outside_subfield_sampling() {
        let f = field(256);
        let e = sample_eta_outside_subfield(&f, 4, 7).unwrap();
        assert!(!f.in_subfield(e, 4).unwrap());
        assert_eq!(e, sample_eta_outside_subfield(&f, 4, 7).unwrap());
    }

    #[test]
    fn search_finds_full_field_instance() {
        let f = field(13);
        let out = search_cell(&f, 13, 5, 3, 0, 3, 1, 2).unwrap();
        assert!(out.found > 0);
        assert!(out.findings.iter().all(|x| x.gram_zero));
        let out = search_cell(&f, 13, 6, 3, 0, 3, 1, 2).unwrap();
        assert_eq!(out.found, 0);
        assert_eq!(out.reason.as_deref(), Some("V⊥ empty"));
    }
}
