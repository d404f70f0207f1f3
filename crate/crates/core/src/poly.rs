//! Univariate polynomials over a [`FieldCtx`], the twisted space
//! `V_{k,t,h,eta}` and the dual space of its Schur square.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, FieldCtx, FieldError};
use crate::gtrs::{regime, Regime};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid twist parameters: {0}")]
    InvalidParams(String),
    #[error("twisted degree k-1+t = {degree} exceeds q-1 = {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("k = {k} lies outside 3 <= k <= q/2 (q = {q})")]
    OutsideWindow { k: usize, q: u32 },
    #[error("q = {q}, k = {k}, t = {t}, h = {h} is not covered by any closed form")]
    Uncovered {
        q: u32,
        k: usize,
        t: usize,
        h: usize,
    },
}

/// A polynomial with coefficients indexed by exponent. Trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| match e {
                0 => format!("[{c}]"),
                1 => format!("[{c}]x"),
                _ => format!("[{c}]x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Elem) -> Self {
        Self::from_coeffs(ctx, vec![c])
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, exponent: usize, c: Elem) -> Self {
        let mut coeffs = vec![Elem::ZERO; exponent + 1];
        coeffs[exponent] = c;
        Self::from_coeffs(ctx, coeffs)
    }

    pub fn from_coeffs(ctx: &Arc<FieldCtx>, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// Sum of `c * x^e` over the given terms; repeated exponents accumulate.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: &[(usize, Elem)]) -> Self {
        let len = terms.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
        let mut coeffs = vec![Elem::ZERO; len];
        for &(e, c) in terms {
            coeffs[e] = ctx.add(coeffs[e], c);
        }
        Self::from_coeffs(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, exponent: usize) -> Elem {
        self.coeffs.get(exponent).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as exponent -> coefficient index.
    pub fn terms(&self) -> BTreeMap<usize, u32> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.index()))
            .collect()
    }

    /// Horner evaluation; the constant term contributes `c_0 * a^0 = c_0`
    /// even at `a = 0`.
    pub fn eval(&self, a: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.ctx.add(self.ctx.mul(acc, a), c))
    }

    pub fn eval_vector(&self, points: &[Elem]) -> Vec<Elem> {
        let f = &self.ctx;
        let terms: Vec<(u64, Elem)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, &c)| (e as u64, c))
            .collect();
        if 4 * terms.len() >= self.coeffs.len() {
            return points.iter().map(|&a| self.eval(a)).collect();
        }
        // sparse: term by term through the log tables
        points
            .iter()
            .map(|&a| f.sum(terms.iter().map(|&(e, c)| f.mul(c, f.pow(a, e)))))
            .collect()
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        Ok(self.ctx.ensure_same(&other.ctx)?)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.ctx.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::from_coeffs(&self.ctx, coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.scale(self.ctx.neg(Elem::ONE)))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let coeffs = self.coeffs.iter().map(|&x| self.ctx.mul(x, c)).collect();
        Poly::from_coeffs(&self.ctx, coeffs)
    }

    /// Exact product (no reduction).
    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ctx));
        }
        let mut coeffs = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.ctx.add(coeffs[i + j], self.ctx.mul(a, b));
            }
        }
        Ok(Poly::from_coeffs(&self.ctx, coeffs))
    }

    /// Folds exponents `e >= q` onto `((e - 1) mod (q - 1)) + 1`. The result
    /// has degree below `q` and the same values at every field element.
    pub fn reduce_mod_field(&self) -> Poly {
        let q = self.ctx.order() as usize;
        if self.coeffs.len() <= q {
            return self.clone();
        }
        let mut coeffs = vec![Elem::ZERO; q];
        for (e, &c) in self.coeffs.iter().enumerate() {
            let target = if e < q { e } else { (e - 1) % (q - 1) + 1 };
            coeffs[target] = self.ctx.add(coeffs[target], c);
        }
        Poly::from_coeffs(&self.ctx, coeffs)
    }
}

/// `(k, t, h, eta)`: dimension, twist, hook, and the nonzero twist coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistParams {
    pub k: usize,
    pub t: usize,
    pub h: usize,
    pub eta: Elem,
}

impl TwistParams {
    /// Checks `k >= 3`, `t >= 1`, `t + h <= k - 1`, and `eta != 0`.
    pub fn new(k: usize, t: usize, h: usize, eta: Elem) -> Result<Self, PolyError> {
        let params = Self { k, t, h, eta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), PolyError> {
        let Self { k, t, h, eta } = *self;
        if k < 3 {
            return Err(PolyError::InvalidParams(format!("k = {k} < 3")));
        }
        if t < 1 {
            return Err(PolyError::InvalidParams("t must be at least 1".into()));
        }
        if t + h > k - 1 {
            return Err(PolyError::InvalidParams(format!(
                "t + h = {} > k - 1 = {}",
                t + h,
                k - 1
            )));
        }
        if eta.is_zero() {
            return Err(PolyError::InvalidParams("eta must be nonzero".into()));
        }
        Ok(())
    }

    /// `(h, t) = (0, k - 1)`, the shape with a glued generator in most closed forms.
    pub fn is_full_twist(&self) -> bool {
        self.h == 0 && self.t == self.k - 1
    }
}

/// A list of polynomials intended to be a basis of some space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceBasis {
    pub polys: Vec<Poly>,
}

impl SpaceBasis {
    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Rows are coefficient vectors of width `width`.
    pub fn coefficient_matrix(&self, ctx: &Arc<FieldCtx>, width: usize) -> Matrix {
        let rows = self
            .polys
            .iter()
            .map(|f| (0..width).map(|e| f.coeff(e)).collect())
            .collect();
        Matrix::from_rows_unchecked(ctx, rows, width)
    }

    /// Rows are evaluation vectors at `points`.
    pub fn evaluation_matrix(&self, ctx: &Arc<FieldCtx>, points: &[Elem]) -> Matrix {
        let rows = self.polys.iter().map(|f| f.eval_vector(points)).collect();
        Matrix::from_rows_unchecked(ctx, rows, points.len())
    }

    pub fn is_independent(&self, ctx: &Arc<FieldCtx>) -> bool {
        let width = self
            .polys
            .iter()
            .filter_map(Poly::degree)
            .max()
            .map_or(0, |d| d + 1);
        self.coefficient_matrix(ctx, width).rank() == self.polys.len()
    }

    /// Whether `f` is a linear combination of the basis polynomials.
    pub fn contains(&self, ctx: &Arc<FieldCtx>, f: &Poly) -> bool {
        let width = self
            .polys
            .iter()
            .chain(std::iter::once(f))
            .filter_map(Poly::degree)
            .max()
            .map_or(0, |d| d + 1);
        let base = self.coefficient_matrix(ctx, width);
        let probe = SpaceBasis {
            polys: vec![f.clone()],
        }
        .coefficient_matrix(ctx, width);
        base.row_space_contains(&probe).unwrap_or(false)
    }
}

/// The basis `{x^s : s in 0..k, s != h} ∪ {x^h + eta x^(k-1+t)}` of `V_{k,t,h,eta}`.
pub fn twisted_basis(ctx: &Arc<FieldCtx>, params: &TwistParams) -> Result<SpaceBasis, PolyError> {
    params.validate()?;
    ctx.elem(u64::from(params.eta.index()))?;
    let TwistParams { k, t, h, eta } = *params;
    let q = ctx.order() as usize;
    if k - 1 + t > q - 1 {
        return Err(PolyError::DegreeTooLarge {
            degree: k - 1 + t,
            max: q - 1,
        });
    }
    let mut polys: Vec<Poly> = (0..k)
        .filter(|&s| s != h)
        .map(|s| Poly::monomial(ctx, s, Elem::ONE))
        .collect();
    polys.push(Poly::from_terms(ctx, &[(h, Elem::ONE), (k - 1 + t, eta)]));
    Ok(SpaceBasis { polys })
}

/// Basis of the polynomial space whose evaluations at all `q` field elements
/// form the dual of the Schur square of the standard twisted code.
///
/// Requires `3 <= k <= q/2` and `t + h <= k - 1`. Above `(q - t + 1)/2` the
/// space is zero. In the lowest regime with `(h, t) = (0, k - 1)` the space
/// has two coupled generators, `x^(q-4k+3) - eta^2 x^(q-1)` and
/// `x^(q-2k) - eta x^(q-2)`, alongside the free monomials. When the linked
/// exponent is 0 (`2k + 2t = q + 1`), `x^(q-1)` pairs with both terms of the
/// squared twist and the linked generator becomes `(1 + eta^2) - eta^2 x^(q-1)`.
/// For `(k, t, h) = (3, 1, 1)` the square misses `x^3`, which frees
/// `x^(q-6) - eta x^(q-4) + eta^2 x^(q-2)`.
pub fn dual_space_basis(
    ctx: &Arc<FieldCtx>,
    params: &TwistParams,
) -> Result<SpaceBasis, PolyError> {
    params.validate()?;
    let TwistParams { k, t, h, eta } = *params;
    let q = ctx.order() as usize;
    let tag = regime(ctx, k, t).map_err(|_| PolyError::OutsideWindow { k, q: q as u32 })?;
    let mono = |e: usize| Poly::monomial(ctx, e, Elem::ONE);
    let neg = |c: Elem| ctx.neg(c);
    let eta2 = ctx.mul(eta, eta);
    // monomials x^0..=x^top, skipping `skip`
    let monomials = |top: isize, skip: Option<usize>| -> Vec<Poly> {
        (0..=top)
            .map(|e| e as usize)
            .filter(|&e| Some(e) != skip)
            .map(mono)
            .collect()
    };
    let (qi, ki, ti) = (q as isize, k as isize, t as isize);
    // x^e - eta^2 x^(q-1), with the extra constant term when e = 0
    let linked = |e: usize| {
        let c = if e == 0 {
            ctx.add(Elem::ONE, eta2)
        } else {
            Elem::ONE
        };
        Poly::from_terms(ctx, &[(e, c), (q - 1, neg(eta2))])
    };

    let polys = match tag {
        Regime::R1 => Vec::new(),
        Regime::R2 if params.is_full_twist() => {
            let mut polys = monomials(qi - 3 * ki + 1, None);
            let glued = if q == 4 * k - 4 {
                let eta3 = ctx.mul(eta2, eta);
                Poly::from_terms(
                    ctx,
                    &[(q - 2 * k, Elem::ONE), (q - 2, neg(eta)), (q - 1, eta3)],
                )
            } else if q < 4 * k - 4 {
                Poly::from_terms(ctx, &[(q - 2 * k, Elem::ONE), (q - 2, neg(eta))])
            } else {
                return Err(PolyError::Uncovered {
                    q: q as u32,
                    k,
                    t,
                    h,
                });
            };
            polys.push(glued);
            polys
        }
        Regime::R2 => monomials(qi - 2 * ki - ti, None),
        Regime::R3 if params.is_full_twist() => {
            let low = q + 3 - 4 * k;
            let mut polys = monomials(qi - 3 * ki + 1, Some(low));
            polys.push(linked(low));
            polys.push(Poly::from_terms(
                ctx,
                &[(q - 2 * k, Elem::ONE), (q - 2, neg(eta))],
            ));
            polys
        }
        Regime::R3 if (k, t, h) == (3, 1, 1) => {
            let mut polys = monomials(qi - 8, None);
            polys.push(Poly::from_terms(
                ctx,
                &[(q - 6, Elem::ONE), (q - 4, neg(eta)), (q - 2, eta2)],
            ));
            polys
        }
        Regime::R3 => {
            let e = q + 1 - 2 * k - 2 * t;
            let mut polys = monomials(qi - 2 * ki - ti, Some(e));
            if h == 0 {
                polys.push(linked(e));
            }
            polys
        }
    };
    Ok(SpaceBasis { polys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{make_field, FieldSpec};

    fn field(q: u64) -> Arc<FieldCtx> {
        FieldCtx::new(FieldSpec::for_order(q).unwrap()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f3 = field(3);
        let pts: Vec<Elem> = f3.elements().collect();
        assert_eq!(
            Poly::constant(&f3, Elem::ONE).eval_vector(&pts),
            vec![Elem(1); 3]
        );
        let f = Poly::from_terms(&f3, &[(2, Elem(1)), (0, Elem(1))]);
        assert_eq!(f.eval_vector(&pts), vec![Elem(1), Elem(2), Elem(2)]);

        let f13 = field(13);
        let f = Poly::monomial(&f13, 12, Elem::ONE);
        assert_eq!(f.eval(Elem(0)), Elem(0));
        assert!(f13.nonzero_elements().all(|a| f.eval(a) == Elem::ONE));
    }

    #[test]
    fn zero_polynomial() {
        let f = field(5);
        let z = Poly::from_coeffs(&f, vec![Elem(0), Elem(0)]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.eval(Elem(3)), Elem(0));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Poly::constant(&field(5), Elem(1));
        let b = Poly::constant(&field(7), Elem(1));
        assert!(matches!(
            a.add(&b),
            Err(PolyError::Field(FieldError::ContextMismatch { .. }))
        ));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn reduce_examples() {
        let f = field(13);
        let xq = Poly::monomial(&f, 13, Elem::ONE);
        assert_eq!(xq.reduce_mod_field(), Poly::monomial(&f, 1, Elem::ONE));
        let small = Poly::from_terms(&f, &[(0, Elem(4)), (12, Elem(2))]);
        assert_eq!(small.reduce_mod_field(), small);
        // x^24 -> x^12, x^25 -> x
        let g = Poly::from_terms(&f, &[(24, Elem(1)), (25, Elem(3))]);
        assert_eq!(
            g.reduce_mod_field(),
            Poly::from_terms(&f, &[(12, Elem(1)), (1, Elem(3))])
        );
    }

    #[test]
    fn twisted_basis_examples() {
        let f = field(13);
        let eta = Elem(5);
        let b = twisted_basis(&f, &TwistParams::new(3, 1, 0, eta).unwrap()).unwrap();
        assert_eq!(
            b.polys,
            vec![
                Poly::monomial(&f, 1, Elem::ONE),
                Poly::monomial(&f, 2, Elem::ONE),
                Poly::from_terms(&f, &[(0, Elem::ONE), (3, eta)]),
            ]
        );
        // (k, t, h) = (3, 2, 2) violates t + h <= k - 1
        assert!(TwistParams::new(3, 2, 2, eta).is_err());
        let b = twisted_basis(
            &f,
            &TwistParams {
                k: 3,
                t: 2,
                h: 2,
                eta,
            },
        )
        .unwrap_err();
        assert!(matches!(b, PolyError::InvalidParams(_)));
    }

    #[test]
    fn twisted_basis_without_standing_hypothesis_shape() {
        // Shape of the basis for h = k - 1: {1, x, x^2 + eta x^4}
        let f = field(13);
        let eta = Elem(2);
        let polys: Vec<Poly> = (0..3)
            .filter(|&s| s != 2)
            .map(|s| Poly::monomial(&f, s, Elem::ONE))
            .chain(std::iter::once(Poly::from_terms(
                &f,
                &[(2, Elem::ONE), (4, eta)],
            )))
            .collect();
        assert_eq!(polys.len(), 3);
        assert!(SpaceBasis { polys }.is_independent(&f));
    }

    #[test]
    fn twisted_basis_is_independent() {
        let f = field(16);
        for k in 3..=8 {
            for t in 1..k {
                for h in 0..k - t {
                    let p = TwistParams::new(k, t, h, Elem(7)).unwrap();
                    let b = twisted_basis(&f, &p).unwrap();
                    assert_eq!(b.dim(), k);
                    assert!(b.is_independent(&f));
                }
            }
        }
    }

    #[test]
    fn twisted_degree_guard() {
        let f = field(8);
        let p = TwistParams::new(6, 3, 0, Elem(1)).unwrap();
        assert_eq!(
            twisted_basis(&f, &p).unwrap_err(),
            PolyError::DegreeTooLarge { degree: 8, max: 7 }
        );
    }

    #[test]
    fn dual_space_examples() {
        let f = field(13);
        // regime R1: (13 - 3 + 1)/2 = 5.5 < 6 <= 6.5
        for h in 0..=2 {
            let p = TwistParams::new(6, 3, h, Elem(1)).unwrap();
            assert!(dual_space_basis(&f, &p).unwrap().is_empty());
        }
        // (3, 1, 1): the square has no x^3, so x^7 - eta x^9 + eta^2 x^11 joins 0..=5
        let p = TwistParams::new(3, 1, 1, Elem(4)).unwrap();
        let b = dual_space_basis(&f, &p).unwrap();
        let mut want: Vec<Poly> = (0..6).map(|e| Poly::monomial(&f, e, Elem::ONE)).collect();
        want.push(Poly::from_terms(
            &f,
            &[(7, Elem(1)), (9, Elem(9)), (11, Elem(3))],
        ));
        assert_eq!(b.polys, want);
        // R3 with h >= 1 otherwise: (4, 1, 1) gives 0..=4 without 13 + 1 - 8 - 2 = 4
        let p = TwistParams::new(4, 1, 1, Elem(4)).unwrap();
        let b = dual_space_basis(&f, &p).unwrap();
        assert_eq!(
            b.polys,
            (0..4)
                .map(|e| Poly::monomial(&f, e, Elem::ONE))
                .collect::<Vec<_>>()
        );
        // k beyond q/2
        let p = TwistParams::new(7, 2, 0, Elem(1)).unwrap();
        assert_eq!(
            dual_space_basis(&f, &p).unwrap_err(),
            PolyError::OutsideWindow { k: 7, q: 13 }
        );
    }

    #[test]
    fn dual_space_full_twist_lowest_regime() {
        // q = 13, k = 4, t = 3, h = 0: exponents 0..=2 minus q-4k+3 = 0, plus two
        // coupled generators; x^12 also pairs with the constant, hence 1 + eta^2
        let f = make_field(13, 1, None).unwrap();
        let eta = Elem(3);
        let p = TwistParams::new(4, 3, 0, eta).unwrap();
        let b = dual_space_basis(&f, &p).unwrap();
        let eta2 = f.mul(eta, eta);
        assert_eq!(
            b.polys,
            vec![
                Poly::monomial(&f, 1, Elem::ONE),
                Poly::monomial(&f, 2, Elem::ONE),
                Poly::from_terms(&f, &[(0, f.add(Elem::ONE, eta2)), (12, f.neg(eta2))]),
                Poly::from_terms(&f, &[(5, Elem::ONE), (11, f.neg(eta))]),
            ]
        );
        assert!(b.is_independent(&f));
    }

    #[test]
    fn space_membership() {
        let f = field(7);
        let b = SpaceBasis {
            polys: vec![
                Poly::monomial(&f, 0, Elem::ONE),
                Poly::from_terms(&f, &[(1, Elem(1)), (3, Elem(2))]),
            ],
        };
        let inside = Poly::from_terms(&f, &[(0, Elem(5)), (1, Elem(3)), (3, Elem(6))]);
        let outside = Poly::monomial(&f, 1, Elem::ONE);
        assert!(b.contains(&f, &inside));
        assert!(!b.contains(&f, &outside));
    }
}
