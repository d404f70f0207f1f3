//! Exact arithmetic in GF(p^m).
//!
//! Elements are identified by their index in a fixed canonical enumeration.
//! An element with coefficient vector `(c_0, ..., c_{m-1})` over GF(p) (with
//! respect to the basis `1, x, ..., x^{m-1}` of GF(p)[x]/(modulus)) has index
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Index 0 is the zero element, index 1
//! is the identity, and the prime subfield occupies indices `0..p`.
//!
//! Multiplication goes through exp/log tables built from the least primitive
//! element; addition is digit-wise modulo `p`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`make_field`].
pub const MAX_ORDER: u64 = 1 << 16;

/// Field orders up to this bound get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// Errors raised while building or using a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the size guard of 2^16")]
    TooLarge { p: u64, m: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus must be monic of degree {m} with coefficients below {p}")]
    MalformedModulus { p: u32, m: u32 },
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("subfield degree {r} does not divide the extension degree {m}")]
    NotADivisor { r: u32, m: u32 },
    #[error("element index {index} is out of range for a field of order {q}")]
    OutOfRange { index: u64, q: u32 },
    #[error("operands belong to different fields ({left} and {right})")]
    ContextMismatch { left: String, right: String },
}

/// Parameters identifying a field: characteristic, degree, and the monic
/// irreducible modulus as coefficients `[c_0, ..., c_m]` (so `c_m = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates `(p, m)` and picks the default modulus when none is given.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(u64::from(p)) {
            return Err(FieldError::NotPrime(u64::from(p)));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (u64::from(p)).checked_pow(m);
        if order.is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::TooLarge { p: u64::from(p), m });
        }
        let modulus = match modulus {
            Some(modulus) => {
                let well_formed = modulus.len() == m as usize + 1
                    && modulus.last() == Some(&1)
                    && modulus.iter().all(|&c| c < p);
                if !well_formed {
                    return Err(FieldError::MalformedModulus { p, m });
                }
                if !is_irreducible(&modulus, p) {
                    return Err(FieldError::ReducibleModulus { p, modulus });
                }
                modulus
            }
            None => default_modulus(p, m),
        };
        Ok(Self { p, m, modulus })
    }

    /// Field of order `q` with the default modulus.
    pub fn for_order(q: u64) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge { p, m });
        }
        Self::new(p as u32, m, None)
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

/// An element of a field, identified by its canonical index.
///
/// The index alone does not record which field it belongs to; containers that
/// hold elements ([`crate::poly::Poly`], [`crate::linalg::Matrix`], ...) carry
/// their field and refuse to combine with a different one.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field with precomputed arithmetic tables. Immutable once built.
pub struct FieldCtx {
    spec: FieldSpec,
    q: u32,
    primitive: Elem,
    /// `exp[i] = g^i` for `i` in `0..q-1`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("spec", &self.spec)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.m == 1 {
            write!(f, "GF({})", self.spec.p)
        } else {
            write!(f, "GF({}^{})", self.spec.p, self.spec.m)
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for FieldCtx {}

/// Builds GF(p^m), using the default modulus when `modulus` is `None`.
pub fn make_field(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Arc<FieldCtx>, FieldError> {
    FieldCtx::new(FieldSpec::new(p, m, modulus)?)
}

impl FieldCtx {
    pub fn new(spec: FieldSpec) -> Result<Arc<Self>, FieldError> {
        // Re-validate: the spec may have been deserialized.
        let spec = FieldSpec::new(spec.p, spec.m, Some(spec.modulus))?;
        let q = spec.order();
        let p = spec.p;
        let m = spec.m as usize;

        let slow_mul = |a: u32, b: u32| -> u32 {
            pack(
                &mul_mod(&unpack(a, p, m), &unpack(b, p, m), &spec.modulus, p),
                p,
            )
        };

        let group_order = u64::from(q - 1);
        let factors = prime_factors(group_order);
        let slow_pow = |mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let primitive = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, group_order / r) != 1))
            .expect("the multiplicative group of a field is cyclic");

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = slow_mul(cur, primitive);
        }

        let neg = (0..q)
            .map(|a| {
                let digits: Vec<u32> = unpack(a, p, m).iter().map(|&d| (p - d) % p).collect();
                pack(&digits, p)
            })
            .collect();

        let add_table = (m > 1 && p != 2 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = digit_add(a, b, p, m) as u16;
                }
            }
            table
        });

        Ok(Arc::new(Self {
            spec,
            q,
            primitive: Elem(primitive),
            exp,
            log,
            neg,
            add_table,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Field order q.
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    /// The least (by index) generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    /// All elements in canonical order; the first is zero.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(Elem)
    }

    pub fn elem(&self, index: u64) -> Result<Elem, FieldError> {
        if index < u64::from(self.q) {
            Ok(Elem(index as u32))
        } else {
            Err(FieldError::OutOfRange { index, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(i64::from(self.spec.p)) as u32)
    }

    /// Coefficients `(c_0, ..., c_{m-1})` of an element over GF(p).
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        unpack(a.0, self.spec.p, self.spec.m as usize)
    }

    pub fn ensure_same(&self, other: &FieldCtx) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.m == 1 {
            let s = a.0 + b.0;
            Elem(if s >= p { s - p } else { s })
        } else if p == 2 {
            Elem(a.0 ^ b.0)
        } else if let Some(table) = &self.add_table {
            Elem(u32::from(table[(a.0 * self.q + b.0) as usize]))
        } else {
            Elem(digit_add(a.0, b.0, p, self.spec.m as usize))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(Elem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = u64::from(self.q - 1);
        let l = u64::from(self.log[a.0 as usize]);
        Elem(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Discrete logarithm to the base [`Self::primitive_element`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a.is_zero() || self.spec.p == 2 || self.log[a.0 as usize].is_multiple_of(2)
    }

    /// A square root of `a`, if one exists. Of the two roots in odd
    /// characteristic the one with the smaller index is returned.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(Elem::ZERO);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        if self.spec.p == 2 {
            // n is odd, so 2 is invertible modulo n.
            let half = (l as u64 * u64::from(n.div_ceil(2))) % u64::from(n);
            return Some(Elem(self.exp[half as usize]));
        }
        if !l.is_multiple_of(2) {
            return None;
        }
        let r = Elem(self.exp[(l / 2) as usize]);
        Some(r.min(self.neg(r)))
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// Euclidean inner product of two equal-length vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// The `p^r` elements of the subfield GF(p^r), in canonical order.
    pub fn subfield_elements(&self, r: u32) -> Result<Vec<Elem>, FieldError> {
        let m = self.spec.m;
        if r == 0 || !m.is_multiple_of(r) {
            return Err(FieldError::NotADivisor { r, m });
        }
        let e = u64::from(self.spec.p).pow(r);
        Ok(self.elements().filter(|&a| self.pow(a, e) == a).collect())
    }

    /// Whether `a` lies in GF(p^r).
    pub fn in_subfield(&self, a: Elem, r: u32) -> Result<bool, FieldError> {
        let m = self.spec.m;
        if r == 0 || !m.is_multiple_of(r) {
            return Err(FieldError::NotADivisor { r, m });
        }
        Ok(self.pow(a, u64::from(self.spec.p).pow(r)) == a)
    }
}

fn unpack(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut digits = vec![0; m];
    for d in digits.iter_mut() {
        *d = a % p;
        a /= p;
    }
    digits
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn digit_add(mut a: u32, mut b: u32, p: u32, m: usize) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..m {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

/// Product of two residues modulo a monic polynomial over GF(p).
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = u64::from(p);
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p64;
        }
    }
    for deg in (m..prod.len()).rev() {
        let lead = prod[deg];
        if lead == 0 {
            continue;
        }
        for (i, &c) in modulus.iter().enumerate().take(m) {
            let idx = deg - m + i;
            prod[idx] = (prod[idx] + (p64 - lead) * u64::from(c)) % p64;
        }
        prod[deg] = 0;
    }
    prod.truncate(m);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo a monic `b`, both over GF(p), coefficients low to high.
fn rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p64 = u64::from(p);
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p64 - lead) * u64::from(c)) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree at most half.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = u64::from(p).pow(d as u32);
        for low in 0..count {
            let mut divisor = unpack(low as u32, p, d);
            divisor.push(1);
            if rem_monic(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Moduli used when none is supplied, `[c_0, ..., c_m]`.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

/// Built-in modulus for `(p, m)`, falling back to the least monic irreducible
/// polynomial when ordered by `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
pub fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if let Some((_, _, modulus)) = DEFAULT_MODULI
        .iter()
        .find(|(pp, mm, _)| *pp == p && *mm == m)
    {
        return modulus.to_vec();
    }
    least_irreducible(p, m)
}

pub(crate) fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = u64::from(p).pow(m);
    (0..count)
        .map(|low| {
            let mut poly = unpack(low as u32, p, m as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
fn builtin_moduli() -> impl Iterator<Item = (u32, u32, Vec<u32>)> {
    DEFAULT_MODULI.iter().map(|(p, m, c)| (*p, *m, c.to_vec()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q = p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_of_two() {
        let f = make_field(2, 1, None).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1)]);
        assert_eq!(f.add(Elem(1), Elem(1)), Elem(0));
    }

    #[test]
    fn gf9_lagrange() {
        let f = make_field(3, 2, None).unwrap();
        assert_eq!(f.order(), 9);
        for a in f.nonzero_elements() {
            assert_eq!(f.pow(a, 8), Elem::ONE);
        }
    }

    #[test]
    fn gf16_fixed_points_of_square_square() {
        let f = make_field(2, 4, None).unwrap();
        // brute force over all elements, multiplying by hand
        let fixed = f
            .elements()
            .filter(|&a| {
                let a2 = f.mul(a, a);
                f.mul(a2, a2) == a
            })
            .count();
        assert_eq!(fixed, 4);
    }

    #[test]
    fn small_arithmetic() {
        let f = make_field(7, 1, None).unwrap();
        assert_eq!(f.mul(Elem(3), Elem(5)), Elem(1));
        assert_eq!(f.inv(Elem(1)).unwrap(), Elem(1));
        assert_eq!(f.pow(Elem(0), 0), Elem(1));
        assert_eq!(f.pow(Elem(0), 3), Elem(0));
        assert_eq!(f.inv(Elem(0)), Err(FieldError::DivisionByZero));
        assert_eq!(f.div(Elem(3), Elem(0)), Err(FieldError::DivisionByZero));
        assert_eq!(f.sub(Elem(2), Elem(5)), Elem(4));
        assert_eq!(f.from_int(-1), Elem(6));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(make_field(6, 1, None).unwrap_err(), FieldError::NotPrime(6));
        assert_eq!(make_field(2, 0, None).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            make_field(2, 17, None).unwrap_err(),
            FieldError::TooLarge { .. }
        ));
        assert!(matches!(
            make_field(3, 17, None).unwrap_err(),
            FieldError::TooLarge { .. }
        ));
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(matches!(
            make_field(2, 2, Some(vec![1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus { .. }
        ));
        // not monic
        assert!(matches!(
            make_field(3, 2, Some(vec![1, 0, 2])).unwrap_err(),
            FieldError::MalformedModulus { .. }
        ));
        assert_eq!(
            FieldSpec::for_order(12).unwrap_err(),
            FieldError::NotPrimePower(12)
        );
    }

    #[test]
    fn largest_field_builds() {
        let f = make_field(2, 16, None).unwrap();
        let a = Elem(0xbeef);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        let f = make_field(65521, 1, None).unwrap();
        assert_eq!(f.mul(Elem(65520), Elem(65520)), Elem(1));
    }

    #[test]
    fn builtin_moduli_are_irreducible() {
        for (p, m, modulus) in builtin_moduli() {
            assert!(
                is_irreducible(&modulus, p),
                "GF({p}^{m}) modulus {modulus:?}"
            );
            assert_eq!(modulus.len(), m as usize + 1);
        }
    }

    #[test]
    fn fallback_modulus_is_least() {
        // x^2 + 1 is the least irreducible quadratic over GF(3) under index order
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        // (11, 2) is not in the table
        assert_eq!(default_modulus(11, 2), least_irreducible(11, 2));
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let a = make_field(3, 3, None).unwrap();
        let b = make_field(3, 3, None).unwrap();
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
                assert_eq!(a.add(x, y), b.add(x, y));
            }
        }
        assert_eq!(a.coefficients(Elem(5)), vec![2, 1, 0]);
    }

    #[test]
    fn subfields() {
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f4.subfield_elements(1).unwrap(), vec![Elem(0), Elem(1)]);

        let f16 = make_field(2, 4, None).unwrap();
        let sub = f16.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 4);
        for &a in &sub {
            for &b in &sub {
                assert!(sub.contains(&f16.add(a, b)));
                assert!(sub.contains(&f16.mul(a, b)));
            }
        }
        assert_eq!(
            f16.subfield_elements(3).unwrap_err(),
            FieldError::NotADivisor { r: 3, m: 4 }
        );

        let f729 = make_field(3, 6, None).unwrap();
        let sub = f729.subfield_elements(3).unwrap();
        assert_eq!(sub.len(), 27);
        assert!(sub.iter().all(|&a| f729.pow(a, 27) == a));
    }

    #[test]
    fn square_roots() {
        for q in [13u64, 9, 16, 256] {
            let f = FieldCtx::new(FieldSpec::for_order(q).unwrap()).unwrap();
            for a in f.elements() {
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
                assert!(f.is_square(sq));
            }
            let squares = f.elements().filter(|&a| f.is_square(a)).count() as u32;
            let expected = if q % 2 == 0 {
                f.order()
            } else {
                f.order().div_ceil(2)
            };
            assert_eq!(squares, expected);
        }
    }

    #[test]
    fn power_sums() {
        for q in [8u64, 9, 11, 13, 16] {
            let f = FieldCtx::new(FieldSpec::for_order(q).unwrap()).unwrap();
            let n = u64::from(f.order() - 1);
            for l in 0..=2 * (n - 1) {
                let s = f.sum(f.elements().map(|a| f.pow(a, l)));
                let expected = if l > 0 && l % n == 0 {
                    f.neg(Elem::ONE)
                } else {
                    Elem::ZERO
                };
                assert_eq!(s, expected, "q={q} l={l}");
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(100), None);
    }
}
