//! Linear codes as row spaces: duals, Schur products, minimum distance, and
//! MDS / near-MDS classification.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, FieldCtx, FieldError};
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("a code needs at least one generator row")]
    Empty,
    #[error("code lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("{strategy} needs {size} steps, above the limit of {limit}")]
    TooLarge {
        strategy: &'static str,
        size: u128,
        limit: u64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A linear code given by the canonical reduced basis of its row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
}

/// Serialized form of a code: field, shape, and generator rows as element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub generator: Vec<Vec<u32>>,
}

impl LinearCode {
    /// The span of `rows`; dependent rows are dropped.
    pub fn from_generators(ctx: &Arc<FieldCtx>, rows: Vec<Vec<Elem>>) -> Result<Self, CodeError> {
        let Some(n) = rows.first().map(Vec::len) else {
            return Err(CodeError::Empty);
        };
        Ok(Self::from_matrix(&Matrix::from_rows(ctx, rows, n)?))
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            gen: m.rref().matrix,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        Self {
            gen: Matrix::zeros(ctx, 0, n),
        }
    }

    pub fn full(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        Self {
            gen: Matrix::identity(ctx, n),
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.gen.ctx()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn len(&self) -> usize {
        self.gen.ncols()
    }

    /// Length zero.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.gen.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn record(&self) -> CodeRecord {
        let spec = self.ctx().spec();
        CodeRecord {
            q: spec.order(),
            p: spec.p,
            m: spec.m,
            n: self.len(),
            k: self.dim(),
            generator: self.gen.to_index_rows(),
        }
    }

    /// `{c' : <c', c> = 0 for all c in C}`.
    pub fn dual(&self) -> LinearCode {
        LinearCode::from_matrix(&self.gen.nullspace())
    }

    /// Whether `other` is a subcode of `self`.
    pub fn contains(&self, other: &LinearCode) -> Result<bool, CodeError> {
        Ok(self.gen.row_space_contains(&other.gen)?)
    }

    pub fn contains_word(&self, word: &[Elem]) -> Result<bool, CodeError> {
        let probe = Matrix::from_rows(self.ctx(), vec![word.to_vec()], self.len())?;
        Ok(self.gen.row_space_contains(&probe)?)
    }

    /// Span of all coordinatewise products of basis rows.
    pub fn schur_product(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.ctx().ensure_same(other.ctx())?;
        if self.len() != other.len() {
            return Err(CodeError::LengthMismatch(self.len(), other.len()));
        }
        let rows = self
            .gen
            .rows()
            .flat_map(|a| other.gen.rows().map(move |b| (a, b)))
            .map(|(a, b)| self.star(a, b))
            .collect();
        Ok(LinearCode::from_matrix(&Matrix::from_rows(
            self.ctx(),
            rows,
            self.len(),
        )?))
    }

    /// Schur product of the code with itself, using the `k(k+1)/2` unordered pairs.
    pub fn schur_square(&self) -> LinearCode {
        let k = self.dim();
        let rows = (0..k)
            .flat_map(|i| (i..k).map(move |j| (i, j)))
            .map(|(i, j)| self.star(self.gen.row(i), self.gen.row(j)))
            .collect();
        LinearCode::from_matrix(&Matrix::from_rows_unchecked(self.ctx(), rows, self.len()))
    }

    fn star(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = self.ctx();
        a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)).collect()
    }

    pub fn gram(&self) -> Matrix {
        self.gen.gram()
    }

    /// `C ⊆ C⊥`, decided by a zero Gram matrix.
    pub fn is_self_orthogonal(&self) -> bool {
        self.gram().is_zero()
    }

    /// Minimum distance with a certificate, subject to `limits`.
    pub fn min_distance(
        &self,
        strategy: Strategy,
        limits: &DistanceLimits,
    ) -> Result<DistanceReport, CodeError> {
        if self.is_zero() {
            return Err(CodeError::ZeroCode);
        }
        let (n, k) = (self.len(), self.dim());
        let messages = message_count(self.ctx().order(), k);
        let minors = binomial(n, k);
        match strategy {
            Strategy::Exhaustive => {
                check_limit("exhaustive search", messages, limits.max_messages)?;
                Ok(self.exhaustive_distance())
            }
            Strategy::MinorScan => {
                check_limit("minor scan", minors, limits.max_minors)?;
                Ok(self.minor_scan())
            }
            Strategy::Auto => {
                if messages <= u128::from(limits.max_messages) {
                    Ok(self.exhaustive_distance())
                } else {
                    check_limit("minor scan", minors, limits.max_minors)?;
                    Ok(self.minor_scan())
                }
            }
        }
    }

    /// Enumerates every nonzero message up to scaling.
    fn exhaustive_distance(&self) -> DistanceReport {
        let (n, k) = (self.len(), self.dim());
        let f = self.ctx().clone();
        let q = f.order();
        // One task per (leading position, value of the following coefficient).
        let tasks: Vec<(usize, Option<Elem>)> = (0..k)
            .flat_map(|lead| {
                if lead + 1 < k {
                    f.elements().map(|c| (lead, Some(c))).collect::<Vec<_>>()
                } else {
                    vec![(lead, None)]
                }
            })
            .collect();
        let results: Vec<(usize, Vec<Elem>)> = tasks
            .par_iter()
            .map(|&(lead, next)| {
                let mut start = self.gen.row(lead).to_vec();
                let mut level = lead + 1;
                if let Some(c) = next {
                    add_scaled(&f, &mut start, self.gen.row(level), c);
                    level += 1;
                }
                let mut best = (weight(&start), start.clone());
                let mut stack = vec![vec![Elem::ZERO; n]; k + 1];
                stack[level] = start;
                self.descend(&f, q, level, &mut stack, &mut best);
                best
            })
            .collect();
        let (d, word) = results
            .into_iter()
            .reduce(|a, b| if b.0 < a.0 { b } else { a })
            .expect("nonzero code has at least one task");
        DistanceReport {
            bound: DistanceBound::Exact(d),
            method: Method::Exhaustive,
            certificate: Certificate::Codeword {
                word: word.iter().map(|e| e.index()).collect(),
            },
        }
    }

    fn descend(
        &self,
        f: &FieldCtx,
        q: u32,
        level: usize,
        stack: &mut [Vec<Elem>],
        best: &mut (usize, Vec<Elem>),
    ) {
        if level == self.dim() {
            let w = weight(&stack[level]);
            if w < best.0 {
                *best = (w, stack[level].clone());
            }
            return;
        }
        for c in 0..q {
            let (lo, hi) = stack.split_at_mut(level + 1);
            hi[0].copy_from_slice(&lo[level]);
            add_scaled(f, &mut hi[0], self.gen.row(level), Elem(c));
            self.descend(f, q, level + 1, stack, best);
        }
    }

    /// Decides MDS by checking every `k`-column minor.
    fn minor_scan(&self) -> DistanceReport {
        let (n, k) = (self.len(), self.dim());
        match self.first_deficient_columns(k, k) {
            None => DistanceReport {
                bound: DistanceBound::Exact(n - k + 1),
                method: Method::MinorScan,
                certificate: Certificate::AllSubsetsFullRank {
                    size: k,
                    count: binomial(n, k) as u64,
                },
            },
            Some(columns) => {
                let word = self.word_vanishing_on(&columns);
                DistanceReport {
                    bound: DistanceBound::AtMost(n - k),
                    method: Method::MinorScan,
                    certificate: Certificate::DependentColumns {
                        columns,
                        word: word.iter().map(|e| e.index()).collect(),
                    },
                }
            }
        }
    }

    /// First (lexicographic) set of `size` columns of rank below `rank`.
    pub fn first_deficient_columns(&self, size: usize, rank: usize) -> Option<Vec<usize>> {
        let n = self.len();
        if size > n {
            return None;
        }
        if size == 0 {
            return (rank > 0).then(Vec::new);
        }
        (0..=n - size)
            .into_par_iter()
            .map(|first| {
                let mut rest: Vec<usize> = (first + 1..first + size).collect();
                loop {
                    let mut cols = Vec::with_capacity(size);
                    cols.push(first);
                    cols.extend_from_slice(&rest);
                    if self.gen.select_columns(&cols).rank() < rank {
                        return Some(cols);
                    }
                    if !next_combination(&mut rest, first + 1, n) {
                        return None;
                    }
                }
            })
            .find_first(Option::is_some)
            .flatten()
    }

    /// A nonzero codeword vanishing on `columns`, which must have rank < k.
    fn word_vanishing_on(&self, columns: &[usize]) -> Vec<Elem> {
        let sub = self.gen.select_columns(columns).transpose();
        let coeffs = sub.nullspace();
        self.gen.combine_rows(coeffs.row(0))
    }

    /// A nonzero dual codeword supported on `columns`, which must be dependent.
    fn dual_word_on(&self, columns: &[usize]) -> Vec<Elem> {
        let sub = self.gen.select_columns(columns);
        let y = sub.nullspace();
        let mut word = vec![Elem::ZERO; self.len()];
        for (&c, &v) in columns.iter().zip(y.row(0)) {
            word[c] = v;
        }
        word
    }

    /// MDS / NMDS / other, with the dual distance whenever NMDS is claimed.
    pub fn classify(&self, limits: &DistanceLimits) -> Result<CodeClass, CodeError> {
        if self.is_zero() {
            return Err(CodeError::ZeroCode);
        }
        let (n, k) = (self.len(), self.dim());
        let q = self.ctx().order();
        let distance = if message_count(q, k) <= u128::from(limits.max_messages) {
            self.exhaustive_distance()
        } else {
            check_limit(
                "minor scan",
                binomial(n, k + 1).max(binomial(n, k)),
                limits.max_minors,
            )?;
            let mds = self.minor_scan();
            match (&mds.bound, &mds.certificate) {
                (DistanceBound::Exact(_), _) => mds,
                (_, Certificate::DependentColumns { word, .. }) => {
                    match self.first_deficient_columns(k + 1, k) {
                        None => DistanceReport {
                            bound: DistanceBound::Exact(n - k),
                            method: Method::MinorScan,
                            certificate: Certificate::Codeword { word: word.clone() },
                        },
                        Some(columns) => {
                            let w = self.word_vanishing_on(&columns);
                            DistanceReport {
                                bound: DistanceBound::AtMost(n - k - 1),
                                method: Method::MinorScan,
                                certificate: Certificate::DependentColumns {
                                    columns,
                                    word: w.iter().map(|e| e.index()).collect(),
                                },
                            }
                        }
                    }
                }
                _ => unreachable!("minor scan returns a dependent set when not MDS"),
            }
        };

        let tag = match distance.bound {
            DistanceBound::Exact(d) if d == n - k + 1 => ClassTag::Mds,
            DistanceBound::Exact(d) if d == n - k => ClassTag::Nmds,
            _ => ClassTag::Other,
        };
        if tag != ClassTag::Nmds {
            return Ok(CodeClass {
                tag,
                distance,
                dual_distance: None,
            });
        }

        let dual_distance = if message_count(q, n - k) <= u128::from(limits.max_messages) {
            self.dual().exhaustive_distance()
        } else {
            // d(C⊥) is the least number of dependent columns of the generator.
            // C is not MDS here, so some k columns are dependent and d(C⊥) <= k.
            check_limit("column scan", binomial(n, k - 1), limits.max_minors)?;
            match self.first_deficient_columns(k - 1, k - 1) {
                None => DistanceReport {
                    bound: DistanceBound::Exact(k),
                    method: Method::ColumnScan,
                    certificate: Certificate::AllSubsetsFullRank {
                        size: k - 1,
                        count: binomial(n, k - 1) as u64,
                    },
                },
                Some(columns) => {
                    let w = self.dual_word_on(&columns);
                    DistanceReport {
                        bound: DistanceBound::AtMost(k - 1),
                        method: Method::ColumnScan,
                        certificate: Certificate::DependentColumns {
                            columns,
                            word: w.iter().map(|e| e.index()).collect(),
                        },
                    }
                }
            }
        };
        let tag = if dual_distance.bound == DistanceBound::Exact(k) {
            ClassTag::Nmds
        } else {
            ClassTag::Other
        };
        Ok(CodeClass {
            tag,
            distance,
            dual_distance: Some(dual_distance),
        })
    }

    /// `dim(C²) >= 2k` rules out a GRS code of the same parameters when
    /// `2k <= n`, since those have square dimension exactly `2k - 1`.
    pub fn non_grs_certificate(&self) -> Result<Option<NonGrsCertificate>, CodeError> {
        let (n, k) = (self.len(), self.dim());
        if 2 * k > n {
            return Err(CodeError::Precondition(format!(
                "need k < (n + 1)/2, got n = {n}, k = {k}"
            )));
        }
        let square = self.schur_square();
        Ok((square.dim() >= 2 * k).then(|| NonGrsCertificate {
            square_dim: square.dim(),
            threshold: 2 * k,
            square_digest: square.generator().digest(),
        }))
    }
}

fn add_scaled(f: &FieldCtx, acc: &mut [Elem], row: &[Elem], c: Elem) {
    if c.is_zero() {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(row) {
        *a = f.add(*a, f.mul(c, x));
    }
}

fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|e| !e.is_zero()).count()
}

/// Advances `comb` (strictly increasing, values in `lo..n`) to the next combination.
fn next_combination(comb: &mut [usize], lo: usize, n: usize) -> bool {
    let len = comb.len();
    if len == 0 {
        return false;
    }
    let mut i = len;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (len - i) {
            comb[i] += 1;
            for j in i + 1..len {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    let _ = lo;
    false
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn message_count(q: u32, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

fn check_limit(strategy: &'static str, size: u128, limit: u64) -> Result<(), CodeError> {
    if size > u128::from(limit) {
        Err(CodeError::TooLarge {
            strategy,
            size,
            limit,
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Auto,
    Exhaustive,
    MinorScan,
}

/// Work bounds for distance computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceLimits {
    /// Largest `q^k` enumerated exhaustively.
    pub max_messages: u64,
    /// Largest number of column subsets examined by a scan.
    pub max_minors: u64,
}

impl Default for DistanceLimits {
    fn default() -> Self {
        Self {
            max_messages: 100_000_000,
            max_minors: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    MinorScan,
    ColumnScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceBound {
    Exact(usize),
    AtMost(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Certificate {
    /// A codeword of the reported weight.
    Codeword { word: Vec<u32> },
    /// A dependent column set and a nonzero word it produces.
    DependentColumns { columns: Vec<usize>, word: Vec<u32> },
    /// Every column subset of `size` was checked and found independent.
    AllSubsetsFullRank { size: usize, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub bound: DistanceBound,
    pub method: Method,
    pub certificate: Certificate,
}

impl DistanceReport {
    pub fn exact(&self) -> Option<usize> {
        match self.bound {
            DistanceBound::Exact(d) => Some(d),
            DistanceBound::AtMost(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClassTag {
    Mds,
    Nmds,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeClass {
    pub tag: ClassTag,
    pub distance: DistanceReport,
    pub dual_distance: Option<DistanceReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonGrsCertificate {
    pub square_dim: usize,
    pub threshold: usize,
    pub square_digest: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(q: u64) -> Arc<FieldCtx> {
        FieldCtx::new(FieldSpec::for_order(q).unwrap()).unwrap()
    }

    fn rows(r: &[&[u32]]) -> Vec<Vec<Elem>> {
        r.iter()
            .map(|r| r.iter().map(|&x| Elem(x)).collect())
            .collect()
    }

    fn random_code(f: &Arc<FieldCtx>, rng: &mut ChaCha8Rng, k: usize, n: usize) -> LinearCode {
        let r = (0..k)
            .map(|_| (0..n).map(|_| Elem(rng.gen_range(0..f.order()))).collect())
            .collect();
        LinearCode::from_generators(f, r).unwrap()
    }

    /// Brute-force distance over every message, no projective shortcut.
    fn brute_distance(c: &LinearCode) -> usize {
        let f = c.ctx();
        let q = f.order() as u64;
        let k = c.dim();
        (1..q.pow(k as u32))
            .map(|mut idx| {
                let coeffs: Vec<Elem> = (0..k)
                    .map(|_| {
                        let e = Elem((idx % q) as u32);
                        idx /= q;
                        e
                    })
                    .collect();
                weight(&c.generator().combine_rows(&coeffs))
            })
            .min()
            .unwrap()
    }

    #[test]
    fn generator_examples() {
        let f = field(3);
        assert_eq!(
            LinearCode::from_generators(&f, rows(&[&[1, 0], &[0, 1]]))
                .unwrap()
                .dim(),
            2
        );
        assert_eq!(
            LinearCode::from_generators(&f, rows(&[&[1, 1], &[2, 2]]))
                .unwrap()
                .dim(),
            1
        );
        assert_eq!(
            LinearCode::from_generators(&f, vec![]).unwrap_err(),
            CodeError::Empty
        );
    }

    #[test]
    fn dual_examples() {
        let f = field(8);
        assert!(LinearCode::full(&f, 5).dual().is_zero());
        assert_eq!(LinearCode::zero(&f, 5).dual(), LinearCode::full(&f, 5));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.gen_range(2..9);
            let k = rng.gen_range(1..=n);
            let c = random_code(&f, &mut rng, k, n);
            let d = c.dual();
            assert_eq!(c.dim() + d.dim(), n);
            assert_eq!(d.dual(), c);
            assert!(c
                .generator()
                .mul(&d.generator().transpose())
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn schur_examples() {
        let f = field(7);
        let ones = LinearCode::from_generators(&f, vec![vec![Elem::ONE; 5]]).unwrap();
        assert_eq!(ones.schur_square(), ones);
        let a = LinearCode::from_generators(&f, rows(&[&[1, 2, 3, 4]])).unwrap();
        let b = LinearCode::from_generators(&f, rows(&[&[1, 1, 0, 0]])).unwrap();
        assert!(matches!(
            a.schur_product(&LinearCode::full(&f, 3)),
            Err(CodeError::LengthMismatch(4, 3))
        ));
        assert_eq!(a.schur_product(&b).unwrap(), b.schur_product(&a).unwrap());
    }

    #[test]
    fn schur_square_uses_all_pairs() {
        let f = field(9);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let c = random_code(&f, &mut rng, 3, 8);
            assert_eq!(c.schur_square(), c.schur_product(&c).unwrap());
        }
    }

    #[test]
    fn schur_is_monotone() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let small = random_code(&f, &mut rng, 2, 6);
            let extra = random_code(&f, &mut rng, 1, 6);
            let big =
                LinearCode::from_matrix(&small.generator().vstack(extra.generator()).unwrap());
            let other = random_code(&f, &mut rng, 2, 6);
            let lhs = small.schur_product(&other).unwrap();
            let rhs = big.schur_product(&other).unwrap();
            assert!(rhs.contains(&lhs).unwrap());
        }
    }

    #[test]
    fn self_orthogonality_examples() {
        let f = field(5);
        assert!(LinearCode::zero(&f, 4).is_self_orthogonal());
        assert!(!LinearCode::full(&f, 4).is_self_orthogonal());
        let c = LinearCode::from_generators(&f, rows(&[&[1, 2]])).unwrap();
        assert!(c.is_self_orthogonal());
        assert!(c.dual().contains(&c).unwrap());
    }

    #[test]
    fn repetition_code_distance() {
        let f = field(4);
        let rep = LinearCode::from_generators(&f, vec![vec![Elem::ONE; 6]]).unwrap();
        let r = rep
            .min_distance(Strategy::Exhaustive, &DistanceLimits::default())
            .unwrap();
        assert_eq!(r.bound, DistanceBound::Exact(6));
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let n = rng.gen_range(3..8);
            let k = rng.gen_range(1..=3.min(n));
            let c = random_code(&f, &mut rng, k, n);
            let r = c
                .min_distance(Strategy::Exhaustive, &DistanceLimits::default())
                .unwrap();
            let d = brute_distance(&c);
            assert_eq!(r.bound, DistanceBound::Exact(d));
            let Certificate::Codeword { word } = &r.certificate else {
                panic!()
            };
            let word: Vec<Elem> = word.iter().map(|&x| Elem(x)).collect();
            assert_eq!(weight(&word), d);
            assert!(c.contains_word(&word).unwrap());
            assert!(d <= n - c.dim() + 1);
        }
    }

    #[test]
    fn minor_scan_agrees_with_exhaustive_on_mds_question() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let limits = DistanceLimits::default();
        for _ in 0..40 {
            let n = rng.gen_range(3..7);
            let k = rng.gen_range(1..n);
            let c = random_code(&f, &mut rng, k, n);
            let ex = c.min_distance(Strategy::Exhaustive, &limits).unwrap();
            let ms = c.min_distance(Strategy::MinorScan, &limits).unwrap();
            let mds = ex.bound == DistanceBound::Exact(n - c.dim() + 1);
            assert_eq!(mds, matches!(ms.bound, DistanceBound::Exact(_)));
            if let Certificate::DependentColumns { columns, word } = &ms.certificate {
                let word: Vec<Elem> = word.iter().map(|&x| Elem(x)).collect();
                assert!(c.contains_word(&word).unwrap());
                assert!(weight(&word) > 0);
                assert!(columns.iter().all(|&i| word[i].is_zero()));
            }
        }
    }

    #[test]
    fn classification_with_and_without_enumeration() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let full = DistanceLimits::default();
        let scans_only = DistanceLimits {
            max_messages: 0,
            max_minors: 1_000_000,
        };
        for _ in 0..60 {
            let n = rng.gen_range(4..8);
            let k = rng.gen_range(2..n - 1);
            let c = random_code(&f, &mut rng, k, n);
            let a = c.classify(&full).unwrap();
            let b = c.classify(&scans_only).unwrap();
            assert_eq!(a.tag, b.tag);
            if a.tag == ClassTag::Nmds {
                assert_eq!(a.dual_distance.as_ref().unwrap().exact(), Some(c.dim()));
                assert_eq!(b.dual_distance.as_ref().unwrap().exact(), Some(c.dim()));
            }
        }
    }

    #[test]
    fn distance_guards() {
        let f = field(16);
        let c = LinearCode::full(&f, 10);
        let tight = DistanceLimits {
            max_messages: 1000,
            max_minors: 10,
        };
        assert!(matches!(
            c.min_distance(Strategy::Exhaustive, &tight),
            Err(CodeError::TooLarge { .. })
        ));
        assert_eq!(
            LinearCode::zero(&f, 3)
                .min_distance(Strategy::Auto, &tight)
                .unwrap_err(),
            CodeError::ZeroCode
        );
    }

    #[test]
    fn defect_two_is_other() {
        let f = field(5);
        // weight-2 word in a [6, 3] code: defect n - k + 1 - d = 2
        let c = LinearCode::from_generators(
            &f,
            rows(&[
                &[1, 1, 0, 0, 0, 0],
                &[0, 0, 1, 2, 3, 4],
                &[0, 1, 1, 1, 1, 1],
            ]),
        )
        .unwrap();
        assert_eq!(
            c.classify(&DistanceLimits::default()).unwrap().tag,
            ClassTag::Other
        );
    }

    #[test]
    fn combinations_enumerate_everything() {
        let mut comb = vec![1, 2];
        let mut count = 1;
        while next_combination(&mut comb, 1, 6) {
            count += 1;
        }
        assert_eq!(count, binomial(5, 2));
        assert_eq!(binomial(15, 6), 5005);
    }
}
