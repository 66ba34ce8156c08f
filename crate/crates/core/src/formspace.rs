//! Linear form spaces and their minimum support functions.
//!
//! A [`LinearFormSpace`] is a subspace of `A_1` given by linearly
//! independent basis rows. `ms_i(U)` is the smallest support of an
//! `i`-dimensional subspace of `U` (the `i`-th generalized Hamming weight of
//! the row-space code). It is computed exactly by enumerating every
//! `i`-dimensional subspace through its reduced row-echelon coefficient
//! matrix, so the cost is the Gaussian binomial `[n choose i]_q`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Element;
use crate::ff::Field;
use crate::matrix::{combine, rref, MatrixError, MatrixF};

/// Default ceiling on the number of subspaces `ms` may enumerate.
pub const DEFAULT_MS_CEILING: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormSpaceError {
    #[error("basis rows are linearly dependent (rank {rank} < {rows})")]
    Dependent { rank: usize, rows: usize },
    #[error("dimension {i} out of range 1..={dim}")]
    DimensionOutOfRange { i: usize, dim: usize },
    #[error("cover sequence of length {len} is longer than dim(U) = {dim}")]
    SequenceTooLong { len: usize, dim: usize },
    #[error("cover sequence {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("cover sequence must have length dim(U) = {dim}, got {len}")]
    WrongLength { len: usize, dim: usize },
    #[error("U does not cover the sequence: ms_{i}(U) = {ms} < {required}")]
    NotCovered { i: usize, ms: usize, required: usize },
    #[error("enumerating {count} subspaces exceeds the ceiling {ceiling}")]
    TooLarge { count: u128, ceiling: u128 },
    #[error("cannot embed a space over {from} into {to}")]
    Embedding { from: String, to: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An `n`-dimensional space of linear forms in `num_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormSpace {
    field: Field,
    num_vars: usize,
    basis: Vec<Vec<u8>>,
}

impl LinearFormSpace {
    /// Rows must be linearly independent.
    pub fn new(field: Field, num_vars: usize, basis: Vec<Vec<u8>>) -> Result<Self, FormSpaceError> {
        let m = MatrixF::new(field, basis.len(), num_vars, basis.concat())?;
        let rank = m.rank();
        if rank < basis.len() {
            return Err(FormSpaceError::Dependent { rank, rows: basis.len() });
        }
        Ok(LinearFormSpace { field, num_vars, basis })
    }

    /// The row space of a matrix with independent rows.
    pub fn from_matrix(m: &MatrixF) -> Result<Self, FormSpaceError> {
        Self::new(m.field(), m.cols(), m.row_vecs())
    }

    /// The row space of any matrix (rows are reduced first).
    pub fn row_space(m: &MatrixF) -> Self {
        let mut rows = m.row_vecs();
        rref(m.field(), &mut rows);
        LinearFormSpace { field: m.field(), num_vars: m.cols(), basis: rows }
    }

    pub fn zero(field: Field, num_vars: usize) -> Self {
        LinearFormSpace { field, num_vars, basis: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn to_matrix(&self) -> MatrixF {
        MatrixF::new(self.field, self.dim(), self.num_vars, self.basis.concat())
            .expect("basis is canonical")
    }

    /// Basis rows as elements of the algebra.
    pub fn forms(&self) -> Vec<Element> {
        self.basis.iter().map(|r| Element::linear(self.field, r)).collect()
    }

    /// `sum_j coeffs[j] * basis[j]` as a coefficient row.
    pub fn combination(&self, coeffs: &[u8]) -> Vec<u8> {
        combine(self.field, coeffs, &self.basis, self.num_vars)
    }

    /// Variables (0-based) on which some basis row is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vars)
            .filter(|&j| self.basis.iter().any(|r| r[j] != 0))
            .collect()
    }

    /// Re-encode over an extension of the prime field of the entries.
    pub fn embed(&self, field: Field) -> Result<Self, FormSpaceError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let m = self.to_matrix().embed(field).map_err(|_| FormSpaceError::Embedding {
            from: self.field.name().into(),
            to: field.name().into(),
        })?;
        Ok(LinearFormSpace { field, num_vars: self.num_vars, basis: m.row_vecs() })
    }

    /// Whether the coefficient row lies in the span.
    pub fn contains_row(&self, row: &[u8]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(row.to_vec());
        rref(self.field, &mut rows).len() == self.dim()
    }

    /// `ms_i(U)` with the default enumeration ceiling.
    pub fn ms(&self, i: usize) -> Result<usize, FormSpaceError> {
        self.ms_with_ceiling(i, DEFAULT_MS_CEILING)
    }

    pub fn ms_with_ceiling(&self, i: usize, ceiling: u128) -> Result<usize, FormSpaceError> {
        let n = self.dim();
        if i == 0 || i > n {
            return Err(FormSpaceError::DimensionOutOfRange { i, dim: n });
        }
        let count = gaussian_binomial(n, i, self.field.order() as u64);
        if count > ceiling {
            return Err(FormSpaceError::TooLarge { count, ceiling });
        }
        let row_masks = |coeffs: &[Vec<u8>]| -> usize {
            let mut mask = 0u32;
            for c in coeffs {
                let v = self.combination(c);
                for (j, &x) in v.iter().enumerate() {
                    if x != 0 {
                        mask |= 1 << j;
                    }
                }
            }
            mask.count_ones() as usize
        };
        let best = pivot_patterns(n, i)
            .into_par_iter()
            .map(|pivots| {
                let mut best = usize::MAX;
                for_each_rref_with_pivots(self.field, n, &pivots, |coeffs| {
                    best = best.min(row_masks(coeffs));
                });
                best
            })
            .min()
            .expect("at least one subspace");
        Ok(best)
    }

    /// `(ms_1, ..., ms_n)`.
    pub fn ms_profile(&self) -> Result<Vec<usize>, FormSpaceError> {
        (1..=self.dim()).map(|i| self.ms(i)).collect()
    }

    /// `ms_i(U) >= seq[i-1]` for every entry of `seq`.
    pub fn covers(&self, seq: &[usize]) -> Result<bool, FormSpaceError> {
        if seq.len() > self.dim() {
            return Err(FormSpaceError::SequenceTooLong { len: seq.len(), dim: self.dim() });
        }
        for (i, &a) in seq.iter().enumerate() {
            if self.ms(i + 1)? < a {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `[n choose k]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..k {
        let top = q
            .checked_pow((n - j) as u32)
            .map(|v| v - 1)
            .unwrap_or(u128::MAX);
        let bottom = q.pow((j + 1) as u32) - 1;
        num = match num.checked_mul(top) {
            Some(v) => v,
            None => return u128::MAX,
        };
        den *= bottom;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pivot_patterns(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for c in start..=n - left {
            acc.push(c);
            rec(c + 1, n, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, i, &mut Vec::new(), &mut out);
    out
}

/// Visit every `pivots.len() x n` reduced row-echelon matrix with the given
/// pivot columns. Free entries run through the field in encoding order,
/// last free position fastest.
fn for_each_rref_with_pivots<F: FnMut(&[Vec<u8>])>(field: Field, n: usize, pivots: &[usize], mut visit: F) {
    let mut rows: Vec<Vec<u8>> = pivots
        .iter()
        .map(|&p| {
            let mut r = vec![0u8; n];
            r[p] = 1;
            r
        })
        .collect();
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
        .collect();
    let q = field.order() as u8;
    loop {
        visit(&rows);
        // odometer increment
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            let (r, c) = free[pos];
            if rows[r][c] + 1 < q {
                rows[r][c] += 1;
                break;
            }
            rows[r][c] = 0;
        }
    }
}

/// Visit every `i`-dimensional subspace of `F^n` once, as its reduced
/// row-echelon coefficient matrix.
pub fn for_each_subspace<F: FnMut(&[Vec<u8>])>(field: Field, n: usize, i: usize, mut visit: F) {
    if i > n {
        return;
    }
    for pivots in pivot_patterns(n, i) {
        for_each_rref_with_pivots(field, n, &pivots, &mut visit);
    }
}

/// Coefficient vectors of `F^n` normalized to first nonzero entry 1, in
/// lexicographic order of their encodings.
pub fn projective_points(field: Field, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for lead in 0..n {
        for_each_rref_with_pivots(field, n, &[lead], |rows| out.push(rows[0].clone()));
    }
    out.sort();
    out
}

/// Record of one field tried by [`lemma6_chain`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldAttempt {
    pub field: String,
    pub succeeded: bool,
    /// Candidate extension vectors examined across all steps.
    pub candidates: u64,
    /// Step `k -> k+1` at which the search ran dry.
    pub failed_at_step: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Lemma6Outcome {
    pub attempts: Vec<FieldAttempt>,
    /// `U_0 ⊂ U_1 ⊂ ... ⊂ U_n` over the successful field.
    pub chain: Option<Vec<LinearFormSpace>>,
}

impl Lemma6Outcome {
    pub fn field(&self) -> Option<&str> {
        self.attempts.iter().find(|a| a.succeeded).map(|a| a.field.as_str())
    }
}

/// Build a chain `U_0 ⊂ U_1 ⊂ ... ⊂ U_n ⊆ U` in which `U_k` has dimension `k`
/// and covers `(a_{n+1-k}, ..., a_n)`.
///
/// Step `k -> k+1` adds a vector `v` such that every element of the coset
/// `v + U_k` has support at least `a_{n-k}`; that is exactly the condition of
/// avoiding all subspaces `{v : supp(v + u) ⊆ S for some u in U_k}` with
/// `|S| = a_{n-k} - 1`. Candidates are projective coefficient vectors over
/// the basis of `U`, tried in lexicographic order. Over a finite field the
/// search can run dry; a space over GF(3) is then retried over GF(9) and
/// GF(27).
pub fn lemma6_chain(u: &LinearFormSpace, seq: &[usize]) -> Result<Lemma6Outcome, FormSpaceError> {
    let n = u.dim();
    if seq.len() != n {
        return Err(FormSpaceError::WrongLength { len: seq.len(), dim: n });
    }
    if seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FormSpaceError::NotIncreasing(seq.to_vec()));
    }
    for (i, &a) in seq.iter().enumerate() {
        let ms = u.ms(i + 1)?;
        if ms < a {
            return Err(FormSpaceError::NotCovered { i: i + 1, ms, required: a });
        }
    }
    let fields: Vec<Field> = if u.field() == Field::gf3() {
        vec![Field::gf3(), Field::gf9(), Field::gf27()]
    } else {
        vec![u.field()]
    };
    let mut attempts = Vec::new();
    for field in fields {
        let embedded = u.embed(field)?;
        let (attempt, chain) = chain_over(&embedded, seq)?;
        attempts.push(attempt);
        if chain.is_some() {
            return Ok(Lemma6Outcome { attempts, chain });
        }
    }
    Ok(Lemma6Outcome { attempts, chain: None })
}

fn chain_over(
    u: &LinearFormSpace,
    seq: &[usize],
) -> Result<(FieldAttempt, Option<Vec<LinearFormSpace>>), FormSpaceError> {
    let field = u.field();
    let n = u.dim();
    let points = projective_points(field, n);
    let mut chain = vec![LinearFormSpace::zero(field, u.num_vars())];
    // coefficient rows (over the basis of u) spanning the current U_k
    let mut current: Vec<Vec<u8>> = Vec::new();
    let mut candidates = 0u64;
    for k in 0..n {
        let threshold = seq[n - k - 1];
        let coset: Vec<Vec<u8>> = all_combinations(field, &current, n);
        let mut chosen = None;
        for c in &points {
            let mut test = current.clone();
            test.push(c.clone());
            if rref(field, &mut test).len() == k {
                continue; // already in U_k
            }
            candidates += 1;
            let min_support = coset
                .iter()
                .map(|w| {
                    let sum: Vec<u8> = c.iter().zip(w).map(|(&a, &b)| field.add(a, b)).collect();
                    u.combination(&sum).iter().filter(|&&x| x != 0).count()
                })
                .min()
                .expect("coset contains v itself");
            if min_support < threshold {
                continue;
            }
            let mut next = current.clone();
            next.push(c.clone());
            let space = LinearFormSpace::new(
                field,
                u.num_vars(),
                next.iter().map(|r| u.combination(r)).collect(),
            )?;
            if space.covers(&seq[n - k - 1..])? {
                chosen = Some((next, space));
                break;
            }
        }
        match chosen {
            Some((next, space)) => {
                current = next;
                chain.push(space);
            }
            None => {
                let attempt = FieldAttempt {
                    field: field.name().into(),
                    succeeded: false,
                    candidates,
                    failed_at_step: Some(k),
                };
                return Ok((attempt, None));
            }
        }
    }
    let attempt = FieldAttempt {
        field: field.name().into(),
        succeeded: true,
        candidates,
        failed_at_step: None,
    };
    Ok((attempt, Some(chain)))
}

/// Every linear combination of `rows` (vectors of length `n`).
fn all_combinations(field: Field, rows: &[Vec<u8>], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; n]];
    for r in rows {
        let mut next = Vec::with_capacity(out.len() * field.order());
        for c in field.elements() {
            for v in &out {
                next.push(
                    v.iter()
                        .zip(r)
                        .map(|(&a, &b)| field.add(a, field.mul(c, b)))
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}
