//! Permanents, permanental rank and the row-product criterion.
//!
//! Label the columns of an `m x n` matrix with variables `y_1..y_n` and read
//! each row as a linear form. In the squarefree algebra the coefficient of
//! `y_J` (`|J| = m`) in the product of the rows is the permanent of the
//! `m x m` submatrix on columns `J`, so the matrix has full perrank exactly
//! when that product is nonzero. [`row_product`] evaluates such products on a
//! dense `2^n` coefficient table, which is far cheaper than enumerating
//! minors.

use rayon::prelude::*;
use thiserror::Error;

use crate::ff::{Field, Scalar};
use crate::matrix::MatrixF;

/// Largest size accepted by [`permanent_naive`].
pub const NAIVE_MAX: usize = 10;
/// Largest size accepted by [`permanent`].
pub const RYSER_MAX: usize = 24;
/// Largest variable count of a row product.
pub const ROW_PRODUCT_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerrankError {
    #[error("permanent needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what}: size {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
    #[error("blocks must be square, equally sized and over one field")]
    BlockMismatch,
    #[error("repeat count must be at least 1")]
    NoRepeats,
}

fn check_square(m: &MatrixF) -> Result<(), PerrankError> {
    if !m.is_square() {
        return Err(PerrankError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(())
}

/// Sum over all permutations of entry products.
pub fn permanent_naive(m: &MatrixF) -> Result<Scalar, PerrankError> {
    check_square(m)?;
    let n = m.rows();
    if n > NAIVE_MAX {
        return Err(PerrankError::TooLarge { what: "naive permanent", size: n, cap: NAIVE_MAX });
    }
    fn rec(m: &MatrixF, row: usize, used: u32, acc: u8, total: &mut u8) {
        let f = m.field();
        if row == m.rows() {
            *total = f.add(*total, acc);
            return;
        }
        for c in 0..m.cols() {
            if used >> c & 1 == 0 {
                let v = m.get(row, c);
                if v != 0 {
                    rec(m, row + 1, used | 1 << c, f.mul(acc, v), total);
                }
            }
        }
    }
    let mut total = 0u8;
    rec(m, 0, 0, 1, &mut total);
    Ok(Scalar::new(m.field(), total).expect("canonical"))
}

/// Ryser's inclusion-exclusion formula
/// `per(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij`.
///
/// Column subsets are visited in binary-reflected Gray code order: step
/// `k = 1, 2, ..., 2^n - 1` toggles column `trailing_zeros(k)`, and the
/// current subset is `k ^ (k >> 1)`. Each step updates the row sums with one
/// column addition or subtraction.
pub fn permanent(m: &MatrixF) -> Result<Scalar, PerrankError> {
    check_square(m)?;
    let n = m.rows();
    if n > RYSER_MAX {
        return Err(PerrankError::TooLarge { what: "Ryser permanent", size: n, cap: RYSER_MAX });
    }
    let f = m.field();
    let columns: Vec<Vec<u8>> = (0..n).map(|c| m.column(c)).collect();
    let mut row_sums = vec![0u8; n];
    let mut total = 0u8;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let adding = gray >> j & 1 == 1;
        for (s, &a) in row_sums.iter_mut().zip(&columns[j]) {
            *s = if adding { f.add(*s, a) } else { f.sub(*s, a) };
        }
        let mut prod = 1u8;
        for &s in &row_sums {
            prod = f.mul(prod, s);
            if prod == 0 {
                break;
            }
        }
        if prod != 0 {
            total = if gray.count_ones() % 2 == 1 { f.sub(total, prod) } else { f.add(total, prod) };
        }
    }
    if n % 2 == 1 {
        total = f.neg(total);
    }
    if n == 0 {
        total = 1;
    }
    Ok(Scalar::new(f, total).expect("canonical"))
}

/// Dense product of linear forms in `num_vars` variables.
///
/// Returns the coefficient table indexed by variable bitmask (length
/// `2^num_vars`), or `None` as soon as a partial product vanishes.
pub fn row_product(field: Field, forms: &[&[u8]], num_vars: usize) -> Result<Option<Vec<u8>>, PerrankError> {
    if num_vars > ROW_PRODUCT_MAX_VARS {
        return Err(PerrankError::TooLarge {
            what: "row product variables",
            size: num_vars,
            cap: ROW_PRODUCT_MAX_VARS,
        });
    }
    if forms.len() > num_vars {
        return Ok(None);
    }
    let mut table = vec![0u8; 1usize << num_vars];
    table[0] = 1;
    for (degree, form) in forms.iter().enumerate() {
        debug_assert_eq!(form.len(), num_vars);
        let support: Vec<(usize, u8)> = form
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (j, a))
            .collect();
        for mask in masks_of_weight(num_vars, degree) {
            let c = table[mask as usize];
            if c == 0 {
                continue;
            }
            table[mask as usize] = 0;
            for &(j, a) in &support {
                if mask >> j & 1 == 0 {
                    let t = (mask | 1 << j) as usize;
                    table[t] = field.add(table[t], field.mul(c, a));
                }
            }
        }
        if masks_of_weight(num_vars, degree + 1).all(|mask| table[mask as usize] == 0) {
            return Ok(None);
        }
    }
    Ok(Some(table))
}

/// Whether the product of the given linear forms is nonzero.
pub fn row_product_nonzero(field: Field, forms: &[&[u8]], num_vars: usize) -> Result<bool, PerrankError> {
    Ok(row_product(field, forms, num_vars)?.is_some())
}

/// Bitmasks of exactly `weight` set bits below `2^n`, ascending (Gosper's hack).
fn masks_of_weight(n: usize, weight: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let mut next = if weight > n { None } else { Some((1u64 << weight) - 1) };
    std::iter::from_fn(move || {
        let x = next?;
        if x >= limit {
            return None;
        }
        next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            Some((((r ^ x) >> 2) / c) | r)
        };
        Some(x as u32)
    })
}

/// Rows as forms in the column variables when `rows <= cols`, otherwise the
/// columns as forms in the row variables.
fn oriented(m: &MatrixF) -> MatrixF {
    if m.rows() <= m.cols() {
        m.clone()
    } else {
        m.transpose()
    }
}

/// `perrank(M) == min(rows, cols)`, decided by one row product.
pub fn full_perrank(m: &MatrixF) -> Result<bool, PerrankError> {
    let o = oriented(m);
    let rows: Vec<&[u8]> = (0..o.rows()).map(|r| o.row(r)).collect();
    row_product_nonzero(o.field(), &rows, o.cols())
}

/// Size of the largest square submatrix with nonzero permanent.
///
/// Tries `k = min(rows, cols)` downwards and, for each `k`, every `k`-subset
/// of the shorter side, stopping at the first nonzero row product.
pub fn perrank(m: &MatrixF) -> Result<usize, PerrankError> {
    let o = oriented(m);
    if o.cols() > ROW_PRODUCT_MAX_VARS {
        return Err(PerrankError::TooLarge {
            what: "row product variables",
            size: o.cols(),
            cap: ROW_PRODUCT_MAX_VARS,
        });
    }
    let field = o.field();
    let rows: Vec<&[u8]> = (0..o.rows()).map(|r| o.row(r)).collect();
    for k in (1..=o.rows()).rev() {
        let found = subsets(o.rows(), k).into_par_iter().any(|subset| {
            let forms: Vec<&[u8]> = subset.iter().map(|&i| rows[i]).collect();
            row_product_nonzero(field, &forms, o.cols()).expect("size checked above")
        });
        if found {
            return Ok(k);
        }
    }
    Ok(0)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Concatenate square blocks side by side and repeat the band `repeats` times.
pub fn stack_matrix(blocks: &[MatrixF], repeats: usize) -> Result<MatrixF, PerrankError> {
    if repeats == 0 {
        return Err(PerrankError::NoRepeats);
    }
    let first = blocks.first().ok_or(PerrankError::BlockMismatch)?;
    let n = first.rows();
    if blocks
        .iter()
        .any(|b| !b.is_square() || b.rows() != n || b.field() != first.field())
    {
        return Err(PerrankError::BlockMismatch);
    }
    let width = n * blocks.len();
    let mut data = Vec::with_capacity(repeats * n * width);
    for _ in 0..repeats {
        for r in 0..n {
            for b in blocks {
                data.extend_from_slice(b.row(r));
            }
        }
    }
    Ok(MatrixF::new(first.field(), repeats * n, width, data).expect("entries are canonical"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> Field {
        Field::gf3()
    }

    fn mat(rows: &[&[u8]]) -> MatrixF {
        MatrixF::from_rows(gf3(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(permanent_naive(&MatrixF::identity(gf3(), 3)).unwrap().value(), 1);
        assert_eq!(permanent_naive(&mat(&[&[1, 1], &[1, 1]])).unwrap().value(), 2);
        assert_eq!(permanent_naive(&mat(&[&[1, 2, 1], &[0, 0, 0], &[2, 2, 2]])).unwrap().value(), 0);
        assert_eq!(permanent(&MatrixF::identity(gf3(), 4)).unwrap().value(), 1);
        assert_eq!(permanent(&mat(&[&[1, 1], &[1, 1]])).unwrap().value(), 2);
        let ones = MatrixF::new(gf3(), 5, 5, vec![1; 25]).unwrap();
        assert_eq!(permanent(&ones).unwrap().value(), 0);
        assert_eq!(permanent_naive(&ones).unwrap().value(), 0);
    }

    #[test]
    fn permanent_of_all_ones_is_factorial() {
        let f5 = Field::gf5();
        for n in 1..=4usize {
            let ones = MatrixF::new(f5, n, n, vec![1; n * n]).unwrap();
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(permanent(&ones).unwrap().value() as u64, fact % 5);
        }
    }

    #[test]
    fn permanent_errors() {
        let m = MatrixF::zeros(gf3(), 2, 3);
        assert!(matches!(permanent(&m), Err(PerrankError::NotSquare { .. })));
        assert!(matches!(permanent_naive(&m), Err(PerrankError::NotSquare { .. })));
        let big = MatrixF::identity(gf3(), 11);
        assert!(matches!(permanent_naive(&big), Err(PerrankError::TooLarge { .. })));
        assert_eq!(permanent(&big).unwrap().value(), 1);
    }

    #[test]
    fn perrank_examples() {
        assert_eq!(perrank(&MatrixF::zeros(gf3(), 3, 4)).unwrap(), 0);
        assert_eq!(perrank(&MatrixF::identity(gf3(), 5)).unwrap(), 5);
        let m = mat(&[&[1, 1], &[2, 1]]);
        assert!(permanent(&m).unwrap().is_zero());
        assert_eq!(perrank(&m).unwrap(), 1);
        assert!(!full_perrank(&m).unwrap());
    }

    #[test]
    fn full_perrank_examples() {
        assert!(full_perrank(&mat(&[&[1, 1, 1, 1], &[1, 1, 1, 1]])).unwrap());
        assert!(!full_perrank(&mat(&[&[1, 1, 1], &[0, 0, 0]])).unwrap());
        assert!(full_perrank(&MatrixF::identity(gf3(), 6)).unwrap());
        // tall matrices use columns
        assert!(full_perrank(&mat(&[&[1, 1], &[1, 1], &[1, 1], &[1, 1]])).unwrap());
    }

    #[test]
    fn masks_of_weight_counts() {
        assert_eq!(masks_of_weight(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(masks_of_weight(4, 2).count(), 6);
        assert_eq!(masks_of_weight(4, 4).collect::<Vec<_>>(), vec![15]);
        assert_eq!(masks_of_weight(3, 4).count(), 0);
        let v: Vec<u32> = masks_of_weight(5, 3).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v.len(), 10);
    }

    #[test]
    fn subsets_enumerates_combinations() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn stack_examples() {
        let one = mat(&[&[1]]);
        let s = stack_matrix(&[one.clone(), one.clone(), one.clone(), one], 2).unwrap();
        assert_eq!(s, mat(&[&[1, 1, 1, 1], &[1, 1, 1, 1]]));

        let i2 = MatrixF::identity(gf3(), 2);
        let s = stack_matrix(&vec![i2; 4], 2).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 8));
        assert_eq!(s.row(0), s.row(2));
        assert_eq!(s.row(1), s.row(3));

        let f5 = Field::gf5();
        let blocks: Vec<MatrixF> = [1, 2, 3, 4, 1].iter().map(|&v| MatrixF::new(f5, 1, 1, vec![v]).unwrap()).collect();
        let s = stack_matrix(&blocks, 4).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 5));
        assert!((1..4).all(|r| s.row(r) == s.row(0)));

        assert_eq!(stack_matrix(&[], 2), Err(PerrankError::BlockMismatch));
        let bad = [MatrixF::identity(gf3(), 2), MatrixF::identity(gf3(), 3)];
        assert_eq!(stack_matrix(&bad, 1), Err(PerrankError::BlockMismatch));
        assert_eq!(stack_matrix(&[MatrixF::identity(gf3(), 1)], 0), Err(PerrankError::NoRepeats));
    }

    #[test]
    fn row_product_cap() {
        let r = row_product(gf3(), &[], 25);
        assert!(matches!(r, Err(PerrankError::TooLarge { .. })));
    }
}
