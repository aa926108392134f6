//! Exact linear algebra: a dense solver over any coefficient field and a
//! sparse integer-preserving elimination engine for large rational
//! nullspace problems.
//!
//! The sparse engine clears denominators row by row, then eliminates with
//! cross-multiplied integer row updates (`pivot * row - entry * pivot_row`)
//! followed by content-gcd removal, choosing pivots by Markowitz cost to
//! limit fill-in. The result is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::laurent::Coeff;
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("singular system")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Solves the square dense system `a x = b` over a coefficient field.
pub fn solve_dense<C: Coeff>(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Result<Vec<C>, LinalgError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(LinalgError::Dimension(format!("{n}x{n} expected")));
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::Singular)?;
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            let delta = factor * b[col].clone();
            b[r] = b[r].clone() - delta;
        }
    }
    Ok((0..n)
        .map(|i| b[i].clone() * a[i][i].inv().expect("nonzero pivot"))
        .collect())
}

/// Sparse matrix with exact rational entries, row-major.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRationalMatrix {
    ncols: usize,
    rows: Vec<Vec<(u32, Rational)>>,
}

impl SparseRationalMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseRationalMatrix { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row given as (column, value) pairs; zeros are dropped and
    /// duplicate columns accumulated.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (u32, Rational)>) {
        let mut row: Vec<(u32, Rational)> = Vec::new();
        for (c, v) in entries {
            assert!((c as usize) < self.ncols, "column {c} out of range");
            row.push((c, v));
        }
        row.sort_by_key(|&(c, _)| c);
        let mut merged: Vec<(u32, Rational)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.rows.push(merged);
    }

    pub fn row(&self, i: usize) -> &[(u32, Rational)] {
        &self.rows[i]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, a)| a * &v[*c as usize])
                    .sum::<Rational>()
            })
            .collect()
    }

    /// Row-based sparse matrix product `self * other`.
    pub fn mul_mat(&self, other: &SparseRationalMatrix) -> SparseRationalMatrix {
        assert_eq!(self.ncols, other.nrows());
        let mut out = SparseRationalMatrix::new(other.ncols());
        for row in &self.rows {
            let mut acc: std::collections::BTreeMap<u32, Rational> = Default::default();
            for (k, a) in row {
                for (c, b) in &other.rows[*k as usize] {
                    let entry = acc.entry(*c).or_insert_with(Rational::zero);
                    *entry += a * b;
                }
            }
            out.push_row(acc.into_iter().filter(|(_, v)| !v.is_zero()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Basis of the right nullspace, exact.
    ///
    /// Denominators are cleared per row, after which elimination stays in
    /// integers. Vectors come out in a deterministic order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let int_rows: Vec<SparseIntRow> = self
            .rows
            .iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let mut out: SparseIntRow = row
                    .iter()
                    .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
                    .collect();
                normalize_content(&mut out);
                out
            })
            .collect();
        integer_nullspace(int_rows, self.ncols)
    }
}

type SparseIntRow = Vec<(u32, BigInt)>;

fn normalize_content(row: &mut SparseIntRow) {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// `pivot_coeff * row - row_coeff * pivot_row`, merged by column.
fn row_combine(
    row: &SparseIntRow,
    row_coeff: &BigInt,
    pivot_row: &SparseIntRow,
    pivot_coeff: &BigInt,
) -> SparseIntRow {
    let mut out = SparseIntRow::with_capacity(row.len() + pivot_row.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot_row.len() {
        let take_row = j >= pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0);
        let take_pivot = i >= row.len() || (j < pivot_row.len() && pivot_row[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, pivot_coeff * &row[i].1));
            i += 1;
        } else if take_pivot {
            out.push((pivot_row[j].0, -(row_coeff * &pivot_row[j].1)));
            j += 1;
        } else {
            let v = pivot_coeff * &row[i].1 - row_coeff * &pivot_row[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Right nullspace of an integer row list via fraction-free elimination
/// with Markowitz pivoting.
fn integer_nullspace(mut rows: Vec<SparseIntRow>, ncols: usize) -> Vec<Vec<Rational>> {
    rows.retain(|r| !r.is_empty());
    // (row index in `eliminated`, pivot column) in elimination order
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut eliminated: Vec<SparseIntRow> = Vec::new();
    let mut pivot_cols: Vec<bool> = vec![false; ncols];

    while !rows.is_empty() {
        let mut col_count = vec![0u32; ncols];
        for row in &rows {
            for (c, _) in row {
                col_count[*c as usize] += 1;
            }
        }
        // Markowitz: minimize (row_nnz - 1)(col_nnz - 1); break ties toward
        // the smallest entry magnitude, then lowest (row, col).
        let mut best: Option<(u64, u64, usize, u32)> = None; // cost, bits, row, col
        for (ri, row) in rows.iter().enumerate() {
            for (c, v) in row {
                let cost =
                    (row.len() as u64 - 1) * (u64::from(col_count[*c as usize]) - 1);
                let bits = v.magnitude().bits();
                let candidate = (cost, bits, ri, *c);
                if best.map_or(true, |b| candidate < b) {
                    best = Some(candidate);
                }
            }
        }
        let (_, _, pivot_idx, pivot_col) = best.expect("nonempty rows have entries");
        let pivot_row = rows.swap_remove(pivot_idx);
        let pivot_val = pivot_row
            .iter()
            .find(|(c, _)| *c == pivot_col)
            .expect("pivot entry")
            .1
            .clone();
        for row in rows.iter_mut() {
            let Some(entry) = row.iter().find(|(c, _)| *c == pivot_col) else {
                continue;
            };
            let coeff = entry.1.clone();
            let mut combined = row_combine(row, &coeff, &pivot_row, &pivot_val);
            normalize_content(&mut combined);
            *row = combined;
        }
        rows.retain(|r| !r.is_empty());
        pivot_cols[pivot_col as usize] = true;
        pivots.push((eliminated.len(), pivot_col));
        eliminated.push(pivot_row);
    }

    let free_cols: Vec<u32> = (0..ncols as u32)
        .filter(|c| !pivot_cols[*c as usize])
        .collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for free in free_cols {
        let mut x = vec![Rational::zero(); ncols];
        x[free as usize] = Rational::one();
        // pivot rows only touch columns that were still unpivoted at their
        // elimination step, so substitution runs in reverse pivot order
        for (row_idx, col) in pivots.iter().rev() {
            let row = &eliminated[*row_idx];
            let mut acc = Rational::zero();
            let mut diag = BigInt::zero();
            for (c, v) in row {
                if c == col {
                    diag = v.clone();
                } else {
                    let xc = &x[*c as usize];
                    if !xc.is_zero() {
                        acc += Rational::from_integer(v.clone()) * xc;
                    }
                }
            }
            x[*col as usize] = -acc / Rational::from_integer(diag);
        }
        basis.push(x);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloQ6;
    use crate::rational::{rat, ratio};

    fn mat(rows: &[&[i64]]) -> SparseRationalMatrix {
        let ncols = rows[0].len();
        let mut m = SparseRationalMatrix::new(ncols);
        for row in rows {
            m.push_row(
                row.iter()
                    .enumerate()
                    .map(|(c, &v)| (c as u32, rat(v))),
            );
        }
        m
    }

    #[test]
    fn dense_solve_rational() {
        // x + 2y = 5, 3x - y = 1  =>  x = 1, y = 2
        let a = vec![vec![rat(1), rat(2)], vec![rat(3), rat(-1)]];
        let b = vec![rat(5), rat(1)];
        assert_eq!(solve_dense(a, b).unwrap(), vec![rat(1), rat(2)]);
    }

    #[test]
    fn dense_solve_cyclo() {
        // t x = 1  =>  x = 1/t = 1 - t
        let a = vec![vec![CycloQ6::tau()]];
        let b = vec![CycloQ6::from_integer(1)];
        assert_eq!(
            solve_dense(a, b).unwrap(),
            vec![CycloQ6::tau().inv().unwrap()]
        );
    }

    #[test]
    fn dense_singular_detected() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        let b = vec![rat(1), rat(2)];
        assert_eq!(solve_dense(a, b), Err(LinalgError::Singular));
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        // rows: (1, 1, -2) and (1, -1, 0); nullspace spanned by (1, 1, 1)
        let m = mat(&[&[1, 1, -2], &[1, -1, 0]]);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        let scaled: Vec<Rational> = v.iter().map(|x| x / &v[0]).collect();
        assert_eq!(scaled, vec![rat(1), rat(1), rat(1)]);
    }

    #[test]
    fn nullspace_respects_rational_entries() {
        // (1/2)x + (1/3)y = 0  =>  y = -(3/2) x
        let mut m = SparseRationalMatrix::new(2);
        m.push_row([(0, ratio(1, 2)), (1, ratio(1, 3))]);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(&v[1] / &v[0], ratio(-3, 2));
    }

    #[test]
    fn nullspace_trivial_when_full_rank() {
        let m = mat(&[&[1, 0], &[1, 1]]);
        assert!(m.nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let m = mat(&[&[0, 0, 0]]);
        assert_eq!(m.nullspace().len(), 3);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        // third row is the sum of the first two: rank 2, nullity 2
        let m = mat(&[
            &[2, -1, 0, 3],
            &[0, 1, 1, -1],
            &[2, 0, 1, 2],
        ]);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 2);
        for v in basis {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sparse_product() {
        let a = mat(&[&[1, 2], &[0, 1]]);
        let b = mat(&[&[1, 0], &[1, 1]]);
        let ab = a.mul_mat(&b);
        assert_eq!(ab.row(0), &[(0, rat(3)), (1, rat(2))]);
        assert_eq!(ab.row(1), &[(0, rat(1)), (1, rat(1))]);
    }
}
