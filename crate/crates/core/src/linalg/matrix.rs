//! Dense rational matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Row count above which products and eliminations fan out over rayon.
const PAR_THRESHOLD: usize = 48;

/// Dense row-major matrix of [`Rational`]s.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::one(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadVector {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(RMatrix { rows, cols, data })
    }

    /// Builds a matrix from integer rows; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Rational::from_integer(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        RMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Rational::zero() })
    }

    /// Column vector with the given entries.
    pub fn column_vector(entries: Vec<Rational>) -> Self {
        RMatrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    /// Standard basis column vector `e_index` of length `n`.
    pub fn unit_vector(n: usize, index: usize) -> Self {
        let mut v = Self::zeros(n, 1);
        v.data[index] = Rational::one();
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RMatrix {
        Self::column_vector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn columns(&self) -> Vec<RMatrix> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Horizontal concatenation of column blocks sharing a row count.
    pub fn hstack(blocks: &[&RMatrix]) -> Result<RMatrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut cols = 0;
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch {
                    op: "hstack",
                    left_rows: rows,
                    left_cols: cols,
                    right_rows: b.rows,
                    right_cols: b.cols,
                });
            }
            cols += b.cols;
        }
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: &Rational) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    fn zip_with(&self, other: &RMatrix, op: &'static str, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<RMatrix> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, op));
        }
        Ok(RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn mismatch(&self, other: &RMatrix, op: &'static str) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn try_add(&self, other: &RMatrix) -> Result<RMatrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, other: &RMatrix) -> Result<RMatrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, other: &RMatrix) -> Result<RMatrix> {
        self.zip_with(other, "hadamard", |a, b| a * b)
    }

    /// Sum of the entrywise product, i.e. `trace(self^t · other)`.
    pub fn frobenius_dot(&self, other: &RMatrix) -> Result<Rational> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, "frobenius_dot"));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Exact matrix product.
    pub fn try_mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(self.mismatch(other, "mat_mul"));
        }
        if let Some(m) = lifted_product(self, other) {
            return Ok(m);
        }
        Ok(generic_product(self, other))
    }

    /// Integer power of a square matrix (negative exponents invert).
    pub fn pow(&self, exp: i32) -> Result<RMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// Kronecker product; row `(i, k)` of the result is `i * b.rows + k`.
    pub fn kron(&self, b: &RMatrix) -> RMatrix {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut data = vec![Rational::zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let x = b.get(k, l);
                        if !x.is_zero() {
                            data[(i * b.rows + k) * cols + j * b.cols + l] = a * x;
                        }
                    }
                }
            }
        }
        RMatrix { rows, cols, data }
    }

    /// `self ⊗ self ⊗ ... ⊗ self` with `power` factors (`power = 0` gives `[1]`).
    pub fn kron_power(&self, power: u32) -> RMatrix {
        let mut acc = Self::identity(1);
        for _ in 0..power {
            acc = acc.kron(self);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_row_vecs();
        row_reduce(&mut rows, self.cols).len()
    }

    /// Exact inverse by Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<RMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = row_reduce_limited(&mut rows, 2 * n, n);
        if pivots.len() < n {
            return Err(Error::Singular {
                rank: pivots.len(),
                size: n,
            });
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(RMatrix { rows: n, cols: n, data })
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut rows = self.to_row_vecs();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det *= &pivot;
            let inv = pivot.recip();
            let (head, tail) = rows.split_at_mut(col + 1);
            let prow = &head[col];
            for row in tail.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let f = &row[col] * &inv;
                for k in col..n {
                    if !prow[k].is_zero() {
                        row[k] -= &f * &prow[k];
                    }
                }
            }
        }
        Ok(det)
    }

    pub(crate) fn to_row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `self · v` for a slice of length `cols`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

fn lcm_checked(a: i64, b: i64) -> Option<i64> {
    use num_integer::Integer;
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// Common-denominator lift: `m = numerators / denominator` with integer numerators.
fn lift(m: &RMatrix) -> Option<(Vec<i64>, i64)> {
    let mut den = 1i64;
    for x in &m.data {
        let (_, d) = x.small_parts()?;
        if d != 1 {
            den = lcm_checked(den, d)?;
        }
    }
    let nums = m
        .data
        .iter()
        .map(|x| {
            let (n, d) = x.small_parts()?;
            n.checked_mul(den / d)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((nums, den))
}

/// Integer-lifted product; `None` when any intermediate leaves i128.
fn lifted_product(a: &RMatrix, b: &RMatrix) -> Option<RMatrix> {
    let (an, ad) = lift(a)?;
    let (bn, bd) = lift(b)?;
    let den = ad as i128 * bd as i128;
    let (n, inner, m) = (a.rows, a.cols, b.cols);
    let row = |i: usize| -> Option<Vec<Rational>> {
        let mut acc = vec![0i128; m];
        for k in 0..inner {
            let x = an[i * inner + k] as i128;
            if x == 0 {
                continue;
            }
            let brow = &bn[k * m..(k + 1) * m];
            for (slot, &y) in acc.iter_mut().zip(brow) {
                if y != 0 {
                    *slot = slot.checked_add(x * y as i128)?;
                }
            }
        }
        Some(acc.into_iter().map(|v| Rational::from_i128_ratio(v, den)).collect())
    };
    let rows: Option<Vec<Vec<Rational>>> = if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().map(row).collect()
    } else {
        (0..n).map(row).collect()
    };
    Some(RMatrix {
        rows: n,
        cols: m,
        data: rows?.into_iter().flatten().collect(),
    })
}

fn generic_product(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let (n, inner, m) = (a.rows, a.cols, b.cols);
    let nonzero: Vec<Vec<usize>> = (0..inner)
        .map(|k| (0..m).filter(|&j| !b.get(k, j).is_zero()).collect())
        .collect();
    let row = |i: usize| -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); m];
        for k in 0..inner {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for &j in &nonzero[k] {
                acc[j] += x * b.get(k, j);
            }
        }
        acc
    };
    let rows: Vec<Vec<Rational>> = if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().map(row).collect()
    } else {
        (0..n).map(row).collect()
    };
    RMatrix {
        rows: n,
        cols: m,
        data: rows.into_iter().flatten().collect(),
    }
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place and returns the pivot columns. Rows past the rank end up zero.
pub(crate) fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    row_reduce_limited(rows, ncols, ncols)
}

/// As [`row_reduce`] but only searches for pivots in the first `pivot_cols` columns.
pub(crate) fn row_reduce_limited(rows: &mut [Vec<Rational>], ncols: usize, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].height())
        else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][col].recip();
        if !inv.is_one() {
            for x in rows[r][col..ncols].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        let support: Vec<usize> = (col..ncols).filter(|&k| !pivot_row[k].is_zero()).collect();
        let eliminate = |(i, row): (usize, &mut Vec<Rational>)| {
            if i == r || row[col].is_zero() {
                return;
            }
            let f = row[col].clone();
            for &k in &support {
                row[k] -= &f * &pivot_row[k];
            }
        };
        if rows.len() >= PAR_THRESHOLD {
            rows.par_iter_mut().enumerate().for_each(eliminate);
        } else {
            rows.iter_mut().enumerate().for_each(eliminate);
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &RMatrix {
    type Output = RMatrix;
    fn add(self, rhs: &RMatrix) -> RMatrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &RMatrix {
    type Output = RMatrix;
    fn sub(self, rhs: &RMatrix) -> RMatrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &RMatrix {
    type Output = RMatrix;
    fn mul(self, rhs: &RMatrix) -> RMatrix {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &RMatrix {
    type Output = RMatrix;
    fn neg(self) -> RMatrix {
        self.scale(&Rational::from_integer(-1))
    }
}

/// Exact product `a · b`.
pub fn mat_mul(a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
    a.try_mul(b)
}

/// Exact inverse of a square matrix.
pub fn mat_inverse(a: &RMatrix) -> Result<RMatrix> {
    a.inverse()
}

/// Kronecker product.
pub fn kron(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a.kron(b)
}
