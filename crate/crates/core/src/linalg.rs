//! Dense matrices over a [`Field`] and the exact Gaussian elimination the
//! rest of the crate is built on.

use std::fmt;

use crate::arith::Field;

/// A dense row-major matrix. Field operations take the field explicitly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[E]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// An r x c matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<E>]) -> Self {
        let c = cols.len();
        let mut data = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Matrix { rows, cols: c, data }
    }

    pub fn filled(rows: usize, cols: usize, x: E) -> Self {
        Matrix { rows, cols, data: vec![x; rows * cols] }
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

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.data[i * self.cols + j] = x;
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<F: Fn(&E) -> T, T: Clone>(&self, f: F) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Fn(&E) -> Option<T>, T: Clone>(&self, f: F) -> Option<Matrix<T>> {
        let data: Option<Vec<T>> = self.data.iter().map(f).collect();
        Some(Matrix { rows: self.rows, cols: self.cols, data: data? })
    }

    /// Sub-block of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    /// Columns selected by index.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<E>> = idx.iter().map(|&j| self.column(j)).collect();
        Matrix::from_columns(self.rows, &cols)
    }

    /// [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Places `blocks[i][j]` in a block matrix; block sizes must be consistent.
    pub fn from_blocks(blocks: &[Vec<Matrix<E>>]) -> Self {
        let row_heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let col_widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let rows: usize = row_heights.iter().sum();
        let cols: usize = col_widths.iter().sum();
        let mut out = Vec::with_capacity(rows * cols);
        for (bi, block_row) in blocks.iter().enumerate() {
            for i in 0..row_heights[bi] {
                for b in block_row {
                    out.extend_from_slice(b.row(i));
                }
            }
        }
        Matrix { rows, cols, data: out }
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn scalar<F: Field<Elem = E>>(f: &F, n: usize, x: &E) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, x.clone());
        }
        m
    }
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product shape mismatch");
    let mut out = Matrix::zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(x, b.get(k, j));
                let idx = i * b.cols + j;
                out.data[idx] = f.add(&out.data[idx], &t);
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect(),
    }
}

pub fn sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect(),
    }
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(c, x))
}

pub fn is_zero<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

/// Returns `Some(c)` when `a = c * I`.
pub fn scalar_value<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<F::Elem> {
    if !a.is_square() {
        return None;
    }
    if a.rows == 0 {
        return Some(f.one());
    }
    let c = a.get(0, 0).clone();
    for i in 0..a.rows {
        for j in 0..a.cols {
            let expect = if i == j { &c } else { &f.zero() };
            if a.get(i, j) != expect {
                return None;
            }
        }
    }
    Some(c)
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
        }
        let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
        for j in col..m.cols {
            let v = f.mul(m.get(row, j), &inv);
            m.set(row, j, v);
        }
        for r in 0..m.rows {
            if r == row || f.is_zero(m.get(r, col)) {
                continue;
            }
            let factor = m.get(r, col).clone();
            for j in col..m.cols {
                let v = f.sub(m.get(r, j), &f.mul(&factor, m.get(row, j)));
                m.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// A basis of the right kernel {x : a x = 0}. Each basis vector has a 1 in
/// one free coordinate and zeros in the other free coordinates.
pub fn kernel<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, a);
    let mut is_pivot = vec![false; a.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..a.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); a.cols];
        v[free] = f.one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows;
    if n == 0 {
        return Some(a.clone());
    }
    let aug = a.hstack(&Matrix::identity(f, n));
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.block(0, n, n, 2 * n))
}

pub fn is_invertible<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.is_square() && rank(f, a) == a.rows
}

/// Solves `a x = b` for a matrix `x`, if a solution exists.
pub fn solve<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Option<Matrix<F::Elem>> {
    assert_eq!(a.rows, b.rows);
    let aug = a.hstack(b);
    let (r, pivots) = rref(f, &aug);
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut x = Matrix::zeros(f, a.cols, b.cols);
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, r.get(i, a.cols + j).clone());
        }
    }
    Some(x)
}

/// Column-space basis in canonical form: the columns of the returned d x k
/// matrix are the rows of the RREF of `a^T`.
pub fn column_space<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let (r, pivots) = rref(f, &a.transpose());
    r.block(0, pivots.len(), 0, a.rows).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fq, Rationals};
    use crate::arith::rational::rat;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<num_rational::BigRational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn kernel_and_rank() {
        let q = Rationals;
        let a = qm(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(rank(&q, &a), 1);
        let k = kernel(&q, &a);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(mul_vec(&q, &a, &v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let q = Rationals;
        let a = qm(vec![vec![2, 1], vec![1, 1]]);
        let ai = inverse(&q, &a).unwrap();
        assert_eq!(mul(&q, &a, &ai), Matrix::identity(&q, 2));
        assert!(inverse(&q, &qm(vec![vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn solve_over_f3() {
        let f = Fq::prime(3).unwrap();
        let a = Matrix::from_rows(vec![vec![1, 1], vec![0, 2]]);
        let b = Matrix::from_rows(vec![vec![2], vec![1]]);
        let x = solve(&f, &a, &b).unwrap();
        assert_eq!(mul(&f, &a, &x), b);
    }

    #[test]
    fn canonical_column_space() {
        let q = Rationals;
        let a = qm(vec![vec![2, 4], vec![4, 8], vec![0, 0]]);
        let b = qm(vec![vec![1], vec![2], vec![0]]);
        assert_eq!(column_space(&q, &a), b);
    }
}
