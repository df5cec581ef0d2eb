//! Dense matrices over exact rationals with row and column labels.
//!
//! Elimination always selects the first non-zero entry in a column as the
//! pivot, so every derived quantity (rank, reduced form, nullspace basis,
//! inverse) is deterministic for a given input.

use crate::rational::Rational;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            row_labels: (0..rows).map(|i| format!("r{i}")).collect(),
            col_labels: (0..cols).map(|j| format!("c{j}")).collect(),
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::zeros(r, c);
        m.data = rows.into_iter().flatten().collect();
        m
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        assert_eq!(row_labels.len(), self.rows);
        assert_eq!(col_labels.len(), self.cols);
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = other.col_labels.clone();
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Scales every entry of column `j` by `factor`.
    pub fn scale_column(&mut self, j: usize, factor: &Rational) {
        for i in 0..self.rows {
            let v = self.at(i, j).clone() * factor;
            *self.at_mut(i, j) = v;
        }
    }

    /// Row-reduced echelon form together with the pivot column indices.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let tmp = m.at(pr, j).clone();
                    *m.at_mut(pr, j) = m.at(r, j).clone();
                    *m.at_mut(r, j) = tmp;
                }
            }
            let pivot = m.at(r, c).clone();
            for j in 0..m.cols {
                let v = m.at(r, j).clone() / &pivot;
                *m.at_mut(r, j) = v;
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j).clone() - &factor * m.at(r, j);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column. Each basis
    /// vector has a 1 in its free coordinate, so the set is independent.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rational::zero(); self.cols];
            vec[free] = Rational::one();
            for (col, maybe_row) in pivot_set.iter().enumerate() {
                if let Some(row) = maybe_row {
                    vec[col] = -r.at(*row, free).clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Rational::zero();
            };
            if pr != c {
                for j in 0..n {
                    let tmp = m.at(pr, j).clone();
                    *m.at_mut(pr, j) = m.at(c, j).clone();
                    *m.at_mut(c, j) = tmp;
                }
                det = -det;
            }
            let pivot = m.at(c, c).clone();
            det *= &pivot;
            for i in c + 1..n {
                if !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone() / &pivot;
                    for j in c..n {
                        let v = m.at(i, j).clone() - &factor * m.at(c, j);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = RationalMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = r.at(i, n + j).clone();
            }
        }
        inv.row_labels = self.col_labels.clone();
        inv.col_labels = self.row_labels.clone();
        Some(inv)
    }

    /// Solves `A x = b` for square invertible `A`; `None` when singular.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, self.cols, "solve requires a square matrix");
        assert_eq!(self.rows, b.len(), "right-hand side dimension mismatch");
        let n = self.rows;
        let mut aug = RationalMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n) = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some((0..n).map(|i| r.at(i, n).clone()).collect())
    }

    /// Submatrix on the given row and column index sets, preserving labels.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(rows.len(), cols.len());
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                *out.at_mut(i, j) = self.at(ri, cj).clone();
            }
        }
        out.row_labels = rows.iter().map(|&i| self.row_labels[i].clone()).collect();
        out.col_labels = cols.iter().map(|&j| self.col_labels[j].clone()).collect();
        out
    }

    /// True when every entry is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// True when every entry is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.data.iter().all(Signed::is_positive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn rank_and_rref() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.at(0, 0), &int(1));
        assert_eq!(r.at(2, 0), &int(0));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(num::Zero::is_zero));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(2).with_labels(inv.col_labels.clone(), inv.col_labels.clone()));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), int(0));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn solve_exact() {
        let a = m(&[&[2, 0], &[1, 3]]);
        let x = a.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
    }
}
