//! Dense linear algebra over an exact [`Field`].

use std::fmt;

use crate::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vec<F>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<F>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect();
        Self::from_rows(cols, &conv)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = F::one() / self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - factor.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() / pivot.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Unique solution of `self * x = rhs`, or `None` if the system is singular or inconsistent.
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, rhs.len());
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let pivots = aug.rref();
        if pivots.len() != self.cols || pivots.last() == Some(&self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| aug[(i, self.cols)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Affine map `x -> linear * x + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<F> {
    pub linear: Matrix<F>,
    pub offset: Vec<F>,
}

impl<F: Field> AffineMap<F> {
    pub fn identity(n: usize) -> Self {
        AffineMap { linear: Matrix::identity(n), offset: vec![F::zero(); n] }
    }

    pub fn input_dim(&self) -> usize {
        self.linear.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.linear
            .mul_vec(x)
            .into_iter()
            .zip(&self.offset)
            .map(|(a, b)| a + b.clone())
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap<F>) -> AffineMap<F> {
        let linear = self.linear.mul(&inner.linear);
        let offset = self.apply(&inner.offset);
        AffineMap { linear, offset }
    }

    /// The unique affine map sending `from[i]` to `to[i]`, where `from` holds `d + 1`
    /// affinely independent points of `R^d`.
    pub fn through_points(from: &[Vec<F>], to: &[Vec<F>]) -> Option<AffineMap<F>> {
        let d = from.first()?.len();
        if from.len() != d + 1 || to.len() != d + 1 {
            return None;
        }
        let out = to[0].len();
        let diff = |p: &Vec<F>, o: &Vec<F>| -> Vec<F> {
            p.iter().zip(o).map(|(a, b)| a.clone() - b.clone()).collect()
        };
        // Columns of `base` are from[i] - from[0].
        let base_cols: Vec<Vec<F>> = from[1..].iter().map(|p| diff(p, &from[0])).collect();
        let image_cols: Vec<Vec<F>> = to[1..].iter().map(|p| diff(p, &to[0])).collect();
        let base = Matrix::from_rows(d, &base_cols).transpose();
        let image = Matrix::from_rows(out, &image_cols).transpose();
        let inv = base.inverse()?;
        let linear = image.mul(&inv);
        let shifted = linear.mul_vec(&from[0]);
        let offset = to[0].iter().zip(shifted).map(|(a, b)| a.clone() - b).collect();
        Some(AffineMap { linear, offset })
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn int_determinant(rows: &[Vec<i64>]) -> i64 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::<Rational>::from_i64_rows(3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| *x == q(0)));
    }

    #[test]
    fn determinants_agree() {
        let rows = vec![vec![2, -1, 0, 3], vec![1, 1, 1, 1], vec![0, 4, -2, 1], vec![5, 0, 1, -1]];
        let exact = Matrix::<Rational>::from_i64_rows(4, &rows).determinant();
        assert_eq!(exact, q(int_determinant(&rows)));
        assert_eq!(int_determinant(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(int_determinant(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::<Rational>::from_i64_rows(2, &[vec![2, 1], vec![1, 1]]);
        let x = m.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::<Rational>::from_i64_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert!(singular.solve(&[q(1), q(2)]).is_none());
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn affine_map_through_points() {
        let from = vec![vec![q(0), q(0)], vec![q(1), q(0)], vec![q(0), q(1)]];
        let to = vec![vec![q(1), q(1)], vec![q(0), q(1)], vec![q(1), q(0)]];
        let map = AffineMap::through_points(&from, &to).unwrap();
        for (a, b) in from.iter().zip(&to) {
            assert_eq!(&map.apply(a), b);
        }
        assert_eq!(map.apply(&[q(1), q(1)]), vec![q(0), q(0)]);
    }

    #[test]
    fn from_i64_handles_signs() {
        assert_eq!(<Rational as Field>::from_i64(-13), q(-13));
        assert_eq!(<Rational as Field>::from_i64(0), q(0));
        assert_eq!(<f64 as Field>::from_i64(37), 37.0);
    }
}
