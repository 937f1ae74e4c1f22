//! Dense matrices and Gaussian elimination.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactalg::tower::NonInvertible;
use crate::scalar::Field;

/// Row-major dense matrix. Entries only need ring operations for products;
/// elimination requires a [`Field`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Columns given as vectors.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Matrix<T> {
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc + a.clone() * b.clone() })
            })
            .collect()
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Matrix::identity(self.rows), |acc, _| &acc * self)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }
}

impl<T: Clone + Zero + One + Sub<Output = T> + Mul<Output = T>> Matrix<T> {
    /// Determinant by cofactor expansion along the first row. Works over any
    /// commutative ring; exponential cost, meant for small matrices.
    pub fn det_expand(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.minor_expand(0, &idx)
    }

    fn minor_expand(&self, row: usize, cols: &[usize]) -> T {
        if cols.is_empty() {
            return T::one();
        }
        let mut acc = T::zero();
        for (k, &j) in cols.iter().enumerate() {
            if self[(row, j)].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let term = self[(row, j)].clone() * self.minor_expand(row + 1, &rest);
            acc = if k % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix { rows: self.rows, cols: rhs.cols, data: vec![T::zero(); self.rows * rhs.cols] };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Mul for Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        &self * &rhs
    }
}

impl<T: Clone + Add<Output = T>> Add for Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().zip(rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Clone + Sub<Output = T>> Sub for Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().zip(rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Clone + Neg<Output = T>> Neg for Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.into_iter().map(|a| -a).collect() }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Infeasible,
    Affine { particular: Vec<F>, kernel: Vec<Vec<F>> },
}

impl<F: Field> Matrix<F> {
    pub fn rref(&self) -> Result<Echelon<F>, NonInvertible> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in r..m.rows {
                let x = &m[(i, c)];
                if x.is_negligible() {
                    continue;
                }
                match x.magnitude() {
                    None => {
                        best = Some((i, 0.0));
                        break;
                    }
                    Some(w) if best.is_none_or(|(_, bw)| w > bw) => best = Some((i, w)),
                    Some(_) => {}
                }
            }
            let Some((p, _)) = best else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].try_inv()?;
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                }
                m[(i, c)] = F::zero();
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon { reduced: m, pivots })
    }

    pub fn rank(&self) -> Result<usize, NonInvertible> {
        Ok(self.rref()?.pivots.len())
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column in
    /// increasing column order.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<F>>, NonInvertible> {
        let e = self.rref()?;
        Ok(kernel_from_echelon(&e, self.cols))
    }

    pub fn solve(&self, rhs: &[F]) -> Result<Solution<F>, NonInvertible> {
        assert_eq!(rhs.len(), self.rows);
        let aug = self.hstack(&Matrix::from_cols(&[rhs.to_vec()], self.rows));
        let e = aug.rref()?;
        if e.pivots.last() == Some(&self.cols) {
            return Ok(Solution::Infeasible);
        }
        let mut particular = vec![F::zero(); self.cols];
        for (i, &p) in e.pivots.iter().enumerate() {
            particular[p] = e.reduced[(i, self.cols)].clone();
        }
        let reduced = Matrix::from_fn(e.reduced.rows, self.cols, |i, j| e.reduced[(i, j)].clone());
        let kernel = kernel_from_echelon(&Echelon { reduced, pivots: e.pivots }, self.cols);
        Ok(Solution::Affine { particular, kernel })
    }

    pub fn inverse(&self) -> Result<Matrix<F>, NonInvertible> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let e = self.hstack(&Matrix::identity(n)).rref()?;
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(NonInvertible::Zero);
        }
        Ok(Matrix::from_fn(n, n, |i, j| e.reduced[(i, n + j)].clone()))
    }

    pub fn det(&self) -> Result<F, NonInvertible> {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_negligible()) else {
                return Ok(F::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.try_inv()?;
            for i in c + 1..n {
                let f = m[(i, c)].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        Ok(det)
    }

    /// Is every column of `other` in the column span of `self`?
    pub fn spans(&self, other: &Matrix<F>) -> Result<bool, NonInvertible> {
        let r = self.rank()?;
        Ok(self.hstack(other).rank()? == r)
    }
}

fn kernel_from_echelon<F: Field>(e: &Echelon<F>, cols: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.reduced[(i, f)].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Matrix::<Rational>::identity(3).rank().unwrap(), 3);
    }

    #[test]
    fn kernel_of_row() {
        let k = qm(&[&[1, 1]]).kernel_basis().unwrap();
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn solve_affine_and_infeasible() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        match a.solve(&[int(1), int(2)]).unwrap() {
            Solution::Affine { particular, kernel } => {
                assert_eq!(a.mul_vec(&particular), vec![int(1), int(2)]);
                assert_eq!(kernel.len(), 2);
                for k in kernel {
                    assert!(a.mul_vec(&k).iter().all(|x| x.is_zero()));
                }
            }
            Solution::Infeasible => panic!(),
        }
        assert_eq!(a.solve(&[int(1), int(3)]).unwrap(), Solution::Infeasible);
    }

    #[test]
    fn inverse_and_det() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let ai = a.inverse().unwrap();
        assert_eq!(&a * &ai, Matrix::identity(3));
        assert_eq!(a.det().unwrap(), int(18));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn float_pivoting() {
        let a = Matrix::from_rows(vec![vec![1e-14, 1.0], vec![1.0, 1.0]]);
        assert_eq!(a.rank().unwrap(), 2);
        let b = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-15]]);
        assert_eq!(b.rank().unwrap(), 1);
    }
}
