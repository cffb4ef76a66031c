//! Dense matrices over a commutative ring, with fraction-free elimination.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ArithError;
use crate::ring::Ring;
use crate::Rat;

/// A dense row-major matrix. All entries share a ring (and, for multivariate
/// polynomials, a variable set).
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self, ArithError> {
        if data.len() != rows * cols {
            return Err(ArithError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, ArithError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(ArithError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity_like(n: usize, template: &R) -> Self {
        let (zero, one) = (template.zero_like(), template.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zeros_like(rows: usize, cols: usize, template: &R) -> Self {
        let zero = template.zero_like();
        Matrix::from_fn(rows, cols, |_, _| zero.clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn mul(&self, other: &Matrix<R>) -> Result<Matrix<R>, ArithError> {
        if self.cols != other.rows {
            return Err(ArithError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let template = self.data.first().or(other.data.first());
        let Some(template) = template else {
            return Ok(Matrix {
                rows: self.rows,
                cols: other.cols,
                data: Vec::new(),
            });
        };
        let zero = template.zero_like();
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, l| {
                let a = self.get(i, l);
                if a.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(other.get(l, j)))
                }
            })
        }))
    }

    pub fn add(&self, other: &Matrix<R>) -> Result<Matrix<R>, ArithError> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        }))
    }

    pub fn sub(&self, other: &Matrix<R>) -> Result<Matrix<R>, ArithError> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        }))
    }

    pub fn scale(&self, c: &R) -> Matrix<R> {
        self.map(|a| a.mul(c))
    }

    fn check_same_shape(&self, other: &Matrix<R>) -> Result<(), ArithError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ArithError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn require_square(&self) -> Result<(), ArithError> {
        if !self.is_square() {
            return Err(ArithError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Determinant by Bareiss fraction-free elimination.
    ///
    /// Every intermediate division is exact in the entry ring, so polynomial
    /// entries stay polynomial. The empty matrix has determinant one, which
    /// needs a template element and is therefore handled by
    /// [`Matrix::ff_det_or`].
    pub fn ff_det(&self) -> Result<R, ArithError> {
        self.require_square()?;
        let template = self
            .data
            .first()
            .ok_or_else(|| ArithError::Malformed("determinant of an empty matrix".into()))?;
        self.ff_det_or(template)
    }

    /// As [`Matrix::ff_det`], with `template` supplying constants for the
    /// 0×0 case.
    pub fn ff_det_or(&self, template: &R) -> Result<R, ArithError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(template.one_like());
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut negate = false;
        let mut prev = template.one_like();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) else {
                    return Ok(template.zero_like());
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(p, j));
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[idx(i, j)]
                        .mul(&a[idx(k, k)])
                        .sub(&a[idx(i, k)].mul(&a[idx(k, j)]));
                    a[idx(i, j)] = num
                        .div_exact(&prev)
                        .expect("Bareiss step divides exactly in an integral domain");
                }
            }
            prev = a[idx(k, k)].clone();
        }
        let det = a[idx(n - 1, n - 1)].clone();
        Ok(if negate { det.neg() } else { det })
    }

    /// The classical adjoint: `adjugate(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Result<Matrix<R>, ArithError> {
        self.require_square()?;
        let n = self.rows;
        let Some(template) = self.data.first() else {
            return Ok(self.clone());
        };
        let mut out = Matrix::zeros_like(n, n, template);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).ff_det_or(template)?;
                let cof = if (i + j) % 2 == 0 { minor } else { minor.neg() };
                out.set(i, j, cof);
            }
        }
        Ok(out)
    }
}

/// See [`Matrix::ff_det`].
pub fn ff_det<R: Ring>(m: &Matrix<R>) -> Result<R, ArithError> {
    m.ff_det()
}

/// See [`Matrix::adjugate`].
pub fn adjugate<R: Ring>(m: &Matrix<R>) -> Result<Matrix<R>, ArithError> {
    m.adjugate()
}

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rat>),
    /// Consistent, with a `nullity`-dimensional family of solutions.
    Underdetermined { particular: Vec<Rat>, nullity: usize },
    Inconsistent,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon {
    pub reduced: Matrix<Rat>,
    pub pivots: Vec<usize>,
}

impl Matrix<Rat> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular integer rows")
    }

    pub fn identity(n: usize) -> Self {
        Matrix::identity_like(n, &Rat::zero())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::zeros_like(rows, cols, &Rat::zero())
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { Rat::zero() })
    }

    pub fn column(v: &[Rat]) -> Self {
        Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    /// Determinant; the 0×0 determinant is one.
    pub fn det(&self) -> Result<Rat, ArithError> {
        self.ff_det_or(&Rat::zero())
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one column per free variable, normalized so
    /// that the free-variable rows form an identity block. The basis is a
    /// canonical function of the kernel, so equal kernels give equal bases.
    pub fn kernel_basis(&self) -> Matrix<Rat> {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, Rat::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, -reduced.get(row, f));
            }
        }
        k
    }

    pub fn solve_exact(&self, b: &[Rat]) -> Result<Solution, ArithError> {
        if b.len() != self.rows {
            return Err(ArithError::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(row, self.cols).clone();
        }
        let nullity = self.cols - pivots.len();
        Ok(if nullity == 0 {
            Solution::Unique(x)
        } else {
            Solution::Underdetermined {
                particular: x,
                nullity,
            }
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Rank over the rationals.
pub fn mat_rank(m: &Matrix<Rat>) -> usize {
    m.rank()
}

/// See [`Matrix::solve_exact`].
pub fn solve_exact(a: &Matrix<Rat>, b: &[Rat]) -> Result<Solution, ArithError> {
    a.solve_exact(b)
}

impl<R: Ring + fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl<R: Ring + Serialize> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, R: Ring + Deserialize<'de>> Deserialize<'de> for Matrix<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<R>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly1;

    #[test]
    fn determinant_examples() {
        assert_eq!(Matrix::identity(4).ff_det().unwrap(), Rat::one());
        let d = Matrix::diagonal(&[1, 2, 3, 4].map(Rat::from_int));
        assert_eq!(d.ff_det().unwrap(), Rat::from_int(24));
        let non_square = Matrix::zeros(2, 3);
        assert_eq!(
            non_square.ff_det(),
            Err(ArithError::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn polynomial_determinant_stays_polynomial() {
        let p = |c: &[i64]| Poly1::from_ints("t", c);
        let m = Matrix::from_rows(vec![vec![p(&[1, 1]), p(&[])], vec![p(&[]), p(&[1, 2])]]).unwrap();
        assert_eq!(m.ff_det().unwrap(), p(&[1, 3, 2]));
    }

    #[test]
    fn pivoting_changes_sign() {
        let m = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.ff_det().unwrap(), Rat::from_int(-1));
        let m = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert_eq!(m.ff_det().unwrap(), Rat::zero());
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(Matrix::identity(3).adjugate().unwrap(), Matrix::identity(3));
        let d = Matrix::diagonal(&[1, 2, 3, 4].map(Rat::from_int));
        let expected = Matrix::diagonal(&[24, 12, 8, 6].map(Rat::from_int));
        assert_eq!(d.adjugate().unwrap(), expected);
        let one = Matrix::from_ints(&[&[7]]);
        assert_eq!(one.adjugate().unwrap(), Matrix::from_ints(&[&[1]]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&Matrix::zeros(4, 4)), 0);
        let d = Matrix::diagonal(&[1, 1, 0, 0].map(Rat::from_int));
        assert_eq!(mat_rank(&d), 2);
        let v = [1, -2, 3, 5].map(Rat::from_int);
        let outer = Matrix::column(&v).mul(&Matrix::column(&v).transpose()).unwrap();
        assert_eq!(mat_rank(&outer), 1);
    }

    #[test]
    fn solve_examples() {
        let b = [1, 2, 3].map(Rat::from_int);
        assert_eq!(
            solve_exact(&Matrix::identity(3), &b).unwrap(),
            Solution::Unique(b.to_vec())
        );
        let singular = Matrix::from_ints(&[&[1, 1], &[2, 2]]);
        let rhs = [1, 3].map(Rat::from_int);
        assert_eq!(singular.solve_exact(&rhs).unwrap(), Solution::Inconsistent);
        let rhs = [1, 2].map(Rat::from_int);
        assert!(matches!(
            singular.solve_exact(&rhs).unwrap(),
            Solution::Underdetermined { nullity: 1, .. }
        ));
    }

    #[test]
    fn kernel_basis_is_reduced() {
        let q = Matrix::diagonal(&[1, 0, 0, 0].map(Rat::from_int));
        let k = q.kernel_basis();
        assert_eq!(k.rows(), 4);
        assert_eq!(k.cols(), 3);
        assert_eq!(k.submatrix(&[1, 2, 3], &[0, 1, 2]), Matrix::identity(3));
        assert!(q.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn json_shape() {
        let m = Matrix::from_rows(vec![vec![Rat::new(1, 2), Rat::from_int(0)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1/2","0"]]"#);
        let back: Matrix<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Matrix<Rat>>(r#"[["1"],["1","2"]]"#).is_err());
    }
}
