//! Symmetric forms, complete quadrics, compound matrices and rank strata.

use cq_core::{binomial, k_subsets, Matrix, Rat, Ring};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::random;

/// A quadric in `P^n`, stored as its `(n+1)×(n+1)` symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricForm {
    n: usize,
    matrix: Matrix<Rat>,
}

impl SymmetricForm {
    pub fn new(matrix: Matrix<Rat>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(GeometryError::DimensionMismatch(format!(
                "a form needs a nonempty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_symmetric() {
            return Err(GeometryError::NotSymmetric);
        }
        Ok(SymmetricForm {
            n: matrix.rows() - 1,
            matrix,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        SymmetricForm::new(Matrix::from_ints(rows))
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let d: Vec<Rat> = d.iter().map(|&x| Rat::from_int(x)).collect();
        SymmetricForm::new(Matrix::diagonal(&d)).expect("diagonal is symmetric")
    }

    pub fn identity(n: usize) -> Self {
        SymmetricForm::new(Matrix::identity(n + 1)).expect("identity is symmetric")
    }

    /// The square of a linear form, `l·lᵗ`.
    pub fn square_of(l: &[Rat]) -> Self {
        let c = Matrix::column(l);
        SymmetricForm::new(c.mul(&c.transpose()).unwrap()).expect("outer square is symmetric")
    }

    /// The product of two linear forms, `(a·bᵗ + b·aᵗ)/2`.
    pub fn product_of(a: &[Rat], b: &[Rat]) -> Self {
        assert_eq!(a.len(), b.len());
        let half = Rat::new(1, 2);
        let m = Matrix::from_fn(a.len(), a.len(), |i, j| {
            (&a[i] * &b[j] + &b[i] * &a[j]) * half.clone()
        });
        SymmetricForm::new(m).expect("symmetrized product")
    }

    /// Dimension of the ambient projective space.
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<Rat> {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_smooth(&self) -> bool {
        self.rank() == self.n + 1
    }

    pub fn det(&self) -> Rat {
        self.matrix.det().expect("square")
    }

    pub fn add(&self, other: &SymmetricForm) -> Result<SymmetricForm> {
        SymmetricForm::new(self.matrix.add(&other.matrix)?)
    }

    pub fn scale(&self, c: &Rat) -> SymmetricForm {
        SymmetricForm {
            n: self.n,
            matrix: self.matrix.scale(c),
        }
    }

    /// Value of the quadratic form at a point.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.matrix
            .mul_vec(x)
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The restriction `BᵗQB` to the span of the columns of `b`, a form on
    /// `P^{k-1}`.
    pub fn restrict(&self, b: &Matrix<Rat>) -> Result<SymmetricForm> {
        if b.rows() != self.n + 1 || b.cols() == 0 {
            return Err(GeometryError::DimensionMismatch(format!(
                "basis of shape {}x{} for a form on P^{}",
                b.rows(),
                b.cols(),
                self.n
            )));
        }
        let rank = b.rank();
        if rank != b.cols() {
            return Err(GeometryError::RankDeficient {
                expected: b.cols(),
                found: rank,
            });
        }
        SymmetricForm::new(b.transpose().mul(&self.matrix)?.mul(b)?)
    }

    /// The k-th compound `∧^k Q`, a form on `P^{C(n+1,k)-1}`.
    pub fn compound(&self, k: usize) -> Result<SymmetricForm> {
        if k == 0 || k > self.n + 1 {
            return Err(GeometryError::OutOfRange(format!(
                "compound order {k} for a form on P^{}",
                self.n
            )));
        }
        SymmetricForm::new(compound_matrix(&self.matrix, k)?)
    }

    /// Basis of the singular locus (the kernel), in the canonical reduced
    /// form of [`Matrix::kernel_basis`].
    pub fn singular_locus_basis(&self) -> Matrix<Rat> {
        self.matrix.kernel_basis()
    }
}

/// Matrix of all `k×k` minors. Row `S` and column `T` range over the
/// k-subsets of row and column indices in lexicographic order; the entry is
/// `det(M[S,T])`. Works for rectangular matrices, so the compound of an
/// `(n+1)×k` basis matrix is its Plücker column.
pub fn compound_matrix<R: Ring>(m: &Matrix<R>, k: usize) -> Result<Matrix<R>> {
    if k == 0 || k > m.rows() || k > m.cols() {
        return Err(GeometryError::OutOfRange(format!(
            "compound order {k} for a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let template = m.get(0, 0).clone();
    let rs = k_subsets(m.rows(), k);
    let cs = k_subsets(m.cols(), k);
    let mut data = Vec::with_capacity(rs.len() * cs.len());
    for s in &rs {
        for t in &cs {
            data.push(m.submatrix(s, t).ff_det_or(&template)?);
        }
    }
    Ok(Matrix::new(rs.len(), cs.len(), data)?)
}

/// Codimension `Γ_i` of the locus of rank `<= i` forms in the space of
/// quadrics in `P^n`: `(n+1-i)(n+2-i)/2`.
pub fn stratum_codim(n: usize, i: usize) -> Result<usize> {
    if i == 0 || i > n + 1 {
        return Err(GeometryError::OutOfRange(format!("rank bound {i} on P^{n}")));
    }
    Ok((n + 1 - i) * (n + 2 - i) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub n: usize,
    pub i: usize,
    pub codim: usize,
}

impl StratumDescriptor {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        Ok(StratumDescriptor {
            n,
            i,
            codim: stratum_codim(n, i)?,
        })
    }
}

/// `MᵗDM` with `M` a random invertible matrix of small rationals and `D`
/// diagonal with exactly `rank` nonzero entries. Deterministic in `seed`.
pub fn random_form(n: usize, rank: usize, seed: u64) -> Result<SymmetricForm> {
    random_form_from(&mut random::rng(seed), n, rank)
}

/// As [`random_form`], drawing from an existing stream.
pub fn random_form_from(rng: &mut random::SeededRng, n: usize, rank: usize) -> Result<SymmetricForm> {
    if rank > n + 1 {
        return Err(GeometryError::OutOfRange(format!("rank {rank} on P^{n}")));
    }
    let m = random::invertible_small_rat_matrix(rng, n + 1);
    let d: Vec<Rat> = (0..=n)
        .map(|i| {
            if i < rank {
                random::small_nonzero_int(rng)
            } else {
                Rat::zero()
            }
        })
        .collect();
    let q = m.transpose().mul(&Matrix::diagonal(&d))?.mul(&m)?;
    SymmetricForm::new(q)
}

/// A quadric together with its nested markings: each subsequent form is a
/// quadric on the singular locus of its predecessor, written in the
/// coordinates of [`SymmetricForm::singular_locus_basis`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompleteQuadric {
    flag: Vec<SymmetricForm>,
}

impl CompleteQuadric {
    pub fn new(flag: Vec<SymmetricForm>) -> Result<Self> {
        if flag.is_empty() {
            return Err(GeometryError::Invalid("empty flag".into()));
        }
        for (i, w) in flag.windows(2).enumerate() {
            let rank = w[0].rank();
            if rank == 0 {
                return Err(GeometryError::Invalid(format!("form {i} is zero")));
            }
            let sing_dim = w[0].ambient() + 1 - rank;
            if w[0].ambient() < rank || w[1].ambient() + 1 != sing_dim {
                return Err(GeometryError::DimensionMismatch(format!(
                    "form {} lives on P^{} but the singular locus of form {i} is {}-dimensional",
                    i + 1,
                    w[1].ambient(),
                    sing_dim as isize - 1
                )));
            }
        }
        if flag.last().unwrap().rank() == 0 {
            return Err(GeometryError::Invalid("last form is zero".into()));
        }
        Ok(CompleteQuadric { flag })
    }

    /// Builds the flag from a first form and further quadrics given on the
    /// whole `P^n`; each is restricted to the current singular locus.
    pub fn from_ambient_markings(first: SymmetricForm, markings: &[SymmetricForm]) -> Result<Self> {
        let mut flag = vec![first.clone()];
        let mut basis = Matrix::identity(first.ambient() + 1);
        let mut current = first;
        for mark in markings {
            let kernel = current.singular_locus_basis();
            if kernel.cols() == 0 {
                return Err(GeometryError::Invalid(
                    "marking supplied for a smooth form".into(),
                ));
            }
            basis = basis.mul(&kernel)?;
            let restricted = mark.restrict(&basis)?;
            flag.push(restricted.clone());
            current = restricted;
        }
        CompleteQuadric::new(flag)
    }

    pub fn flag(&self) -> &[SymmetricForm] {
        &self.flag
    }

    pub fn ambient(&self) -> usize {
        self.flag[0].ambient()
    }

    /// Rank of the first form; the quadric lies on `E_rank` when not smooth.
    pub fn rank(&self) -> usize {
        self.flag[0].rank()
    }

    /// True when the last marking leaves at most a point uncovered, so no
    /// further marking is needed.
    pub fn is_complete(&self) -> bool {
        let last = self.flag.last().unwrap();
        last.ambient() + 1 - last.rank() <= 1
    }
}

#[derive(Debug, Deserialize)]
struct FormJson {
    n: usize,
    matrix: Matrix<Rat>,
}

impl<'de> Deserialize<'de> for SymmetricForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FormJson::deserialize(d)?;
        if j.matrix.rows() != j.n + 1 {
            return Err(serde::de::Error::custom(format!(
                "n = {} but the matrix has {} rows",
                j.n,
                j.matrix.rows()
            )));
        }
        SymmetricForm::new(j.matrix).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Deserialize)]
struct CompleteJson {
    flag: Vec<SymmetricForm>,
}

impl<'de> Deserialize<'de> for CompleteQuadric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CompleteJson::deserialize(d)?;
        CompleteQuadric::new(j.flag).map_err(serde::de::Error::custom)
    }
}

/// Number of rows of the k-th compound of a form on `P^n`.
pub fn compound_size(n: usize, k: usize) -> usize {
    binomial(n + 1, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_ints(v)
    }

    #[test]
    fn restrict_examples() {
        let b = col(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]);
        assert_eq!(SymmetricForm::identity(3).restrict(&b).unwrap(), SymmetricForm::identity(1));

        // e1 and e3 + e4 on x0^2 + x1^2 + x2^2 - x3^2
        let q = SymmetricForm::diagonal(&[1, 1, 1, -1]);
        let b = col(&[&[1, 0], &[0, 0], &[0, 1], &[0, 1]]);
        assert_eq!(q.restrict(&b).unwrap(), SymmetricForm::diagonal(&[1, 0]));

        let q = random_form(3, 3, 5).unwrap();
        assert_eq!(q.restrict(&Matrix::identity(4)).unwrap(), q);
    }

    #[test]
    fn restrict_rejects_dependent_columns() {
        let b = col(&[&[1, 2], &[1, 2], &[0, 0], &[0, 0]]);
        assert_eq!(
            SymmetricForm::identity(3).restrict(&b),
            Err(GeometryError::RankDeficient { expected: 2, found: 1 })
        );
    }

    #[test]
    fn compound_examples() {
        let q = random_form(3, 4, 11).unwrap();
        assert_eq!(q.compound(1).unwrap(), q);
        assert_eq!(SymmetricForm::identity(3).compound(2).unwrap(), SymmetricForm::identity(5));
        let top = q.compound(4).unwrap();
        assert_eq!(top.matrix(), &Matrix::from_rows(vec![vec![q.det()]]).unwrap());
        assert!(q.compound(0).is_err());
        assert!(q.compound(5).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SymmetricForm::diagonal(&[1, 0, 0, 0]).rank(), 1);
        assert_eq!(SymmetricForm::diagonal(&[1, 1, 0, 0]).rank(), 2);
        assert!(SymmetricForm::identity(3).is_smooth());
        assert!(!SymmetricForm::diagonal(&[1, 1, 1, 0]).is_smooth());
    }

    #[test]
    fn stratum_codims() {
        assert_eq!(stratum_codim(3, 3).unwrap(), 1);
        assert_eq!(stratum_codim(3, 1).unwrap(), 6);
        assert_eq!(stratum_codim(3, 2).unwrap(), 3);
        assert_eq!(stratum_codim(3, 4).unwrap(), 0);
        assert!(stratum_codim(3, 0).is_err());
        assert!(stratum_codim(3, 5).is_err());
    }

    #[test]
    fn random_form_contract() {
        for n in 1..=4 {
            for r in 0..=n + 1 {
                let q = random_form(n, r, 42 + r as u64).unwrap();
                assert_eq!(q.rank(), r);
                assert_eq!(q.ambient(), n);
            }
        }
        assert!(random_form(3, 4, 1).unwrap().is_smooth());
        assert_eq!(random_form(3, 2, 9).unwrap(), random_form(3, 2, 9).unwrap());
        assert_ne!(random_form(3, 2, 9).unwrap(), random_form(3, 2, 10).unwrap());
        assert!(random_form(3, 5, 1).is_err());
    }

    #[test]
    fn double_line_with_two_marked_points() {
        // (x0^2, x1^2, (a x2 + b x3)^2)
        let sq = |v: [i64; 4]| SymmetricForm::square_of(&v.map(Rat::from_int));
        let (a, b) = (2, -3);
        let cq = CompleteQuadric::from_ambient_markings(
            sq([1, 0, 0, 0]),
            &[sq([0, 1, 0, 0]), sq([0, 0, a, b])],
        )
        .unwrap();
        assert_eq!(cq.rank(), 1);
        let dims: Vec<usize> = cq.flag().iter().map(SymmetricForm::ambient).collect();
        assert_eq!(dims, vec![3, 2, 1]);
        assert!(cq.flag().iter().all(|f| f.rank() == 1));
        assert_eq!(
            cq.flag()[2],
            SymmetricForm::from_ints(&[&[a * a, a * b], &[a * b, b * b]]).unwrap()
        );
        assert!(cq.is_complete());
    }

    #[test]
    fn complete_quadric_validation() {
        let q = SymmetricForm::diagonal(&[1, 1, 0, 0]);
        let wrong = SymmetricForm::identity(2);
        assert!(CompleteQuadric::new(vec![q.clone(), wrong]).is_err());
        let ok = CompleteQuadric::new(vec![q.clone(), SymmetricForm::identity(1)]).unwrap();
        assert!(ok.is_complete());
        let partial = CompleteQuadric::new(vec![q]).unwrap();
        assert!(!partial.is_complete());
        assert!(CompleteQuadric::new(vec![SymmetricForm::diagonal(&[0, 0])]).is_err());
    }

    #[test]
    fn json_schema() {
        let q = SymmetricForm::from_ints(&[&[1, 2], &[2, 0]]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"n":1,"matrix":[["1","2"],["2","0"]]}"#);
        assert_eq!(serde_json::from_str::<SymmetricForm>(&s).unwrap(), q);
        assert!(serde_json::from_str::<SymmetricForm>(r#"{"n":1,"matrix":[["1","2"],["3","0"]]}"#).is_err());
        assert!(serde_json::from_str::<SymmetricForm>(r#"{"n":2,"matrix":[["1","0"],["0","1"]]}"#).is_err());
        let cq = CompleteQuadric::new(vec![SymmetricForm::diagonal(&[1, 0]), SymmetricForm::diagonal(&[1])]).unwrap();
        let s = serde_json::to_string(&cq).unwrap();
        assert!(s.starts_with(r#"{"flag":[{"n":1"#));
        assert_eq!(serde_json::from_str::<CompleteQuadric>(&s).unwrap(), cq);
    }
}
