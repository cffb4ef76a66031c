//! Plücker coordinates, second-order Chow forms and their degenerations.

use std::collections::BTreeMap;

use cq_core::{common_monomial, denominator_lcm_and_numerator_gcd, var_set, MPoly, Matrix, Poly1, Rat, Ring};
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::quadrics::{compound_matrix, SymmetricForm};

/// Maximal minors of a basis of a `(k-1)`-plane in `P^n`, indexed by
/// lexicographic k-subsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PluckerVector {
    pub k: usize,
    pub n: usize,
    pub coords: Vec<Rat>,
}

pub fn plucker(b: &Matrix<Rat>) -> Result<PluckerVector> {
    let k = b.cols();
    if b.rows() == 0 || k == 0 || k > b.rows() {
        return Err(GeometryError::DimensionMismatch(format!(
            "basis of shape {}x{}",
            b.rows(),
            k
        )));
    }
    let rank = b.rank();
    if rank != k {
        return Err(GeometryError::RankDeficient { expected: k, found: rank });
    }
    let c = compound_matrix(b, k)?;
    Ok(PluckerVector {
        k,
        n: b.rows() - 1,
        coords: c.entries().to_vec(),
    })
}

/// `pᵗ·∧^kQ·p` for the Plücker vector `p` of the span of `b`.
pub fn chow_eval(q: &SymmetricForm, b: &Matrix<Rat>) -> Result<Rat> {
    if b.rows() != q.ambient() + 1 {
        return Err(GeometryError::DimensionMismatch(format!(
            "basis with {} rows for a form on P^{}",
            b.rows(),
            q.ambient()
        )));
    }
    let p = plucker(b)?;
    let w = q.compound(p.k)?;
    Ok(q_value(w.matrix(), &p.coords))
}

/// Whether the span of `b` is tangent to `q`, i.e. the restriction is singular.
pub fn is_tangent(q: &SymmetricForm, b: &Matrix<Rat>) -> Result<bool> {
    Ok(chow_eval(q, b)?.is_zero())
}

fn q_value(m: &Matrix<Rat>, x: &[Rat]) -> Rat {
    m.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Proportionality {
    /// `∧^kA = μ·∧^kB`.
    pub mu: Rat,
    /// `A = λ·B`, when both forms are invertible and this holds.
    pub lambda: Option<Rat>,
}

/// Returns a witness when the k-th compounds of `a` and `b` agree up to a
/// nonzero scalar.
pub fn minors_proportional(a: &SymmetricForm, b: &SymmetricForm, k: usize) -> Result<Option<Proportionality>> {
    if a.ambient() != b.ambient() {
        return Err(GeometryError::DimensionMismatch(format!(
            "forms on P^{} and P^{}",
            a.ambient(),
            b.ambient()
        )));
    }
    let ca = a.compound(k)?;
    let cb = b.compound(k)?;
    let Some(mu) = scalar_ratio(ca.matrix().entries(), cb.matrix().entries()) else {
        return Ok(None);
    };
    let lambda = if a.is_smooth() && b.is_smooth() {
        scalar_ratio(a.matrix().entries(), b.matrix().entries())
    } else {
        None
    };
    Ok(Some(Proportionality { mu, lambda }))
}

/// The nonzero `c` with `x = c·y`, if any. Two zero vectors give `c = 1`.
fn scalar_ratio(x: &[Rat], y: &[Rat]) -> Option<Rat> {
    let c = match y.iter().position(|v| !v.is_zero()) {
        Some(i) => &x[i] / &y[i],
        None => Rat::one(),
    };
    if c.is_zero() && x.iter().any(|v| !v.is_zero()) {
        return None;
    }
    if c.is_zero() {
        return None;
    }
    x.iter().zip(y).all(|(a, b)| *a == &c * b).then_some(c)
}

/// Coordinates up to a nonzero global scalar, stored in normal form: integer
/// entries with content one and first nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProjectivePoint {
    coords: Vec<Rat>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if coords.iter().all(Rat::is_zero) {
            return Err(GeometryError::Invalid("the zero vector is not a projective point".into()));
        }
        let (lcm, gcd) = denominator_lcm_and_numerator_gcd(&coords);
        let mut scale = Rat::from_bigint(lcm) / Rat::from_bigint(gcd);
        if coords.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            scale = -scale;
        }
        Ok(ProjectivePoint {
            coords: coords.iter().map(|c| c * &scale).collect(),
        })
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

/// Limit at `t = 0` of the k-th Chow form of the family `Q0 + t·Q1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChowLimit {
    pub k: usize,
    /// Power of `t` divided out before evaluating.
    pub valuation: usize,
    /// The limit Gram matrix on `∧^k`, projectively normalized.
    pub matrix: Matrix<Rat>,
}

impl ChowLimit {
    pub fn point(&self) -> ProjectivePoint {
        ProjectivePoint::new(self.matrix.entries().to_vec()).expect("limit is nonzero")
    }

    /// Coefficients of the quadratic form in Plücker coordinates, keyed by
    /// index pairs `i <= j`.
    pub fn quadratic_form_terms(&self) -> BTreeMap<(usize, usize), Rat> {
        quadratic_form_terms(&self.matrix)
    }
}

/// `x ↦ xᵗMx` written as a sum of monomials `x_i x_j`, `i <= j`.
pub fn quadratic_form_terms(m: &Matrix<Rat>) -> BTreeMap<(usize, usize), Rat> {
    let mut out = BTreeMap::new();
    for i in 0..m.rows() {
        for j in i..m.cols() {
            let c = if i == j {
                m.get(i, i).clone()
            } else {
                m.get(i, j) + m.get(j, i)
            };
            if !c.is_zero() {
                out.insert((i, j), c);
            }
        }
    }
    out
}

pub fn chow_limit(q0: &SymmetricForm, q1: &SymmetricForm, k: usize) -> Result<ChowLimit> {
    if q0.ambient() != q1.ambient() {
        return Err(GeometryError::DimensionMismatch(format!(
            "forms on P^{} and P^{}",
            q0.ambient(),
            q1.ambient()
        )));
    }
    let family = Matrix::from_fn(q0.ambient() + 1, q0.ambient() + 1, |i, j| {
        Poly1::linear("t", q0.matrix().get(i, j).clone(), q1.matrix().get(i, j).clone())
    });
    let w = compound_matrix(&family, k)?;
    let valuation = w
        .entries()
        .iter()
        .filter_map(Poly1::valuation)
        .min()
        .ok_or_else(|| GeometryError::Degenerate("compound of the family vanishes identically".into()))?;
    let limit = w.map(|p| p.shift_down(valuation).coeff(0));
    let point = ProjectivePoint::new(limit.entries().to_vec())?;
    let matrix = Matrix::new(limit.rows(), limit.cols(), point.coords)?;
    Ok(ChowLimit { k, valuation, matrix })
}

/// Result of moving one parameter of the flag curve family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagWedge {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    #[serde(serialize_with = "serialize_mpoly_matrix")]
    pub matrix: Matrix<MPoly>,
    /// Whether the projective point is independent of `t_j`.
    pub constant: bool,
}

fn serialize_mpoly_matrix<S: serde::Serializer>(m: &Matrix<MPoly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
    rows.serialize(s)
}

/// Limit of `∧^k(MᵗqM)` as the `q`'s go to zero, where `M` is unipotent with
/// `t_j` at position `(j-1, j)` for each live `j` and
/// `q = diag(1, q1, q1q2, ...)`. The common `q`-monomial is divided out
/// before setting `q = 0`. Variables are `t1..tn, q1..qn`.
pub fn flag_limit_matrix(n: usize, k: usize, live: &[usize]) -> Result<Matrix<MPoly>> {
    if n == 0 || k == 0 || k > n || live.iter().any(|&j| j == 0 || j > n) {
        return Err(GeometryError::OutOfRange(format!("flag family n = {n}, k = {k}, live {live:?}")));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).chain((1..=n).map(|i| format!("q{i}"))).collect();
    let vars = var_set(&names);
    let zero = MPoly::zero(vars.clone());
    let mut m = Matrix::identity_like(n + 1, &zero);
    for &j in live {
        m.set(j - 1, j, MPoly::var(vars.clone(), &format!("t{j}"))?);
    }
    let mut q = Matrix::zeros_like(n + 1, n + 1, &zero);
    let mut diag = zero.one_like();
    for i in 0..=n {
        if i > 0 {
            diag = diag.mul(&MPoly::var(vars.clone(), &format!("q{i}"))?);
        }
        q.set(i, i, diag.clone());
    }
    let g = m.transpose().mul(&q)?.mul(&m)?;
    let w = compound_matrix(&g, k)?;
    let common = common_monomial(2 * n, w.entries()).ok_or_else(|| GeometryError::Degenerate("zero compound".into()))?;
    Ok(w.map(|p| {
        let mut p = p.divide_by_monomial(&common);
        for r in n..2 * n {
            p = p.substitute(r, &Rat::zero());
        }
        p
    }))
}

pub fn flag_wedge(n: usize, k: usize, j: usize) -> Result<FlagWedge> {
    let matrix = flag_limit_matrix(n, k, &[j])?;
    let constant = projectively_constant(matrix.entries(), j - 1);
    Ok(FlagWedge { n, k, j, matrix, constant })
}

/// Whether a vector of polynomials defines a point independent of the given
/// variable: every `v_a ∂v_b − v_b ∂v_a` vanishes.
fn projectively_constant(v: &[MPoly], var: usize) -> bool {
    let Some(pivot) = v.iter().find(|p| !p.is_zero()) else {
        return true;
    };
    let dp = pivot.derivative(var);
    v.iter()
        .all(|p| pivot.mul(&p.derivative(var)).sub(&p.mul(&dp)).is_zero())
}

/// The `n = 3`, `k = 2` flag limit with all three parameters live.
pub fn wedge2_example_matrix() -> Matrix<MPoly> {
    flag_limit_matrix(3, 2, &[1, 2, 3]).expect("valid parameters")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::random_form;

    fn cols(v: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_ints(v)
    }

    #[test]
    fn plucker_examples() {
        let b = cols(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]);
        let p = plucker(&b).unwrap();
        assert_eq!(p.coords, [1, 0, 0, 0, 0, 0].map(Rat::from_int).to_vec());

        let b = cols(&[&[1, 2], &[3, -1], &[0, 4], &[5, 1]]);
        let swapped = cols(&[&[2, 1], &[-1, 3], &[4, 0], &[1, 5]]);
        let p = plucker(&b).unwrap();
        let s = plucker(&swapped).unwrap();
        assert!(p.coords.iter().zip(&s.coords).all(|(a, b)| *a == -b.clone()));

        let g = cols(&[&[2, 1], &[1, 3]]);
        let bg = plucker(&b.mul(&g).unwrap()).unwrap();
        let det = g.det().unwrap();
        assert!(p.coords.iter().zip(&bg.coords).all(|(a, b)| a * &det == *b));

        assert!(plucker(&cols(&[&[1, 2], &[1, 2], &[0, 0]])).is_err());
    }

    #[test]
    fn chow_eval_examples() {
        let e12 = cols(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]);
        assert_eq!(chow_eval(&SymmetricForm::identity(3), &e12).unwrap(), Rat::one());
        assert!(!is_tangent(&SymmetricForm::identity(3), &e12).unwrap());

        let q = SymmetricForm::diagonal(&[1, 1, 1, -1]);
        let b = cols(&[&[1, 0], &[0, 0], &[0, 1], &[0, 1]]);
        assert_eq!(chow_eval(&q, &b).unwrap(), Rat::zero());
        assert!(is_tangent(&q, &b).unwrap());

        // the line x0 = x1, x2 = x3 lies on x0^2 - x1^2 + x2^2 - x3^2
        let q = SymmetricForm::diagonal(&[1, -1, 1, -1]);
        let b = cols(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]);
        assert!(q.restrict(&b).unwrap().matrix().is_zero());
        assert!(is_tangent(&q, &b).unwrap());
    }

    #[test]
    fn proportional_minors() {
        let a = random_form(3, 4, 3).unwrap();
        let a3 = a.scale(&Rat::from_int(3));
        let w = minors_proportional(&a3, &a, 2).unwrap().unwrap();
        assert_eq!(w.mu, Rat::from_int(9));
        assert_eq!(w.lambda, Some(Rat::from_int(3)));

        assert_eq!(
            minors_proportional(&SymmetricForm::identity(3), &SymmetricForm::diagonal(&[1, 1, 1, 2]), 3).unwrap(),
            None
        );
        let w = minors_proportional(&a, &a, 1).unwrap().unwrap();
        assert_eq!(w.mu, Rat::one());
    }

    #[test]
    fn projective_normal_form() {
        let p = ProjectivePoint::new(vec![Rat::zero(), Rat::new(-2, 3), Rat::new(4, 5)]).unwrap();
        assert_eq!(p.coords(), &[Rat::zero(), Rat::from_int(-5), Rat::from_int(6)].map(|c| -c));
        assert!(ProjectivePoint::new(vec![Rat::zero()]).is_err());
    }

    #[test]
    fn limit_of_rank_two_family() {
        // xy + t(3z^2 - zw + 2w^2)
        let q0 = SymmetricForm::new(Matrix::from_fn(4, 4, |i, j| {
            if (i, j) == (0, 1) || (i, j) == (1, 0) { Rat::new(1, 2) } else { Rat::zero() }
        }))
        .unwrap();
        let q1 = SymmetricForm::from_ints(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 6, -1], &[0, 0, -1, 4]])
            .unwrap()
            .scale(&Rat::new(1, 2));
        let lim = chow_limit(&q0, &q1, 2).unwrap();
        let terms = lim.quadratic_form_terms();
        assert_eq!(terms.keys().collect::<Vec<_>>(), vec![&(0, 0)]);
    }

    #[test]
    fn constant_direction_gives_the_compound() {
        let q = random_form(3, 4, 8).unwrap();
        let lim = chow_limit(&q, &q, 2).unwrap();
        assert_eq!(lim.valuation, 0);
        let expect = ProjectivePoint::new(q.compound(2).unwrap().matrix().entries().to_vec()).unwrap();
        assert_eq!(lim.point(), expect);
    }

    #[test]
    fn flag_wedge_examples() {
        assert!(flag_wedge(3, 2, 1).unwrap().constant);
        assert!(flag_wedge(3, 2, 3).unwrap().constant);
        let w = flag_wedge(3, 2, 2).unwrap();
        assert!(!w.constant);
        let t2 = MPoly::var(w.matrix.get(0, 0).vars().clone(), "t2").unwrap();
        assert_eq!(w.matrix.get(0, 1), &t2);
    }

    #[test]
    fn example_matrix_is_outer_product() {
        let m = wedge2_example_matrix();
        let vars = m.get(0, 0).vars().clone();
        let one = MPoly::constant(vars.clone(), Rat::one());
        let zero = MPoly::zero(vars.clone());
        let t1 = MPoly::var(vars.clone(), "t1").unwrap();
        let t2 = MPoly::var(vars, "t2").unwrap();
        let v = [one, t2.clone(), zero.clone(), t1.mul(&t2), zero.clone(), zero];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m.get(i, j), &v[i].mul(&v[j]), "entry ({i},{j})");
            }
        }
        assert_eq!(m.get(1, 1), &t2.pow(2));
    }
}
