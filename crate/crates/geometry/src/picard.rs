//! The Picard lattice of `X_n`, the dual curve lattice, and the intersection
//! data of complete quadric surfaces.
//!
//! Every class is converted through the nef basis `H_1..H_n`. Curves are
//! stored in the dual basis `Fl_1..Fl_n`, so a curve's coordinates are its
//! pairings with the `H_i`.

use std::fmt;
use std::str::FromStr;

use cq_core::{binomial, Matrix, Rat, Solution};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::quadrics::stratum_codim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `H_1, ..., H_n`.
    H,
    /// `H_1, E_1, ..., E_{n-1}`.
    #[serde(rename = "mixed")]
    Mixed,
    /// `E_1, ..., E_n`.
    E,
}

impl Basis {
    pub fn labels(self, n: usize) -> Vec<String> {
        match self {
            Basis::H => (1..=n).map(|i| format!("H{i}")).collect(),
            Basis::E => (1..=n).map(|i| format!("E{i}")).collect(),
            Basis::Mixed => std::iter::once("H1".to_string())
                .chain((1..n).map(|i| format!("E{i}")))
                .collect(),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::H => "H",
            Basis::Mixed => "mixed",
            Basis::E => "E",
        })
    }
}

impl FromStr for Basis {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Basis::H),
            "mixed" => Ok(Basis::Mixed),
            "E" | "e" => Ok(Basis::E),
            other => Err(GeometryError::Invalid(format!("unknown basis {other:?}"))),
        }
    }
}

/// `E_i = 2H_i − H_{i−1} − H_{i+1}` with `H_0 = H_{n+1} = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeRelations {
    pub n: usize,
    /// Row `i` holds `E_{i+1}` in the H basis.
    pub e_in_h: Matrix<Rat>,
}

impl LatticeRelations {
    pub fn new(n: usize) -> Self {
        let e_in_h = Matrix::from_fn(n, n, |i, j| {
            Rat::from_int(if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            })
        });
        LatticeRelations { n, e_in_h }
    }

    /// Columns are the basis elements written in the H basis.
    pub fn basis_matrix(&self, basis: Basis) -> Matrix<Rat> {
        let n = self.n;
        match basis {
            Basis::H => Matrix::identity(n),
            Basis::E => self.e_in_h.transpose(),
            Basis::Mixed => Matrix::from_fn(n, n, |i, j| {
                if j == 0 {
                    Rat::from_int(i64::from(i == 0))
                } else {
                    self.e_in_h.get(j - 1, i).clone()
                }
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorClass {
    pub n: usize,
    pub basis: Basis,
    pub coeffs: Vec<Rat>,
}

impl DivisorClass {
    pub fn new(n: usize, basis: Basis, coeffs: Vec<Rat>) -> Result<Self> {
        if n == 0 || coeffs.len() != n {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} coefficients for Pic(X_{n})",
                coeffs.len()
            )));
        }
        Ok(DivisorClass { n, basis, coeffs })
    }

    pub fn from_ints(n: usize, basis: Basis, coeffs: &[i64]) -> Result<Self> {
        DivisorClass::new(n, basis, coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn h(n: usize, i: usize) -> Self {
        DivisorClass::unit(n, Basis::H, i)
    }

    pub fn e(n: usize, i: usize) -> Self {
        DivisorClass::unit(n, Basis::E, i)
    }

    fn unit(n: usize, basis: Basis, i: usize) -> Self {
        assert!((1..=n).contains(&i), "index {i} out of 1..={n}");
        let coeffs = (1..=n).map(|j| Rat::from_int(i64::from(i == j))).collect();
        DivisorClass { n, basis, coeffs }
    }

    /// Coefficients in the H basis.
    pub fn h_coeffs(&self) -> Vec<Rat> {
        LatticeRelations::new(self.n).basis_matrix(self.basis).mul_vec(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        check_n(self.n, other.n)?;
        let h: Vec<Rat> = self.h_coeffs().iter().zip(other.h_coeffs()).map(|(a, b)| a + &b).collect();
        convert(&DivisorClass::new(self.n, Basis::H, h)?, self.basis)
    }

    pub fn scale(&self, c: &Rat) -> DivisorClass {
        DivisorClass {
            n: self.n,
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Same class, compared across bases.
    pub fn same_class(&self, other: &DivisorClass) -> bool {
        self.n == other.n && self.h_coeffs() == other.h_coeffs()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.basis.labels(self.n);
        let mut wrote = false;
        for (c, l) in self.coeffs.iter().zip(&labels) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (wrote, c.is_negative()) {
                (false, false) => {}
                (false, true) => f.write_str("-")?,
                (true, _) => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{mag}{l}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn check_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(GeometryError::DimensionMismatch(format!("X_{a} vs X_{b}")));
    }
    Ok(())
}

pub fn convert(d: &DivisorClass, target: Basis) -> Result<DivisorClass> {
    let h = d.h_coeffs();
    if target == Basis::H {
        return DivisorClass::new(d.n, Basis::H, h);
    }
    let b = LatticeRelations::new(d.n).basis_matrix(target);
    match b.solve_exact(&h)? {
        Solution::Unique(x) => DivisorClass::new(d.n, target, x),
        _ => unreachable!("basis matrices are invertible"),
    }
}

/// A curve class in the `Fl` basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveClass {
    pub n: usize,
    pub coeffs: Vec<Rat>,
}

impl CurveClass {
    pub fn new(n: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if n == 0 || coeffs.len() != n {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} coefficients for N_1(X_{n})",
                coeffs.len()
            )));
        }
        Ok(CurveClass { n, coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        CurveClass {
            n: coeffs.len(),
            coeffs: coeffs.iter().map(|&c| Rat::from_int(c)).collect(),
        }
    }

    pub fn flag(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j));
        CurveClass::from_ints(&(1..=n).map(|i| i64::from(i == j)).collect::<Vec<_>>())
    }

    /// The curve with prescribed pairings against the elements of `basis`.
    pub fn from_pairings(n: usize, basis: Basis, values: &[Rat]) -> Result<Self> {
        if values.len() != n {
            return Err(GeometryError::DimensionMismatch(format!("{} pairings for X_{n}", values.len())));
        }
        // C·b_j = Σ_i C_i (b_j)_i, so the system matrix is the transposed basis matrix.
        let bt = LatticeRelations::new(n).basis_matrix(basis).transpose();
        match bt.solve_exact(values)? {
            Solution::Unique(x) => CurveClass::new(n, x),
            _ => unreachable!("basis matrices are invertible"),
        }
    }
}

pub fn pair(c: &CurveClass, d: &DivisorClass) -> Result<Rat> {
    check_n(c.n, d.n)?;
    Ok(c.coeffs.iter().zip(d.h_coeffs()).map(|(a, b)| a * &b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Nef,
    Eff,
    Mov,
}

impl FromStr for Cone {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nef" => Ok(Cone::Nef),
            "eff" => Ok(Cone::Eff),
            "mov" => Ok(Cone::Mov),
            other => Err(GeometryError::Invalid(format!("unknown cone {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub interior: bool,
}

impl Membership {
    fn from_values(values: &[Rat]) -> Self {
        Membership {
            member: values.iter().all(|v| !v.is_negative()),
            interior: values.iter().all(Rat::is_positive),
        }
    }
}

pub fn cone_membership(d: &DivisorClass, cone: Cone) -> Result<Membership> {
    Ok(match cone {
        Cone::Nef => Membership::from_values(&d.h_coeffs()),
        Cone::Eff => Membership::from_values(&convert(d, Basis::E)?.coeffs),
        Cone::Mov => {
            if d.n != 3 {
                return Err(GeometryError::Unsupported("the movable cone is only known for n = 3".into()));
            }
            // facets of ⟨H1, H2, H3, P⟩: through (H2,H3), (H1,H2), (H3,P), (H1,P)
            let h = d.h_coeffs();
            let two = Rat::from_int(2);
            let facets = [
                h[0].clone(),
                h[2].clone(),
                &h[0] + &(&two * &h[1]),
                &(&two * &h[1]) + &h[2],
            ];
            Membership::from_values(&facets)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalMethod {
    /// Blowup formula for the iterated blowup of `P^N` along the rank strata.
    Blowup,
    /// Closed formula in the nef basis.
    Nefbasis,
}

impl FromStr for CanonicalMethod {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blowup" => Ok(CanonicalMethod::Blowup),
            "nefbasis" => Ok(CanonicalMethod::Nefbasis),
            other => Err(GeometryError::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// The canonical class of `X_n`: in the mixed basis for the blowup method,
/// in the H basis for the closed formula.
pub fn canonical(n: usize, method: CanonicalMethod) -> Result<DivisorClass> {
    if n < 2 {
        return Err(GeometryError::OutOfRange(format!("canonical class needs n >= 2, got {n}")));
    }
    match method {
        CanonicalMethod::Nefbasis => {
            let coeffs: Vec<i64> = (1..=n).map(|i| if i == 1 || i == n { -2 } else { -1 }).collect();
            DivisorClass::from_ints(n, Basis::H, &coeffs)
        }
        CanonicalMethod::Blowup => {
            // K_{P^N} = -(N+1)H_1, and blowing up a smooth center of
            // codimension Γ adds (Γ - 1) times the exceptional divisor.
            let big_n = binomial(n + 2, 2) - 1;
            let mut coeffs = vec![Rat::from_int(-(big_n as i64 + 1))];
            for i in 1..n {
                coeffs.push(Rat::from_int(stratum_codim(n, i)? as i64 - 1));
            }
            DivisorClass::new(n, Basis::Mixed, coeffs)
        }
    }
}

pub fn is_fano(n: usize) -> Result<bool> {
    let k = canonical(n, CanonicalMethod::Nefbasis)?;
    Ok(k.h_coeffs().iter().all(Rat::is_negative))
}

/// Data for the first intermediate model `X(1)`, obtained by blowing up
/// only the rank one locus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntermediateModel {
    pub nef_generators: Vec<DivisorClass>,
    pub canonical: DivisorClass,
}

pub fn intermediate_x1() -> IntermediateModel {
    IntermediateModel {
        nef_generators: vec![DivisorClass::h(3, 1), DivisorClass::h(3, 2)],
        canonical: DivisorClass::from_ints(3, Basis::Mixed, &[-10, 5, 0]).expect("three coefficients"),
    }
}

/// Solves for the divisor whose pairings with the given curves are the given
/// numbers. The answer is in the mixed basis.
pub fn derive_class_from_pairings(rows: &[(CurveClass, Rat)]) -> Result<DivisorClass> {
    let n = rows.first().ok_or(GeometryError::NonSpanning)?.0.n;
    for (c, _) in rows {
        check_n(c.n, n)?;
    }
    let a = Matrix::from_fn(rows.len(), n, |i, j| rows[i].0.coeffs[j].clone());
    let b: Vec<Rat> = rows.iter().map(|(_, v)| v.clone()).collect();
    match a.solve_exact(&b)? {
        Solution::Unique(h) => convert(&DivisorClass::new(n, Basis::H, h)?, Basis::Mixed),
        Solution::Underdetermined { .. } => Err(GeometryError::NonSpanning),
        Solution::Inconsistent => {
            if a.rank() < n {
                Err(GeometryError::NonSpanning)
            } else {
                Err(GeometryError::Inconsistent)
            }
        }
    }
}

/// The involution of `X_3` induced by `Q ↦ ∧³Q`: reverses the H basis.
pub fn xi(d: &DivisorClass) -> Result<DivisorClass> {
    if d.n != 3 {
        return Err(GeometryError::Unsupported("the involution is implemented for n = 3".into()));
    }
    let mut h = d.h_coeffs();
    h.reverse();
    convert(&DivisorClass::new(3, Basis::H, h)?, d.basis)
}

pub fn xi_curve(c: &CurveClass) -> Result<CurveClass> {
    if c.n != 3 {
        return Err(GeometryError::Unsupported("the involution is implemented for n = 3".into()));
    }
    let mut coeffs = c.coeffs.clone();
    coeffs.reverse();
    CurveClass::new(3, coeffs)
}

/// The divisor `P`, pulled back from the Grassmannian of planes spanned by
/// the ruling conics, in the H basis.
pub fn class_p() -> DivisorClass {
    DivisorClass::from_ints(3, Basis::H, &[4, -2, 4]).expect("three coefficients")
}

/// Test curves on `X_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestCurve {
    /// General pencil of quadrics.
    G,
    /// General pencil of dual quadrics.
    GStar,
    /// Pencil of conics on a fixed double plane.
    C1,
    /// Pencil of dual conics on a fixed double plane.
    C1Star,
    /// Fixed plane times a pencil of planes, fixed marking.
    C2,
    /// Cone over a pencil of conics in a fixed plane.
    C3,
    /// Pencil of line pairs on a double plane, one line fixed.
    C12,
    /// Moving one of two marked points on the singular line of a plane pair.
    L2,
    /// Pencil spanned by two rank two quadrics.
    R2,
}

impl TestCurve {
    pub const TABLE: [TestCurve; 8] = [
        TestCurve::G,
        TestCurve::GStar,
        TestCurve::C1,
        TestCurve::C1Star,
        TestCurve::C2,
        TestCurve::C3,
        TestCurve::C12,
        TestCurve::L2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestCurve::G => "G",
            TestCurve::GStar => "G*",
            TestCurve::C1 => "C1",
            TestCurve::C1Star => "C1*",
            TestCurve::C2 => "C2",
            TestCurve::C3 => "C3",
            TestCurve::C12 => "C1,2",
            TestCurve::L2 => "L2",
            TestCurve::R2 => "R2",
        }
    }

    /// Pairings with `H1, H2, H3`.
    pub fn h_pairings(self) -> [i64; 3] {
        match self {
            TestCurve::G => [1, 2, 3],
            TestCurve::GStar => [3, 2, 1],
            TestCurve::C1 => [0, 1, 2],
            TestCurve::C1Star => [0, 2, 1],
            TestCurve::C2 => [1, 0, 0],
            TestCurve::C3 => [1, 2, 0],
            TestCurve::C12 => [0, 1, 0],
            TestCurve::L2 => [0, 0, 1],
            TestCurve::R2 => [1, 2, 1],
        }
    }

    /// The locus swept out by deformations of the curve.
    pub fn deformation_cover(self) -> &'static str {
        match self {
            TestCurve::G | TestCurve::GStar | TestCurve::R2 => "X3",
            TestCurve::C1 | TestCurve::C1Star => "E1",
            TestCurve::C2 | TestCurve::L2 => "E2",
            TestCurve::C3 => "E3",
            TestCurve::C12 => "E1∩E3",
        }
    }

    pub fn class(self) -> CurveClass {
        CurveClass::from_ints(&self.h_pairings())
    }
}

impl FromStr for TestCurve {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        let all = [
            TestCurve::G,
            TestCurve::GStar,
            TestCurve::C1,
            TestCurve::C1Star,
            TestCurve::C2,
            TestCurve::C3,
            TestCurve::C12,
            TestCurve::L2,
            TestCurve::R2,
        ];
        let norm = s.replace(['_', ' '], "");
        all.into_iter()
            .find(|c| c.name().replace(',', "").eq_ignore_ascii_case(&norm.replace(',', "")))
            .ok_or_else(|| GeometryError::Invalid(format!("unknown curve {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub curve: String,
    pub values: [i64; 6],
    pub cover: String,
}

/// The intersection table of the test curves with `H1, H2, H3, E1, E2, E3`.
/// Only the H columns are inputs; the E columns are computed through the
/// lattice relations.
pub fn table_x3() -> Vec<TableRow> {
    let divisors: Vec<DivisorClass> = (1..=3)
        .map(|i| DivisorClass::h(3, i))
        .chain((1..=3).map(|i| DivisorClass::e(3, i)))
        .collect();
    TestCurve::TABLE
        .iter()
        .map(|&c| {
            let class = c.class();
            let mut values = [0i64; 6];
            for (v, d) in values.iter_mut().zip(&divisors) {
                *v = pair(&class, d).unwrap().to_i64().expect("integral pairing");
            }
            TableRow {
                curve: c.name().to_string(),
                values,
                cover: c.deformation_cover().to_string(),
            }
        })
        .collect()
}
