//! Intersection numbers as degeneration counts along explicit one-parameter
//! families of quadrics.

use std::fmt;

use cq_core::{Matrix, Poly1, Rat, RootCount};
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::picard::{pair, DivisorClass, TestCurve};
use crate::quadrics::{compound_matrix, random_form_from, SymmetricForm};
use crate::random::{self, SeededRng};

/// Draws per count before giving up on a squarefree sample.
pub const MAX_RETRIES: u64 = 32;

/// The line of forms `s·Q0 + t·Q1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pencil {
    q0: SymmetricForm,
    q1: SymmetricForm,
}

impl Pencil {
    pub fn new(q0: SymmetricForm, q1: SymmetricForm) -> Result<Self> {
        if q0.ambient() != q1.ambient() {
            return Err(GeometryError::DimensionMismatch(format!(
                "forms on P^{} and P^{}",
                q0.ambient(),
                q1.ambient()
            )));
        }
        let stacked = Matrix::from_rows(vec![
            q0.matrix().entries().to_vec(),
            q1.matrix().entries().to_vec(),
        ])?;
        if stacked.rank() < 2 {
            return Err(GeometryError::Proportional);
        }
        Ok(Pencil { q0, q1 })
    }

    pub fn q0(&self) -> &SymmetricForm {
        &self.q0
    }

    pub fn q1(&self) -> &SymmetricForm {
        &self.q1
    }

    pub fn ambient(&self) -> usize {
        self.q0.ambient()
    }

    /// `Q0 + t·Q1` with polynomial entries.
    pub fn affine_matrix(&self) -> Matrix<Poly1> {
        let m = self.ambient() + 1;
        Matrix::from_fn(m, m, |i, j| {
            Poly1::linear("t", self.q0.matrix().get(i, j).clone(), self.q1.matrix().get(i, j).clone())
        })
    }

    pub fn restrict(&self, b: &Matrix<Rat>) -> Result<Pencil> {
        Pencil::new(self.q0.restrict(b)?, self.q1.restrict(b)?)
    }

    /// The restricted family. Unlike [`Pencil::restrict`] this allows the
    /// two restrictions to be proportional, as they always are on a point.
    fn restrict_family(&self, b: &Matrix<Rat>) -> Result<Pencil> {
        Ok(Pencil {
            q0: self.q0.restrict(b)?,
            q1: self.q1.restrict(b)?,
        })
    }
}

/// A binary form `Σ c_i s^{d-i} t^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<Rat>,
}

impl BinaryForm {
    /// Homogenizes `f(t)` to degree `d`.
    pub fn from_affine(f: &Poly1, degree: usize) -> Self {
        let coeffs = (0..=degree).map(|i| f.coeff(i)).collect();
        BinaryForm { degree, coeffs }
    }

    pub fn affine(&self) -> Poly1 {
        Poly1::new("t", self.coeffs.clone())
    }

    /// Multiplicity of the root `s = 0`.
    pub fn multiplicity_at_infinity(&self) -> usize {
        let deg = self.affine().degree().unwrap_or(0);
        self.degree - deg
    }

    pub fn root_count(&self) -> Result<RootCount> {
        let f = self.affine();
        let affine = f.distinct_root_count()?;
        let inf = self.multiplicity_at_infinity();
        Ok(RootCount {
            degree: self.degree,
            distinct: affine.distinct + usize::from(inf > 0),
        })
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, b) => {
                    let part = |v: &str, e: usize| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        e => format!("{v}^{e}"),
                    };
                    format!("{}{}", part("s", a), part("t", b))
                }
            };
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            if !mag.is_one() || mono.is_empty() {
                write!(f, "{mag}")?;
            }
            f.write_str(&mono)?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `det(s·Q0 + t·Q1)`.
pub fn pencil_det_form(p: &Pencil) -> Result<BinaryForm> {
    let f = p.affine_matrix().ff_det()?;
    if f.is_zero() {
        return Err(GeometryError::Degenerate("every member of the pencil is singular".into()));
    }
    Ok(BinaryForm::from_affine(&f, p.ambient() + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegenerationCount {
    pub total: usize,
    pub distinct: usize,
}

impl DegenerationCount {
    pub fn is_reduced(&self) -> bool {
        self.total == self.distinct
    }
}

impl From<RootCount> for DegenerationCount {
    fn from(r: RootCount) -> Self {
        DegenerationCount {
            total: r.degree,
            distinct: r.distinct,
        }
    }
}

pub fn count_degenerations(p: &Pencil) -> Result<DegenerationCount> {
    Ok(pencil_det_form(p)?.root_count()?.into())
}

/// Members of the pencil tangent to the span of `b`.
pub fn count_tangencies(p: &Pencil, b: &Matrix<Rat>) -> Result<DegenerationCount> {
    count_degenerations(&p.restrict_family(b)?)
}

/// Parameter values where a matrix of polynomials has rank at most `r`:
/// the roots of the gcd of its `(r+1)`-minors.
pub fn rank_drop_count(m: &Matrix<Poly1>, r: usize) -> Result<DegenerationCount> {
    let minors = compound_matrix(m, r + 1)?;
    let g = minors
        .entries()
        .iter()
        .fold(Poly1::zero("t"), |acc, p| acc.gcd(p));
    if g.is_zero() {
        return Err(GeometryError::Degenerate(format!("rank is at most {r} identically")));
    }
    Ok(g.distinct_root_count()?.into())
}

/// Runs `draw` on fresh substreams until it yields a reduced count.
fn generic_count(
    seed: u64,
    tag: u64,
    mut draw: impl FnMut(&mut SeededRng) -> Result<DegenerationCount>,
) -> Result<DegenerationCount> {
    let mut last = None;
    for attempt in 0..MAX_RETRIES {
        let mut rng = random::substream(seed, tag * MAX_RETRIES + attempt);
        match draw(&mut rng) {
            Ok(c) if c.is_reduced() => return Ok(c),
            other => last = Some(other),
        }
    }
    last.expect("at least one attempt")
}

fn smooth_form(rng: &mut SeededRng, n: usize) -> Result<SymmetricForm> {
    random_form_from(rng, n, n + 1)
}

fn random_symmetric(rng: &mut SeededRng, n: usize) -> Result<SymmetricForm> {
    SymmetricForm::new(random::symmetric_int_matrix(rng, n + 1, 4))
}

fn random_subspace(rng: &mut SeededRng, n: usize, k: usize) -> Matrix<Rat> {
    random::full_rank_int_matrix(rng, n + 1, k, 3)
}

fn random_vector(rng: &mut SeededRng, len: usize) -> Vec<Rat> {
    loop {
        let v = random::int_matrix(rng, len, 1, 3).entries().to_vec();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Degenerations of a general pencil of marking quadrics on the singular
/// locus of a rank `k` quadric in `P^n`.
pub fn bk_count(n: usize, k: usize, seed: u64) -> Result<DegenerationCount> {
    if k == 0 || k >= n {
        return Err(GeometryError::OutOfRange(format!("k = {k} for n = {n}")));
    }
    generic_count(seed, 0, |rng| {
        let first = random_form_from(rng, n, k)?;
        let kernel = first.singular_locus_basis();
        let marks = Pencil::new(random_symmetric(rng, n)?, random_symmetric(rng, n)?)?;
        count_degenerations(&marks.restrict(&kernel)?)
    })
}

pub fn bk_number(n: usize, k: usize, seed: u64) -> Result<usize> {
    Ok(bk_count(n, k, seed)?.total)
}

/// Points of a subspace lying on the plane spanned by `k`, in the
/// coordinates of `k`.
fn intersect_in_coords(k: &Matrix<Rat>, b: &Matrix<Rat>) -> Result<Matrix<Rat>> {
    let joined = Matrix::from_fn(k.rows(), k.cols() + b.cols(), |i, j| {
        if j < k.cols() {
            k.get(i, j).clone()
        } else {
            -b.get(i, j - k.cols())
        }
    });
    let ker = joined.kernel_basis();
    let rows: Vec<usize> = (0..k.cols()).collect();
    let cols: Vec<usize> = (0..ker.cols()).collect();
    let x = ker.submatrix(&rows, &cols);
    if ker.cols() == 0 || x.rank() != ker.cols() {
        return Err(GeometryError::Degenerate("subspaces not in general position".into()));
    }
    Ok(x)
}

fn adjugate_pencil(a: &Pencil) -> Result<Matrix<Poly1>> {
    Ok(a.affine_matrix().adjugate()?)
}

/// A pencil of forms whose second member is nonsingular, so no member
/// degenerates at `t = ∞`.
fn affine_pencil(rng: &mut SeededRng, n: usize) -> Result<Pencil> {
    Pencil::new(random_symmetric(rng, n)?, smooth_form(rng, n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableEntry {
    GH1,
    GH2,
    GH3,
    GE3,
    C1H2,
    C1H3,
    C1E3,
    C1StarE2,
    C1StarH3,
    C3E2,
    L2H3,
    C2H1,
    GStarE1,
}

impl TableEntry {
    pub const ALL: [TableEntry; 13] = [
        TableEntry::GH1,
        TableEntry::GH2,
        TableEntry::GH3,
        TableEntry::GE3,
        TableEntry::C1H2,
        TableEntry::C1H3,
        TableEntry::C1E3,
        TableEntry::C1StarE2,
        TableEntry::C1StarH3,
        TableEntry::C3E2,
        TableEntry::L2H3,
        TableEntry::C2H1,
        TableEntry::GStarE1,
    ];

    pub fn curve(self) -> TestCurve {
        use TableEntry::*;
        match self {
            GH1 | GH2 | GH3 | GE3 => TestCurve::G,
            C1H2 | C1H3 | C1E3 => TestCurve::C1,
            C1StarE2 | C1StarH3 => TestCurve::C1Star,
            C3E2 => TestCurve::C3,
            L2H3 => TestCurve::L2,
            C2H1 => TestCurve::C2,
            GStarE1 => TestCurve::GStar,
        }
    }

    /// `(is_h, index)`.
    fn divisor_index(self) -> (bool, usize) {
        use TableEntry::*;
        match self {
            GH1 | C2H1 => (true, 1),
            GH2 | C1H2 => (true, 2),
            GH3 | C1H3 | C1StarH3 | L2H3 => (true, 3),
            GE3 | C1E3 => (false, 3),
            C1StarE2 | C3E2 => (false, 2),
            GStarE1 => (false, 1),
        }
    }

    pub fn divisor(self) -> DivisorClass {
        match self.divisor_index() {
            (true, i) => DivisorClass::h(3, i),
            (false, i) => DivisorClass::e(3, i),
        }
    }

    pub fn divisor_name(self) -> String {
        match self.divisor_index() {
            (true, i) => format!("H{i}"),
            (false, i) => format!("E{i}"),
        }
    }

    pub fn name(self) -> String {
        format!("{}.{}", self.curve().name(), self.divisor_name())
    }

    pub fn lattice_value(self) -> i64 {
        pair(&self.curve().class(), &self.divisor())
            .expect("same n")
            .to_i64()
            .expect("integral pairing")
    }

    /// Counts the entry on a family drawn from `seed`.
    pub fn count(self, seed: u64) -> Result<DegenerationCount> {
        use TableEntry::*;
        let tag = self as u64 + 1;
        generic_count(seed, tag, |rng| match self {
            GH1 | GH2 | GH3 => {
                let k = self.divisor_index().1;
                let g = Pencil::new(smooth_form(rng, 3)?, smooth_form(rng, 3)?)?;
                count_tangencies(&g, &random_subspace(rng, 3, k))
            }
            GE3 => count_degenerations(&Pencil::new(smooth_form(rng, 3)?, smooth_form(rng, 3)?)?),
            C1H2 | C1H3 | C1E3 => {
                // double plane with a pencil of marking conics
                let plane = SymmetricForm::square_of(&random_vector(rng, 4));
                let kernel = plane.singular_locus_basis();
                let conics = Pencil::new(random_symmetric(rng, 3)?, random_symmetric(rng, 3)?)?.restrict(&kernel)?;
                if self == C1E3 {
                    return count_degenerations(&conics);
                }
                let k = self.divisor_index().1;
                let meet = intersect_in_coords(&kernel, &random_subspace(rng, 3, k))?;
                count_tangencies(&conics, &meet)
            }
            C1StarE2 => {
                let duals = affine_pencil(rng, 2)?;
                rank_drop_count(&adjugate_pencil(&duals)?, 1)
            }
            C1StarH3 => {
                // a conic on the plane is tangent to the trace of a fixed
                // plane when that line lies on the dual conic
                let plane = SymmetricForm::square_of(&random_vector(rng, 4));
                let kernel = plane.singular_locus_basis();
                let duals = affine_pencil(rng, 2)?;
                let normal = random_vector(rng, 4);
                let u = kernel.transpose().mul_vec(&normal);
                count_tangencies(&duals, &Matrix::column(&u))
            }
            C3E2 => {
                // cone over a pencil of conics
                let conics = affine_pencil(rng, 2)?;
                let g = random::invertible_small_rat_matrix(rng, 4);
                let cone = conics.affine_matrix();
                let zero = Poly1::zero("t");
                let embedded = Matrix::from_fn(4, 4, |i, j| {
                    if i < 3 && j < 3 {
                        cone.get(i, j).clone()
                    } else {
                        zero.clone()
                    }
                });
                let gp = g.map(|x| Poly1::constant("t", x.clone()));
                let q = gp.transpose().mul(&embedded)?.mul(&gp)?;
                rank_drop_count(&q, 2)
            }
            L2H3 => {
                // plane pair with one marked point fixed on the singular line
                let pair_form = SymmetricForm::product_of(&random_vector(rng, 4), &random_vector(rng, 4));
                let line = pair_form.singular_locus_basis();
                if line.cols() != 2 {
                    return Err(GeometryError::Degenerate("planes coincide".into()));
                }
                let a = random_vector(rng, 2);
                let marks = Pencil::new(
                    SymmetricForm::product_of(&a, &random_vector(rng, 2)),
                    SymmetricForm::product_of(&a, &random_vector(rng, 2)),
                )?;
                let meet = intersect_in_coords(&line, &random_subspace(rng, 3, 3))?;
                count_tangencies(&marks, &meet)
            }
            C2H1 => {
                let w0 = random_vector(rng, 4);
                let p = Pencil::new(
                    SymmetricForm::product_of(&w0, &random_vector(rng, 4)),
                    SymmetricForm::product_of(&w0, &random_vector(rng, 4)),
                )?;
                count_tangencies(&p, &random_subspace(rng, 3, 1))
            }
            GStarE1 => {
                let duals = affine_pencil(rng, 3)?;
                rank_drop_count(&adjugate_pencil(&duals)?, 1)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectCount {
    pub entry: String,
    pub seed: u64,
    pub total: usize,
    pub distinct: usize,
    pub lattice: i64,
    pub agrees: bool,
}

pub fn direct_count(entry: TableEntry, seed: u64) -> Result<DirectCount> {
    let c = entry.count(seed)?;
    let lattice = entry.lattice_value();
    Ok(DirectCount {
        entry: entry.name(),
        seed,
        total: c.total,
        distinct: c.distinct,
        lattice,
        agrees: c.total as i64 == lattice && c.is_reduced(),
    })
}

pub fn verify_table(seed: u64) -> Result<Vec<DirectCount>> {
    TableEntry::ALL.iter().map(|&e| direct_count(e, seed)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPencilReport {
    pub g_star_e1: DegenerationCount,
    pub c1_star_e2: DegenerationCount,
    pub c1_star_h3: DegenerationCount,
}

pub fn dual_pencil_checks(seed: u64) -> Result<DualPencilReport> {
    Ok(DualPencilReport {
        g_star_e1: TableEntry::GStarE1.count(seed)?,
        c1_star_e2: TableEntry::C1StarE2.count(seed)?,
        c1_star_h3: TableEntry::C1StarH3.count(seed)?,
    })
}
