//! Stable base loci and birational models across the effective cone of `X_3`.
//!
//! Each region is a union of cones over generator triples, with a sign
//! condition per coefficient: `Pos` marks an open wall, `NonNeg` a closed one.
//! Membership is decided by an exact solve against the triple.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use cq_core::{Matrix, Rat};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{GeometryError, Result};
use crate::picard::{class_p, cone_membership, pair, xi, xi_curve, Basis, Cone, CurveClass, DivisorClass, TestCurve};
use crate::random;

/// An irreducible piece of a base locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locus {
    E1,
    E2,
    E3,
    /// `E1 ∩ E3`.
    E13,
}

impl Locus {
    pub fn name(self) -> &'static str {
        match self {
            Locus::E1 => "E1",
            Locus::E2 => "E2",
            Locus::E3 => "E3",
            Locus::E13 => "E1∩E3",
        }
    }

    fn contained_in(self, other: Locus) -> bool {
        self == other || (self == Locus::E13 && matches!(other, Locus::E1 | Locus::E3))
    }

    fn xi(self) -> Locus {
        match self {
            Locus::E1 => Locus::E3,
            Locus::E3 => Locus::E1,
            other => other,
        }
    }
}

impl Serialize for Locus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A union of loci; empty means basepoint free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BaseLocus(BTreeSet<Locus>);

impl BaseLocus {
    pub fn empty() -> Self {
        BaseLocus::default()
    }

    pub fn of(parts: &[Locus]) -> Self {
        BaseLocus(parts.iter().copied().collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = Locus> + '_ {
        self.0.iter().copied()
    }

    /// Pointwise containment of `other` in `self`.
    pub fn contains(&self, other: &BaseLocus) -> bool {
        other.0.iter().all(|a| self.0.iter().any(|b| a.contained_in(*b)))
    }

    pub fn xi(&self) -> BaseLocus {
        BaseLocus(self.0.iter().map(|l| l.xi()).collect())
    }
}

impl fmt::Display for BaseLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let names: Vec<&str> = self.0.iter().map(|l| l.name()).collect();
        f.write_str(&names.join("∪"))
    }
}

impl Serialize for BaseLocus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Pos,
    NonNeg,
}

impl Sign {
    fn holds(self, x: &Rat) -> bool {
        match self {
            Sign::Pos => x.is_positive(),
            Sign::NonNeg => !x.is_negative(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gen {
    H1,
    H2,
    H3,
    E1,
    E2,
    E3,
    P,
}

impl Gen {
    fn class(self) -> DivisorClass {
        match self {
            Gen::H1 => DivisorClass::h(3, 1),
            Gen::H2 => DivisorClass::h(3, 2),
            Gen::H3 => DivisorClass::h(3, 3),
            Gen::E1 => DivisorClass::e(3, 1),
            Gen::E2 => DivisorClass::e(3, 2),
            Gen::E3 => DivisorClass::e(3, 3),
            Gen::P => class_p(),
        }
    }
}

struct Region {
    id: u8,
    cones: &'static [([Gen; 3], [Sign; 3])],
    locus: &'static [Locus],
}

use Gen::*;
use Sign::*;

const REGIONS: [Region; 8] = [
    Region { id: 1, cones: &[([H1, H2, H3], [NonNeg, NonNeg, NonNeg])], locus: &[] },
    Region { id: 2, cones: &[([H1, H3, P], [NonNeg, NonNeg, Pos])], locus: &[Locus::E13] },
    Region { id: 3, cones: &[([H3, E3, P], [NonNeg, Pos, NonNeg])], locus: &[Locus::E3] },
    Region { id: 4, cones: &[([H1, E1, P], [NonNeg, Pos, NonNeg])], locus: &[Locus::E1] },
    Region { id: 5, cones: &[([P, E1, E3], [NonNeg, Pos, Pos])], locus: &[Locus::E1, Locus::E3] },
    Region { id: 6, cones: &[([H3, E2, E3], [NonNeg, Pos, Pos])], locus: &[Locus::E2, Locus::E3] },
    Region { id: 7, cones: &[([H1, E1, E2], [NonNeg, Pos, Pos])], locus: &[Locus::E1, Locus::E2] },
    Region {
        id: 8,
        cones: &[([H1, H2, E2], [NonNeg, NonNeg, Pos]), ([H3, H2, E2], [NonNeg, NonNeg, Pos])],
        locus: &[Locus::E2],
    },
];

/// Inverses of the generator matrices, one list per region.
fn inverses() -> &'static [Vec<Matrix<Rat>>] {
    static INV: OnceLock<Vec<Vec<Matrix<Rat>>>> = OnceLock::new();
    INV.get_or_init(|| {
        REGIONS
            .iter()
            .map(|r| {
                r.cones
                    .iter()
                    .map(|(gens, _)| {
                        let cols: Vec<Vec<Rat>> = gens.iter().map(|g| g.class().h_coeffs()).collect();
                        let m = Matrix::from_fn(3, 3, |i, j| cols[j][i].clone());
                        let det = m.det().expect("square");
                        m.adjugate().expect("square").scale(&det.recip().expect("generators span"))
                    })
                    .collect()
            })
            .collect()
    })
}

impl Region {
    fn accepts(&self, h: &[Rat]) -> bool {
        let inv = &inverses()[usize::from(self.id - 1)];
        self.cones.iter().zip(inv).any(|((_, signs), m)| {
            m.mul_vec(h).iter().zip(signs).all(|(v, s)| s.holds(v))
        })
    }
}

pub const MODEL_X3: &str = "X3";
pub const MODEL_H1: &str = "P9 = Hilb^{(x+1)^2}(P3)";
pub const MODEL_H2: &str = "Chow2(1,X3)";
pub const MODEL_H3: &str = "P9*";
pub const MODEL_WALL: &str = "C/(Z/2), small contraction, Exc = E1∩E3";
pub const MODEL_FLIP: &str = "X3+ (flip)";
pub const MODEL_P: &str = "G(2,5)/(Z/2)";
pub const MODEL_UNKNOWN: &str = "model not identified";

/// Where in its region a class sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    Interior,
    Ray,
    Wall,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub curve: String,
    pub pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberReport {
    pub chamber: u8,
    pub face: Face,
    /// Name of the ray or wall, if the class lies on one that carries a model.
    pub feature: Option<String>,
    pub base_locus: BaseLocus,
    pub model: String,
    pub certificate: Option<Certificate>,
}

fn check_x3(d: &DivisorClass) -> Result<Vec<Rat>> {
    if d.n != 3 {
        return Err(GeometryError::Unsupported("the chamber decomposition is for n = 3".into()));
    }
    if d.is_zero() {
        return Err(GeometryError::ZeroClass);
    }
    if !cone_membership(d, Cone::Eff)?.member {
        return Err(GeometryError::NotEffective);
    }
    Ok(d.h_coeffs())
}

pub fn classify(d: &DivisorClass) -> Result<ChamberReport> {
    let h = check_x3(d)?;
    let accepting: Vec<&Region> = REGIONS.iter().filter(|r| r.accepts(&h)).collect();
    let region = match accepting.as_slice() {
        [r] => *r,
        _ => {
            return Err(GeometryError::Invalid(format!(
                "class {d} accepted by {} regions",
                accepting.len()
            )))
        }
    };
    let base_locus = BaseLocus::of(region.locus);
    let mut report = ChamberReport {
        chamber: region.id,
        face: Face::Interior,
        feature: None,
        base_locus: base_locus.clone(),
        model: locus_label(&base_locus),
        certificate: None,
    };
    match region.id {
        1 => nef_face(&h, &mut report),
        2 => {
            let on_p = h[0] == h[2] && (&h[1] * &Rat::from_int(-2)) == h[0];
            if on_p {
                report.face = Face::Ray;
                report.feature = Some("P".into());
                report.model = MODEL_P.into();
            } else {
                report.model = MODEL_FLIP.into();
            }
        }
        _ => {}
    }
    Ok(report)
}

fn nef_face(h: &[Rat], report: &mut ChamberReport) {
    let pos: Vec<bool> = h.iter().map(Rat::is_positive).collect();
    let (face, feature, model) = match pos.as_slice() {
        [true, true, true] => (Face::Interior, None, MODEL_X3),
        [true, false, false] => (Face::Ray, Some("H1"), MODEL_H1),
        [false, true, false] => (Face::Ray, Some("H2"), MODEL_H2),
        [false, false, true] => (Face::Ray, Some("H3"), MODEL_H3),
        [true, false, true] => (Face::Wall, Some("H1-H3"), MODEL_WALL),
        [true, true, false] => (Face::Wall, Some("H1-H2"), MODEL_UNKNOWN),
        _ => (Face::Wall, Some("H2-H3"), MODEL_UNKNOWN),
    };
    report.face = face;
    report.feature = feature.map(str::to_string);
    report.model = model.to_string();
    if report.feature.as_deref() == Some("H1-H3") {
        let d = DivisorClass::new(3, Basis::H, h.to_vec()).expect("three coefficients");
        report.certificate = Some(Certificate {
            curve: TestCurve::C12.name().into(),
            pairing: pair(&TestCurve::C12.class(), &d).expect("same n"),
        });
    }
}

/// Report for `t·H1 + (1−t)·H3`, `0 <= t <= 1`.
pub fn classify_segment(t: &Rat) -> Result<ChamberReport> {
    if t.is_negative() || *t > Rat::one() {
        return Err(GeometryError::OutOfRange(format!("t = {t} outside [0, 1]")));
    }
    let d = DivisorClass::new(3, Basis::H, vec![t.clone(), Rat::zero(), Rat::one() - t])?;
    classify(&d)
}

/// Covering curves and the locus each sweeps out.
fn covering_curves() -> Vec<(String, CurveClass, Locus)> {
    let c1 = TestCurve::C1.class();
    vec![
        ("C1".into(), c1.clone(), Locus::E1),
        ("C1*".into(), TestCurve::C1Star.class(), Locus::E1),
        ("C3".into(), TestCurve::C3.class(), Locus::E3),
        ("xi(C1)".into(), xi_curve(&c1).expect("n = 3"), Locus::E3),
        ("C2".into(), TestCurve::C2.class(), Locus::E2),
        ("L2".into(), TestCurve::L2.class(), Locus::E2),
        ("C1,2".into(), TestCurve::C12.class(), Locus::E13),
    ]
}

/// Loci forced into the stable base locus by a covering curve meeting the
/// class negatively.
pub fn forced_base_loci(d: &DivisorClass) -> Result<BaseLocus> {
    check_x3(d)?;
    let mut out = BTreeSet::new();
    for (_, c, locus) in covering_curves() {
        if pair(&c, d)?.is_negative() {
            out.insert(locus);
        }
    }
    Ok(BaseLocus(out))
}

fn locus_label(locus: &BaseLocus) -> String {
    format!("stable base locus {locus}")
}

/// The model label after applying the involution.
pub fn dual_model(report: &ChamberReport) -> String {
    match report.model.as_str() {
        MODEL_H1 => MODEL_H3.into(),
        MODEL_H3 => MODEL_H1.into(),
        _ if report.chamber >= 3 => locus_label(&report.base_locus.xi()),
        other => other.into(),
    }
}

fn dual_chamber(id: u8) -> u8 {
    match id {
        3 => 4,
        4 => 3,
        6 => 7,
        7 => 6,
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub samples: usize,
    pub seed: u64,
    pub counts: BTreeMap<u8, usize>,
    /// Samples accepted by no region or by several.
    pub ambiguous: usize,
    pub xi_failures: usize,
    pub soundness_failures: usize,
    pub nef_mismatches: usize,
}

impl Census {
    pub fn all_chambers_hit(&self) -> bool {
        (1..=8).all(|i| self.counts.get(&i).copied().unwrap_or(0) > 0)
    }

    pub fn passed(&self) -> bool {
        self.ambiguous == 0
            && self.xi_failures == 0
            && self.soundness_failures == 0
            && self.nef_mismatches == 0
            && (self.samples < 1000 || self.all_chambers_hit())
    }
}

/// Classifies random effective classes `xE1 + yE2 + zE3` and checks the
/// partition, the involution and the soundness of the forced loci.
pub fn chamber_census(samples: usize, seed: u64) -> Result<Census> {
    if samples == 0 {
        return Err(GeometryError::OutOfRange("census needs at least one sample".into()));
    }
    let mut rng = random::rng(seed);
    let mut census = Census {
        samples,
        seed,
        counts: BTreeMap::new(),
        ambiguous: 0,
        xi_failures: 0,
        soundness_failures: 0,
        nef_mismatches: 0,
    };
    let mut drawn = 0;
    while drawn < samples {
        let e: Vec<Rat> = (0..3).map(|_| Rat::from_int(rng.gen_range(0..=24))).collect();
        if e.iter().all(Rat::is_zero) {
            continue;
        }
        drawn += 1;
        let d = DivisorClass::new(3, Basis::E, e)?;
        let h = d.h_coeffs();
        let n_accept = REGIONS.iter().filter(|r| r.accepts(&h)).count();
        if n_accept != 1 {
            census.ambiguous += 1;
            continue;
        }
        let report = classify(&d)?;
        *census.counts.entry(report.chamber).or_default() += 1;

        let dual = classify(&xi(&d)?)?;
        if dual.chamber != dual_chamber(report.chamber)
            || dual.base_locus != report.base_locus.xi()
            || dual.model != dual_model(&report)
        {
            census.xi_failures += 1;
        }
        if !report.base_locus.contains(&forced_base_loci(&d)?) {
            census.soundness_failures += 1;
        }
        if report.base_locus.is_empty() != cone_membership(&d, Cone::Nef)?.member {
            census.nef_mismatches += 1;
        }
    }
    Ok(census)
}
