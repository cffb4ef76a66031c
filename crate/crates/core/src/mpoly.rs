//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ArithError;
use crate::ring::Ring;
use crate::Rat;

pub type Exponents = Vec<u32>;

/// A polynomial in a fixed, ordered set of variables.
///
/// Terms live in a map from exponent vectors to nonzero coefficients. The map
/// order (lexicographic on exponent vectors, first variable most significant)
/// is the monomial order used for exact division.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, Rat>,
}

/// Shared variable set; cloning is cheap.
pub fn var_set<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl MPoly {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<[String]>, c: Rat) -> Self {
        let n = vars.len();
        MPoly::monomial(vars, vec![0; n], c)
    }

    pub fn monomial(vars: Arc<[String]>, exps: Exponents, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { vars, terms }
    }

    /// The polynomial consisting of the single named variable.
    pub fn var(vars: Arc<[String]>, name: &str) -> Result<Self, ArithError> {
        let i = index_of(&vars, name)?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Ok(MPoly::monomial(vars, exps, Rat::one()))
    }

    pub fn from_terms(
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Exponents, Rat)>,
    ) -> Result<Self, ArithError> {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(ArithError::DimensionMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    p.vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, ArithError> {
        index_of(&self.vars, name)
    }

    /// The value if this polynomial has no non-constant terms.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn check_vars(&self, other: &MPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable sets: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = MPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(self.vars.clone(), Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn leading(&self) -> Option<(&Exponents, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor` if it exists.
    ///
    /// Repeatedly cancels the lexicographically leading term; when `divisor`
    /// divides `self` this never gets stuck, so a leading term not divisible
    /// by the divisor's leading term proves non-divisibility.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        self.check_vars(divisor);
        let (de, dc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.vars.clone());
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(de).any(|(r, d)| r < d) {
                return None;
            }
            let e: Exponents = re.iter().zip(de).map(|(r, d)| r - d).collect();
            let c = rc / dc;
            let step = MPoly::monomial(self.vars.clone(), e.clone(), c.clone());
            rem = rem.sub(&step.mul(divisor));
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Substitutes a rational value for one variable. The variable set is kept.
    pub fn substitute(&self, var: usize, value: &Rat) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let k = e[var];
            if k > 0 && value.is_zero() {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = 0;
            out.add_term(e2, c * &value.pow(k));
        }
        out
    }

    /// Evaluates at a full assignment of the variables.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(values)
                    .fold(c.clone(), |acc, (&k, v)| acc * v.pow(k))
            })
            .sum()
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * &Rat::from_int(e[var] as i64));
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Divides every term by the monomial `exps`. Panics if some term is not
    /// divisible.
    pub fn divide_by_monomial(&self, exps: &[u32]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let e2 = e
                        .iter()
                        .zip(exps)
                        .map(|(a, b)| a.checked_sub(*b).expect("monomial does not divide term"))
                        .collect();
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> MPolyJson {
        MPolyJson {
            vars: self.vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exps_key(e), c.clone()))
                .collect(),
        }
    }

    pub fn from_json(j: &MPolyJson) -> Result<MPoly, ArithError> {
        let vars = var_set(&j.vars);
        let mut terms = Vec::with_capacity(j.terms.len());
        for (k, c) in &j.terms {
            let e = parse_exps_key(k)?;
            terms.push((e, c.clone()));
        }
        MPoly::from_terms(vars, terms)
    }
}

/// Smallest exponent of each variable across every nonzero term of every
/// polynomial; the greatest common monomial divisor of the collection.
pub fn common_monomial<'a>(
    nvars: usize,
    polys: impl IntoIterator<Item = &'a MPoly>,
) -> Option<Exponents> {
    let mut acc: Option<Exponents> = None;
    for p in polys {
        for e in p.terms.keys() {
            acc = Some(match acc {
                None => e.clone(),
                Some(a) => a.iter().zip(e).map(|(x, y)| *x.min(y)).collect(),
            });
        }
    }
    acc.inspect(|a| debug_assert_eq!(a.len(), nvars))
}

fn index_of(vars: &[String], name: &str) -> Result<usize, ArithError> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| ArithError::UnknownVariable(name.to_string()))
}

fn exps_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_exps_key(k: &str) -> Result<Exponents, ArithError> {
    if k.trim().is_empty() {
        return Ok(Vec::new());
    }
    k.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| ArithError::Malformed(format!("bad exponent tuple {k:?}")))
        })
        .collect()
}

/// Wire form: `{"vars": ["t1", "t2"], "terms": {"1,0": "3/2"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MPolyJson {
    pub vars: Vec<String>,
    pub terms: BTreeMap<String, Rat>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MPolyJson::deserialize(d)?;
        MPoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.vars.clone())
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.vars.clone(), Rat::one())
    }
    fn from_rat_like(&self, c: &Rat) -> Self {
        MPoly::constant(self.vars.clone(), c.clone())
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        MPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        MPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        MPoly::div_exact(self, other)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        self.vars[j].clone()
                    } else {
                        format!("{}^{}", self.vars[j], k)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> (MPoly, MPoly, MPoly) {
        let v = var_set(&["x", "y", "z"]);
        (
            MPoly::var(v.clone(), "x").unwrap(),
            MPoly::var(v.clone(), "y").unwrap(),
            MPoly::var(v, "z").unwrap(),
        )
    }

    #[test]
    fn arithmetic_and_display() {
        let (x, y, _) = xyz();
        let p = x.add(&y).pow(2);
        assert_eq!(p.to_string(), "x^2 + 2*x*y + y^2");
        assert!(p.sub(&p).is_zero());
        assert_eq!(x.sub(&y).to_string(), "x - y");
    }

    #[test]
    fn exact_division() {
        let (x, y, z) = xyz();
        let a = x.add(&y);
        let b = y.sub(&z.scale(&Rat::from_int(3)));
        let prod = a.mul(&b).mul(&x);
        assert_eq!(prod.div_exact(&b), Some(a.mul(&x)));
        assert_eq!(prod.div_exact(&x.add(&z)), None);
    }

    #[test]
    fn substitution_and_derivative() {
        let (x, y, _) = xyz();
        let p = x.mul(&y).add(&y.pow(3));
        assert_eq!(p.substitute(1, &Rat::zero()), MPoly::zero(p.vars().clone()));
        assert_eq!(p.substitute(0, &Rat::from_int(2)).to_string(), "y^3 + 2*y");
        assert_eq!(p.derivative(1).to_string(), "x + 3*y^2");
        assert_eq!(
            p.eval(&[Rat::from_int(2), Rat::from_int(3), Rat::zero()]),
            Rat::from_int(33)
        );
    }

    #[test]
    fn json_round_trip() {
        let (x, y, _) = xyz();
        let p = x.pow(2).scale(&Rat::new(3, 2)).sub(&y);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"vars":["x","y","z"],"terms":{"0,1,0":"-1","2,0,0":"3/2"}}"#);
        let back: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn common_monomial_content() {
        let (x, y, z) = xyz();
        let a = x.pow(2).mul(&y);
        let b = x.mul(&y).mul(&z).add(&x.pow(3).mul(&y.pow(2)));
        assert_eq!(common_monomial(3, [&a, &b]), Some(vec![1, 1, 0]));
        assert_eq!(a.divide_by_monomial(&[1, 1, 0]), x);
    }
}
