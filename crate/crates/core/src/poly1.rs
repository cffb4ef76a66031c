//! Dense univariate polynomials over the rationals.

use std::fmt;

use crate::error::ArithError;
use crate::ring::Ring;
use crate::Rat;

/// A univariate polynomial with coefficients stored lowest degree first.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial is
/// the empty vector and `degree() == len - 1` otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly1 {
    var: String,
    coeffs: Vec<Rat>,
}

impl Poly1 {
    pub fn new(var: impl Into<String>, coeffs: Vec<Rat>) -> Self {
        let mut p = Poly1 {
            var: var.into(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_ints(var: impl Into<String>, coeffs: &[i64]) -> Self {
        Poly1::new(var, coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn zero(var: impl Into<String>) -> Self {
        Poly1::new(var, Vec::new())
    }

    pub fn constant(var: impl Into<String>, c: Rat) -> Self {
        Poly1::new(var, vec![c])
    }

    /// The polynomial `var`.
    pub fn variable(var: impl Into<String>) -> Self {
        Poly1::new(var, vec![Rat::zero(), Rat::one()])
    }

    /// `c + d·var`.
    pub fn linear(var: impl Into<String>, c: Rat, d: Rat) -> Self {
        Poly1::new(var, vec![c, d])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Largest power of the variable dividing `self`; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `var^k`. Panics if the result would not be a polynomial.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(
            self.is_zero() || self.valuation().unwrap() >= k,
            "shift_down past the valuation"
        );
        Poly1::new(self.var.clone(), self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Poly1::new(self.var.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rat::from_int(i as i64))
            .collect();
        Poly1::new(self.var.clone(), coeffs)
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip().expect("nonzero leading coefficient")),
        }
    }

    fn merged_var(&self, other: &Poly1) -> String {
        if self.degree().unwrap_or(0) == 0 {
            other.var.clone()
        } else {
            self.var.clone()
        }
    }

    pub fn add(&self, other: &Poly1) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly1::new(self.merged_var(other), coeffs)
    }

    pub fn sub(&self, other: &Poly1) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Poly1::new(self.merged_var(other), coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly1::new(self.var.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly1) -> Self {
        let var = self.merged_var(other);
        if self.is_zero() || other.is_zero() {
            return Poly1::zero(var);
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly1::new(var, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly1::constant(self.var.clone(), Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly1) -> Result<(Poly1, Poly1), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let lc = divisor.leading_coeff().unwrap();
        let var = self.merged_var(divisor);
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly1::zero(var.clone()), Poly1::zero(var)));
        };
        if nd < dd {
            return Ok((Poly1::zero(var), self.clone()));
        }
        let mut quot = vec![Rat::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * b);
            }
            quot[i] = c;
        }
        Ok((Poly1::new(var.clone(), quot), Poly1::new(var, rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Result<Poly1, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g)?;
        Ok(q.monic())
    }

    /// Discriminant-free root count over the complex numbers.
    pub fn distinct_root_count(&self) -> Result<RootCount, ArithError> {
        let sf = self.squarefree_part()?;
        Ok(RootCount {
            degree: self.degree().unwrap(),
            distinct: sf.degree().unwrap(),
        })
    }
}

/// Degree of a polynomial and the number of its distinct complex roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RootCount {
    pub degree: usize,
    pub distinct: usize,
}

/// See [`Poly1::distinct_root_count`].
pub fn distinct_root_count(p: &Poly1) -> Result<RootCount, ArithError> {
    p.distinct_root_count()
}

impl Ring for Poly1 {
    fn zero_like(&self) -> Self {
        Poly1::zero(self.var.clone())
    }
    fn one_like(&self) -> Self {
        Poly1::constant(self.var.clone(), Rat::one())
    }
    fn from_rat_like(&self, c: &Rat) -> Self {
        Poly1::constant(self.var.clone(), c.clone())
    }
    fn is_zero(&self) -> bool {
        Poly1::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly1::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly1::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly1::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly1::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other).ok()?;
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly1({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64, d: i64) -> Poly1 {
        Poly1::from_ints("t", &[c, d])
    }

    #[test]
    fn display() {
        assert_eq!(Poly1::from_ints("t", &[1, 3, 2]).to_string(), "2t^2 + 3t + 1");
        assert_eq!(Poly1::from_ints("t", &[0, -1]).to_string(), "-t");
        assert_eq!(Poly1::zero("t").to_string(), "0");
    }

    #[test]
    fn root_counts_from_spec_examples() {
        let p = lin(-1, 1).mul(&lin(-2, 1));
        assert_eq!(p.distinct_root_count().unwrap(), RootCount { degree: 2, distinct: 2 });
        let p = lin(-1, 1).pow(2);
        assert_eq!(p.distinct_root_count().unwrap(), RootCount { degree: 2, distinct: 1 });
        let p = lin(1, 1).mul(&lin(1, 2)).mul(&lin(1, 3)).mul(&lin(1, 4));
        // 24t^4 + 50t^3 + 35t^2 + 10t + 1, expanded by hand.
        assert_eq!(p, Poly1::from_ints("t", &[1, 10, 35, 50, 24]));
        assert_eq!(p.distinct_root_count().unwrap(), RootCount { degree: 4, distinct: 4 });
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(Poly1::zero("t").distinct_root_count(), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn constants_have_no_roots() {
        let c = Poly1::constant("t", Rat::from_int(5));
        assert_eq!(c.distinct_root_count().unwrap(), RootCount { degree: 0, distinct: 0 });
    }

    #[test]
    fn division_and_gcd() {
        let a = lin(-1, 1).pow(2).mul(&lin(3, 1));
        let b = lin(-1, 1).mul(&lin(5, 2));
        assert_eq!(a.gcd(&b), lin(-1, 1));
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
        assert_eq!(Ring::div_exact(&a, &lin(3, 1)), Some(lin(-1, 1).pow(2)));
        assert_eq!(Ring::div_exact(&a, &lin(4, 1)), None);
    }

    #[test]
    fn valuation_and_shift() {
        let p = Poly1::from_ints("t", &[0, 0, 3, 1]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.shift_down(2), Poly1::from_ints("t", &[3, 1]));
        assert_eq!(p.eval(&Rat::from_int(2)), Rat::from_int(20));
    }
}
