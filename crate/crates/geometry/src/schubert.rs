//! Schubert classes on the Grassmannian `G(k,n)` of projective k-planes in
//! `P^n`: Pieri multiplication by `σ_1` and the top-degree duality pairing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{GeometryError, Result};

/// Partitions fit in a `(k+1) × (n−k)` box and are stored without trailing
/// zeros.
pub type Partition = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertClass {
    pub k: usize,
    pub n: usize,
    terms: BTreeMap<Partition, i64>,
}

fn trim(mut p: Partition) -> Partition {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

impl SchubertClass {
    pub fn zero(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return Err(GeometryError::OutOfRange(format!("G({k},{n})")));
        }
        Ok(SchubertClass { k, n, terms: BTreeMap::new() })
    }

    pub fn sigma(k: usize, n: usize, partition: &[usize]) -> Result<Self> {
        let mut c = SchubertClass::zero(k, n)?;
        let p = trim(partition.to_vec());
        if !c.fits(&p) {
            return Err(GeometryError::OutOfRange(format!("partition {p:?} in the box of G({k},{n})")));
        }
        c.terms.insert(p, 1);
        Ok(c)
    }

    pub fn rows(&self) -> usize {
        self.k + 1
    }

    pub fn cols(&self) -> usize {
        self.n - self.k
    }

    pub fn dim(&self) -> usize {
        self.rows() * self.cols()
    }

    fn fits(&self, p: &[usize]) -> bool {
        p.len() <= self.rows() && p.iter().all(|&x| x <= self.cols()) && p.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn terms(&self) -> &BTreeMap<Partition, i64> {
        &self.terms
    }

    pub fn coeff(&self, p: &[usize]) -> i64 {
        self.terms.get(&trim(p.to_vec())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_space(&self, other: &SchubertClass) -> Result<()> {
        if (self.k, self.n) != (other.k, other.n) {
            return Err(GeometryError::DimensionMismatch(format!(
                "G({},{}) vs G({},{})",
                self.k, self.n, other.k, other.n
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, p: Partition, c: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add(&self, other: &SchubertClass) -> Result<SchubertClass> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> SchubertClass {
        let mut out = SchubertClass { k: self.k, n: self.n, terms: BTreeMap::new() };
        for (p, v) in &self.terms {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    /// The codimension, when all terms share one.
    pub fn codim(&self) -> Option<usize> {
        let mut sizes = self.terms.keys().map(|p| p.iter().sum::<usize>());
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }

    /// The partition complementary to `p` in the box.
    pub fn complement(&self, p: &[usize]) -> Partition {
        let rows = self.rows();
        let padded: Vec<usize> = (0..rows).map(|i| p.get(i).copied().unwrap_or(0)).collect();
        trim((0..rows).map(|i| self.cols() - padded[rows - 1 - i]).collect())
    }
}

/// Multiplication by `σ_1`: add one box in every admissible way.
pub fn pieri1(c: &SchubertClass) -> SchubertClass {
    let mut out = SchubertClass { k: c.k, n: c.n, terms: BTreeMap::new() };
    for (p, v) in &c.terms {
        for i in 0..=p.len().min(c.rows() - 1) {
            let mut q = p.clone();
            if i == q.len() {
                q.push(0);
            }
            q[i] += 1;
            if c.fits(&q) {
                out.add_term(q, *v);
            }
        }
    }
    out
}

pub fn pieri_power(c: &SchubertClass, m: usize) -> SchubertClass {
    (0..m).fold(c.clone(), |acc, _| pieri1(&acc))
}

/// `Σ a_λ b_μ [μ = λ^c]` for classes of complementary codimension.
pub fn duality_pair(a: &SchubertClass, b: &SchubertClass) -> Result<i64> {
    a.same_space(b)?;
    let dim = a.dim();
    let mut total = 0;
    for (p, x) in &a.terms {
        for (q, y) in &b.terms {
            let size = p.iter().sum::<usize>() + q.iter().sum::<usize>();
            if size != dim {
                return Err(GeometryError::Invalid(format!(
                    "codimensions {} and {} are not complementary in a {dim}-dimensional Grassmannian",
                    p.iter().sum::<usize>(),
                    q.iter().sum::<usize>()
                )));
            }
            if a.complement(p) == *q {
                total += x * y;
            }
        }
    }
    Ok(total)
}

/// The degree of `G(k,n)` in its Plücker embedding: `σ_1^m` with `m` the
/// dimension.
pub fn sigma1_power_degree(k: usize, n: usize, m: usize) -> Result<i64> {
    let one = SchubertClass::sigma(k, n, &[])?;
    if m != one.dim() {
        return Err(GeometryError::Invalid(format!("G({k},{n}) has dimension {}, not {m}", one.dim())));
    }
    let full = vec![one.cols(); one.rows()];
    Ok(pieri_power(&one, m).coeff(&full))
}

/// Twice the pairing of the surface class `σ_2 + σ_{1,1}` with `σ_1^2` in
/// `G(1,3)`, the factor two coming from the double cover of the curve of
/// planes.
pub fn p_dot_r2() -> i64 {
    2 * surface_pairing()
}

/// `⟨σ_2 + σ_{1,1}, σ_1^2⟩` in `G(1,3)`.
pub fn surface_pairing() -> i64 {
    let s = SchubertClass::sigma(1, 3, &[2])
        .and_then(|a| a.add(&SchubertClass::sigma(1, 3, &[1, 1])?))
        .expect("partitions fit");
    let s1sq = pieri_power(&SchubertClass::sigma(1, 3, &[]).expect("empty partition"), 2);
    duality_pair(&s, &s1sq).expect("complementary")
}

impl fmt::Display for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            let name = if p.is_empty() {
                "sigma0".to_string()
            } else {
                format!("sigma{}", p.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            };
            let mag = c.abs();
            if first {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            f.write_str(&name)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for SchubertClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            k: usize,
            n: usize,
            terms: BTreeMap<String, i64>,
        }
        let terms = self
            .terms
            .iter()
            .map(|(p, c)| (p.iter().map(usize::to_string).collect::<Vec<_>>().join(","), *c))
            .collect();
        Wire { k: self.k, n: self.n, terms }.serialize(s)
    }
}

/// Value of an expression: a class, plus its degree when it is top
/// dimensional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub class: SchubertClass,
    pub degree: Option<i64>,
}

/// Evaluates sums and products of Schubert classes, such as
/// `sigma1^4` or `(sigma2 + sigma1,1) * sigma1^2`.
///
/// Products are computed with Pieri's rule when one factor is a power of
/// `σ_1`, and with the duality pairing when the factors have complementary
/// codimension.
pub fn evaluate(k: usize, n: usize, expr: &str) -> Result<Evaluation> {
    let mut parser = Parser { s: expr.as_bytes(), pos: 0, k, n };
    let value = parser.sum()?;
    parser.skip_ws();
    if parser.pos != parser.s.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let class = value.class;
    let full = vec![class.cols(); class.rows()];
    let degree = (class.codim() == Some(class.dim())).then(|| class.coeff(&full));
    Ok(Evaluation { class, degree })
}

#[derive(Clone)]
struct Value {
    class: SchubertClass,
    /// Set when the value is exactly `c·σ_1^m`.
    sigma1_power: Option<(i64, usize)>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    k: usize,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> GeometryError {
        GeometryError::Invalid(format!("{msg} at position {} of the expression", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("expected a number"))
    }

    fn sum(&mut self) -> Result<Value> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let mut rhs = self.product()?.class;
            if c == b'-' {
                rhs = rhs.scale(-1);
            }
            acc = Value { class: acc.class.add(&rhs)?, sigma1_power: None };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = multiply(acc, rhs)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.number()?;
        let one = Value {
            class: SchubertClass::sigma(self.k, self.n, &[])?,
            sigma1_power: Some((1, 0)),
        };
        (0..e).try_fold(one, |acc, _| multiply(acc, base.clone()))
    }

    fn atom(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let m = self.number()? as i64;
                let class = SchubertClass::sigma(self.k, self.n, &[])?.scale(m);
                Ok(Value { class, sigma1_power: Some((m, 0)) })
            }
            Some(b's') => {
                let rest = &self.s[self.pos..];
                let len = if rest.starts_with(b"sigma") { 5 } else { 1 };
                self.pos += len;
                if self.s.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                }
                let braced = self.s.get(self.pos) == Some(&b'{');
                if braced {
                    self.pos += 1;
                }
                let mut parts = Vec::new();
                let mut saw_comma = false;
                loop {
                    let start = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = &self.s[start..self.pos];
                    if digits.is_empty() {
                        return Err(self.error("expected a partition"));
                    }
                    parts.push(digits);
                    if self.s.get(self.pos) == Some(&b',') {
                        saw_comma = true;
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if braced {
                    if self.s.get(self.pos) != Some(&b'}') {
                        return Err(self.error("expected '}'"));
                    }
                    self.pos += 1;
                }
                // without commas, each digit is one part: sigma11 = sigma_{1,1}
                let partition: Vec<usize> = if saw_comma {
                    parts
                        .iter()
                        .map(|d| std::str::from_utf8(d).unwrap().parse().map_err(|_| self.error("bad part")))
                        .collect::<Result<_>>()?
                } else {
                    parts[0].iter().map(|b| usize::from(b - b'0')).collect()
                };
                let class = SchubertClass::sigma(self.k, self.n, &partition)?;
                let sigma1_power = match trim(partition.clone()).as_slice() {
                    [] => Some((1, 0)),
                    [1] => Some((1, 1)),
                    _ => None,
                };
                Ok(Value { class, sigma1_power })
            }
            _ => Err(self.error("expected a Schubert class, a number or '('")),
        }
    }
}

fn multiply(a: Value, b: Value) -> Result<Value> {
    match (a.sigma1_power, b.sigma1_power) {
        (Some((c1, m1)), Some((c2, m2))) => {
            let class = pieri_power(&a.class, m2).scale(c2);
            Ok(Value { class, sigma1_power: Some((c1 * c2, m1 + m2)) })
        }
        (_, Some((c, m))) => Ok(Value { class: pieri_power(&a.class, m).scale(c), sigma1_power: None }),
        (Some((c, m)), _) => Ok(Value { class: pieri_power(&b.class, m).scale(c), sigma1_power: None }),
        (None, None) => {
            let dim = a.class.dim();
            match (a.class.codim(), b.class.codim()) {
                (Some(x), Some(y)) if x + y == dim => {
                    let d = duality_pair(&a.class, &b.class)?;
                    let full = vec![a.class.cols(); a.class.rows()];
                    let class = SchubertClass::sigma(a.class.k, a.class.n, &full)?.scale(d);
                    Ok(Value { class, sigma1_power: None })
                }
                _ => Err(GeometryError::Unsupported(
                    "general Littlewood-Richardson products; one factor must be a power of sigma1 or the degrees must be complementary".into(),
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: &[usize]) -> SchubertClass {
        SchubertClass::sigma(1, 3, p).unwrap()
    }

    /// Standard Young tableaux of rectangular shape, by the hook length
    /// formula.
    fn rectangle_tableaux(rows: usize, cols: usize) -> u128 {
        let cells = rows * cols;
        let mut num: u128 = (1..=cells as u128).product();
        for i in 0..rows {
            for j in 0..cols {
                num /= ((rows - i) + (cols - j) - 1) as u128;
            }
        }
        num
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(pieri1(&s(&[])), s(&[1]));
        assert_eq!(pieri1(&s(&[1])), s(&[2]).add(&s(&[1, 1])).unwrap());
        assert_eq!(pieri1(&s(&[2])), s(&[2, 1]));
    }

    #[test]
    fn duality_examples() {
        assert_eq!(duality_pair(&s(&[2]), &s(&[2])).unwrap(), 1);
        assert_eq!(duality_pair(&s(&[2]), &s(&[1, 1])).unwrap(), 0);
        assert_eq!(surface_pairing(), 2);
        assert!(duality_pair(&s(&[1]), &s(&[1])).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(sigma1_power_degree(1, 3, 4).unwrap(), 2);
        assert_eq!(sigma1_power_degree(1, 4, 6).unwrap(), 5);
        for n in 1..6 {
            assert_eq!(sigma1_power_degree(0, n, n).unwrap(), 1);
        }
        assert!(sigma1_power_degree(1, 3, 3).is_err());
        for n in 2..7 {
            for k in 0..n {
                let rows = k + 1;
                let cols = n - k;
                let d = sigma1_power_degree(k, n, rows * cols).unwrap();
                assert_eq!(d as u128, rectangle_tableaux(rows, cols), "G({k},{n})");
            }
        }
    }

    #[test]
    fn p_meets_r2_four_times() {
        assert_eq!(p_dot_r2(), 4);
    }

    #[test]
    fn complements() {
        let c = s(&[]);
        assert_eq!(c.complement(&[2]), vec![2]);
        assert_eq!(c.complement(&[1, 1]), vec![1, 1]);
        assert_eq!(c.complement(&[2, 1]), vec![1]);
        assert_eq!(c.complement(&[]), vec![2, 2]);
    }

    #[test]
    fn expressions() {
        assert_eq!(evaluate(1, 3, "sigma1^4").unwrap().degree, Some(2));
        assert_eq!(evaluate(1, 3, "(sigma2 + sigma1,1) * sigma1^2").unwrap().degree, Some(2));
        assert_eq!(evaluate(1, 3, "2*(sigma_{2}+sigma11)*sigma1^2").unwrap().degree, Some(4));
        assert_eq!(evaluate(1, 3, "sigma2*sigma2").unwrap().degree, Some(1));
        assert_eq!(evaluate(1, 3, "sigma1*sigma1").unwrap().class, s(&[2]).add(&s(&[1, 1])).unwrap());
        assert_eq!(evaluate(1, 3, "sigma1^2").unwrap().degree, None);
        assert!(matches!(evaluate(1, 4, "sigma2*sigma2"), Err(GeometryError::Unsupported(_))));
        assert!(evaluate(1, 3, "sigma3").is_err());
        assert!(evaluate(1, 3, "sigma1 +").is_err());
        assert_eq!(evaluate(1, 3, "sigma1^2").unwrap().class.to_string(), "sigma1,1 + sigma2");
    }
}
