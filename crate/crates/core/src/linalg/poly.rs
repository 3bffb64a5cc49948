//! Sparse multivariate polynomials with rational coefficients.
//!
//! Variables are positional. Exponent vectors are stored with trailing zeros
//! removed, so a polynomial does not need to know how many variables its chart
//! has; [`PolyRing`] carries the names.

use std::collections::BTreeMap;
use std::fmt;


use super::rat::{fmt_rat, int, Rat};
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponent, Rat>,
}

fn trim(mut e: Exponent) -> Exponent {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(vec![], c)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Exponent, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exp), c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rat)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rat) {
        let e = trim(exp);
        let entry = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of variables referenced (one past the last variable with a
    /// nonzero exponent).
    pub fn span(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let p = e.get(var).copied().unwrap_or(0);
            if p == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c * int(p as i64));
        }
        out
    }

    /// Evaluation at a point given positionally; missing trailing coordinates
    /// are an error.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let x = point
                    .get(i)
                    .ok_or_else(|| Error::UnknownVariable(format!("#{i}")))?;
                t *= num_traits::pow(x.clone(), p as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Rat::one());
        for _ in 0..n {
            acc = Scalar::mul(&acc, self);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Self> {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let img = images
                    .get(i)
                    .ok_or_else(|| Error::UnknownVariable(format!("#{i}")))?;
                t = Scalar::mul(&t, &img.pow(p));
            }
            out = Scalar::add(&out, &t);
        }
        Ok(out)
    }

    /// Restriction to `x_0 = … = x_{k-1} = 0`.
    pub fn restrict_zero(&self, k: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().take(k).all(|&p| p == 0))
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// `∫₀¹ p(t·x_0, …, t·x_{k-1}, x_k, …) dt`, exactly.
    pub fn scaled_integral(&self, k: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let w: u32 = e.iter().take(k).sum();
            (e.clone(), c / int(w as i64 + 1))
        }))
    }

    /// True when every term has total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.total_degree().unwrap_or(0) <= 1
    }

    /// Affine coefficients `(linear part of length n, constant)`.
    pub fn affine_parts(&self, n: usize) -> Option<(Vec<Rat>, Rat)> {
        if !self.is_affine() || self.span() > n {
            return None;
        }
        let mut lin = vec![Rat::zero(); n];
        let mut c0 = Rat::zero();
        for (e, c) in &self.terms {
            match e.iter().position(|&p| p == 1) {
                Some(i) => lin[i] = c.clone(),
                None => c0 = c.clone(),
            }
        }
        Some((lin, c0))
    }

    pub fn padded_exponent(e: &Exponent, n: usize) -> Exponent {
        let mut out = e.clone();
        out.resize(n.max(e.len()), 0);
        out
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let e: Exponent = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn from_rat(r: &Rat) -> Self {
        Poly::constant(r.clone())
    }
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        self.as_constant()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                    .collect();
                if mono.is_empty() {
                    fmt_rat(c)
                } else {
                    format!("{}*{}", fmt_rat(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Named coordinates of a polynomial chart.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Self {
        Self {
            vars: vars.into_iter().map(Into::into).collect(),
        }
    }

    pub fn point() -> Self {
        Self::default()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        Ok(Poly::var(self.index_of(name)?))
    }

    /// Converts a named point into positional form. Every variable must be
    /// assigned and no unknown names may appear.
    pub fn positional(&self, point: &BTreeMap<String, Rat>) -> Result<Vec<Rat>> {
        for name in point.keys() {
            self.index_of(name)?;
        }
        self.vars
            .iter()
            .map(|v| {
                point
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect()
    }

    pub fn check(&self, p: &Poly) -> Result<()> {
        if p.span() > self.dim() {
            return Err(Error::UnknownVariable(format!("#{}", p.span() - 1)));
        }
        Ok(())
    }

    pub fn eval(&self, p: &Poly, point: &BTreeMap<String, Rat>) -> Result<Rat> {
        self.check(p)?;
        p.eval(&self.positional(point)?)
    }

    /// Jacobian `∂u_i/∂x_j` at a point: one row per entry of `u`.
    pub fn jacobian(&self, u: &[Poly], point: &BTreeMap<String, Rat>) -> Result<super::Matrix<Rat>> {
        let pt = self.positional(point)?;
        jacobian_at(u, self.dim(), &pt)
    }
}

impl PolyRing {
    /// Renders with variable names, highest total degree first.
    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Exponent, &Rat)> = p.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = self.vars.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
                    if k == 1 { name } else { format!("{name}^{k}") }
                })
                .collect();
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            let body = if mono.is_empty() {
                fmt_rat(&a)
            } else if a == Rat::one() {
                mono.join("*")
            } else {
                format!("{}*{}", fmt_rat(&a), mono.join("*"))
            };
            match (n, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }

    /// Parses `+ - * ^`, parentheses, integer or `p/q` literals and variable
    /// names of this ring.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        let mut p = Parser {
            ring: self,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    chars: Vec<char>,
    pos: usize,
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '∂'
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("polynomial: {what} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { Scalar::add(&acc, &t) } else { Scalar::sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = Scalar::mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.digits()?;
            let n: u32 = n.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.digits()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    lit.push('/');
                    lit.push_str(&self.digits()?);
                }
                Ok(Poly::constant(super::rat::parse_rat(&lit)?))
            }
            Some(c) if is_ident(c) => {
                let start = self.pos;
                while self.peek().is_some_and(is_ident) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.ring.var(&name)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

pub fn jacobian_at(u: &[Poly], nvars: usize, point: &[Rat]) -> Result<super::Matrix<Rat>> {
    let mut m = super::Matrix::zeros(u.len(), nvars);
    for (i, ui) in u.iter().enumerate() {
        for j in 0..nvars {
            m.set(i, j, ui.derivative(j).eval(point)?);
        }
    }
    Ok(m)
}

pub fn symbolic_jacobian(u: &[Poly], nvars: usize) -> super::Matrix<Poly> {
    let mut m = super::Matrix::zeros(u.len(), nvars);
    for (i, ui) in u.iter().enumerate() {
        for j in 0..nvars {
            m.set(i, j, ui.derivative(j));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::int;

    fn pt(pairs: &[(&str, i64)]) -> BTreeMap<String, Rat> {
        pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
    }

    #[test]
    fn square_at_three() {
        let ring = PolyRing::new(["x"]);
        let x = ring.var("x").unwrap();
        let p = x.pow(2);
        assert_eq!(ring.eval(&p, &pt(&[("x", 3)])).unwrap(), int(9));
    }

    #[test]
    fn jacobian_of_identity_and_quadratic() {
        let ring = PolyRing::new(["x"]);
        let x = ring.var("x").unwrap();
        let j = ring.jacobian(std::slice::from_ref(&x), &pt(&[("x", 0)])).unwrap();
        assert_eq!(j.get(0, 0), &int(1));
        let u = Scalar::add(&x, &x.pow(2));
        let j = ring.jacobian(&[u], &pt(&[("x", 0)])).unwrap();
        assert_eq!(j.get(0, 0), &int(1));
    }

    #[test]
    fn unknown_variable() {
        let ring = PolyRing::new(["x"]);
        let p = Poly::var(0);
        assert!(matches!(ring.eval(&p, &pt(&[])), Err(Error::UnknownVariable(_))));
        assert!(matches!(
            ring.eval(&p, &pt(&[("x", 1), ("y", 2)])),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(ring.check(&Poly::var(3)), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn no_stored_zeros() {
        let x = Poly::var(0);
        let d = Scalar::sub(&x, &x);
        assert!(d.is_zero());
        assert_eq!(d.num_terms(), 0);
    }

    #[test]
    fn substitution_composes() {
        // p(x, y) = x*y, substitute x -> y^2, y -> 3
        let p = Scalar::mul(&Poly::var(0), &Poly::var(1));
        let q = p.substitute(&[Poly::var(1).pow(2), Poly::constant(int(3))]).unwrap();
        assert_eq!(q, Poly::var(1).pow(2).scale(&int(3)));
    }

    #[test]
    fn scaled_integral_matches_hand_value() {
        // ∫₀¹ (1 + 2 t x) dt = 1 + x
        let p = Scalar::add(&Poly::constant(int(1)), &Poly::var(0).scale(&int(2)));
        let want = Scalar::add(&Poly::constant(int(1)), &Poly::var(0));
        assert_eq!(p.scaled_integral(1), want);
    }

    #[test]
    fn parse_and_format_round_trip() {
        let r = PolyRing::new(["x", "y'"]);
        let p = r.parse("-(x - 1)^2 + 1/2*y' - 3").unwrap();
        assert_eq!(r.format(&p), "-x^2 + 2*x + 1/2*y' - 4");
        assert_eq!(r.parse(&r.format(&p)).unwrap(), p);
        assert!(r.parse("z").is_err());
        assert!(r.parse("x +").is_err());
        assert!(r.parse("1/0").is_err());
    }
}
