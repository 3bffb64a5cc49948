//! Sparse tables of graded-symmetric multilinear maps `Sym(V) → W`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{GradedMap, GradedSpace, Rat, Scalar, Vector};
use crate::sym::{SymElem, SymWord};

/// A map `Sym(V) → W` of fixed degree, one output vector per canonical word.
#[derive(Clone, PartialEq, Debug)]
pub struct Multilinear<R> {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    table: BTreeMap<SymWord, Vector<R>>,
}

impl<R: Scalar> Multilinear<R> {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            degree,
            table: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Sets the value on a word after checking it is canonical, built from
    /// source basis elements, and that the output has the right degree.
    pub fn set(&mut self, word: SymWord, value: Vector<R>) -> Result<()> {
        for e in word.elems() {
            self.source.check(*e)?;
        }
        let want = word.degree() + self.degree;
        for (e, _) in value.iter() {
            self.target.check(*e)?;
            if e.degree != want {
                return Err(Error::DegreeRule(format!(
                    "entry on {} has output in degree {} but must lie in degree {want}",
                    self.word_label(&word),
                    e.degree
                )));
            }
        }
        if value.is_zero() {
            self.table.remove(&word);
        } else {
            self.table.insert(word, value);
        }
        Ok(())
    }

    pub fn add_to(&mut self, word: SymWord, value: &Vector<R>) -> Result<()> {
        let v = self.eval_word(&word).add(value);
        self.set(word, v)
    }

    pub fn word_label(&self, w: &SymWord) -> String {
        let ls: Vec<&str> = w.elems().iter().map(|e| self.source.label(*e)).collect();
        format!("({})", ls.join(","))
    }

    pub fn eval_word(&self, w: &SymWord) -> Vector<R> {
        self.table.get(w).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &SymElem<R>) -> Vector<R> {
        let mut out = Vector::zero();
        for (w, c) in x.iter() {
            if let Some(v) = self.table.get(w) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SymWord, &Vector<R>)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.table.keys().map(SymWord::len).max().unwrap_or(0)
    }

    /// Entries of arity exactly `k`.
    pub fn arity_part(&self, k: usize) -> Self {
        self.filter(|w| w.len() == k)
    }

    pub fn filter(&self, keep: impl Fn(&SymWord) -> bool) -> Self {
        Self {
            table: self
                .table
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
            ..Self::zero(&self.source, &self.target, self.degree)
        }
    }

    /// The arity-one part as a graded linear map.
    pub fn linear(&self) -> GradedMap<R> {
        GradedMap::from_images(&self.source, &self.target, self.degree, |e| {
            self.eval_word(&SymWord::single(e))
        })
        .expect("table entries obey the degree rule")
    }

    pub fn from_linear(m: &GradedMap<R>) -> Self {
        let mut out = Self::zero(m.source(), m.target(), m.degree());
        for e in m.source().basis() {
            out.table_insert(SymWord::single(e), m.image(e));
        }
        out
    }

    fn table_insert(&mut self, w: SymWord, v: Vector<R>) {
        if !v.is_zero() {
            self.table.insert(w, v);
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::SpaceMismatch("tables of different shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (w, v) in &other.table {
            let s = out.eval_word(w).add(v);
            out.table.remove(w);
            out.table_insert(w.clone(), s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&R::one().neg()))
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(&self.source, &self.target, self.degree);
        for (w, v) in &self.table {
            out.table_insert(w.clone(), v.scale(c));
        }
        out
    }

    /// Post-composition with a linear map `W → W'`.
    pub fn then_linear(&self, m: &GradedMap<R>) -> Result<Self> {
        if m.source() != &self.target {
            return Err(Error::SpaceMismatch("post-composition".into()));
        }
        let mut out = Self::zero(&self.source, m.target(), self.degree + m.degree());
        for (w, v) in &self.table {
            out.table_insert(w.clone(), m.apply(v));
        }
        Ok(out)
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> Multilinear<S> {
        let mut out = Multilinear::zero(&self.source, &self.target, self.degree);
        for (w, v) in &self.table {
            out.table_insert(w.clone(), v.map_coeffs(&f));
        }
        out
    }

    pub fn to_rat(&self) -> Result<Multilinear<Rat>> {
        let mut out = Multilinear::zero(&self.source, &self.target, self.degree);
        for (w, v) in &self.table {
            out.table_insert(w.clone(), v.to_rat()?);
        }
        Ok(out)
    }

    /// Largest degree any input word can have while still producing output.
    pub fn word_degree_bound(&self) -> i32 {
        self.target.max_degree().unwrap_or(0) - self.degree
    }

    /// Relabels the table onto other spaces with the same shape.
    pub fn with_spaces(&self, source: &GradedSpace, target: &GradedSpace) -> Result<Self> {
        let mut out = Self::zero(source, target, self.degree);
        for (w, v) in &self.table {
            out.set(w.clone(), v.clone())?;
        }
        Ok(out)
    }
}

impl Multilinear<crate::linalg::Poly> {
    pub fn eval_at(&self, point: &[Rat]) -> Result<Multilinear<Rat>> {
        let mut out = Multilinear::zero(&self.source, &self.target, self.degree);
        for (w, v) in &self.table {
            out.table_insert(w.clone(), v.eval(point)?);
        }
        Ok(out)
    }

    /// Substitutes `images[i]` for coordinate `i` in every coefficient.
    pub fn substitute(&self, images: &[crate::linalg::Poly]) -> Result<Self> {
        let mut out = Multilinear::zero(&self.source, &self.target, self.degree);
        for (w, v) in &self.table {
            let mut nv = Vector::zero();
            for (e, c) in v.iter() {
                nv.add_term(*e, c.substitute(images)?);
            }
            out.table_insert(w.clone(), nv);
        }
        Ok(out)
    }
}
