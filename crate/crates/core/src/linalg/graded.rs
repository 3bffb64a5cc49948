//! Graded vector spaces with labelled bases, sparse vectors, and graded
//! linear maps stored as one matrix block per source degree.

use std::collections::BTreeMap;
use std::fmt;

use super::matrix::Matrix;
use super::poly::Poly;
use super::rat::Rat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A basis vector: its degree and its position within that degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElem {
    pub degree: i32,
    pub index: usize,
}

impl BasisElem {
    pub const fn new(degree: i32, index: usize) -> Self {
        Self { degree, index }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    /// The dual basis element, of opposite degree.
    pub fn dual(&self) -> Self {
        Self::new(-self.degree, self.index)
    }
}

impl fmt::Debug for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}#{}", self.degree, self.index)
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    labels: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a space from `(degree, labels)` pairs. Labels must be unique.
    pub fn from_labels<S: Into<String>>(
        parts: impl IntoIterator<Item = (i32, Vec<S>)>,
    ) -> Result<Self> {
        let mut sp = Self::new();
        for (d, ls) in parts {
            for l in ls {
                sp.push(d, l.into())?;
            }
        }
        Ok(sp)
    }

    /// Appends a basis element in degree `d`.
    pub fn push(&mut self, d: i32, label: String) -> Result<BasisElem> {
        if self.find(&label).is_some() {
            return Err(Error::InvalidStructure(format!("duplicate basis label {label:?}")));
        }
        let v = self.labels.entry(d).or_default();
        v.push(label);
        Ok(BasisElem::new(d, v.len() - 1))
    }

    pub fn dim(&self, d: i32) -> usize {
        self.labels.get(&d).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.labels.iter().filter(|(_, v)| !v.is_empty()).map(|(d, _)| *d)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees().last()
    }

    pub fn basis(&self) -> impl Iterator<Item = BasisElem> + '_ {
        self.labels
            .iter()
            .flat_map(|(d, v)| (0..v.len()).map(move |i| BasisElem::new(*d, i)))
    }

    pub fn basis_in(&self, d: i32) -> impl Iterator<Item = BasisElem> {
        (0..self.dim(d)).map(move |i| BasisElem::new(d, i))
    }

    pub fn contains(&self, e: BasisElem) -> bool {
        e.index < self.dim(e.degree)
    }

    pub fn label(&self, e: BasisElem) -> &str {
        &self.labels[&e.degree][e.index]
    }

    pub fn labels_in(&self, d: i32) -> &[String] {
        self.labels.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, label: &str) -> Option<BasisElem> {
        self.labels.iter().find_map(|(d, v)| {
            v.iter()
                .position(|l| l == label)
                .map(|i| BasisElem::new(*d, i))
        })
    }

    /// The subspace of degrees `>= d`, with the same labels.
    pub fn truncate_below(&self, d: i32) -> Self {
        Self {
            labels: self
                .labels
                .iter()
                .filter(|(k, _)| **k >= d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn check(&self, e: BasisElem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("{e:?} is not a basis element")))
        }
    }
}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.labels.iter()).finish()
    }
}

/// Sparse vector: basis element to nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct Vector<R> {
    coeffs: BTreeMap<BasisElem, R>,
}

impl<R> Default for Vector<R> {
    fn default() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<R: Scalar> Vector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(e: BasisElem) -> Self {
        Self::term(e, R::one())
    }

    pub fn term(e: BasisElem, c: R) -> Self {
        let mut v = Self::zero();
        v.add_term(e, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisElem, R)>) -> Self {
        let mut v = Self::zero();
        for (e, c) in terms {
            v.add_term(e, c);
        }
        v
    }

    pub fn add_term(&mut self, e: BasisElem, c: R) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(x) => {
                x.add_assign(&c);
                if x.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &R) {
        for (e, x) in &other.coeffs {
            self.add_term(*e, x.mul(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, x) in &other.coeffs {
            out.add_term(*e, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, x)| (*e, x.mul(c))))
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, x)| (*e, x.scale(r))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, e: BasisElem) -> R {
        self.coeffs.get(&e).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElem, &R)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Components of degree `d` only.
    pub fn degree_part(&self, d: i32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.degree == d)
                .map(|(e, x)| (*e, x.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> Vector<S> {
        Vector::from_terms(self.coeffs.iter().map(|(e, x)| (*e, f(x))))
    }

    pub fn to_rat(&self) -> Result<Vector<Rat>> {
        let mut out = Vector::zero();
        for (e, x) in &self.coeffs {
            out.add_term(*e, x.as_rat().ok_or(Error::PolynomialEntries)?);
        }
        Ok(out)
    }

    /// Dense coordinates in degree `d` of `space`.
    pub fn dense_in(&self, space: &GradedSpace, d: i32) -> Vec<R> {
        space.basis_in(d).map(|e| self.get(e)).collect()
    }

    pub fn from_dense(d: i32, coords: &[R]) -> Self {
        Self::from_terms(
            coords
                .iter()
                .enumerate()
                .map(|(i, x)| (BasisElem::new(d, i), x.clone())),
        )
    }
}

impl Vector<Poly> {
    pub fn eval(&self, point: &[Rat]) -> Result<Vector<Rat>> {
        let mut out = Vector::zero();
        for (e, x) in &self.coeffs {
            out.add_term(*e, x.eval(point)?);
        }
        Ok(out)
    }
}

impl<R: fmt::Debug> fmt::Debug for Vector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

/// A linear map of fixed degree between graded spaces. Block `k` maps the
/// degree-`k` part of the source to the degree-`k + degree` part of the
/// target; absent blocks are zero.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedMap<R> {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    blocks: BTreeMap<i32, Matrix<R>>,
}

impl<R: Scalar> GradedMap<R> {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space
            .degrees()
            .map(|d| (d, Matrix::identity(space.dim(d))))
            .collect();
        Self {
            source: space.clone(),
            target: space.clone(),
            degree: 0,
            blocks,
        }
    }

    /// Builds the map from the image of each source basis element.
    pub fn from_images(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        image: impl Fn(BasisElem) -> Vector<R>,
    ) -> Result<Self> {
        let mut out = Self::zero(source, target, degree);
        for d in source.degrees() {
            let rows = target.dim(d + degree);
            let mut m = Matrix::zeros(rows, source.dim(d));
            for e in source.basis_in(d) {
                let img = image(e);
                for (t, c) in img.iter() {
                    if t.degree != d + degree || !target.contains(*t) {
                        return Err(Error::DegreeRule(format!(
                            "image of {e:?} has component {t:?} outside degree {}",
                            d + degree
                        )));
                    }
                    m.set(t.index, e.index, c.clone());
                }
            }
            out.set_block(d, m)?;
        }
        Ok(out)
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

    pub fn set_block(&mut self, k: i32, m: Matrix<R>) -> Result<()> {
        let (r, c) = (self.target.dim(k + self.degree), self.source.dim(k));
        if m.rows() != r || m.cols() != c {
            return Err(Error::ShapeMismatch(format!(
                "block at degree {k} must be {r}x{c}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.is_zero() {
            self.blocks.remove(&k);
        } else {
            self.blocks.insert(k, m);
        }
        Ok(())
    }

    /// Block at source degree `k` (zero matrix of the right shape if absent).
    pub fn block(&self, k: i32) -> Matrix<R> {
        self.blocks.get(&k).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.target.dim(k + self.degree), self.source.dim(k))
        })
    }

    pub fn image(&self, e: BasisElem) -> Vector<R> {
        match self.blocks.get(&e.degree) {
            None => Vector::zero(),
            Some(m) => Vector::from_dense(e.degree + self.degree, &m.column(e.index)),
        }
    }

    pub fn apply(&self, v: &Vector<R>) -> Vector<R> {
        let mut out = Vector::zero();
        for (e, c) in v.iter() {
            out.add_scaled(&self.image(*e), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::SpaceMismatch("composition of incompatible maps".into()));
        }
        let mut out = Self::zero(&other.source, &self.target, self.degree + other.degree);
        for d in other.source.degrees() {
            let m = self.block(d + other.degree).mul(&other.block(d))?;
            out.set_block(d, m)?;
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::SpaceMismatch("maps of different shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for d in self.source.degrees() {
            out.set_block(d, self.block(d).add(&other.block(d))?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = self.clone();
        for m in out.blocks.values_mut() {
            *m = m.scale(r);
        }
        out.blocks.retain(|_, m| !m.is_zero());
        out
    }

    pub fn to_rat(&self) -> Result<GradedMap<Rat>> {
        let mut blocks = BTreeMap::new();
        for (k, m) in &self.blocks {
            blocks.insert(*k, m.to_rat()?);
        }
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks,
        })
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S + Copy) -> GradedMap<S> {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks: self.blocks.iter().map(|(k, m)| (*k, m.map(f))).collect(),
        }
    }
}

impl GradedMap<Rat> {
    /// Applies a rational map to a vector with coefficients in any ring.
    pub fn apply_to<S: Scalar>(&self, v: &Vector<S>) -> Vector<S> {
        let mut out = Vector::zero();
        for (e, c) in v.iter() {
            for (t, x) in self.image(*e).iter() {
                out.add_term(*t, c.scale(x));
            }
        }
        out
    }

    pub fn lift<S: Scalar>(&self) -> GradedMap<S> {
        self.map_coeffs(|x| S::from_rat(x))
    }

    /// Degrees `k` (of the source) where the block is invertible.
    pub fn is_iso_at(&self, k: i32) -> bool {
        let m = self.block(k);
        m.rows() == m.cols() && m.rank() == m.rows()
    }

    pub fn is_epi_at(&self, k: i32) -> bool {
        let m = self.block(k);
        m.rank() == m.rows()
    }

    /// Degrees `k` of the target where the map is surjective.
    pub fn is_epi_onto(&self, target_degree: i32) -> bool {
        self.is_epi_at(target_degree - self.degree)
    }
}

impl GradedMap<Poly> {
    pub fn eval(&self, point: &[Rat]) -> Result<GradedMap<Rat>> {
        let mut blocks = BTreeMap::new();
        for (k, m) in &self.blocks {
            let e = m.eval(point)?;
            if !e.is_zero() {
                blocks.insert(*k, e);
            }
        }
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks,
        })
    }
}

/// Kernel of a rational graded map, as a subspace with its inclusion. Each
/// kernel basis vector is labelled after the free column it is normalized on.
pub fn kernel_subspace(m: &GradedMap<Rat>) -> Result<(GradedSpace, GradedMap<Rat>)> {
    let src = m.source();
    let mut k = GradedSpace::new();
    let mut cols: Vec<(i32, Vec<Rat>)> = Vec::new();
    for d in src.degrees() {
        let block = m.block(d);
        let ker = block.kernel();
        let piv = block.rref().pivots;
        let free: Vec<usize> = (0..block.cols()).filter(|c| !piv.contains(c)).collect();
        for (j, &f) in free.iter().enumerate() {
            k.push(d, src.labels_in(d)[f].clone())?;
            cols.push((d, ker.column(j)));
        }
    }
    let mut incl = GradedMap::zero(&k, src, 0);
    for d in k.degrees() {
        let vs: Vec<&Vec<Rat>> = cols.iter().filter(|(dd, _)| *dd == d).map(|(_, v)| v).collect();
        let mat = Matrix::from_fn(src.dim(d), vs.len(), |i, j| vs[j][i].clone());
        incl.set_block(d, mat)?;
    }
    Ok((k, incl))
}

/// A right inverse `χ` with `m ∘ χ = id`, block by block.
pub fn split_epi_section(m: &GradedMap<Rat>) -> Result<GradedMap<Rat>> {
    let mut out = GradedMap::zero(m.target(), m.source(), -m.degree());
    for d in m.target().degrees() {
        let block = m.block(d - m.degree());
        let inv = block.right_inverse().ok_or_else(|| Error::NotSurjective {
            degree: d,
            deficit: block.rows() - block.rank(),
        })?;
        out.set_block(d, inv)?;
    }
    Ok(out)
}

/// A left inverse `θ` with `θ ∘ m = id`, block by block.
pub fn split_mono_retraction(m: &GradedMap<Rat>) -> Result<GradedMap<Rat>> {
    let mut out = GradedMap::zero(m.target(), m.source(), -m.degree());
    for d in m.source().degrees() {
        let block = m.block(d);
        let inv = block
            .left_inverse()
            .ok_or(Error::NotInjective { degree: d })?;
        out.set_block(d + m.degree(), inv)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::int;

    fn space(parts: &[(i32, &[&str])]) -> GradedSpace {
        GradedSpace::from_labels(parts.iter().map(|(d, l)| (*d, l.to_vec()))).unwrap()
    }

    #[test]
    fn identity_section_and_retraction() {
        let s = space(&[(1, &["a", "b"]), (2, &["c"])]);
        let id = GradedMap::<Rat>::identity(&s);
        assert_eq!(split_epi_section(&id).unwrap(), id);
        assert_eq!(split_mono_retraction(&id).unwrap(), id);
    }

    #[test]
    fn projection_section_first_pivot() {
        let s = space(&[(1, &["a", "b"])]);
        let t = space(&[(1, &["c"])]);
        let m = GradedMap::from_images(&s, &t, 0, |e| {
            if e.index == 0 {
                Vector::basis(BasisElem::new(1, 0))
            } else {
                Vector::zero()
            }
        })
        .unwrap();
        let chi = split_epi_section(&m).unwrap();
        assert_eq!(chi.image(BasisElem::new(1, 0)), Vector::basis(BasisElem::new(1, 0)));
        assert!(m.compose(&chi).unwrap() == GradedMap::identity(&t));
    }

    #[test]
    fn zero_onto_zero_has_empty_section() {
        let s = space(&[(1, &["a"])]);
        let t = GradedSpace::new();
        let m = GradedMap::<Rat>::zero(&s, &t, 0);
        let chi = split_epi_section(&m).unwrap();
        assert!(chi.is_zero());
        assert_eq!(chi.source(), &t);
    }

    #[test]
    fn not_surjective_reports_degree() {
        let s = space(&[(1, &["a"])]);
        let t = space(&[(1, &["b", "c"])]);
        let m = GradedMap::from_images(&s, &t, 0, |_| Vector::basis(BasisElem::new(1, 0))).unwrap();
        assert_eq!(
            split_epi_section(&m),
            Err(Error::NotSurjective { degree: 1, deficit: 1 })
        );
        let z = GradedMap::<Rat>::zero(&t, &s, 0);
        assert_eq!(split_mono_retraction(&z), Err(Error::NotInjective { degree: 1 }));
    }

    #[test]
    fn diagonal_inclusion_retracts_to_first_coordinate() {
        let s = space(&[(1, &["d"])]);
        let t = space(&[(1, &["x", "y"])]);
        let m = GradedMap::from_images(&s, &t, 0, |_| {
            Vector::from_terms([(BasisElem::new(1, 0), int(1)), (BasisElem::new(1, 1), int(1))])
        })
        .unwrap();
        let th = split_mono_retraction(&m).unwrap();
        assert_eq!(th.block(1).to_rows(), vec![vec![int(1), int(0)]]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let s = space(&[(1, &["a", "b"]), (3, &["c"])]);
        let (k, _) = kernel_subspace(&GradedMap::identity(&s)).unwrap();
        assert!(k.is_zero());
        let (k, j) = kernel_subspace(&GradedMap::zero(&s, &s, 0)).unwrap();
        assert_eq!(k, s);
        assert_eq!(j, GradedMap::identity(&s));
    }
}
