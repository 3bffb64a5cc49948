//! Cochain complexes, their cohomology, and quasi-isomorphism tests.

use std::collections::BTreeMap;

use super::graded::{GradedMap, GradedSpace, Vector};
use super::matrix::Matrix;
use super::rat::Rat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct Complex<R> {
    space: GradedSpace,
    differential: GradedMap<R>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CohomologyGroup {
    pub dim: usize,
    /// Cocycles whose classes form a basis.
    pub representatives: Vec<Vector<Rat>>,
}

impl<R: Scalar> Complex<R> {
    /// Checks that `differential` is a degree +1 endomorphism squaring to zero.
    pub fn new(differential: GradedMap<R>) -> Result<Self> {
        if differential.degree() != 1 || differential.source() != differential.target() {
            return Err(Error::ShapeMismatch(
                "a differential is a degree 1 endomorphism".into(),
            ));
        }
        let sq = differential.compose(&differential)?;
        if let Some(d) = sq.source().degrees().find(|d| !sq.block(*d).is_zero()) {
            return Err(Error::NotAComplex { degree: d });
        }
        Ok(Self {
            space: differential.source().clone(),
            differential,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap<R> {
        &self.differential
    }

    pub fn to_rat(&self) -> Result<Complex<Rat>> {
        Ok(Complex {
            space: self.space.clone(),
            differential: self.differential.to_rat()?,
        })
    }

    /// Cohomology in every degree where the space is nonzero.
    pub fn cohomology(&self) -> Result<BTreeMap<i32, CohomologyGroup>> {
        let c = self.to_rat()?;
        let degs: Vec<i32> = c.space.degrees().collect();
        degs.into_iter()
            .map(|d| Ok((d, c.cohomology_at(d))))
            .collect()
    }
}

impl Complex<Rat> {
    /// Dense differential out of degree `d`.
    fn d_out(&self, d: i32) -> Matrix<Rat> {
        self.differential.block(d)
    }

    /// Dense differential into degree `d`.
    fn d_in(&self, d: i32) -> Matrix<Rat> {
        self.differential.block(d - 1)
    }

    pub fn cohomology_at(&self, d: i32) -> CohomologyGroup {
        let z = self.d_out(d).kernel();
        let b = self.d_in(d);
        let rb = b.rank();
        let stacked = b.hstack(&z).expect("same row count");
        let piv = stacked.rref().pivots;
        let representatives: Vec<Vector<Rat>> = piv
            .iter()
            .filter(|p| **p >= b.cols())
            .map(|p| Vector::from_dense(d, &stacked.column(*p)))
            .collect();
        debug_assert_eq!(representatives.len(), z.cols() - rb);
        CohomologyGroup {
            dim: representatives.len(),
            representatives,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.space.degrees().all(|d| self.cohomology_at(d).dim == 0)
    }
}

/// `f ∘ d_A = d_B ∘ f` for a degree 0 map `f: A → B`.
pub fn is_chain_map(f: &GradedMap<Rat>, a: &Complex<Rat>, b: &Complex<Rat>) -> Result<bool> {
    let lhs = f.compose(a.differential())?;
    let rhs = b.differential().compose(f)?;
    Ok(lhs == rhs)
}

/// Rank of the map induced on cohomology in degree `d`.
pub fn induced_rank(f: &GradedMap<Rat>, a: &Complex<Rat>, b: &Complex<Rat>, d: i32) -> usize {
    let reps = a.cohomology_at(d).representatives;
    let bd = b.d_in(d);
    let imgs = Matrix::from_fn(b.space().dim(d), reps.len(), |i, j| {
        f.apply(&reps[j]).dense_in(b.space(), d)[i].clone()
    });
    bd.hstack(&imgs).expect("same row count").rank() - bd.rank()
}

/// Degrees `n` where the mapping cone `A[1] ⊕ B` of `f` has cohomology.
/// An empty result means `f` is a quasi-isomorphism.
pub fn cone_defects(f: &GradedMap<Rat>, a: &Complex<Rat>, b: &Complex<Rat>) -> Vec<i32> {
    let lo = a.space().min_degree().map(|x| x - 1).into_iter();
    let hi = a.space().max_degree().map(|x| x - 1).into_iter();
    let degs: Vec<i32> = lo
        .chain(hi)
        .chain(b.space().min_degree())
        .chain(b.space().max_degree())
        .collect();
    let (Some(min), Some(max)) = (degs.iter().min(), degs.iter().max()) else {
        return Vec::new();
    };
    // Differential of the cone out of degree n: (a, b) ↦ (−d_A a, f a + d_B b).
    let cone_d = |n: i32| -> Matrix<Rat> {
        let (an, bn) = (a.space().dim(n + 1), b.space().dim(n));
        let (an1, bn1) = (a.space().dim(n + 2), b.space().dim(n + 1));
        let da = a.d_out(n + 1);
        let db = b.d_out(n);
        let fa = f.block(n + 1);
        Matrix::from_fn(an1 + bn1, an + bn, |i, j| match (i < an1, j < an) {
            (true, true) => -da.get(i, j).clone(),
            (true, false) => Rat::from_integer(0.into()),
            (false, true) => fa.get(i - an1, j).clone(),
            (false, false) => db.get(i - an1, j - an).clone(),
        })
    };
    let mut out = Vec::new();
    for n in (*min - 1)..=(*max + 1) {
        let dim = a.space().dim(n + 1) + b.space().dim(n);
        let out_rank = cone_d(n).rank();
        let in_rank = cone_d(n - 1).rank();
        if dim != out_rank + in_rank {
            out.push(n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::graded::BasisElem;
    use crate::linalg::rat::int;

    fn space(parts: &[(i32, &[&str])]) -> GradedSpace {
        GradedSpace::from_labels(parts.iter().map(|(d, l)| (*d, l.to_vec()))).unwrap()
    }

    fn two_term(c: i64) -> Complex<Rat> {
        let s = space(&[(0, &["a"]), (1, &["b"])]);
        let d = GradedMap::from_images(&s, &s, 1, |e| {
            if e.degree == 0 {
                Vector::term(BasisElem::new(1, 0), int(c))
            } else {
                Vector::zero()
            }
        })
        .unwrap();
        Complex::new(d).unwrap()
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let h = two_term(1).cohomology().unwrap();
        assert!(h.values().all(|g| g.dim == 0));
    }

    #[test]
    fn zero_differential_keeps_everything() {
        let s = space(&[(1, &["x", "y"])]);
        let c = Complex::new(GradedMap::<Rat>::zero(&s, &s, 1)).unwrap();
        assert_eq!(c.cohomology().unwrap()[&1].dim, 2);
    }

    #[test]
    fn rejects_nonzero_square() {
        let s = space(&[(0, &["a"]), (1, &["b"]), (2, &["c"])]);
        let d = GradedMap::from_images(&s, &s, 1, |e| match e.degree {
            0 => Vector::<Rat>::basis(BasisElem::new(1, 0)),
            1 => Vector::basis(BasisElem::new(2, 0)),
            _ => Vector::zero(),
        })
        .unwrap();
        assert_eq!(Complex::new(d), Err(Error::NotAComplex { degree: 0 }));
    }

    #[test]
    fn cone_detects_quasi_isomorphism() {
        let a = two_term(0);
        let b = two_term(0);
        let id = GradedMap::identity(a.space());
        assert!(is_chain_map(&id, &a, &b).unwrap());
        assert!(cone_defects(&id, &a, &b).is_empty());
        assert_eq!(induced_rank(&id, &a, &b, 0), 1);
        let zero = GradedMap::zero(a.space(), b.space(), 0);
        assert_eq!(cone_defects(&zero, &a, &b), vec![-1, 0, 1]);
        let acyc = two_term(3);
        let to_acyc = GradedMap::zero(acyc.space(), acyc.space(), 0);
        assert!(cone_defects(&to_acyc, &acyc, &acyc).is_empty());
    }
}
