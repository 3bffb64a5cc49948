//! Curved L∞[1]-algebras on positively graded spaces, and their morphisms.
//!
//! Conventions: every `λ_k` has degree +1 and is stored on canonical words.
//! The coderivation of `λ` is `D̂(x₁⊙…⊙x_k) = Σ ε λ(x_S) ⊙ x_{S^c}` over
//! unshuffles, including `S = ∅` (curvature insertion). The relations are
//! `λ ∘ D̂ = 0`, and `φ` is a morphism when `φ ∘ D̂ = λ' ∘ φ̂` with
//! `φ̂(x₁⊙…⊙x_k) = Σ ε φ(x_{B₁})⊙…⊙φ(x_{B_p})` over set partitions.

use crate::error::{Error, Result};
use crate::linalg::{cone_defects, Complex, GradedMap, GradedSpace, Rat, Scalar, Vector};
use crate::multilinear::Multilinear;
use crate::sym::{all_block_partitions, unshuffles, words, SymElem, SymWord};

#[derive(Clone, PartialEq, Debug)]
pub struct CurvedStructure<R> {
    ops: Multilinear<R>,
}

/// A word on which an identity fails, with the nonzero defect.
#[derive(Clone, PartialEq, Debug)]
pub struct Defect<R> {
    pub word: SymWord,
    pub defect: Vector<R>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CheckReport<R> {
    /// Number of words examined.
    pub checked: usize,
    pub failure: Option<Defect<R>>,
}

impl<R> CheckReport<R> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn check_positive(space: &GradedSpace) -> Result<()> {
    match space.min_degree() {
        Some(d) if d < 1 => Err(Error::InvalidStructure(format!(
            "space has a component in degree {d}; amplitude must be positive"
        ))),
        _ => Ok(()),
    }
}

impl<R: Scalar> CurvedStructure<R> {
    pub fn new(ops: Multilinear<R>) -> Result<Self> {
        check_positive(ops.source())?;
        if ops.source() != ops.target() || ops.degree() != 1 {
            return Err(Error::InvalidStructure(
                "operations must be degree 1 maps Sym(L) → L".into(),
            ));
        }
        Ok(Self { ops })
    }

    pub fn zero(space: &GradedSpace) -> Result<Self> {
        Self::new(Multilinear::zero(space, space, 1))
    }

    /// The abelian structure with only `λ₁ = d`.
    pub fn from_differential(d: &GradedMap<R>) -> Result<Self> {
        Self::new(Multilinear::from_linear(d))
    }

    pub fn space(&self) -> &GradedSpace {
        self.ops.source()
    }

    pub fn ops(&self) -> &Multilinear<R> {
        &self.ops
    }

    pub fn curvature(&self) -> Vector<R> {
        self.ops.eval_word(&SymWord::empty())
    }

    pub fn lambda1(&self) -> GradedMap<R> {
        self.ops.linear()
    }

    /// Top degree `n` of the amplitude `[1, n]`.
    pub fn top_degree(&self) -> i32 {
        self.space().max_degree().unwrap_or(0)
    }

    /// `D̂(w)`.
    pub fn coderivation(&self, w: &SymWord) -> SymElem<R> {
        coderivation_of(&self.ops, w)
    }

    pub fn coderivation_elem(&self, x: &SymElem<R>) -> SymElem<R> {
        let mut out = SymElem::zero();
        for (w, c) in x.iter() {
            out.add_scaled(&self.coderivation(w), c);
        }
        out
    }

    /// Words on which the relations are nontrivial: output degree `|w| + 2`
    /// must be at most the top degree.
    pub fn relation_words(&self) -> Vec<SymWord> {
        let n = self.top_degree();
        words(self.space(), (n - 1).max(0) as usize, n - 2)
    }

    /// Exhaustive check of `λ(D̂ w) = 0`.
    pub fn check_relations(&self) -> CheckReport<R> {
        let ws = self.relation_words();
        let checked = ws.len();
        let failure = ws.into_iter().find_map(|w| {
            let d = self.ops.eval(&self.coderivation(&w));
            (!d.is_zero()).then_some(Defect { word: w, defect: d })
        });
        CheckReport { checked, failure }
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> CurvedStructure<S> {
        CurvedStructure {
            ops: self.ops.map_coeffs(f),
        }
    }

    pub fn to_rat(&self) -> Result<CurvedStructure<Rat>> {
        Ok(CurvedStructure {
            ops: self.ops.to_rat()?,
        })
    }

    /// `(L, λ₁)`, defined only when the curvature vanishes.
    pub fn tangent_complex(&self) -> Result<Complex<R>> {
        if !self.curvature().is_zero() {
            return Err(Error::NotClassical);
        }
        Complex::new(self.lambda1())
    }
}

pub(crate) fn coderivation_of<R: Scalar>(ops: &Multilinear<R>, w: &SymWord) -> SymElem<R> {
    let mut out = SymElem::zero();
    for i in 0..=w.len() {
        for u in unshuffles(w, i) {
            let v = ops.eval_word(&u.left);
            if v.is_zero() {
                continue;
            }
            let c = R::from_rat(&Rat::from_integer(u.coeff.into()));
            let prod = SymElem::from_vector(&v).mul(&SymElem::word(u.right));
            out.add_scaled(&prod, &c);
        }
    }
    out
}

/// `x̂(w)` for a degree-0 table `x`: the coalgebra map it generates.
pub fn hat<R: Scalar>(comps: &Multilinear<R>, w: &SymWord) -> SymElem<R> {
    let mut out = SymElem::zero();
    'parts: for p in all_block_partitions(w) {
        let mut prod = SymElem::one();
        for b in &p.blocks {
            let v = comps.eval_word(b);
            if v.is_zero() {
                continue 'parts;
            }
            prod = prod.mul(&SymElem::from_vector(&v));
            if prod.is_zero() {
                continue 'parts;
            }
        }
        out.add_scaled(&prod, &R::from_rat(&Rat::from_integer(p.coeff.into())));
    }
    out
}

pub fn hat_elem<R: Scalar>(comps: &Multilinear<R>, x: &SymElem<R>) -> SymElem<R> {
    let mut out = SymElem::zero();
    for (w, c) in x.iter() {
        out.add_scaled(&hat(comps, w), c);
    }
    out
}

/// A morphism of curved L∞[1]-algebras: degree-0 components `φ_k`, `k ≥ 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct Morphism<R> {
    source: CurvedStructure<R>,
    target: CurvedStructure<R>,
    comps: Multilinear<R>,
}

impl<R: Scalar> Morphism<R> {
    pub fn new(
        source: CurvedStructure<R>,
        target: CurvedStructure<R>,
        comps: Multilinear<R>,
    ) -> Result<Self> {
        if comps.source() != source.space() || comps.target() != target.space() {
            return Err(Error::SpaceMismatch("components do not match the structures".into()));
        }
        if comps.degree() != 0 {
            return Err(Error::DegreeRule("morphism components have degree 0".into()));
        }
        if !comps.eval_word(&SymWord::empty()).is_zero() {
            return Err(Error::DegreeRule("morphisms have no arity-0 component".into()));
        }
        Ok(Self {
            source,
            target,
            comps,
        })
    }

    pub fn identity(s: &CurvedStructure<R>) -> Self {
        let id = GradedMap::identity(s.space());
        Self::linear(s.clone(), s.clone(), &id).expect("identity has matching spaces")
    }

    pub fn linear(
        source: CurvedStructure<R>,
        target: CurvedStructure<R>,
        phi1: &GradedMap<R>,
    ) -> Result<Self> {
        Self::new(source, target, Multilinear::from_linear(phi1))
    }

    pub fn source(&self) -> &CurvedStructure<R> {
        &self.source
    }

    pub fn target(&self) -> &CurvedStructure<R> {
        &self.target
    }

    pub fn comps(&self) -> &Multilinear<R> {
        &self.comps
    }

    pub fn phi1(&self) -> GradedMap<R> {
        self.comps.linear()
    }

    pub fn is_linear(&self) -> bool {
        self.comps.iter().all(|(w, _)| w.len() == 1)
    }

    pub fn hat(&self, w: &SymWord) -> SymElem<R> {
        hat(&self.comps, w)
    }

    /// Words on which the morphism identity is nontrivial.
    pub fn morphism_words(&self) -> Vec<SymWord> {
        let bound = self.target.top_degree() - 1;
        words(self.source.space(), bound.max(0) as usize, bound)
    }

    /// Exhaustive check of `φ(D̂ w) = λ'(φ̂ w)`.
    pub fn check(&self) -> CheckReport<R> {
        let ws = self.morphism_words();
        let checked = ws.len();
        let failure = ws.into_iter().find_map(|w| {
            let lhs = self.comps.eval(&self.source.coderivation(&w));
            let rhs = self.target.ops().eval(&self.hat(&w));
            let d = lhs.sub(&rhs);
            (!d.is_zero()).then_some(Defect { word: w, defect: d })
        });
        CheckReport { checked, failure }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism<R>) -> Result<Morphism<R>> {
        if first.target.space() != self.source.space() {
            return Err(Error::SpaceMismatch("composition of incompatible morphisms".into()));
        }
        let comps = compose_tables(&self.comps, &first.comps)?;
        Morphism::new(first.source.clone(), self.target.clone(), comps)
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S + Copy) -> Morphism<S> {
        Morphism {
            source: self.source.map_coeffs(f),
            target: self.target.map_coeffs(f),
            comps: self.comps.map_coeffs(f),
        }
    }
}

/// `(b ∘ a)(w) = b(â(w))` for degree-0 tables.
pub fn compose_tables<R: Scalar>(b: &Multilinear<R>, a: &Multilinear<R>) -> Result<Multilinear<R>> {
    if a.target() != b.source() {
        return Err(Error::SpaceMismatch("composition of incompatible tables".into()));
    }
    let mut out = Multilinear::zero(a.source(), b.target(), a.degree() + b.degree());
    let bound = out.word_degree_bound();
    for w in words(a.source(), bound.max(0) as usize, bound) {
        if w.is_empty() {
            continue;
        }
        out.set(w.clone(), b.eval(&hat(a, &w)))?;
    }
    Ok(out)
}

/// Inverse `χ` of a degree-0 endomorphism-shaped table `ψ` with invertible
/// linear part, so that `χ̂ ∘ ψ̂ = id`.
pub fn invert_table<R: Scalar>(psi: &Multilinear<R>) -> Result<Multilinear<R>> {
    let lin = psi.linear().to_rat()?;
    let mut inv1 = GradedMap::zero(lin.target(), lin.source(), 0);
    for d in lin.source().degrees() {
        let m = lin
            .block(d)
            .inverse()
            .map_err(|_| Error::NotInvertible(format!("linear part is singular in degree {d}")))?;
        inv1.set_block(d, m)?;
    }
    let inv1: GradedMap<R> = inv1.lift();
    let mut chi = Multilinear::from_linear(&inv1);
    let bound = chi.word_degree_bound();
    let mut ws = words(psi.target(), bound.max(0) as usize, bound);
    ws.retain(|w| w.len() >= 2);
    for y in ws {
        let mut x = SymElem::one();
        for e in y.elems() {
            x = x.mul(&SymElem::from_vector(&inv1.image(*e)));
        }
        let v = chi.eval(&hat_elem(psi, &x));
        chi.set(y, v.scale(&R::one().neg()))?;
    }
    Ok(chi)
}

/// The structure `λ'` on the same space for which `ψ: (L, λ') → (L, λ)` is a
/// morphism: `λ' = ψ⁻¹ ∘ D̂_λ ∘ ψ̂`.
pub fn gauge_conjugate<R: Scalar>(
    s: &CurvedStructure<R>,
    psi: &Multilinear<R>,
) -> Result<CurvedStructure<R>> {
    if psi.source() != s.space() || psi.target() != s.space() || psi.degree() != 0 {
        return Err(Error::SpaceMismatch("gauge must be a degree 0 endomorphism table".into()));
    }
    let chi = invert_table(psi)?;
    let mut ops = Multilinear::zero(s.space(), s.space(), 1);
    for w in words(s.space(), s.top_degree().max(0) as usize, s.top_degree() - 1) {
        let v = chi.eval(&s.coderivation_elem(&hat(psi, &w)));
        ops.set(w, v)?;
    }
    CurvedStructure::new(ops)
}

#[derive(Clone, PartialEq, Debug)]
pub struct EtaleReport {
    pub etale: bool,
    /// Degrees where the mapping cone of `φ₁` has cohomology.
    pub cone_defects: Vec<i32>,
}

/// Whether `φ₁` is a quasi-isomorphism of tangent complexes.
pub fn etale_pair(m: &Morphism<Rat>) -> Result<EtaleReport> {
    let a = m.source().tangent_complex()?;
    let b = m.target().tangent_complex()?;
    let defects = cone_defects(&m.phi1(), &a, &b);
    Ok(EtaleReport {
        etale: defects.is_empty(),
        cone_defects: defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, BasisElem};

    fn e1() -> CurvedStructure<Rat> {
        let s = GradedSpace::from_labels([(1, vec!["e1"]), (2, vec!["e2"])]).unwrap();
        let mut ops = Multilinear::zero(&s, &s, 1);
        ops.set(
            SymWord::single(BasisElem::new(1, 0)),
            Vector::basis(BasisElem::new(2, 0)),
        )
        .unwrap();
        CurvedStructure::new(ops).unwrap()
    }

    #[test]
    fn e1_relations_pass_and_bogus_curvature_fails() {
        assert!(e1().check_relations().passed());
        let mut ops = e1().ops().clone();
        ops.set(SymWord::empty(), Vector::basis(BasisElem::new(1, 0))).unwrap();
        let r = CurvedStructure::new(ops).unwrap().check_relations();
        let f = r.failure.unwrap();
        assert!(f.word.is_empty());
        assert_eq!(f.defect, Vector::basis(BasisElem::new(2, 0)));
    }

    #[test]
    fn degree_rule_is_enforced() {
        let s = e1().space().clone();
        let mut ops = Multilinear::<Rat>::zero(&s, &s, 1);
        let err = ops.set(
            SymWord::single(BasisElem::new(1, 0)),
            Vector::basis(BasisElem::new(1, 0)),
        );
        assert!(matches!(err, Err(Error::DegreeRule(_))));
    }

    #[test]
    fn identity_is_a_morphism_and_etale() {
        let id = Morphism::identity(&e1());
        assert!(id.check().passed());
        assert!(etale_pair(&id).unwrap().etale);
    }

    #[test]
    fn scaling_gauge_keeps_e1() {
        let s = e1();
        let psi = Multilinear::from_linear(&GradedMap::identity(s.space()).scale(&int(2)));
        let t = gauge_conjugate(&s, &psi).unwrap();
        assert_eq!(t, s);
    }
}
