//! The Chevalley–Eilenberg algebra `(Sym L∨, Q)` of a structure.
//!
//! Generators `ξ_e` are dual to basis elements `e` and have degree `−|e|`.
//! Elements are [`SymElem`]s over the dual space, so a monomial is a
//! canonical word of generators. With the pairing `⟨ξ_{e₁}⋯ξ_{e_k}, e₁⊙…⊙e_k⟩
//! = Π m!`, the derivation `Q` is the transpose of the coderivation `D̂`:
//! `⟨Qα, w⟩ = ⟨α, D̂w⟩`. On generators this reads
//! `Q(ξ_b) = Σ_w λ(w)_b / Π m!(w) · ξ^w`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, fmt_rat, induced_rank, int, BasisElem, CohomologyGroup, Complex, GradedMap,
    GradedSpace, Poly, PolyRing, Rat, Scalar, Vector,
};
use crate::point::{CurvedStructure, Morphism};
use crate::sym::{canonicalize, unshuffles, words, SymElem, SymWord};
use crate::transfer::TransferResult;

/// The dual space, with labels `ξ<label>`.
pub fn dual_space(l: &GradedSpace) -> GradedSpace {
    let mut d = GradedSpace::new();
    let mut degs: Vec<i32> = l.degrees().collect();
    degs.reverse();
    for k in degs {
        for lab in l.labels_in(k) {
            d.push(-k, format!("ξ{lab}")).expect("labels are distinct");
        }
    }
    d
}

/// `ξ^w`, the ordered product of the generators dual to the letters of `w`,
/// as a canonical monomial with its sign.
pub fn dual_word(w: &SymWord) -> (SymWord, i64) {
    let ds: Vec<BasisElem> = w.elems().iter().map(BasisElem::dual).collect();
    canonicalize(&ds).expect("duals of a nonzero word do not repeat odd letters")
}

fn rat_coeff<R: Scalar>(n: i64) -> R {
    R::from_rat(&int(n))
}

/// `ξ^w / Π m!(w)`, the functional dual to the primal word `w`.
fn dual_functional<R: Scalar>(w: &SymWord) -> SymElem<R> {
    let (m, s) = dual_word(w);
    SymElem::term(m, R::from_rat(&(int(s) / w.symmetry_factor())))
}

/// `⟨α, x⟩` for `α` in the algebra and `x` in `Sym L`.
pub fn pairing<R: Scalar>(alpha: &SymElem<R>, x: &SymElem<R>) -> R {
    let mut acc = R::zero();
    for (w, c) in x.iter() {
        let (m, s) = dual_word(w);
        let a = alpha.get(&m);
        if a.is_zero() {
            continue;
        }
        let f = R::from_rat(&(int(s) * w.symmetry_factor()));
        acc = acc.add(&a.mul(c).mul(&f));
    }
    acc
}

/// A derivation given on generators, extended by the Leibniz rule with the
/// sign `(−1)^{|α|}` for odd derivations.
fn derivation<R: Scalar>(
    on_gen: impl Fn(BasisElem) -> SymElem<R>,
    odd: bool,
    x: &SymElem<R>,
) -> SymElem<R> {
    let mut out = SymElem::zero();
    for (m, c) in x.iter() {
        let es = m.elems();
        for i in 0..es.len() {
            let img = on_gen(es[i]);
            if img.is_zero() {
                continue;
            }
            let prefix = SymWord::from_sorted(es[..i].to_vec()).expect("subword is canonical");
            let suffix = SymWord::from_sorted(es[i + 1..].to_vec()).expect("subword is canonical");
            let term = SymElem::word(prefix.clone())
                .mul(&img)
                .mul(&SymElem::word(suffix));
            let sign = if odd && prefix.is_odd() { -1 } else { 1 };
            out.add_scaled(&term, &c.mul(&rat_coeff(sign)));
        }
    }
    out
}

/// An algebra morphism given on generators.
fn algebra_map<R: Scalar>(on_gen: impl Fn(BasisElem) -> SymElem<R>, x: &SymElem<R>) -> SymElem<R> {
    let mut out = SymElem::zero();
    for (m, c) in x.iter() {
        let mut t = SymElem::one();
        for e in m.elems() {
            t = t.mul(&on_gen(*e));
            if t.is_zero() {
                break;
            }
        }
        out.add_scaled(&t, c);
    }
    out
}

/// `ξ_b ↦ Σ_c f(e_c)_b ξ_c`, the transpose of a linear map on generators.
fn transpose_on_gen<R: Scalar>(f: &GradedMap<R>, g: BasisElem) -> SymElem<R> {
    let b = g.dual();
    let mut out = SymElem::zero();
    for c in f.source().basis_in(b.degree - f.degree()) {
        let x = f.image(c).get(b);
        if !x.is_zero() {
            out.add_term(SymWord::single(c.dual()), x);
        }
    }
    out
}

#[derive(Clone, PartialEq, Debug)]
pub struct CePresentation<R> {
    space: GradedSpace,
    dual: GradedSpace,
    q: BTreeMap<BasisElem, SymElem<R>>,
}

pub fn build_ce<R: Scalar>(s: &CurvedStructure<R>) -> CePresentation<R> {
    let space = s.space().clone();
    let dual = dual_space(&space);
    let mut q: BTreeMap<BasisElem, SymElem<R>> = BTreeMap::new();
    for (w, v) in s.ops().iter() {
        let f = dual_functional::<R>(w);
        for (b, c) in v.iter() {
            q.entry(b.dual()).or_default().add_scaled(&f, c);
        }
    }
    q.retain(|_, v| !v.is_zero());
    CePresentation { space, dual, q }
}

#[derive(Clone, PartialEq, Debug)]
pub struct QSquareReport<R> {
    pub checked: usize,
    /// A generator with `Q²ξ ≠ 0`, and the value.
    pub failure: Option<(BasisElem, SymElem<R>)>,
}

impl<R> QSquareReport<R> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl<R: Scalar> CePresentation<R> {
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dual(&self) -> &GradedSpace {
        &self.dual
    }

    pub fn generators(&self) -> impl Iterator<Item = BasisElem> + '_ {
        self.dual.basis()
    }

    pub fn q_gen(&self, g: BasisElem) -> SymElem<R> {
        self.q.get(&g).cloned().unwrap_or_default()
    }

    pub fn q(&self, x: &SymElem<R>) -> SymElem<R> {
        derivation(|g| self.q_gen(g), true, x)
    }

    /// The weight-preserving part `Q₁` of `Q`.
    pub fn q_linear(&self, x: &SymElem<R>) -> SymElem<R> {
        derivation(|g| self.q_gen(g).weight_part(1), true, x)
    }

    pub fn q_square_check(&self) -> QSquareReport<R> {
        let mut checked = 0;
        for g in self.dual.basis() {
            checked += 1;
            let v = self.q(&self.q_gen(g));
            if !v.is_zero() {
                return QSquareReport {
                    checked,
                    failure: Some((g, v)),
                };
            }
        }
        QSquareReport {
            checked,
            failure: None,
        }
    }

    pub fn to_rat(&self) -> Result<CePresentation<Rat>> {
        let mut q = BTreeMap::new();
        for (g, v) in &self.q {
            let mut nv = SymElem::zero();
            for (m, c) in v.iter() {
                nv.add_term(m.clone(), c.as_rat().ok_or(Error::ChartBase)?);
            }
            q.insert(*g, nv);
        }
        Ok(CePresentation {
            space: self.space.clone(),
            dual: self.dual.clone(),
            q,
        })
    }

    pub fn monomial_label(&self, m: &SymWord) -> String {
        monomial_label(&self.dual, m)
    }

    /// Components of `Q` by weight `n` of the output, with the bidegree
    /// shift each one realizes.
    pub fn bigrading_audit(&self) -> BigradingReport {
        let mut components: BTreeMap<usize, BigradingComponent> = BTreeMap::new();
        for (g, v) in &self.q {
            let (k0, l0) = bidegree(&SymWord::single(*g));
            for (m, _) in v.iter() {
                let (k, l) = bidegree(m);
                let n = m.len();
                let c = components.entry(n).or_insert(BigradingComponent {
                    weight: n,
                    expected: (n as i32, 1 - n as i32),
                    shifts: Vec::new(),
                    terms: 0,
                });
                c.terms += 1;
                let s = (k - k0, l - l0);
                if !c.shifts.contains(&s) {
                    c.shifts.push(s);
                }
            }
        }
        BigradingReport {
            components: components.into_values().collect(),
        }
    }
}

pub fn monomial_label(dual: &GradedSpace, m: &SymWord) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.multiplicities()
        .iter()
        .map(|(e, k)| {
            if *k == 1 {
                dual.label(*e).to_string()
            } else {
                format!("{}^{k}", dual.label(*e))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Renders an algebra element with a coefficient formatter.
pub fn format_elem<R: Scalar>(
    dual: &GradedSpace,
    x: &SymElem<R>,
    coeff: impl Fn(&R) -> String,
) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|(m, c)| format!("({})*{}", coeff(c), monomial_label(dual, m)))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn format_rat_elem(dual: &GradedSpace, x: &SymElem<Rat>) -> String {
    format_elem(dual, x, fmt_rat)
}

pub fn format_poly_elem(ring: &PolyRing, dual: &GradedSpace, x: &SymElem<Poly>) -> String {
    format_elem(dual, x, |p| ring.format(p))
}

/// `(q + w, −w)` for a monomial of cohomological degree `q` and weight `w`.
pub fn bidegree(m: &SymWord) -> (i32, i32) {
    let w = m.len() as i32;
    (m.degree() + w, -w)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradingComponent {
    /// Weight of the output monomials, so the component comes from `λ_n`.
    pub weight: usize,
    pub expected: (i32, i32),
    pub shifts: Vec<(i32, i32)>,
    pub terms: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradingReport {
    pub components: Vec<BigradingComponent>,
}

impl BigradingReport {
    pub fn passed(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.shifts.iter().all(|s| *s == c.expected))
    }
}

/// Monomials of cohomological degree `q ≤ 0`.
fn monomials_in(l: &GradedSpace, q: i32) -> Vec<SymWord> {
    let deg = -q;
    let mut out: Vec<SymWord> = words(l, deg.max(0) as usize, deg)
        .into_iter()
        .filter(|w| w.degree() == deg)
        .map(|w| dual_word(&w).0)
        .collect();
    out.sort();
    out
}

/// The truncation of the algebra to degrees `lo..=0` as a complex.
#[derive(Clone, PartialEq, Debug)]
pub struct CeComplex {
    pub complex: Complex<Rat>,
    pub monomials: BTreeMap<i32, Vec<SymWord>>,
}

impl CeComplex {
    pub fn coords(&self, x: &SymElem<Rat>, q: i32) -> Vector<Rat> {
        let ms = &self.monomials[&q];
        Vector::from_terms(x.iter().filter(|(m, _)| m.degree() == q).map(|(m, c)| {
            let i = ms.binary_search(m).expect("monomial in range");
            (BasisElem::new(q, i), c.clone())
        }))
    }

    pub fn element(&self, v: &Vector<Rat>) -> SymElem<Rat> {
        let mut out = SymElem::zero();
        for (e, c) in v.iter() {
            out.add_term(self.monomials[&e.degree][e.index].clone(), c.clone());
        }
        out
    }
}

pub fn ce_complex(p: &CePresentation<Rat>, lo: i32) -> Result<CeComplex> {
    let mut space = GradedSpace::new();
    let mut monomials = BTreeMap::new();
    for q in lo..=0 {
        let ms = monomials_in(&p.space, q);
        for m in &ms {
            space.push(q, p.monomial_label(m))?;
        }
        monomials.insert(q, ms);
    }
    let partial = CeComplex {
        complex: Complex::new(GradedMap::zero(&space, &space, 1))?,
        monomials,
    };
    let d = GradedMap::from_images(&space, &space, 1, |e| {
        let m = partial.monomials[&e.degree][e.index].clone();
        if e.degree == 0 {
            return Vector::zero();
        }
        partial.coords(&p.q(&SymElem::word(m)), e.degree + 1)
    })?;
    Ok(CeComplex {
        complex: Complex::new(d)?,
        monomials: partial.monomials,
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct CeCohomology {
    pub dims: BTreeMap<i32, usize>,
    pub representatives: BTreeMap<i32, Vec<SymElem<Rat>>>,
}

/// Cohomology in degrees `−depth..=0` at a point base.
pub fn ce_cohomology<R: Scalar>(p: &CePresentation<R>, depth: i32) -> Result<CeCohomology> {
    let p = p.to_rat()?;
    let c = ce_complex(&p, -depth - 1)?;
    let mut dims = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for q in -depth..=0 {
        let CohomologyGroup {
            dim,
            representatives: reps,
        } = c.complex.cohomology_at(q);
        dims.insert(q, dim);
        representatives.insert(q, reps.iter().map(|v| c.element(v)).collect());
    }
    Ok(CeCohomology {
        dims,
        representatives,
    })
}

/// The algebra morphism `CE(L') → CE(L)` induced by a morphism `L → L'`.
#[derive(Clone, PartialEq, Debug)]
pub struct CeMap<R> {
    pub source: CePresentation<R>,
    pub target: CePresentation<R>,
    images: BTreeMap<BasisElem, SymElem<R>>,
}

pub fn ce_pullback<R: Scalar>(m: &Morphism<R>) -> Result<CeMap<R>> {
    let r = m.check();
    if let Some(f) = r.failure {
        return Err(Error::NotAMorphism(format!(
            "identity fails on {}",
            m.comps().word_label(&f.word)
        )));
    }
    let mut images: BTreeMap<BasisElem, SymElem<R>> = BTreeMap::new();
    for (w, v) in m.comps().iter() {
        let f = dual_functional::<R>(w);
        for (b, c) in v.iter() {
            images.entry(b.dual()).or_default().add_scaled(&f, c);
        }
    }
    Ok(CeMap {
        source: build_ce(m.target()),
        target: build_ce(m.source()),
        images,
    })
}

impl<R: Scalar> CeMap<R> {
    pub fn image_of(&self, g: BasisElem) -> SymElem<R> {
        self.images.get(&g).cloned().unwrap_or_default()
    }

    pub fn apply(&self, x: &SymElem<R>) -> SymElem<R> {
        algebra_map(|g| self.image_of(g), x)
    }

    /// `F Q' = Q F` on every generator.
    pub fn chain_map_check(&self) -> bool {
        self.source.generators().all(|g| {
            let lhs = self.apply(&self.source.q_gen(g));
            let rhs = self.target.q(&self.image_of(g));
            lhs == rhs
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeComparison {
    pub degree: i32,
    /// Dimension on the target side `CE(L')`.
    pub source_dim: usize,
    pub target_dim: usize,
    pub induced_rank: usize,
}

impl DegreeComparison {
    pub fn iso(&self) -> bool {
        self.source_dim == self.target_dim && self.induced_rank == self.source_dim
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiIsoReport {
    pub chain_map: bool,
    pub degrees: Vec<DegreeComparison>,
}

impl QuasiIsoReport {
    pub fn quasi_iso(&self) -> bool {
        self.chain_map && self.degrees.iter().all(DegreeComparison::iso)
    }
}

/// Compares cohomology of `CE(L')` and `CE(L)` in degrees `−depth..=0`.
pub fn quasi_iso_check<R: Scalar>(m: &Morphism<R>, depth: i32) -> Result<QuasiIsoReport> {
    let f = ce_pullback(m)?;
    let chain_map = f.chain_map_check();
    let src = f.source.to_rat()?;
    let tgt = f.target.to_rat()?;
    let a = ce_complex(&src, -depth - 1)?;
    let b = ce_complex(&tgt, -depth - 1)?;
    let images: BTreeMap<BasisElem, SymElem<Rat>> = f
        .images
        .iter()
        .map(|(g, v)| {
            let mut nv = SymElem::zero();
            for (m, c) in v.iter() {
                nv.add_term(m.clone(), c.as_rat().ok_or(Error::ChartBase)?);
            }
            Ok((*g, nv))
        })
        .collect::<Result<_>>()?;
    let map = GradedMap::from_images(a.complex.space(), b.complex.space(), 0, |e| {
        let m = a.monomials[&e.degree][e.index].clone();
        let img = algebra_map(
            |g| images.get(&g).cloned().unwrap_or_default(),
            &SymElem::word(m),
        );
        b.coords(&img, e.degree)
    })?;
    let degrees = (-depth..=0)
        .map(|q| DegreeComparison {
            degree: q,
            source_dim: a.complex.cohomology_at(q).dim,
            target_dim: b.complex.cohomology_at(q).dim,
            induced_rank: induced_rank(&map, &a.complex, &b.complex, q),
        })
        .collect();
    Ok(QuasiIsoReport { chain_map, degrees })
}

/// A Koszul monomial `x^α ξ_I` with `I` strictly increasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct KoszulMonomial {
    pub x: Vec<u32>,
    pub xi: Vec<usize>,
}

pub type KoszulElem = BTreeMap<KoszulMonomial, Rat>;

fn kadd(out: &mut KoszulElem, m: KoszulMonomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(m.clone()).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&m);
    }
}

/// `C[x₁…x_n] ⊗ Λ(ξ₁…ξ_k)` with `ι_u(ξ_i) = x_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct KoszulChart {
    ring: PolyRing,
    k: usize,
}

impl KoszulChart {
    /// `u` must be `(x₁, …, x_k)`.
    pub fn new(ring: PolyRing, u: &[Poly]) -> Result<Self> {
        let k = u.len();
        if k > ring.dim() || u.iter().enumerate().any(|(i, p)| *p != Poly::var(i)) {
            return Err(Error::NotEulerForm);
        }
        Ok(Self { ring, k })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn fiber_count(&self) -> usize {
        self.k
    }

    pub fn monomial(&self, x: Vec<u32>, xi: Vec<usize>) -> KoszulMonomial {
        let mut x = x;
        x.resize(self.ring.dim(), 0);
        KoszulMonomial { x, xi }
    }

    /// `ξ_i ∧ ξ_I` with its sign, or `None` if `i ∈ I`.
    fn wedge(i: usize, xi: &[usize]) -> Option<(Vec<usize>, i64)> {
        if xi.contains(&i) {
            return None;
        }
        let pos = xi.iter().filter(|j| **j < i).count();
        let mut out = xi.to_vec();
        out.insert(pos, i);
        Some((out, if pos % 2 == 0 { 1 } else { -1 }))
    }

    pub fn d(&self, x: &KoszulElem) -> KoszulElem {
        let mut out = KoszulElem::new();
        for (m, c) in x {
            for (pos, &i) in m.xi.iter().enumerate() {
                let mut nx = m.x.clone();
                nx[i] += 1;
                let mut nxi = m.xi.clone();
                nxi.remove(pos);
                let s = if pos % 2 == 0 { c.clone() } else { -c.clone() };
                kadd(&mut out, KoszulMonomial { x: nx, xi: nxi }, s);
            }
        }
        out
    }

    /// `(1/w) Σ_{i<k} ξ_i ∂_{x_i}`, with `w` the fiber weight.
    pub fn eta(&self, x: &KoszulElem) -> KoszulElem {
        let mut out = KoszulElem::new();
        for (m, c) in x {
            let w: u32 = m.x[..self.k].iter().sum::<u32>() + m.xi.len() as u32;
            if w == 0 {
                continue;
            }
            for i in 0..self.k {
                if m.x[i] == 0 {
                    continue;
                }
                let Some((nxi, s)) = Self::wedge(i, &m.xi) else {
                    continue;
                };
                let mut nx = m.x.clone();
                nx[i] -= 1;
                let coeff = c * int(m.x[i] as i64 * s) / int(w as i64);
                kadd(&mut out, KoszulMonomial { x: nx, xi: nxi }, coeff);
            }
        }
        out
    }

    /// `ρ* ι*`: restriction to `x₁ = … = x_k = 0`, killing every `ξ`.
    pub fn restrict(&self, x: &KoszulElem) -> KoszulElem {
        x.iter()
            .filter(|(m, _)| m.xi.is_empty() && m.x[..self.k].iter().all(|p| *p == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// All monomials of polynomial degree at most `bound`.
    pub fn monomials(&self, bound: u32) -> Vec<KoszulMonomial> {
        let n = self.ring.dim();
        let mut xs: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..n {
            xs = xs
                .into_iter()
                .flat_map(|v| {
                    let used: u32 = v.iter().sum();
                    (0..=bound - used).map(move |p| {
                        let mut w = v.clone();
                        w.push(p);
                        w
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for x in xs {
            for mask in 0..(1usize << self.k) {
                let xi: Vec<usize> = (0..self.k).filter(|i| mask >> i & 1 == 1).collect();
                out.push(KoszulMonomial { x: x.clone(), xi });
            }
        }
        out.sort();
        out
    }

    /// `[η, ι_u] = id − ρ*ι*` on every monomial of polynomial degree `≤ bound`.
    pub fn identity_check(&self, bound: u32) -> KoszulReport {
        let mut checked = 0;
        for m in self.monomials(bound) {
            checked += 1;
            let x: KoszulElem = [(m.clone(), Rat::one())].into_iter().collect();
            let mut lhs = self.eta(&self.d(&x));
            for (mm, c) in self.d(&self.eta(&x)) {
                kadd(&mut lhs, mm, c);
            }
            let mut rhs = x.clone();
            for (mm, c) in self.restrict(&x) {
                kadd(&mut rhs, mm, -c);
            }
            if lhs != rhs {
                return KoszulReport {
                    checked,
                    failure: Some(m),
                };
            }
        }
        KoszulReport {
            checked,
            failure: None,
        }
    }

    /// Cohomology of the weight-`w` piece, where weight is polynomial degree
    /// plus the number of `ξ`s, by cohomological degree `−k..=0`.
    pub fn cohomology_by_weight(&self, w: u32) -> Result<BTreeMap<i32, usize>> {
        let all: Vec<KoszulMonomial> = self
            .monomials(w)
            .into_iter()
            .filter(|m| m.x.iter().sum::<u32>() + m.xi.len() as u32 == w)
            .collect();
        let mut space = GradedSpace::new();
        let mut by_deg: BTreeMap<i32, Vec<KoszulMonomial>> = BTreeMap::new();
        for m in all {
            by_deg.entry(-(m.xi.len() as i32)).or_default().push(m);
        }
        for (q, ms) in &by_deg {
            for (i, _) in ms.iter().enumerate() {
                space.push(*q, format!("m{q}_{i}"))?;
            }
        }
        let d = GradedMap::from_images(&space, &space, 1, |e| {
            let m = by_deg[&e.degree][e.index].clone();
            let img = self.d(&[(m, Rat::one())].into_iter().collect());
            Vector::from_terms(img.into_iter().map(|(mm, c)| {
                let q = e.degree + 1;
                let i = by_deg[&q].binary_search(&mm).expect("same weight");
                (BasisElem::new(q, i), c)
            }))
        })?;
        let c = Complex::new(d)?;
        Ok((-(self.k as i32)..=0)
            .map(|q| (q, if space.dim(q) > 0 { c.cohomology_at(q).dim } else { 0 }))
            .collect())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KoszulReport {
    pub checked: usize,
    pub failure: Option<KoszulMonomial>,
}

impl KoszulReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The homotopy `h = m ∘ w ∘ (P♯ ⊗ η̃′) ∘ Δ` on the algebra of `(L, λ)`,
/// where `P = φ₁π̃₁`.
#[derive(Clone, PartialEq, Debug)]
pub struct TransferHomotopy {
    pub presentation: CePresentation<Rat>,
    pub p: GradedMap<Rat>,
    pub etatilde: GradedMap<Rat>,
}

pub fn transfer_homotopy_h(s: &CurvedStructure<Rat>, t: &TransferResult) -> Result<TransferHomotopy> {
    TransferHomotopy::new(
        s,
        t.phi.phi1().compose(&t.pitilde.phi1())?,
        Some(t.etatilde.clone()),
    )
}

impl TransferHomotopy {
    pub fn new(
        s: &CurvedStructure<Rat>,
        p: GradedMap<Rat>,
        etatilde: Option<GradedMap<Rat>>,
    ) -> Result<Self> {
        let etatilde = etatilde.ok_or(Error::MissingEtaTilde)?;
        Ok(Self {
            presentation: build_ce(s),
            p,
            etatilde,
        })
    }

    pub fn p_sharp(&self, x: &SymElem<Rat>) -> SymElem<Rat> {
        algebra_map(|g| transpose_on_gen(&self.p, g), x)
    }

    /// The derivation extending `η̃∨`, divided by weight.
    pub fn eta_prime(&self, x: &SymElem<Rat>) -> SymElem<Rat> {
        let mut out = SymElem::zero();
        for (m, c) in x.iter() {
            if m.is_empty() {
                continue;
            }
            let d = derivation(
                |g| transpose_on_gen(&self.etatilde, g),
                true,
                &SymElem::word(m.clone()),
            );
            out.add_scaled(&d, &(c / int(m.len() as i64)));
        }
        out
    }

    pub fn h(&self, x: &SymElem<Rat>) -> SymElem<Rat> {
        let mut out = SymElem::zero();
        for (m, c) in x.iter() {
            let n = m.len();
            for i in 0..n {
                for u in unshuffles(m, i) {
                    let right = self.eta_prime(&SymElem::word(u.right));
                    if right.is_zero() {
                        continue;
                    }
                    let left = self.p_sharp(&SymElem::word(u.left.clone()));
                    let sign = if u.left.is_odd() { -1 } else { 1 };
                    let coeff = c * int(u.coeff * sign) / binomial(n, i);
                    out.add_scaled(&left.mul(&right), &coeff);
                }
            }
        }
        out
    }

    /// `[Q₁, h] − (1 − P♯)` on `x`; zero when the identity holds.
    pub fn defect(&self, x: &SymElem<Rat>) -> SymElem<Rat> {
        let q = &self.presentation;
        let lhs = q.q_linear(&self.h(x)).add(&self.h(&q.q_linear(x)));
        lhs.sub(&x.sub(&self.p_sharp(x)))
    }

    /// Checks the identity on every monomial of weight `≤ max_weight`.
    pub fn heq_check(&self, max_weight: usize) -> HeqReport {
        let l = self.presentation.space();
        let top = l.max_degree().unwrap_or(0);
        let mut checked = 0;
        for w in words(l, max_weight, top * max_weight as i32) {
            checked += 1;
            let x = SymElem::word(dual_word(&w).0);
            let d = self.defect(&x);
            if !d.is_zero() {
                return HeqReport {
                    checked,
                    failure: Some((dual_word(&w).0, d)),
                };
            }
        }
        HeqReport {
            checked,
            failure: None,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct HeqReport {
    pub checked: usize,
    pub failure: Option<(SymWord, SymElem<Rat>)>,
}

impl HeqReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::multilinear::Multilinear;
    use crate::transfer::{transfer, Contraction};

    fn gen(p: &CePresentation<Rat>, label: &str) -> BasisElem {
        p.dual().find(&format!("ξ{label}")).unwrap()
    }

    fn g(p: &CePresentation<Rat>, label: &str) -> SymElem<Rat> {
        SymElem::word(SymWord::single(gen(p, label)))
    }

    fn e4_transfer() -> (CurvedStructure<Rat>, TransferResult) {
        let s = fixtures::e4();
        let (d, e) = fixtures::e4_delta_eta();
        let c = Contraction::new(d, e, fixtures::e4_filtration()).unwrap();
        let t = transfer(&s, &c).unwrap();
        (s, t)
    }

    #[test]
    fn e1_and_e2_generators() {
        let p = build_ce(&fixtures::e1());
        assert_eq!(p.q_gen(gen(&p, "e2")), g(&p, "e1"));
        assert!(p.q_gen(gen(&p, "e1")).is_zero());
        assert!(p.q_square_check().passed());
        let p = build_ce(&fixtures::e2());
        assert_eq!(p.q_gen(gen(&p, "e1")), SymElem::one());
        assert!(p.q_square_check().passed());
    }

    #[test]
    fn bogus_curvature_fails_on_the_top_generator() {
        let s = fixtures::e1();
        let mut ops = s.ops().clone();
        ops.set(SymWord::empty(), Vector::basis(BasisElem::new(1, 0))).unwrap();
        let p = build_ce(&CurvedStructure::new(ops).unwrap());
        let r = p.q_square_check();
        assert_eq!(r.failure.unwrap().0, gen(&p, "e2"));
    }

    /// `⟨Qα, w⟩ = ⟨α, D̂w⟩` on all monomials and words of weight ≤ 3.
    #[test]
    fn q_is_the_transpose_of_the_coderivation() {
        let mut rng = fixtures::rng(3);
        for _ in 0..10 {
            let (s, _, _) = fixtures::random_gauged(&mut rng, 4, 4);
            let p = build_ce(&s);
            let ws = words(s.space(), 3, s.top_degree());
            for a in &ws {
                let alpha = SymElem::word(dual_word(a).0);
                let qa = p.q(&alpha);
                for w in &ws {
                    let x = SymElem::word(w.clone());
                    assert_eq!(pairing(&qa, &x), pairing(&alpha, &s.coderivation(w)));
                }
            }
        }
    }

    #[test]
    fn q_square_matches_relations() {
        let mut rng = fixtures::rng(9);
        let mut failing = 0;
        let mut cases: Vec<CurvedStructure<Rat>> =
            vec![fixtures::e1(), fixtures::e2(), fixtures::e4(), fixtures::e5()];
        for i in 0..50 {
            let (s, _, _) = fixtures::random_gauged(&mut rng, 4, 4);
            if i % 2 == 0 {
                cases.push(s);
                continue;
            }
            let mut ops: Multilinear<Rat> = s.ops().clone();
            let l = s.space().clone();
            let ws = words(&l, 2, l.max_degree().unwrap() - 1);
            let w = ws[i % ws.len()].clone();
            if let Some(t) = l.basis_in(w.degree() + 1).next() {
                ops.add_to(w, &Vector::basis(t)).unwrap();
            }
            cases.push(CurvedStructure::new(ops).unwrap());
        }
        for s in cases {
            let rel = s.check_relations().passed();
            if !rel {
                failing += 1;
            }
            assert_eq!(build_ce(&s).q_square_check().passed(), rel, "{s:?}");
        }
        assert!(failing > 5, "{failing}");
    }

    #[test]
    fn cohomology_examples() {
        let c = ce_cohomology(&build_ce(&fixtures::e1()), 4).unwrap();
        assert_eq!(c.dims.values().copied().collect::<Vec<_>>(), [0, 0, 0, 0, 1]);
        let c = ce_cohomology(&build_ce(&fixtures::e2()), 4).unwrap();
        assert!(c.dims.values().all(|d| *d == 0));
        let s = GradedSpace::from_labels([(1, vec!["a"])]).unwrap();
        let c = ce_cohomology(&build_ce(&CurvedStructure::<Rat>::zero(&s).unwrap()), 4).unwrap();
        assert_eq!(c.dims[&0], 1);
        assert_eq!(c.dims[&-1], 1);
        assert_eq!(c.dims[&-2], 0);
    }

    #[test]
    fn chart_base_is_rejected() {
        let b = fixtures::b1();
        let p = build_ce(b.structure());
        assert!(p.q_square_check().passed());
        assert!(matches!(ce_cohomology(&p, 2), Err(Error::ChartBase)));
    }

    #[test]
    fn quasi_isomorphisms() {
        let id = Morphism::identity(&fixtures::e4());
        let r = quasi_iso_check(&id, 4).unwrap();
        assert!(r.quasi_iso());

        let (_, t) = e4_transfer();
        let r = quasi_iso_check(&t.phi, 4).unwrap();
        assert!(r.chain_map);
        assert!(r.quasi_iso(), "{r:?}");

        let e1 = fixtures::e1();
        let zero = CurvedStructure::zero(&GradedSpace::new()).unwrap();
        let m = Morphism::new(e1.clone(), zero, Multilinear::zero(e1.space(), &GradedSpace::new(), 0)).unwrap();
        assert!(quasi_iso_check(&m, 4).unwrap().quasi_iso());
    }

    #[test]
    fn pullbacks_of_random_transfers_are_chain_maps() {
        let mut rng = fixtures::rng(21);
        for _ in 0..6 {
            let (s, c) = fixtures::random_transfer(&mut rng, 4, 4);
            let t = transfer(&s, &c).unwrap();
            let f = ce_pullback(&t.phi).unwrap();
            assert!(f.chain_map_check());
            let f = ce_pullback(&t.pitilde).unwrap();
            assert!(f.chain_map_check());
            if s.curvature().is_zero() {
                assert!(quasi_iso_check(&t.phi, 3).unwrap().quasi_iso());
            }
        }
    }

    #[test]
    fn koszul_examples() {
        let k = KoszulChart::new(PolyRing::new(["x"]), &[Poly::var(0)]).unwrap();
        let one = |x: Vec<u32>, xi: Vec<usize>| -> KoszulElem {
            [(k.monomial(x, xi), Rat::one())].into_iter().collect()
        };
        assert_eq!(k.eta(&one(vec![3], vec![])), one(vec![2], vec![0]));
        assert!(k.eta(&one(vec![2], vec![0])).is_empty());
        let k2 = KoszulChart::new(PolyRing::new(["x", "y"]), &[Poly::var(0)]).unwrap();
        let y2: KoszulElem = [(k2.monomial(vec![0, 2], vec![]), Rat::one())].into_iter().collect();
        assert!(k2.eta(&y2).is_empty());
        assert!(matches!(
            KoszulChart::new(PolyRing::new(["x"]), &[Poly::var(0).pow(2)]),
            Err(Error::NotEulerForm)
        ));
    }

    #[test]
    fn koszul_identity_and_cohomology() {
        for n in 1..=3usize {
            for k in 1..=n.min(2) {
                let ring = PolyRing::new((0..n).map(|i| format!("x{i}")));
                let u: Vec<Poly> = (0..k).map(Poly::var).collect();
                let c = KoszulChart::new(ring, &u).unwrap();
                assert!(c.identity_check(4).passed());
                for w in 0..4 {
                    let h = c.cohomology_by_weight(w).unwrap();
                    assert!(h.iter().filter(|(q, _)| **q < 0).all(|(_, d)| *d == 0));
                    let free = n - k;
                    let expected = if free == 0 {
                        usize::from(w == 0)
                    } else {
                        binomial(w as usize + free - 1, free - 1).to_integer().try_into().unwrap()
                    };
                    assert_eq!(h[&0], expected);
                }
            }
        }
    }

    #[test]
    fn e4_homotopy_identity() {
        let (s, t) = e4_transfer();
        let h = transfer_homotopy_h(&s, &t).unwrap();
        assert!(h.h(&SymElem::one()).is_zero());
        assert!(h.defect(&SymElem::one()).is_zero());
        let r = h.heq_check(4);
        assert!(r.passed(), "{r:?}");
        assert!(r.checked > 5);
        let nonzero = words(s.space(), 2, 10)
            .iter()
            .filter(|w| !h.h(&SymElem::word(dual_word(w).0)).is_zero())
            .count();
        assert!(nonzero > 0);
    }

    #[test]
    fn random_homotopy_identities() {
        let mut rng = fixtures::rng(17);
        let mut done = 0;
        while done < 10 {
            let (s, c) = fixtures::random_transfer(&mut rng, 4, 4);
            if !s.curvature().is_zero() {
                continue;
            }
            let t = transfer(&s, &c).unwrap();
            let h = transfer_homotopy_h(&s, &t).unwrap();
            assert!(h.heq_check(3).passed(), "{s:?} {c:?}");
            done += 1;
        }
    }

    #[test]
    fn zero_contraction_gives_zero_homotopy() {
        let s = fixtures::e1();
        let c = Contraction::trivial(s.space());
        let t = transfer(&s, &c).unwrap();
        let h = transfer_homotopy_h(&s, &t).unwrap();
        let p = build_ce(&s);
        for w in words(s.space(), 3, 6) {
            let x = SymElem::word(dual_word(&w).0);
            assert!(h.h(&x).is_zero());
            assert_eq!(h.p_sharp(&x), x);
        }
        assert!(h.heq_check(3).passed());
        assert!(p.q_square_check().passed());
        assert!(matches!(
            TransferHomotopy::new(&s, GradedMap::identity(s.space()), None),
            Err(Error::MissingEtaTilde)
        ));
    }

    #[test]
    fn bigrading() {
        let r = build_ce(&fixtures::e1()).bigrading_audit();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].shifts, vec![(1, 0)]);
        let r = build_ce(&fixtures::e4()).bigrading_audit();
        assert!(r.passed());
        assert!(r.components.iter().any(|c| c.weight == 2 && c.shifts == vec![(2, -1)]));
        let s = GradedSpace::from_labels([(1, vec!["a"])]).unwrap();
        assert!(build_ce(&CurvedStructure::<Rat>::zero(&s).unwrap()).bigrading_audit().components.is_empty());
    }
}
