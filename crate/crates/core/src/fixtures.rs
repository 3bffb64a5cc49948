//! The shipped fixture catalog and seeded random instance generators.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::bundle::{BundleChart, BundleMorphism};
use crate::linalg::{int, BasisElem, GradedMap, GradedSpace, Matrix, Poly, PolyRing, Rat, Vector};
use crate::multilinear::Multilinear;
use crate::point::{gauge_conjugate, CurvedStructure, Morphism};
use crate::sym::{words, SymWord};
use crate::transfer::{Contraction, Filtration};

fn space(parts: &[(i32, &[&str])]) -> GradedSpace {
    GradedSpace::from_labels(parts.iter().map(|(d, l)| (*d, l.to_vec())))
        .expect("fixture labels are distinct")
}

fn elem(s: &GradedSpace, label: &str) -> BasisElem {
    s.find(label).expect("fixture label exists")
}

fn word(s: &GradedSpace, labels: &[&str]) -> SymWord {
    let es: Vec<BasisElem> = labels.iter().map(|l| elem(s, l)).collect();
    crate::sym::canonicalize(&es).expect("fixture word is nonzero").0
}

fn vector(s: &GradedSpace, terms: &[(&str, i64)]) -> Vector<Rat> {
    Vector::from_terms(terms.iter().map(|(l, c)| (elem(s, l), int(*c))))
}

/// Inputs and integer outputs of one table entry, by label.
pub type Entry<'a> = (&'a [&'a str], &'a [(&'a str, i64)]);

/// Builds a structure from `(inputs, outputs)` entries given by labels.
pub fn structure(
    s: &GradedSpace,
    entries: &[Entry],
) -> CurvedStructure<Rat> {
    let mut ops = Multilinear::zero(s, s, 1);
    for (ins, outs) in entries {
        ops.set(word(s, ins), vector(s, outs)).expect("fixture obeys the degree rule");
    }
    CurvedStructure::new(ops).expect("fixture space is positive")
}

/// `L¹ = ⟨e1⟩`, `L² = ⟨e2⟩`, `λ₁ e1 = e2`.
pub fn e1() -> CurvedStructure<Rat> {
    let s = space(&[(1, &["e1"]), (2, &["e2"])]);
    structure(&s, &[(&["e1"], &[("e2", 1)])])
}

/// `L¹ = ⟨e1⟩` with curvature `λ₀ = e1`.
pub fn e2() -> CurvedStructure<Rat> {
    let s = space(&[(1, &["e1"])]);
    structure(&s, &[(&[], &[("e1", 1)])])
}

/// `L² = ⟨h⟩`, `L⁴ = ⟨m⟩`, `L⁵ = ⟨b, c⟩`; `λ₁ m = b`, `λ₂(h, h) = b + c`.
pub fn e4() -> CurvedStructure<Rat> {
    let s = space(&[(2, &["h"]), (4, &["m"]), (5, &["b", "c"])]);
    structure(
        &s,
        &[(&["m"], &[("b", 1)]), (&["h", "h"], &[("b", 1), ("c", 1)])],
    )
}

/// E4's contraction data `(δ, η)`: `δ m = b`, `η b = m`.
pub fn e4_delta_eta() -> (GradedMap<Rat>, GradedMap<Rat>) {
    let s = e4().space().clone();
    let (m, b) = (elem(&s, "m"), elem(&s, "b"));
    let delta = GradedMap::from_images(&s, &s, 1, |e| {
        if e == m { Vector::basis(b) } else { Vector::zero() }
    })
    .expect("degree 1");
    let eta = GradedMap::from_images(&s, &s, -1, |e| {
        if e == b { Vector::basis(m) } else { Vector::zero() }
    })
    .expect("degree -1");
    (delta, eta)
}

/// Weights for E4's contraction: `m`, `b`, `c` share weight 5 so that `η`
/// preserves the filtration, and `λ₂(h, h)` still raises weight by one.
pub fn e4_filtration() -> Filtration {
    Filtration::Weights([("m".to_string(), 5)].into_iter().collect())
}

/// `L¹ = ⟨x⟩`, `L² = ⟨k2⟩`, `L³ = ⟨k3⟩`, `λ₁ k2 = k3`.
pub fn e5() -> CurvedStructure<Rat> {
    let s = space(&[(1, &["x"]), (2, &["k2"]), (3, &["k3"])]);
    structure(&s, &[(&["k2"], &[("k3", 1)])])
}

/// The linear morphism `x ↦ x'` from E5 onto the zero structure on `⟨x'⟩`.
pub fn e5_morphism() -> Morphism<Rat> {
    let src = e5();
    let t = space(&[(1, &["x'"])]);
    let target = CurvedStructure::zero(&t).expect("positive");
    let (x, xp) = (elem(src.space(), "x"), elem(&t, "x'"));
    let phi = GradedMap::from_images(src.space(), &t, 0, |e| {
        if e == x { Vector::basis(xp) } else { Vector::zero() }
    })
    .expect("degree 0");
    Morphism::linear(src, target, &phi).expect("spaces match")
}

/// The chart over a point with zero fiber.
pub fn point_chart() -> BundleChart {
    BundleChart::point(&CurvedStructure::zero(&GradedSpace::new()).expect("empty space"))
}

fn line_bundle(curvature: Poly) -> BundleChart {
    let s = space(&[(1, &["e"])]);
    let mut ops = Multilinear::zero(&s, &s, 1);
    ops.set(SymWord::empty(), Vector::from_dense(1, &[curvature]))
        .expect("curvature lies in degree 1");
    BundleChart::new(PolyRing::new(["x"]), CurvedStructure::new(ops).expect("positive"))
        .expect("coefficients use x")
}

/// Base `(x)`, `L¹ = ⟨e⟩`, `λ₀ = x·e`.
pub fn b1() -> BundleChart {
    line_bundle(Poly::var(0))
}

/// Base `(x)`, `L¹ = ⟨e⟩`, `λ₀ = x²·e`.
pub fn b1_squared() -> BundleChart {
    line_bundle(Poly::var(0).pow(2))
}

/// The morphism from a chart to the point chart.
pub fn to_point(c: &BundleChart) -> BundleMorphism {
    let m = Multilinear::zero(c.space(), &GradedSpace::new(), 0);
    BundleMorphism::new(c.clone(), point_chart(), vec![], m).expect("valid")
}

/// E5 over the line `(y)`, mapped over the identity onto `⟨x'⟩` over `(y')`.
pub fn e5_chart_morphism() -> BundleMorphism {
    let m = e5_morphism();
    let source = BundleChart::constant(PolyRing::new(["y"]), m.source());
    let target = BundleChart::constant(PolyRing::new(["y'"]), m.target());
    let comps = m.comps().map_coeffs(|c| Poly::constant(c.clone()));
    BundleMorphism::new(source, target, vec![Poly::var(0)], comps).expect("valid")
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A small nonzero integer, or zero with probability `1 − density`.
fn entry(rng: &mut StdRng, density: f64) -> Rat {
    if rng.random_bool(density) {
        let v: i64 = rng.random_range(1..=3);
        int(if rng.random_bool(0.5) { v } else { -v })
    } else {
        int(0)
    }
}

/// A random positively graded space with top degree at most `max_top` and
/// total dimension at most `max_dim`. Degrees 1 and 2 are populated whenever
/// the bounds allow, so that binary operations have room to be nonzero.
pub fn random_space(rng: &mut StdRng, max_top: i32, max_dim: usize) -> GradedSpace {
    let top = rng.random_range(max_top.min(3)..=max_top);
    let dim = rng.random_range(max_dim.min(top as usize + 1)..=max_dim);
    let mut s = GradedSpace::new();
    for i in 0..dim {
        let d = if i < 2 { (i as i32 + 1).min(top) } else { rng.random_range(1..=top) };
        s.push(d, format!("v{i}")).expect("fresh label");
    }
    s
}

/// A random abelian structure: `λ₁` pairs some `a` in degree `k` with a
/// distinct `b` in degree `k + 1`. Returns the structure and the pairs.
pub fn random_abelian(
    rng: &mut StdRng,
    s: &GradedSpace,
) -> (CurvedStructure<Rat>, Vec<(BasisElem, BasisElem)>) {
    let mut used = std::collections::BTreeSet::new();
    let mut pairs = Vec::new();
    for a in s.basis() {
        if used.contains(&a) || !rng.random_bool(0.8) {
            continue;
        }
        let candidates: Vec<BasisElem> = s
            .basis_in(a.degree + 1)
            .filter(|b| !used.contains(b))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let b = candidates[rng.random_range(0..candidates.len())];
        used.insert(a);
        used.insert(b);
        pairs.push((a, b));
    }
    let mut ops = Multilinear::zero(s, s, 1);
    for (a, b) in &pairs {
        ops.set(SymWord::single(*a), Vector::basis(*b)).expect("degree rule");
    }
    (CurvedStructure::new(ops).expect("positive"), pairs)
}

/// A random degree-0 table with unipotent linear part and arity ≤ 3 terms.
pub fn random_gauge(rng: &mut StdRng, s: &GradedSpace, density: f64) -> Multilinear<Rat> {
    let mut psi = Multilinear::zero(s, s, 0);
    for d in s.degrees() {
        let n = s.dim(d);
        let m = Matrix::from_fn(n, n, |i, j| if i == j { int(1) } else { int(0) });
        let mut m = m;
        for i in 0..n {
            for j in 0..i {
                m.set(i, j, entry(rng, density));
            }
        }
        for e in s.basis_in(d) {
            let v = Vector::from_dense(d, &m.column(e.index));
            psi.set(SymWord::single(e), v).expect("degree 0");
        }
    }
    let top = s.max_degree().unwrap_or(0);
    for w in words(s, 3, top) {
        if w.len() < 2 {
            continue;
        }
        let v = Vector::from_terms(s.basis_in(w.degree()).map(|e| (e, entry(rng, density))));
        psi.set(w, v).expect("degree 0");
    }
    psi
}

/// A random abelian structure conjugated by a random gauge, together with
/// the gauge `ψ: (L, λ') → (L, λ)`.
pub fn random_gauged(
    rng: &mut StdRng,
    max_top: i32,
    max_dim: usize,
) -> (CurvedStructure<Rat>, Multilinear<Rat>, CurvedStructure<Rat>) {
    let s = random_space(rng, max_top, max_dim);
    let (abelian, _) = random_abelian(rng, &s);
    let psi = random_gauge(rng, &s, 0.5);
    let conj = gauge_conjugate(&abelian, &psi).expect("unipotent gauge is invertible");
    (conj, psi, abelian)
}

/// A random structure with a contraction it can be transferred along.
///
/// The contraction inverts a random abelian differential `δ` on its pairs,
/// the structure is a gauge conjugate of `δ`, and the filtration raises each
/// pair source by one so that both `δ` and `η` preserve it. Candidates whose
/// perturbation is not filtered, or which have no operation of arity ≥ 2, are
/// redrawn.
pub fn random_transfer(rng: &mut StdRng, max_top: i32, max_dim: usize) -> (CurvedStructure<Rat>, Contraction) {
    loop {
        let s = random_space(rng, max_top, max_dim);
        let (abelian, pairs) = random_abelian(rng, &s);
        if pairs.is_empty() {
            continue;
        }
        let mut psi = random_gauge(rng, &s, 0.5);
        if rng.random_bool(0.5) {
            for e in s.basis() {
                psi.set(SymWord::single(e), Vector::basis(e)).expect("degree 0");
            }
        }
        let Ok(conj) = gauge_conjugate(&abelian, &psi) else {
            continue;
        };
        if conj.ops().max_arity() < 2 {
            continue;
        }
        let delta = abelian.lambda1();
        let eta = GradedMap::from_images(&s, &s, -1, |e| {
            pairs
                .iter()
                .find(|(_, b)| *b == e)
                .map_or_else(Vector::zero, |(a, _)| Vector::basis(*a))
        })
        .expect("degree -1");
        let weights = pairs
            .iter()
            .map(|(a, _)| (s.label(*a).to_string(), a.degree + 1))
            .collect();
        let c = Contraction::new(delta, eta, Filtration::Weights(weights)).expect("shapes");
        if c.validate(&conj).is_empty() {
            return (conj, c);
        }
    }
}

/// The product structure on `L ⊕ K`, with the elements of `K` relabelled
/// `k0, k1, …`. Returns the structure and the projection onto `L`.
pub fn direct_sum(
    a: &CurvedStructure<Rat>,
    b: &CurvedStructure<Rat>,
) -> (CurvedStructure<Rat>, GradedMap<Rat>) {
    let mut s = GradedSpace::new();
    for e in a.space().basis() {
        s.push(e.degree, a.space().label(e).to_string()).expect("distinct");
    }
    let shift = |e: BasisElem| BasisElem::new(e.degree, e.index + a.space().dim(e.degree));
    for (i, e) in b.space().basis().enumerate() {
        let got = s.push(e.degree, format!("k{i}")).expect("fresh label");
        debug_assert_eq!(got, shift(e));
    }
    let mut ops = Multilinear::zero(&s, &s, 1);
    for (w, v) in a.ops().iter() {
        ops.set(w.clone(), v.clone()).expect("degree rule");
    }
    for (w, v) in b.ops().iter() {
        let es: Vec<BasisElem> = w.elems().iter().map(|e| shift(*e)).collect();
        let nw = SymWord::from_sorted(es).expect("shift keeps order");
        let nv = Vector::from_terms(v.iter().map(|(e, c)| (shift(*e), c.clone())));
        ops.add_to(nw, &nv).expect("degree rule");
    }
    let proj = GradedMap::from_images(&s, a.space(), 0, |e| {
        if e.index < a.space().dim(e.degree) {
            Vector::basis(e)
        } else {
            Vector::zero()
        }
    })
    .expect("degree 0");
    (CurvedStructure::new(ops).expect("positive"), proj)
}

/// A random linear fibration `L → L'` whose kernel is an acyclic complex of
/// pairs in degrees `≥ 1`, disguised by a gauge transformation valued in the
/// kernel. Such morphisms satisfy the hypotheses of every reduction step.
pub fn random_reduction(rng: &mut StdRng) -> Morphism<Rat> {
    let (target, _, _) = random_gauged(rng, 4, 3);
    let top = target.top_degree().max(3);
    let mut k = GradedSpace::new();
    let npairs = rng.random_range(1..=2);
    for i in 0..npairs {
        let d = rng.random_range(1..top);
        k.push(d, format!("a{i}")).expect("fresh");
        k.push(d + 1, format!("b{i}")).expect("fresh");
    }
    let kops = {
        let mut ops = Multilinear::zero(&k, &k, 1);
        for i in 0..npairs {
            let a = k.find(&format!("a{i}")).expect("present");
            let b = k.find(&format!("b{i}")).expect("present");
            ops.set(SymWord::single(a), Vector::basis(b)).expect("degree rule");
        }
        CurvedStructure::new(ops).expect("positive")
    };
    let (sum, proj) = direct_sum(&target, &kops);
    let l = sum.space().clone();
    let in_k = |e: BasisElem| e.index >= target.space().dim(e.degree);
    let mut psi = Multilinear::zero(&l, &l, 0);
    for e in l.basis() {
        let mut v = Vector::basis(e);
        if !in_k(e) {
            for t in l.basis_in(e.degree).filter(|t| in_k(*t)) {
                v.add_term(t, entry(rng, 0.5));
            }
        }
        psi.set(SymWord::single(e), v).expect("degree 0");
    }
    for w in words(&l, 3, l.max_degree().unwrap_or(0)) {
        if w.len() < 2 {
            continue;
        }
        let v = Vector::from_terms(
            l.basis_in(w.degree()).filter(|t| in_k(*t)).map(|t| (t, entry(rng, 0.5))),
        );
        psi.set(w, v).expect("degree 0");
    }
    let conj = gauge_conjugate(&sum, &psi).expect("unipotent gauge");
    Morphism::linear(conj, target, &proj).expect("spaces match")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_relations() {
        assert!(e1().check_relations().passed());
        assert!(e2().check_relations().passed());
        assert!(e4().check_relations().passed());
        assert!(e5().check_relations().passed());
        assert!(e5_morphism().check().passed());
    }

    #[test]
    fn gauged_structures_are_valid() {
        let mut r = rng(7);
        let mut nontrivial = 0;
        for _ in 0..30 {
            let (conj, psi, abelian) = random_gauged(&mut r, 5, 6);
            assert!(conj.check_relations().passed(), "{conj:?}");
            let m = Morphism::new(conj.clone(), abelian, psi).unwrap();
            assert!(m.check().passed(), "{m:?}");
            if conj.ops().max_arity() >= 2 {
                nontrivial += 1;
            }
        }
        assert!(nontrivial > 5, "{nontrivial}");
    }
}
