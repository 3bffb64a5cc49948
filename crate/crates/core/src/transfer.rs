//! Homotopy transfer along a contraction, the one-step kernel reduction of a
//! linear morphism, and the iterated reduction pipeline.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, int, kernel_subspace, split_mono_retraction, BasisElem, GradedMap, GradedSpace,
    Rat, Scalar, Vector,
};
use crate::multilinear::Multilinear;
use crate::point::{hat, CurvedStructure, Morphism};
use crate::sym::{canonicalize, unshuffles, words, SymElem, SymWord};

/// A descending filtration, given by a weight per basis element: `F_p` is
/// spanned by the basis elements of weight at least `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Filtration {
    /// Weight equals degree.
    Natural,
    /// Degrees `level − 1` and `level` both get weight `level`; all other
    /// elements get their degree.
    Variation { level: i32 },
    /// Explicit weights by label; unlisted elements get their degree.
    Weights(BTreeMap<String, i32>),
}

impl Filtration {
    pub fn weight(&self, space: &GradedSpace, e: BasisElem) -> i32 {
        match self {
            Filtration::Natural => e.degree,
            Filtration::Variation { level } => {
                if e.degree == level - 1 {
                    *level
                } else {
                    e.degree
                }
            }
            Filtration::Weights(w) => w.get(space.label(e)).copied().unwrap_or(e.degree),
        }
    }

    pub fn word_weight(&self, space: &GradedSpace, w: &SymWord) -> i32 {
        w.elems().iter().map(|e| self.weight(space, *e)).sum()
    }

    /// Number of distinct filtration levels met by `space`.
    pub fn length(&self, space: &GradedSpace) -> usize {
        let ws: Vec<i32> = space.basis().map(|e| self.weight(space, e)).collect();
        match (ws.iter().min(), ws.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }
}

/// A contraction `η` of a differential `δ` on a graded space.
#[derive(Clone, PartialEq, Debug)]
pub struct Contraction {
    pub delta: GradedMap<Rat>,
    pub eta: GradedMap<Rat>,
    pub filtration: Filtration,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    DeltaSquare,
    EtaSquare,
    EtaDeltaEta,
    DeltaFiltration { input: String },
    EtaFiltration { input: String },
    Perturbation { word: String, output: String },
    SpaceMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DeltaSquare => write!(f, "δ² ≠ 0"),
            Violation::EtaSquare => write!(f, "η² ≠ 0"),
            Violation::EtaDeltaEta => write!(f, "ηδη ≠ η"),
            Violation::DeltaFiltration { input } => {
                write!(f, "δ lowers the filtration on {input}")
            }
            Violation::EtaFiltration { input } => {
                write!(f, "η lowers the filtration on {input}")
            }
            Violation::Perturbation { word, output } => write!(
                f,
                "perturbation entry on {word} has component {output} of filtered degree < 1"
            ),
            Violation::SpaceMismatch => write!(f, "structure and contraction spaces differ"),
        }
    }
}

impl Contraction {
    pub fn new(delta: GradedMap<Rat>, eta: GradedMap<Rat>, filtration: Filtration) -> Result<Self> {
        let s = delta.source();
        if delta.target() != s || eta.source() != s || eta.target() != s {
            return Err(Error::SpaceMismatch("δ and η must be endomorphisms of one space".into()));
        }
        if delta.degree() != 1 || eta.degree() != -1 {
            return Err(Error::DegreeRule("δ has degree 1 and η degree −1".into()));
        }
        Ok(Self {
            delta,
            eta,
            filtration,
        })
    }

    /// `δ = η = 0`.
    pub fn trivial(space: &GradedSpace) -> Self {
        Self {
            delta: GradedMap::zero(space, space, 1),
            eta: GradedMap::zero(space, space, -1),
            filtration: Filtration::Natural,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        self.delta.source()
    }

    /// `ιπ = 1 − [δ, η]`.
    pub fn projector(&self) -> GradedMap<Rat> {
        let de = self.delta.compose(&self.eta).expect("endomorphisms");
        let ed = self.eta.compose(&self.delta).expect("endomorphisms");
        let id = GradedMap::identity(self.space());
        id.sub(&de.add(&ed).expect("same shape")).expect("same shape")
    }

    /// The perturbation `λ − δ` of a structure on the same space.
    pub fn perturbation<R: Scalar>(&self, s: &CurvedStructure<R>) -> Result<Multilinear<R>> {
        if s.space() != self.space() {
            return Err(Error::SpaceMismatch("structure and contraction spaces differ".into()));
        }
        s.ops().sub(&Multilinear::from_linear(&self.delta.lift()))
    }

    fn map_violations(
        &self,
        m: &GradedMap<Rat>,
        make: impl Fn(String) -> Violation,
    ) -> Vec<Violation> {
        let sp = self.space();
        let mut out = Vec::new();
        for e in sp.basis() {
            let w = self.filtration.weight(sp, e);
            if m.image(e).iter().any(|(t, _)| self.filtration.weight(sp, *t) < w) {
                out.push(make(sp.label(e).to_string()));
            }
        }
        out
    }

    /// Every violated axiom, in a fixed order. Empty means valid.
    pub fn validate<R: Scalar>(&self, s: &CurvedStructure<R>) -> Vec<Violation> {
        let mut out = Vec::new();
        if s.space() != self.space() {
            return vec![Violation::SpaceMismatch];
        }
        if !self.delta.compose(&self.delta).expect("endo").is_zero() {
            out.push(Violation::DeltaSquare);
        }
        let ee = self.eta.compose(&self.eta).expect("endo");
        if !ee.is_zero() {
            out.push(Violation::EtaSquare);
        }
        let ede = self.eta.compose(&self.delta).expect("endo").compose(&self.eta).expect("endo");
        if ede != self.eta {
            out.push(Violation::EtaDeltaEta);
        }
        out.extend(self.map_violations(&self.delta, |input| Violation::DeltaFiltration { input }));
        out.extend(self.map_violations(&self.eta, |input| Violation::EtaFiltration { input }));
        let sp = self.space();
        let pert = self.perturbation(s).expect("same space");
        for (w, v) in pert.iter() {
            let need = self.filtration.word_weight(sp, w) + 1;
            if let Some((t, _)) = v.iter().find(|(t, _)| self.filtration.weight(sp, **t) < need) {
                out.push(Violation::Perturbation {
                    word: pert.word_label(w),
                    output: sp.label(*t).to_string(),
                });
            }
        }
        out
    }

    fn axioms_hold(&self) -> Result<()> {
        let de = self.delta.compose(&self.delta)?;
        let ee = self.eta.compose(&self.eta)?;
        let ede = self.eta.compose(&self.delta)?.compose(&self.eta)?;
        if !de.is_zero() || !ee.is_zero() || ede != self.eta {
            return Err(Error::InvalidContraction(
                "δ² = 0, η² = 0 and ηδη = η are required".into(),
            ));
        }
        Ok(())
    }
}

/// `H = ker[δ, η]` with inclusion `ι` and projection `π`. The basis of `H`
/// is given by the leftmost pivot columns of `1 − [δ, η]`, labelled after
/// those columns.
pub fn compute_h(c: &Contraction) -> Result<(GradedSpace, GradedMap<Rat>, GradedMap<Rat>)> {
    let p = c.projector();
    let sp = c.space();
    let mut h = GradedSpace::new();
    let mut cols: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for d in sp.degrees() {
        let piv = p.block(d).column_basis();
        for &j in &piv {
            h.push(d, sp.labels_in(d)[j].clone())?;
        }
        cols.insert(d, piv);
    }
    let mut iota = GradedMap::zero(&h, sp, 0);
    let mut pi = GradedMap::zero(sp, &h, 0);
    for d in h.degrees() {
        let basis = p.block(d).select_cols(&cols[&d]);
        let coords = basis
            .solve(&p.block(d))
            .expect("columns of an idempotent lie in its column space");
        iota.set_block(d, basis)?;
        pi.set_block(d, coords)?;
    }
    Ok((h, iota, pi))
}

/// The output of homotopy transfer.
#[derive(Clone, PartialEq, Debug)]
pub struct TransferResult<R = Rat> {
    pub contraction: Contraction,
    pub h: GradedSpace,
    pub iota: GradedMap<Rat>,
    pub pi: GradedMap<Rat>,
    /// The full transferred structure `δ + μ` on `H`.
    pub mu: CurvedStructure<R>,
    /// `φ: (H, δ + μ) → (L, λ)`.
    pub phi: Morphism<R>,
    /// `π̃: (L, λ) → (H, δ + μ)`.
    pub pitilde: Morphism<R>,
    pub etatilde: GradedMap<R>,
    /// Fixed-point sweeps used for `φ`, including the confirming sweep.
    pub sweeps: usize,
}

fn sweep_bound(c: &Contraction) -> usize {
    c.filtration.length(c.space()) + 1
}

/// Transfers `s` along `c`.
pub fn transfer<R: Scalar>(s: &CurvedStructure<R>, c: &Contraction) -> Result<TransferResult<R>> {
    c.axioms_hold()?;
    let pert = c.perturbation(s)?;
    let (h, iota, pi) = compute_h(c)?;
    let l = c.space().clone();

    let top = l.max_degree().unwrap_or(0);
    let mut hwords = words(&h, top.max(0) as usize, top);
    hwords.retain(|w| !w.is_empty());

    let bound = sweep_bound(c);
    let iota_r: GradedMap<R> = iota.lift();
    let mut phi = Multilinear::from_linear(&iota_r);
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        if sweeps > bound {
            return Err(Error::NoConvergence { sweeps: bound });
        }
        let mut next = Multilinear::from_linear(&iota_r);
        for w in &hwords {
            let v = c.eta.apply_to(&pert.eval(&hat(&phi, w)));
            next.add_to(w.clone(), &v.neg())?;
        }
        if next == phi {
            break;
        }
        phi = next;
    }

    let mut mu_ops = Multilinear::zero(&h, &h, 1);
    for w in words(&h, top.max(0) as usize, top - 1) {
        mu_ops.set(w.clone(), pi.apply_to(&s.ops().eval(&hat(&phi, &w))))?;
    }
    let mu = CurvedStructure::new(mu_ops)?;
    let phi_m = Morphism::new(mu.clone(), s.clone(), phi)?;

    let pit = pitilde_table(c, &pert, &pi, &h)?;
    let pitilde = Morphism::new(s.clone(), mu.clone(), pit)?;
    let etatilde = eta_tilde(c, &pert.linear())?;

    Ok(TransferResult {
        contraction: c.clone(),
        h,
        iota,
        pi,
        mu,
        phi: phi_m,
        pitilde,
        etatilde,
        sweeps,
    })
}

/// `η̃ = Σ_r (−1)^r η(λ₁η)^r` for the linear perturbation `λ₁`.
pub fn eta_tilde<R: Scalar>(c: &Contraction, lambda1: &GradedMap<R>) -> Result<GradedMap<R>> {
    let eta: GradedMap<R> = c.eta.lift();
    let step = lambda1.compose(&eta)?.scale(&int(-1));
    let mut term = eta.clone();
    let mut sum = eta;
    for _ in 0..=sweep_bound(c) + c.space().total_dim() {
        term = term.compose(&step)?;
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&term)?;
    }
    Err(Error::NoConvergence {
        sweeps: sweep_bound(c),
    })
}

/// The symmetric tensor-trick extension of `η` to `Sym(L)`: on a word of
/// length `k`, `η` hits one letter, `P = ιπ` the letters of a chosen subset
/// of size `j`, and the identity the rest, weighted by `1 / (C(k, j)(k − j))`.
pub fn eta_hat<R: Scalar>(c: &Contraction, p: &GradedMap<Rat>, w: &SymWord) -> SymElem<R> {
    let k = w.len();
    let mut out = SymElem::zero();
    for j in 0..k {
        for u in unshuffles(w, j) {
            let mut left = SymElem::one();
            for e in u.left.elems() {
                left = left.mul(&SymElem::from_vector(&p.image(*e).map_coeffs(R::from_rat)));
            }
            if left.is_zero() {
                continue;
            }
            let mut right = SymElem::zero();
            for v in unshuffles(&u.right, 1) {
                let img = c.eta.image(v.left.elems()[0]).map_coeffs(R::from_rat);
                let t = SymElem::from_vector(&img).mul(&SymElem::word(v.right));
                right.add_scaled(&t, &R::from_rat(&int(v.coeff)));
            }
            let sign = if u.left.is_odd() { -1 } else { 1 };
            let coeff = int(u.coeff * sign) / (binomial(k, j) * int((k - j) as i64));
            out.add_scaled(&left.mul(&right), &R::from_rat(&coeff));
        }
    }
    out
}

fn eta_hat_elem<R: Scalar>(c: &Contraction, p: &GradedMap<Rat>, x: &SymElem<R>) -> SymElem<R> {
    let mut out = SymElem::zero();
    for (w, coef) in x.iter() {
        out.add_scaled(&eta_hat(c, p, w), coef);
    }
    out
}

/// Components of `π̃`: `π̃(w) = π(Σ_r (−Λ η̂)^r w)₁`, where `Λ` is the
/// coderivation of the perturbation.
fn pitilde_table<R: Scalar>(
    c: &Contraction,
    pert: &Multilinear<R>,
    pi: &GradedMap<Rat>,
    h: &GradedSpace,
) -> Result<Multilinear<R>> {
    let l = c.space();
    let p = c.projector();
    let htop = h.max_degree().unwrap_or(0);
    let mut out = Multilinear::zero(l, h, 0);
    let bound = sweep_bound(c) + htop.max(0) as usize + 1;
    for w in words(l, htop.max(0) as usize, htop) {
        if w.is_empty() {
            continue;
        }
        let mut term: SymElem<R> = SymElem::word(w.clone());
        let mut total = term.clone();
        let mut steps = 0;
        loop {
            let eh = eta_hat_elem(c, &p, &term);
            let mut next = SymElem::zero();
            for (x, coef) in eh.iter() {
                next.add_scaled(&crate::point::coderivation_of(pert, x), &coef.neg());
            }
            if next.is_zero() {
                break;
            }
            steps += 1;
            if steps > bound {
                return Err(Error::NoConvergence { sweeps: bound });
            }
            total = total.add(&next);
            term = next;
        }
        out.set(w, pi.apply_to(&total.linear_part()))?;
    }
    Ok(out)
}

/// Evaluates a multilinear table on vectors `λ(v₁, …, v_p)`.
fn eval_on(table: &Multilinear<Rat>, vs: &[Vector<Rat>]) -> Vector<Rat> {
    let mut x = SymElem::one();
    for v in vs {
        x = x.mul(&SymElem::from_vector(v));
    }
    table.eval(&x)
}

/// `φ` and `μ` up to arity 3 by explicit unrolling of the recursion into
/// trees, independent of the fixed-point solver. `φ` is returned without
/// arity 0, `μ` with it.
pub fn expansion_oracle(
    s: &CurvedStructure<Rat>,
    c: &Contraction,
) -> Result<(Multilinear<Rat>, Multilinear<Rat>)> {
    c.axioms_hold()?;
    let pert = c.perturbation(s)?;
    let (h, iota, pi) = compute_h(c)?;
    let l = c.space();
    let lam1 = pert.linear();
    // N = Σ (−ηλ₁)^r, the resolvent of the linear self-loop.
    let step = c.eta.compose(&lam1)?.scale(&int(-1));
    let mut n = GradedMap::identity(l);
    let mut term = GradedMap::identity(l);
    for _ in 0..=l.total_dim() + sweep_bound(c) {
        term = step.compose(&term)?;
        if term.is_zero() {
            break;
        }
        n = n.add(&term)?;
    }
    if !term.is_zero() {
        return Err(Error::NoConvergence { sweeps: sweep_bound(c) });
    }
    let root = |v: Vector<Rat>| n.apply(&c.eta.apply(&v)).neg();

    let top = l.max_degree().unwrap_or(0);
    let mut phi = Multilinear::zero(&h, l, 0);
    let mut mu = Multilinear::zero(&h, &h, 1);
    let sign = |a: BasisElem, b: BasisElem| if a.is_odd() && b.is_odd() { int(-1) } else { int(1) };
    let phi1 = |e: BasisElem| n.apply(&iota.image(e));
    // Arity 0 and 1.
    mu.set(SymWord::empty(), pi.apply(&s.curvature()))?;
    for e in h.basis() {
        let v = phi1(e);
        mu.set(SymWord::single(e), pi.apply(&s.lambda1().apply(&v)))?;
        phi.set(SymWord::single(e), v)?;
    }
    // Arity 2: one binary tree.
    let mut phi2: BTreeMap<(BasisElem, BasisElem), Vector<Rat>> = BTreeMap::new();
    for w in words(&h, 2, top) {
        if w.len() != 2 {
            continue;
        }
        let (x, y) = (w.elems()[0], w.elems()[1]);
        let inner = eval_on(&pert, &[phi1(x), phi1(y)]);
        let v = root(inner.clone());
        phi2.insert((x, y), v.clone());
        phi.set(w.clone(), v.clone())?;
        let lam_full = s.lambda1().apply(&v).add(&eval_on(&s.ops().arity_part(2), &[phi1(x), phi1(y)]));
        mu.set(w, pi.apply(&lam_full))?;
    }
    let p2 = |a: BasisElem, b: BasisElem| -> Vector<Rat> {
        match canonicalize(&[a, b]) {
            None => Vector::zero(),
            Some((cw, sg)) => phi2
                .get(&(cw.elems()[0], cw.elems()[1]))
                .cloned()
                .unwrap_or_default()
                .scale(&int(sg)),
        }
    };
    // Arity 3: the ternary corolla and three binary-over-binary trees.
    for w in words(&h, 3, top) {
        if w.len() != 3 {
            continue;
        }
        let (x, y, z) = (w.elems()[0], w.elems()[1], w.elems()[2]);
        let mut inner = eval_on(&pert.arity_part(3), &[phi1(x), phi1(y), phi1(z)]);
        let mut full = eval_on(&s.ops().arity_part(3), &[phi1(x), phi1(y), phi1(z)]);
        let trees = [
            (p2(x, y), phi1(z), int(1)),
            (p2(x, z), phi1(y), sign(y, z)),
            (p2(y, z), phi1(x), sign(x, y) * sign(x, z)),
        ];
        for (a, b, sg) in trees {
            inner.add_scaled(&eval_on(&pert.arity_part(2), &[a.clone(), b.clone()]), &sg);
            full.add_scaled(&eval_on(&s.ops().arity_part(2), &[a, b]), &sg);
        }
        let v = root(inner);
        full = full.add(&s.lambda1().apply(&v));
        phi.set(w.clone(), v)?;
        mu.set(w, pi.apply(&full))?;
    }
    Ok((phi, mu))
}

/// The output of one kernel-reduction step at degree `k`.
#[derive(Clone, PartialEq, Debug)]
pub struct ReductionStep<R = Rat> {
    pub k: i32,
    pub transfer: TransferResult<R>,
    /// `φ ∘ ι: (H, δ + μ) → L'`, linear.
    pub composed: Morphism<R>,
}

fn constant(m: &GradedMap<impl Scalar>, what: &str) -> Result<GradedMap<Rat>> {
    m.to_rat()
        .map_err(|_| Error::HypothesisFailed(format!("{what} has non-constant coefficients")))
}

fn check_classical(m: &Morphism<Rat>) -> Result<()> {
    if !m.source().curvature().is_zero() || !m.target().curvature().is_zero() {
        return Err(Error::NotClassical);
    }
    Ok(())
}

fn degrees_of(m: &GradedMap<Rat>) -> Vec<i32> {
    let mut ds: Vec<i32> = m.source().degrees().chain(m.target().degrees()).collect();
    ds.sort();
    ds.dedup();
    ds
}

/// Removes the kernel of `φ₁` in degree `k` by one transfer. The morphism
/// must be linear over a point with vanishing curvatures.
pub fn firstcase_reduce(m: &Morphism<Rat>, k: i32) -> Result<ReductionStep> {
    check_classical(m)?;
    reduce_at(m, k)
}

/// [`firstcase_reduce`] over any coefficient ring. `φ₁` and `λ₁` must have
/// constant coefficients; curvature is carried along unchanged.
pub fn reduce_at<R: Scalar>(m: &Morphism<R>, k: i32) -> Result<ReductionStep<R>> {
    if !m.is_linear() {
        return Err(Error::HypothesisFailed("morphism must be linear".into()));
    }
    if k < 2 {
        return Err(Error::HypothesisFailed(format!("reduction degree must be ≥ 2, got {k}")));
    }
    let phi1 = constant(&m.phi1(), "φ₁")?;
    for d in degrees_of(&phi1) {
        if d > k && !phi1.is_iso_at(d) {
            return Err(Error::HypothesisFailed(format!("φ₁ is not an isomorphism in degree {d}")));
        }
        if d <= k && !phi1.is_epi_at(d) {
            return Err(Error::HypothesisFailed(format!("φ₁ is not surjective in degree {d}")));
        }
    }
    let s = m.source();
    let l = s.space();
    let (_, j) = kernel_subspace(&phi1)?;
    let theta = split_mono_retraction(&j)?;
    let lam1 = constant(&s.lambda1(), "λ₁")?;
    let a = theta.compose(&lam1)?.compose(&j)?.block(k - 1);
    let chi = a.right_inverse().ok_or(Error::NotSurjectiveOnKernel { degree: k })?;

    let mut delta = GradedMap::zero(l, l, 1);
    delta.set_block(k - 1, lam1.block(k - 1))?;
    let mut eta = GradedMap::zero(l, l, -1);
    eta.set_block(k, j.block(k - 1).mul(&chi)?.mul(&theta.block(k))?)?;
    let c = Contraction::new(delta, eta, Filtration::Variation { level: k })?;
    let t = transfer(s, &c)?;
    let comps = crate::point::compose_tables(m.comps(), t.phi.comps())?;
    let composed = Morphism::new(t.mu.clone(), m.target().clone(), comps)?;
    if !composed.is_linear() {
        return Err(Error::HypothesisFailed("φ ∘ ι is not linear".into()));
    }
    Ok(ReductionStep {
        k,
        transfer: t,
        composed,
    })
}

/// The rank audit of a reduction: `φ₁` iso in degrees `≥ k`, epi below.
pub fn reduction_audit<R: Scalar>(m: &Morphism<R>, k: i32) -> bool {
    let Ok(phi1) = m.phi1().to_rat() else {
        return false;
    };
    degrees_of(&phi1).into_iter().all(|d| {
        if d >= k {
            phi1.is_iso_at(d)
        } else {
            phi1.is_epi_at(d)
        }
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct Pipeline<R = Rat> {
    pub steps: Vec<ReductionStep<R>>,
    /// The final linear morphism, iso in degrees ≥ 2.
    pub result: Morphism<R>,
}

/// Reduces the kernel from the top degree down to degree 2, over a point.
pub fn step1_pipeline(m: &Morphism<Rat>) -> Result<Pipeline> {
    check_classical(m)?;
    reduce_all(m)
}

/// [`step1_pipeline`] over any coefficient ring (constant linear parts).
pub fn reduce_all<R: Scalar>(m: &Morphism<R>) -> Result<Pipeline<R>> {
    let top = m.source().top_degree().max(m.target().top_degree());
    let mut current = m.clone();
    let mut steps = Vec::new();
    for k in (2..=top).rev() {
        let phi1 = constant(&current.phi1(), "φ₁")?;
        if degrees_of(&phi1).iter().all(|d| *d < k || phi1.is_iso_at(*d)) {
            continue;
        }
        let step = reduce_at(&current, k)?;
        current = step.composed.clone();
        steps.push(step);
    }
    Ok(Pipeline {
        steps,
        result: current,
    })
}

/// The defect `[δ + λ₁, η̃] − (1 − φ₁π̃₁)`; zero when the identity holds.
pub fn etatilde_defect<R: Scalar>(
    s: &CurvedStructure<R>,
    t: &TransferResult<R>,
) -> Result<GradedMap<R>> {
    let d = s.lambda1();
    let lhs = d.compose(&t.etatilde)?.add(&t.etatilde.compose(&d)?)?;
    let rhs = GradedMap::identity(s.space()).sub(&t.phi.phi1().compose(&t.pitilde.phi1())?)?;
    lhs.sub(&rhs)
}
