//! L∞-bundles over polynomial affine charts.
//!
//! A chart is a trivialized graded bundle over affine space whose structure
//! coefficients are polynomials in the base coordinates. Points are given
//! positionally, in the order of the chart's coordinates.

use crate::error::{Error, Result};
use crate::linalg::{
    cone_defects, fmt_rat, jacobian_at, kernel_subspace, Complex, GradedMap, GradedSpace, Matrix,
    Poly, PolyRing, Rat, Scalar,
};
use crate::multilinear::Multilinear;
use crate::point::{CheckReport, CurvedStructure, EtaleReport, Morphism};
use crate::transfer::{reduce_all, ReductionStep};

#[derive(Clone, PartialEq, Debug)]
pub struct BundleChart {
    ring: PolyRing,
    structure: CurvedStructure<Poly>,
}

fn check_table(ring: &PolyRing, t: &Multilinear<Poly>) -> Result<()> {
    for (_, v) in t.iter() {
        for (_, c) in v.iter() {
            ring.check(c)?;
        }
    }
    Ok(())
}

fn check_point(ring: &PolyRing, p: &[Rat]) -> Result<()> {
    if p.len() != ring.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, chart has {}",
            p.len(),
            ring.dim()
        )));
    }
    Ok(())
}

pub fn fmt_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}

impl BundleChart {
    pub fn new(ring: PolyRing, structure: CurvedStructure<Poly>) -> Result<Self> {
        check_table(&ring, structure.ops())?;
        Ok(Self { ring, structure })
    }

    /// A chart with constant coefficients.
    pub fn constant(ring: PolyRing, s: &CurvedStructure<Rat>) -> Self {
        Self {
            ring,
            structure: s.map_coeffs(|c| Poly::constant(c.clone())),
        }
    }

    /// The chart over a point.
    pub fn point(s: &CurvedStructure<Rat>) -> Self {
        Self::constant(PolyRing::point(), s)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn structure(&self) -> &CurvedStructure<Poly> {
        &self.structure
    }

    pub fn space(&self) -> &GradedSpace {
        self.structure.space()
    }

    /// Components of `λ₀` in the degree-1 basis.
    pub fn curvature_components(&self) -> Vec<Poly> {
        self.structure.curvature().dense_in(self.space(), 1)
    }

    pub fn classical_check(&self, p: &[Rat]) -> Result<bool> {
        check_point(&self.ring, p)?;
        Ok(self.structure.curvature().eval(p)?.is_zero())
    }

    pub fn fiber_at(&self, p: &[Rat]) -> Result<CurvedStructure<Rat>> {
        check_point(&self.ring, p)?;
        CurvedStructure::new(self.structure.ops().eval_at(p)?)
    }

    /// The space `TM ⊕ L` with `TM` in degree 0.
    pub fn tangent_space(&self) -> GradedSpace {
        let mut t = GradedSpace::new();
        for v in self.ring.vars() {
            t.push(0, format!("∂{v}")).expect("coordinate names are distinct");
        }
        for d in self.space().degrees() {
            for l in self.space().labels_in(d) {
                t.push(d, l.clone()).expect("fiber labels are distinct");
            }
        }
        t
    }

    /// `TM|_P → L¹|_P → L²|_P → …`, with the Jacobian of `λ₀` then `λ₁(P)`.
    pub fn tangent_at(&self, p: &[Rat]) -> Result<Complex<Rat>> {
        if !self.classical_check(p)? {
            return Err(Error::NotClassical);
        }
        let t = self.tangent_space();
        let mut d = GradedMap::zero(&t, &t, 1);
        if self.ring.dim() > 0 && self.space().dim(1) > 0 {
            d.set_block(0, jacobian_at(&self.curvature_components(), self.ring.dim(), p)?)?;
        }
        let l1 = self.structure.lambda1().eval(p)?;
        for k in self.space().degrees() {
            if self.space().dim(k + 1) > 0 {
                d.set_block(k, l1.block(k))?;
            }
        }
        Complex::new(d)
    }

    /// Renders a coefficient with this chart's coordinate names.
    pub fn format_poly(&self, p: &Poly) -> String {
        self.ring.format(p)
    }
}

/// A bundle morphism over a polynomial base map `f`, one entry per target
/// coordinate, with components `L → f*L'`.
#[derive(Clone, PartialEq, Debug)]
pub struct BundleMorphism {
    source: BundleChart,
    target: BundleChart,
    base_map: Vec<Poly>,
    comps: Multilinear<Poly>,
}

impl BundleMorphism {
    pub fn new(
        source: BundleChart,
        target: BundleChart,
        base_map: Vec<Poly>,
        comps: Multilinear<Poly>,
    ) -> Result<Self> {
        if base_map.len() != target.ring.dim() {
            return Err(Error::ShapeMismatch(format!(
                "base map has {} entries, target chart has {} coordinates",
                base_map.len(),
                target.ring.dim()
            )));
        }
        for f in &base_map {
            source.ring.check(f)?;
        }
        check_table(&source.ring, &comps)?;
        let m = Self {
            source,
            target,
            base_map,
            comps,
        };
        m.as_morphism()?;
        Ok(m)
    }

    /// The identity over the identity of the base.
    pub fn identity(c: &BundleChart) -> Self {
        Self {
            source: c.clone(),
            target: c.clone(),
            base_map: (0..c.ring.dim()).map(Poly::var).collect(),
            comps: Multilinear::from_linear(&GradedMap::identity(c.space())),
        }
    }

    pub fn source(&self) -> &BundleChart {
        &self.source
    }

    pub fn target(&self) -> &BundleChart {
        &self.target
    }

    pub fn base_map(&self) -> &[Poly] {
        &self.base_map
    }

    pub fn comps(&self) -> &Multilinear<Poly> {
        &self.comps
    }

    pub fn is_linear(&self) -> bool {
        self.comps.max_arity() <= 1
    }

    /// `f*λ'`, with coefficients in the source coordinates.
    pub fn pullback_target(&self) -> Result<CurvedStructure<Poly>> {
        CurvedStructure::new(self.target.structure.ops().substitute(&self.base_map)?)
    }

    /// The morphism `(L, λ) → (f*L', f*λ')` over the source base.
    pub fn as_morphism(&self) -> Result<Morphism<Poly>> {
        Morphism::new(
            self.source.structure.clone(),
            self.pullback_target()?,
            self.comps.clone(),
        )
    }

    pub fn check(&self) -> Result<CheckReport<Poly>> {
        Ok(self.as_morphism()?.check())
    }

    pub fn base_point(&self, p: &[Rat]) -> Result<Vec<Rat>> {
        check_point(&self.source.ring, p)?;
        self.base_map.iter().map(|f| f.eval(p)).collect()
    }

    pub fn base_jacobian(&self, p: &[Rat]) -> Result<Matrix<Rat>> {
        jacobian_at(&self.base_map, self.source.ring.dim(), p)
    }

    /// `df ⊕ φ₁(P)` between tangent complexes.
    pub fn tangent_map(&self, p: &[Rat]) -> Result<GradedMap<Rat>> {
        let (a, b) = (self.source.tangent_space(), self.target.tangent_space());
        let mut m = GradedMap::zero(&a, &b, 0);
        m.set_block(0, self.base_jacobian(p)?)?;
        let phi1 = self.comps.linear().eval(p)?;
        for k in self.source.space().degrees() {
            m.set_block(k, phi1.block(k))?;
        }
        Ok(m)
    }

    pub fn etale_at(&self, p: &[Rat]) -> Result<EtaleReport> {
        let q = self.base_point(p)?;
        let a = self.source.tangent_at(p)?;
        let b = self.target.tangent_at(&q)?;
        let defects = cone_defects(&self.tangent_map(p)?, &a, &b);
        Ok(EtaleReport {
            etale: defects.is_empty(),
            cone_defects: defects,
        })
    }

    pub fn fibration_at(&self, p: &[Rat]) -> Result<FibrationPoint> {
        let df = self.base_jacobian(p)?;
        let submersion = df.rank() == df.rows();
        let phi1 = self.comps.linear().eval(p)?;
        let not_surjective = self
            .target
            .space()
            .degrees()
            .filter(|&d| !phi1.is_epi_at(d))
            .collect();
        Ok(FibrationPoint {
            point: p.to_vec(),
            df,
            submersion,
            not_surjective,
        })
    }

    pub fn fibration_check(&self, points: &[Vec<Rat>]) -> Result<Vec<FibrationPoint>> {
        points.iter().map(|p| self.fibration_at(p)).collect()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FibrationPoint {
    pub point: Vec<Rat>,
    pub df: Matrix<Rat>,
    pub submersion: bool,
    /// Degrees in which `φ₁(P)` is not surjective.
    pub not_surjective: Vec<i32>,
}

impl FibrationPoint {
    pub fn passed(&self) -> bool {
        self.submersion && self.not_surjective.is_empty()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SplittingData {
    /// `K = ker φ₁` in degree 1, labelled after its free columns.
    pub kernel: GradedSpace,
    /// Inclusion `K¹ → L¹`.
    pub j: Matrix<Rat>,
    /// Retraction `θ: L¹ → K¹` with `θ j = id`.
    pub theta: Matrix<Rat>,
    /// Basis of the complement `Ẽ¹ = ker θ`, as columns.
    pub complement: Matrix<Rat>,
    /// `σ: f*L'¹ → Ẽ¹`, inverse to `φ₁` on `Ẽ¹`.
    pub sigma: Matrix<Rat>,
    pub u: Vec<Poly>,
    /// `f*λ'₀` in the degree-1 basis of `L'`.
    pub t: Vec<Poly>,
    /// Whether `λ₀ = j u + σ f*t` holds as polynomials.
    pub reconstructs: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SimpleSubbundle {
    /// Equations of `Y`.
    pub equations: Vec<Poly>,
    /// Basis of `E¹` inside `L¹`, as columns.
    pub e1: Matrix<Rat>,
    /// Degrees of the retained higher bundle.
    pub higher: Vec<i32>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SplitCertificate {
    pub point: Vec<Rat>,
    /// `(∇u) ∘ j` on `ker df`.
    pub regularity: Matrix<Rat>,
    /// `df` on `TY = ker Du`.
    pub diffeo: Matrix<Rat>,
    pub local_diffeo: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Split {
    pub data: SplittingData,
    pub subbundle: SimpleSubbundle,
    pub certificates: Vec<SplitCertificate>,
}

fn mat_vec_poly(m: &Matrix<Rat>, v: &[Poly]) -> Vec<Poly> {
    (0..m.rows())
        .map(|i| {
            let mut acc = Poly::zero();
            for (j, x) in v.iter().enumerate() {
                acc = Scalar::add(&acc, &x.scale(m.get(i, j)));
            }
            acc
        })
        .collect()
}

fn is_invertible(m: &Matrix<Rat>) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

/// Splits the curvature of a linear morphism whose `φ₁` is constant, onto
/// in every degree and an isomorphism in degrees `≥ 2`.
pub fn lastcase_split(m: &BundleMorphism, points: &[Vec<Rat>]) -> Result<Split> {
    if !m.is_linear() {
        return Err(Error::HypothesisFailed("morphism must be linear".into()));
    }
    let phi1 = m.comps.linear().to_rat().map_err(|_| Error::NonConstantKernel)?;
    let l = m.source.space();
    for d in l.degrees().chain(m.target.space().degrees()) {
        if d >= 2 && !phi1.is_iso_at(d) {
            return Err(Error::HypothesisFailed(format!(
                "φ₁ is not an isomorphism in degree {d}"
            )));
        }
    }
    if !phi1.is_epi_at(1) {
        return Err(Error::HypothesisFailed("φ₁ is not surjective in degree 1".into()));
    }
    for f in m.fibration_check(points)? {
        if !f.passed() {
            return Err(Error::HypothesisFailed(format!(
                "not a fibration at {}",
                fmt_point(&f.point)
            )));
        }
    }
    let (kernel, incl) = kernel_subspace(&phi1)?;
    let j = incl.block(1);
    let theta = j.left_inverse().ok_or(Error::NotInjective { degree: 1 })?;
    let complement = theta.kernel();
    let b = phi1.block(1);
    let restricted = b.mul(&complement)?;
    let sigma = complement.mul(&restricted.inverse()?)?;

    let lam0 = m.source.curvature_components();
    let u = mat_vec_poly(&theta, &lam0);
    let t = m.pullback_target()?.curvature().dense_in(m.target.space(), 1);
    let ju = mat_vec_poly(&j, &u);
    let st = mat_vec_poly(&sigma, &t);
    let reconstructs = lam0
        .iter()
        .zip(ju.iter().zip(&st))
        .all(|(l, (a, b))| *l == Scalar::add(a, b));

    let n = m.source.ring.dim();
    let mut certificates = Vec::new();
    for p in points {
        if !m.source.classical_check(p)? {
            return Err(Error::NotClassical);
        }
        let df = m.base_jacobian(p)?;
        let du = jacobian_at(&u, n, p)?;
        let regularity = du.mul(&df.kernel())?;
        if !is_invertible(&regularity) {
            return Err(Error::RegularityFails(fmt_point(p)));
        }
        let diffeo = df.mul(&du.kernel())?;
        certificates.push(SplitCertificate {
            point: p.clone(),
            local_diffeo: is_invertible(&diffeo),
            regularity,
            diffeo,
        });
    }
    let higher = l.degrees().filter(|&d| d >= 2).collect();
    Ok(Split {
        subbundle: SimpleSubbundle {
            equations: u.clone(),
            e1: complement.clone(),
            higher,
        },
        data: SplittingData {
            kernel: kernel.truncate_below(1),
            j,
            theta,
            complement,
            sigma,
            u,
            t,
            reconstructs,
        },
        certificates,
    })
}

/// An explicit local section `g: N → Y ⊂ M` of an affine fibration, with
/// the bundle map `L' → E¹ ⊕ L^{≥2}` over it.
#[derive(Clone, PartialEq, Debug)]
pub struct Section {
    pub base_map: Vec<Poly>,
    pub bundle: BundleMorphism,
    /// `f ∘ g = id`.
    pub right_inverse: bool,
    /// `u ∘ g = 0`.
    pub lands_in_y: bool,
    /// `g ∘ f = id` on `Y`.
    pub left_inverse_on_y: bool,
    /// `φ₁ ∘ s = id`.
    pub splits_phi: bool,
    pub morphism: bool,
}

impl Section {
    pub fn passed(&self) -> bool {
        self.right_inverse && self.lands_in_y && self.left_inverse_on_y && self.splits_phi && self.morphism
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct PointMatch {
    pub point: Vec<Rat>,
    pub image: Vec<Rat>,
    pub image_classical: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Recap {
    pub steps: Vec<ReductionStep<Poly>>,
    /// The morphism after the kernel reductions.
    pub reduced: BundleMorphism,
    pub split: Split,
    /// `Err` carries the reason no section was synthesized.
    pub section: std::result::Result<Section, String>,
    /// Supplied classical points lying on `Y`, with their images.
    pub points_on_y: Vec<PointMatch>,
    /// Images of the points on `Y` are pairwise distinct and classical.
    pub bijective_on_points: bool,
}

/// Reduces the kernel of `φ₁` from the top degree down to 2, then splits
/// the curvature and, when possible, builds a section.
pub fn recap_pipeline(m: &BundleMorphism, points: &[Vec<Rat>]) -> Result<Recap> {
    if !m.is_linear() {
        return Err(Error::HypothesisFailed("morphism must be linear".into()));
    }
    let pipe = reduce_all(&m.as_morphism()?)?;
    let reduced = BundleMorphism {
        source: BundleChart::new(m.source.ring.clone(), pipe.result.source().clone())?,
        target: m.target.clone(),
        base_map: m.base_map.clone(),
        comps: pipe.result.comps().clone(),
    };
    let split = lastcase_split(&reduced, points)?;

    let mut points_on_y = Vec::new();
    for p in points {
        let on_y = split
            .data
            .u
            .iter()
            .map(|u| u.eval(p))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|x| x.is_zero());
        if on_y {
            let image = reduced.base_point(p)?;
            let image_classical = reduced.target.classical_check(&image)?;
            points_on_y.push(PointMatch {
                point: p.clone(),
                image,
                image_classical,
            });
        }
    }
    let mut images: Vec<&Vec<Rat>> = points_on_y.iter().map(|q| &q.image).collect();
    images.sort();
    images.dedup();
    let bijective_on_points = images.len() == points_on_y.len()
        && points_on_y.iter().all(|q| q.image_classical);

    let section = synthesize_section(&reduced, &split).map_err(|e| e.to_string());
    Ok(Recap {
        steps: pipe.steps,
        reduced,
        split,
        section,
        points_on_y,
        bijective_on_points,
    })
}

fn affine(ps: &[Poly], n: usize, what: &str) -> Result<(Matrix<Rat>, Vec<Rat>)> {
    let mut a = Matrix::zeros(ps.len(), n);
    let mut c = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let (lin, c0) = p
            .affine_parts(n)
            .ok_or_else(|| Error::SectionNotSynthesizable(format!("{what} is not affine")))?;
        for (j, x) in lin.into_iter().enumerate() {
            a.set(i, j, x);
        }
        c.push(c0);
    }
    Ok((a, c))
}

fn affine_polys(a: &Matrix<Rat>, c: &[Rat], vars: &[Poly]) -> Vec<Poly> {
    (0..a.rows())
        .map(|i| {
            let mut acc = Poly::constant(c[i].clone());
            for (j, v) in vars.iter().enumerate() {
                acc = Scalar::add(&acc, &v.scale(a.get(i, j)));
            }
            acc
        })
        .collect()
}

fn column(v: &[Rat]) -> Matrix<Rat> {
    Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
}

fn substitute_all(ps: &[Poly], images: &[Poly]) -> Result<Vec<Poly>> {
    ps.iter().map(|p| p.substitute(images)).collect()
}

/// Builds `g = x₀ + B (FB)⁻¹ (y − f(x₀))` for `Y = x₀ + im B`.
fn synthesize_section(m: &BundleMorphism, split: &Split) -> Result<Section> {
    let n = m.source.ring.dim();
    let nt = m.target.ring.dim();
    let (a, a0) = affine(&split.data.u, n, "u")?;
    let (f, f0) = affine(&m.base_map, n, "f")?;
    let rhs = column(&a0.iter().map(|x| -x.clone()).collect::<Vec<_>>());
    let x0 = a
        .solve(&rhs)
        .ok_or_else(|| Error::SectionNotSynthesizable("Y is empty".into()))?
        .column(0);
    let b = a.kernel();
    let fb = f.mul(&b)?;
    let inv = fb.inverse().map_err(|_| {
        Error::SectionNotSynthesizable("f restricted to Y has no invertible linear part".into())
    })?;
    let fx0: Vec<Rat> = f
        .apply(&x0)
        .into_iter()
        .zip(&f0)
        .map(|(x, c)| x + c)
        .collect();
    let lin = b.mul(&inv)?;
    let shift: Vec<Rat> = (0..n)
        .map(|i| {
            let mut acc = x0[i].clone();
            for (k, y) in fx0.iter().enumerate() {
                acc -= lin.get(i, k) * y;
            }
            acc
        })
        .collect();
    let ys: Vec<Poly> = (0..nt).map(Poly::var).collect();
    let g = affine_polys(&lin, &shift, &ys);

    let right_inverse = substitute_all(&m.base_map, &g)? == ys;
    let lands_in_y = substitute_all(&split.data.u, &g)?.iter().all(Poly::is_zero);
    let zs: Vec<Poly> = (0..b.cols()).map(Poly::var).collect();
    let on_y = affine_polys(&b, &x0, &zs);
    let left_inverse_on_y = substitute_all(&substitute_all(&g, &m.base_map)?, &on_y)? == on_y;

    let l = m.source.space();
    let lt = m.target.space();
    let phi1 = m.comps.linear().to_rat()?;
    let mut s = GradedMap::zero(lt, l, 0);
    for d in lt.degrees() {
        let block = if d == 1 {
            split.data.sigma.clone()
        } else {
            phi1.block(d).inverse()?
        };
        s.set_block(d, block)?;
    }
    let splits_phi = phi1.compose(&s)? == GradedMap::identity(lt);
    let source = BundleChart {
        ring: PolyRing::new(m.target.ring.vars().to_vec()),
        structure: m.target.structure.clone(),
    };
    let bundle = BundleMorphism::new(
        source,
        m.source.clone(),
        g.clone(),
        Multilinear::from_linear(&s.map_coeffs(|c| Poly::constant(c.clone()))),
    )?;
    let morphism = bundle.check()?.passed();
    Ok(Section {
        base_map: g,
        bundle,
        right_inverse,
        lands_in_y,
        left_inverse_on_y,
        splits_phi,
        morphism,
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct TubularPsi {
    /// `Ψ[j][i]` for `j` over the entries of `u` and `i < k`.
    pub psi: Matrix<Poly>,
    /// `Σ_i Ψ[j][i] x_i = u_j`.
    pub euler: bool,
    /// `Ψ` on `x₁ = … = x_k = 0` equals the Jacobian block there.
    pub boundary: bool,
}

/// `Ψ[j][i] = ∫₀¹ (∂_i u_j)(t x₁, …, t x_k, x_{k+1}, …) dt`.
pub fn tubular_psi(u: &[Poly], k: usize) -> Result<TubularPsi> {
    if u.iter().any(|p| !p.restrict_zero(k).is_zero()) {
        return Err(Error::NotVanishingOnY);
    }
    let psi = Matrix::from_fn(u.len(), k, |j, i| u[j].derivative(i).scaled_integral(k));
    let euler = (0..u.len()).all(|j| {
        let mut acc = Poly::zero();
        for i in 0..k {
            acc = Scalar::add(&acc, &Scalar::mul(psi.get(j, i), &Poly::var(i)));
        }
        acc == u[j]
    });
    let boundary = (0..u.len()).all(|j| {
        (0..k).all(|i| psi.get(j, i).restrict_zero(k) == u[j].derivative(i).restrict_zero(k))
    });
    Ok(TubularPsi {
        psi,
        euler,
        boundary,
    })
}

/// Evaluates a vector of polynomials at a point.
pub fn eval_all(ps: &[Poly], p: &[Rat]) -> Result<Vec<Rat>> {
    ps.iter().map(|x| x.eval(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{b1, b1_squared, e5_chart_morphism, point_chart};
    use crate::linalg::int;

    fn zero() -> Vec<Rat> {
        vec![int(0)]
    }

    #[test]
    fn b1_classical_locus_and_fiber() {
        let b = b1();
        assert!(b.classical_check(&zero()).unwrap());
        assert!(!b.classical_check(&[int(1)]).unwrap());
        assert!(b.fiber_at(&zero()).unwrap().check_relations().passed());
        assert!(b.classical_check(&[]).is_err());
    }

    #[test]
    fn b1_tangent_is_acyclic_and_etale_to_point() {
        let b = b1();
        let c = b.tangent_at(&zero()).unwrap();
        assert!(c.is_acyclic());
        let m = BundleMorphism::new(b, point_chart(), vec![], Multilinear::zero(b1().space(), &GradedSpace::new(), 0)).unwrap();
        assert!(m.etale_at(&zero()).unwrap().etale);
        assert!(matches!(m.etale_at(&[int(1)]), Err(Error::NotClassical)));
    }

    #[test]
    fn squared_curvature_is_not_etale_and_not_regular() {
        let b = b1_squared();
        let c = b.tangent_at(&zero()).unwrap();
        assert!(c.differential().block(0).is_zero());
        let m = BundleMorphism::new(b.clone(), point_chart(), vec![], Multilinear::zero(b.space(), &GradedSpace::new(), 0)).unwrap();
        assert!(!m.etale_at(&zero()).unwrap().etale);
        assert!(matches!(lastcase_split(&m, &[zero()]), Err(Error::RegularityFails(_))));
    }

    #[test]
    fn fibration_failures() {
        let b = b1();
        let to_point = BundleMorphism::new(b.clone(), point_chart(), vec![], Multilinear::zero(b.space(), &GradedSpace::new(), 0)).unwrap();
        assert!(to_point.fibration_check(&[zero(), vec![int(1)]]).unwrap().iter().all(|f| f.passed()));

        let line = BundleChart::new(PolyRing::new(["y"]), CurvedStructure::zero(&GradedSpace::new()).unwrap()).unwrap();
        let src = BundleChart::new(PolyRing::new(["x"]), CurvedStructure::zero(&GradedSpace::new()).unwrap()).unwrap();
        let sq = BundleMorphism::new(src, line, vec![Poly::var(0).pow(2)], Multilinear::zero(&GradedSpace::new(), &GradedSpace::new(), 0)).unwrap();
        let f = sq.fibration_at(&zero()).unwrap();
        assert!(!f.submersion && f.not_surjective.is_empty());

        let mut onto = GradedSpace::new();
        onto.push(1, "e'".into()).unwrap();
        let tgt = BundleChart::point(&CurvedStructure::zero(&onto).unwrap());
        let src = BundleChart::point(&CurvedStructure::zero(&onto).unwrap());
        let z = BundleMorphism::new(src, tgt, vec![], Multilinear::zero(&onto, &onto, 0)).unwrap();
        assert_eq!(z.fibration_at(&[]).unwrap().not_surjective, vec![1]);
    }

    #[test]
    fn b1_split_and_section() {
        let b = b1();
        let m = BundleMorphism::new(b.clone(), point_chart(), vec![], Multilinear::zero(b.space(), &GradedSpace::new(), 0)).unwrap();
        let s = lastcase_split(&m, &[zero()]).unwrap();
        assert_eq!(s.data.kernel.dim(1), 1);
        assert_eq!(s.data.u, vec![Poly::var(0)]);
        assert_eq!(s.subbundle.e1.cols(), 0);
        assert!(s.data.reconstructs);
        assert!(matches!(recap_pipeline(&m, &[vec![int(1)]]), Err(Error::NotClassical)));
        let r = recap_pipeline(&m, &[zero()]).unwrap();
        let sec = r.section.unwrap();
        assert!(sec.passed());
        assert_eq!(sec.base_map, vec![Poly::zero()]);
        assert_eq!(r.points_on_y.len(), 1);
        assert!(r.bijective_on_points);
    }

    #[test]
    fn identity_split_is_trivial() {
        let b = b1();
        let m = BundleMorphism::identity(&b);
        let s = lastcase_split(&m, &[zero()]).unwrap();
        assert!(s.data.u.is_empty());
        assert_eq!(s.subbundle.e1.cols(), 1);
        let r = recap_pipeline(&m, &[zero()]).unwrap();
        let sec = r.section.unwrap();
        assert!(sec.passed());
        assert_eq!(sec.base_map, vec![Poly::var(0)]);
    }

    #[test]
    fn e5_chart_pipeline() {
        let m = e5_chart_morphism();
        assert!(m.check().unwrap().passed());
        let r = recap_pipeline(&m, &[vec![int(0)], vec![int(3)]]).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert!(r.split.data.u.is_empty());
        let sec = r.section.unwrap();
        assert!(sec.passed());
        assert_eq!(sec.base_map, vec![Poly::var(0)]);
        assert!(r.bijective_on_points);
    }

    #[test]
    fn tubular_examples() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let t = tubular_psi(std::slice::from_ref(&x), 1).unwrap();
        assert_eq!(t.psi.get(0, 0), &Poly::constant(int(1)));
        let t = tubular_psi(&[Scalar::add(&x, &x.pow(2))], 1).unwrap();
        assert_eq!(t.psi.get(0, 0), &Scalar::add(&Poly::constant(int(1)), &x));
        assert!(t.euler && t.boundary);
        let t = tubular_psi(&[Scalar::mul(&y, &x)], 1).unwrap();
        assert_eq!(t.psi.get(0, 0), &y);
        assert!(t.euler && t.boundary);
        assert!(matches!(tubular_psi(&[y], 1), Err(Error::NotVanishingOnY)));
    }

    fn affine_fibration() -> BundleMorphism {
        let mut l = GradedSpace::new();
        l.push(1, "k".into()).unwrap();
        l.push(1, "a".into()).unwrap();
        let ring = PolyRing::new(["x", "y"]);
        let mut ops = Multilinear::zero(&l, &l, 1);
        let lam0 = vec![ring.parse("x + y").unwrap(), ring.parse("y").unwrap()];
        ops.set(crate::sym::SymWord::empty(), crate::linalg::Vector::from_dense(1, &lam0)).unwrap();
        let source = BundleChart::new(ring, CurvedStructure::new(ops).unwrap()).unwrap();

        let mut lt = GradedSpace::new();
        lt.push(1, "a'".into()).unwrap();
        let mut ops = Multilinear::zero(&lt, &lt, 1);
        ops.set(crate::sym::SymWord::empty(), crate::linalg::Vector::from_dense(1, &[Poly::var(0)])).unwrap();
        let target = BundleChart::new(PolyRing::new(["y'"]), CurvedStructure::new(ops).unwrap()).unwrap();
        let phi = GradedMap::from_images(&l, &lt, 0, |e| {
            if e.index == 1 { crate::linalg::Vector::<Rat>::basis(lt.find("a'").unwrap()) } else { crate::linalg::Vector::zero() }
        })
        .unwrap();
        let comps = Multilinear::from_linear(&phi.map_coeffs(|c| Poly::constant(c.clone())));
        BundleMorphism::new(source, target, vec![Poly::var(1)], comps).unwrap()
    }

    #[test]
    fn affine_fibration_section() {
        let m = affine_fibration();
        assert!(m.check().unwrap().passed());
        let origin = vec![int(0), int(0)];
        let r = recap_pipeline(&m, std::slice::from_ref(&origin)).unwrap();
        assert!(r.steps.is_empty());
        assert!(r.split.data.reconstructs);
        assert!(r.split.certificates[0].local_diffeo);
        let ring = m.source().ring();
        assert_eq!(r.split.data.u, vec![ring.parse("x + y").unwrap()]);
        let sec = r.section.unwrap();
        assert!(sec.passed());
        let ys = PolyRing::new(["y'"]);
        assert_eq!(sec.base_map, vec![ys.parse("-y'").unwrap(), ys.parse("y'").unwrap()]);
        assert!(r.bijective_on_points);
    }

    #[test]
    fn random_point_reductions_have_trivial_sections() {
        let mut rng = crate::fixtures::rng(7);
        for _ in 0..8 {
            let m = crate::fixtures::random_reduction(&mut rng);
            let b = BundleMorphism::new(
                BundleChart::point(m.source()),
                BundleChart::point(m.target()),
                vec![],
                m.comps().map_coeffs(|c| Poly::constant(c.clone())),
            )
            .unwrap();
            let r = recap_pipeline(&b, &[vec![]]).unwrap();
            assert!(r.split.data.u.is_empty());
            assert!(r.split.data.reconstructs);
            assert!(r.section.unwrap().passed());
        }
    }
}
