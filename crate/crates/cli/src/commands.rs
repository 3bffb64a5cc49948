//! One function per subcommand. Each appends checks and data to a report.

use std::fs;
use std::path::Path;

use linfty_core::bundle::{lastcase_split, recap_pipeline, tubular_psi, BundleChart, BundleMorphism, Split};
use linfty_core::ce::{build_ce, ce_cohomology, dual_word, monomial_label, quasi_iso_check, transfer_homotopy_h, KoszulChart};
use linfty_core::multilinear::Multilinear;
use linfty_core::point::{etale_pair, CurvedStructure, Morphism};
use linfty_core::sym::{words, SymElem, SymWord};
use linfty_core::transfer::{
    etatilde_defect, expansion_oracle, firstcase_reduce, reduction_audit, step1_pipeline, transfer, Contraction,
    ReductionStep, TransferResult, Violation,
};
use linfty_core::{fmt_rat, GradedMap, Poly, PolyRing, Rat, Scalar};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::doc::{self, contraction_from, structure_doc, ContractionDoc, Document, JobDoc, MorphismData};
use crate::error::{schema, InputError};
use crate::fmt;
use crate::report::{Check, Report, Request};

type Result<T> = std::result::Result<T, InputError>;

pub const COMMANDS: [&str; 13] = [
    "check-relations",
    "check-morphism",
    "transfer",
    "reduce",
    "split",
    "pipeline",
    "etale",
    "ce",
    "cohomology",
    "quasi-iso",
    "koszul-verify",
    "heq",
    "bigrading",
];

const DEFAULT_DEPTH: i32 = 4;
const DEFAULT_WEIGHT: usize = 4;
const DEFAULT_BOUND: i32 = 4;
const DEFAULT_KOSZUL_WEIGHT: usize = 2;

pub fn load(base: &Path, path: &str) -> Result<Document> {
    let text = fs::read_to_string(base.join(path)).map_err(|e| InputError::Io {
        path: path.into(),
        message: e.to_string(),
    })?;
    doc::parse(&text)
}

/// Runs a job document; paths inside it are relative to its directory.
pub fn run_job(base: &Path, path: &str) -> Result<Report> {
    let Document::Job(job) = load(base, path)? else {
        return Err(InputError::Usage(format!("{path} is not a job document")));
    };
    let dir = base.join(path);
    let dir = dir.parent().unwrap_or(base);
    execute(&job.command, &job_request(&job), dir)
}

pub fn job_request(job: &JobDoc) -> Request {
    Request {
        input: job.input.clone(),
        contraction: job.contraction.clone(),
        points: job.points.clone(),
        degrees: job.degrees,
        weights: job.weights,
    }
}

pub fn execute(command: &str, req: &Request, base: &Path) -> Result<Report> {
    let mut cx = Ctx {
        req,
        base,
        checks: Vec::new(),
        data: Map::new(),
    };
    match command {
        "check-relations" => check_relations(&mut cx)?,
        "check-morphism" => check_morphism(&mut cx)?,
        "transfer" => transfer_cmd(&mut cx)?,
        "reduce" => reduce(&mut cx)?,
        "split" => split(&mut cx)?,
        "pipeline" => pipeline(&mut cx)?,
        "etale" => etale(&mut cx)?,
        "ce" => ce(&mut cx)?,
        "cohomology" => cohomology(&mut cx)?,
        "quasi-iso" => quasi_iso(&mut cx)?,
        "koszul-verify" => koszul_verify(&mut cx)?,
        "heq" => heq(&mut cx)?,
        "bigrading" => bigrading(&mut cx)?,
        "run" => return Err(InputError::Usage("a job cannot run another job".into())),
        other => return Err(InputError::UnknownCommand(other.into())),
    }
    Ok(Report::new(command, req.clone(), cx.checks, cx.data))
}

struct Ctx<'a> {
    req: &'a Request,
    base: &'a Path,
    checks: Vec<Check>,
    data: Map<String, Value>,
}

impl Ctx<'_> {
    fn input(&self) -> Result<Document> {
        load(self.base, &self.req.input)
    }

    fn contraction(&self, command: &str) -> Result<ContractionDoc> {
        let p = self
            .req
            .contraction
            .as_ref()
            .ok_or_else(|| InputError::Usage(format!("{command} needs --contraction")))?;
        match load(self.base, p)? {
            Document::Contraction(c) => Ok(c),
            other => Err(wrong_kind(p, "contraction", &other)),
        }
    }

    fn points(&self, ring: &PolyRing) -> Result<Vec<Vec<Rat>>> {
        let Some(p) = &self.req.points else {
            return Ok(Vec::new());
        };
        match load(self.base, p)? {
            Document::Points(pts) if pts.base == ring.vars() => Ok(pts.points),
            Document::Points(pts) => Err(schema(
                "base",
                format!("points are over ({}) but the chart is over ({})", pts.base.join(", "), ring.vars().join(", ")),
            )),
            other => Err(wrong_kind(p, "points", &other)),
        }
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("report data serializes"));
    }
}

fn wrong_kind(path: &str, want: &str, got: &Document) -> InputError {
    InputError::Usage(format!("{path}: expected a {want} document, found a {}", got.kind()))
}

fn error_witness(e: &linfty_core::Error) -> Value {
    json!({ "error": e.to_string() })
}

fn structure(cx: &Ctx) -> Result<CurvedStructure<Rat>> {
    match cx.input()? {
        Document::Structure(s) => Ok(s),
        other => Err(wrong_kind(&cx.req.input, "structure", &other)),
    }
}

fn point_morphism(cx: &Ctx) -> Result<Morphism<Rat>> {
    match cx.input()? {
        Document::Morphism(MorphismData::Point(m)) => Ok(m),
        Document::Morphism(MorphismData::Bundle(_)) => Err(InputError::Usage(format!(
            "{}: expected a morphism of structures, found a bundle morphism",
            cx.req.input
        ))),
        other => Err(wrong_kind(&cx.req.input, "morphism", &other)),
    }
}

fn bundle_morphism(cx: &Ctx) -> Result<BundleMorphism> {
    match cx.input()? {
        Document::Morphism(MorphismData::Bundle(m)) => Ok(m),
        Document::Morphism(MorphismData::Point(m)) => Ok(BundleMorphism::new(
            BundleChart::point(m.source()),
            BundleChart::point(m.target()),
            vec![],
            m.comps().map_coeffs(|c| Poly::constant(c.clone())),
        )?),
        other => Err(wrong_kind(&cx.req.input, "morphism", &other)),
    }
}

pub fn relations_check(name: &str, s: &CurvedStructure<Rat>) -> Check {
    let r = s.check_relations();
    Check::verdict(name, r.passed(), format!("{} words", r.checked), || {
        let f = r.failure.as_ref().expect("failed");
        fmt::defect(s.space(), s.space(), &f.word, &f.defect, fmt_rat)
    })
}

fn poly_relations_check(name: &str, b: &BundleChart) -> Check {
    let r = b.structure().check_relations();
    Check::verdict(name, r.passed(), format!("{} words", r.checked), || {
        let f = r.failure.as_ref().expect("failed");
        fmt::defect(b.space(), b.space(), &f.word, &f.defect, |p| b.ring().format(p))
    })
}

pub fn morphism_check(name: &str, m: &Morphism<Rat>) -> Check {
    let r = m.check();
    Check::verdict(name, r.passed(), format!("{} words", r.checked), || {
        let f = r.failure.as_ref().expect("failed");
        fmt::defect(m.source().space(), m.target().space(), &f.word, &f.defect, fmt_rat)
    })
}

fn check_relations(cx: &mut Ctx) -> Result<()> {
    match cx.input()? {
        Document::Structure(s) => {
            cx.check(relations_check("relations", &s));
            cx.put("dims", fmt::dims(s.space()));
            cx.put("operations", fmt::rat_entries("λ", s.ops()));
        }
        Document::Bundle(b) => {
            cx.check(poly_relations_check("relations", &b));
            cx.put("base", b.ring().vars());
            cx.put("dims", fmt::dims(b.space()));
            cx.put("operations", fmt::poly_entries("λ", b.ring(), b.structure().ops()));
        }
        other => return Err(wrong_kind(&cx.req.input, "structure or bundle", &other)),
    }
    Ok(())
}

fn check_morphism(cx: &mut Ctx) -> Result<()> {
    match cx.input()? {
        Document::Morphism(MorphismData::Point(m)) => {
            cx.check(relations_check("source relations", m.source()));
            cx.check(relations_check("target relations", m.target()));
            cx.check(morphism_check("morphism", &m));
            cx.put("components", fmt::rat_entries("φ", m.comps()));
        }
        Document::Morphism(MorphismData::Bundle(m)) => {
            cx.check(poly_relations_check("source relations", m.source()));
            cx.check(poly_relations_check("target relations", m.target()));
            let ring = m.source().ring();
            let r = m.check()?;
            cx.check(Check::verdict("morphism", r.passed(), format!("{} words", r.checked), || {
                let f = r.failure.as_ref().expect("failed");
                fmt::defect(m.source().space(), m.target().space(), &f.word, &f.defect, |p| ring.format(p))
            }));
            cx.put("base_map", fmt::polys(ring, m.base_map()));
            cx.put("components", fmt::poly_entries("φ", ring, m.comps()));
        }
        other => return Err(wrong_kind(&cx.req.input, "morphism", &other)),
    }
    Ok(())
}

fn first_difference<R: Scalar>(a: &Multilinear<R>, b: &Multilinear<R>) -> Option<SymWord> {
    a.iter()
        .chain(b.iter())
        .map(|(w, _)| w.clone())
        .find(|w| a.eval_word(w) != b.eval_word(w))
}

const TRANSFER_CHECKS: [&str; 7] = [
    "μ relations",
    "φ morphism",
    "π̃ ∘ φ = id",
    "π̃ morphism",
    "η̃ identity",
    "oracle (arity ≤ 3)",
    "étale inclusion",
];

/// The certificates of one transfer, in a fixed order.
pub fn transfer_checks(s: &CurvedStructure<Rat>, c: &Contraction, t: &TransferResult) -> Vec<Check> {
    let mut out = vec![
        relations_check(TRANSFER_CHECKS[0], &t.mu),
        morphism_check(TRANSFER_CHECKS[1], &t.phi),
    ];
    let id = Multilinear::from_linear(&GradedMap::identity(&t.h));
    out.push(match t.pitilde.compose(&t.phi) {
        Ok(comp) => {
            let diff = first_difference(comp.comps(), &id);
            Check::verdict(TRANSFER_CHECKS[2], diff.is_none(), "", || {
                let w = diff.as_ref().expect("differs");
                let v = comp.comps().eval_word(w).sub(&id.eval_word(w));
                fmt::defect(&t.h, &t.h, w, &v, fmt_rat)
            })
        }
        Err(e) => Check::fail(TRANSFER_CHECKS[2], error_witness(&e)),
    });
    out.push(morphism_check(TRANSFER_CHECKS[3], &t.pitilde));
    out.push(match etatilde_defect(s, t) {
        Ok(d) => {
            let bad = s.space().basis().find(|e| !d.image(*e).is_zero());
            Check::verdict(TRANSFER_CHECKS[4], bad.is_none(), "[δ + λ₁, η̃] = 1 − φ₁π̃₁", || {
                let e = bad.expect("nonzero");
                json!({ "input": s.space().label(e), "defect": fmt::rat_vector(s.space(), &d.image(e)) })
            })
        }
        Err(e) => Check::fail(TRANSFER_CHECKS[4], error_witness(&e)),
    });
    out.push(match expansion_oracle(s, c) {
        Ok((phi, mu)) => {
            let phi_t = t.phi.comps().filter(|w| w.len() <= 3);
            let mu_t = t.mu.ops().filter(|w| w.len() <= 3);
            let dphi = first_difference(&phi, &phi_t);
            let dmu = first_difference(&mu, &mu_t);
            Check::verdict(TRANSFER_CHECKS[5], dphi.is_none() && dmu.is_none(), "φ and μ agree", || {
                match (&dphi, &dmu) {
                    (Some(w), _) => json!({
                        "table": "φ",
                        "word": fmt::labels(&t.h, w),
                        "solver": fmt::rat_vector(s.space(), &phi_t.eval_word(w)),
                        "oracle": fmt::rat_vector(s.space(), &phi.eval_word(w)),
                    }),
                    (None, w) => {
                        let w = w.as_ref().expect("differs");
                        json!({
                            "table": "μ",
                            "word": fmt::labels(&t.h, w),
                            "solver": fmt::rat_vector(&t.h, &mu_t.eval_word(w)),
                            "oracle": fmt::rat_vector(&t.h, &mu.eval_word(w)),
                        })
                    }
                }
            })
        }
        Err(e) => Check::fail(TRANSFER_CHECKS[5], error_witness(&e)),
    });
    out.push(if s.curvature().is_zero() && t.mu.curvature().is_zero() {
        match etale_pair(&t.phi) {
            Ok(r) => Check::verdict(TRANSFER_CHECKS[6], r.etale, "φ₁ is a tangent quasi-isomorphism", || {
                json!({ "cone_defects": r.cone_defects })
            }),
            Err(e) => Check::fail(TRANSFER_CHECKS[6], error_witness(&e)),
        }
    } else {
        Check::skipped(TRANSFER_CHECKS[6], "curvature does not vanish")
    });
    out
}

fn is_axiom(v: &Violation) -> bool {
    matches!(
        v,
        Violation::DeltaSquare | Violation::EtaSquare | Violation::EtaDeltaEta | Violation::SpaceMismatch
    )
}

fn contraction_checks(cx: &mut Ctx, s: &CurvedStructure<Rat>, c: &Contraction) -> bool {
    let (axioms, filtration): (Vec<Violation>, Vec<Violation>) = c.validate(s).into_iter().partition(is_axiom);
    let strings = |vs: &[Violation]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>();
    cx.check(Check::verdict("contraction axioms", axioms.is_empty(), "δ² = 0, η² = 0, ηδη = η", || {
        json!({ "violations": strings(&axioms) })
    }));
    cx.check(Check::verdict("filtration", filtration.is_empty(), "δ and η preserve it, λ − δ raises it", || {
        json!({ "violations": strings(&filtration) })
    }));
    axioms.is_empty()
}

fn etatilde_lines(t: &TransferResult) -> Vec<String> {
    let l = t.etatilde.source();
    l.basis()
        .filter(|e| !t.etatilde.image(*e).is_zero())
        .map(|e| format!("η̃({}) = {}", l.label(e), fmt::rat_vector(l, &t.etatilde.image(e))))
        .collect()
}

fn transfer_data(cx: &mut Ctx, t: &TransferResult) {
    cx.put("h", fmt::basis(&t.h));
    cx.put("sweeps", t.sweeps);
    cx.put("mu", fmt::rat_entries("μ", t.mu.ops()));
    cx.put("phi", fmt::rat_entries("φ", t.phi.comps()));
    cx.put("pitilde", fmt::rat_entries("π̃", t.pitilde.comps()));
    cx.put("etatilde", etatilde_lines(t));
}

/// Runs the transfer, or records why it could not run.
fn transfer_or_fail(cx: &mut Ctx, s: &CurvedStructure<Rat>, c: &Contraction) -> Option<TransferResult> {
    if !contraction_checks(cx, s, c) {
        cx.check(Check::skipped("transfer", "contraction axioms fail"));
        return None;
    }
    match transfer(s, c) {
        Ok(t) => Some(t),
        Err(e) => {
            cx.check(Check::fail("transfer", error_witness(&e)));
            None
        }
    }
}

fn transfer_cmd(cx: &mut Ctx) -> Result<()> {
    let s = structure(cx)?;
    let c = contraction_from(&cx.contraction("transfer")?, s.space())?;
    let Some(t) = transfer_or_fail(cx, &s, &c) else {
        return Ok(());
    };
    for ch in transfer_checks(&s, &c, &t) {
        cx.check(ch);
    }
    transfer_data(cx, &t);
    cx.put("structure", structure_doc(&t.mu));
    Ok(())
}

fn rank_table<R: Scalar>(m: &Morphism<R>) -> Value {
    let Ok(phi1) = m.phi1().to_rat() else {
        return json!({ "error": "φ₁ has non-constant coefficients" });
    };
    let mut ds: Vec<i32> = m.source().space().degrees().chain(m.target().space().degrees()).collect();
    ds.sort();
    ds.dedup();
    let rows: Vec<Value> = ds
        .into_iter()
        .map(|d| {
            json!({
                "degree": d,
                "source_dim": phi1.source().dim(d),
                "target_dim": phi1.target().dim(d),
                "rank": phi1.block(d).rank(),
            })
        })
        .collect();
    json!(rows)
}

fn audit_check<R: Scalar>(name: String, m: &Morphism<R>, k: i32) -> Check {
    Check::verdict(
        name,
        reduction_audit(m, k),
        format!("φ₁ iso in degrees ≥ {k}, onto below"),
        || json!({ "ranks": rank_table(m) }),
    )
}

fn step_data(step: &ReductionStep) -> Value {
    json!({
        "k": step.k,
        "h": fmt::basis(&step.transfer.h),
        "mu": fmt::rat_entries("μ", step.transfer.mu.ops()),
        "composite": fmt::rat_entries("φ", step.composed.comps()),
    })
}

fn reduce(cx: &mut Ctx) -> Result<()> {
    let m = point_morphism(cx)?;
    match cx.req.degrees {
        Some(k) => match firstcase_reduce(&m, k) {
            Ok(step) => {
                cx.check(Check::pass("hypotheses", format!("kernel of φ₁ removable at degree {k}")));
                cx.check(relations_check("μ relations", &step.transfer.mu));
                cx.check(Check::verdict("φ ∘ ι linear", step.composed.is_linear(), "", || {
                    json!({ "components": fmt::rat_entries("φ", step.composed.comps()) })
                }));
                cx.check(morphism_check("φ ∘ ι morphism", &step.composed));
                cx.check(audit_check("rank audit".into(), &step.composed, k));
                cx.put("step", step_data(&step));
            }
            Err(e) => cx.check(Check::fail("hypotheses", error_witness(&e))),
        },
        None => match step1_pipeline(&m) {
            Ok(p) => {
                cx.check(Check::pass("hypotheses", format!("{} reduction steps", p.steps.len())));
                for step in &p.steps {
                    cx.check(audit_check(format!("step at degree {}", step.k), &step.composed, step.k));
                }
                cx.check(audit_check("degrees ≥ 2 isomorphic".into(), &p.result, 2));
                cx.check(morphism_check("result morphism", &p.result));
                cx.put("steps", p.steps.iter().map(step_data).collect::<Vec<_>>());
                cx.put("source", fmt::basis(p.result.source().space()));
                cx.put("operations", fmt::rat_entries("λ", p.result.source().ops()));
                cx.put("components", fmt::rat_entries("φ", p.result.comps()));
            }
            Err(e) => cx.check(Check::fail("hypotheses", error_witness(&e))),
        },
    }
    Ok(())
}

fn split_checks(cx: &mut Ctx, ring: &PolyRing, sp: &Split, points: usize) {
    let d = &sp.data;
    cx.check(Check::verdict("reconstruction", d.reconstructs, "λ₀ = j u + σ f*t", || {
        json!({ "u": fmt::polys(ring, &d.u), "t": fmt::polys(ring, &d.t) })
    }));
    if points == 0 {
        cx.check(Check::skipped("regularity", "no points supplied"));
    }
    for c in &sp.certificates {
        let p = fmt::point(&c.point);
        cx.check(Check::pass(format!("regularity at {p}"), "Du on ker df is invertible"));
        cx.check(Check::verdict(
            format!("local diffeomorphism at {p}"),
            c.local_diffeo,
            "df on ker Du is invertible",
            || json!({ "point": p, "df_on_ker_du": fmt::matrix(&c.diffeo) }),
        ));
    }
    cx.put("u", fmt::polys(ring, &d.u));
    cx.put("t", fmt::polys(ring, &d.t));
    cx.put("kernel", fmt::basis(&d.kernel));
    cx.put("j", fmt::matrix(&d.j));
    cx.put("theta", fmt::matrix(&d.theta));
    cx.put("sigma", fmt::matrix(&d.sigma));
    cx.put("e1", fmt::matrix(&sp.subbundle.e1));
    cx.put("higher_degrees", &sp.subbundle.higher);
    cx.put(
        "certificates",
        sp.certificates
            .iter()
            .map(|c| {
                json!({
                    "point": fmt::point(&c.point),
                    "regularity": fmt::matrix(&c.regularity),
                    "df_on_ker_du": fmt::matrix(&c.diffeo),
                    "local_diffeo": c.local_diffeo,
                })
            })
            .collect::<Vec<_>>(),
    );
}

fn split(cx: &mut Ctx) -> Result<()> {
    let m = bundle_morphism(cx)?;
    let pts = cx.points(m.source().ring())?;
    match lastcase_split(&m, &pts) {
        Ok(sp) => {
            cx.check(Check::pass("hypotheses", "linear, constant φ₁, fibration at every point"));
            split_checks(cx, m.source().ring(), &sp, pts.len());
        }
        Err(e) => cx.check(Check::fail("hypotheses", error_witness(&e))),
    }
    Ok(())
}

fn pipeline(cx: &mut Ctx) -> Result<()> {
    let m = bundle_morphism(cx)?;
    let ring = m.source().ring().clone();
    let pts = cx.points(&ring)?;
    let recap = match recap_pipeline(&m, &pts) {
        Ok(r) => r,
        Err(e) => {
            cx.check(Check::fail("hypotheses", error_witness(&e)));
            return Ok(());
        }
    };
    cx.check(Check::pass("hypotheses", format!("{} reduction steps", recap.steps.len())));
    for step in &recap.steps {
        cx.check(audit_check(format!("step at degree {}", step.k), &step.composed, step.k));
    }
    split_checks(cx, &ring, &recap.split, pts.len());
    let target = m.target().ring();
    match &recap.section {
        Ok(sec) => {
            cx.check(Check::verdict(
                "section",
                sec.passed(),
                "f∘g = id, u∘g = 0, g∘f = id mod Y, φ₁∘s = id, s a morphism",
                || {
                    json!({
                        "right_inverse": sec.right_inverse,
                        "lands_in_y": sec.lands_in_y,
                        "left_inverse_on_y": sec.left_inverse_on_y,
                        "splits_phi": sec.splits_phi,
                        "morphism": sec.morphism,
                    })
                },
            ));
            cx.put("section", fmt::polys(target, &sec.base_map));
            cx.put("section_components", fmt::poly_entries("s", target, sec.bundle.comps()));
        }
        Err(reason) => cx.check(Check::skipped("section", reason.clone())),
    }
    if recap.points_on_y.is_empty() {
        cx.check(Check::skipped("points on Y", "no supplied point lies on Y"));
    } else {
        let matches: Vec<Value> = recap
            .points_on_y
            .iter()
            .map(|p| json!({ "point": fmt::point(&p.point), "image": fmt::point(&p.image), "classical": p.image_classical }))
            .collect();
        cx.check(Check::verdict(
            "points on Y",
            recap.bijective_on_points,
            "images distinct and classical",
            || json!({ "points": matches }),
        ));
    }
    cx.put("steps", recap.steps.iter().map(|s| s.k).collect::<Vec<_>>());
    cx.put("reduced", fmt::poly_entries("λ", &ring, recap.reduced.source().structure().ops()));
    Ok(())
}

fn etale(cx: &mut Ctx) -> Result<()> {
    match cx.input()? {
        Document::Morphism(MorphismData::Point(m)) => {
            let r = etale_pair(&m)?;
            cx.check(Check::verdict("étale", r.etale, "φ₁ is a tangent quasi-isomorphism", || {
                json!({ "cone_defects": r.cone_defects })
            }));
            cx.put("source_tangent", fmt::dims(m.source().space()));
            cx.put("target_tangent", fmt::dims(m.target().space()));
        }
        Document::Morphism(MorphismData::Bundle(m)) => {
            let pts = cx.points(m.source().ring())?;
            if pts.is_empty() {
                cx.check(Check::skipped("étale", "no points supplied"));
            }
            for p in &pts {
                let name = format!("étale at {}", fmt::point(p));
                cx.check(match m.etale_at(p) {
                    Ok(r) => Check::verdict(name, r.etale, "", || json!({ "cone_defects": r.cone_defects })),
                    Err(e) => Check::fail(name, error_witness(&e)),
                });
            }
        }
        other => return Err(wrong_kind(&cx.req.input, "morphism", &other)),
    }
    Ok(())
}

fn q_lines<R: Scalar>(p: &linfty_core::ce::CePresentation<R>, elem: impl Fn(&SymElem<R>) -> String) -> Vec<String> {
    p.generators()
        .map(|g| format!("Q({}) = {}", p.dual().label(g), elem(&p.q_gen(g))))
        .collect()
}

fn q_square<R: Scalar>(
    p: &linfty_core::ce::CePresentation<R>,
    elem: impl Fn(&SymElem<R>) -> String,
) -> (bool, Check) {
    let r = p.q_square_check();
    let ok = r.passed();
    let check = Check::verdict("Q² = 0", ok, format!("{} generators", r.checked), || {
        let (g, v) = r.failure.as_ref().expect("failed");
        json!({ "generator": p.dual().label(*g), "q_squared": elem(v) })
    });
    (ok, check)
}

fn ce(cx: &mut Ctx) -> Result<()> {
    match cx.input()? {
        Document::Structure(s) => {
            let p = build_ce(&s);
            let elem = |x: &SymElem<Rat>| fmt::rat_elem(p.dual(), x);
            let (ok, c) = q_square(&p, elem);
            cx.check(c);
            let rel = s.check_relations().passed();
            cx.check(Check::verdict("Q² = 0 ⇔ relations", ok == rel, format!("relations pass: {rel}"), || {
                json!({ "q_squared_zero": ok, "relations": rel })
            }));
            cx.put("generators", fmt::basis(p.dual()));
            cx.put("q", q_lines(&p, elem));
        }
        Document::Bundle(b) => {
            let p = build_ce(b.structure());
            let elem = |x: &SymElem<Poly>| fmt::poly_elem(b.ring(), p.dual(), x);
            let (ok, c) = q_square(&p, elem);
            cx.check(c);
            let rel = b.structure().check_relations().passed();
            cx.check(Check::verdict("Q² = 0 ⇔ relations", ok == rel, format!("relations pass: {rel}"), || {
                json!({ "q_squared_zero": ok, "relations": rel })
            }));
            cx.put("base", b.ring().vars());
            cx.put("generators", fmt::basis(p.dual()));
            cx.put("q", q_lines(&p, elem));
        }
        other => return Err(wrong_kind(&cx.req.input, "structure or bundle", &other)),
    }
    Ok(())
}

fn cohomology(cx: &mut Ctx) -> Result<()> {
    let depth = cx.req.degrees.unwrap_or(DEFAULT_DEPTH);
    match cx.input()? {
        Document::Structure(s) => {
            let p = build_ce(&s);
            let (_, c) = q_square(&p, |x| fmt::rat_elem(p.dual(), x));
            cx.check(c);
            let h = ce_cohomology(&p, depth)?;
            let classical = usize::from(s.curvature().is_zero());
            let h0 = h.dims[&0];
            cx.check(Check::verdict(
                "dim H⁰ = classical points",
                h0 == classical,
                format!("dim H⁰ = {h0}, classical points = {classical}"),
                || json!({ "dim_h0": h0, "classical_points": classical }),
            ));
            let dims: Map<String, Value> = h.dims.iter().map(|(q, d)| (q.to_string(), json!(d))).collect();
            let reps: Map<String, Value> = h
                .representatives
                .iter()
                .filter(|(_, r)| !r.is_empty())
                .map(|(q, r)| (q.to_string(), json!(r.iter().map(|x| fmt::rat_elem(p.dual(), x)).collect::<Vec<_>>())))
                .collect();
            cx.put("dims", dims);
            cx.put("representatives", reps);
        }
        Document::Bundle(b) => {
            let p = build_ce(b.structure());
            let (_, c) = q_square(&p, |x| fmt::poly_elem(b.ring(), p.dual(), x));
            cx.check(c);
            cx.check(Check::skipped("cohomology", linfty_core::Error::ChartBase.to_string()));
        }
        other => return Err(wrong_kind(&cx.req.input, "structure or bundle", &other)),
    }
    Ok(())
}

fn amplitude_one(s: &CurvedStructure<Rat>) -> bool {
    s.space().max_degree().unwrap_or(0) <= 1
}

fn quasi_iso(cx: &mut Ctx) -> Result<()> {
    let m = point_morphism(cx)?;
    let depth = cx.req.degrees.unwrap_or(DEFAULT_DEPTH);
    let r = quasi_iso_check(&m, depth)?;
    cx.check(Check::verdict("chain map", r.chain_map, "Q ∘ f* = f* ∘ Q", || {
        let mc = m.check();
        match mc.failure {
            Some(f) => fmt::defect(m.source().space(), m.target().space(), &f.word, &f.defect, fmt_rat),
            None => json!({ "error": "pullback does not commute with Q" }),
        }
    }));
    let bad: Vec<Value> = r
        .degrees
        .iter()
        .filter(|d| !d.iso())
        .map(|d| json!({ "degree": d.degree, "target_side": d.source_dim, "source_side": d.target_dim, "rank": d.induced_rank }))
        .collect();
    cx.check(Check::verdict(
        "quasi-isomorphism",
        r.quasi_iso(),
        format!("degrees {}..0", -depth),
        || json!({ "degrees": bad }),
    ));
    if !(amplitude_one(m.source()) && amplitude_one(m.target())) {
        cx.check(Check::skipped("agrees with étale", "not quasi-smooth: amplitude exceeds 1"));
    } else if !m.source().curvature().is_zero() || !m.target().curvature().is_zero() {
        cx.check(Check::skipped("agrees with étale", "tangent complexes need vanishing curvature"));
    } else {
        let e = etale_pair(&m)?.etale;
        cx.check(Check::verdict(
            "agrees with étale",
            e == r.quasi_iso(),
            format!("étale: {e}"),
            || json!({ "etale": e, "quasi_iso": r.quasi_iso() }),
        ));
    }
    cx.put(
        "degrees",
        r.degrees
            .iter()
            .map(|d| format!("{}: dim H CE(L') = {}, dim H CE(L) = {}, rank = {}", d.degree, d.source_dim, d.target_dim, d.induced_rank))
            .collect::<Vec<_>>(),
    );
    Ok(())
}

fn koszul_verify(cx: &mut Ctx) -> Result<()> {
    let b = match cx.input()? {
        Document::Bundle(b) => b,
        other => return Err(wrong_kind(&cx.req.input, "bundle", &other)),
    };
    let bound = cx.req.degrees.unwrap_or(DEFAULT_BOUND).max(0) as u32;
    let top = cx.req.weights.unwrap_or(DEFAULT_KOSZUL_WEIGHT) as u32;
    let ring = b.ring().clone();
    let u = b.curvature_components();
    let k = u.len();
    match tubular_psi(&u, k) {
        Ok(t) => {
            cx.check(Check::verdict("Ψ·x = u", t.euler, "", || json!({ "u": fmt::polys(&ring, &u) })));
            cx.check(Check::verdict("Ψ on Y = ∂u on Y", t.boundary, "", || json!({ "u": fmt::polys(&ring, &u) })));
            let rows: Vec<Vec<String>> = t.psi.to_rows().iter().map(|r| fmt::polys(&ring, r)).collect();
            cx.put("psi", rows);
        }
        Err(e) => cx.check(Check::fail("tubular Ψ", error_witness(&e))),
    }
    let (name, chart) = match KoszulChart::new(ring.clone(), &u) {
        Ok(c) => ("Koszul identity", c),
        Err(_) => {
            let model: Vec<Poly> = (0..k).map(Poly::var).collect();
            ("Koszul identity (Euler-form model)", KoszulChart::new(ring.clone(), &model)?)
        }
    };
    let r = chart.identity_check(bound);
    cx.check(Check::verdict(
        name,
        r.passed(),
        format!("[η, ι_u] = 1 − ρ*ι* on {} monomials of degree ≤ {bound}", r.checked),
        || {
            let m = r.failure.as_ref().expect("failed");
            json!({ "x": m.x, "xi": m.xi })
        },
    ));
    let mut coh = Map::new();
    for w in 0..=top {
        let dims = chart.cohomology_by_weight(w)?;
        coh.insert(
            w.to_string(),
            json!(dims.iter().map(|(q, d)| (q.to_string(), json!(d))).collect::<Map<_, _>>()),
        );
    }
    cx.put("cohomology_by_weight", coh);
    Ok(())
}

fn heq(cx: &mut Ctx) -> Result<()> {
    let s = structure(cx)?;
    let c = contraction_from(&cx.contraction("heq")?, s.space())?;
    let weight = cx.req.weights.unwrap_or(DEFAULT_WEIGHT);
    let Some(t) = transfer_or_fail(cx, &s, &c) else {
        return Ok(());
    };
    let h = transfer_homotopy_h(&s, &t)?;
    let dual = h.presentation.dual().clone();
    let r = h.heq_check(weight);
    cx.check(Check::verdict(
        "[Q₁, h] = 1 − P♯",
        r.passed(),
        format!("{} monomials of weight ≤ {weight}", r.checked),
        || {
            let (m, d) = r.failure.as_ref().expect("failed");
            json!({ "monomial": monomial_label(&dual, m), "defect": fmt::rat_elem(&dual, d) })
        },
    ));
    let l = s.space();
    let top = l.max_degree().unwrap_or(0);
    let lines: Vec<String> = words(l, 2, 2 * top)
        .into_iter()
        .filter(|w| !w.is_empty())
        .filter_map(|w| {
            let m = dual_word(&w).0;
            let v = h.h(&SymElem::word(m.clone()));
            (!v.is_zero()).then(|| format!("h({}) = {}", monomial_label(&dual, &m), fmt::rat_elem(&dual, &v)))
        })
        .collect();
    cx.put("h", lines);
    transfer_data(cx, &t);
    Ok(())
}

fn bigrading(cx: &mut Ctx) -> Result<()> {
    let p = match cx.input()? {
        Document::Structure(s) => build_ce(&s).bigrading_audit(),
        Document::Bundle(b) => build_ce(b.structure()).bigrading_audit(),
        other => return Err(wrong_kind(&cx.req.input, "structure or bundle", &other)),
    };
    let bad: Vec<Value> = p
        .components
        .iter()
        .filter(|c| c.shifts.iter().any(|s| *s != c.expected))
        .map(|c| json!({ "weight": c.weight, "expected": c.expected, "shifts": c.shifts }))
        .collect();
    cx.check(Check::verdict("bigrading", p.passed(), "weight-n part of Q shifts (n, 1 − n)", || {
        json!({ "components": bad })
    }));
    cx.put(
        "components",
        p.components
            .iter()
            .map(|c| {
                format!(
                    "q{}: expected {:?}, shifts {:?}, {} terms",
                    fmt::subscript(c.weight),
                    c.expected,
                    c.shifts,
                    c.terms
                )
            })
            .collect::<Vec<_>>(),
    );
    Ok(())
}
