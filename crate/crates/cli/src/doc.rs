//! The JSON exchange format: one document per file, tagged by `kind`.
//!
//! Rationals are strings `"p/q"` (or `"p"`), polynomials are lists of
//! `{"exp": [...], "coef": "p/q"}` with one exponent per base variable.
//! Serialization is canonical: degrees ascending, words and output labels in
//! basis order, exponents ascending lexicographically, zero entries dropped.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use linfty_core::bundle::{BundleChart, BundleMorphism};
use linfty_core::multilinear::Multilinear;
use linfty_core::point::{CurvedStructure, Morphism};
use linfty_core::sym::{canonicalize, SymWord};
use linfty_core::transfer::{Contraction, Filtration};
use linfty_core::{
    fmt_rat, parse_rat, BasisElem, GradedMap, GradedSpace, Poly, PolyRing, Rat, Scalar, Vector,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{schema, InputError};

type Result<T> = std::result::Result<T, InputError>;

pub const VERSION: &str = "linfty/1";

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub degree: i32,
    pub basis: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum Coef {
    Rat(String),
    Poly(Vec<Term>),
}

/// One value of a multilinear table: the inputs form a word.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub inputs: Vec<String>,
    pub output: IndexMap<String, Coef>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub version: String,
    pub kind: String,
    pub space: Vec<Block>,
    pub ops: Vec<Entry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub version: String,
    pub kind: String,
    pub base: Vec<String>,
    pub space: Vec<Block>,
    pub ops: Vec<Entry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub version: String,
    pub kind: String,
    pub source: Value,
    pub target: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_map: Vec<Vec<Term>>,
    pub components: Vec<Entry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub input: String,
    pub output: IndexMap<String, String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FiltrationDoc {
    Natural,
    Variation(i32),
    Weights(BTreeMap<String, i32>),
}

/// `δ` and `η` by basis label. Resolved against a structure's space.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ContractionDoc {
    pub version: String,
    pub kind: String,
    pub delta: Vec<MapEntry>,
    pub eta: Vec<MapEntry>,
    pub filtration: FiltrationDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PointsDoc {
    pub version: String,
    pub kind: String,
    pub base: Vec<String>,
    pub points: Vec<Vec<String>>,
}

/// A command with its inputs; paths are relative to the job file.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct JobDoc {
    pub version: String,
    pub kind: String,
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Points {
    pub base: Vec<String>,
    pub points: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismData {
    Point(Morphism<Rat>),
    Bundle(BundleMorphism),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Structure(CurvedStructure<Rat>),
    Bundle(BundleChart),
    Morphism(MorphismData),
    Contraction(ContractionDoc),
    Points(Points),
    Job(JobDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Structure(_) => "structure",
            Document::Bundle(_) => "bundle",
            Document::Morphism(_) => "morphism",
            Document::Contraction(_) => "contraction",
            Document::Points(_) => "points",
            Document::Job(_) => "job",
        }
    }
}

fn join(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path.is_empty() || path == ".") {
        (true, true) => "(root)".into(),
        (true, false) => path.into(),
        (false, true) => prefix.into(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

fn typed<T: DeserializeOwned>(v: &Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = join(prefix, &e.path().to_string());
        schema(path, e.into_inner().to_string())
    })
}

fn header(version: &str, prefix: &str) -> Result<()> {
    if version != VERSION {
        return Err(schema(
            join(prefix, "version"),
            format!("expected {VERSION:?}, found {version:?}"),
        ));
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("(root)", e.to_string()))?;
    parse_value(&v, "")
}

pub fn parse_value(v: &Value, prefix: &str) -> Result<Document> {
    let kind = v
        .as_object()
        .ok_or_else(|| schema(join(prefix, ""), "expected an object"))?
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(join(prefix, "kind"), "missing or not a string"))?;
    match kind {
        "structure" => {
            let d: StructureDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Structure(structure_from(&d, prefix)?))
        }
        "bundle" => {
            let d: BundleDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Bundle(bundle_from(&d, prefix)?))
        }
        "morphism" => {
            let d: MorphismDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Morphism(morphism_from(&d, prefix)?))
        }
        "contraction" => {
            let d: ContractionDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Contraction(d))
        }
        "points" => {
            let d: PointsDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Points(points_from(&d, prefix)?))
        }
        "job" => {
            let d: JobDoc = typed(v, prefix)?;
            header(&d.version, prefix)?;
            Ok(Document::Job(d))
        }
        other => Err(schema(join(prefix, "kind"), format!("unknown kind {other:?}"))),
    }
}

fn space_from(blocks: &[Block], prefix: &str) -> Result<GradedSpace> {
    let mut sorted: Vec<(usize, &Block)> = blocks.iter().enumerate().collect();
    sorted.sort_by_key(|(_, b)| b.degree);
    let mut space = GradedSpace::new();
    let mut seen = BTreeSet::new();
    for (i, b) in sorted {
        let path = join(prefix, &format!("space[{i}]"));
        if !seen.insert(b.degree) {
            return Err(schema(path, format!("degree {} listed twice", b.degree)));
        }
        for (j, l) in b.basis.iter().enumerate() {
            if l.is_empty() || space.find(l).is_some() {
                return Err(schema(
                    format!("{path}.basis[{j}]"),
                    format!("label {l:?} is empty or not unique"),
                ));
            }
            space
                .push(b.degree, l.clone())
                .map_err(|e| schema(format!("{path}.basis[{j}]"), e.to_string()))?;
        }
    }
    Ok(space)
}

fn find(space: &GradedSpace, label: &str, path: &str) -> Result<BasisElem> {
    space
        .find(label)
        .ok_or_else(|| schema(path, format!("unknown basis element {label:?}")))
}

fn word_from(space: &GradedSpace, inputs: &[String], path: &str) -> Result<(SymWord, i64)> {
    let mut es = Vec::new();
    for (j, l) in inputs.iter().enumerate() {
        es.push(find(space, l, &format!("{path}.inputs[{j}]"))?);
    }
    canonicalize(&es).ok_or_else(|| {
        InputError::NonCanonicalWord(format!(
            "{path}: [{}] repeats an odd element, so the entry is zero and must be omitted",
            inputs.join(",")
        ))
    })
}

fn rat_from(s: &str, path: &str) -> Result<Rat> {
    parse_rat(s).map_err(|_| schema(path, format!("expected a rational string, found {s:?}")))
}

fn poly_from(terms: &[Term], n: usize, path: &str) -> Result<Poly> {
    let mut p = Poly::zero();
    for (i, t) in terms.iter().enumerate() {
        if t.exp.len() != n {
            return Err(schema(
                format!("{path}[{i}].exp"),
                format!("expected {n} exponents, found {}", t.exp.len()),
            ));
        }
        p.add_term(t.exp.clone(), rat_from(&t.coef, &format!("{path}[{i}].coef"))?);
    }
    Ok(p)
}

fn rat_coef(c: &Coef, path: &str) -> Result<Rat> {
    match c {
        Coef::Rat(s) => rat_from(s, path),
        Coef::Poly(_) => Err(schema(path, "polynomial coefficient outside a bundle")),
    }
}

fn poly_coef(n: usize) -> impl Fn(&Coef, &str) -> Result<Poly> {
    move |c, path| match c {
        Coef::Poly(ts) => poly_from(ts, n, path),
        Coef::Rat(_) => Err(schema(path, "expected a polynomial term list")),
    }
}

fn table_from<R: Scalar>(
    entries: &[Entry],
    source: &GradedSpace,
    target: &GradedSpace,
    degree: i32,
    path: &str,
    coef: &dyn Fn(&Coef, &str) -> Result<R>,
) -> Result<Multilinear<R>> {
    let mut table = Multilinear::zero(source, target, degree);
    let mut seen = BTreeSet::new();
    for (i, e) in entries.iter().enumerate() {
        let at = format!("{path}[{i}]");
        let (w, sign) = word_from(source, &e.inputs, &at)?;
        if !seen.insert(w.clone()) {
            return Err(schema(at, "duplicate entry for this word"));
        }
        let want = w.degree() + degree;
        let mut v = Vector::zero();
        for (l, c) in &e.output {
            let out = find(target, l, &format!("{at}.output"))?;
            if out.degree != want {
                return Err(InputError::DegreeRule(format!(
                    "{at} ({}) → {l}: output has degree {}, expected {want}",
                    e.inputs.join(","),
                    out.degree
                )));
            }
            v.add_term(out, coef(c, &format!("{at}.output.{l}"))?);
        }
        table.set(w, v.scale_rat(&Rat::from_integer(sign.into())))?;
    }
    Ok(table)
}

fn structure_from(d: &StructureDoc, prefix: &str) -> Result<CurvedStructure<Rat>> {
    let space = space_from(&d.space, prefix)?;
    let ops = table_from(&d.ops, &space, &space, 1, &join(prefix, "ops"), &rat_coef)?;
    Ok(CurvedStructure::new(ops)?)
}

fn bundle_from(d: &BundleDoc, prefix: &str) -> Result<BundleChart> {
    let space = space_from(&d.space, prefix)?;
    let coef = poly_coef(d.base.len());
    let ops = table_from(&d.ops, &space, &space, 1, &join(prefix, "ops"), &coef)?;
    Ok(BundleChart::new(PolyRing::new(d.base.clone()), CurvedStructure::new(ops)?)?)
}

fn morphism_from(d: &MorphismDoc, prefix: &str) -> Result<MorphismData> {
    let sp = join(prefix, "source");
    let tp = join(prefix, "target");
    let cp = join(prefix, "components");
    match (parse_value(&d.source, &sp)?, parse_value(&d.target, &tp)?) {
        (Document::Structure(s), Document::Structure(t)) => {
            if !d.base_map.is_empty() {
                return Err(schema(join(prefix, "base_map"), "point morphisms have no base map"));
            }
            let comps = table_from(&d.components, s.space(), t.space(), 0, &cp, &rat_coef)?;
            Ok(MorphismData::Point(Morphism::new(s, t, comps)?))
        }
        (Document::Bundle(s), Document::Bundle(t)) => {
            let n = s.ring().dim();
            if d.base_map.len() != t.ring().dim() {
                return Err(schema(
                    join(prefix, "base_map"),
                    format!("expected {} polynomials, found {}", t.ring().dim(), d.base_map.len()),
                ));
            }
            let base_map = d
                .base_map
                .iter()
                .enumerate()
                .map(|(i, ts)| poly_from(ts, n, &join(prefix, &format!("base_map[{i}]"))))
                .collect::<Result<Vec<_>>>()?;
            let comps = table_from(&d.components, s.space(), t.space(), 0, &cp, &poly_coef(n))?;
            Ok(MorphismData::Bundle(BundleMorphism::new(s, t, base_map, comps)?))
        }
        (a, b) => Err(schema(
            join(prefix, "target"),
            format!("source is a {} but target is a {}", a.kind(), b.kind()),
        )),
    }
}

fn points_from(d: &PointsDoc, prefix: &str) -> Result<Points> {
    let n = d.base.len();
    let mut points = Vec::new();
    for (i, p) in d.points.iter().enumerate() {
        let path = join(prefix, &format!("points[{i}]"));
        if p.len() != n {
            return Err(schema(path, format!("expected {n} coordinates, found {}", p.len())));
        }
        points.push(
            p.iter()
                .enumerate()
                .map(|(j, s)| rat_from(s, &format!("{path}[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Points {
        base: d.base.clone(),
        points,
    })
}

fn map_from(entries: &[MapEntry], space: &GradedSpace, degree: i32, path: &str) -> Result<GradedMap<Rat>> {
    let mut images: BTreeMap<BasisElem, Vector<Rat>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        let at = format!("{path}[{i}]");
        let x = find(space, &e.input, &format!("{at}.input"))?;
        let mut v = Vector::zero();
        for (l, c) in &e.output {
            let out = find(space, l, &format!("{at}.output"))?;
            if out.degree != x.degree + degree {
                return Err(InputError::DegreeRule(format!(
                    "{at} {} → {l}: output has degree {}, expected {}",
                    e.input,
                    out.degree,
                    x.degree + degree
                )));
            }
            v.add_term(out, rat_from(c, &format!("{at}.output.{l}"))?);
        }
        if images.insert(x, v).is_some() {
            return Err(schema(at, format!("{} listed twice", e.input)));
        }
    }
    Ok(GradedMap::from_images(space, space, degree, |e| {
        images.get(&e).cloned().unwrap_or_default()
    })?)
}

/// Resolves a contraction document against the space of a structure.
pub fn contraction_from(d: &ContractionDoc, space: &GradedSpace) -> Result<Contraction> {
    let delta = map_from(&d.delta, space, 1, "delta")?;
    let eta = map_from(&d.eta, space, -1, "eta")?;
    let filtration = match &d.filtration {
        FiltrationDoc::Natural => Filtration::Natural,
        FiltrationDoc::Variation(k) => Filtration::Variation { level: *k },
        FiltrationDoc::Weights(ws) => {
            for l in ws.keys() {
                find(space, l, "filtration.weights")?;
            }
            Filtration::Weights(ws.clone())
        }
    };
    Ok(Contraction::new(delta, eta, filtration)?)
}

fn space_to(space: &GradedSpace) -> Vec<Block> {
    space
        .degrees()
        .filter(|d| space.dim(*d) > 0)
        .map(|d| Block {
            degree: d,
            basis: space.labels_in(d).to_vec(),
        })
        .collect()
}

pub fn terms_to(p: &Poly, n: usize) -> Vec<Term> {
    p.terms()
        .map(|(e, c)| {
            let mut exp = e.clone();
            exp.resize(n, 0);
            Term {
                exp,
                coef: fmt_rat(c),
            }
        })
        .collect()
}

fn table_to<R: Scalar>(m: &Multilinear<R>, coef: impl Fn(&R) -> Coef) -> Vec<Entry> {
    m.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, v)| Entry {
            inputs: w.elems().iter().map(|e| m.source().label(*e).to_string()).collect(),
            output: v.iter().map(|(e, c)| (m.target().label(*e).to_string(), coef(c))).collect(),
        })
        .collect()
}

fn rat_to(c: &Rat) -> Coef {
    Coef::Rat(fmt_rat(c))
}

pub fn structure_doc(s: &CurvedStructure<Rat>) -> StructureDoc {
    StructureDoc {
        version: VERSION.into(),
        kind: "structure".into(),
        space: space_to(s.space()),
        ops: table_to(s.ops(), rat_to),
    }
}

pub fn bundle_doc(b: &BundleChart) -> BundleDoc {
    let n = b.ring().dim();
    BundleDoc {
        version: VERSION.into(),
        kind: "bundle".into(),
        base: b.ring().vars().to_vec(),
        space: space_to(b.space()),
        ops: table_to(b.structure().ops(), |p| Coef::Poly(terms_to(p, n))),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

pub fn morphism_doc(m: &MorphismData) -> MorphismDoc {
    match m {
        MorphismData::Point(m) => MorphismDoc {
            version: VERSION.into(),
            kind: "morphism".into(),
            source: to_value(&structure_doc(m.source())),
            target: to_value(&structure_doc(m.target())),
            base_map: Vec::new(),
            components: table_to(m.comps(), rat_to),
        },
        MorphismData::Bundle(m) => {
            let n = m.source().ring().dim();
            MorphismDoc {
                version: VERSION.into(),
                kind: "morphism".into(),
                source: to_value(&bundle_doc(m.source())),
                target: to_value(&bundle_doc(m.target())),
                base_map: m.base_map().iter().map(|p| terms_to(p, n)).collect(),
                components: table_to(m.comps(), |p| Coef::Poly(terms_to(p, n))),
            }
        }
    }
}

fn map_to(m: &GradedMap<Rat>) -> Vec<MapEntry> {
    let s = m.source();
    s.basis()
        .filter(|e| !m.image(*e).is_zero())
        .map(|e| MapEntry {
            input: s.label(e).to_string(),
            output: m
                .image(e)
                .iter()
                .map(|(t, c)| (s.label(*t).to_string(), fmt_rat(c)))
                .collect(),
        })
        .collect()
}

pub fn contraction_doc(c: &Contraction) -> ContractionDoc {
    ContractionDoc {
        version: VERSION.into(),
        kind: "contraction".into(),
        delta: map_to(&c.delta),
        eta: map_to(&c.eta),
        filtration: match &c.filtration {
            Filtration::Natural => FiltrationDoc::Natural,
            Filtration::Variation { level } => FiltrationDoc::Variation(*level),
            Filtration::Weights(ws) => FiltrationDoc::Weights(ws.clone()),
        },
    }
}

pub fn points_doc(p: &Points) -> PointsDoc {
    PointsDoc {
        version: VERSION.into(),
        kind: "points".into(),
        base: p.base.clone(),
        points: p.points.iter().map(|q| q.iter().map(fmt_rat).collect()).collect(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("documents serialize");
    s.push('\n');
    s
}

/// The canonical text of a parsed document. A contraction is echoed with
/// its entries in the order given, since it has no space of its own.
pub fn serialize(d: &Document) -> String {
    match d {
        Document::Structure(s) => to_text(&structure_doc(s)),
        Document::Bundle(b) => to_text(&bundle_doc(b)),
        Document::Morphism(m) => to_text(&morphism_doc(m)),
        Document::Contraction(c) => to_text(c),
        Document::Points(p) => to_text(&points_doc(p)),
        Document::Job(j) => to_text(j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use linfty_core::fixtures;

    #[test]
    fn structures_round_trip() {
        for s in [fixtures::e1(), fixtures::e2(), fixtures::e4(), fixtures::e5()] {
            let text = to_text(&structure_doc(&s));
            let back = parse(&text).unwrap();
            assert_eq!(back, Document::Structure(s));
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn bundles_and_morphisms_round_trip() {
        let b = fixtures::b1();
        let text = to_text(&bundle_doc(&b));
        assert_eq!(serialize(&parse(&text).unwrap()), text);
        for m in [
            MorphismData::Point(fixtures::e5_morphism()),
            MorphismData::Bundle(fixtures::e5_chart_morphism()),
            MorphismData::Bundle(fixtures::to_point(&b)),
        ] {
            let text = to_text(&morphism_doc(&m));
            let back = parse(&text).unwrap();
            assert_eq!(back, Document::Morphism(m));
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn reordered_odd_word_picks_up_a_sign() {
        let text = r#"{"version":"linfty/1","kind":"structure",
            "space":[{"degree":3,"basis":["c"]},{"degree":1,"basis":["a","b"]}],
            "ops":[{"inputs":["b","a"],"output":{"c":"1"}}]}"#;
        let Document::Structure(s) = parse(text).unwrap() else { panic!() };
        let (a, b, c) = (s.space().find("a").unwrap(), s.space().find("b").unwrap(), s.space().find("c").unwrap());
        let w = canonicalize(&[a, b]).unwrap().0;
        assert_eq!(s.ops().eval_word(&w).get(c), Rat::from_integer((-1).into()));
    }

    #[test]
    fn rejects_bad_documents() {
        let odd = r#"{"version":"linfty/1","kind":"structure",
            "space":[{"degree":1,"basis":["a"]},{"degree":3,"basis":["c"]}],
            "ops":[{"inputs":["a","a"],"output":{"c":"1"}}]}"#;
        assert!(matches!(parse(odd), Err(InputError::NonCanonicalWord(_))));

        let wrong = r#"{"version":"linfty/1","kind":"structure",
            "space":[{"degree":2,"basis":["h"]},{"degree":4,"basis":["m"]}],
            "ops":[{"inputs":["h","h"],"output":{"m":"1"}}]}"#;
        let Err(InputError::DegreeRule(msg)) = parse(wrong) else { panic!() };
        assert!(msg.contains("ops[0] (h,h) → m"), "{msg}");

        let extra = r#"{"version":"linfty/1","kind":"structure","space":[],"ops":[],"colour":1}"#;
        let Err(InputError::Schema { message, .. }) = parse(extra) else { panic!() };
        assert!(message.contains("colour"), "{message}");

        let bad_rat = r#"{"version":"linfty/1","kind":"structure",
            "space":[{"degree":1,"basis":["a"]},{"degree":2,"basis":["b"]}],
            "ops":[{"inputs":["a"],"output":{"b":"one"}}]}"#;
        let Err(InputError::Schema { path, .. }) = parse(bad_rat) else { panic!() };
        assert_eq!(path, "ops[0].output.b");

        let nested = r#"{"version":"linfty/1","kind":"morphism",
            "source":{"version":"linfty/1","kind":"structure","space":[{"degree":1,"basis":["a"]}],"ops":[{"inputs":[],"output":{"a":[]}}]},
            "target":{"version":"linfty/1","kind":"structure","space":[],"ops":[]},
            "components":[]}"#;
        let Err(InputError::Schema { path, .. }) = parse(nested) else { panic!() };
        assert_eq!(path, "source.ops[0].output.a");
    }
}
