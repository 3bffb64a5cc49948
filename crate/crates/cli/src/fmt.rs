//! Human-readable renderings used in report data and witnesses.

use indexmap::IndexMap;
use linfty_core::ce::monomial_label;
use linfty_core::multilinear::Multilinear;
use linfty_core::sym::{SymElem, SymWord};
use linfty_core::{fmt_rat, fmt_rat_matrix, GradedSpace, Matrix, Poly, PolyRing, Rat, Scalar, Vector};
use serde_json::{json, Value};

pub fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap_or(0)).unwrap_or(c))
        .collect()
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        match (i, t.strip_prefix('-')) {
            (0, _) => out.push_str(&t),
            (_, Some(rest)) => out.push_str(&format!(" - {rest}")),
            (_, None) => out.push_str(&format!(" + {t}")),
        }
    }
    out
}

fn scaled(c: &Rat, what: &str) -> String {
    if what == "1" {
        fmt_rat(c)
    } else if *c == Rat::one() {
        what.to_string()
    } else if *c == -Rat::one() {
        format!("-{what}")
    } else {
        format!("{}*{what}", fmt_rat(c))
    }
}

pub fn rat_vector(space: &GradedSpace, v: &Vector<Rat>) -> String {
    join_terms(v.iter().map(|(e, c)| scaled(c, space.label(*e))).collect())
}

fn poly_scaled(ring: &PolyRing, p: &Poly, what: &str) -> String {
    match p.as_rat() {
        Some(c) => scaled(&c, what),
        None if what == "1" => ring.format(p),
        None if p.num_terms() == 1 => format!("{}*{what}", ring.format(p)),
        None => format!("({})*{what}", ring.format(p)),
    }
}

pub fn poly_vector(ring: &PolyRing, space: &GradedSpace, v: &Vector<Poly>) -> String {
    join_terms(v.iter().map(|(e, p)| poly_scaled(ring, p, space.label(*e))).collect())
}

pub fn rat_elem(dual: &GradedSpace, x: &SymElem<Rat>) -> String {
    join_terms(x.iter().map(|(m, c)| scaled(c, &monomial_label(dual, m))).collect())
}

pub fn poly_elem(ring: &PolyRing, dual: &GradedSpace, x: &SymElem<Poly>) -> String {
    join_terms(x.iter().map(|(m, p)| poly_scaled(ring, p, &monomial_label(dual, m))).collect())
}

pub fn labels(space: &GradedSpace, w: &SymWord) -> Vec<String> {
    w.elems().iter().map(|e| space.label(*e).to_string()).collect()
}

/// `name₂(h,h) = b + c`, one line per nonzero entry.
pub fn entries<R: Scalar>(
    name: &str,
    m: &Multilinear<R>,
    value: impl Fn(&Vector<R>) -> String,
) -> Vec<String> {
    m.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, v)| {
            let args = if w.is_empty() { String::new() } else { m.word_label(w) };
            format!("{name}{}{args} = {}", subscript(w.len()), value(v))
        })
        .collect()
}

pub fn rat_entries(name: &str, m: &Multilinear<Rat>) -> Vec<String> {
    entries(name, m, |v| rat_vector(m.target(), v))
}

pub fn poly_entries(name: &str, ring: &PolyRing, m: &Multilinear<Poly>) -> Vec<String> {
    entries(name, m, |v| poly_vector(ring, m.target(), v))
}

pub fn dims(space: &GradedSpace) -> Value {
    let m: IndexMap<String, usize> = space
        .degrees()
        .filter(|d| space.dim(*d) > 0)
        .map(|d| (d.to_string(), space.dim(d)))
        .collect();
    json!(m)
}

pub fn basis(space: &GradedSpace) -> Vec<String> {
    space
        .degrees()
        .filter(|d| space.dim(*d) > 0)
        .map(|d| format!("{d}: {}", space.labels_in(d).join(", ")))
        .collect()
}

pub fn matrix(m: &Matrix<Rat>) -> Value {
    json!(fmt_rat_matrix(m))
}

pub fn point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

pub fn polys(ring: &PolyRing, ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| ring.format(p)).collect()
}

/// A relation or morphism defect as a witness object.
pub fn defect<R: Scalar>(space: &GradedSpace, target: &GradedSpace, w: &SymWord, v: &Vector<R>, coef: impl Fn(&R) -> String) -> Value {
    let out: IndexMap<String, String> = v.iter().map(|(e, c)| (target.label(*e).to_string(), coef(c))).collect();
    json!({ "word": labels(space, w), "defect": out })
}
