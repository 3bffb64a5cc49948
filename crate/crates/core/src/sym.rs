//! Graded-symmetric words and the combinatorics of the symmetric coalgebra.
//!
//! A word `x₁⊙…⊙x_k` is stored sorted by `(degree, index)`. Moving adjacent
//! elements of degrees `p` and `q` past each other costs `(−1)^{pq}`, and a
//! word repeating an odd element is zero.
//!
//! Unshuffles and set partitions are enumerated over positions and then
//! merged: each distinct outcome is listed once with an integer coefficient
//! equal to the signed number of positional choices producing it.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{BasisElem, GradedSpace, Rat, Scalar, Vector};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SymWord(Vec<BasisElem>);

impl SymWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn single(e: BasisElem) -> Self {
        Self(vec![e])
    }

    pub fn elems(&self) -> &[BasisElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|e| e.degree).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }

    /// Multiplicities `m_e` of each distinct element.
    pub fn multiplicities(&self) -> BTreeMap<BasisElem, usize> {
        let mut m = BTreeMap::new();
        for e in &self.0 {
            *m.entry(*e).or_insert(0) += 1;
        }
        m
    }

    /// `Π m_e!`, the size of the stabilizer of the word.
    pub fn symmetry_factor(&self) -> Rat {
        self.multiplicities()
            .values()
            .map(|m| crate::linalg::factorial(*m))
            .product()
    }

    fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !w[0].is_odd()))
    }

    /// Accepts an already sorted word; `None` if unsorted or zero.
    pub fn from_sorted(elems: Vec<BasisElem>) -> Option<Self> {
        let w = Self(elems);
        w.is_canonical().then_some(w)
    }

    /// `self ⊙ other` as a canonical word with its sign, or `None` if zero.
    pub fn concat(&self, other: &SymWord) -> Option<(SymWord, i64)> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        canonicalize(&v)
    }
}

impl fmt::Debug for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

fn koszul(a: BasisElem, b: BasisElem) -> i64 {
    if a.is_odd() && b.is_odd() {
        -1
    } else {
        1
    }
}

/// Sorts a word, returning the Koszul sign of the sort, or `None` when an
/// odd element repeats.
pub fn canonicalize(word: &[BasisElem]) -> Option<(SymWord, i64)> {
    let mut v = word.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            sign *= koszul(v[j - 1], v[j]);
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    let w = SymWord(v);
    w.is_canonical().then_some((w, sign))
}

/// Sign of reordering positions `0..k` of `word` into `order`.
fn permutation_sign(word: &[BasisElem], order: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                sign *= koszul(word[order[a]], word[order[b]]);
            }
        }
    }
    sign
}

fn pick(word: &[BasisElem], idx: &[usize]) -> SymWord {
    SymWord(idx.iter().map(|i| word[*i]).collect())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unshuffle {
    pub left: SymWord,
    pub right: SymWord,
    pub coeff: i64,
}

/// `(i, k−i)`-unshuffles of a canonical word.
pub fn unshuffles(word: &SymWord, i: usize) -> Vec<Unshuffle> {
    let k = word.len();
    let mut acc: BTreeMap<(SymWord, SymWord), i64> = BTreeMap::new();
    if i <= k {
        for mask in 0u64..(1u64 << k) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let left: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).collect();
            let right: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 0).collect();
            let order: Vec<usize> = left.iter().chain(&right).copied().collect();
            let s = permutation_sign(&word.0, &order);
            *acc.entry((pick(&word.0, &left), pick(&word.0, &right))).or_insert(0) += s;
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((left, right), coeff)| Unshuffle { left, right, coeff })
        .collect()
}

/// All unshuffles of every size: the coproduct `Δ`.
pub fn coproduct(word: &SymWord) -> Vec<Unshuffle> {
    (0..=word.len()).flat_map(|i| unshuffles(word, i)).collect()
}

/// Restricted growth strings of length `k`: set partitions of `0..k`.
fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, k, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockPartition {
    /// Blocks in ascending canonical order.
    pub blocks: Vec<SymWord>,
    pub coeff: i64,
}

/// Partitions of a canonical word into `p` nonempty blocks.
pub fn block_partitions(word: &SymWord, p: usize) -> Vec<BlockPartition> {
    all_block_partitions(word)
        .into_iter()
        .filter(|b| b.blocks.len() == p)
        .collect()
}

/// Partitions of a canonical word into any number of nonempty blocks. The
/// empty word has exactly one partition, into zero blocks.
pub fn all_block_partitions(word: &SymWord) -> Vec<BlockPartition> {
    let mut acc: BTreeMap<Vec<SymWord>, i64> = BTreeMap::new();
    for part in set_partitions(word.len()) {
        let mut blocks: Vec<(SymWord, &Vec<usize>)> =
            part.iter().map(|b| (pick(&word.0, b), b)).collect();
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        let order: Vec<usize> = blocks.iter().flat_map(|(_, b)| b.iter().copied()).collect();
        let s = permutation_sign(&word.0, &order);
        *acc.entry(blocks.into_iter().map(|(w, _)| w).collect()).or_insert(0) += s;
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(blocks, coeff)| BlockPartition { blocks, coeff })
        .collect()
}

/// Every canonical word over `space` with at most `max_arity` letters whose
/// degree is at most `max_degree`.
pub fn words(space: &GradedSpace, max_arity: usize, max_degree: i32) -> Vec<SymWord> {
    let basis: Vec<BasisElem> = space.basis().collect();
    let mut out = vec![SymWord::empty()];
    let mut frontier = vec![(SymWord::empty(), 0usize)];
    for _ in 0..max_arity {
        let mut next = Vec::new();
        for (w, start) in &frontier {
            for (i, e) in basis.iter().enumerate().skip(*start) {
                if e.is_odd() && w.0.last() == Some(e) {
                    continue;
                }
                if w.degree() + e.degree > max_degree {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(*e);
                let nw = SymWord(v);
                out.push(nw.clone());
                next.push((nw, i));
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Element of the symmetric algebra: canonical words with coefficients.
#[derive(Clone, PartialEq)]
pub struct SymElem<R> {
    terms: BTreeMap<SymWord, R>,
}

impl<R> Default for SymElem<R> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Scalar> SymElem<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(SymWord::empty())
    }

    pub fn word(w: SymWord) -> Self {
        Self::term(w, R::one())
    }

    pub fn term(w: SymWord, c: R) -> Self {
        let mut s = Self::zero();
        s.add_term(w, c);
        s
    }

    /// The weight-one element given by a vector.
    pub fn from_vector(v: &Vector<R>) -> Self {
        let mut s = Self::zero();
        for (e, c) in v.iter() {
            s.add_term(SymWord::single(*e), c.clone());
        }
        s
    }

    pub fn add_term(&mut self, w: SymWord, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                x.add_assign(&c);
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &R) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.mul(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &R::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &R::one().neg());
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&R::from_rat(r))
    }

    /// Graded-commutative product `⊙`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((w, s)) = a.concat(b) {
                    let c = x.mul(y);
                    out.add_term(w, if s < 0 { c.neg() } else { c });
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SymWord, &R)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &SymWord) -> R {
        self.terms.get(w).cloned().unwrap_or_else(R::zero)
    }

    /// Terms with exactly `k` letters.
    pub fn weight_part(&self, k: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The weight-one part as a vector.
    pub fn linear_part(&self) -> Vector<R> {
        Vector::from_terms(
            self.terms
                .iter()
                .filter(|(w, _)| w.len() == 1)
                .map(|(w, c)| (w.0[0], c.clone())),
        )
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> SymElem<S> {
        let mut out = SymElem::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl<R: fmt::Debug> fmt::Debug for SymElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: BasisElem = BasisElem::new(1, 1);
    const B: BasisElem = BasisElem::new(1, 0);
    const H: BasisElem = BasisElem::new(2, 0);

    fn w(v: &[BasisElem]) -> SymWord {
        canonicalize(v).unwrap().0
    }

    #[test]
    fn canonicalize_examples() {
        let e2 = BasisElem::new(2, 0);
        let e1 = BasisElem::new(1, 0);
        assert_eq!(canonicalize(&[e2, e1]), Some((SymWord(vec![e1, e2]), 1)));
        assert_eq!(canonicalize(&[A, B]), Some((SymWord(vec![B, A]), -1)));
        assert_eq!(canonicalize(&[A, A]), None);
        assert_eq!(canonicalize(&[H, H]), Some((SymWord(vec![H, H]), 1)));
    }

    #[test]
    fn unshuffle_examples() {
        let x = BasisElem::new(2, 0);
        let y = BasisElem::new(2, 1);
        let u = unshuffles(&w(&[x, y]), 1);
        assert_eq!(u.len(), 2);
        assert!(u.iter().all(|t| t.coeff == 1));
        let u = unshuffles(&w(&[B, A]), 1);
        let swapped = u.iter().find(|t| t.left == SymWord::single(A)).unwrap();
        assert_eq!(swapped.coeff, -1);
        let u = unshuffles(&w(&[B, A]), 0);
        assert_eq!(u, vec![Unshuffle { left: SymWord::empty(), right: w(&[B, A]), coeff: 1 }]);
    }

    #[test]
    fn repeated_even_letters_merge() {
        let u = unshuffles(&w(&[H, H]), 1);
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].coeff, 2);
        let p = block_partitions(&w(&[H, H]), 2);
        assert_eq!(p, vec![BlockPartition { blocks: vec![w(&[H]), w(&[H])], coeff: 1 }]);
        assert_eq!(block_partitions(&w(&[H, H]), 1).len(), 1);
    }

    #[test]
    fn stirling_counts() {
        let x: Vec<BasisElem> = (0..3).map(|i| BasisElem::new(2, i)).collect();
        assert_eq!(block_partitions(&w(&x), 2).len(), 3);
    }

    #[test]
    fn coproduct_of_small_words() {
        assert_eq!(coproduct(&SymWord::empty()).len(), 1);
        assert_eq!(coproduct(&SymWord::single(H)).len(), 2);
        let d = coproduct(&w(&[B, A]));
        assert_eq!(d.len(), 4);
        assert_eq!(d.iter().filter(|t| t.coeff == -1).count(), 1);
    }

    #[test]
    fn words_respect_odd_rule() {
        let s = GradedSpace::from_labels([(1, vec!["a"]), (2, vec!["h"])]).unwrap();
        let ws = words(&s, 3, 100);
        assert!(ws.iter().all(|x| x.is_canonical()));
        // ∅, a, h, ah, hh, ahh, hhh
        assert_eq!(ws.len(), 7);
    }
}
