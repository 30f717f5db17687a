//! Tensor words, signed shuffles, the shuffle quotient `H`, and the
//! deconcatenation cobracket `δ`.
//!
//! Classes in `H` are represented by raw words. Equality in `H` is decided per
//! block (the multiset of letters of a word): a word's normal form is its
//! remainder against the reduced echelon basis of the block's shuffle span.
//! Since that remainder is a projection with kernel exactly the span,
//! applying it to every factor of a tensor decides equality in `H⊗H`, `H⊗³`
//! and the symmetric powers alike.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::freemodule::{Echelon, Element, Scalar};
use crate::signs::{enumerate_shuffles, koszul_sign_unchecked, sign_pow, Permutation};

/// Letter id: an index into the generator list of an algebra.
pub type Gen = u32;

/// A nonempty ordered sequence of letters.
///
/// Ordered by length, then lexicographically by letter id.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorWord(pub SmallVec<[Gen; 6]>);

impl TensorWord {
    pub fn new(letters: &[Gen]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Contract("tensor words are nonempty".into()));
        }
        Ok(TensorWord(SmallVec::from_slice(letters)))
    }

    pub fn letter(g: Gen) -> Self {
        TensorWord(SmallVec::from_slice(&[g]))
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TensorWord(v)
    }

    /// Sorted letters: the block this word belongs to.
    pub fn block(&self) -> Block {
        let mut b = self.0.clone();
        b.sort_unstable();
        Block(b)
    }

    pub fn render(&self, names: &dyn Fn(Gen) -> String) -> String {
        self.0.iter().map(|&g| names(g)).collect::<Vec<_>>().join("⊗")
    }
}

impl Ord for TensorWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for TensorWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|g| format!("g{g}")))
    }
}

/// Sorted multiset of letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block(pub SmallVec<[Gen; 6]>);

impl Block {
    /// All distinct words on this multiset, in word order.
    pub fn arrangements(&self) -> Vec<TensorWord> {
        let mut out = Vec::new();
        let mut current: SmallVec<[Gen; 6]> = SmallVec::new();
        let mut used = vec![false; self.0.len()];
        arrange(&self.0, &mut used, &mut current, &mut out);
        out
    }
}

fn arrange(
    letters: &[Gen],
    used: &mut [bool],
    current: &mut SmallVec<[Gen; 6]>,
    out: &mut Vec<TensorWord>,
) {
    if current.len() == letters.len() {
        out.push(TensorWord(current.clone()));
        return;
    }
    for i in 0..letters.len() {
        // letters are sorted; skip duplicates to emit each word once
        if used[i] || (i > 0 && letters[i] == letters[i - 1] && !used[i - 1]) {
            continue;
        }
        used[i] = true;
        current.push(letters[i]);
        arrange(letters, used, current, out);
        current.pop();
        used[i] = false;
    }
}

/// Shifted degrees of letters, indexed by letter id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterDegrees(pub Vec<i64>);

impl LetterDegrees {
    pub fn of(&self, g: Gen) -> i64 {
        self.0[g as usize]
    }

    pub fn word(&self, w: &TensorWord) -> i64 {
        w.0.iter().map(|&g| self.of(g)).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Signed shuffle `bat_{p,q}(x, y)`.
pub fn shuffle(degrees: &LetterDegrees, x: &TensorWord, y: &TensorWord) -> Element<TensorWord> {
    let (p, q) = (x.len(), y.len());
    let concat = x.concat(y);
    let mut out = Element::zero();
    for sigma in enumerate_shuffles(p, q).expect("words are nonempty") {
        let sign = koszul_sign_unchecked(concat.0.iter().map(|&g| degrees.of(g)), sigma.images());
        let word = TensorWord(sigma.apply(&concat.0).into_iter().collect());
        out.add_term(word, Scalar::from_integer(sign.into()));
    }
    out
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_elements(
    degrees: &LetterDegrees,
    x: &Element<TensorWord>,
    y: &Element<TensorWord>,
) -> Element<TensorWord> {
    let mut out = Element::zero();
    for (u, cu) in x {
        for (v, cv) in y {
            out.add_assign_scaled(&shuffle(degrees, u, v), &(cu * cv));
        }
    }
    out
}

/// Reduced echelon basis of all shuffle images inside one block.
pub fn shuffle_span(degrees: &LetterDegrees, block: &Block) -> Echelon<TensorWord> {
    let mut ech = Echelon::new();
    let n = block.0.len();
    if n < 2 {
        return ech;
    }
    for w in block.arrangements() {
        for p in 1..n {
            let u = TensorWord(SmallVec::from_slice(&w.0[..p]));
            let v = TensorWord(SmallVec::from_slice(&w.0[p..]));
            ech.insert(&shuffle(degrees, &u, &v));
        }
    }
    ech
}

/// Dimension of the quotient of a block by its shuffle span.
pub fn quotient_dimension(degrees: &LetterDegrees, block: &Block) -> usize {
    block.arrangements().len() - shuffle_span(degrees, block).rank()
}

/// The quotient `H` for a fixed letter grading, with memoized block bases.
///
/// Caches are populated under a write lock after computing outside it; a
/// racing writer only causes a recomputation of the same value.
#[derive(Debug)]
pub struct ShuffleQuotient {
    degrees: LetterDegrees,
    spans: RwLock<HashMap<Block, Arc<Echelon<TensorWord>>>>,
    normal_forms: RwLock<HashMap<TensorWord, Arc<Element<TensorWord>>>>,
}

impl Clone for ShuffleQuotient {
    fn clone(&self) -> Self {
        ShuffleQuotient::new(self.degrees.clone())
    }
}

impl ShuffleQuotient {
    pub fn new(degrees: LetterDegrees) -> Self {
        ShuffleQuotient {
            degrees,
            spans: RwLock::new(HashMap::new()),
            normal_forms: RwLock::new(HashMap::new()),
        }
    }

    pub fn degrees(&self) -> &LetterDegrees {
        &self.degrees
    }

    pub fn span(&self, block: &Block) -> Arc<Echelon<TensorWord>> {
        if let Some(e) = self.spans.read().unwrap().get(block) {
            return e.clone();
        }
        let e = Arc::new(shuffle_span(&self.degrees, block));
        self.spans
            .write()
            .unwrap()
            .entry(block.clone())
            .or_insert(e)
            .clone()
    }

    /// Canonical representative of the class of `w` in `H`.
    pub fn word_normal_form(&self, w: &TensorWord) -> Arc<Element<TensorWord>> {
        if let Some(e) = self.normal_forms.read().unwrap().get(w) {
            return e.clone();
        }
        let nf = Arc::new(if w.len() < 2 {
            Element::basis(w.clone())
        } else {
            self.span(&w.block()).reduce(&Element::basis(w.clone()))
        });
        self.normal_forms
            .write()
            .unwrap()
            .entry(w.clone())
            .or_insert(nf)
            .clone()
    }

    pub fn normal_form(&self, v: &Element<TensorWord>) -> Element<TensorWord> {
        let mut out = Element::zero();
        for (w, c) in v {
            out.add_assign_scaled(&self.word_normal_form(w), c);
        }
        out
    }

    pub fn is_zero_in_h(&self, v: &Element<TensorWord>) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Normal form of a tensor of words, factor by factor.
    pub fn tensor_normal_form(&self, v: &Element<Tensor<TensorWord>>) -> Element<Tensor<TensorWord>> {
        let mut out = Element::zero();
        for (t, c) in v {
            let mut partial: Vec<(SmallVec<[TensorWord; 4]>, Scalar)> = vec![(SmallVec::new(), c.clone())];
            for w in t.factors() {
                let nf = self.word_normal_form(w);
                let mut next = Vec::with_capacity(partial.len() * nf.len());
                for (prefix, pc) in &partial {
                    for (u, uc) in nf.iter() {
                        let mut p = prefix.clone();
                        p.push(u.clone());
                        next.push((p, pc * uc));
                    }
                }
                partial = next;
            }
            for (factors, coeff) in partial {
                out.add_term(Tensor(factors), coeff);
            }
        }
        out
    }

    /// Equality in `H⊗…⊗H`.
    pub fn tensor_is_zero(&self, v: &Element<Tensor<TensorWord>>) -> bool {
        self.tensor_normal_form(v).is_zero()
    }

    pub fn pair_is_zero_in_hh(&self, v: &Element<Tensor<TensorWord>>) -> bool {
        self.tensor_is_zero(v)
    }
}

/// An ordered tensor `t₁ ⨂ … ⨂ t_k` of basis objects.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tensor<T>(pub SmallVec<[T; 4]>);

pub type TensorPair = Tensor<TensorWord>;

impl<T: Clone> Tensor<T> {
    pub fn from_slice(items: &[T]) -> Self {
        Tensor(items.iter().cloned().collect())
    }

    pub fn pair(x: T, y: T) -> Self {
        let mut v = SmallVec::new();
        v.push(x);
        v.push(y);
        Tensor(v)
    }

    pub fn single(x: T) -> Self {
        let mut v = SmallVec::new();
        v.push(x);
        Tensor(v)
    }

    pub fn factors(&self) -> &[T] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl<T: fmt::Debug> fmt::Debug for Tensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| format!("({t:?})")).collect();
        f.write_str(&parts.join(" ⨂ "))
    }
}

/// Applies `f` to the `arity` factors starting at `slot`, splicing its output
/// factors in place, with the Koszul sign `(−1)^{deg_f · Σ_{i<slot} |tᵢ|}`.
pub fn apply_at<T, D, F>(
    x: &Element<Tensor<T>>,
    slot: usize,
    arity: usize,
    deg_f: i64,
    deg: D,
    mut f: F,
) -> Result<Element<Tensor<T>>>
where
    T: Ord + Clone,
    D: Fn(&T) -> i64,
    F: FnMut(&[T]) -> Result<Element<Tensor<T>>>,
{
    let mut out = Element::zero();
    for (t, c) in x {
        if slot + arity > t.arity() {
            return Err(Error::Contract(format!(
                "operator of arity {arity} at slot {slot} on a tensor of arity {}",
                t.arity()
            )));
        }
        let before: i64 = t.0[..slot].iter().map(&deg).sum();
        let sign = sign_pow(deg_f * before);
        let image = f(&t.0[slot..slot + arity])?;
        for (mid, mc) in image {
            let mut v: SmallVec<[T; 4]> = SmallVec::new();
            v.extend(t.0[..slot].iter().cloned());
            v.extend(mid.0);
            v.extend(t.0[slot + arity..].iter().cloned());
            out.add_signed(Tensor(v), &(c * mc), sign);
        }
    }
    Ok(out)
}

/// Moves factor `i` to position `σ(i)` with the Koszul sign.
pub fn permute_factors<T, D>(x: &Element<Tensor<T>>, sigma: &Permutation, deg: D) -> Element<Tensor<T>>
where
    T: Ord + Clone,
    D: Fn(&T) -> i64,
{
    let mut out = Element::zero();
    for (t, c) in x {
        assert_eq!(t.arity(), sigma.len(), "permutation size matches tensor arity");
        let sign = koszul_sign_unchecked(t.0.iter().map(&deg), sigma.images());
        out.add_signed(Tensor(sigma.apply(&t.0).into_iter().collect()), c, sign);
    }
    out
}

/// `τ₁₂` on pairs, `τ₁₂`/`τ₂₃` on triples, as permutations.
pub fn swap(arity: usize, i: usize) -> Permutation {
    let mut images: Vec<usize> = (0..arity).collect();
    images.swap(i, i + 1);
    Permutation::from_images(images).expect("transposition is a bijection")
}

/// `δ(X) = Σ_{X=U⊗V} U⨂V − (−1)^{uv} V⨂U`, zero on single letters.
pub fn cobracket_delta(degrees: &LetterDegrees, x: &TensorWord) -> Element<TensorPair> {
    let mut out = Element::zero();
    for cut in 1..x.len() {
        let u = TensorWord(SmallVec::from_slice(&x.0[..cut]));
        let v = TensorWord(SmallVec::from_slice(&x.0[cut..]));
        let sign = -sign_pow(degrees.word(&u) * degrees.word(&v));
        out.add_term(Tensor::pair(u.clone(), v.clone()), Scalar::from_integer(1.into()));
        out.add_term(Tensor::pair(v, u), Scalar::from_integer(sign.into()));
    }
    out
}

/// Linear extension of [`cobracket_delta`].
pub fn cobracket_elements(degrees: &LetterDegrees, x: &Element<TensorWord>) -> Element<TensorPair> {
    x.flat_map(|w| cobracket_delta(degrees, w))
}

/// Embeds words as one-factor tensors.
pub fn as_tensor(x: &Element<TensorWord>) -> Element<Tensor<TensorWord>> {
    x.iter().map(|(w, c)| (Tensor::single(w.clone()), c.clone())).collect()
}

/// Lifts a word map to a one-slot tensor operator body.
pub fn word_map<F>(mut f: F) -> impl FnMut(&[TensorWord]) -> Result<Element<Tensor<TensorWord>>>
where
    F: FnMut(&TensorWord) -> Result<Element<TensorWord>>,
{
    move |ws| Ok(as_tensor(&f(&ws[0])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemodule::int;

    fn w(letters: &[Gen]) -> TensorWord {
        TensorWord::new(letters).unwrap()
    }

    #[test]
    fn shuffle_examples() {
        let even = LetterDegrees(vec![0, 2, 4]);
        let odd = LetterDegrees(vec![1, 1, 3]);
        let s = shuffle(&even, &w(&[0]), &w(&[1]));
        assert_eq!(s, Element::from_terms([(w(&[0, 1]), int(1)), (w(&[1, 0]), int(1))]));
        let s = shuffle(&odd, &w(&[0]), &w(&[1]));
        assert_eq!(s, Element::from_terms([(w(&[0, 1]), int(1)), (w(&[1, 0]), int(-1))]));
        let s = shuffle(&even, &w(&[0, 1]), &w(&[2]));
        assert_eq!(
            s,
            Element::from_terms([
                (w(&[0, 1, 2]), int(1)),
                (w(&[0, 2, 1]), int(1)),
                (w(&[2, 0, 1]), int(1)),
            ])
        );
    }

    #[test]
    fn shuffle_span_examples() {
        let even = LetterDegrees(vec![0, 2, 4]);
        let odd = LetterDegrees(vec![1, 1]);
        let b2 = w(&[0, 1]).block();
        let ech = shuffle_span(&even, &b2);
        assert_eq!(ech.rank(), 1);
        assert!(ech.contains(&Element::from_terms([(w(&[0, 1]), int(1)), (w(&[1, 0]), int(1))])));
        let ech = shuffle_span(&odd, &b2);
        assert_eq!(ech.rank(), 1);
        let plus = Element::from_terms([(w(&[0, 1]), int(1)), (w(&[1, 0]), int(1))]);
        let minus = Element::from_terms([(w(&[0, 1]), int(1)), (w(&[1, 0]), int(-1))]);
        assert!(ech.contains(&minus));
        assert!(!ech.contains(&plus));
        let b3 = w(&[0, 1, 2]).block();
        assert_eq!(shuffle_span(&even, &b3).rank(), 4);
        assert_eq!(quotient_dimension(&even, &b3), 2);
    }

    #[test]
    fn is_zero_examples() {
        let degs = LetterDegrees(vec![1, 2, 3]);
        let h = ShuffleQuotient::new(degs.clone());
        assert!(h.is_zero_in_h(&shuffle(&degs, &w(&[0, 1]), &w(&[2]))));
        assert!(!h.is_zero_in_h(&Element::basis(w(&[0, 1, 2]))));
        assert!(h.is_zero_in_h(&Element::zero()));
        // an even letter squared is half of its own shuffle
        let even = LetterDegrees(vec![2]);
        let h = ShuffleQuotient::new(even);
        assert!(h.is_zero_in_h(&Element::basis(w(&[0, 0]))));
    }

    #[test]
    fn cobracket_examples() {
        let even = LetterDegrees(vec![0, 2]);
        assert!(cobracket_delta(&even, &w(&[0])).is_zero());
        let d = cobracket_delta(&even, &w(&[0, 1]));
        assert_eq!(
            d,
            Element::from_terms([
                (Tensor::pair(w(&[0]), w(&[1])), int(1)),
                (Tensor::pair(w(&[1]), w(&[0])), int(-1)),
            ])
        );
        let odd = LetterDegrees(vec![1, 1, 1]);
        let d = cobracket_delta(&odd, &w(&[0, 1, 2]));
        assert_eq!(
            d,
            Element::from_terms([
                (Tensor::pair(w(&[0]), w(&[1, 2])), int(1)),
                (Tensor::pair(w(&[1, 2]), w(&[0])), int(-1)),
                (Tensor::pair(w(&[0, 1]), w(&[2])), int(1)),
                (Tensor::pair(w(&[2]), w(&[0, 1])), int(-1)),
            ])
        );
    }

    #[test]
    fn pair_zero_examples() {
        let degs = LetterDegrees(vec![1, 2, 0]);
        let h = ShuffleQuotient::new(degs.clone());
        let s = shuffle(&degs, &w(&[0]), &w(&[1]));
        let pair: Element<TensorPair> =
            s.iter().map(|(u, c)| (Tensor::pair(u.clone(), w(&[2])), c.clone())).collect();
        assert!(h.pair_is_zero_in_hh(&pair));
        let p = Element::basis(Tensor::pair(w(&[0]), w(&[1])));
        assert!(h.pair_is_zero_in_hh(&p.sub(&p)));
        assert!(!h.pair_is_zero_in_hh(&p));
    }

    #[test]
    fn arrangements_of_repeated_letters() {
        let b = Block(SmallVec::from_slice(&[0, 0, 1]));
        assert_eq!(b.arrangements(), vec![w(&[0, 0, 1]), w(&[0, 1, 0]), w(&[1, 0, 0])]);
    }
}
