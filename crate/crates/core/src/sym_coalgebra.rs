//! The symmetric coalgebra `S⁺(H[a−b])`: coproduct `Δ`, the coderivations
//! `m`, `ℓ″` and `Q = m + ℓ″`, and the cobracket `δ″`.
//!
//! A factor `X` has degree `x″ = dg(X) − a + b`. Symmetric words are kept
//! sorted by the word order; reordering accumulates the Koszul sign in `x″`.

use std::fmt;

use smallvec::SmallVec;

use crate::ab_core::{big_d, ell2_doubleprime, AbAlgebra};
use crate::error::Result;
use crate::freemodule::{Element, Scalar};
use crate::signs::{koszul_sign_unchecked, move_to_front_sign, sign_pow};
use crate::tensor_coalgebra::{LetterDegrees, ShuffleQuotient, Tensor, TensorWord};

/// A nonempty product `X₁…X_n` in canonical (sorted) order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymWord(SmallVec<[TensorWord; 4]>);

pub type SymPair = Tensor<SymWord>;

impl SymWord {
    /// Wraps factors that are already in canonical order.
    pub fn from_sorted(factors: Vec<TensorWord>) -> Option<SymWord> {
        let ok = !factors.is_empty() && factors.windows(2).all(|w| w[0] <= w[1]);
        ok.then(|| SymWord(SmallVec::from_vec(factors)))
    }

    pub fn factors(&self) -> &[TensorWord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter_count(&self) -> usize {
        self.0.iter().map(TensorWord::len).sum()
    }

    pub fn render(&self, word: &dyn Fn(&TensorWord) -> String) -> String {
        self.0
            .iter()
            .map(|w| if w.len() > 1 { format!("({})", word(w)) } else { word(w) })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Debug for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|w| format!("{w:?}")))
    }
}

/// Degrees on `S⁺(H[a−b])`.
#[derive(Clone, Copy, Debug)]
pub struct SymGrading<'a> {
    pub letters: &'a LetterDegrees,
    pub a_minus_b: i64,
}

impl<'a> SymGrading<'a> {
    pub fn of(alg: &'a AbAlgebra) -> Self {
        SymGrading {
            letters: alg.quotient().degrees(),
            a_minus_b: alg.a - alg.b,
        }
    }

    /// `x″` of one factor.
    pub fn factor(&self, w: &TensorWord) -> i64 {
        self.letters.word(w) - self.a_minus_b
    }

    pub fn word(&self, s: &SymWord) -> i64 {
        s.0.iter().map(|w| self.factor(w)).sum()
    }

    /// Sorts `factors` into canonical order. Returns the Koszul sign, or
    /// `None` when a repeated odd factor makes the product vanish.
    pub fn normalize(&self, factors: &[TensorWord]) -> Option<(i32, SymWord)> {
        let n = factors.len();
        let mut order: SmallVec<[usize; 8]> = (0..n).collect();
        order.sort_by(|&i, &j| factors[i].cmp(&factors[j]));
        let mut images: SmallVec<[usize; 8]> = SmallVec::from_elem(0, n);
        for (pos, &i) in order.iter().enumerate() {
            images[i] = pos;
        }
        let sorted: SmallVec<[TensorWord; 4]> = order.iter().map(|&i| factors[i].clone()).collect();
        for k in 1..n {
            if sorted[k] == sorted[k - 1] && self.factor(&sorted[k]).rem_euclid(2) == 1 {
                return None;
            }
        }
        let sign = koszul_sign_unchecked(factors.iter().map(|w| self.factor(w)), &images);
        Some((sign, SymWord(sorted)))
    }

    pub fn sym_word(&self, factors: &[TensorWord]) -> Element<SymWord> {
        let mut out = Element::zero();
        self.add_product(&mut out, factors, &Scalar::from_integer(1.into()), 1);
        out
    }

    /// Adds `sign · c · (f₁·…·f_k)` after normalizing.
    pub fn add_product(&self, out: &mut Element<SymWord>, factors: &[TensorWord], c: &Scalar, sign: i32) {
        if let Some((s, w)) = self.normalize(factors) {
            out.add_signed(w, c, s * sign);
        }
    }

    fn degrees(&self, w: &SymWord) -> SmallVec<[i64; 8]> {
        w.0.iter().map(|x| self.factor(x)).collect()
    }
}

/// Bitmask subsets of `0..n` that are nonempty and proper, ascending.
fn proper_subsets(n: usize) -> impl Iterator<Item = u32> {
    1..(1u32 << n) - 1
}

fn split(w: &SymWord, mask: u32) -> (SmallVec<[usize; 8]>, SmallVec<[usize; 8]>) {
    (0..w.len()).partition(|&i| mask & (1 << i) != 0)
}

fn pick(w: &SymWord, idx: &[usize]) -> SmallVec<[TensorWord; 4]> {
    idx.iter().map(|&i| w.0[i].clone()).collect()
}

/// `Δ(X₁…X_n) = Σ_{I⊔J, I,J≠∅} ε X_I ⨂ X_J`.
pub fn coproduct_delta(g: &SymGrading<'_>, w: &SymWord) -> Element<SymPair> {
    let degs = g.degrees(w);
    let mut out = Element::zero();
    for mask in proper_subsets(w.len()) {
        let (i, j) = split(w, mask);
        let sign = move_to_front_sign(&degs, &i);
        let left = SymWord(pick(w, &i));
        let right = SymWord(pick(w, &j));
        out.add_signed(Tensor::pair(left, right), &Scalar::from_integer(1.into()), sign);
    }
    out
}

pub fn coproduct_elements(g: &SymGrading<'_>, x: &Element<SymWord>) -> Element<SymPair> {
    x.flat_map(|w| coproduct_delta(g, w))
}

/// `m(X₁…X_n) = Σᵢ ε D(Xᵢ)·X₁…X̂ᵢ…X_n`.
pub fn extend_m(alg: &AbAlgebra, w: &SymWord) -> Result<Element<SymWord>> {
    let g = SymGrading::of(alg);
    let degs = g.degrees(w);
    let mut out = Element::zero();
    for i in 0..w.len() {
        let sign = move_to_front_sign(&degs, &[i]);
        let rest: SmallVec<[TensorWord; 4]> =
            (0..w.len()).filter(|&k| k != i).map(|k| w.0[k].clone()).collect();
        for (u, c) in &big_d(alg, &w.0[i])? {
            let mut f = SmallVec::<[TensorWord; 4]>::new();
            f.push(u.clone());
            f.extend(rest.iter().cloned());
            g.add_product(&mut out, &f, c, sign);
        }
    }
    Ok(out)
}

/// `ℓ″(X₁…X_n) = Σ_{i<j} ε ℓ″₂(Xᵢ,X_j)·X₁…X̂ᵢ…X̂_j…X_n`.
pub fn extend_ell_doubleprime(alg: &AbAlgebra, w: &SymWord) -> Result<Element<SymWord>> {
    let g = SymGrading::of(alg);
    let degs = g.degrees(w);
    let mut out = Element::zero();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let sign = move_to_front_sign(&degs, &[i, j]);
            let rest: SmallVec<[TensorWord; 4]> = (0..w.len())
                .filter(|&k| k != i && k != j)
                .map(|k| w.0[k].clone())
                .collect();
            for (u, c) in &ell2_doubleprime(alg, &w.0[i], &w.0[j])? {
                let mut f = SmallVec::<[TensorWord; 4]>::new();
                f.push(u.clone());
                f.extend(rest.iter().cloned());
                g.add_product(&mut out, &f, c, sign);
            }
        }
    }
    Ok(out)
}

/// `Q = m + ℓ″`.
pub fn q(alg: &AbAlgebra, w: &SymWord) -> Result<Element<SymWord>> {
    Ok(extend_m(alg, w)?.add(&extend_ell_doubleprime(alg, w)?))
}

/// `Q(X₁…X_n) = Σ_{I≠∅} ε Q_{#I}(X_I)·X_J` with `Q₁ = D`, `Q₂ = ℓ″₂` and
/// `Q_k = 0` for `k ≥ 3`.
pub fn q_by_partitions(alg: &AbAlgebra, w: &SymWord) -> Result<Element<SymWord>> {
    let g = SymGrading::of(alg);
    let degs = g.degrees(w);
    let n = w.len();
    let mut out = Element::zero();
    for mask in 1..(1u32 << n) {
        let (i, j) = split(w, mask);
        let image = match i.len() {
            1 => big_d(alg, &w.0[i[0]])?,
            2 => ell2_doubleprime(alg, &w.0[i[0]], &w.0[i[1]])?,
            _ => continue,
        };
        let sign = move_to_front_sign(&degs, &i);
        let rest = pick(w, &j);
        for (u, c) in &image {
            let mut f = SmallVec::<[TensorWord; 4]>::new();
            f.push(u.clone());
            f.extend(rest.iter().cloned());
            g.add_product(&mut out, &f, c, sign);
        }
    }
    Ok(out)
}

pub fn on_elements<F>(x: &Element<SymWord>, mut f: F) -> Result<Element<SymWord>>
where
    F: FnMut(&SymWord) -> Result<Element<SymWord>>,
{
    x.try_flat_map(|w| f(w))
}

/// The cobracket `δ″` of degree `a − b`.
pub fn cobracket_delta_doubleprime(g: &SymGrading<'_>, w: &SymWord) -> Element<SymPair> {
    let degs = g.degrees(w);
    let ab = g.a_minus_b;
    let n = w.len();
    let one = Scalar::from_integer(1.into());
    let mut out = Element::zero();
    for s in 0..n {
        let xs = &w.0[s];
        if xs.len() < 2 {
            continue;
        }
        let others: SmallVec<[usize; 8]> = (0..n).filter(|&k| k != s).collect();
        for mask in 0..(1u32 << others.len()) {
            let (i, j): (SmallVec<[usize; 8]>, SmallVec<[usize; 8]>) =
                others.iter().enumerate().fold(Default::default(), |(mut i, mut j), (k, &o)| {
                    if mask & (1 << k) != 0 {
                        i.push(o);
                    } else {
                        j.push(o);
                    }
                    (i, j)
                });
            let mut order: SmallVec<[usize; 8]> = i.clone();
            order.push(s);
            order.extend(j.iter().copied());
            let eps = move_to_front_sign(&degs, &order);
            let x_i: i64 = i.iter().map(|&k| degs[k]).sum();
            let xi = pick(w, &i);
            let xj = pick(w, &j);
            for cut in 1..xs.len() {
                let u = TensorWord(SmallVec::from_slice(&xs.0[..cut]));
                let v = TensorWord(SmallVec::from_slice(&xs.0[cut..]));
                let (uu, vv) = (g.factor(&u), g.factor(&v));
                let pre = eps * sign_pow(ab * (x_i + uu));
                let swap = sign_pow(uu * vv + ab + 1);
                for (first, second, sign) in [(&u, &v, pre), (&v, &u, pre * swap)] {
                    let mut l = xi.clone();
                    l.push(first.clone());
                    let mut r = SmallVec::<[TensorWord; 4]>::new();
                    r.push(second.clone());
                    r.extend(xj.iter().cloned());
                    let (Some((sl, lw)), Some((sr, rw))) = (g.normalize(&l), g.normalize(&r)) else {
                        continue;
                    };
                    out.add_signed(Tensor::pair(lw, rw), &one, sign * sl * sr);
                }
            }
        }
    }
    out
}

pub fn cobracket_dp_elements(g: &SymGrading<'_>, x: &Element<SymWord>) -> Element<SymPair> {
    x.flat_map(|w| cobracket_delta_doubleprime(g, w))
}

/// Canonical form in `S⁺(H[a−b])`: every factor replaced by its normal form
/// in `H`, then re-sorted.
pub fn sym_normal_form(
    h: &ShuffleQuotient,
    g: &SymGrading<'_>,
    x: &Element<SymWord>,
) -> Element<SymWord> {
    let mut out = Element::zero();
    for (w, c) in x {
        for (factors, coeff) in expand_factors(h, w.factors(), c) {
            g.add_product(&mut out, &factors, &coeff, 1);
        }
    }
    out
}

/// Canonical form in `S⁺ ⊗ … ⊗ S⁺`.
pub fn sym_tensor_normal_form(
    h: &ShuffleQuotient,
    g: &SymGrading<'_>,
    x: &Element<Tensor<SymWord>>,
) -> Element<Tensor<SymWord>> {
    let mut out = Element::zero();
    for (t, c) in x {
        let mut partial: Vec<(SmallVec<[SymWord; 4]>, Scalar, i32)> = vec![(SmallVec::new(), c.clone(), 1)];
        for w in t.factors() {
            let mut next = Vec::new();
            for (factors, coeff) in expand_factors(h, w.factors(), &Scalar::from_integer(1.into())) {
                let Some((s, sw)) = g.normalize(&factors) else { continue };
                for (prefix, pc, ps) in &partial {
                    let mut p = prefix.clone();
                    p.push(sw.clone());
                    next.push((p, pc * &coeff, ps * s));
                }
            }
            partial = next;
        }
        for (f, coeff, s) in partial {
            out.add_signed(Tensor(f), &coeff, s);
        }
    }
    out
}

fn expand_factors(
    h: &ShuffleQuotient,
    factors: &[TensorWord],
    c: &Scalar,
) -> Vec<(SmallVec<[TensorWord; 4]>, Scalar)> {
    let mut partial: Vec<(SmallVec<[TensorWord; 4]>, Scalar)> = vec![(SmallVec::new(), c.clone())];
    for f in factors {
        let nf = h.word_normal_form(f);
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
    partial
}

/// Symmetric words with at most `max_factors` factors, each of length at most
/// `max_word_len`, with at most `max_letters` letters in total, over `pool`.
pub fn enumerate_sym_words(
    g: &SymGrading<'_>,
    pool: &[u32],
    max_word_len: usize,
    max_factors: usize,
    max_letters: usize,
) -> Vec<SymWord> {
    let mut words = Vec::new();
    for len in 1..=max_word_len.min(max_letters) {
        for t in crate::ab_core::tuples(pool, len) {
            words.push(TensorWord(SmallVec::from_vec(t)));
        }
    }
    words.sort();
    let mut out = Vec::new();
    let mut current: SmallVec<[TensorWord; 4]> = SmallVec::new();
    multisets(g, &words, 0, max_factors, max_letters, &mut current, &mut out);
    out.sort();
    out
}

fn multisets(
    g: &SymGrading<'_>,
    words: &[TensorWord],
    start: usize,
    slots: usize,
    letters: usize,
    current: &mut SmallVec<[TensorWord; 4]>,
    out: &mut Vec<SymWord>,
) {
    if !current.is_empty() {
        out.push(SymWord(current.clone()));
    }
    if slots == 0 {
        return;
    }
    for k in start..words.len() {
        let w = &words[k];
        if w.len() > letters {
            continue;
        }
        if current.last() == Some(w) && g.factor(w).rem_euclid(2) == 1 {
            continue;
        }
        current.push(w.clone());
        multisets(g, words, k, slots - 1, letters - w.len(), current, out);
        current.pop();
    }
}
