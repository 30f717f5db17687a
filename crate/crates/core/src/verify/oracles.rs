//! Direct implementations of the classical brackets and cobrackets that the
//! generic `(a,b)` constructions specialize to. They share no sign or
//! enumeration code with the generic path: shuffles are enumerated as
//! position subsets and every reordering sign is counted by bubble sort.

use crate::ab_core::AbAlgebra;
use crate::error::Result;
use crate::freemodule::{int, Element};
use crate::sym_coalgebra::SymWord;
use crate::tensor_coalgebra::{Gen, Tensor, TensorWord};

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of sorting `items` by key with adjacent swaps, each swap of two odd
/// degrees contributing −1.
fn bubble_sign<K: Ord + Clone>(items: &mut [(K, i64)]) -> i64 {
    let mut sign = 1;
    for pass in 0..items.len() {
        for i in 0..items.len().saturating_sub(pass + 1) {
            if items[i].0 > items[i + 1].0 {
                if items[i].1.rem_euclid(2) == 1 && items[i + 1].1.rem_euclid(2) == 1 {
                    sign = -sign;
                }
                items.swap(i, i + 1);
            }
        }
    }
    sign
}

/// Position subsets of size `p` in `0..n`, as sorted vectors.
fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Shuffles of `x` and `y` as (word, sign, origin) triples, where `origin[k]`
/// tells whether position `k` holds a letter of `x`.
fn shuffles(alg: &AbAlgebra, x: &TensorWord, y: &TensorWord) -> Vec<(Vec<Gen>, i64, Vec<bool>)> {
    let (p, q) = (x.len(), y.len());
    let mut out = Vec::new();
    for pos in subsets(p + q, p) {
        let mut word = vec![0; p + q];
        let mut from_x = vec![false; p + q];
        let mut items = Vec::with_capacity(p + q);
        let (mut ix, mut iy) = (0, 0);
        for (k, slot) in word.iter_mut().enumerate() {
            if pos.contains(&k) {
                *slot = x.letters()[ix];
                from_x[k] = true;
                ix += 1;
            } else {
                *slot = y.letters()[iy];
                iy += 1;
            }
        }
        // original order is x then y; the shuffle sends letter i to its slot
        let mut targets: Vec<usize> = pos.clone();
        targets.extend((0..p + q).filter(|k| !pos.contains(k)));
        let letters: Vec<Gen> = x.letters().iter().chain(y.letters()).copied().collect();
        for (i, &t) in targets.iter().enumerate() {
            items.push((t, alg.dg(letters[i])));
        }
        let sign = bubble_sign(&mut items);
        out.push((word, sign, from_x));
    }
    out
}

fn contract(
    alg: &AbAlgebra,
    x: &TensorWord,
    y: &TensorWord,
    prefix_sign: bool,
    letter_bracket: impl Fn(Gen, Gen) -> Result<Element<Gen>>,
) -> Result<Element<TensorWord>> {
    let mut out = Element::zero();
    for (word, sign, from_x) in shuffles(alg, x, y) {
        for k in 0..word.len() - 1 {
            if !(from_x[k] && !from_x[k + 1]) {
                continue;
            }
            let prefix: i64 = word[..k].iter().map(|&g| alg.dg(g)).sum();
            let s = sign * if prefix_sign { parity_sign(prefix) } else { 1 };
            for (&g, c) in &letter_bracket(word[k], word[k + 1])? {
                let mut w = word[..k].to_vec();
                w.push(g);
                w.extend_from_slice(&word[k + 2..]);
                out.add_term(TensorWord::new(&w)?, c * int(s));
            }
        }
    }
    Ok(out)
}

/// The degree-0 bracket on `H` induced by a Gerstenhaber bracket:
/// shuffle sum with the Koszul sign only.
pub fn gerstenhaber_bracket(alg: &AbAlgebra, x: &TensorWord, y: &TensorWord) -> Result<Element<TensorWord>> {
    contract(alg, x, y, false, |u, v| alg.bracket(u, v))
}

/// `{X,Y} = (−1)^{x′}[X,Y]` on `H[−1]` for a graded Poisson algebra, where
/// `[X,Y]` carries the extra prefix sign and the letter bracket is
/// `[α,β] = (−1)^{dg α}{α,β}`.
pub fn poisson_bracket_h(alg: &AbAlgebra, x: &TensorWord, y: &TensorWord) -> Result<Element<TensorWord>> {
    let raw = contract(alg, x, y, true, |u, v| {
        Ok(alg.bracket(u, v)?.scale(&int(parity_sign(alg.dg(u)))))
    })?;
    let x_prime: i64 = x.letters().iter().map(|&g| alg.dg(g)).sum::<i64>() + 1;
    Ok(raw.scale(&int(parity_sign(x_prime))))
}

/// Canonical symmetric word for `factors` with degrees from `deg`, or `None`
/// when two equal odd factors meet.
fn sym_canonical(factors: Vec<TensorWord>, deg: &dyn Fn(&TensorWord) -> i64) -> Option<(i64, SymWord)> {
    let mut items: Vec<(TensorWord, i64)> = factors.into_iter().map(|w| {
        let d = deg(&w);
        (w, d)
    }).collect();
    let sign = bubble_sign(&mut items);
    for pair in items.windows(2) {
        if pair[0].0 == pair[1].0 && pair[0].1.rem_euclid(2) == 1 {
            return None;
        }
    }
    SymWord::from_sorted(items.into_iter().map(|(w, _)| w).collect()).map(|s| (sign, s))
}

/// Shared skeleton of the two cobrackets on `S⁺`: for each factor `X_s`, each
/// deconcatenation `U⊗V` and each split of the remaining factors into `I`
/// and `J`, emit `pre · (X_I·U ⨂ V·X_J + swap · X_I·V ⨂ U·X_J)`.
fn sym_cobracket(
    w: &SymWord,
    deg: &dyn Fn(&TensorWord) -> i64,
    pre: &dyn Fn(i64, i64) -> i64,
    swap: &dyn Fn(i64, i64) -> i64,
) -> Element<Tensor<SymWord>> {
    let f = w.factors();
    let n = f.len();
    let mut out = Element::zero();
    for s in 0..n {
        if f[s].len() < 2 {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&k| k != s).collect();
        // assignment[k] = true puts others[k] in I
        for code in 0..(1usize << others.len()) {
            let in_i: Vec<bool> = (0..others.len()).map(|k| (code >> k) & 1 == 1).collect();
            let i_idx: Vec<usize> = others.iter().zip(&in_i).filter(|p| *p.1).map(|p| *p.0).collect();
            let j_idx: Vec<usize> = others.iter().zip(&in_i).filter(|p| !*p.1).map(|p| *p.0).collect();
            // ε: the sign of rearranging X₁…X_n into X_I X_s X_J
            let mut target = vec![0; n];
            for (pos, &k) in i_idx.iter().chain(std::iter::once(&s)).chain(&j_idx).enumerate() {
                target[k] = pos;
            }
            let mut items: Vec<(usize, i64)> = (0..n).map(|k| (target[k], deg(&f[k]))).collect();
            let eps = bubble_sign(&mut items);
            let x_i: i64 = i_idx.iter().map(|&k| deg(&f[k])).sum();
            for cut in 1..f[s].len() {
                let u = TensorWord::new(&f[s].letters()[..cut]).expect("nonempty");
                let v = TensorWord::new(&f[s].letters()[cut..]).expect("nonempty");
                let (du, dv) = (deg(&u), deg(&v));
                let base = eps * pre(x_i, du);
                for (first, second, sign) in [(&u, &v, base), (&v, &u, base * swap(du, dv))] {
                    let mut left: Vec<TensorWord> = i_idx.iter().map(|&k| f[k].clone()).collect();
                    left.push(first.clone());
                    let mut right = vec![second.clone()];
                    right.extend(j_idx.iter().map(|&k| f[k].clone()));
                    let (Some((sl, l)), Some((sr, r))) = (sym_canonical(left, deg), sym_canonical(right, deg)) else {
                        continue;
                    };
                    out.add_term(Tensor::pair(l, r), int(sign * sl * sr));
                }
            }
        }
    }
    out
}

/// The cosymmetric cobracket `κ` on `S⁺(H[1])` of a Gerstenhaber algebra,
/// degrees `x′ = dg(X) − 1`.
pub fn kappa(alg: &AbAlgebra, w: &SymWord) -> Element<Tensor<SymWord>> {
    let deg = |t: &TensorWord| t.letters().iter().map(|&g| alg.dg(g)).sum::<i64>() - 1;
    sym_cobracket(w, &deg, &|x_i, u| parity_sign(x_i + u), &|u, v| parity_sign(u * v))
}

/// The coantisymmetric cobracket on `S⁺(H)` of a graded Poisson algebra,
/// degrees `x = dg(X)`.
pub fn poisson_cobracket(alg: &AbAlgebra, w: &SymWord) -> Element<Tensor<SymWord>> {
    let deg = |t: &TensorWord| t.letters().iter().map(|&g| alg.dg(g)).sum::<i64>();
    sym_cobracket(w, &deg, &|_, _| 1, &|u, v| -parity_sign(u * v))
}
