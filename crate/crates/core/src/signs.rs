//! Degree bookkeeping and Koszul signs.
//!
//! Every `±` produced anywhere in the crate comes from this module. Degrees
//! are full integers; only their parity ever reaches a sign rule.

use std::fmt;

use crate::error::{Error, Result};

/// An integer grading degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(pub i64);

impl Degree {
    pub fn is_odd(self) -> bool {
        self.0.rem_euclid(2) == 1
    }

    pub fn parity(self) -> u8 {
        self.0.rem_euclid(2) as u8
    }

    /// Degree in `V[k]`, where `V[k]_i = V_{i+k}`.
    pub fn shift(self, k: i64) -> Degree {
        Degree(self.0 - k)
    }

    /// Shifted degree of an element of `A[-a+1]`: `|x| + a - 1`.
    pub fn dg(self, a: i64) -> Degree {
        Degree(self.0 + a - 1)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree(self.0 + rhs.0)
    }
}

/// `(-1)^e` as `±1`.
#[inline]
pub fn sign_pow(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign `(-1)^{xy}` for swapping two homogeneous factors.
#[inline]
pub fn swap_sign(x: i64, y: i64) -> i32 {
    if x.rem_euclid(2) == 1 && y.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// A permutation of `{0, .., n-1}` stored by images: `images[i] = σ(i)`.
///
/// Acting on a sequence, `σ` sends the entry at index `i` to position `σ(i)`,
/// so the reordered sequence reads `α_{σ⁻¹(0)}, .., α_{σ⁻¹(n-1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Contract(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from 1-based images as written in cycle-free notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Contract("1-based images must be >= 1".into()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &s) in self.images.iter().enumerate() {
            inv[s] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// Reorders `items` so that position `σ(i)` receives `items[i]`.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        let inv = self.inverse();
        inv.images.iter().map(|&i| items[i].clone()).collect()
    }

    /// Ordinary signature (all entries treated as odd).
    pub fn signature(&self) -> i32 {
        signature_by_cycles(&self.images)
    }
}

/// Signature via cycle decomposition: `(-1)^{n - #cycles}`.
fn signature_by_cycles(images: &[usize]) -> i32 {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut cycles = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
        }
    }
    if (n - cycles).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Koszul sign of reordering homogeneous factors of the given degrees by `sigma`.
///
/// Computed as the signature of `sigma` restricted to the indices carrying an
/// odd degree (relabelled to `0..k` in order).
pub fn koszul_sign(degrees: &[Degree], sigma: &Permutation) -> Result<i32> {
    if degrees.len() != sigma.len() {
        return Err(Error::Contract(format!(
            "koszul_sign: {} degrees for a permutation of size {}",
            degrees.len(),
            sigma.len()
        )));
    }
    Ok(koszul_sign_unchecked(degrees.iter().map(|d| d.0), sigma.images()))
}

pub(crate) fn koszul_sign_unchecked(
    degrees: impl Iterator<Item = i64>,
    images: &[usize],
) -> i32 {
    let odd_positions: Vec<usize> = degrees
        .enumerate()
        .filter(|(_, d)| d.rem_euclid(2) == 1)
        .map(|(i, _)| images[i])
        .collect();
    if odd_positions.len() < 2 {
        return 1;
    }
    // Rank the target positions of the odd entries to get the restricted permutation.
    let mut order: Vec<usize> = (0..odd_positions.len()).collect();
    order.sort_unstable_by_key(|&k| odd_positions[k]);
    let mut restricted = vec![0; odd_positions.len()];
    for (rank, &k) in order.iter().enumerate() {
        restricted[k] = rank;
    }
    signature_by_cycles(&restricted)
}

/// Independent check of [`koszul_sign`]: realise `sigma` as a product of
/// adjacent transpositions (bubble sort) and multiply `(-1)^{d_i d_j}` per swap.
pub fn koszul_sign_by_transpositions(degrees: &[Degree], sigma: &Permutation) -> Result<i32> {
    if degrees.len() != sigma.len() {
        return Err(Error::Contract(format!(
            "koszul_sign: {} degrees for a permutation of size {}",
            degrees.len(),
            sigma.len()
        )));
    }
    // Each slot carries (target position, degree); sort by target.
    let mut slots: Vec<(usize, i64)> = sigma
        .images()
        .iter()
        .zip(degrees)
        .map(|(&t, d)| (t, d.0))
        .collect();
    let mut sign = 1;
    let n = slots.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if slots[i].0 > slots[i + 1].0 {
                sign *= swap_sign(slots[i].1, slots[i + 1].1);
                slots.swap(i, i + 1);
            }
        }
    }
    Ok(sign)
}

/// Koszul sign for permuting whole homogeneous blocks, each block counted by
/// its total degree.
pub fn block_sign(block_degrees: &[Degree], block_permutation: &Permutation) -> Result<i32> {
    koszul_sign(block_degrees, block_permutation)
}

/// Sign of moving the entries at `selected` (in their given order) to the
/// front, the remaining entries keeping their relative order.
pub fn move_to_front_sign(degrees: &[i64], selected: &[usize]) -> i32 {
    let mut sign = 1;
    // Entry `s` passes every entry before it that has not already moved.
    let mut taken = vec![false; degrees.len()];
    for &s in selected {
        let mut crossing = 0i64;
        for (j, &d) in degrees.iter().enumerate().take(s) {
            if !taken[j] {
                crossing += d;
            }
        }
        taken[s] = true;
        sign *= sign_pow(crossing * degrees[s]);
    }
    sign
}

/// All `(p,q)`-shuffles: permutations increasing on the first `p` and on the
/// last `q` indices. Emitted in lexicographic order of the position set of
/// the first block.
pub fn enumerate_shuffles(p: usize, q: usize) -> Result<Vec<Permutation>> {
    if p == 0 || q == 0 {
        return Err(Error::Contract(format!(
            "shuffles need p, q >= 1 (got p={p}, q={q})"
        )));
    }
    let n = p + q;
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..p).collect();
    loop {
        let mut images = Vec::with_capacity(n);
        images.extend_from_slice(&subset);
        let mut in_first = vec![false; n];
        for &s in &subset {
            in_first[s] = true;
        }
        images.extend((0..n).filter(|&i| !in_first[i]));
        out.push(Permutation { images });
        // Next p-subset of 0..n in lexicographic order.
        let mut i = p;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] < n - p + i {
                subset[i] += 1;
                for j in i + 1..p {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient, used for shuffle counts.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degs(v: &[i64]) -> Vec<Degree> {
        v.iter().copied().map(Degree).collect()
    }

    #[test]
    fn koszul_examples() {
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(koszul_sign(&degs(&[1, 1]), &swap).unwrap(), -1);
        assert_eq!(koszul_sign(&degs(&[2, 1]), &swap).unwrap(), 1);
        let cycle = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(koszul_sign(&degs(&[1, 1, 1]), &cycle).unwrap(), 1);
        assert_eq!(
            koszul_sign_by_transpositions(&degs(&[1, 1, 1]), &cycle).unwrap(),
            1
        );
    }

    #[test]
    fn block_sign_examples() {
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(block_sign(&degs(&[3, 2]), &swap).unwrap(), 1);
        assert_eq!(block_sign(&degs(&[1, 3]), &swap).unwrap(), -1);
        let p = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(block_sign(&degs(&[1, 1, 2]), &p).unwrap(), -1);
        assert_eq!(
            koszul_sign_by_transpositions(&degs(&[1, 1, 2]), &p).unwrap(),
            -1
        );
    }

    #[test]
    fn length_mismatch_is_contract_error() {
        let id = Permutation::identity(3);
        assert!(matches!(
            koszul_sign(&degs(&[1, 1]), &id),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn bad_permutation_rejected() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let s11 = enumerate_shuffles(1, 1).unwrap();
        assert_eq!(s11.len(), 2);
        assert_eq!(s11[0], Permutation::identity(2));
        assert_eq!(s11[1].images(), &[1, 0]);
        assert_eq!(enumerate_shuffles(2, 1).unwrap().len(), 3);
        assert_eq!(enumerate_shuffles(2, 2).unwrap().len(), 6);
        assert!(enumerate_shuffles(0, 2).is_err());
        assert!(enumerate_shuffles(2, 0).is_err());
    }

    #[test]
    fn move_to_front_matches_koszul() {
        // Bring entries 2 then 0 to the front of four odd entries.
        let d = [1, 1, 1, 1];
        // New order: 2, 0, 1, 3 -> images: 0->1, 1->2, 2->0, 3->3.
        let sigma = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        let expected = koszul_sign(&degs(&d), &sigma).unwrap();
        assert_eq!(move_to_front_sign(&d, &[2, 0]), expected);
    }
}
