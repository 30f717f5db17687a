//! Exact formal linear combinations over an ordered basis, and sparse row
//! reduction over ℚ.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::parse("scalar", format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Canonical `"n"` / `"n/d"` text.
pub fn format_scalar(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// A finite formal linear combination `Σ c_b · b` with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<B: Ord> {
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord> Default for Element<B> {
    fn default() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> Element<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Scalar::one())
    }

    pub fn term(b: B, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Scalar> {
        self.terms.iter()
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn leading(&self) -> Option<(&B, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `sign · c · b` for a `±1` sign without allocating a negated scalar
    /// twice.
    pub fn add_signed(&mut self, b: B, c: &Scalar, sign: i32) {
        if sign >= 0 {
            self.add_term(b, c.clone());
        } else {
            self.add_term(b, -c.clone());
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Element<B>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn add_assign_signed(&mut self, other: &Element<B>, sign: i32) {
        for (b, x) in &other.terms {
            self.add_signed(b.clone(), x, sign);
        }
    }

    pub fn add(&self, other: &Element<B>) -> Element<B> {
        let mut out = self.clone();
        out.add_assign_signed(other, 1);
        out
    }

    pub fn sub(&self, other: &Element<B>) -> Element<B> {
        let mut out = self.clone();
        out.add_assign_signed(other, -1);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Element<B> {
        if c.is_zero() {
            return Self::zero();
        }
        Element {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Element<B> {
        Element {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), -x)).collect(),
        }
    }

    /// Linear extension of a basis map `b ↦ f(b)`.
    pub fn flat_map<C: Ord + Clone, F>(&self, mut f: F) -> Element<C>
    where
        F: FnMut(&B) -> Element<C>,
    {
        let mut out = Element::zero();
        for (b, x) in &self.terms {
            out.add_assign_scaled(&f(b), x);
        }
        out
    }

    /// Fallible linear extension of a basis map.
    pub fn try_flat_map<C: Ord + Clone, F>(&self, mut f: F) -> Result<Element<C>>
    where
        F: FnMut(&B) -> Result<Element<C>>,
    {
        let mut out = Element::zero();
        for (b, x) in &self.terms {
            out.add_assign_scaled(&f(b)?, x);
        }
        Ok(out)
    }

    /// Renders with a basis formatter, e.g. `2*a + -1/3*b`; `0` when empty.
    pub fn render(&self, mut fmt_basis: impl FnMut(&B) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(b, c)| {
                let body = fmt_basis(b);
                if c.is_one() {
                    body
                } else if (-c).is_one() {
                    format!("-{body}")
                } else {
                    format!("{}*{body}", format_scalar(c))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<B: Ord + Clone> FromIterator<(B, Scalar)> for Element<B> {
    fn from_iter<T: IntoIterator<Item = (B, Scalar)>>(iter: T) -> Self {
        Self::from_terms(iter)
    }
}

impl<B: Ord> IntoIterator for Element<B> {
    type Item = (B, Scalar);
    type IntoIter = btree_map::IntoIter<B, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, B: Ord> IntoIterator for &'a Element<B> {
    type Item = (&'a B, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, B, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<B: Ord + Clone + fmt::Debug> fmt::Debug for Element<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|b| format!("{b:?}")))
    }
}

/// Reduced row-echelon basis of a span of sparse vectors.
///
/// Rows are keyed by their pivot, the first basis element in canonical order.
/// Each row has coefficient one at its pivot and zero at every other pivot.
#[derive(Clone)]
pub struct Echelon<B: Ord> {
    rows: BTreeMap<B, Element<B>>,
}

impl<B: Ord> Default for Echelon<B> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone + fmt::Debug> fmt::Debug for Echelon<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.values()).finish()
    }
}

impl<B: Ord + Clone> Echelon<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Element<B>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &B> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, b: &B) -> bool {
        self.rows.contains_key(b)
    }

    /// Remainder of `v` modulo the span. Zero iff `v` lies in the span; in
    /// general it is the unique representative with no pivot coordinates.
    pub fn reduce(&self, v: &Element<B>) -> Element<B> {
        let mut out = v.clone();
        for (b, c) in v.iter() {
            if let Some(row) = self.rows.get(b) {
                out.add_assign_scaled(row, &-c.clone());
            }
        }
        out
    }

    pub fn contains(&self, v: &Element<B>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a vector to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &Element<B>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.leading() else {
            return false;
        };
        let pivot = pivot.clone();
        let r = r.scale(&lead.recip());
        for row in self.rows.values_mut() {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.add_assign_scaled(&r, &-c);
            }
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// Reduced echelon basis of the span of `vectors`.
pub fn row_reduce<'a, B: Ord + Clone + 'a>(
    vectors: impl IntoIterator<Item = &'a Element<B>>,
) -> Echelon<B> {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech
}

/// True when every coefficient is an integer of absolute value at most `bound`.
pub fn small_integer_coefficients<B: Ord + Clone>(e: &Element<B>, bound: i64) -> bool {
    e.iter()
        .all(|(_, c)| c.is_integer() && c.abs() <= int(bound))
}
