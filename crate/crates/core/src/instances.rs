//! Concrete (a,b)-algebras: polynomial superfunctions on `ℝ^{p|q}` with a
//! super-Poisson bracket, and polyvector fields with the Schouten bracket.
//! Each is realized as a truncated [`AbAlgebra`] over an explicit monomial
//! basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::ab_core::{AbAlgebra, AlgebraBuilder, Entry, Operation};
use crate::error::{Error, Result};
use crate::freemodule::{int, parse_scalar, Element, Scalar};
use crate::signs::sign_pow;
use crate::tensor_coalgebra::Gen;

/// Coordinates `x₁…x_p | ξ₁…ξ_q`. Partial derivative indices run over
/// `0..p` for `∂x` and `p..p+q` for `∂ξ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuperSpace {
    pub p: usize,
    pub q: usize,
}

impl SuperSpace {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p > 8 || q > 8 {
            return Err(Error::Usage("at most 8 even and 8 odd coordinates".into()));
        }
        Ok(SuperSpace { p, q })
    }

    pub fn coordinates(&self) -> usize {
        self.p + self.q
    }

    /// `|∂_i|`: −2 for `∂x`, −1 for `∂ξ`.
    pub fn partial_degree(&self, i: usize) -> i64 {
        if i < self.p {
            -2
        } else {
            -1
        }
    }

    pub fn coordinate_name(&self, i: usize) -> String {
        if i < self.p {
            format!("x{}", i + 1)
        } else {
            format!("xi{}", i - self.p + 1)
        }
    }
}

/// `x^e ξ_{j₁}…ξ_{j_r}` with `j₁ < … < j_r`, stored as exponents and a bitmask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperMonomial {
    pub even: SmallVec<[u8; 4]>,
    pub odd: u32,
}

pub type SuperPoly = Element<SuperMonomial>;

/// Sign of merging two sorted sets of odd generators, or `None` on overlap.
fn merge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut crossings = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        crossings += (a >> bit).count_ones();
        rest &= rest - 1;
    }
    Some(if crossings.is_multiple_of(2) { 1 } else { -1 })
}

impl SuperMonomial {
    pub fn one(space: SuperSpace) -> Self {
        SuperMonomial {
            even: SmallVec::from_elem(0, space.p),
            odd: 0,
        }
    }

    pub fn x(space: SuperSpace, i: usize) -> Self {
        let mut m = Self::one(space);
        m.even[i] = 1;
        m
    }

    pub fn xi(space: SuperSpace, j: usize) -> Self {
        let mut m = Self::one(space);
        m.odd = 1 << j;
        m
    }

    /// `|m| = 2·Σ exponents + #odd`.
    pub fn degree(&self) -> i64 {
        2 * self.polynomial_degree_even() + self.odd.count_ones() as i64
    }

    fn polynomial_degree_even(&self) -> i64 {
        self.even.iter().map(|&e| e as i64).sum()
    }

    /// Total number of coordinate factors.
    pub fn polynomial_degree(&self) -> i64 {
        self.polynomial_degree_even() + self.odd.count_ones() as i64
    }

    pub fn mul(&self, other: &SuperMonomial) -> Option<(i32, SuperMonomial)> {
        let sign = merge_sign(self.odd, other.odd)?;
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        Some((sign, SuperMonomial { even, odd: self.odd | other.odd }))
    }

    /// Graded derivative `∂_i`; `∂ξ_j` acts from the left.
    pub fn partial(&self, space: SuperSpace, i: usize) -> Option<(i64, SuperMonomial)> {
        if i < space.p {
            let e = self.even[i];
            if e == 0 {
                return None;
            }
            let mut m = self.clone();
            m.even[i] -= 1;
            Some((e as i64, m))
        } else {
            let j = i - space.p;
            if self.odd & (1 << j) == 0 {
                return None;
            }
            let before = (self.odd & ((1 << j) - 1)).count_ones() as i64;
            let mut m = self.clone();
            m.odd &= !(1 << j);
            Some((sign_pow(before) as i64, m))
        }
    }

    pub fn name(&self, space: SuperSpace) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(space.coordinate_name(i)),
                _ => parts.push(format!("{}^{e}", space.coordinate_name(i))),
            }
        }
        for j in 0..space.q {
            if self.odd & (1 << j) != 0 {
                parts.push(space.coordinate_name(space.p + j));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for SuperMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}ξ{:b}", self.even.as_slice(), self.odd)
    }
}

pub fn poly_mul(f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
    let mut out = Element::zero();
    for (u, cu) in f {
        for (v, cv) in g {
            if let Some((s, w)) = u.mul(v) {
                out.add_signed(w, &(cu * cv), s);
            }
        }
    }
    out
}

pub fn partial(space: SuperSpace, i: usize, f: &SuperPoly) -> SuperPoly {
    let mut out = Element::zero();
    for (m, c) in f {
        if let Some((k, w)) = m.partial(space, i) {
            out.add_term(w, c * int(k));
        }
    }
    out
}

/// Degree of a homogeneous polynomial, `None` if zero or inhomogeneous.
pub fn poly_degree(f: &SuperPoly) -> Option<i64> {
    let mut degs = f.basis_elements().map(SuperMonomial::degree);
    let d = degs.next()?;
    degs.all(|e| e == d).then_some(d)
}

/// Coefficients `ω^{ij}` of a super-Poisson bracket of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonTensor {
    pub space: SuperSpace,
    pub m: i64,
    pub omega: BTreeMap<(usize, usize), SuperPoly>,
}

impl PoissonTensor {
    pub fn new(space: SuperSpace, m: i64) -> Self {
        PoissonTensor {
            space,
            m,
            omega: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, w: SuperPoly) -> &mut Self {
        self.omega.insert((i, j), w);
        self
    }

    pub fn entry(&self, i: usize, j: usize) -> SuperPoly {
        self.omega.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Constant antisymmetric `ω^{ij} = c = −ω^{ji}`.
    pub fn constant_pair(space: SuperSpace, m: i64, i: usize, j: usize, c: Scalar) -> Self {
        let one = SuperMonomial::one(space);
        let mut t = PoissonTensor::new(space, m);
        t.set(i, j, Element::term(one.clone(), c.clone()));
        t.set(j, i, Element::term(one, -c));
        t
    }
}

/// `{f,g} = (−1)^{m|f|} Σ_{i,j} (−1)^{|∂j|(|f|+|∂i|)} ω^{ij} ∂_i(f) ∂_j(g)`
/// on monomials.
pub fn poisson_bracket_monomials(t: &PoissonTensor, f: &SuperMonomial, g: &SuperMonomial) -> SuperPoly {
    let space = t.space;
    let fd = f.degree();
    let mut out = Element::zero();
    for (&(i, j), w) in &t.omega {
        let (Some((ci, fi)), Some((cj, gj))) = (f.partial(space, i), g.partial(space, j)) else {
            continue;
        };
        let s = sign_pow(t.m * fd) * sign_pow(space.partial_degree(j) * (fd + space.partial_degree(i)));
        let prod = poly_mul(&poly_mul(w, &Element::basis(fi)), &Element::basis(gj));
        out.add_assign_scaled(&prod, &int(s as i64 * ci * cj));
    }
    out
}

pub fn poisson_bracket(t: &PoissonTensor, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
    let mut out = Element::zero();
    for (u, cu) in f {
        for (v, cv) in g {
            out.add_assign_scaled(&poisson_bracket_monomials(t, u, v), &(cu * cv));
        }
    }
    out
}

/// Which of the three tensor conditions an entry addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorCondition {
    Homogeneity,
    GradedSymmetry,
    Jacobi,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TensorViolation {
    pub condition: TensorCondition,
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TensorReport {
    pub violations: Vec<TensorViolation>,
}

impl TensorReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, c: TensorCondition) -> bool {
        !self.violations.iter().any(|v| v.condition == c)
    }

    pub fn first(&self, c: TensorCondition) -> Option<&TensorViolation> {
        self.violations.iter().find(|v| v.condition == c)
    }
}

/// Evaluates homogeneity, graded symmetry and the cyclic Jacobi condition on
/// every index (pair, triple).
pub fn check_poisson_tensor(t: &PoissonTensor) -> TensorReport {
    let space = t.space;
    let n = space.coordinates();
    let dp = |i: usize| space.partial_degree(i);
    let render = |f: &SuperPoly| f.render(|m| m.name(space));
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = t.entry(i, j);
            if let Some(bad) = w
                .basis_elements()
                .find(|mono| mono.degree() + dp(i) + dp(j) != t.m)
            {
                violations.push(TensorViolation {
                    condition: TensorCondition::Homogeneity,
                    indices: vec![i, j],
                    detail: format!(
                        "|{}| + |∂{}| + |∂{}| = {} ≠ {}",
                        bad.name(space),
                        space.coordinate_name(i),
                        space.coordinate_name(j),
                        bad.degree() + dp(i) + dp(j),
                        t.m
                    ),
                });
            }
            let s = sign_pow(dp(i) * dp(j) + t.m + 1);
            let other = t.entry(j, i).scale(&int(s.into()));
            if w != other {
                violations.push(TensorViolation {
                    condition: TensorCondition::GradedSymmetry,
                    indices: vec![i, j],
                    detail: format!("ω^{{ij}} = {} but the symmetric counterpart gives {}", render(&w), render(&other)),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut sum = Element::zero();
                for (a, b, c) in [(l, j, i), (j, i, l), (i, l, j)] {
                    // (−1)^{|∂a|(m+|∂c|)} Σ_k ω^{a,k} ∂_k(ω^{b,c})
                    let s = sign_pow(dp(a) * (t.m + dp(c)));
                    for k in 0..n {
                        let term = poly_mul(&t.entry(a, k), &partial(space, k, &t.entry(b, c)));
                        sum.add_assign_scaled(&term, &int(s.into()));
                    }
                }
                if !sum.is_zero() {
                    violations.push(TensorViolation {
                        condition: TensorCondition::Jacobi,
                        indices: vec![i, j, l],
                        detail: format!("cyclic sum = {}", render(&sum)),
                    });
                }
            }
        }
    }
    TensorReport { violations }
}

/// Degrees assigned to the four kinds of polyvector generators. Parities are
/// fixed (`x`, `∂ξ` even; `ξ`, `∂x` odd); only the integer values vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyGrading {
    pub x: i64,
    pub xi: i64,
    pub dx: i64,
    pub dxi: i64,
}

impl PolyGrading {
    /// `|x| = 2, |ξ| = 1, |∂x| = −3, |∂ξ| = −2`.
    pub const TPOLY: PolyGrading = PolyGrading { x: 2, xi: 1, dx: -3, dxi: -2 };
    /// `|α| = 2m + k` for coefficient degree `m` and rank `k`.
    pub const WEIGHTED: PolyGrading = PolyGrading { x: 2, xi: 1, dx: 1, dxi: 0 };
    /// `|α| = k`, the rank.
    pub const RANK: PolyGrading = PolyGrading { x: 0, xi: 1, dx: 1, dxi: 0 };
}

/// `x^e ξ_T ∂x_I ∂ξ^f`, a basis monomial of polyvector fields on `ℝ^{p|q}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyMonomial {
    pub func: SuperMonomial,
    pub dx: u32,
    pub dxi: SmallVec<[u8; 4]>,
}

pub type PolyVector = Element<PolyMonomial>;

/// One generator of the polyvector algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyGen {
    X(usize),
    Xi(usize),
    Dx(usize),
    Dxi(usize),
}

impl PolyMonomial {
    pub fn one(space: SuperSpace) -> Self {
        PolyMonomial {
            func: SuperMonomial::one(space),
            dx: 0,
            dxi: SmallVec::from_elem(0, space.q),
        }
    }

    pub fn gen(space: SuperSpace, g: PolyGen) -> Self {
        let mut m = Self::one(space);
        match g {
            PolyGen::X(i) => m.func.even[i] = 1,
            PolyGen::Xi(j) => m.func.odd = 1 << j,
            PolyGen::Dx(i) => m.dx = 1 << i,
            PolyGen::Dxi(j) => m.dxi[j] = 1,
        }
        m
    }

    pub fn function(space: SuperSpace, f: SuperMonomial) -> Self {
        let mut m = Self::one(space);
        m.func = f;
        m
    }

    /// Odd generators as one mask: `ξ` in bits `0..q`, `∂x` in bits `q..q+p`.
    fn odd_mask(&self, space: SuperSpace) -> u32 {
        self.func.odd | (self.dx << space.q)
    }

    pub fn rank(&self) -> i64 {
        self.dx.count_ones() as i64 + self.dxi.iter().map(|&e| e as i64).sum::<i64>()
    }

    pub fn degree(&self, g: PolyGrading) -> i64 {
        let xs: i64 = self.func.even.iter().map(|&e| e as i64).sum();
        let dxis: i64 = self.dxi.iter().map(|&e| e as i64).sum();
        g.x * xs + g.xi * self.func.odd.count_ones() as i64 + g.dx * self.dx.count_ones() as i64 + g.dxi * dxis
    }

    pub fn parity(&self) -> i64 {
        (self.func.odd.count_ones() + self.dx.count_ones()) as i64 % 2
    }

    pub fn is_one(&self) -> bool {
        self.func.odd == 0 && self.dx == 0 && self.func.even.iter().all(|&e| e == 0) && self.dxi.iter().all(|&e| e == 0)
    }

    /// Graded-commutative product with factor order `x, ξ, ∂x, ∂ξ`.
    pub fn wedge(&self, other: &PolyMonomial, space: SuperSpace) -> Option<(i32, PolyMonomial)> {
        let sign = merge_sign(self.odd_mask(space), other.odd_mask(space))?;
        let (_, func) = self.func.mul(&other.func)?;
        Some((
            sign,
            PolyMonomial {
                func,
                dx: self.dx | other.dx,
                dxi: self.dxi.iter().zip(&other.dxi).map(|(a, b)| a + b).collect(),
            },
        ))
    }

    /// Splits off the first generator in canonical order: `self = g ∧ rest`.
    pub fn split_first(&self, space: SuperSpace) -> Option<(PolyGen, PolyMonomial)> {
        let mut rest = self.clone();
        if let Some(i) = self.func.even.iter().position(|&e| e > 0) {
            rest.func.even[i] -= 1;
            return Some((PolyGen::X(i), rest));
        }
        if self.func.odd != 0 {
            let j = self.func.odd.trailing_zeros() as usize;
            rest.func.odd &= !(1 << j);
            return Some((PolyGen::Xi(j), rest));
        }
        if self.dx != 0 {
            let i = self.dx.trailing_zeros() as usize;
            rest.dx &= !(1 << i);
            return Some((PolyGen::Dx(i), rest));
        }
        let j = self.dxi.iter().position(|&e| e > 0)?;
        rest.dxi[j] -= 1;
        let _ = space;
        Some((PolyGen::Dxi(j), rest))
    }

    pub fn name(&self, space: SuperSpace) -> String {
        let mut parts = Vec::new();
        let f = self.func.name(space);
        if f != "1" {
            parts.push(f);
        }
        for i in 0..space.p {
            if self.dx & (1 << i) != 0 {
                parts.push(format!("dx{}", i + 1));
            }
        }
        for (j, &e) in self.dxi.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("dxi{}", j + 1)),
                _ => parts.push(format!("dxi{}^{e}", j + 1)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for PolyMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}∂x{:b}∂ξ{:?}", self.func, self.dx, self.dxi.as_slice())
    }
}

pub fn wedge(space: SuperSpace, a: &PolyVector, b: &PolyVector) -> PolyVector {
    let mut out = Element::zero();
    for (u, cu) in a {
        for (v, cv) in b {
            if let Some((s, w)) = u.wedge(v, space) {
                out.add_signed(w, &(cu * cv), s);
            }
        }
    }
    out
}

fn gen_parity(g: PolyGen) -> i64 {
    match g {
        PolyGen::X(_) | PolyGen::Dxi(_) => 0,
        PolyGen::Xi(_) | PolyGen::Dx(_) => 1,
    }
}

/// Brackets of generators: `[∂x_i, x_i] = [∂ξ_j, ξ_j] = 1`, the reversed
/// pairs give −1, everything else 0.
fn generator_bracket(g: PolyGen, h: PolyGen) -> i64 {
    match (g, h) {
        (PolyGen::Dx(i), PolyGen::X(j)) | (PolyGen::Dxi(i), PolyGen::Xi(j)) if i == j => 1,
        (PolyGen::X(j), PolyGen::Dx(i)) | (PolyGen::Xi(j), PolyGen::Dxi(i)) if i == j => -1,
        _ => 0,
    }
}

/// Schouten bracket, extended from generators as a biderivation:
/// `[α, g∧ρ] = [α,g]∧ρ + (−1)^{(|α|+1)|g|} g∧[α,ρ]` and
/// `[h∧ρ, γ] = h∧[ρ,γ] + (−1)^{|ρ|(|γ|+1)} [h,γ]∧ρ`.
pub fn schouten_monomials(space: SuperSpace, a: &PolyMonomial, b: &PolyMonomial) -> PolyVector {
    let mut memo = HashMap::new();
    schouten_rec(space, a, b, &mut memo)
}

fn schouten_rec(
    space: SuperSpace,
    a: &PolyMonomial,
    b: &PolyMonomial,
    memo: &mut HashMap<(PolyMonomial, PolyMonomial), PolyVector>,
) -> PolyVector {
    if a.is_one() || b.is_one() {
        return Element::zero();
    }
    if let Some(v) = memo.get(&(a.clone(), b.clone())) {
        return v.clone();
    }
    let (h, rho) = a.split_first(space).expect("nonconstant");
    let out = if rho.is_one() {
        let (g, sigma) = b.split_first(space).expect("nonconstant");
        if sigma.is_one() {
            let c = generator_bracket(h, g);
            if c == 0 {
                Element::zero()
            } else {
                Element::term(PolyMonomial::one(space), int(c))
            }
        } else {
            let gm = Element::basis(PolyMonomial::gen(space, g));
            let first = wedge(space, &schouten_rec(space, a, &PolyMonomial::gen(space, g), memo), &Element::basis(sigma.clone()));
            let second = wedge(space, &gm, &schouten_rec(space, a, &sigma, memo));
            let s = sign_pow((a.parity() + 1) * gen_parity(g));
            first.add(&second.scale(&int(s.into())))
        }
    } else {
        let hm = Element::basis(PolyMonomial::gen(space, h));
        let first = wedge(space, &hm, &schouten_rec(space, &rho, b, memo));
        let second = wedge(space, &schouten_rec(space, &PolyMonomial::gen(space, h), b, memo), &Element::basis(rho.clone()));
        let s = sign_pow(rho.parity() * (b.parity() + 1));
        first.add(&second.scale(&int(s.into())))
    };
    memo.insert((a.clone(), b.clone()), out.clone());
    out
}

pub fn schouten(space: SuperSpace, a: &PolyVector, b: &PolyVector) -> PolyVector {
    let mut out = Element::zero();
    let mut memo = HashMap::new();
    for (u, cu) in a {
        for (v, cv) in b {
            out.add_assign_scaled(&schouten_rec(space, u, v, &mut memo), &(cu * cv));
        }
    }
    out
}

/// The derivative factors of a monomial in canonical order, as coordinate
/// indices (`∂x_i ↦ i`, `∂ξ_j ↦ p + j`, repeated by multiplicity).
fn derivative_list(space: SuperSpace, m: &PolyMonomial) -> Vec<usize> {
    let mut out: Vec<usize> = (0..space.p).filter(|&i| m.dx & (1 << i) != 0).collect();
    for (j, &e) in m.dxi.iter().enumerate() {
        out.extend(std::iter::repeat_n(space.p + j, e as usize));
    }
    out
}

fn derivative_monomial(space: SuperSpace, coords: &[usize]) -> PolyVector {
    let mut out = Element::basis(PolyMonomial::one(space));
    for &i in coords {
        let g = if i < space.p { PolyGen::Dx(i) } else { PolyGen::Dxi(i - space.p) };
        out = wedge(space, &out, &Element::basis(PolyMonomial::gen(space, g)));
    }
    out
}

fn tpoly_partial_degree(space: SuperSpace, i: usize) -> i64 {
    if i < space.p {
        PolyGrading::TPOLY.dx
    } else {
        PolyGrading::TPOLY.dxi
    }
}

/// `α•β` evaluated term by term from its defining sum:
/// `Σ_s ± α̃ ∂_{i_s}(β̃) ∂_{I∖i_s} ∧ ∂_J`.
pub fn bullet_monomials(space: SuperSpace, a: &PolyMonomial, b: &PolyMonomial) -> PolyVector {
    let g = PolyGrading::TPOLY;
    let i_list = derivative_list(space, a);
    let j_list = derivative_list(space, b);
    let alpha_deg = a.degree(g);
    let beta_coeff = b.func.degree();
    let d_i: i64 = i_list.iter().map(|&i| tpoly_partial_degree(space, i)).sum();
    let alpha_coeff = Element::basis(PolyMonomial::function(space, a.func.clone()));
    let mut out = Element::zero();
    let mut before = 0;
    for (s, &i) in i_list.iter().enumerate() {
        let di = tpoly_partial_degree(space, i);
        if let Some((c, db)) = b.func.partial(space, i) {
            let sign = sign_pow(alpha_deg + 1 + di * before + (beta_coeff + 1) * (d_i - di));
            let mut rest: Vec<usize> = i_list.clone();
            rest.remove(s);
            rest.extend_from_slice(&j_list);
            let term = wedge(
                space,
                &wedge(space, &alpha_coeff, &Element::basis(PolyMonomial::function(space, db))),
                &derivative_monomial(space, &rest),
            );
            out.add_assign_scaled(&term, &int(c * sign as i64));
        }
        before += di;
    }
    out
}

/// `[α,β] = (−1)^{|α|+1} α•β − (−1)^{|α|(|β|+1)} β•α` from the bullet sum.
pub fn schouten_by_bullet(space: SuperSpace, a: &PolyVector, b: &PolyVector) -> PolyVector {
    let g = PolyGrading::TPOLY;
    let mut out = Element::zero();
    for (u, cu) in a {
        for (v, cv) in b {
            let (du, dv) = (u.degree(g), v.degree(g));
            let t = bullet_monomials(space, u, v)
                .scale(&int(sign_pow(du + 1).into()))
                .sub(&bullet_monomials(space, v, u).scale(&int(sign_pow(du * (dv + 1)).into())));
            out.add_assign_scaled(&t, &(cu * cv));
        }
    }
    out
}

/// Applies a vector field `Σ f_i ∂_i` (rank-one polyvector) to a function.
pub fn apply_vector_field(space: SuperSpace, x: &PolyVector, f: &SuperPoly) -> Result<SuperPoly> {
    let mut out = Element::zero();
    for (m, c) in x {
        let coords = derivative_list(space, m);
        if coords.len() != 1 {
            return Err(Error::Contract("not a vector field".into()));
        }
        let term = poly_mul(&Element::basis(m.func.clone()), &partial(space, coords[0], f));
        out.add_assign_scaled(&term, c);
    }
    Ok(out)
}

pub fn as_function(space: SuperSpace, f: &SuperPoly) -> PolyVector {
    f.iter().map(|(m, c)| (PolyMonomial::function(space, m.clone()), c.clone())).collect()
}

/// Truncation for polyvector instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyBounds {
    pub max_poly_degree: i64,
    pub max_rank: i64,
}

/// All polyvector monomials within `bounds`, in a fixed order.
pub fn polyvector_basis(space: SuperSpace, bounds: PolyBounds) -> Vec<PolyMonomial> {
    let mut funcs = Vec::new();
    for odd in 0..(1u32 << space.q) {
        let r = odd.count_ones() as i64;
        if r > bounds.max_poly_degree {
            continue;
        }
        for even in exponent_vectors(space.p, (bounds.max_poly_degree - r) as u8) {
            funcs.push(SuperMonomial { even, odd });
        }
    }
    let mut derivs = Vec::new();
    for dx in 0..(1u32 << space.p) {
        let r = dx.count_ones() as i64;
        if r > bounds.max_rank {
            continue;
        }
        for dxi in exponent_vectors(space.q, (bounds.max_rank - r) as u8) {
            derivs.push((dx, dxi));
        }
    }
    let mut out = Vec::new();
    for f in &funcs {
        for (dx, dxi) in &derivs {
            out.push(PolyMonomial { func: f.clone(), dx: *dx, dxi: dxi.clone() });
        }
    }
    out.sort_by_key(|m| (m.rank(), m.func.polynomial_degree(), m.clone()));
    out
}

/// Exponent vectors of length `n` with total at most `max`.
fn exponent_vectors(n: usize, max: u8) -> Vec<SmallVec<[u8; 4]>> {
    let mut out = vec![SmallVec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u8 = v.iter().sum();
            for e in 0..=max - used {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn table_entry<B: Ord + Clone + std::hash::Hash>(value: &Element<B>, index: &HashMap<B, Gen>) -> Entry {
    let mut e = Element::zero();
    for (m, c) in value {
        match index.get(m) {
            Some(&g) => e.add_term(g, c.clone()),
            None => return Entry::Overflow,
        }
    }
    Entry::Value(e)
}

/// A truncated polyvector algebra with `wedge` and `schouten`.
pub fn build_polyvector_algebra(
    name: &str,
    space: SuperSpace,
    grading: PolyGrading,
    (a, b): (i64, i64),
    bounds: PolyBounds,
    pool: &[PolyGen],
) -> Result<AbAlgebra> {
    if bounds.max_poly_degree < 1 || bounds.max_rank < 1 {
        return Err(Error::Usage("truncation bounds must be at least 1".into()));
    }
    let basis = polyvector_basis(space, bounds);
    let mut builder = AlgebraBuilder::new(name, a, b);
    let mut index = HashMap::new();
    for m in &basis {
        let g = builder.generator(m.name(space), m.degree(grading))?;
        index.insert(m.clone(), g);
    }
    let mut memo = HashMap::new();
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let (gi, gj) = (i as Gen, j as Gen);
            if let Some((s, w)) = u.wedge(v, space) {
                let val = Element::term(w, int(s.into()));
                builder.set(Operation::Product, gi, gj, table_entry(&val, &index));
            }
            let br = schouten_rec(space, u, v, &mut memo);
            if !br.is_zero() {
                builder.set(Operation::Bracket, gi, gj, table_entry(&br, &index));
            }
        }
    }
    let pool = pool
        .iter()
        .map(|&g| {
            index
                .get(&PolyMonomial::gen(space, g))
                .copied()
                .ok_or_else(|| Error::Usage(format!("pool generator {g:?} is outside the truncation")))
        })
        .collect::<Result<Vec<_>>>()?;
    builder.pool(pool);
    builder.build()
}

/// A derivation `Σ_i v_i ∂_i` of superfunctions, used as a differential.
pub type VectorField = Vec<(usize, SuperPoly)>;

pub fn apply_derivation(space: SuperSpace, v: &VectorField, f: &SuperPoly) -> SuperPoly {
    let mut out = Element::zero();
    for (i, coeff) in v {
        out.add_assign_scaled(&poly_mul(coeff, &partial(space, *i, f)), &int(1));
    }
    out
}

/// Super-functions of degree at most `max_degree` with product and the
/// Poisson bracket of `t`, and optional differential.
pub fn build_poisson_algebra(
    name: &str,
    t: &PoissonTensor,
    max_degree: i64,
    differential: Option<&VectorField>,
    pool: &[SuperMonomial],
) -> Result<AbAlgebra> {
    if max_degree < 1 {
        return Err(Error::Usage("truncation bounds must be at least 1".into()));
    }
    let space = t.space;
    let mut basis = Vec::new();
    for odd in 0..(1u32 << space.q) {
        let r = odd.count_ones() as i64;
        if r > max_degree {
            continue;
        }
        for even in exponent_vectors(space.p, ((max_degree - r) / 2) as u8) {
            basis.push(SuperMonomial { even, odd });
        }
    }
    basis.sort_by_key(|m| (m.degree(), m.clone()));
    let mut builder = AlgebraBuilder::new(name, 0, t.m);
    let mut index = HashMap::new();
    for m in &basis {
        let g = builder.generator(m.name(space), m.degree())?;
        index.insert(m.clone(), g);
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let (gi, gj) = (i as Gen, j as Gen);
            if let Some((s, w)) = u.mul(v) {
                let val = Element::term(w, int(s.into()));
                builder.set(Operation::Product, gi, gj, table_entry(&val, &index));
            }
            let br = poisson_bracket_monomials(t, u, v);
            if !br.is_zero() {
                builder.set(Operation::Bracket, gi, gj, table_entry(&br, &index));
            }
        }
        if let Some(vf) = differential {
            let dv = apply_derivation(space, vf, &Element::basis(u.clone()));
            if !dv.is_zero() {
                builder.set(Operation::Differential, i as Gen, i as Gen, table_entry(&dv, &index));
            }
        }
    }
    let pool = pool
        .iter()
        .map(|m| {
            index
                .get(m)
                .copied()
                .ok_or_else(|| Error::Usage(format!("pool monomial {} is outside the truncation", m.name(space))))
        })
        .collect::<Result<Vec<_>>>()?;
    builder.pool(pool);
    builder.max_degree(None);
    builder.build()
}

/// Instance parameters given as `key=value` strings.
#[derive(Clone, Debug, Default)]
pub struct Params(pub BTreeMap<String, String>);

impl Params {
    pub fn parse(items: &[String]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("parameter {item:?} is not of the form key=value")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params(map))
    }

    pub fn int_or(&self, key: &str, default: i64) -> Result<i64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Usage(format!("parameter {key} expects an integer, got {v:?}"))),
        }
    }

    fn check_known(&self, instance: &str, known: &[&str]) -> Result<()> {
        for k in self.0.keys() {
            if !known.contains(&k.as_str()) {
                return Err(Error::Usage(format!(
                    "unknown parameter {k:?} for {instance}; expected one of {}",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }
}

pub const BUILTIN_NAMES: [&str; 6] = [
    "example1",
    "example2",
    "example3",
    "example4",
    "gerstenhaber-toy",
    "koszul-poisson",
];

/// `ω` entries as `"i,j:c; …"` with 1-based coordinate indices (`x` first,
/// then `ξ`) and constant rational `c`; each entry is taken literally.
pub fn parse_constant_omega(space: SuperSpace, m: i64, text: &str) -> Result<PoissonTensor> {
    let mut t = PoissonTensor::new(space, m);
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::Usage(format!("omega entry {part:?} is not of the form i,j:c"));
        let (idx, c) = part.split_once(':').ok_or_else(bad)?;
        let (i, j) = idx.split_once(',').ok_or_else(bad)?;
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        let n = space.coordinates();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Usage(format!("omega index out of range in {part:?}")));
        }
        let c = parse_scalar(c).map_err(|_| bad())?;
        t.set(i - 1, j - 1, Element::term(SuperMonomial::one(space), c));
    }
    Ok(t)
}

/// Polyvectors with coefficient degree `m` and rank `k` graded by `2m + k`,
/// `(a,b) = (0,−3)`, on `ℝ^d`.
pub fn build_example1(d: usize, max_poly_degree: i64, max_tensor_rank: i64) -> Result<AbAlgebra> {
    let space = SuperSpace::new(d, 0)?;
    let pool = pool_even(d);
    build_polyvector_algebra(
        "example1",
        space,
        PolyGrading::WEIGHTED,
        (0, -3),
        PolyBounds { max_poly_degree, max_rank: max_tensor_rank },
        &pool,
    )
}

fn pool_even(d: usize) -> Vec<PolyGen> {
    if d >= 2 {
        vec![PolyGen::X(0), PolyGen::Dx(0), PolyGen::Dx(1)]
    } else {
        vec![PolyGen::X(0), PolyGen::Dx(0)]
    }
}

/// Polynomials on `ℝ^d` graded by `|f| = 2k` with bracket `Σ ω^{ij} ∂_i f ∂_j g`,
/// `(a,b) = (0, 2m−4)`. The default `ω` is `x₁x₂ (∂₁∧∂₂)` for `m = 2` and
/// the constant `∂₁∧∂₂` for `m = 0`.
pub fn build_example2(d: usize, m: i64, omega: Option<PoissonTensor>, max_degree: i64) -> Result<AbAlgebra> {
    if d < 2 {
        return Err(Error::Usage("example2 needs d ≥ 2".into()));
    }
    let space = SuperSpace::new(d, 0)?;
    let t = match omega {
        Some(t) => t,
        None => example2_tensor(space, m)?,
    };
    let x = |i| SuperMonomial::x(space, i);
    let x1x2 = x(0).mul(&x(1)).expect("even").1;
    build_poisson_algebra("example2", &t, max_degree, None, &[x(0), x(1), x1x2])
}

/// Polyvector fields on `ℝ^{p|q}` with `wedge` and `schouten`, `(a,b) = (0,1)`.
pub fn build_example3(p: usize, q: usize, bounds: PolyBounds) -> Result<AbAlgebra> {
    let space = SuperSpace::new(p, q)?;
    let mut pool = Vec::new();
    if q > 0 {
        pool.push(PolyGen::Xi(0));
    }
    if p > 0 {
        pool.push(PolyGen::X(0));
        pool.push(PolyGen::Dx(0));
    }
    if pool.len() < 3 && q > 0 {
        pool.push(PolyGen::Dxi(0));
    }
    build_polyvector_algebra("example3", space, PolyGrading::TPOLY, (0, 1), bounds, &pool)
}

/// Superfunctions on `ℝ^{p|q}` with the Poisson bracket of `t`, `(a,b) = (0,m)`.
pub fn build_example4(t: &PoissonTensor, max_degree: i64) -> Result<AbAlgebra> {
    let space = t.space;
    let mut pool = Vec::new();
    if space.q > 0 {
        pool.push(SuperMonomial::xi(space, 0));
    }
    for i in 0..space.p.min(3 - pool.len()) {
        pool.push(SuperMonomial::x(space, i));
    }
    build_poisson_algebra("example4", t, max_degree, None, &pool)
}

/// `T_poly(ℝ^d)` graded by rank with the Schouten bracket, `(a,b) = (0,−1)`:
/// a Gerstenhaber algebra.
pub fn build_gerstenhaber_toy(d: usize, max_poly_degree: i64) -> Result<AbAlgebra> {
    let space = SuperSpace::new(d, 0)?;
    build_polyvector_algebra(
        "gerstenhaber-toy",
        space,
        PolyGrading::RANK,
        (0, -1),
        PolyBounds { max_poly_degree, max_rank: d as i64 },
        &pool_even(d),
    )
}

/// Superfunctions on `ℝ^{3|1}` with `ω^{23} = 1 = −ω^{32}` (`m = −4`) and the
/// differential `d = x₁ ∂ξ₁`.
pub fn build_koszul_poisson(max_degree: i64) -> Result<AbAlgebra> {
    let space = SuperSpace::new(3, 1)?;
    let t = PoissonTensor::constant_pair(space, -4, 1, 2, int(1));
    let d: VectorField = vec![(3, Element::basis(SuperMonomial::x(space, 0)))];
    let pool = [
        SuperMonomial::xi(space, 0),
        SuperMonomial::x(space, 1),
        SuperMonomial::x(space, 2),
    ];
    build_poisson_algebra("koszul-poisson", &t, max_degree, Some(&d), &pool)
}

/// A built instance together with what it was built from.
#[derive(Clone, Debug)]
pub struct Instance {
    pub algebra: AbAlgebra,
    /// The Poisson tensor, for instances defined by one.
    pub tensor: Option<PoissonTensor>,
    /// Effective parameters, defaults included.
    pub params: Vec<(String, String)>,
}

impl Instance {
    pub fn plain(algebra: AbAlgebra) -> Self {
        Instance { algebra, tensor: None, params: Vec::new() }
    }
}

fn example2_tensor(space: SuperSpace, m: i64) -> Result<PoissonTensor> {
    let mut coeff = SuperMonomial::one(space);
    match m {
        0 => {}
        2 => {
            coeff.even[0] = 1;
            coeff.even[1] = 1;
        }
        _ => {
            return Err(Error::Usage(
                "example2 has built-in ω only for m = 0 and m = 2; load a file otherwise".into(),
            ))
        }
    }
    let mut t = PoissonTensor::new(space, 2 * m - 4);
    t.set(0, 1, Element::basis(coeff.clone()));
    t.set(1, 0, Element::term(coeff, int(-1)));
    Ok(t)
}

/// Builds a named instance; `max_degree` overrides the default truncation
/// (coefficient degree for polyvector instances, total degree otherwise).
pub fn builtin(name: &str, params: &Params, max_degree: Option<i64>) -> Result<Instance> {
    let kv = |pairs: &[(&str, i64)]| pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<Vec<_>>();
    match name {
        "example1" => {
            params.check_known(name, &["d", "max-rank"])?;
            let (d, r, m) = (params.int_or("d", 2)?, params.int_or("max-rank", 2)?, max_degree.unwrap_or(3));
            let alg = build_example1(d as usize, m, r)?;
            Ok(Instance { algebra: alg, tensor: None, params: kv(&[("d", d), ("max-rank", r), ("max-degree", m)]) })
        }
        "example2" => {
            params.check_known(name, &["d", "m"])?;
            let (d, m, md) = (params.int_or("d", 2)?, params.int_or("m", 2)?, max_degree.unwrap_or(16));
            if d < 2 {
                return Err(Error::Usage("example2 needs d ≥ 2".into()));
            }
            let t = example2_tensor(SuperSpace::new(d as usize, 0)?, m)?;
            let alg = build_example2(d as usize, m, Some(t.clone()), md)?;
            Ok(Instance { algebra: alg, tensor: Some(t), params: kv(&[("d", d), ("m", m), ("max-degree", md)]) })
        }
        "example3" => {
            params.check_known(name, &["p", "q", "max-rank"])?;
            let (p, q) = (params.int_or("p", 1)?, params.int_or("q", 1)?);
            let bounds = PolyBounds {
                max_poly_degree: max_degree.unwrap_or(4),
                max_rank: params.int_or("max-rank", 2)?,
            };
            let alg = build_example3(p as usize, q as usize, bounds)?;
            let params = kv(&[("p", p), ("q", q), ("max-rank", bounds.max_rank), ("max-degree", bounds.max_poly_degree)]);
            Ok(Instance { algebra: alg, tensor: None, params })
        }
        "example4" => {
            params.check_known(name, &["p", "q", "m", "omega"])?;
            let (p, q, m) = (params.int_or("p", 2)?, params.int_or("q", 1)?, params.int_or("m", -4)?);
            let md = max_degree.unwrap_or(8);
            let space = SuperSpace::new(p as usize, q as usize)?;
            let t = match params.0.get("omega") {
                Some(text) => parse_constant_omega(space, m, text)?,
                None if space.p >= 2 => PoissonTensor::constant_pair(space, m, 0, 1, int(1)),
                None => return Err(Error::Usage("example4 default ω needs p ≥ 2".into())),
            };
            let alg = build_example4(&t, md)?;
            let mut ps = kv(&[("p", p), ("q", q), ("m", m), ("max-degree", md)]);
            ps.push(("omega".into(), params.0.get("omega").cloned().unwrap_or_else(|| "1,2:1;2,1:-1".into())));
            Ok(Instance { algebra: alg, tensor: Some(t), params: ps })
        }
        "gerstenhaber-toy" => {
            params.check_known(name, &["d"])?;
            let (d, md) = (params.int_or("d", 2)?, max_degree.unwrap_or(2));
            let alg = build_gerstenhaber_toy(d as usize, md)?;
            Ok(Instance { algebra: alg, tensor: None, params: kv(&[("d", d), ("max-degree", md)]) })
        }
        "koszul-poisson" => {
            params.check_known(name, &[])?;
            let md = max_degree.unwrap_or(8);
            let space = SuperSpace::new(3, 1)?;
            let t = PoissonTensor::constant_pair(space, -4, 1, 2, int(1));
            let alg = build_koszul_poisson(md)?;
            Ok(Instance { algebra: alg, tensor: Some(t), params: kv(&[("max-degree", md)]) })
        }
        _ => Err(Error::Usage(format!(
            "unknown builtin instance {name:?}; available: {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}
