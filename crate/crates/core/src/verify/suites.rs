//! The identity ladder, from shuffle laws on `H` up to the cobracket `δ″` on
//! `S⁺(H[a−b])`. Every identity is evaluated on all inputs generated from
//! the algebra's letter pool within the configured bounds.

use std::time::Instant;

use rayon::prelude::*;

use crate::ab_core::{big_d, big_d_elements, bilinear_words, ell2, ell2_doubleprime, ell2_prime, AbAlgebra};
use crate::error::Result;
use crate::freemodule::{int, Element};
use crate::outcome::Outcome;
use crate::signs::sign_pow;
use crate::sym_coalgebra::{
    coproduct_delta, coproduct_elements, enumerate_sym_words, extend_ell_doubleprime, extend_m, on_elements, q,
    q_by_partitions, sym_normal_form, sym_tensor_normal_form, SymGrading, SymWord,
};
use crate::tensor_coalgebra::{
    apply_at, as_tensor, cobracket_delta, cobracket_elements, permute_factors, shuffle, shuffle_elements, swap,
    Tensor, TensorWord,
};

use super::oracles;
use super::report::Record;

/// Input bounds shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Longest tensor word `L`.
    pub max_word_len: usize,
    /// Most factors `N` in a symmetric word.
    pub max_sym_factors: usize,
    /// Most letters in a symmetric word, over all factors.
    pub max_letters: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_word_len: 3, max_sym_factors: 2, max_letters: 4 }
    }
}

/// Which part of the ladder to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    Shuffle,
    Cobracket,
    Coderivation,
    Bracket,
    BracketPrime,
    BracketDoublePrime,
    Coproduct,
    Codifferential,
    CobracketDoublePrime,
    Specialization,
}

impl Group {
    pub const ALL: [Group; 10] = [
        Group::Shuffle,
        Group::Cobracket,
        Group::Coderivation,
        Group::Bracket,
        Group::BracketPrime,
        Group::BracketDoublePrime,
        Group::Coproduct,
        Group::Codifferential,
        Group::CobracketDoublePrime,
        Group::Specialization,
    ];

    /// The groups that involve the structure constants: differential,
    /// product and bracket extensions and everything built on them.
    pub const STRUCTURAL: [Group; 6] = [
        Group::Coderivation,
        Group::Bracket,
        Group::BracketPrime,
        Group::BracketDoublePrime,
        Group::Codifferential,
        Group::CobracketDoublePrime,
    ];
}

type Check = Option<(String, String)>;

/// Evaluates one identity on every input, in parallel, and folds the
/// outcomes in input order.
fn run<I, S, F>(id: &str, locus: &str, inputs: &[I], show: S, f: F, timings: bool) -> Record
where
    I: Sync,
    S: Fn(&I) -> String + Sync,
    F: Fn(&I) -> Result<Check> + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<Outcome> = inputs
        .par_iter()
        .map(|i| Outcome::from_result(|| show(i), f(i)))
        .collect();
    let mut r = Record::from_outcomes(id, locus, outcomes);
    if timings {
        r.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn differ<B: Ord>(lhs: &Element<B>, rhs: &Element<B>, render: impl Fn(&Element<B>) -> String) -> Check {
    (lhs != rhs).then(|| (render(lhs), render(rhs)))
}

/// Runs the ladder on `alg` and returns one record per identity.
pub struct Ladder<'a> {
    alg: &'a AbAlgebra,
    bounds: Bounds,
    timings: bool,
    words: Vec<TensorWord>,
}

impl<'a> Ladder<'a> {
    pub fn new(alg: &'a AbAlgebra, bounds: Bounds, timings: bool) -> Self {
        let top = bounds.max_word_len.max(bounds.max_letters).max(4);
        let mut words = Vec::new();
        for len in 1..=top {
            for t in crate::ab_core::tuples(alg.pool(), len) {
                words.push(TensorWord::new(&t).expect("nonempty"));
            }
        }
        Ladder { alg, bounds, timings, words }
    }

    fn words_upto(&self, n: usize) -> Vec<TensorWord> {
        self.words.iter().filter(|w| w.len() <= n).cloned().collect()
    }

    fn pairs_total(&self, total: usize) -> Vec<(TensorWord, TensorWord)> {
        let ws = self.words_upto(total.saturating_sub(1));
        let mut out = Vec::new();
        for x in &ws {
            for y in &ws {
                if x.len() + y.len() <= total {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
        out
    }

    fn pairs_each(&self, each: usize) -> Vec<(TensorWord, TensorWord)> {
        let ws = self.words_upto(each);
        ws.iter().flat_map(|x| ws.iter().map(move |y| (x.clone(), y.clone()))).collect()
    }

    fn triples_each(&self, each: usize) -> Vec<(TensorWord, TensorWord, TensorWord)> {
        let ws = self.words_upto(each);
        let mut out = Vec::new();
        for x in &ws {
            for y in &ws {
                for z in &ws {
                    out.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
        out
    }

    fn sym_words(&self) -> Vec<SymWord> {
        let g = SymGrading::of(self.alg);
        enumerate_sym_words(
            &g,
            self.alg.pool(),
            self.bounds.max_word_len,
            self.bounds.max_sym_factors,
            self.bounds.max_letters,
        )
    }

    // rendering

    fn w(&self, x: &TensorWord) -> String {
        self.alg.render_word(x)
    }

    fn ws(&self, x: &Element<TensorWord>) -> String {
        self.alg.render_words(x)
    }

    fn tensor(&self, x: &Element<Tensor<TensorWord>>) -> String {
        x.render(|t| {
            t.factors()
                .iter()
                .map(|w| format!("({})", self.w(w)))
                .collect::<Vec<_>>()
                .join(" ⨂ ")
        })
    }

    fn sw(&self, s: &SymWord) -> String {
        s.render(&|w| self.w(w))
    }

    fn sym(&self, x: &Element<SymWord>) -> String {
        x.render(|s| self.sw(s))
    }

    fn sym_tensor(&self, x: &Element<Tensor<SymWord>>) -> String {
        x.render(|t| {
            t.factors()
                .iter()
                .map(|s| format!("[{}]", self.sw(s)))
                .collect::<Vec<_>>()
                .join(" ⨂ ")
        })
    }

    // comparisons

    fn in_h(&self, lhs: &Element<TensorWord>, rhs: &Element<TensorWord>) -> Check {
        let h = self.alg.quotient();
        differ(&h.normal_form(lhs), &h.normal_form(rhs), |e| self.ws(e))
    }

    fn in_hh(&self, lhs: &Element<Tensor<TensorWord>>, rhs: &Element<Tensor<TensorWord>>) -> Check {
        let h = self.alg.quotient();
        differ(&h.tensor_normal_form(lhs), &h.tensor_normal_form(rhs), |e| self.tensor(e))
    }

    fn in_s(&self, lhs: &Element<SymWord>, rhs: &Element<SymWord>) -> Check {
        let g = SymGrading::of(self.alg);
        let h = self.alg.quotient();
        differ(&sym_normal_form(h, &g, lhs), &sym_normal_form(h, &g, rhs), |e| self.sym(e))
    }

    fn in_ss(&self, lhs: &Element<Tensor<SymWord>>, rhs: &Element<Tensor<SymWord>>) -> Check {
        let g = SymGrading::of(self.alg);
        let h = self.alg.quotient();
        differ(&sym_tensor_normal_form(h, &g, lhs), &sym_tensor_normal_form(h, &g, rhs), |e| self.sym_tensor(e))
    }

    fn record<I, S, F>(&self, id: &str, locus: &str, inputs: &[I], show: S, f: F) -> Record
    where
        I: Sync,
        S: Fn(&I) -> String + Sync,
        F: Fn(&I) -> Result<Check> + Sync,
    {
        run(id, locus, inputs, show, f, self.timings)
    }

    /// All applicable identities of the selected groups, in ladder order.
    pub fn run_groups(&self, groups: &[Group]) -> Vec<Record> {
        let mut out = Vec::new();
        for g in Group::ALL {
            if groups.contains(&g) {
                out.extend(self.group(g));
            }
        }
        out
    }

    /// Runs the selected groups in order and stops at the first failing
    /// record, which is returned last.
    pub fn first_failure(&self, groups: &[Group]) -> (Vec<Record>, bool) {
        let mut out = Vec::new();
        for g in Group::ALL {
            if !groups.contains(&g) {
                continue;
            }
            for r in self.group_lazy(g) {
                let rec = r();
                let failed = rec.status == crate::outcome::Status::Fail;
                out.push(rec);
                if failed {
                    return (out, true);
                }
            }
        }
        (out, false)
    }

    pub fn group(&self, g: Group) -> Vec<Record> {
        self.group_lazy(g).into_iter().map(|f| f()).collect()
    }

    fn group_lazy(&self, g: Group) -> Vec<Box<dyn Fn() -> Record + '_>> {
        match g {
            Group::Shuffle => vec![
                Box::new(|| self.shuffle_commutativity()),
                Box::new(|| self.shuffle_associativity()),
            ],
            Group::Cobracket => vec![
                Box::new(|| self.cobracket_coantisymmetry()),
                Box::new(|| self.cobracket_cojacobi()),
            ],
            Group::Coderivation => vec![
                Box::new(|| self.coderivation_square()),
                Box::new(|| self.coderivation_well_defined()),
                Box::new(|| self.coderivation_law()),
            ],
            Group::Bracket => vec![
                Box::new(|| self.ell2_well_defined()),
                Box::new(|| self.ell2_compatibility()),
            ],
            Group::BracketPrime => vec![
                Box::new(|| self.ell2_prime_antisymmetry()),
                Box::new(|| self.ell2_prime_jacobi()),
                Box::new(|| self.ell2_prime_leibniz()),
            ],
            Group::BracketDoublePrime => vec![
                Box::new(|| self.ell2_dp_symmetry()),
                Box::new(|| self.ell2_dp_jacobi()),
                Box::new(|| self.ell2_dp_differential()),
            ],
            Group::Coproduct => vec![
                Box::new(|| self.coproduct_cocommutativity()),
                Box::new(|| self.coproduct_coassociativity()),
            ],
            Group::Codifferential => vec![
                Box::new(|| self.q_partitions()),
                Box::new(|| self.q_square()),
                Box::new(|| self.q_coderivation()),
            ],
            Group::CobracketDoublePrime => vec![
                Box::new(|| self.dp_coantisymmetry()),
                Box::new(|| self.dp_cojacobi()),
                Box::new(|| self.dp_coleibniz()),
                Box::new(|| self.dp_coderivation("cobracket-dp-m-coderivation", "m is a twisted coderivation of δ″", false)),
                Box::new(|| self.dp_coderivation("cobracket-dp-ell-coderivation", "ℓ″ is a twisted coderivation of δ″", true)),
            ],
            Group::Specialization => {
                let (a, b) = (self.alg.a, self.alg.b);
                let mut v: Vec<Box<dyn Fn() -> Record + '_>> = Vec::new();
                if (a, b) == (0, -1) {
                    v.push(Box::new(|| self.specialization_gerstenhaber_bracket()));
                    v.push(Box::new(|| self.specialization_kappa()));
                }
                if (a, b) == (0, 0) {
                    v.push(Box::new(|| self.specialization_poisson_bracket()));
                    v.push(Box::new(|| self.specialization_poisson_cobracket()));
                }
                v
            }
        }
    }

    fn deg(&self) -> impl Fn(&TensorWord) -> i64 + Copy + '_ {
        let alg = self.alg;
        move |w| alg.word_dg(w)
    }

    // shuffle products

    fn shuffle_commutativity(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.pairs_total(self.bounds.max_word_len + 1);
        self.record(
            "shuffle-commutativity",
            "shuffle product: graded commutativity",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let lhs = shuffle(degrees, x, y);
                let s = sign_pow(degrees.word(x) * degrees.word(y));
                let rhs = shuffle(degrees, y, x).scale(&int(s.into()));
                Ok(differ(&lhs, &rhs, |e| self.ws(e)))
            },
        )
    }

    fn shuffle_associativity(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let total = self.bounds.max_word_len + 1;
        let ws = self.words_upto(total.saturating_sub(2));
        let mut inputs = Vec::new();
        for x in &ws {
            for y in &ws {
                for z in &ws {
                    if x.len() + y.len() + z.len() <= total {
                        inputs.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
        self.record(
            "shuffle-associativity",
            "shuffle product: associativity",
            &inputs,
            |(x, y, z)| format!("{} , {} , {}", self.w(x), self.w(y), self.w(z)),
            |(x, y, z)| {
                let lhs = shuffle_elements(degrees, &shuffle(degrees, x, y), &Element::basis(z.clone()));
                let rhs = shuffle_elements(degrees, &Element::basis(x.clone()), &shuffle(degrees, y, z));
                Ok(differ(&lhs, &rhs, |e| self.ws(e)))
            },
        )
    }

    // cobracket δ on H

    fn cobracket_coantisymmetry(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.words_upto(self.bounds.max_word_len + 1);
        self.record(
            "cobracket-coantisymmetry",
            "cobracket δ: τ∘δ = −δ",
            &inputs,
            |x| self.w(x),
            |x| {
                let d = cobracket_delta(degrees, x);
                let lhs = permute_factors(&d, &swap(2, 0), self.deg());
                Ok(self.in_hh(&lhs, &d.neg()))
            },
        )
    }

    fn cobracket_cojacobi(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.words_upto(self.bounds.max_word_len + 1);
        self.record(
            "cobracket-cojacobi",
            "cobracket δ: coJacobi",
            &inputs,
            |x| self.w(x),
            |x| {
                let d = cobracket_delta(degrees, x);
                let t = apply_at(&d, 0, 1, 0, self.deg(), |ws| Ok(cobracket_delta(degrees, &ws[0])))?;
                let lhs = cyclic_sum(&t, self.deg());
                Ok(self.in_hh(&lhs, &Element::zero()))
            },
        )
    }

    // the coderivation D = d₁ + μ₁

    fn coderivation_square(&self) -> Record {
        let inputs = self.words_upto(self.bounds.max_word_len);
        self.record(
            "coderivation-square",
            "D∘D = 0 on words (no quotient)",
            &inputs,
            |x| self.w(x),
            |x| {
                let dd = big_d_elements(self.alg, &big_d(self.alg, x)?)?;
                Ok(differ(&dd, &Element::zero(), |e| self.ws(e)))
            },
        )
    }

    fn coderivation_well_defined(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.pairs_total(self.bounds.max_word_len);
        self.record(
            "coderivation-well-defined",
            "D maps shuffle products into shuffle products",
            &inputs,
            |(x, y)| format!("shuffle({} , {})", self.w(x), self.w(y)),
            |(x, y)| {
                let image = big_d_elements(self.alg, &shuffle(degrees, x, y))?;
                Ok(self.in_h(&image, &Element::zero()))
            },
        )
    }

    fn coderivation_law(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.words_upto(self.bounds.max_word_len);
        self.record(
            "coderivation-law",
            "(D⊗id + id⊗D)∘δ = δ∘D",
            &inputs,
            |x| self.w(x),
            |x| {
                let d = cobracket_delta(degrees, x);
                let dm = |ws: &[TensorWord]| Ok(as_tensor(&big_d(self.alg, &ws[0])?));
                let lhs = apply_at(&d, 0, 1, 1, self.deg(), dm)?.add(&apply_at(&d, 1, 1, 1, self.deg(), dm)?);
                let rhs = cobracket_elements(degrees, &big_d(self.alg, x)?);
                Ok(self.in_hh(&lhs, &rhs))
            },
        )
    }

    // the bracket ℓ₂ on H

    fn ell2_el(&self, x: &Element<TensorWord>, y: &Element<TensorWord>) -> Result<Element<TensorWord>> {
        bilinear_words(|u, v| ell2(self.alg, u, v), x, y)
    }

    fn ell2_well_defined(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let l = self.bounds.max_word_len;
        let shuffles = self.pairs_total(l.min(3));
        let others = self.words_upto(l.min(2));
        let inputs: Vec<_> = shuffles
            .iter()
            .flat_map(|(x, y)| others.iter().map(move |z| (x.clone(), y.clone(), z.clone())))
            .collect();
        self.record(
            "ell2-well-defined",
            "ℓ₂ vanishes on shuffle products in either argument",
            &inputs,
            |(x, y, z)| format!("shuffle({} , {}) , {}", self.w(x), self.w(y), self.w(z)),
            |(x, y, z)| {
                let s = shuffle(degrees, x, y);
                let zz = Element::basis(z.clone());
                if let Some(c) = self.in_h(&self.ell2_el(&s, &zz)?, &Element::zero()) {
                    return Ok(Some(c));
                }
                Ok(self.in_h(&self.ell2_el(&zz, &s)?, &Element::zero()))
            },
        )
    }

    fn ell2_compatibility(&self) -> Record {
        let degrees = self.alg.quotient().degrees();
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        let deg_l = self.alg.b - self.alg.a + 1;
        self.record(
            "ell2-compatibility",
            "δ∘ℓ₂ = (ℓ₂⊗id)∘(τ₂₃∘(δ⊗id) + id⊗δ) + (id⊗ℓ₂)∘(δ⊗id + τ₁₂∘(id⊗δ))",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let t = Element::basis(Tensor::pair(x.clone(), y.clone()));
                let delta = |ws: &[TensorWord]| Ok(cobracket_delta(degrees, &ws[0]));
                let l2 = |ws: &[TensorWord]| Ok(as_tensor(&ell2(self.alg, &ws[0], &ws[1])?));
                let d_id = apply_at(&t, 0, 1, 0, self.deg(), delta)?;
                let id_d = apply_at(&t, 1, 1, 0, self.deg(), delta)?;
                let left_in = permute_factors(&d_id, &swap(3, 1), self.deg()).add(&id_d);
                let right_in = d_id.add(&permute_factors(&id_d, &swap(3, 0), self.deg()));
                let rhs = apply_at(&left_in, 0, 2, deg_l, self.deg(), l2)?
                    .add(&apply_at(&right_in, 1, 2, deg_l, self.deg(), l2)?);
                let lhs = cobracket_elements(degrees, &ell2(self.alg, x, y)?);
                Ok(self.in_hh(&lhs, &rhs))
            },
        )
    }

    // ℓ′₂ on H[a−b−1]

    fn xp(&self, x: &TensorWord) -> i64 {
        self.alg.word_dg_prime(x)
    }

    fn xpp(&self, x: &TensorWord) -> i64 {
        self.alg.word_dg_doubleprime(x)
    }

    fn lp(&self, x: &Element<TensorWord>, y: &Element<TensorWord>) -> Result<Element<TensorWord>> {
        bilinear_words(|u, v| ell2_prime(self.alg, u, v), x, y)
    }

    fn lpp(&self, x: &Element<TensorWord>, y: &Element<TensorWord>) -> Result<Element<TensorWord>> {
        bilinear_words(|u, v| ell2_doubleprime(self.alg, u, v), x, y)
    }

    fn ell2_prime_antisymmetry(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-prime-antisymmetry",
            "ℓ′₂(X,Y) = −(−1)^{x′y′} ℓ′₂(Y,X)",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let lhs = ell2_prime(self.alg, x, y)?;
                let s = -sign_pow(self.xp(x) * self.xp(y));
                let rhs = ell2_prime(self.alg, y, x)?.scale(&int(s.into()));
                Ok(self.in_h(&lhs, &rhs))
            },
        )
    }

    fn jacobi(
        &self,
        x: &TensorWord,
        y: &TensorWord,
        z: &TensorWord,
        deg: impl Fn(&TensorWord) -> i64,
        br: impl Fn(&Element<TensorWord>, &Element<TensorWord>) -> Result<Element<TensorWord>>,
    ) -> Result<Check> {
        let e = |w: &TensorWord| Element::basis(w.clone());
        let (dx, dy, dz) = (deg(x), deg(y), deg(z));
        let mut sum = Element::zero();
        for (p, q, r, s) in [(x, y, z, dx * dz), (y, z, x, dy * dx), (z, x, y, dz * dy)] {
            let inner = br(&e(p), &e(q))?;
            sum.add_assign_signed(&br(&inner, &e(r))?, sign_pow(s));
        }
        Ok(self.in_h(&sum, &Element::zero()))
    }

    fn ell2_prime_jacobi(&self) -> Record {
        let inputs = self.triples_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-prime-jacobi",
            "graded Jacobi identity for ℓ′₂",
            &inputs,
            |(x, y, z)| format!("{} , {} , {}", self.w(x), self.w(y), self.w(z)),
            |(x, y, z)| self.jacobi(x, y, z, |w| self.xp(w), |u, v| self.lp(u, v)),
        )
    }

    fn ell2_prime_leibniz(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-prime-leibniz",
            "D(ℓ′₂(X,Y)) = ℓ′₂(D X,Y) + (−1)^{x′} ℓ′₂(X,D Y)",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let (ex, ey) = (Element::basis(x.clone()), Element::basis(y.clone()));
                let lhs = big_d_elements(self.alg, &ell2_prime(self.alg, x, y)?)?;
                let rhs = self.lp(&big_d(self.alg, x)?, &ey)?.add(
                    &self.lp(&ex, &big_d(self.alg, y)?)?.scale(&int(sign_pow(self.xp(x)).into())),
                );
                Ok(self.in_h(&lhs, &rhs))
            },
        )
    }

    // ℓ″₂ on H[a−b]

    fn ell2_dp_symmetry(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-dp-symmetry",
            "ℓ″₂(X,Y) = (−1)^{x″y″} ℓ″₂(Y,X)",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let lhs = ell2_doubleprime(self.alg, x, y)?;
                let s = sign_pow(self.xpp(x) * self.xpp(y));
                let rhs = ell2_doubleprime(self.alg, y, x)?.scale(&int(s.into()));
                Ok(self.in_h(&lhs, &rhs))
            },
        )
    }

    fn ell2_dp_jacobi(&self) -> Record {
        let inputs = self.triples_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-dp-jacobi",
            "graded Jacobi identity for ℓ″₂",
            &inputs,
            |(x, y, z)| format!("{} , {} , {}", self.w(x), self.w(y), self.w(z)),
            |(x, y, z)| self.jacobi(x, y, z, |w| self.xpp(w), |u, v| self.lpp(u, v)),
        )
    }

    fn ell2_dp_differential(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "ell2-dp-differential",
            "D(ℓ″₂(X,Y)) = −ℓ″₂(D X,Y) + (−1)^{1+x″} ℓ″₂(X,D Y)",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| {
                let (ex, ey) = (Element::basis(x.clone()), Element::basis(y.clone()));
                let lhs = big_d_elements(self.alg, &ell2_doubleprime(self.alg, x, y)?)?;
                let rhs = self.lpp(&big_d(self.alg, x)?, &ey)?.neg().add(
                    &self.lpp(&ex, &big_d(self.alg, y)?)?.scale(&int(sign_pow(1 + self.xpp(x)).into())),
                );
                Ok(self.in_h(&lhs, &rhs))
            },
        )
    }

    // S⁺(H[a−b])

    fn sdeg(&self) -> impl Fn(&SymWord) -> i64 + Copy + '_ {
        let g = SymGrading::of(self.alg);
        move |s| g.word(s)
    }

    fn coproduct_cocommutativity(&self) -> Record {
        let g = SymGrading::of(self.alg);
        let inputs = self.sym_words();
        self.record(
            "coproduct-cocommutativity",
            "τ″∘Δ = Δ",
            &inputs,
            |w| self.sw(w),
            |w| {
                let d = coproduct_delta(&g, w);
                Ok(self.in_ss(&permute_factors(&d, &swap(2, 0), self.sdeg()), &d))
            },
        )
    }

    fn coproduct_coassociativity(&self) -> Record {
        let g = SymGrading::of(self.alg);
        let inputs = self.sym_words();
        let dl = |ws: &[SymWord]| Ok(coproduct_delta(&g, &ws[0]));
        self.record(
            "coproduct-coassociativity",
            "(Δ⊗id)∘Δ = (id⊗Δ)∘Δ",
            &inputs,
            |w| self.sw(w),
            |w| {
                let d = coproduct_delta(&g, w);
                let lhs = apply_at(&d, 0, 1, 0, self.sdeg(), dl)?;
                let rhs = apply_at(&d, 1, 1, 0, self.sdeg(), dl)?;
                Ok(self.in_ss(&lhs, &rhs))
            },
        )
    }

    fn q_partitions(&self) -> Record {
        let inputs: Vec<SymWord> = self.sym_words().into_iter().filter(|w| w.len() <= 3).collect();
        self.record(
            "q-partitions",
            "m + ℓ″ agrees with the partition formula for Q",
            &inputs,
            |w| self.sw(w),
            |w| Ok(self.in_s(&q(self.alg, w)?, &q_by_partitions(self.alg, w)?)),
        )
    }

    fn q_square(&self) -> Record {
        let inputs = self.sym_words();
        self.record(
            "q-square",
            "Q∘Q = 0",
            &inputs,
            |w| self.sw(w),
            |w| {
                let qq = on_elements(&q(self.alg, w)?, |u| q(self.alg, u))?;
                Ok(self.in_s(&qq, &Element::zero()))
            },
        )
    }

    fn q_coderivation(&self) -> Record {
        let g = SymGrading::of(self.alg);
        let inputs = self.sym_words();
        self.record(
            "q-coderivation",
            "(Q⊗id + id⊗Q)∘Δ = Δ∘Q",
            &inputs,
            |w| self.sw(w),
            |w| {
                let d = coproduct_delta(&g, w);
                let lhs = self.apply_sym(&d, 0, 1, |u| q(self.alg, u))?.add(&self.apply_sym(&d, 1, 1, |u| q(self.alg, u))?);
                let rhs = coproduct_elements(&g, &q(self.alg, w)?);
                Ok(self.in_ss(&lhs, &rhs))
            },
        )
    }

    /// `id^{⊗slot} ⊗ f ⊗ id…` for a map `f` of symmetric words of degree `deg_f`.
    fn apply_sym(
        &self,
        x: &Element<Tensor<SymWord>>,
        slot: usize,
        deg_f: i64,
        f: impl Fn(&SymWord) -> Result<Element<SymWord>>,
    ) -> Result<Element<Tensor<SymWord>>> {
        apply_at(x, slot, 1, deg_f, self.sdeg(), |ws| {
            Ok(f(&ws[0])?.iter().map(|(s, c)| (Tensor::single(s.clone()), c.clone())).collect())
        })
    }

    fn dp(&self, w: &SymWord) -> Element<Tensor<SymWord>> {
        crate::sym_coalgebra::cobracket_delta_doubleprime(&SymGrading::of(self.alg), w)
    }

    fn dp_coantisymmetry(&self) -> Record {
        let inputs = self.sym_words();
        let ab = self.alg.a - self.alg.b;
        self.record(
            "cobracket-dp-coantisymmetry",
            "τ″∘δ″ = −(−1)^{a−b} δ″",
            &inputs,
            |w| self.sw(w),
            |w| {
                let d = self.dp(w);
                let lhs = permute_factors(&d, &swap(2, 0), self.sdeg());
                Ok(self.in_ss(&lhs, &d.scale(&int((-sign_pow(ab)).into()))))
            },
        )
    }

    fn dp_cojacobi(&self) -> Record {
        let inputs = self.sym_words();
        self.record(
            "cobracket-dp-cojacobi",
            "δ″: coJacobi",
            &inputs,
            |w| self.sw(w),
            |w| {
                let t = apply_at(&self.dp(w), 0, 1, 0, self.sdeg(), |ws| Ok(self.dp(&ws[0])))?;
                Ok(self.in_ss(&cyclic_sum(&t, self.sdeg()), &Element::zero()))
            },
        )
    }

    fn dp_coleibniz(&self) -> Record {
        let g = SymGrading::of(self.alg);
        let inputs = self.sym_words();
        let ab = self.alg.a - self.alg.b;
        self.record(
            "cobracket-dp-coleibniz",
            "(id⊗Δ)∘δ″ = (δ″⊗id)∘Δ + τ″₁₂∘(id⊗δ″)∘Δ",
            &inputs,
            |w| self.sw(w),
            |w| {
                let cop = |ws: &[SymWord]| Ok(coproduct_delta(&g, &ws[0]));
                let dpm = |ws: &[SymWord]| Ok(self.dp(&ws[0]));
                let lhs = apply_at(&self.dp(w), 1, 1, 0, self.sdeg(), cop)?;
                let d = coproduct_delta(&g, w);
                let first = apply_at(&d, 0, 1, ab, self.sdeg(), dpm)?;
                let second = permute_factors(&apply_at(&d, 1, 1, ab, self.sdeg(), dpm)?, &swap(3, 0), self.sdeg());
                Ok(self.in_ss(&lhs, &first.add(&second)))
            },
        )
    }

    fn dp_coderivation(&self, id: &str, locus: &str, bracket: bool) -> Record {
        let inputs = self.sym_words();
        let ab = self.alg.a - self.alg.b;
        let op = |u: &SymWord| if bracket { extend_ell_doubleprime(self.alg, u) } else { extend_m(self.alg, u) };
        self.record(
            id,
            locus,
            &inputs,
            |w| self.sw(w),
            |w| {
                let d = self.dp(w);
                let lhs = self.apply_sym(&d, 0, 1, op)?.add(&self.apply_sym(&d, 1, 1, op)?);
                let mut r = Element::zero();
                for (u, c) in &op(w)? {
                    r.add_assign_scaled(&self.dp(u), c);
                }
                Ok(self.in_ss(&lhs, &r.scale(&int(sign_pow(ab).into()))))
            },
        )
    }

    // specializations

    fn specialization_gerstenhaber_bracket(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "specialization-gerstenhaber-bracket",
            "at (a,b) = (0,−1), ℓ₂ is the induced bracket of the Gerstenhaber complex",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| Ok(self.in_h(&ell2(self.alg, x, y)?, &oracles::gerstenhaber_bracket(self.alg, x, y)?)),
        )
    }

    fn specialization_poisson_bracket(&self) -> Record {
        let inputs = self.pairs_each(self.bounds.max_word_len.min(2));
        self.record(
            "specialization-poisson-bracket",
            "at (a,b) = (0,0), ℓ′₂ is the bracket {X,Y} of the Poisson complex",
            &inputs,
            |(x, y)| format!("{} , {}", self.w(x), self.w(y)),
            |(x, y)| Ok(self.in_h(&ell2_prime(self.alg, x, y)?, &oracles::poisson_bracket_h(self.alg, x, y)?)),
        )
    }

    fn small_sym_words(&self) -> Vec<SymWord> {
        let g = SymGrading::of(self.alg);
        let l = self.bounds.max_word_len.min(2);
        enumerate_sym_words(&g, self.alg.pool(), l, 2, 2 * l)
    }

    fn specialization_kappa(&self) -> Record {
        let inputs = self.small_sym_words();
        self.record(
            "specialization-kappa",
            "at (a,b) = (0,−1), δ″ is the cobracket κ of the Gerstenhaber envelope",
            &inputs,
            |w| self.sw(w),
            |w| Ok(self.in_ss(&self.dp(w), &oracles::kappa(self.alg, w))),
        )
    }

    fn specialization_poisson_cobracket(&self) -> Record {
        let inputs = self.small_sym_words();
        self.record(
            "specialization-poisson-cobracket",
            "at (a,b) = (0,0), δ″ is the cobracket of the Poisson envelope",
            &inputs,
            |w| self.sw(w),
            |w| Ok(self.in_ss(&self.dp(w), &oracles::poisson_cobracket(self.alg, w))),
        )
    }
}

/// `(id + τ₁₂∘τ₂₃ + τ₂₃∘τ₁₂)(t)` on triple tensors; the right factor of each
/// composite acts first.
pub fn cyclic_sum<T, D>(t: &Element<Tensor<T>>, deg: D) -> Element<Tensor<T>>
where
    T: Ord + Clone,
    D: Fn(&T) -> i64 + Copy,
{
    let (t12, t23) = (swap(3, 0), swap(3, 1));
    let a = permute_factors(&permute_factors(t, &t23, deg), &t12, deg);
    let b = permute_factors(&permute_factors(t, &t12, deg), &t23, deg);
    t.add(&a).add(&b)
}
