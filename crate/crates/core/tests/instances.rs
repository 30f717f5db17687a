use std::collections::BTreeMap;

use proptest::prelude::*;
use smallvec::SmallVec;

use ab_homotopy::ab_core::check_ab_axioms;
use ab_homotopy::freemodule::{int, Element};
use ab_homotopy::instances::{
    apply_vector_field, as_function, builtin, check_poisson_tensor, partial, poisson_bracket, poly_mul, polyvector_basis, schouten, schouten_by_bullet,
    wedge, Params, PoissonTensor, PolyBounds, PolyGen, PolyGrading, PolyMonomial, PolyVector, SuperMonomial, SuperPoly,
    SuperSpace, BUILTIN_NAMES,
};
use ab_homotopy::outcome::Status;
use ab_homotopy::signs::sign_pow;

/// Every monomial of `space` with `|m| ≤ max_degree`.
fn monomials(space: SuperSpace, max_degree: i64) -> Vec<SuperMonomial> {
    let mut evens: Vec<SmallVec<[u8; 4]>> = vec![SmallVec::new()];
    for _ in 0..space.p {
        evens = evens
            .into_iter()
            .flat_map(|e| {
                (0..=(max_degree / 2) as u8).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for even in evens {
        for odd in 0..(1u32 << space.q) {
            let m = SuperMonomial { even: even.clone(), odd };
            if m.degree() <= max_degree {
                out.push(m);
            }
        }
    }
    out
}

fn poly_degree(f: &SuperPoly) -> i64 {
    f.iter().next().map(|(m, _)| m.degree()).unwrap_or(0)
}

#[test]
fn partial_derivatives_are_graded_derivations() {
    for (p, q) in [(2, 1), (1, 2), (2, 2)] {
        let space = SuperSpace::new(p, q).unwrap();
        let ms = monomials(space, 6);
        for f in &ms {
            for g in &ms {
                if f.degree() + g.degree() > 6 {
                    continue;
                }
                let (ef, eg) = (Element::basis(f.clone()), Element::basis(g.clone()));
                for i in 0..space.coordinates() {
                    let lhs = partial(space, i, &poly_mul(&ef, &eg));
                    let s = sign_pow(space.partial_degree(i) * f.degree());
                    let rhs = poly_mul(&partial(space, i, &ef), &eg)
                        .add(&poly_mul(&ef, &partial(space, i, &eg)).scale(&int(s.into())));
                    assert_eq!(lhs, rhs, "∂{i} on {f:?}·{g:?} in ℝ^{{{p}|{q}}}");
                }
            }
        }
    }
}

/// Vector fields `m ∂_i` for every monomial `m` with `|m| ≤ max_degree`.
fn vector_fields(space: SuperSpace, max_degree: i64) -> Vec<(i64, PolyVector)> {
    let mut out = Vec::new();
    for m in monomials(space, max_degree) {
        for i in 0..space.coordinates() {
            let d = if i < space.p { PolyGen::Dx(i) } else { PolyGen::Dxi(i - space.p) };
            let f = as_function(space, &Element::basis(m.clone()));
            let x = wedge(space, &f, &Element::basis(PolyMonomial::gen(space, d)));
            let deg = x.iter().next().unwrap().0.degree(PolyGrading::TPOLY);
            out.push((deg + 1, x));
        }
    }
    out
}

#[test]
fn schouten_matches_vector_field_commutators() {
    for (p, q) in [(1, 1), (2, 1), (1, 2)] {
        let space = SuperSpace::new(p, q).unwrap();
        let fields = vector_fields(space, 2);
        let functions: Vec<SuperPoly> = monomials(space, 3).into_iter().map(Element::basis).collect();
        let apply = |x: &PolyVector, f: &SuperPoly| apply_vector_field(space, x, f).unwrap();
        for (_, x) in &fields {
            for f in &functions {
                assert_eq!(schouten(space, x, &as_function(space, f)), as_function(space, &apply(x, f)));
            }
        }
        for (dx, x) in &fields {
            for (dy, y) in &fields {
                let bracket = schouten(space, x, y);
                for f in &functions {
                    let commutator = apply(x, &apply(y, f))
                        .sub(&apply(y, &apply(x, f)).scale(&int(sign_pow(dx * dy).into())));
                    assert_eq!(apply(&bracket, f), commutator, "[{x:?}, {y:?}] on {f:?} in ℝ^{{{p}|{q}}}");
                }
            }
        }
    }
}

fn valid_tensors() -> Vec<(&'static str, PoissonTensor)> {
    let params = Params::default();
    ["example2", "example4", "koszul-poisson"]
        .iter()
        .map(|&n| (n, builtin(n, &params, None).unwrap().tensor.unwrap()))
        .collect()
}

fn random_poly(space: SuperSpace, seed: (usize, Vec<(usize, i64)>)) -> SuperPoly {
    let ms = monomials(space, 6);
    let mut by_degree: BTreeMap<i64, Vec<&SuperMonomial>> = BTreeMap::new();
    for m in &ms {
        by_degree.entry(m.degree()).or_default().push(m);
    }
    let degrees: Vec<i64> = by_degree.keys().copied().collect();
    let bucket = &by_degree[&degrees[seed.0 % degrees.len()]];
    let mut f = Element::zero();
    for (k, c) in seed.1 {
        f.add_term(bucket[k % bucket.len()].clone(), int(c));
    }
    f
}

fn poly_seed() -> impl Strategy<Value = (usize, Vec<(usize, i64)>)> {
    (0usize..100, prop::collection::vec((0usize..100, prop::sample::select(vec![-2i64, -1, 1, 2])), 1..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_brackets_are_shifted_lie(a in poly_seed(), b in poly_seed(), c in poly_seed()) {
        for (name, t) in valid_tensors() {
            let space = t.space;
            let (f, g, h) = (random_poly(space, a.clone()), random_poly(space, b.clone()), random_poly(space, c.clone()));
            let m = t.m;
            let (df, dg, dh) = (poly_degree(&f) + m, poly_degree(&g) + m, poly_degree(&h) + m);
            let br = |u: &SuperPoly, v: &SuperPoly| poisson_bracket(&t, u, v);
            let anti = br(&f, &g).add(&br(&g, &f).scale(&int(sign_pow(df * dg).into())));
            prop_assert!(anti.is_zero(), "{} antisymmetry", name);
            let jac = br(&f, &br(&g, &h)).scale(&int(sign_pow(df * dh).into()))
                .add(&br(&g, &br(&h, &f)).scale(&int(sign_pow(dg * df).into())))
                .add(&br(&h, &br(&f, &g)).scale(&int(sign_pow(dh * dg).into())));
            prop_assert!(jac.is_zero(), "{} Jacobi", name);
        }
    }

    #[test]
    fn poisson_bracket_is_a_derivation(a in poly_seed(), b in poly_seed(), c in poly_seed()) {
        for (name, t) in valid_tensors() {
            let space = t.space;
            let (f, g, h) = (random_poly(space, a.clone()), random_poly(space, b.clone()), random_poly(space, c.clone()));
            let lhs = poisson_bracket(&t, &f, &poly_mul(&g, &h));
            let s = sign_pow(poly_degree(&g) * (poly_degree(&f) + t.m));
            let rhs = poly_mul(&poisson_bracket(&t, &f, &g), &h)
                .add(&poly_mul(&g, &poisson_bracket(&t, &f, &h)).scale(&int(s.into())));
            prop_assert_eq!(lhs, rhs, "{} Leibniz", name);
        }
    }

    #[test]
    fn schouten_on_one_even_two_odd(a in poly_seed(), b in poly_seed(), c in poly_seed()) {
        let space = SuperSpace::new(1, 2).unwrap();
        let basis = polyvector_basis(space, PolyBounds { max_poly_degree: 2, max_rank: 2 });
        let mut by_degree: BTreeMap<i64, Vec<PolyMonomial>> = BTreeMap::new();
        for m in basis {
            by_degree.entry(m.degree(PolyGrading::TPOLY)).or_default().push(m);
        }
        let degrees: Vec<i64> = by_degree.keys().copied().collect();
        let pick = |s: &(usize, Vec<(usize, i64)>)| -> (i64, PolyVector) {
            let d = degrees[s.0 % degrees.len()];
            let bucket = &by_degree[&d];
            let mut v = Element::zero();
            for &(k, c) in &s.1 {
                v.add_term(bucket[k % bucket.len()].clone(), int(c));
            }
            (d + 1, v)
        };
        let ((da, x), (db, y), (dc, z)) = (pick(&a), pick(&b), pick(&c));
        let br = |u: &PolyVector, v: &PolyVector| schouten(space, u, v);
        prop_assert_eq!(br(&x, &y), schouten_by_bullet(space, &x, &y));
        prop_assert!(br(&x, &y).add(&br(&y, &x).scale(&int(sign_pow(da * db).into()))).is_zero());
        let jac = br(&x, &br(&y, &z)).scale(&int(sign_pow(da * dc).into()))
            .add(&br(&y, &br(&z, &x)).scale(&int(sign_pow(db * da).into())))
            .add(&br(&z, &br(&x, &y)).scale(&int(sign_pow(dc * db).into())));
        prop_assert!(jac.is_zero());
        let lhs = br(&x, &wedge(space, &y, &z));
        let rhs = wedge(space, &br(&x, &y), &z)
            .add(&wedge(space, &y, &br(&x, &z)).scale(&int(sign_pow((db - 1) * da).into())));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn builtin_tensors_are_valid() {
    for (name, t) in valid_tensors() {
        let r = check_poisson_tensor(&t);
        assert!(r.valid(), "{name}: {:?}", r.violations);
    }
}

#[test]
fn builtins_satisfy_the_axioms_on_all_generators() {
    for name in BUILTIN_NAMES {
        let inst = builtin(name, &Params::default(), None).unwrap();
        let report = check_ab_axioms(&inst.algebra, None);
        for r in &report.results {
            assert_eq!(r.status, Status::Pass, "{name}: {} {:?}", r.axiom.id(), r.witness);
            assert!(r.checked > 0);
        }
    }
}

#[test]
fn example3_bracket_has_degree_one() {
    let inst = builtin("example3", &Params::default(), None).unwrap();
    let alg = &inst.algebra;
    let mut nonzero = 0;
    for x in 0..alg.len() as u32 {
        for y in 0..alg.len() as u32 {
            if let Ok(v) = alg.bracket(x, y) {
                for (&z, _) in &v {
                    assert_eq!(alg.degree(z), alg.degree(x) + alg.degree(y) + 1);
                    nonzero += 1;
                }
            }
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn example1_bracket_has_degree_minus_three() {
    let inst = builtin("example1", &Params::default(), None).unwrap();
    let alg = &inst.algebra;
    let mut nonzero = 0;
    for x in 0..alg.len() as u32 {
        for y in 0..alg.len() as u32 {
            if let Ok(v) = alg.bracket(x, y) {
                for (&z, _) in &v {
                    assert_eq!(alg.degree(z), alg.degree(x) + alg.degree(y) - 3);
                    nonzero += 1;
                }
            }
        }
    }
    assert!(nonzero > 0);
}
