//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails or runs over its time limit.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ab_homotopy::freemodule::{int, Element};
use ab_homotopy::instances::{
    builtin, check_poisson_tensor, polyvector_basis, schouten, schouten_by_bullet, wedge, Instance, Params,
    PoissonTensor, PolyBounds, PolyGrading, PolyMonomial, PolyVector, SuperMonomial, SuperSpace, TensorCondition,
};
use ab_homotopy::outcome::Status;
use ab_homotopy::signs::{koszul_sign, koszul_sign_by_transpositions, sign_pow, Degree, Permutation};
use ab_homotopy::tensor_coalgebra::{
    apply_at, cobracket_delta, permute_factors, shuffle, shuffle_elements, swap, LetterDegrees, ShuffleQuotient,
    TensorWord,
};
use ab_homotopy::verify::suites::cyclic_sum;
use ab_homotopy::verify::{mutation, Bounds, Group, Ladder, Record, SuiteConfig};

type Verdict = Result<String, String>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn c1_sign_oracle() -> Verdict {
    let mut checked = 0;
    for n in 1..=5 {
        for images in permutations(n) {
            let sigma = Permutation::from_images(images).unwrap();
            for mask in 0u32..(1 << n) {
                let degrees: Vec<Degree> = (0..n).map(|i| Degree(((mask >> i) & 1) as i64)).collect();
                let a = koszul_sign(&degrees, &sigma).unwrap();
                let b = koszul_sign_by_transpositions(&degrees, &sigma).unwrap();
                if a != b {
                    return Err(format!("σ = {:?}, degrees {:?}: {a} vs {b}", sigma.images(), degrees));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (σ, parity) pairs"))
}

/// All degree assignments in `{0,1,2}^n`.
fn assignments(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..3).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

fn run_of(start: usize, len: usize) -> TensorWord {
    let letters: Vec<u32> = (start as u32..(start + len) as u32).collect();
    TensorWord::new(&letters).unwrap()
}

fn c2_shuffle_laws() -> Verdict {
    let mut checked = 0;
    for n in 2..=5 {
        for degs in assignments(n) {
            let d = LetterDegrees(degs.clone());
            for p in 1..n {
                let (x, y) = (run_of(0, p), run_of(p, n - p));
                let s = sign_pow(d.word(&x) * d.word(&y));
                let rhs = shuffle(&d, &y, &x).scale(&int(s.into()));
                if shuffle(&d, &x, &y) != rhs {
                    return Err(format!("commutativity, degrees {degs:?}, p = {p}"));
                }
                checked += 1;
            }
        }
    }
    for n in 3..=6 {
        for degs in assignments(n) {
            let d = LetterDegrees(degs.clone());
            for p in 1..n - 1 {
                for q in 1..n - p {
                    let (x, y, z) = (run_of(0, p), run_of(p, q), run_of(p + q, n - p - q));
                    let lhs = shuffle_elements(&d, &shuffle(&d, &x, &y), &Element::basis(z.clone()));
                    let rhs = shuffle_elements(&d, &Element::basis(x.clone()), &shuffle(&d, &y, &z));
                    if lhs != rhs {
                        return Err(format!("associativity, degrees {degs:?}, (p,q) = ({p},{q})"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} identities"))
}

fn words_over(letters: u32, max_len: usize) -> Vec<TensorWord> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    let mut words = Vec::new();
    for _ in 0..max_len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        words.extend(out.iter().map(|w| TensorWord::new(w).unwrap()));
    }
    words
}

fn c3_cobracket_laws() -> Verdict {
    let words = words_over(3, 4);
    let mut checked = 0;
    for mask in 0..8u32 {
        let degs: Vec<i64> = (0..3).map(|i| ((mask >> i) & 1) as i64).collect();
        let h = ShuffleQuotient::new(LetterDegrees(degs.clone()));
        let d = h.degrees().clone();
        let deg = |w: &TensorWord| d.word(w);
        for w in &words {
            let delta = cobracket_delta(&d, w);
            let anti = permute_factors(&delta, &swap(2, 0), deg).add(&delta);
            if !h.tensor_normal_form(&anti).is_zero() {
                return Err(format!("coantisymmetry on {:?} with degrees {degs:?}", w.letters()));
            }
            let t = apply_at(&delta, 0, 1, 0, deg, |ws| Ok(cobracket_delta(&d, &ws[0]))).unwrap();
            if !h.tensor_normal_form(&cyclic_sum(&t, deg)).is_zero() {
                return Err(format!("coJacobi on {:?} with degrees {degs:?}", w.letters()));
            }
            checked += 2;
        }
    }
    Ok(format!("{checked} identities over 8 parity patterns"))
}

fn instance(name: &str, params: &[&str]) -> Instance {
    let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    builtin(name, &Params::parse(&params).unwrap(), None).unwrap()
}

fn three_instances() -> Vec<(&'static str, Instance)> {
    vec![
        ("example2 m=2", instance("example2", &["m=2"])),
        ("example3 p=q=1", instance("example3", &["p=1", "q=1"])),
        ("example4 p=2 q=1", instance("example4", &["p=2", "q=1"])),
    ]
}

/// Runs `groups` on each instance; every record must pass and the named
/// identities must all be present.
fn ladder_criterion(groups: &[Group], bounds: Bounds, required: &[&str], per_instance: Duration) -> Verdict {
    let mut summary = Vec::new();
    for (label, inst) in three_instances() {
        let start = Instant::now();
        let records = Ladder::new(&inst.algebra, bounds, false).run_groups(groups);
        let took = start.elapsed();
        check_records(label, &records, required)?;
        if took > per_instance {
            return Err(format!("{label} took {took:.1?}, limit {per_instance:?}"));
        }
        let n: usize = records.iter().map(|r| r.checked).sum();
        summary.push(format!("{label}: {n} in {:.1?}", took));
    }
    Ok(summary.join("; "))
}

fn check_records(label: &str, records: &[Record], required: &[&str]) -> Result<(), String> {
    for id in required {
        if !records.iter().any(|r| r.id == *id) {
            return Err(format!("{label}: identity {id} was not run"));
        }
    }
    for r in records {
        if r.status != Status::Pass {
            let w = r
                .witness
                .as_ref()
                .map(|w| format!(" at {}: {} ≠ {}", w.input, w.lhs, w.rhs))
                .unwrap_or_default();
            return Err(format!("{label}: {} is {}{w}", r.id, r.status.as_str()));
        }
    }
    Ok(())
}

const MIN: Duration = Duration::from_secs(60);

fn c4_coderivation() -> Verdict {
    ladder_criterion(
        &[Group::Coderivation],
        Bounds { max_word_len: 3, ..Bounds::default() },
        &["coderivation-square", "coderivation-well-defined", "coderivation-law"],
        2 * MIN,
    )
}

fn c5_compatibility() -> Verdict {
    ladder_criterion(
        &[Group::Bracket],
        Bounds { max_word_len: 3, ..Bounds::default() },
        &["ell2-well-defined", "ell2-compatibility"],
        2 * MIN,
    )
}

fn c6_brackets() -> Verdict {
    ladder_criterion(
        &[Group::BracketPrime, Group::BracketDoublePrime],
        Bounds { max_word_len: 2, ..Bounds::default() },
        &[
            "ell2-prime-antisymmetry",
            "ell2-prime-jacobi",
            "ell2-prime-leibniz",
            "ell2-dp-symmetry",
            "ell2-dp-jacobi",
            "ell2-dp-differential",
        ],
        2 * MIN,
    )
}

fn c7_codifferential() -> Verdict {
    ladder_criterion(
        &[Group::Codifferential],
        Bounds { max_word_len: 4, max_sym_factors: 4, max_letters: 4 },
        &["q-square", "q-coderivation"],
        10 * MIN,
    )
}

fn c8_cobracket_dp() -> Verdict {
    ladder_criterion(
        &[Group::CobracketDoublePrime],
        Bounds { max_word_len: 2, max_sym_factors: 3, max_letters: 6 },
        &[
            "cobracket-dp-coantisymmetry",
            "cobracket-dp-cojacobi",
            "cobracket-dp-coleibniz",
            "cobracket-dp-m-coderivation",
            "cobracket-dp-ell-coderivation",
        ],
        10 * MIN,
    )
}

fn c9_specializations() -> Verdict {
    let mut summary = Vec::new();
    for (label, inst, required) in [
        (
            "gerstenhaber-toy",
            instance("gerstenhaber-toy", &[]),
            ["specialization-gerstenhaber-bracket", "specialization-kappa"],
        ),
        (
            "example2 m=2",
            instance("example2", &["m=2"]),
            ["specialization-poisson-bracket", "specialization-poisson-cobracket"],
        ),
    ] {
        let records = Ladder::new(&inst.algebra, Bounds::default(), false).run_groups(&[Group::Specialization]);
        check_records(label, &records, &required)?;
        let n: usize = records.iter().map(|r| r.checked).sum();
        summary.push(format!("{label}: {n}"));
    }
    Ok(summary.join("; "))
}

fn c10_tensor_conditions() -> Verdict {
    let flat = SuperSpace::new(2, 1).unwrap();
    let valid = PoissonTensor::constant_pair(flat, -4, 0, 1, int(1));
    let r = check_poisson_tensor(&valid);
    if !r.valid() {
        return Err(format!("constant ω rejected: {:?}", r.violations[0]));
    }

    let mut symmetric = valid.clone();
    symmetric.set(1, 0, Element::basis(SuperMonomial::one(flat)));
    let r = check_poisson_tensor(&symmetric);
    if r.holds(TensorCondition::GradedSymmetry) || !r.holds(TensorCondition::Homogeneity) {
        return Err("symmetric mutant should fail graded symmetry only".into());
    }

    let s3 = SuperSpace::new(3, 0).unwrap();
    let x = |i| Element::basis(SuperMonomial::x(s3, i));
    let mut t = PoissonTensor::new(s3, -2);
    t.set(0, 1, x(2)).set(1, 0, x(2).neg()).set(1, 2, x(1)).set(2, 1, x(1).neg());
    let r = check_poisson_tensor(&t);
    if !r.holds(TensorCondition::Homogeneity) || !r.holds(TensorCondition::GradedSymmetry) {
        return Err("nonconstant ω should satisfy homogeneity and symmetry".into());
    }
    match r.first(TensorCondition::Jacobi) {
        Some(v) if v.indices.len() == 3 => Ok(format!(
            "valid, symmetric mutant rejected, Jacobi witness {:?}",
            v.indices.iter().map(|i| i + 1).collect::<Vec<_>>()
        )),
        Some(v) => Err(format!("Jacobi witness is not an index triple: {:?}", v.indices)),
        None => Err("nonconstant ω accepted".into()),
    }
}

fn random_polyvector(rng: &mut ChaCha8Rng, by_degree: &BTreeMap<i64, Vec<PolyMonomial>>) -> PolyVector {
    let degrees: Vec<&i64> = by_degree.keys().collect();
    let d = **degrees.choose(rng).unwrap();
    let terms = rng.gen_range(1..=3);
    let mut v = Element::zero();
    for m in by_degree[&d].choose_multiple(rng, terms) {
        let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
        v.add_term(m.clone(), int(c));
    }
    v
}

fn c11_schouten() -> Verdict {
    let space = SuperSpace::new(2, 1).unwrap();
    let g = PolyGrading::TPOLY;
    let mut by_degree: BTreeMap<i64, Vec<PolyMonomial>> = BTreeMap::new();
    for m in polyvector_basis(space, PolyBounds { max_poly_degree: 2, max_rank: 2 }) {
        by_degree.entry(m.degree(g)).or_default().push(m);
    }
    let deg = |v: &PolyVector| v.iter().next().map(|(m, _)| m.degree(g)).unwrap_or(0) + 1;
    let br = |a: &PolyVector, b: &PolyVector| schouten(space, a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..200 {
        let (a, b, c) = (
            random_polyvector(&mut rng, &by_degree),
            random_polyvector(&mut rng, &by_degree),
            random_polyvector(&mut rng, &by_degree),
        );
        let (da, db, dc) = (deg(&a), deg(&b), deg(&c));
        if br(&a, &b) != schouten_by_bullet(space, &a, &b) {
            return Err(format!("sample {k}: recursion and bullet formula differ"));
        }
        let anti = br(&a, &b).add(&br(&b, &a).scale(&int(sign_pow(da * db).into())));
        if !anti.is_zero() {
            return Err(format!("sample {k}: antisymmetry"));
        }
        let mut jac = br(&a, &br(&b, &c)).scale(&int(sign_pow(da * dc).into()));
        jac = jac.add(&br(&b, &br(&c, &a)).scale(&int(sign_pow(db * da).into())));
        jac = jac.add(&br(&c, &br(&a, &b)).scale(&int(sign_pow(dc * db).into())));
        if !jac.is_zero() {
            return Err(format!("sample {k}: Jacobi"));
        }
        let lhs = br(&a, &wedge(space, &b, &c));
        let rhs = wedge(space, &br(&a, &b), &c)
            .add(&wedge(space, &b, &br(&a, &c)).scale(&int(sign_pow((db - 1) * da).into())));
        if lhs != rhs {
            return Err(format!("sample {k}: Leibniz"));
        }
    }
    Ok("200 seeded pairs and triples on ℝ^{2|1}".into())
}

fn c12_mutation() -> Verdict {
    let inst = instance("example4", &["p=2", "q=1"]);
    let report = mutation(&inst, &SuiteConfig { seed: 12, ..SuiteConfig::default() }).map_err(|e| e.to_string())?;
    let mutants: Vec<&Record> = report.records.iter().filter(|r| r.id.starts_with("mutant-")).collect();
    if mutants.len() != 10 {
        return Err(format!("{} mutants instead of 10", mutants.len()));
    }
    check_records("example4", &report.records, &["baseline"])?;
    for r in &mutants {
        if r.witness.is_none() {
            return Err(format!("{} detected without a witness", r.id));
        }
    }
    Ok("10 of 10 perturbations detected".into())
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("sign oracle equivalence", Duration::from_secs(10), c1_sign_oracle),
        ("shuffle laws", MIN, c2_shuffle_laws),
        ("cobracket laws modulo shuffles", MIN, c3_cobracket_laws),
        ("D² = 0 and the coderivation law", 6 * MIN, c4_coderivation),
        ("ℓ₂ compatibility with δ", 2 * MIN, c5_compatibility),
        ("ℓ′₂ and ℓ″₂ suites", 2 * MIN, c6_brackets),
        ("Q² = 0 and Q a coderivation", 10 * MIN, c7_codifferential),
        ("δ″ suite", 10 * MIN, c8_cobracket_dp),
        ("specializations", MIN, c9_specializations),
        ("Poisson tensor conditions", Duration::from_secs(10), c10_tensor_conditions),
        ("Schouten properties", 5 * MIN, c11_schouten),
        ("mutation sensitivity", 5 * MIN, c12_mutation),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if took > *limit => Err(format!("{detail}; over the {limit:?} limit")),
            v => v,
        };
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name} ({took:.2?}, limit {limit:?}): {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({took:.2?}, limit {limit:?}): {why}", k + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
