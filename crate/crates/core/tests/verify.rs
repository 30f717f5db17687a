use ab_homotopy::ab_core::{Entry, Operation};
use ab_homotopy::freemodule::int;
use ab_homotopy::instances::{builtin, Instance, Params, BUILTIN_NAMES};
use ab_homotopy::outcome::Status;
use ab_homotopy::verify::{check_algebra, mutation, verify_envelope, Group, SuiteConfig, EXIT_FAIL, EXIT_PASS};

fn instance(name: &str, params: &[&str]) -> Instance {
    let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    builtin(name, &Params::parse(&params).unwrap(), None).unwrap()
}

#[test]
fn every_builtin_passes_the_whole_ladder() {
    for name in BUILTIN_NAMES {
        let inst = instance(name, &[]);
        let report = verify_envelope(&inst, &SuiteConfig::default()).unwrap();
        assert_eq!(report.exit_code(), EXIT_PASS, "{name}\n{}", report.to_text());
        assert_eq!(report.summary.skipped, 0, "{name}");
        let check = check_algebra(&inst, &SuiteConfig::default()).unwrap();
        assert_eq!(check.exit_code(), EXIT_PASS, "{name}\n{}", check.to_text());
    }
}

#[test]
fn specializations_run_only_at_their_gradings() {
    let cfg = SuiteConfig { groups: vec![Group::Specialization], ..SuiteConfig::default() };
    let ids = |name: &str| -> Vec<String> {
        let report = verify_envelope(&instance(name, &[]), &cfg).unwrap();
        report.records.iter().map(|r| r.id.clone()).collect()
    };
    assert_eq!(ids("gerstenhaber-toy"), ["specialization-gerstenhaber-bracket", "specialization-kappa"]);
    assert_eq!(ids("example2"), ["specialization-poisson-bracket", "specialization-poisson-cobracket"]);
    assert!(ids("example4").is_empty());
}

#[test]
fn flipped_bracket_sign_breaks_the_envelope() {
    let inst = instance("gerstenhaber-toy", &[]);
    let alg = &inst.algebra;
    let (x, dx) = (alg.lookup("x1").unwrap(), alg.lookup("dx1").unwrap());
    let flipped = |a, b| {
        let v = alg.bracket(a, b).unwrap().neg();
        (a, b, v)
    };
    let (a, b, v1) = flipped(dx, x);
    let (_, _, v2) = flipped(x, dx);
    let broken = alg
        .with_entry(Operation::Bracket, a, b, Entry::Value(v1.clone()))
        .with_entry(Operation::Bracket, b, a, Entry::Value(v2));
    assert_ne!(broken.bracket(dx, x).unwrap(), alg.bracket(dx, x).unwrap());
    assert_eq!(v1.coeff(&alg.lookup("1").unwrap()), int(-1));
    let broken = Instance::plain(broken);
    let report = verify_envelope(&broken, &SuiteConfig::default()).unwrap();
    assert_eq!(report.exit_code(), EXIT_FAIL);
    let failing: Vec<&str> =
        report.records.iter().filter(|r| r.status == Status::Fail).map(|r| r.id.as_str()).collect();
    assert!(failing.contains(&"ell2-prime-jacobi") || failing.contains(&"ell2-prime-leibniz"), "{failing:?}");
    for r in report.records.iter().filter(|r| r.status == Status::Fail) {
        let w = r.witness.as_ref().unwrap();
        assert_ne!(w.lhs, w.rhs);
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let inst = instance("example4", &[]);
    let one = SuiteConfig { jobs: 1, ..SuiteConfig::default() };
    let many = SuiteConfig { jobs: 4, ..SuiteConfig::default() };
    assert_eq!(
        verify_envelope(&inst, &one).unwrap().to_json(),
        verify_envelope(&inst, &many).unwrap().to_json()
    );
    let m1 = mutation(&inst, &SuiteConfig { seed: 3, ..one }).unwrap();
    let m2 = mutation(&inst, &SuiteConfig { seed: 3, ..many }).unwrap();
    assert_eq!(m1.to_json(), m2.to_json());
    assert_eq!(m1.exit_code(), EXIT_PASS, "{}", m1.to_text());
}

#[test]
fn different_seeds_pick_different_mutants() {
    let inst = instance("example3", &[]);
    let cfg = |seed| SuiteConfig { seed, mutants: 4, ..SuiteConfig::default() };
    let a = mutation(&inst, &cfg(1)).unwrap();
    let b = mutation(&inst, &cfg(2)).unwrap();
    let loci = |r: &ab_homotopy::verify::Report| r.records.iter().map(|x| x.locus.clone()).collect::<Vec<_>>();
    assert_ne!(loci(&a), loci(&b));
    assert_eq!(a.exit_code(), EXIT_PASS);
    assert_eq!(b.exit_code(), EXIT_PASS);
}
