//! The three verifier commands: axioms of an instance, the identity ladder
//! of its envelope, and mutation sensitivity.

pub mod oracles;
pub mod report;
pub mod suites;

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ab_core::{check_axiom, tuples, AbAlgebra, Axiom, Entry, Operation};
use crate::error::{Error, Result};
use crate::freemodule::{format_scalar, int};
use crate::instances::{builtin, check_poisson_tensor, Instance, Params, TensorCondition, BUILTIN_NAMES};
use crate::outcome::{Outcome, Status, Witness};
use crate::tensor_coalgebra::Gen;

pub use report::{InstanceInfo, Record, Report, Summary, EXIT_ALL_SKIPPED, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
pub use suites::{Bounds, Group, Ladder};

/// Where the algebra comes from.
#[derive(Clone, Debug)]
pub enum AlgebraSource {
    Builtin { name: String, params: Params, max_degree: Option<i64> },
    File(PathBuf),
}

impl AlgebraSource {
    /// A builtin name selects that instance; anything else is a file path.
    pub fn parse(spec: &str, params: &[String], max_degree: Option<i64>) -> Result<Self> {
        if BUILTIN_NAMES.contains(&spec) {
            return Ok(AlgebraSource::Builtin {
                name: spec.to_string(),
                params: Params::parse(params)?,
                max_degree,
            });
        }
        if !params.is_empty() || max_degree.is_some() {
            return Err(Error::Usage(
                "--param and --max-degree apply to builtin instances only".into(),
            ));
        }
        let path = PathBuf::from(spec);
        if !path.exists() {
            return Err(Error::Usage(format!(
                "{spec:?} is neither a builtin instance ({}) nor an existing file",
                BUILTIN_NAMES.join(", ")
            )));
        }
        Ok(AlgebraSource::File(path))
    }

    pub fn load(&self) -> Result<Instance> {
        match self {
            AlgebraSource::Builtin { name, params, max_degree } => builtin(name, params, *max_degree),
            AlgebraSource::File(path) => Ok(Instance::plain(AbAlgebra::load(path)?)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub bounds: Bounds,
    pub seed: u64,
    /// Worker threads; 0 lets the runtime choose.
    pub jobs: usize,
    pub timings: bool,
    pub groups: Vec<Group>,
    pub mutants: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            bounds: Bounds::default(),
            seed: 0,
            jobs: 0,
            timings: false,
            groups: Group::ALL.to_vec(),
            mutants: 10,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let b = &self.bounds;
        if b.max_word_len == 0 || b.max_sym_factors == 0 || b.max_letters == 0 {
            return Err(Error::Usage("word length, factor and letter bounds must be at least 1".into()));
        }
        Ok(())
    }

    fn settings(&self, command: &str) -> Vec<(String, String)> {
        let mut s = vec![
            ("max-word-len".to_string(), self.bounds.max_word_len.to_string()),
            ("max-sym-factors".to_string(), self.bounds.max_sym_factors.to_string()),
            ("max-letters".to_string(), self.bounds.max_letters.to_string()),
        ];
        if command == "mutation" {
            s.push(("seed".into(), self.seed.to_string()));
            s.push(("mutants".into(), self.mutants.to_string()));
        }
        s
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {} worker threads: {e}", self.jobs)))?;
        Ok(pool.install(f))
    }
}

pub fn instance_info(inst: &Instance) -> InstanceInfo {
    let alg = &inst.algebra;
    InstanceInfo {
        name: alg.name.clone(),
        a: alg.a,
        b: alg.b,
        generators: alg.len(),
        pool: alg.pool().iter().map(|&g| alg.name_of(g).to_string()).collect(),
        params: inst.params.clone(),
    }
}

fn axiom_locus(axiom: Axiom) -> &'static str {
    match axiom {
        Axiom::ProductCommutativity => "product: graded commutativity",
        Axiom::ProductAssociativity => "product: associativity",
        Axiom::BracketAntisymmetry => "bracket: graded antisymmetry",
        Axiom::BracketJacobi => "bracket: graded Jacobi identity",
        Axiom::BracketLeibniz => "bracket: Leibniz rule over the product",
        Axiom::DifferentialSquare => "d∘d = 0",
        Axiom::DifferentialOnProduct => "d is a derivation of the product",
        Axiom::DifferentialOnBracket => "d is a derivation of the bracket",
    }
}

fn axiom_records(alg: &AbAlgebra, timings: bool) -> Vec<Record> {
    use rayon::prelude::*;
    let gens: Vec<Gen> = (0..alg.len() as Gen).collect();
    Axiom::ALL
        .iter()
        .map(|&axiom| {
            let start = std::time::Instant::now();
            let outcomes: Vec<Outcome> = tuples(&gens, axiom.arity())
                .par_iter()
                .map(|args| check_axiom(alg, axiom, args))
                .collect();
            let mut r = Record::from_outcomes(axiom.id(), axiom_locus(axiom), outcomes);
            if timings {
                r.wall_ms = Some(start.elapsed().as_millis() as u64);
            }
            r
        })
        .collect()
}

fn tensor_records(inst: &Instance) -> Vec<Record> {
    let Some(t) = &inst.tensor else { return Vec::new() };
    let report = check_poisson_tensor(t);
    [
        (TensorCondition::Homogeneity, "tensor-homogeneity", "ω^{ij} is homogeneous of degree m − |∂ᵢ| − |∂ⱼ|"),
        (TensorCondition::GradedSymmetry, "tensor-graded-symmetry", "graded antisymmetry of ω"),
        (TensorCondition::Jacobi, "tensor-jacobi", "cyclic Jacobi condition on ω"),
    ]
    .into_iter()
    .map(|(c, id, locus)| {
        let outcome = match report.first(c) {
            None => Outcome::Pass,
            Some(v) => Outcome::Fail(Witness {
                input: format!("indices {:?}", v.indices.iter().map(|i| i + 1).collect::<Vec<_>>()),
                lhs: v.detail.clone(),
                rhs: "0".into(),
            }),
        };
        Record::from_outcomes(id, locus, vec![outcome])
    })
    .collect()
}

/// Axioms of the algebra on all retained generators, plus the conditions on
/// the defining tensor when there is one.
pub fn check_algebra(inst: &Instance, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let mut records = cfg.install(|| axiom_records(&inst.algebra, cfg.timings))?;
    records.extend(tensor_records(inst));
    Ok(Report::new("check-algebra", instance_info(inst), Vec::new(), records))
}

/// The identity ladder on the letter pool of the instance.
pub fn verify_envelope(inst: &Instance, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let records = cfg.install(|| Ladder::new(&inst.algebra, cfg.bounds, cfg.timings).run_groups(&cfg.groups))?;
    Ok(Report::new("verify-envelope", instance_info(inst), cfg.settings("verify-envelope"), records))
}

/// One perturbed structure constant: `op(x[,y])` gains `delta·z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    pub op: Operation,
    pub args: Vec<Gen>,
    pub target: Gen,
    pub delta: i64,
}

impl Mutant {
    pub fn apply(&self, alg: &AbAlgebra) -> AbAlgebra {
        let current = match self.op {
            Operation::Product => alg.product(self.args[0], self.args[1]),
            Operation::Bracket => alg.bracket(self.args[0], self.args[1]),
            Operation::Differential => alg.d(self.args[0]),
        }
        .expect("mutants are drawn from defined entries");
        let mut v = current;
        v.add_term(self.target, int(self.delta));
        let y = self.args.get(1).copied().unwrap_or(0);
        alg.with_entry(self.op, self.args[0], y, Entry::Value(v))
    }

    pub fn describe(&self, alg: &AbAlgebra) -> String {
        let args: Vec<&str> = self.args.iter().map(|&g| alg.name_of(g)).collect();
        let op = match self.op {
            Operation::Product => "product",
            Operation::Bracket => "bracket",
            Operation::Differential => "d",
        };
        let sign = if self.delta < 0 { "-" } else { "+" };
        format!(
            "{op}({}) {sign}= {}·{}",
            args.join(", "),
            format_scalar(&int(self.delta.abs())),
            alg.name_of(self.target)
        )
    }
}

/// Every single-constant perturbation with inputs from the pool, a target of
/// the right degree, and `delta ∈ {−2, −1, 1, 2}`, in a fixed order.
pub fn mutation_candidates(alg: &AbAlgebra) -> Vec<Mutant> {
    let pool = alg.pool();
    let n = alg.len() as Gen;
    let mut out = Vec::new();
    let mut push = |op: Operation, args: Vec<Gen>, degree: i64| {
        for z in 0..n {
            if alg.degree(z) != degree {
                continue;
            }
            for delta in [-2, -1, 1, 2] {
                out.push(Mutant { op, args: args.clone(), target: z, delta });
            }
        }
    };
    for &x in pool {
        for &y in pool {
            let d = alg.degree(x) + alg.degree(y);
            if alg.product(x, y).is_ok() {
                push(Operation::Product, vec![x, y], d + alg.a);
            }
            if alg.bracket(x, y).is_ok() {
                push(Operation::Bracket, vec![x, y], d + alg.b);
            }
        }
        if alg.d(x).is_ok() {
            push(Operation::Differential, vec![x], alg.degree(x) + 1);
        }
    }
    out
}

/// The first `count` candidates after a shuffle seeded by `seed`.
pub fn select_mutants(alg: &AbAlgebra, seed: u64, count: usize) -> Vec<Mutant> {
    let mut all = mutation_candidates(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    all.truncate(count);
    all
}

fn structural(cfg: &SuiteConfig) -> Vec<Group> {
    Group::STRUCTURAL.iter().copied().filter(|g| cfg.groups.contains(g)).collect()
}

/// Runs the structural identities on the unperturbed instance (which must
/// pass) and then on each seeded mutant, which must fail at least one.
pub fn mutation(inst: &Instance, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let alg = &inst.algebra;
    let groups = structural(cfg);
    let records = cfg.install(|| {
        let mut records = Vec::new();
        let base = Ladder::new(alg, cfg.bounds, false).run_groups(&groups);
        let failing = base.iter().find(|r| r.status == Status::Fail);
        let outcome = match failing {
            Some(r) => Outcome::Fail(r.witness.clone().unwrap_or_else(|| Witness {
                input: r.id.clone(),
                lhs: "fails".into(),
                rhs: "passes".into(),
            })),
            None if base.iter().any(|r| r.status == Status::Pass) => Outcome::Pass,
            None => Outcome::Skipped("every structural identity was skipped by truncation".into()),
        };
        records.push(Record::from_outcomes("baseline", "the unperturbed instance passes every structural identity", vec![outcome]));

        let mutants = select_mutants(alg, cfg.seed, cfg.mutants);
        for (k, m) in mutants.iter().enumerate() {
            let start = std::time::Instant::now();
            let mutated = m.apply(alg);
            let (ran, detected) = Ladder::new(&mutated, cfg.bounds, false).first_failure(&groups);
            let description = m.describe(alg);
            let outcome = if detected {
                Outcome::Pass
            } else {
                Outcome::Fail(Witness {
                    input: description.clone(),
                    lhs: "no identity failed".into(),
                    rhs: "some identity fails".into(),
                })
            };
            let mut r = Record::from_outcomes(&format!("mutant-{}", k + 1), &description, vec![outcome]);
            if detected {
                let last = ran.last().expect("a detection comes from a record");
                let w = last.witness.clone().expect("failing records carry a witness");
                r.witness = Some(Witness { input: format!("{}: {}", last.id, w.input), ..w });
            }
            if cfg.timings {
                r.wall_ms = Some(start.elapsed().as_millis() as u64);
            }
            records.push(r);
        }
        records
    })?;
    Ok(Report::new("mutation", instance_info(inst), cfg.settings("mutation"), records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemodule::Element;

    fn instance(name: &str) -> Instance {
        builtin(name, &Params::default(), None).unwrap()
    }

    #[test]
    fn mutant_selection_is_deterministic() {
        let inst = instance("gerstenhaber-toy");
        let a = select_mutants(&inst.algebra, 7, 10);
        let b = select_mutants(&inst.algebra, 7, 10);
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn unknown_source_is_usage_error() {
        let r = AlgebraSource::parse("no-such-thing", &[], None);
        assert!(matches!(r, Err(Error::Usage(_))));
        let r = AlgebraSource::parse("example2", &["m=3".into()], None).unwrap().load();
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn mutant_changes_one_entry() {
        let inst = instance("gerstenhaber-toy");
        let m = &select_mutants(&inst.algebra, 1, 1)[0];
        let mutated = m.apply(&inst.algebra);
        let before = match m.op {
            Operation::Product => inst.algebra.product(m.args[0], m.args[1]).unwrap(),
            Operation::Bracket => inst.algebra.bracket(m.args[0], m.args[1]).unwrap(),
            Operation::Differential => inst.algebra.d(m.args[0]).unwrap(),
        };
        let after = match m.op {
            Operation::Product => mutated.product(m.args[0], m.args[1]).unwrap(),
            Operation::Bracket => mutated.bracket(m.args[0], m.args[1]).unwrap(),
            Operation::Differential => mutated.d(m.args[0]).unwrap(),
        };
        let diff: Element<Gen> = after.sub(&before);
        assert_eq!(diff, Element::term(m.target, int(m.delta)));
    }
}
