//! Built-in instance generators.

use std::fmt;

use alldiff_core::model::{
    AllDifferentConstraint, Domain, DomainStore, Problem, Value, VariableId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::NamedProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Six speakers, one conference room, per-speaker availability windows.
    Speeches,
    /// The same scheduling instance with two speakers withdrawn.
    RevisedSpeeches,
    /// n-queens: column variables plus two diagonal constraint families
    /// built from per-row constant offsets.
    Nqueens,
    /// Seeded random single-constraint instance.
    Random,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Speeches,
        GeneratorKind::RevisedSpeeches,
        GeneratorKind::Nqueens,
        GeneratorKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Speeches => "speeches",
            GeneratorKind::RevisedSpeeches => "revised-speeches",
            GeneratorKind::Nqueens => "nqueens",
            GeneratorKind::Random => "random",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters accepted by [`gen_benchmark`]; each generator reads the
/// fields it needs.
#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    /// Variable count (`nqueens`, `random`).
    pub n: usize,
    /// Value range for `random` domains.
    pub lo: Value,
    pub hi: Value,
    /// Probability that a value of `[lo,hi]` stays in a domain (`random`).
    pub density: f64,
    /// RNG seed (`random`); equal seeds give identical problems.
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 8,
            lo: 1,
            hi: 8,
            density: 0.8,
            seed: 0,
        }
    }
}

/// Domains are explicit value sets; generators refuse instances that
/// would materialize more values than this in total.
pub const MAX_TOTAL_VALUES: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenError(pub String);

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GenError {}

/// Builds a named benchmark instance.
pub fn gen_benchmark(kind: GeneratorKind, params: GenParams) -> Result<NamedProblem, GenError> {
    match kind {
        GeneratorKind::Speeches => Ok(speeches()),
        GeneratorKind::RevisedSpeeches => Ok(revised_speeches()),
        GeneratorKind::Nqueens => nqueens(params.n),
        GeneratorKind::Random => random(params),
    }
}

fn named(names: Vec<&str>, windows: Vec<(Value, Value)>) -> NamedProblem {
    let domains: Vec<Domain> = windows.iter().map(|&(lo, hi)| Domain::range(lo, hi)).collect();
    let n = domains.len();
    NamedProblem {
        names: names.into_iter().map(String::from).collect(),
        problem: Problem::new(
            DomainStore::new(domains),
            vec![AllDifferentConstraint::new((0..n).map(VariableId).collect())],
        ),
    }
}

/// Six availability windows, one shared room: every speech needs its own
/// hour slot.
fn speeches() -> NamedProblem {
    named(
        vec!["x1", "x2", "x3", "x4", "x5", "x6"],
        vec![(3, 6), (3, 4), (2, 5), (2, 4), (3, 4), (1, 6)],
    )
}

/// The same instance after the fourth and sixth speakers withdrew.
fn revised_speeches() -> NamedProblem {
    named(
        vec!["x1", "x2", "x3", "x4"],
        vec![(3, 6), (3, 4), (2, 5), (3, 4)],
    )
}

/// n-queens over column variables `q1..qn ∈ [1,n]`. Rows are implicit;
/// the two diagonal families reuse the column variables through the
/// per-row offsets `+(i−1)` and `−(i−1)`, so the whole model stays pure
/// `alldifferent`:
///
/// - columns:        `alldifferent(q1, ..., qn)`
/// - "/" diagonals:  `alldifferent(q1+0, q2+1, ..., qn+(n−1))`
/// - "\" diagonals:  `alldifferent(q1-0, q2-1, ..., qn-(n−1))`
fn nqueens(n: usize) -> Result<NamedProblem, GenError> {
    if n == 0 {
        return Err(GenError("nqueens needs n >= 1".into()));
    }
    if n as u128 * n as u128 > MAX_TOTAL_VALUES {
        return Err(GenError(format!(
            "nqueens n={n} would materialize {} domain values (cap {MAX_TOTAL_VALUES})",
            n as u128 * n as u128
        )));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    let domains: Vec<Domain> = (0..n).map(|_| Domain::range(1, n as Value)).collect();
    let vars: Vec<VariableId> = (0..n).map(VariableId).collect();
    let up: Vec<Value> = (0..n).map(|i| i as Value).collect();
    let down: Vec<Value> = (0..n).map(|i| -(i as Value)).collect();
    let constraints = vec![
        AllDifferentConstraint::new(vars.clone()),
        AllDifferentConstraint::with_offsets(vars.clone(), up),
        AllDifferentConstraint::with_offsets(vars, down),
    ];
    Ok(NamedProblem {
        names,
        problem: Problem::new(DomainStore::new(domains), constraints),
    })
}

/// Random single-constraint instance: each value of `[lo,hi]` survives
/// into each domain with probability `density`; empty draws get one
/// uniform value so domains start non-empty.
fn random(params: GenParams) -> Result<NamedProblem, GenError> {
    let GenParams {
        n,
        lo,
        hi,
        density,
        seed,
    } = params;
    if n == 0 {
        return Err(GenError("random needs n >= 1".into()));
    }
    if lo > hi {
        return Err(GenError(format!("empty value range [{lo},{hi}]")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(GenError(format!("density {density} outside [0,1]")));
    }
    let span = hi as i128 - lo as i128 + 1;
    if n as u128 * span as u128 > MAX_TOTAL_VALUES {
        return Err(GenError(format!(
            "random n={n} over [{lo},{hi}] would sample {} values (cap {MAX_TOTAL_VALUES})",
            n as u128 * span as u128
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut domains = Vec::with_capacity(n);
    for _ in 0..n {
        let mut values: Vec<Value> = (lo..=hi).filter(|_| rng.gen_bool(density)).collect();
        if values.is_empty() {
            values.push(rng.gen_range(lo..=hi));
        }
        domains.push(Domain::new(values));
    }
    Ok(NamedProblem {
        names: (1..=n).map(|i| format!("v{i}")).collect(),
        problem: Problem::new(
            DomainStore::new(domains),
            vec![AllDifferentConstraint::new((0..n).map(VariableId).collect())],
        ),
    })
}
