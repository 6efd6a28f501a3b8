//! Brute-force reference implementations of every consistency notion,
//! solution enumeration, matching enumeration and Hall's condition.
//!
//! Everything here favours clarity over speed and is guarded by hard
//! budgets that refuse loudly instead of truncating. These functions are
//! the ground truth the production filters are tested against; none of
//! them share code with the filtering path.

use alloc::vec::Vec;

use crate::decomp::{decompose, Disequality};
use crate::model::{
    AllDifferentConstraint, ConsistencyLevel, Domain, DomainStore, FilterOutcome, Infeasible,
    InfeasibleCause, Problem, Value, VariableId,
};
use crate::regin::{Matching, ValueGraph};

/// Default cap on the number of candidate tuples an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The candidate space exceeds the enumeration budget.
    BudgetExceeded { required: u128, budget: u64 },
    /// A structural limit (variable count) was exceeded.
    SizeLimitExceeded { limit: usize, got: usize },
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::BudgetExceeded { required, budget } => {
                write!(f, "enumeration needs {required} tuples, budget is {budget}")
            }
            OracleError::SizeLimitExceeded { limit, got } => {
                write!(f, "oracle limited to {limit} variables, got {got}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// All solutions of one constraint within a store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    /// Tuples in constraint-variable order, lexicographically sorted.
    pub tuples: Vec<Vec<Value>>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    /// Values of position `i` that appear in some solution.
    pub fn support_of(&self, position: usize) -> Domain {
        Domain::new(self.tuples.iter().map(|t| t[position]))
    }
}

fn candidate_space(view: &[Domain]) -> u128 {
    view.iter().map(|d| d.len() as u128).product()
}

/// Exhaustively enumerates the pairwise-distinct tuples of `c` within
/// `store`, in lexicographic order. Tuples hold variable values (offsets
/// are applied only for the distinctness test). Refuses when the raw
/// candidate space `Π|D_i|` exceeds the budget.
pub fn enumerate_solutions(
    c: &AllDifferentConstraint,
    store: &DomainStore,
) -> Result<SolutionSet, OracleError> {
    enumerate_solutions_with_budget(c, store, DEFAULT_BUDGET)
}

pub fn enumerate_solutions_with_budget(
    c: &AllDifferentConstraint,
    store: &DomainStore,
    budget: u64,
) -> Result<SolutionSet, OracleError> {
    let view = c.view_domains(store);
    let required = candidate_space(&view);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let mut tuples = Vec::new();
    let mut picked: Vec<Value> = Vec::with_capacity(view.len());
    enumerate_rec(&view, &mut picked, &mut tuples);
    // Report variable values, not view values.
    for t in &mut tuples {
        for (v, &off) in t.iter_mut().zip(c.offsets()) {
            *v -= off;
        }
    }
    Ok(SolutionSet { tuples })
}

fn enumerate_rec(view: &[Domain], picked: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    if picked.len() == view.len() {
        out.push(picked.clone());
        return;
    }
    for v in view[picked.len()].iter() {
        if picked.contains(&v) {
            continue;
        }
        picked.push(v);
        enumerate_rec(view, picked, out);
        picked.pop();
    }
}

/// Does any pairwise-distinct tuple extend `picked`, drawing the value of
/// position `j` from `choices[j]`?
fn has_distinct_completion(choices: &[Vec<Value>], picked: &mut Vec<Value>) -> bool {
    if picked.len() == choices.len() {
        return true;
    }
    let j = picked.len();
    for i in 0..choices[j].len() {
        let v = choices[j][i];
        if picked.contains(&v) {
            continue;
        }
        picked.push(v);
        if has_distinct_completion(choices, picked) {
            picked.pop();
            return true;
        }
        picked.pop();
    }
    false
}

/// Is view value `v` at position `i` supported, with the other positions
/// drawing from `relax`? (`relax[i]` is ignored.)
fn supported(relax: &[Vec<Value>], i: usize, v: Value) -> bool {
    // Reorder so position i comes first with the fixed value.
    let mut choices: Vec<Vec<Value>> = Vec::with_capacity(relax.len());
    choices.push(alloc::vec![v]);
    for (j, r) in relax.iter().enumerate() {
        if j != i {
            choices.push(r.clone());
        }
    }
    let mut picked = Vec::with_capacity(choices.len());
    has_distinct_completion(&choices, &mut picked)
}

fn interval_values(d: &Domain) -> Vec<Value> {
    let (lo, hi) = (d.min().expect("non-empty"), d.max().expect("non-empty"));
    (lo..=hi).collect()
}

fn interval_space(view: &[Domain], skip: usize) -> u128 {
    view.iter()
        .enumerate()
        .map(|(j, d)| {
            if j == skip {
                1u128
            } else {
                (d.max().unwrap() as i128 - d.min().unwrap() as i128 + 1) as u128
            }
        })
        .product()
}

/// The definitional closure of one consistency level: repeatedly deletes
/// values that violate the level's literal definition until it holds.
/// This is the ground truth for oracle-equivalence tests.
pub fn oracle_filter(
    c: &AllDifferentConstraint,
    store: &DomainStore,
    level: ConsistencyLevel,
) -> Result<FilterOutcome, OracleError> {
    oracle_filter_with_budget(c, store, level, DEFAULT_BUDGET)
}

pub fn oracle_filter_with_budget(
    c: &AllDifferentConstraint,
    store: &DomainStore,
    level: ConsistencyLevel,
    budget: u64,
) -> Result<FilterOutcome, OracleError> {
    let mut out = store.clone();
    let mut view = c.view_domains(&out);
    if let Some(i) = view.iter().position(Domain::is_empty) {
        return Ok(FilterOutcome::Infeasible(Infeasible::new(
            InfeasibleCause::EmptyDomain(c.vars()[i]),
        )));
    }

    match level {
        ConsistencyLevel::HyperArc => {
            // For a single constraint one pass suffices: the kept values
            // are exactly those appearing in some solution, and deleting
            // the others removes no solution.
            let required = candidate_space(&view);
            if required > budget as u128 {
                return Err(OracleError::BudgetExceeded { required, budget });
            }
            let mut tuples = Vec::new();
            enumerate_rec(&view, &mut Vec::new(), &mut tuples);
            for (i, dom) in view.iter_mut().enumerate() {
                *dom = Domain::new(tuples.iter().map(|t| t[i]));
                if dom.is_empty() {
                    return Ok(FilterOutcome::Infeasible(Infeasible::new(
                        InfeasibleCause::EmptyDomain(c.vars()[i]),
                    )));
                }
            }
        }
        ConsistencyLevel::Range | ConsistencyLevel::Bound => {
            // Supports are drawn from interval relaxations of the other
            // domains; deletions shrink intervals, so iterate to a
            // fixpoint. Bound examines only the current bounds, range
            // every value.
            loop {
                let mut changed = false;
                for i in 0..view.len() {
                    let required = interval_space(&view, i);
                    if required > budget as u128 {
                        return Err(OracleError::BudgetExceeded { required, budget });
                    }
                    let relax: Vec<Vec<Value>> = view.iter().map(interval_values).collect();
                    let candidates: Vec<Value> = match level {
                        ConsistencyLevel::Bound => {
                            let d = &view[i];
                            let mut c = alloc::vec![d.min().unwrap()];
                            if d.max() != d.min() {
                                c.push(d.max().unwrap());
                            }
                            c
                        }
                        _ => view[i].iter().collect(),
                    };
                    for v in candidates {
                        if !supported(&relax, i, v) {
                            view[i].remove(v);
                            changed = true;
                            if view[i].is_empty() {
                                return Ok(FilterOutcome::Infeasible(Infeasible::new(
                                    InfeasibleCause::EmptyDomain(c.vars()[i]),
                                )));
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        ConsistencyLevel::DecompAc => {
            // Literal arc consistency on the decomposition: a value loses
            // its support on x_a ≠ x_b exactly when the partner domain is
            // a matching singleton.
            let diseqs = decompose(c);
            let index_of = |v: VariableId| c.vars().iter().position(|&x| x == v).unwrap();
            loop {
                let mut changed = false;
                for d in &diseqs {
                    let (ia, ib) = (index_of(d.a), index_of(d.b));
                    // In view space the constraint is plain inequality of
                    // the two view domains.
                    for (from, to) in [(ia, ib), (ib, ia)] {
                        let values: Vec<Value> = view[from].iter().collect();
                        for v in values {
                            let unsupported =
                                view[to].is_singleton() && view[to].contains(v);
                            if unsupported {
                                view[from].remove(v);
                                changed = true;
                                if view[from].is_empty() {
                                    return Ok(FilterOutcome::Infeasible(Infeasible::new(
                                        InfeasibleCause::EmptyDomain(c.vars()[from]),
                                    )));
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }

    c.store_view(&mut out, &view);
    Ok(FilterOutcome::Fixpoint(out))
}

/// The relational closure of the decomposition: keeps exactly the values
/// appearing in a simultaneous solution of all `½(n²−n)` disequalities.
/// Evaluates the disequalities literally, tuple by tuple.
pub fn simultaneous_diseq_closure(
    c: &AllDifferentConstraint,
    store: &DomainStore,
) -> Result<FilterOutcome, OracleError> {
    let view = c.view_domains(store);
    if let Some(i) = view.iter().position(Domain::is_empty) {
        return Ok(FilterOutcome::Infeasible(Infeasible::new(
            InfeasibleCause::EmptyDomain(c.vars()[i]),
        )));
    }
    let required = candidate_space(&view);
    if required > DEFAULT_BUDGET as u128 {
        return Err(OracleError::BudgetExceeded {
            required,
            budget: DEFAULT_BUDGET,
        });
    }
    let diseqs: Vec<Disequality> = decompose(c);
    let index_of = |v: VariableId| c.vars().iter().position(|&x| x == v).unwrap();
    let pairs: Vec<(usize, usize)> = diseqs
        .iter()
        .map(|d| (index_of(d.a), index_of(d.b)))
        .collect();

    let mut keep: Vec<Vec<Value>> = alloc::vec![Vec::new(); view.len()];
    let mut tuple: Vec<Value> = Vec::with_capacity(view.len());
    cartesian(&view, &mut tuple, &mut |t| {
        if pairs.iter().all(|&(a, b)| t[a] != t[b]) {
            for (i, &v) in t.iter().enumerate() {
                keep[i].push(v);
            }
        }
    });

    let keep: Vec<Domain> = keep.into_iter().map(Domain::new).collect();
    if let Some(i) = keep.iter().position(Domain::is_empty) {
        return Ok(FilterOutcome::Infeasible(Infeasible::new(
            InfeasibleCause::EmptyDomain(c.vars()[i]),
        )));
    }
    let mut out = store.clone();
    c.store_view(&mut out, &keep);
    Ok(FilterOutcome::Fixpoint(out))
}

fn cartesian(view: &[Domain], tuple: &mut Vec<Value>, visit: &mut impl FnMut(&[Value])) {
    if tuple.len() == view.len() {
        visit(tuple);
        return;
    }
    for v in view[tuple.len()].iter() {
        tuple.push(v);
        cartesian(view, tuple, visit);
        tuple.pop();
    }
}

/// Does the constraint have any solution within the store? Same
/// definitional recursion as `enumerate_solutions`, stopping at the first
/// hit; `budget` caps visited search nodes instead of the raw candidate
/// space, so this stays usable where full enumeration would refuse.
pub fn has_solution(
    c: &AllDifferentConstraint,
    store: &DomainStore,
    budget: u64,
) -> Result<bool, OracleError> {
    let view = c.view_domains(store);
    let mut nodes = 0u64;
    let mut picked = Vec::with_capacity(view.len());
    first_rec(&view, &mut picked, &mut nodes, budget).ok_or(OracleError::BudgetExceeded {
        required: nodes as u128,
        budget,
    })
}

fn first_rec(view: &[Domain], picked: &mut Vec<Value>, nodes: &mut u64, budget: u64) -> Option<bool> {
    if picked.len() == view.len() {
        return Some(true);
    }
    for v in view[picked.len()].iter() {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        if picked.contains(&v) {
            continue;
        }
        picked.push(v);
        let found = first_rec(view, picked, nodes, budget)?;
        picked.pop();
        if found {
            return Some(true);
        }
    }
    Some(false)
}

/// Maximum number of variable nodes `enumerate_maximum_matchings` accepts.
pub const MATCHING_ENUM_LIMIT: usize = 8;

/// Every maximum matching of `g`, by recursion over variables (each may
/// stay free), keeping the matchings of maximum cardinality.
pub fn enumerate_maximum_matchings(g: &ValueGraph) -> Result<Vec<Matching>, OracleError> {
    if g.var_count() > MATCHING_ENUM_LIMIT {
        return Err(OracleError::SizeLimitExceeded {
            limit: MATCHING_ENUM_LIMIT,
            got: g.var_count(),
        });
    }
    let mut best: Vec<Vec<(VariableId, Value)>> = Vec::new();
    let mut best_size = 0usize;
    let edges = g.edges();
    let by_var: Vec<Vec<Value>> = g
        .vars()
        .iter()
        .map(|&x| {
            edges
                .iter()
                .filter(|&&(v, _)| v == x)
                .map(|&(_, val)| val)
                .collect()
        })
        .collect();

    let mut chosen: Vec<Option<Value>> = alloc::vec![None; g.var_count()];
    let mut used: Vec<Value> = Vec::new();
    matchings_rec(&by_var, 0, &mut chosen, &mut used, &mut |assignment| {
        let size = assignment.iter().filter(|v| v.is_some()).count();
        let edges: Vec<(VariableId, Value)> = assignment
            .iter()
            .enumerate()
            .filter_map(|(p, v)| v.map(|v| (g.vars()[p], v)))
            .collect();
        if size > best_size {
            best_size = size;
            best.clear();
        }
        if size == best_size {
            best.push(edges);
        }
    });

    Ok(best
        .into_iter()
        .map(|edges| Matching::from_edges(g, &edges))
        .collect())
}

fn matchings_rec(
    by_var: &[Vec<Value>],
    p: usize,
    chosen: &mut Vec<Option<Value>>,
    used: &mut Vec<Value>,
    visit: &mut impl FnMut(&[Option<Value>]),
) {
    if p == by_var.len() {
        visit(chosen);
        return;
    }
    // Leave variable p free.
    chosen[p] = None;
    matchings_rec(by_var, p + 1, chosen, used, visit);
    for &v in &by_var[p] {
        if used.contains(&v) {
            continue;
        }
        chosen[p] = Some(v);
        used.push(v);
        matchings_rec(by_var, p + 1, chosen, used, visit);
        used.pop();
    }
    chosen[p] = None;
}

/// Maximum variable count for the `2^n` subset scan.
pub const HALL_SCAN_LIMIT: usize = 12;

/// A subset `K` with `|K| > |∪ D_i|` if one exists, else `None`. Agrees
/// with feasibility: the constraint has a solution iff no such subset
/// exists.
pub fn hall_violation(
    c: &AllDifferentConstraint,
    store: &DomainStore,
) -> Result<Option<Vec<VariableId>>, OracleError> {
    let n = c.arity();
    if n > HALL_SCAN_LIMIT {
        return Err(OracleError::SizeLimitExceeded {
            limit: HALL_SCAN_LIMIT,
            got: n,
        });
    }
    let view = c.view_domains(store);
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut union: Vec<Value> = members
            .iter()
            .flat_map(|&i| view[i].iter())
            .collect();
        union.sort_unstable();
        union.dedup();
        if members.len() > union.len() {
            return Ok(Some(members.iter().map(|&i| c.vars()[i]).collect()));
        }
    }
    Ok(None)
}

/// Does `store` already satisfy the literal definition of `level` for
/// constraint `c`? (The closure changes nothing.)
pub fn is_consistent_at(
    c: &AllDifferentConstraint,
    store: &DomainStore,
    level: ConsistencyLevel,
) -> Result<bool, OracleError> {
    match oracle_filter(c, store, level)? {
        FilterOutcome::Fixpoint(s) => Ok(&s == store),
        FilterOutcome::Infeasible(_) => Ok(false),
    }
}

/// Counts solutions of a whole problem by plain backtracking: assign
/// variables in index order, reject as soon as two assigned views in one
/// constraint clash. No propagation anywhere — this is the reference the
/// solver's counts are compared against.
pub fn count_problem_solutions(p: &Problem, budget: u64) -> Result<u64, OracleError> {
    let space: u128 = p
        .domains
        .domains()
        .iter()
        .map(|d| (d.len().max(1)) as u128)
        .product();
    if space > budget as u128 {
        return Err(OracleError::BudgetExceeded {
            required: space,
            budget,
        });
    }
    let mut assignment: Vec<Option<Value>> = alloc::vec![None; p.var_count()];
    Ok(count_rec(p, 0, &mut assignment))
}

fn count_rec(p: &Problem, var: usize, assignment: &mut Vec<Option<Value>>) -> u64 {
    if var == p.var_count() {
        return 1;
    }
    let values: Vec<Value> = p.domains.domain(VariableId(var)).iter().collect();
    let mut total = 0;
    for v in values {
        assignment[var] = Some(v);
        if consistent_so_far(p, var, assignment) {
            total += count_rec(p, var + 1, assignment);
        }
        assignment[var] = None;
    }
    total
}

fn consistent_so_far(p: &Problem, var: usize, assignment: &[Option<Value>]) -> bool {
    for c in &p.constraints {
        for (i, &a) in c.vars().iter().enumerate() {
            if a.index() != var {
                continue;
            }
            let va = assignment[a.index()].expect("just assigned") + c.offset_of(i);
            for (j, &b) in c.vars().iter().enumerate() {
                if j == i {
                    continue;
                }
                if let Some(vb) = assignment[b.index()] {
                    if vb + c.offset_of(j) == va {
                        return false;
                    }
                }
            }
        }
    }
    true
}
