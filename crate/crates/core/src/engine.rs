//! Multi-constraint propagation to a global fixpoint and a depth-first
//! solver parameterized by consistency level.
//!
//! Scheduling is a FIFO queue of constraint indices with deduplication:
//! when a filter shrinks a variable's domain, every other constraint on
//! that variable is re-queued. The single-constraint filters are monotone
//! and contracting, so the fixpoint is independent of queue order.
//!
//! Search is deliberately static: branch on the lowest-index unfixed
//! variable, try values in ascending order. That makes node counts
//! comparable across consistency levels and runs reproducible.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::time::Duration;

use crate::model::{
    AllDifferentConstraint, ConsistencyLevel, DomainStore, FilterOutcome, Infeasible,
    InfeasibleCause, Problem, Value, VariableId,
};
use crate::{bounds, decomp, range, regin};

/// Counters for one `solve` call.
///
/// `wall_time` stays zero here: this crate never reads a clock. Callers
/// that can (the CLI does) measure around the call and fill it in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Search-tree nodes visited (each node runs one propagation).
    pub nodes_explored: u64,
    /// Nodes whose propagation signalled infeasibility.
    pub failures: u64,
    /// Domain values deleted by propagation across the whole search.
    pub prunings: u64,
    pub wall_time: Duration,
}

/// What `solve` should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Stop at the first solution.
    First,
    /// Count every solution.
    CountAll,
}

/// Result of a `solve` call, shaped by the [`SolveMode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    First(Option<Vec<Value>>),
    Count(u64),
}

impl SolveResult {
    pub fn solution(&self) -> Option<&[Value]> {
        match self {
            SolveResult::First(Some(s)) => Some(s),
            _ => None,
        }
    }

    pub fn count(&self) -> Option<u64> {
        match self {
            SolveResult::Count(n) => Some(*n),
            SolveResult::First(_) => None,
        }
    }
}

fn filter_one(
    c: &AllDifferentConstraint,
    level: ConsistencyLevel,
    store: &DomainStore,
) -> FilterOutcome {
    match level {
        ConsistencyLevel::DecompAc => decomp::ac_filter(&decomp::decompose(c), store),
        ConsistencyLevel::Bound => bounds::bc_filter(c, store),
        ConsistencyLevel::Range => range::rc_filter(c, store),
        ConsistencyLevel::HyperArc => regin::gac_filter(c, store),
    }
}

/// Filters every constraint at `level`, re-queuing constraints whose
/// variables changed, until no filter changes the store.
///
/// The problem must be validated. An empty domain in the input store is
/// immediate infeasibility, even with no constraints.
pub fn propagate(p: &Problem, level: ConsistencyLevel, store: &DomainStore) -> FilterOutcome {
    debug_assert_eq!(p.var_count(), store.var_count());
    if let Some(v) = store.first_empty() {
        return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::EmptyDomain(v)));
    }

    let n = store.var_count();
    let mut watchers: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (ci, c) in p.constraints.iter().enumerate() {
        for &v in c.vars() {
            watchers[v.index()].push(ci);
        }
    }

    let mut current = store.clone();
    let mut queue: VecDeque<usize> = (0..p.constraints.len()).collect();
    let mut queued = alloc::vec![true; p.constraints.len()];

    while let Some(ci) = queue.pop_front() {
        queued[ci] = false;
        let next = match filter_one(&p.constraints[ci], level, &current) {
            FilterOutcome::Fixpoint(s) => s,
            FilterOutcome::Infeasible(inf) => {
                return FilterOutcome::Infeasible(inf.in_constraint(ci));
            }
        };
        for (v, var_watchers) in watchers.iter().enumerate() {
            if next.domain(VariableId(v)) != current.domain(VariableId(v)) {
                for &watcher in var_watchers {
                    // The filter just ran to its own fixpoint; only other
                    // constraints can react to the change.
                    if watcher != ci && !queued[watcher] {
                        queued[watcher] = true;
                        queue.push_back(watcher);
                    }
                }
            }
        }
        current = next;
    }
    FilterOutcome::Fixpoint(current)
}

/// Depth-first search with propagation at every node.
///
/// `First` returns one solution or `None`; `CountAll` returns the exact
/// number of solutions. The count does not depend on the level — stronger
/// filtering only shrinks the tree.
pub fn solve(p: &Problem, level: ConsistencyLevel, mode: SolveMode) -> (SolveResult, SearchStats) {
    let mut stats = SearchStats::default();
    let mut first: Option<Vec<Value>> = None;
    let mut count: u64 = 0;
    let store = p.domains.clone();
    dfs(p, level, mode, store, &mut stats, &mut first, &mut count);
    let result = match mode {
        SolveMode::First => SolveResult::First(first),
        SolveMode::CountAll => SolveResult::Count(count),
    };
    (result, stats)
}

/// Returns true when the search should stop (`First` mode, solution found).
fn dfs(
    p: &Problem,
    level: ConsistencyLevel,
    mode: SolveMode,
    store: DomainStore,
    stats: &mut SearchStats,
    first: &mut Option<Vec<Value>>,
    count: &mut u64,
) -> bool {
    stats.nodes_explored += 1;
    let before = store.total_size();
    let fixed = match propagate(p, level, &store) {
        FilterOutcome::Fixpoint(s) => s,
        FilterOutcome::Infeasible(_) => {
            stats.failures += 1;
            return false;
        }
    };
    stats.prunings += (before - fixed.total_size()) as u64;

    if fixed.all_singleton() {
        // Every level's fixpoint with all-singleton domains satisfies all
        // constraints: a clash would have emptied a domain.
        *count += 1;
        if matches!(mode, SolveMode::First) {
            *first = Some(
                (0..fixed.var_count())
                    .map(|v| fixed.domain(VariableId(v)).min().expect("singleton"))
                    .collect(),
            );
            return true;
        }
        return false;
    }

    let branch_var = (0..fixed.var_count())
        .map(VariableId)
        .find(|&v| !fixed.domain(v).is_singleton())
        .expect("non-singleton variable exists");
    let values: Vec<Value> = fixed.domain(branch_var).iter().collect();
    for v in values {
        let mut child = fixed.clone();
        *child.domain_mut(branch_var) = crate::model::Domain::new([v]);
        if dfs(p, level, mode, child, stats, first, count) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Domain;
    use crate::model::StoreOrdering;
    use alloc::vec;

    fn store(domains: &[&[Value]]) -> DomainStore {
        DomainStore::new(domains.iter().map(|d| Domain::new(d.iter().copied())).collect())
    }

    fn all_vars(n: usize) -> AllDifferentConstraint {
        AllDifferentConstraint::new((0..n).map(VariableId).collect())
    }

    /// Six speakers with slots (3..6), (3..4), (2..5), (2..4), (3..4), (1..6).
    fn speeches() -> Problem {
        Problem::new(
            store(&[
                &[3, 4, 5, 6],
                &[3, 4],
                &[2, 3, 4, 5],
                &[2, 3, 4],
                &[3, 4],
                &[1, 2, 3, 4, 5, 6],
            ]),
            vec![all_vars(6)],
        )
    }

    #[test]
    fn propagate_shrinks_speeches_at_gac() {
        let p = speeches();
        let outcome = propagate(&p, ConsistencyLevel::HyperArc, &p.domains);
        let out = outcome.store().unwrap();
        assert_eq!(
            crate::model::compare_stores(out, &p.domains).unwrap(),
            StoreOrdering::Smaller
        );
        // The instance collapses a long way: x4 = 2, x3 = 5, x1 = 6, x6 = 1.
        assert_eq!(out.domain(VariableId(0)).as_slice(), &[6]);
        assert_eq!(out.domain(VariableId(2)).as_slice(), &[5]);
        assert_eq!(out.domain(VariableId(3)).as_slice(), &[2]);
        assert_eq!(out.domain(VariableId(5)).as_slice(), &[1]);
        // Single constraint, so the fixpoint is the definitional closure.
        let reference =
            crate::oracle::oracle_filter(&p.constraints[0], &p.domains, ConsistencyLevel::HyperArc)
                .unwrap();
        assert_eq!(outcome, reference);
    }

    #[test]
    fn propagate_no_constraints_is_identity() {
        let p = Problem::new(store(&[&[1, 2], &[3]]), vec![]);
        let out = propagate(&p, ConsistencyLevel::Bound, &p.domains)
            .into_store()
            .unwrap();
        assert_eq!(out, p.domains);
    }

    #[test]
    fn propagate_empty_domain_is_infeasible_even_without_constraints() {
        let p = Problem::new(store(&[&[]]), vec![]);
        assert!(propagate(&p, ConsistencyLevel::Bound, &p.domains).is_infeasible());
    }

    #[test]
    fn propagate_range_fixpoint_on_holed_instance() {
        let p = Problem::new(store(&[&[1, 3], &[1, 3], &[1, 3]]), vec![all_vars(3)]);
        let out = propagate(&p, ConsistencyLevel::Range, &p.domains)
            .into_store()
            .unwrap();
        assert_eq!(out, p.domains);
    }

    #[test]
    fn propagate_crosses_constraints() {
        // Two overlapping pairs: fixing x0 ripples through both.
        let p = Problem::new(
            store(&[&[1], &[1, 2], &[2, 3]]),
            vec![
                AllDifferentConstraint::new(vec![VariableId(0), VariableId(1)]),
                AllDifferentConstraint::new(vec![VariableId(1), VariableId(2)]),
            ],
        );
        let out = propagate(&p, ConsistencyLevel::HyperArc, &p.domains)
            .into_store()
            .unwrap();
        assert_eq!(out.domain(VariableId(1)).as_slice(), &[2]);
        assert_eq!(out.domain(VariableId(2)).as_slice(), &[3]);
    }

    #[test]
    fn first_solution_of_speeches() {
        let p = speeches();
        for level in ConsistencyLevel::ALL {
            let (result, stats) = solve(&p, level, SolveMode::First);
            let solution = result.solution().expect("feasible").to_vec();
            assert!(crate::model::is_solution(&p.constraints[0], &solution).unwrap());
            assert_eq!(solution, vec![6, 3, 5, 2, 4, 1]);
            assert!(stats.nodes_explored >= 1);
        }
    }

    #[test]
    fn infeasible_instance_counts_zero_everywhere() {
        let p = Problem::new(store(&[&[1, 3], &[1, 3], &[1, 3]]), vec![all_vars(3)]);
        for level in ConsistencyLevel::ALL {
            let (result, _) = solve(&p, level, SolveMode::CountAll);
            assert_eq!(result.count(), Some(0));
            let (result, stats) = solve(&p, level, SolveMode::First);
            assert_eq!(result, SolveResult::First(None));
            assert!(stats.nodes_explored >= 1);
        }
    }

    #[test]
    fn count_is_level_independent() {
        let p = speeches();
        let counts: Vec<u64> = ConsistencyLevel::ALL
            .iter()
            .map(|&level| solve(&p, level, SolveMode::CountAll).0.count().unwrap())
            .collect();
        assert!(counts.iter().all(|&c| c == counts[0]));
        assert_eq!(counts[0], 2);
    }

    #[test]
    fn unconstrained_variables_are_enumerated() {
        let p = Problem::new(store(&[&[1, 2], &[5, 6, 7]]), vec![]);
        let (result, _) = solve(&p, ConsistencyLevel::HyperArc, SolveMode::CountAll);
        assert_eq!(result.count(), Some(6));
    }
}
