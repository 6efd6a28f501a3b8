//! Decomposition of `alldifferent` into binary disequalities and arc
//! consistency on them.
//!
//! For disequalities the singleton rule is complete: a value `d` loses its
//! support in `x_a ≠ x_b` exactly when the other domain is `{d}`. The
//! filter therefore propagates from singleton domains only, repeating
//! until nothing changes. This prunes strictly less than the hyper-arc
//! filter on the original constraint: only two variables are compared at
//! a time.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::model::{
    AllDifferentConstraint, DomainStore, FilterOutcome, Infeasible, InfeasibleCause, Value,
    VariableId,
};

/// A binary disequality between two variable views:
/// `x_a + shift ≠ x_b`, stored canonically with `a < b`.
///
/// `shift` is the relative offset `offset_b − offset_a` of the originating
/// constraint views; it is zero for plain `alldifferent`. In variable
/// terms the constraint reads `x_a ≠ x_b + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Disequality {
    pub a: VariableId,
    pub b: VariableId,
    pub shift: Value,
}

impl Disequality {
    /// Canonical disequality `x_a ≠ x_b + shift` with `a < b`.
    pub fn new(a: VariableId, b: VariableId, shift: Value) -> Self {
        assert_ne!(a, b, "disequality needs two distinct variables");
        if a < b {
            Disequality { a, b, shift }
        } else {
            Disequality {
                a: b,
                b: a,
                shift: -shift,
            }
        }
    }
}

/// Rewrites the constraint as its `½(n²−n)` pairwise disequalities, in
/// lexicographic pair order.
pub fn decompose(c: &AllDifferentConstraint) -> Vec<Disequality> {
    let vars = c.vars();
    let offs = c.offsets();
    let n = vars.len();
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            // x_i + o_i ≠ x_j + o_j  ⇔  x_i ≠ x_j + (o_j − o_i)
            out.push(Disequality::new(vars[i], vars[j], offs[j] - offs[i]));
        }
    }
    out
}

/// Arc consistency on a set of disequalities: fixpoint of the singleton
/// rule. Returns the filtered store, or `Infeasible` naming the variable
/// whose domain emptied.
pub fn ac_filter(diseqs: &[Disequality], store: &DomainStore) -> FilterOutcome {
    let mut store = store.clone();
    if let Some(v) = store.first_empty() {
        return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::EmptyDomain(v)));
    }

    // Adjacency: for each variable, the partners it must differ from and
    // the shift to apply to the partner's fixed value.
    let n = store.var_count();
    let mut partners: Vec<Vec<(VariableId, Value)>> = alloc::vec![Vec::new(); n];
    for d in diseqs {
        // If x_a is fixed to v, then x_b ≠ v − shift; if x_b is fixed to
        // w, then x_a ≠ w + shift.
        partners[d.a.0].push((d.b, -d.shift));
        partners[d.b.0].push((d.a, d.shift));
    }

    let mut queue: VecDeque<VariableId> = (0..n)
        .map(VariableId)
        .filter(|&v| store.domain(v).is_singleton() && !partners[v.0].is_empty())
        .collect();
    let mut queued = alloc::vec![false; n];
    for &v in &queue {
        queued[v.index()] = true;
    }

    while let Some(x) = queue.pop_front() {
        queued[x.0] = false;
        let fixed = match store.domain(x).min() {
            Some(v) if store.domain(x).is_singleton() => v,
            _ => continue,
        };
        for &(y, shift) in &partners[x.0] {
            let forbidden = fixed + shift;
            let dom = store.domain_mut(y);
            if dom.remove(forbidden) {
                if dom.is_empty() {
                    return FilterOutcome::Infeasible(Infeasible::new(
                        InfeasibleCause::EmptyDomain(y),
                    ));
                }
                if dom.is_singleton() && !queued[y.0] {
                    queued[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    FilterOutcome::Fixpoint(store)
}
