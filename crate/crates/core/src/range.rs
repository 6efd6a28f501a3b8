//! Range consistency via Hall sets.
//!
//! A set of variables `K` is a Hall set when `|K|` equals the width of
//! `I_K = [min D_K, max D_K]`, the tightest interval covering the union of
//! their domains. The members need all of `I_K` between them, so every
//! value of `I_K` (bounds *and* interior) is deleted from outside domains.
//!
//! Discovery is interval-driven: enumerating subsets directly is
//! exponential, but every Hall set is recovered by scanning candidate
//! intervals with endpoints at domain minima and maxima, collecting the
//! variables whose domains fit inside, and tightening the interval to
//! their union's span. When the tightened interval holds more variables
//! than values, the range definition strips every member's every value,
//! which is an infeasibility proof rather than a pruning.

use alloc::vec::Vec;

use crate::model::{
    AllDifferentConstraint, Domain, DomainStore, FilterOutcome, Infeasible, InfeasibleCause,
    Value, VariableId,
};

/// A Hall set: members plus the bounds of `I_K` (in the constraint view).
/// `I_K` itself need not be a Hall interval; outside domains may sit
/// inside it, which is exactly what the filter then prunes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallSet {
    pub members: Vec<VariableId>,
    pub lo: Value,
    pub hi: Value,
}

/// A variable set whose domain union spans fewer values than the set has
/// members; pigeonhole-infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetViolation {
    pub members: Vec<VariableId>,
    pub lo: Value,
    pub hi: Value,
}

fn width(lo: Value, hi: Value) -> i128 {
    hi as i128 - lo as i128 + 1
}

/// `(lo, hi, member positions)` of one tightened interval of interest.
type Found = (Value, Value, Vec<usize>);

/// One scan over candidate intervals; positions index into `view`.
/// `Err` carries an over-full set (`|K| > |I_K|`).
fn scan(view: &[Domain]) -> Result<Vec<Found>, Found> {
    let n = view.len();
    let mins: Vec<Value> = view.iter().map(|d| d.min().expect("non-empty")).collect();
    let maxs: Vec<Value> = view.iter().map(|d| d.max().expect("non-empty")).collect();

    let mut lo_candidates = mins.clone();
    lo_candidates.sort_unstable();
    lo_candidates.dedup();
    let mut hi_candidates = maxs.clone();
    hi_candidates.sort_unstable();
    hi_candidates.dedup();

    let mut halls: Vec<(Value, Value, Vec<usize>)> = Vec::new();
    for &a in &lo_candidates {
        for &b in &hi_candidates {
            if b < a {
                continue;
            }
            let members: Vec<usize> = (0..n)
                .filter(|&i| mins[i] >= a && maxs[i] <= b)
                .collect();
            if members.is_empty() {
                continue;
            }
            // Tighten to the span of the members' union.
            let lo = members.iter().map(|&i| mins[i]).min().unwrap();
            let hi = members.iter().map(|&i| maxs[i]).max().unwrap();
            let w = width(lo, hi);
            if (members.len() as i128) > w {
                return Err((lo, hi, members));
            }
            if (members.len() as i128) == w && !halls.iter().any(|h| h.0 == lo && h.1 == hi) {
                halls.push((lo, hi, members));
            }
        }
    }
    Ok(halls)
}

/// All Hall sets discoverable in `store` (one per distinct `I_K`), or an
/// over-full set witnessing infeasibility.
pub fn find_hall_sets(
    c: &AllDifferentConstraint,
    store: &DomainStore,
) -> Result<Vec<HallSet>, SetViolation> {
    let view = c.view_domains(store);
    assert!(
        view.iter().all(|d| !d.is_empty()),
        "find_hall_sets requires non-empty domains"
    );
    let names = |members: &[usize]| members.iter().map(|&i| c.vars()[i]).collect();
    match scan(&view) {
        Ok(halls) => Ok(halls
            .into_iter()
            .map(|(lo, hi, members)| HallSet {
                lo,
                hi,
                members: names(&members),
            })
            .collect()),
        Err((lo, hi, members)) => Err(SetViolation {
            lo,
            hi,
            members: names(&members),
        }),
    }
}

/// Range-consistency filter: deletes every value of `I_K` from every
/// domain outside a Hall set `K`, iterating to a fixpoint.
///
/// An over-full set is reported as infeasible: by the range definition no
/// member value has a support, so all member domains empty at once. Note
/// this still certifies less than hyper-arc consistency: three variables
/// over `{1,3}` have no over-full set (the span `[1,3]` counts the hole)
/// and pass through unchanged.
pub fn rc_filter(c: &AllDifferentConstraint, store: &DomainStore) -> FilterOutcome {
    let mut out = store.clone();
    let mut view = c.view_domains(&out);
    if let Some(i) = view.iter().position(Domain::is_empty) {
        return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::EmptyDomain(
            c.vars()[i],
        )));
    }

    loop {
        let halls = match scan(&view) {
            Ok(h) => h,
            Err((lo, hi, members)) => {
                return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::OverfullSet {
                    lo,
                    hi,
                    member_count: members.len(),
                }));
            }
        };

        let mut changed = false;
        for (lo, hi, members) in &halls {
            let mut is_member = alloc::vec![false; view.len()];
            for &m in members {
                is_member[m] = true;
            }
            for (i, dom) in view.iter_mut().enumerate() {
                if is_member[i] {
                    continue;
                }
                let before = dom.len();
                dom.retain(|v| v < *lo || v > *hi);
                if dom.len() != before {
                    changed = true;
                    if dom.is_empty() {
                        return FilterOutcome::Infeasible(Infeasible::new(
                            InfeasibleCause::EmptyDomain(c.vars()[i]),
                        ));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    c.store_view(&mut out, &view);
    FilterOutcome::Fixpoint(out)
}
