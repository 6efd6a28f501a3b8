//! Bound consistency via Hall intervals.
//!
//! An interval `I` is a Hall interval when exactly `|I|` variables have
//! their whole domain inside `I`; those variables use up all of `I`, so
//! no other variable may keep a bound inside it. Finding more than `|I|`
//! such variables proves infeasibility outright.
//!
//! Candidate intervals only need endpoints drawn from the set of domain
//! minima and the set of domain maxima: any Hall interval shrinks to such
//! endpoints without changing its member set, and a shrunken over-full
//! interval stays over-full.

use alloc::vec::Vec;

use crate::model::{
    AllDifferentConstraint, Domain, DomainStore, FilterOutcome, Infeasible, InfeasibleCause,
    Value, VariableId,
};

/// A Hall interval `[lo, hi]` together with the variables confined to it.
/// Values are in the constraint's view (offsets applied).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallInterval {
    pub lo: Value,
    pub hi: Value,
    pub members: Vec<VariableId>,
}

/// Witness that some interval holds more variables than values; doubles as
/// the infeasibility certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalViolation {
    pub lo: Value,
    pub hi: Value,
    pub members: Vec<VariableId>,
}

fn width(lo: Value, hi: Value) -> i128 {
    hi as i128 - lo as i128 + 1
}

/// `(lo, hi, member positions)` of one interval of interest.
type Found = (Value, Value, Vec<usize>);

/// Scans candidate intervals over the view domains. Positions index into
/// `view`; the caller maps them back to variables.
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

    let mut hall = Vec::new();
    for &lo in &lo_candidates {
        for &hi in &hi_candidates {
            if hi < lo {
                continue;
            }
            let members: Vec<usize> = (0..n)
                .filter(|&i| mins[i] >= lo && maxs[i] <= hi)
                .collect();
            let w = width(lo, hi);
            if (members.len() as i128) > w {
                return Err((lo, hi, members));
            }
            if (members.len() as i128) == w {
                hall.push((lo, hi, members));
            }
        }
    }
    Ok(hall)
}

/// All Hall intervals of the constraint under `store`, or the first
/// over-full interval found (in ascending `(lo, hi)` order).
pub fn find_hall_intervals(
    c: &AllDifferentConstraint,
    store: &DomainStore,
) -> Result<Vec<HallInterval>, IntervalViolation> {
    let view = c.view_domains(store);
    assert!(
        view.iter().all(|d| !d.is_empty()),
        "find_hall_intervals requires non-empty domains"
    );
    match scan(&view) {
        Ok(halls) => Ok(halls
            .into_iter()
            .map(|(lo, hi, members)| HallInterval {
                lo,
                hi,
                members: members.iter().map(|&i| c.vars()[i]).collect(),
            })
            .collect()),
        Err((lo, hi, members)) => Err(IntervalViolation {
            lo,
            hi,
            members: members.iter().map(|&i| c.vars()[i]).collect(),
        }),
    }
}

/// Bound-consistency filter: repeatedly finds Hall intervals and snaps the
/// bounds of outside variables out of them until stable. Only values that
/// are the current minimum or maximum of their domain are ever deleted, so
/// this module never creates interior holes.
pub fn bc_filter(c: &AllDifferentConstraint, store: &DomainStore) -> FilterOutcome {
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
                return FilterOutcome::Infeasible(Infeasible::new(
                    InfeasibleCause::OverfullInterval {
                        lo,
                        hi,
                        member_count: members.len(),
                    },
                ));
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
                while let Some(m) = dom.min() {
                    if m >= *lo && m <= *hi {
                        dom.remove(m);
                        changed = true;
                    } else {
                        break;
                    }
                }
                while let Some(m) = dom.max() {
                    if m >= *lo && m <= *hi {
                        dom.remove(m);
                        changed = true;
                    } else {
                        break;
                    }
                }
                if dom.is_empty() {
                    return FilterOutcome::Infeasible(Infeasible::new(
                        InfeasibleCause::EmptyDomain(c.vars()[i]),
                    ));
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
