//! Core data model: values, domains, variables, constraints, problems and
//! the store ordering.

use alloc::vec::Vec;
use core::fmt;

/// A domain element. Interval widths are computed in `i128` so the full
/// `i64` range is usable without overflow.
pub type Value = i64;

/// Index of a variable within a [`Problem`]. Dense, zero-based, stable
/// across filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(pub usize);

impl VariableId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A finite set of integer values, kept sorted and duplicate-free.
///
/// Domains are explicit value sets rather than intervals: the range and
/// hyper-arc levels must represent holes. Bound-level filtering reads only
/// `min`/`max` but writes back by deleting values, so bounds snap to the
/// nearest surviving element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Domain {
    values: Vec<Value>,
}

impl Domain {
    /// Builds a domain from arbitrary values; sorts and deduplicates.
    pub fn new<I: IntoIterator<Item = Value>>(values: I) -> Self {
        let mut values: Vec<Value> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        Domain { values }
    }

    /// The inclusive range `lo..=hi`; empty when `lo > hi`.
    pub fn range(lo: Value, hi: Value) -> Self {
        Domain {
            values: (lo..=hi).collect(),
        }
    }

    pub fn empty() -> Self {
        Domain { values: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.values.len() == 1
    }

    pub fn min(&self) -> Option<Value> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<Value> {
        self.values.last().copied()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    /// Removes `v`; returns whether it was present.
    pub fn remove(&mut self, v: Value) -> bool {
        match self.values.binary_search(&v) {
            Ok(i) => {
                self.values.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(Value) -> bool) {
        self.values.retain(|&v| keep(v));
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.values.iter().copied()
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.values
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.values.iter().all(|&v| other.contains(v))
    }

    /// Copy of this domain with every value shifted by `offset`.
    /// Panics on `i64` overflow; views must stay representable.
    pub fn shifted(&self, offset: Value) -> Domain {
        Domain {
            values: self
                .values
                .iter()
                .map(|&v| v.checked_add(offset).expect("value + offset overflows"))
                .collect(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Per-variable domains, indexed by [`VariableId`].
///
/// Stores are ordered componentwise by set inclusion: `a ⪯ b` iff every
/// domain of `a` is a subset of the corresponding domain of `b`. A store
/// with an empty domain is the failed store and compares below everything
/// of the same shape.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DomainStore {
    domains: Vec<Domain>,
}

impl DomainStore {
    pub fn new(domains: Vec<Domain>) -> Self {
        DomainStore { domains }
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, var: VariableId) -> &Domain {
        &self.domains[var.0]
    }

    pub fn domain_mut(&mut self, var: VariableId) -> &mut Domain {
        &mut self.domains[var.0]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// First variable with an empty domain, if any.
    pub fn first_empty(&self) -> Option<VariableId> {
        self.domains
            .iter()
            .position(Domain::is_empty)
            .map(VariableId)
    }

    pub fn is_failed(&self) -> bool {
        self.first_empty().is_some()
    }

    /// Total number of values across all domains.
    pub fn total_size(&self) -> usize {
        self.domains.iter().map(Domain::len).sum()
    }

    pub fn all_singleton(&self) -> bool {
        self.domains.iter().all(Domain::is_singleton)
    }
}

/// Result of comparing two stores under the componentwise inclusion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreOrdering {
    Smaller,
    Equal,
    Larger,
    Incomparable,
}

/// Compares two stores of the same shape under `⪯`.
///
/// Failed stores are all identified with the bottom element: a store
/// containing an empty domain compares `Smaller` than every non-failed
/// store and `Equal` to every other failed store, regardless of what its
/// remaining domains hold. Non-failed stores compare componentwise.
pub fn compare_stores(a: &DomainStore, b: &DomainStore) -> Result<StoreOrdering, ModelError> {
    if a.var_count() != b.var_count() {
        return Err(ModelError::StoreShapeMismatch {
            left: a.var_count(),
            right: b.var_count(),
        });
    }
    match (a.is_failed(), b.is_failed()) {
        (true, true) => return Ok(StoreOrdering::Equal),
        (true, false) => return Ok(StoreOrdering::Smaller),
        (false, true) => return Ok(StoreOrdering::Larger),
        (false, false) => {}
    }
    let mut a_in_b = true;
    let mut b_in_a = true;
    for (da, db) in a.domains.iter().zip(&b.domains) {
        if a_in_b && !da.is_subset_of(db) {
            a_in_b = false;
        }
        if b_in_a && !db.is_subset_of(da) {
            b_in_a = false;
        }
        if !a_in_b && !b_in_a {
            return Ok(StoreOrdering::Incomparable);
        }
    }
    Ok(match (a_in_b, b_in_a) {
        (true, true) => StoreOrdering::Equal,
        (true, false) => StoreOrdering::Smaller,
        (false, true) => StoreOrdering::Larger,
        (false, false) => StoreOrdering::Incomparable,
    })
}

/// An `alldifferent` constraint over a list of variables, each viewed
/// through a constant offset: the constrained expressions are
/// `x_i + offset_i` and all of them must take pairwise distinct values.
///
/// Offsets are zero unless a model needs shifted views (the n-queens
/// diagonals are the canonical use). All filtering algorithms operate on
/// the shifted domains and map removals back, so a zero-offset constraint
/// behaves exactly as plain `alldifferent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllDifferentConstraint {
    vars: Vec<VariableId>,
    offsets: Vec<Value>,
}

impl AllDifferentConstraint {
    pub fn new(vars: Vec<VariableId>) -> Self {
        let offsets = alloc::vec![0; vars.len()];
        AllDifferentConstraint { vars, offsets }
    }

    /// Constraint over the views `x_i + offsets[i]`.
    ///
    /// Panics if the two lists differ in length; that is a construction
    /// bug, not a model error.
    pub fn with_offsets(vars: Vec<VariableId>, offsets: Vec<Value>) -> Self {
        assert_eq!(vars.len(), offsets.len(), "one offset per variable");
        AllDifferentConstraint { vars, offsets }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VariableId] {
        &self.vars
    }

    pub fn offsets(&self) -> &[Value] {
        &self.offsets
    }

    pub fn offset_of(&self, position: usize) -> Value {
        self.offsets[position]
    }

    /// Shifted copies of the constrained variables' domains, in constraint
    /// order. Filtering algorithms run on these and write back via
    /// [`AllDifferentConstraint::store_view`].
    pub fn view_domains(&self, store: &DomainStore) -> Vec<Domain> {
        self.vars
            .iter()
            .zip(&self.offsets)
            .map(|(&v, &o)| store.domain(v).shifted(o))
            .collect()
    }

    /// Writes filtered view domains back into `store`, undoing the shift.
    pub fn store_view(&self, store: &mut DomainStore, view: &[Domain]) {
        debug_assert_eq!(view.len(), self.vars.len());
        for ((&var, &off), dom) in self.vars.iter().zip(&self.offsets).zip(view) {
            *store.domain_mut(var) = dom.shifted(-off);
        }
    }
}

/// True iff the tuple satisfies the constraint: all viewed values pairwise
/// distinct. Membership in any domain is not checked.
pub fn is_solution(c: &AllDifferentConstraint, tuple: &[Value]) -> Result<bool, ModelError> {
    if tuple.len() != c.arity() {
        return Err(ModelError::ArityMismatch {
            expected: c.arity(),
            got: tuple.len(),
        });
    }
    let mut viewed: Vec<Value> = tuple
        .iter()
        .zip(c.offsets())
        .map(|(&t, &o)| t + o)
        .collect();
    viewed.sort_unstable();
    Ok(viewed.windows(2).all(|w| w[0] != w[1]))
}

/// A problem: a store of initial domains plus `alldifferent` constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub domains: DomainStore,
    pub constraints: Vec<AllDifferentConstraint>,
}

impl Problem {
    pub fn new(domains: DomainStore, constraints: Vec<AllDifferentConstraint>) -> Self {
        Problem {
            domains,
            constraints,
        }
    }

    pub fn var_count(&self) -> usize {
        self.domains.var_count()
    }
}

/// Model-level validation errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// A variable occurs twice in one constraint; `alldifferent` over a
    /// repeated variable (same offset) is trivially infeasible, so this is
    /// rejected up front as a modelling mistake.
    DuplicateVariable {
        constraint: usize,
        var: VariableId,
    },
    /// A constraint references a variable the problem does not have.
    DanglingVariable {
        constraint: usize,
        var: VariableId,
    },
    /// A constraint with no variables.
    EmptyConstraint { constraint: usize },
    ArityMismatch { expected: usize, got: usize },
    StoreShapeMismatch { left: usize, right: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DuplicateVariable { constraint, var } => {
                write!(f, "constraint {constraint}: duplicate variable {var}")
            }
            ModelError::DanglingVariable { constraint, var } => {
                write!(f, "constraint {constraint}: unknown variable {var}")
            }
            ModelError::EmptyConstraint { constraint } => {
                write!(f, "constraint {constraint}: no variables")
            }
            ModelError::ArityMismatch { expected, got } => {
                write!(f, "tuple length {got} does not match arity {expected}")
            }
            ModelError::StoreShapeMismatch { left, right } => {
                write!(f, "stores have {left} and {right} variables")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// Validates a problem, reporting every violation.
///
/// Empty domains are legal input; they surface as immediate infeasibility
/// during filtering, not as model errors.
pub fn validate(p: &Problem) -> Result<(), Vec<ModelError>> {
    let mut errors = Vec::new();
    let n = p.var_count();
    for (ci, c) in p.constraints.iter().enumerate() {
        if c.arity() == 0 {
            errors.push(ModelError::EmptyConstraint { constraint: ci });
            continue;
        }
        let mut seen: Vec<VariableId> = Vec::with_capacity(c.arity());
        for &v in c.vars() {
            if v.0 >= n {
                errors.push(ModelError::DanglingVariable {
                    constraint: ci,
                    var: v,
                });
            } else if seen.contains(&v) {
                errors.push(ModelError::DuplicateVariable {
                    constraint: ci,
                    var: v,
                });
            } else {
                seen.push(v);
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Which local consistency a filter establishes.
///
/// `HyperArc`, `Range` and `Bound` form a chain of decreasing strength;
/// `DecompAc` (arc consistency on the binary decomposition) sits below
/// `HyperArc` but is incomparable with `Bound` and `Range`: it can prune
/// interior values the interval-based levels keep, and vice versa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConsistencyLevel {
    DecompAc,
    Bound,
    Range,
    HyperArc,
}

impl ConsistencyLevel {
    pub const ALL: [ConsistencyLevel; 4] = [
        ConsistencyLevel::DecompAc,
        ConsistencyLevel::Bound,
        ConsistencyLevel::Range,
        ConsistencyLevel::HyperArc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConsistencyLevel::DecompAc => "decomp",
            ConsistencyLevel::Bound => "bound",
            ConsistencyLevel::Range => "range",
            ConsistencyLevel::HyperArc => "gac",
        }
    }
}

impl fmt::Display for ConsistencyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a filter declared the store infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfeasibleCause {
    /// A domain became (or already was) empty.
    EmptyDomain(VariableId),
    /// More variables confined to an interval than it has values
    /// (`|K_I| > |I|`).
    OverfullInterval {
        lo: Value,
        hi: Value,
        member_count: usize,
    },
    /// More variables than values in the span of their domain union
    /// (`|K| > |I_K|`); the range definition empties every member.
    OverfullSet {
        lo: Value,
        hi: Value,
        member_count: usize,
    },
    /// The value graph has no matching covering all variables.
    MatchingDeficit { matched: usize, vars: usize },
}

impl fmt::Display for InfeasibleCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibleCause::EmptyDomain(v) => write!(f, "domain of {v} is empty"),
            InfeasibleCause::OverfullInterval {
                lo,
                hi,
                member_count,
            } => write!(
                f,
                "{member_count} variables confined to interval [{lo},{hi}]"
            ),
            InfeasibleCause::OverfullSet {
                lo,
                hi,
                member_count,
            } => write!(
                f,
                "{member_count} variables share a union spanning [{lo},{hi}]"
            ),
            InfeasibleCause::MatchingDeficit { matched, vars } => {
                write!(f, "maximum matching covers {matched} of {vars} variables")
            }
        }
    }
}

/// Infeasibility diagnostic: which constraint failed (filled in by the
/// engine; single-constraint filters leave it `None`) and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible {
    pub constraint: Option<usize>,
    pub cause: InfeasibleCause,
}

impl Infeasible {
    pub fn new(cause: InfeasibleCause) -> Self {
        Infeasible {
            constraint: None,
            cause,
        }
    }

    pub fn in_constraint(mut self, index: usize) -> Self {
        self.constraint = Some(index);
        self
    }
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constraint {
            Some(c) => write!(f, "constraint {c}: {}", self.cause),
            None => self.cause.fmt(f),
        }
    }
}

/// Outcome of a filtering pass: a fixpoint store with no empty domain, or
/// an infeasibility signal (the failed store).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterOutcome {
    Fixpoint(DomainStore),
    Infeasible(Infeasible),
}

impl FilterOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, FilterOutcome::Infeasible(_))
    }

    pub fn store(&self) -> Option<&DomainStore> {
        match self {
            FilterOutcome::Fixpoint(s) => Some(s),
            FilterOutcome::Infeasible(_) => None,
        }
    }

    pub fn into_store(self) -> Option<DomainStore> {
        match self {
            FilterOutcome::Fixpoint(s) => Some(s),
            FilterOutcome::Infeasible(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn store(domains: &[&[Value]]) -> DomainStore {
        DomainStore::new(domains.iter().map(|d| Domain::new(d.iter().copied())).collect())
    }

    #[test]
    fn domain_is_sorted_and_deduplicated() {
        let d = Domain::new(vec![3, 1, 3, 2]);
        assert_eq!(d.as_slice(), &[1, 2, 3]);
        assert_eq!(d.min(), Some(1));
        assert_eq!(d.max(), Some(3));
        assert!(d.contains(2));
        assert!(!d.contains(4));
    }

    #[test]
    fn domain_remove_snaps_bounds() {
        let mut d = Domain::range(1, 3);
        assert!(d.remove(1));
        assert_eq!(d.min(), Some(2));
        assert!(!d.remove(1));
    }

    #[test]
    fn compare_equal_stores() {
        let a = store(&[&[1, 3], &[2]]);
        let b = store(&[&[1, 3], &[2]]);
        assert_eq!(compare_stores(&a, &b).unwrap(), StoreOrdering::Equal);
    }

    #[test]
    fn compare_smaller_store() {
        // Third domain shrank from {1,2,3} to {1,3}, everything else equal.
        let a = store(&[&[1, 3], &[2], &[1, 3]]);
        let b = store(&[&[1, 3], &[2], &[1, 2, 3]]);
        assert_eq!(compare_stores(&a, &b).unwrap(), StoreOrdering::Smaller);
        assert_eq!(compare_stores(&b, &a).unwrap(), StoreOrdering::Larger);
    }

    #[test]
    fn compare_crosswise_subsets_incomparable() {
        let a = store(&[&[1], &[1, 2]]);
        let b = store(&[&[1, 2], &[2]]);
        assert_eq!(compare_stores(&a, &b).unwrap(), StoreOrdering::Incomparable);
    }

    #[test]
    fn compare_rejects_shape_mismatch() {
        let a = store(&[&[1]]);
        let b = store(&[&[1], &[2]]);
        assert!(matches!(
            compare_stores(&a, &b),
            Err(ModelError::StoreShapeMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn failed_store_is_smallest() {
        let failed = store(&[&[], &[2]]);
        let other = store(&[&[1, 2], &[2, 3]]);
        assert_eq!(compare_stores(&failed, &other).unwrap(), StoreOrdering::Smaller);
        // The convention overrides componentwise comparison: {9} is no
        // subset of {2,3}, but a failed store is still the bottom.
        let failed_crosswise = store(&[&[], &[9]]);
        assert_eq!(
            compare_stores(&failed_crosswise, &other).unwrap(),
            StoreOrdering::Smaller
        );
        assert_eq!(
            compare_stores(&other, &failed_crosswise).unwrap(),
            StoreOrdering::Larger
        );
        // All failed stores are the same bottom element.
        assert_eq!(
            compare_stores(&failed, &failed_crosswise).unwrap(),
            StoreOrdering::Equal
        );
    }

    #[test]
    fn solution_check_pairwise_distinct() {
        let c = AllDifferentConstraint::new((0..6).map(VariableId).collect());
        assert!(is_solution(&c, &[6, 3, 5, 2, 4, 1]).unwrap());
        let pair = AllDifferentConstraint::new(vec![VariableId(0), VariableId(1)]);
        assert!(!is_solution(&pair, &[1, 1]).unwrap());
        let single = AllDifferentConstraint::new(vec![VariableId(0)]);
        assert!(is_solution(&single, &[5]).unwrap());
    }

    #[test]
    fn solution_check_applies_offsets() {
        let c = AllDifferentConstraint::with_offsets(
            vec![VariableId(0), VariableId(1)],
            vec![0, 1],
        );
        // Views 2+0 and 1+1 collide even though the raw values differ.
        assert!(!is_solution(&c, &[2, 1]).unwrap());
        assert!(is_solution(&c, &[1, 1]).unwrap());
    }

    #[test]
    fn solution_check_rejects_arity_mismatch() {
        let c = AllDifferentConstraint::new(vec![VariableId(0), VariableId(1)]);
        assert!(matches!(
            is_solution(&c, &[1]),
            Err(ModelError::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn validate_rejects_duplicate_variable() {
        let p = Problem::new(
            store(&[&[1, 2]]),
            vec![AllDifferentConstraint::new(vec![VariableId(0), VariableId(0)])],
        );
        let errors = validate(&p).unwrap_err();
        assert_eq!(
            errors,
            vec![ModelError::DuplicateVariable {
                constraint: 0,
                var: VariableId(0)
            }]
        );
    }

    #[test]
    fn validate_rejects_dangling_variable() {
        let p = Problem::new(
            store(&[&[1], &[2]]),
            vec![AllDifferentConstraint::new(vec![VariableId(0), VariableId(8)])],
        );
        let errors = validate(&p).unwrap_err();
        assert_eq!(
            errors,
            vec![ModelError::DanglingVariable {
                constraint: 0,
                var: VariableId(8)
            }]
        );
    }

    #[test]
    fn validate_rejects_empty_constraint() {
        let p = Problem::new(store(&[&[1]]), vec![AllDifferentConstraint::new(vec![])]);
        assert!(validate(&p).is_err());
    }

    #[test]
    fn validate_accepts_empty_domains() {
        // Empty domains are reported by filtering, not validation.
        let p = Problem::new(
            store(&[&[], &[1]]),
            vec![AllDifferentConstraint::new(vec![VariableId(0), VariableId(1)])],
        );
        assert!(validate(&p).is_ok());
    }

    #[test]
    fn view_domains_round_trip() {
        let c = AllDifferentConstraint::with_offsets(
            vec![VariableId(0), VariableId(1)],
            vec![0, 2],
        );
        let s = store(&[&[1, 2], &[3, 4]]);
        let view = c.view_domains(&s);
        assert_eq!(view[0].as_slice(), &[1, 2]);
        assert_eq!(view[1].as_slice(), &[5, 6]);
        let mut out = s.clone();
        c.store_view(&mut out, &view);
        assert_eq!(out, s);
    }
}
