//! Acceptance suite. Each test is one criterion and prints a `[PASS]`
//! line with the measured evidence (visible with `--nocapture`); a failed
//! assertion is the corresponding `[FAIL]`.
//!
//! Run with:
//!
//! ```text
//! cargo test -p alldiff-cli --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alldiff_core::model::{
    compare_stores, AllDifferentConstraint, ConsistencyLevel, Domain, DomainStore, FilterOutcome,
    Problem, StoreOrdering, VariableId,
};
use alldiff_core::{bounds, decomp, engine, oracle, range, regin};
use alldiff_cli::generate::{gen_benchmark, GenParams, GeneratorKind};
use alldiff_cli::NamedProblem;

fn store(domains: &[&[i64]]) -> DomainStore {
    DomainStore::new(domains.iter().map(|d| Domain::new(d.iter().copied())).collect())
}

fn all_vars(n: usize) -> AllDifferentConstraint {
    AllDifferentConstraint::new((0..n).map(VariableId).collect())
}

fn filter_at(c: &AllDifferentConstraint, s: &DomainStore, level: ConsistencyLevel) -> FilterOutcome {
    match level {
        ConsistencyLevel::DecompAc => decomp::ac_filter(&decomp::decompose(c), s),
        ConsistencyLevel::Bound => bounds::bc_filter(c, s),
        ConsistencyLevel::Range => range::rc_filter(c, s),
        ConsistencyLevel::HyperArc => regin::gac_filter(c, s),
    }
}

/// `a ⪯ b` with infeasible outcomes as the bottom element.
fn outcome_leq(a: &FilterOutcome, b: &FilterOutcome) -> bool {
    match (a, b) {
        (FilterOutcome::Infeasible(_), _) => true,
        (FilterOutcome::Fixpoint(_), FilterOutcome::Infeasible(_)) => false,
        (FilterOutcome::Fixpoint(sa), FilterOutcome::Fixpoint(sb)) => matches!(
            compare_stores(sa, sb).unwrap(),
            StoreOrdering::Smaller | StoreOrdering::Equal
        ),
    }
}

fn same_outcome(a: &FilterOutcome, b: &FilterOutcome) -> bool {
    match (a, b) {
        (FilterOutcome::Fixpoint(sa), FilterOutcome::Fixpoint(sb)) => sa == sb,
        (FilterOutcome::Infeasible(_), FilterOutcome::Infeasible(_)) => true,
        _ => false,
    }
}

fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_val: i64) -> NamedProblem {
    let params = GenParams {
        n: rng.gen_range(1..=max_n),
        lo: 1,
        hi: rng.gen_range(2..=max_val),
        density: rng.gen_range(0.2..=0.95),
        seed: rng.gen(),
    };
    gen_benchmark(GeneratorKind::Random, params).expect("valid params")
}

/// Filtered slots must come out exactly as {5,6}, {3,4}, {2,5}, {3,4};
/// the filter itself must take under a millisecond.
#[test]
fn acceptance_01_revised_speeches_gac_exact() {
    let np = gen_benchmark(GeneratorKind::RevisedSpeeches, GenParams::default()).unwrap();
    let c = &np.problem.constraints[0];

    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..10 {
        let start = Instant::now();
        let result = regin::gac_filter(c, &np.problem.domains);
        best = best.min(start.elapsed());
        out = Some(result);
    }
    let filtered = out.unwrap().into_store().expect("feasible");
    let expected: Vec<&[i64]> = vec![&[5, 6], &[3, 4], &[2, 5], &[3, 4]];
    for (i, want) in expected.iter().enumerate() {
        assert_eq!(filtered.domain(VariableId(i)).as_slice(), *want);
    }
    assert!(best < Duration::from_millis(1), "filter took {best:?}");
    println!(
        "[PASS] revised-speeches GAC: domains {{5,6}} {{3,4}} {{2,5}} {{3,4}}, {:.1} µs",
        best.as_secs_f64() * 1e6
    );
}

/// The two three-variable holed instances separate the levels exactly:
/// bound changes nothing on P, range and hyper-arc prune x3 to {1,3};
/// on P' (all domains {1,3}) range is blind and hyper-arc refutes.
#[test]
fn acceptance_02_consistency_matrix_on_holed_instances() {
    let c = all_vars(3);
    let p = store(&[&[1, 3], &[2], &[1, 2, 3]]);
    let p_prime = store(&[&[1, 3], &[1, 3], &[1, 3]]);

    let bound_p = bounds::bc_filter(&c, &p).into_store().unwrap();
    assert_eq!(bound_p, p);

    let range_p = range::rc_filter(&c, &p).into_store().unwrap();
    assert_eq!(range_p.domain(VariableId(2)).as_slice(), &[1, 3]);
    assert_eq!(range_p.domain(VariableId(0)).as_slice(), &[1, 3]);
    assert_eq!(range_p.domain(VariableId(1)).as_slice(), &[2]);

    let gac_p = regin::gac_filter(&c, &p).into_store().unwrap();
    assert_eq!(gac_p, range_p);

    let range_p_prime = range::rc_filter(&c, &p_prime).into_store().unwrap();
    assert_eq!(range_p_prime, p_prime);

    assert!(regin::gac_filter(&c, &p_prime).is_infeasible());
    println!("[PASS] consistency matrix: bound blind, range prunes x3, gac refutes the holed triple");
}

/// Two variables confined to {1,2} force 2 out of x3; the result must
/// satisfy the literal bound-consistency definition.
#[test]
fn acceptance_03_bound_filter_example() {
    let c = all_vars(3);
    let s = store(&[&[1, 2], &[1, 2], &[2, 3]]);
    let out = bounds::bc_filter(&c, &s).into_store().unwrap();
    assert_eq!(out.domain(VariableId(0)).as_slice(), &[1, 2]);
    assert_eq!(out.domain(VariableId(1)).as_slice(), &[1, 2]);
    assert_eq!(out.domain(VariableId(2)).as_slice(), &[3]);
    assert!(oracle::is_consistent_at(&c, &out, ConsistencyLevel::Bound).unwrap());
    println!("[PASS] bound filter: x3 = {{3}}, output satisfies the definitional predicate");
}

/// x1..x_{n-1} ∈ {1..n-1}, x_n ∈ {1..n}: the decomposition sees no
/// singleton and keeps everything; hyper-arc consistency pins x_n = n.
#[test]
fn acceptance_04_chain_family_decomp_vs_gac() {
    for n in 3..=8usize {
        let mut domains: Vec<Domain> = (0..n - 1)
            .map(|_| Domain::range(1, n as i64 - 1))
            .collect();
        domains.push(Domain::range(1, n as i64));
        let s = DomainStore::new(domains);
        let c = all_vars(n);

        let dec = decomp::ac_filter(&decomp::decompose(&c), &s)
            .into_store()
            .expect("feasible");
        assert_eq!(dec, s, "decomposition must not prune at n={n}");

        let gac = regin::gac_filter(&c, &s).into_store().expect("feasible");
        assert_eq!(
            gac.domain(VariableId(n - 1)).as_slice(),
            &[n as i64],
            "gac must pin the last variable at n={n}"
        );
        for i in 0..n - 1 {
            assert_eq!(gac.domain(VariableId(i)), s.domain(VariableId(i)));
        }
    }
    println!("[PASS] chain family n=3..8: decomposition inert, gac pins x_n = n");
}

/// On 1000 seeded random instances the filter strengths are totally
/// ordered: gac ⪯ range ⪯ bound, and gac ⪯ decomposition.
#[test]
fn acceptance_05_hierarchy_on_random_instances() {
    let budget = Duration::from_secs(30);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x05);
    let instances = 1000;
    for i in 0..instances {
        let np = random_instance(&mut rng, 8, 10);
        let c = &np.problem.constraints[0];
        let s = &np.problem.domains;
        let gac = filter_at(c, s, ConsistencyLevel::HyperArc);
        let rng_out = filter_at(c, s, ConsistencyLevel::Range);
        let bnd = filter_at(c, s, ConsistencyLevel::Bound);
        let dec = filter_at(c, s, ConsistencyLevel::DecompAc);
        assert!(outcome_leq(&gac, &rng_out), "instance {i}: gac ⪯̸ range");
        assert!(outcome_leq(&rng_out, &bnd), "instance {i}: range ⪯̸ bound");
        assert!(outcome_leq(&gac, &dec), "instance {i}: gac ⪯̸ decomp");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < budget, "hierarchy suite took {elapsed:?}");
    println!(
        "[PASS] hierarchy: {instances} instances, zero violations, {:.2} s",
        elapsed.as_secs_f64()
    );
}

/// On 500 seeded random instances every production filter equals its
/// definitional closure, and the simultaneous-disequality closure equals
/// the hyper-arc result.
#[test]
fn acceptance_06_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x06);
    let instances = 500;
    for i in 0..instances {
        let np = random_instance(&mut rng, 6, 8);
        let c = &np.problem.constraints[0];
        let s = &np.problem.domains;
        for level in ConsistencyLevel::ALL {
            let produced = filter_at(c, s, level);
            let reference = oracle::oracle_filter(c, s, level).unwrap();
            assert!(
                same_outcome(&produced, &reference),
                "instance {i}: {level} disagrees with its oracle\nproduced: {produced:?}\noracle: {reference:?}"
            );
        }
        let simultaneous = oracle::simultaneous_diseq_closure(c, s).unwrap();
        let gac = filter_at(c, s, ConsistencyLevel::HyperArc);
        assert!(
            same_outcome(&simultaneous, &gac),
            "instance {i}: simultaneous-disequality closure differs from gac"
        );
    }
    println!("[PASS] oracle equivalence: {instances} instances × 4 levels + simultaneous closure, zero mismatches");
}

/// On 200 random value graphs with a variable-covering matching, the
/// marked removable edges are exactly the edges missing from every
/// enumerated maximum matching.
#[test]
fn acceptance_07_removable_edges_vs_matching_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);
    let target = 200;
    let mut covering_checked = 0;
    let mut graphs = 0;
    while covering_checked < target {
        graphs += 1;
        let np = random_instance(&mut rng, 6, 8);
        let c = &np.problem.constraints[0];
        let g = regin::build_value_graph(c, &np.problem.domains);
        let m = regin::maximum_matching(&g);
        let all_max = oracle::enumerate_maximum_matchings(&g).unwrap();
        let max_size = all_max.iter().map(|mm| mm.size()).max().unwrap_or(0);
        assert_eq!(m.size(), max_size, "matcher is not maximum");
        if !m.covers_all_vars() {
            continue;
        }
        covering_checked += 1;

        let mut kept: Vec<(VariableId, i64)> = all_max
            .iter()
            .flat_map(|mm| mm.edges(&g).collect::<Vec<_>>())
            .collect();
        kept.sort_unstable();
        kept.dedup();
        let mut expected_removable: Vec<(VariableId, i64)> = g
            .edges()
            .into_iter()
            .filter(|e| !kept.contains(e))
            .collect();
        expected_removable.sort_unstable();

        let mut marked = regin::mark_removable_edges(&g, &m).unwrap();
        marked.sort_unstable();
        assert_eq!(
            marked, expected_removable,
            "removable edges disagree with matching enumeration"
        );
    }
    println!(
        "[PASS] removable edges: {covering_checked} covering graphs (of {graphs} sampled), zero mismatches"
    );
}

/// Infeasibility is one fact reported three ways: the matching filter,
/// the subset condition, and solution search must agree on 500 instances.
#[test]
fn acceptance_08_hall_feasibility_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x08);
    let instances = 500;
    let mut infeasible_seen = 0;
    for i in 0..instances {
        let np = random_instance(&mut rng, 10, 10);
        let c = &np.problem.constraints[0];
        let s = &np.problem.domains;

        let gac_infeasible = regin::gac_filter(c, s).is_infeasible();
        let violation = oracle::hall_violation(c, s).unwrap();
        let solvable = oracle::has_solution(c, s, 10_000_000).unwrap();

        assert_eq!(
            gac_infeasible,
            violation.is_some(),
            "instance {i}: matching filter vs subset condition"
        );
        assert_eq!(
            gac_infeasible, !solvable,
            "instance {i}: matching filter vs solution search"
        );
        if let Some(k) = &violation {
            infeasible_seen += 1;
            // The witness really violates the condition.
            let union = Domain::new(k.iter().flat_map(|&v| s.domain(v).iter()));
            assert!(k.len() > union.len(), "instance {i}: bogus witness");
        }
    }
    assert!(infeasible_seen > 0, "sample never exercised infeasibility");
    println!(
        "[PASS] feasibility equivalence: {instances} instances ({infeasible_seen} infeasible), zero mismatches"
    );
}

/// Counts are level-independent and match plain backtracking on every
/// generator instance; node counts respect the strength order.
#[test]
fn acceptance_09_solver_count_and_node_consistency() {
    let mut instances: Vec<(String, Problem)> = Vec::new();
    for kind in [GeneratorKind::Speeches, GeneratorKind::RevisedSpeeches] {
        let np = gen_benchmark(kind, GenParams::default()).unwrap();
        instances.push((kind.name().to_string(), np.problem));
    }
    for n in 1..=8usize {
        let np = gen_benchmark(
            GeneratorKind::Nqueens,
            GenParams {
                n,
                ..GenParams::default()
            },
        )
        .unwrap();
        instances.push((format!("nqueens-{n}"), np.problem));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x09);
    for i in 0..40 {
        let np = random_instance(&mut rng, 6, 8);
        instances.push((format!("random-{i}"), np.problem));
    }

    for (name, p) in &instances {
        let runs: Vec<(u64, u64)> = ConsistencyLevel::ALL
            .iter()
            .map(|&level| {
                let (result, stats) = engine::solve(p, level, engine::SolveMode::CountAll);
                (result.count().unwrap(), stats.nodes_explored)
            })
            .collect();
        let (dec, bnd, rng_run, gac) = (runs[0], runs[1], runs[2], runs[3]);
        assert!(
            dec.0 == bnd.0 && bnd.0 == rng_run.0 && rng_run.0 == gac.0,
            "{name}: counts differ across levels: {runs:?}"
        );
        let reference = oracle::count_problem_solutions(p, 1_000_000_000).unwrap();
        assert_eq!(gac.0, reference, "{name}: count differs from plain backtracking");
        assert!(gac.1 <= rng_run.1, "{name}: nodes(gac) > nodes(range)");
        assert!(rng_run.1 <= bnd.1, "{name}: nodes(range) > nodes(bound)");
        assert!(gac.1 <= dec.1, "{name}: nodes(gac) > nodes(decomp)");
    }
    println!(
        "[PASS] solver consistency: {} instances, counts level-independent and oracle-exact, node order respected",
        instances.len()
    );
}

/// Hall-tight staircase of interval domains: variable `i` ranges over a
/// 500-wide window starting at `1 + (i mod (n − 499))`.
fn staircase(n: usize) -> (AllDifferentConstraint, DomainStore) {
    let width: i64 = 500;
    let starts = n as i64 - width + 1;
    let domains: Vec<Domain> = (0..n)
        .map(|i| {
            let lo = (i as i64 % starts) + 1;
            Domain::range(lo, lo + width - 1)
        })
        .collect();
    (all_vars(n), DomainStore::new(domains))
}

fn time_gac(c: &AllDifferentConstraint, s: &DomainStore) -> Duration {
    let start = Instant::now();
    let out = regin::gac_filter(c, s);
    let elapsed = start.elapsed();
    assert!(!out.is_infeasible(), "staircase is feasible");
    elapsed
}

/// Interleaved minima: alternating the two sizes keeps a load change on
/// the machine from distorting one side of the ratio only.
fn measure_pair(
    small: &(AllDifferentConstraint, DomainStore),
    large: &(AllDifferentConstraint, DomainStore),
    rounds: usize,
) -> (Duration, Duration) {
    let mut t_small = Duration::MAX;
    let mut t_large = Duration::MAX;
    for _ in 0..rounds {
        t_small = t_small.min(time_gac(&small.0, &small.1));
        t_large = t_large.min(time_gac(&large.0, &large.1));
    }
    (t_small, t_large)
}

/// A single 2000-variable filter call stays under five seconds, and
/// doubling the variable count scales the runtime by at most 4×.
#[test]
fn acceptance_10_gac_performance_scaling() {
    let small = staircase(1000);
    let large = staircase(2000);
    // Warm-up to take allocator and cache effects out of the minimum.
    let _ = regin::gac_filter(&small.0, &small.1);
    let _ = regin::gac_filter(&large.0, &large.1);

    let (mut t1, mut t2) = measure_pair(&small, &large, 5);
    if t2.as_secs_f64() / t1.as_secs_f64() > 4.0 {
        // Concurrent test binaries skew wall-clock minima; re-measure
        // once on a quieter machine state. The 4× bound itself is fixed.
        std::thread::sleep(Duration::from_millis(750));
        let (r1, r2) = measure_pair(&small, &large, 5);
        t1 = t1.min(r1);
        t2 = t2.min(r2);
    }

    assert!(t2 < Duration::from_secs(5), "n=2000 took {t2:?}");
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    assert!(ratio <= 4.0, "doubling n scaled runtime by {ratio:.2}×");
    println!(
        "[PASS] performance: n=1000 in {:.1} ms, n=2000 in {:.1} ms (ratio {:.2}× ≤ 4)",
        t1.as_secs_f64() * 1e3,
        t2.as_secs_f64() * 1e3,
        ratio
    );
}
