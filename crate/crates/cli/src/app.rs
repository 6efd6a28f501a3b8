//! Command dispatch.
//!
//! Exit codes: 0 success, 1 infeasible / no solution / zero count,
//! 2 usage or parse errors. Results go to stdout and are byte-identical
//! across runs with equal inputs and flags; diagnostics and wall-clock
//! lines go to stderr (timing is the one inherently non-reproducible
//! output, so it never lands on stdout).

use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use alldiff_core::model::{ConsistencyLevel, FilterOutcome, Problem, VariableId};
use alldiff_core::{engine, regin, SearchStats, SolveMode, SolveResult};

use crate::format::{parse_problem, serialize_problem, NamedProblem};
use crate::generate::{gen_benchmark, GenParams, GeneratorKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "alldiff",
    about = "Filtering and search for alldifferent constraint problems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter all domains to a propagation fixpoint
    Filter(FilterCmd),
    /// Search for a first solution
    Solve(SolveCmd),
    /// Count all solutions
    Count(SolveCmd),
    /// Generate an instance and report per-level search statistics
    Bench(BenchCmd),
    /// Print a generated instance as a problem document
    Gen(GenCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    /// Arc consistency on the binary decomposition
    Decomp,
    /// Bound consistency (Hall intervals)
    Bound,
    /// Range consistency (Hall sets)
    Range,
    /// Hyper-arc consistency (value graph matching)
    Gac,
}

impl From<LevelArg> for ConsistencyLevel {
    fn from(level: LevelArg) -> Self {
        match level {
            LevelArg::Decomp => ConsistencyLevel::DecompAc,
            LevelArg::Bound => ConsistencyLevel::Bound,
            LevelArg::Range => ConsistencyLevel::Range,
            LevelArg::Gac => ConsistencyLevel::HyperArc,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenArg {
    Speeches,
    #[value(name = "revised-speeches")]
    RevisedSpeeches,
    Nqueens,
    Random,
}

impl From<GenArg> for GeneratorKind {
    fn from(kind: GenArg) -> Self {
        match kind {
            GenArg::Speeches => GeneratorKind::Speeches,
            GenArg::RevisedSpeeches => GeneratorKind::RevisedSpeeches,
            GenArg::Nqueens => GeneratorKind::Nqueens,
            GenArg::Random => GeneratorKind::Random,
        }
    }
}

/// Generator selection and parameters.
#[derive(Args, Clone, Copy)]
struct GenSpec {
    /// Built-in instance family
    #[arg(long = "gen", value_enum)]
    kind: GenArg,
    /// Size parameter (nqueens, random)
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Smallest domain value (random)
    #[arg(long, default_value_t = 1)]
    lo: i64,
    /// Largest domain value (random; defaults to n)
    #[arg(long)]
    hi: Option<i64>,
    /// Probability each value stays in a domain (random)
    #[arg(long, default_value_t = 0.8)]
    density: f64,
    /// RNG seed (random)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenSpec {
    fn params(&self) -> GenParams {
        GenParams {
            n: self.n,
            lo: self.lo,
            hi: self.hi.unwrap_or(self.n as i64),
            density: self.density,
            seed: self.seed,
        }
    }
}

/// Problem input: a file (or `-` for stdin) or a generated instance.
#[derive(Args)]
struct InputSpec {
    /// Problem file; `-` reads stdin
    #[arg(conflicts_with = "kind", required_unless_present = "kind")]
    file: Option<String>,
    #[command(flatten)]
    generator: Option<GenSpec>,
}

#[derive(Args)]
struct FilterCmd {
    #[command(flatten)]
    input: InputSpec,
    #[arg(long, value_enum, default_value_t = LevelArg::Gac)]
    level: LevelArg,
    /// Print values-removed statistics
    #[arg(long)]
    stats: bool,
    /// Dump each constraint's value graph and matching to stderr
    #[arg(long)]
    dump_graph: bool,
}

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    input: InputSpec,
    #[arg(long, value_enum, default_value_t = LevelArg::Gac)]
    level: LevelArg,
    /// Print search statistics
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct BenchCmd {
    #[command(flatten)]
    generator: GenSpec,
    /// Restrict to one level (default: all four)
    #[arg(long, value_enum)]
    level: Option<LevelArg>,
    /// Count all solutions instead of stopping at the first
    #[arg(long)]
    count_all: bool,
}

#[derive(Args)]
struct GenCmd {
    #[command(flatten)]
    generator: GenSpec,
}

/// Entry point used by `main`; arguments exclude nothing (pass argv as-is).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Filter(cmd) => filter_cmd(cmd, out, err),
        Command::Solve(cmd) => solve_cmd(cmd, false, out, err),
        Command::Count(cmd) => solve_cmd(cmd, true, out, err),
        Command::Bench(cmd) => bench_cmd(cmd, out, err),
        Command::Gen(cmd) => gen_cmd(cmd, out, err),
    }
}

fn load_input(input: &InputSpec, err: &mut dyn Write) -> Result<NamedProblem, i32> {
    if let Some(spec) = &input.generator {
        return gen_benchmark(spec.kind.into(), spec.params()).map_err(|e| {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        });
    }
    let path = input.file.as_deref().expect("clap enforces file or --gen");
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| {
            let _ = writeln!(err, "error: reading stdin: {e}");
            EXIT_USAGE
        })?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| {
            let _ = writeln!(err, "error: reading {path}: {e}");
            EXIT_USAGE
        })?
    };
    parse_problem(&text).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}

fn print_time(err: &mut dyn Write, prefix: &str, stats: &SearchStats) {
    let ms = stats.wall_time.as_secs_f64() * 1e3;
    let _ = writeln!(err, "{prefix}time_ms={ms:.3}");
}

fn filter_cmd(cmd: FilterCmd, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let np = match load_input(&cmd.input, err) {
        Ok(np) => np,
        Err(code) => return code,
    };
    if cmd.dump_graph {
        dump_graphs(&np, err);
    }
    let level: ConsistencyLevel = cmd.level.into();
    let before = np.problem.domains.total_size();
    let start = Instant::now();
    let outcome = engine::propagate(&np.problem, level, &np.problem.domains);
    let elapsed = start.elapsed();
    match outcome {
        FilterOutcome::Fixpoint(store) => {
            for (i, name) in np.names.iter().enumerate() {
                let _ = writeln!(out, "{name}: {}", store.domain(VariableId(i)));
            }
            if cmd.stats {
                let _ = writeln!(out, "prunings={}", before - store.total_size());
                let _ = writeln!(err, "time_ms={:.3}", elapsed.as_secs_f64() * 1e3);
            }
            EXIT_OK
        }
        FilterOutcome::Infeasible(inf) => {
            let _ = writeln!(out, "INFEASIBLE");
            let _ = writeln!(err, "infeasible: {inf}");
            EXIT_INFEASIBLE
        }
    }
}

fn dump_graphs(np: &NamedProblem, err: &mut dyn Write) {
    for (ci, c) in np.problem.constraints.iter().enumerate() {
        let g = regin::build_value_graph(c, &np.problem.domains);
        let m = regin::maximum_matching(&g);
        let _ = writeln!(err, "# value graph of constraint {ci}");
        let _ = write!(err, "{}", regin::dump_graph(&g, &m));
    }
}

fn solve_cmd(cmd: SolveCmd, count_all: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let np = match load_input(&cmd.input, err) {
        Ok(np) => np,
        Err(code) => return code,
    };
    let level: ConsistencyLevel = cmd.level.into();
    let mode = if count_all {
        SolveMode::CountAll
    } else {
        SolveMode::First
    };
    let (result, stats) = timed_solve(&np.problem, level, mode);
    let code = match &result {
        SolveResult::First(Some(solution)) => {
            for (i, name) in np.names.iter().enumerate() {
                let _ = writeln!(out, "{name} = {}", solution[i]);
            }
            EXIT_OK
        }
        SolveResult::First(None) => {
            let _ = writeln!(out, "NO SOLUTION");
            EXIT_INFEASIBLE
        }
        SolveResult::Count(n) => {
            let _ = writeln!(out, "{n}");
            if *n > 0 {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            }
        }
    };
    if cmd.stats {
        let _ = writeln!(
            out,
            "nodes={} failures={} prunings={}",
            stats.nodes_explored, stats.failures, stats.prunings
        );
        print_time(err, "", &stats);
    }
    code
}

fn bench_cmd(cmd: BenchCmd, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let spec = cmd.generator;
    let np = match gen_benchmark(spec.kind.into(), spec.params()) {
        Ok(np) => np,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let kind: GeneratorKind = spec.kind.into();
    let mut header = format!("instance={kind}");
    match kind {
        GeneratorKind::Nqueens => header.push_str(&format!(" n={}", spec.n)),
        GeneratorKind::Random => header.push_str(&format!(
            " n={} lo={} hi={} density={} seed={}",
            spec.n,
            spec.lo,
            spec.hi.unwrap_or(spec.n as i64),
            spec.density,
            spec.seed
        )),
        _ => {}
    }
    header.push_str(&format!(
        " vars={} constraints={}",
        np.problem.var_count(),
        np.problem.constraints.len()
    ));
    let _ = writeln!(out, "{header}");

    let levels: Vec<ConsistencyLevel> = match cmd.level {
        Some(level) => vec![level.into()],
        None => ConsistencyLevel::ALL.to_vec(),
    };
    let mode = if cmd.count_all {
        SolveMode::CountAll
    } else {
        SolveMode::First
    };
    let mut any_feasible = false;
    for level in levels {
        let (result, stats) = timed_solve(&np.problem, level, mode);
        let outcome = match &result {
            SolveResult::First(Some(_)) => {
                any_feasible = true;
                "result=sat".to_string()
            }
            SolveResult::First(None) => "result=unsat".to_string(),
            SolveResult::Count(n) => {
                if *n > 0 {
                    any_feasible = true;
                }
                format!("count={n}")
            }
        };
        let _ = writeln!(
            out,
            "level={level} {outcome} nodes={} failures={} prunings={}",
            stats.nodes_explored, stats.failures, stats.prunings
        );
        print_time(err, &format!("level={level} "), &stats);
    }
    if any_feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

fn gen_cmd(cmd: GenCmd, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let spec = cmd.generator;
    match gen_benchmark(spec.kind.into(), spec.params()) {
        Ok(np) => {
            let _ = write!(out, "{}", serialize_problem(&np));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs the solver and fills in the wall time the core crate cannot
/// measure itself.
pub fn timed_solve(
    p: &Problem,
    level: ConsistencyLevel,
    mode: SolveMode,
) -> (SolveResult, SearchStats) {
    let start = Instant::now();
    let (result, mut stats) = engine::solve(p, level, mode);
    stats.wall_time = start.elapsed();
    (result, stats)
}
