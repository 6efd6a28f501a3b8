//! Problem-file IO, benchmark generators and the `alldiff` command-line
//! front end over the `alldiff-core` kernel.

pub mod app;
pub mod format;
pub mod generate;

pub use app::{run, timed_solve, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
pub use format::{parse_problem, serialize_problem, NamedProblem, ParseError};
pub use generate::{gen_benchmark, GenError, GenParams, GeneratorKind};
