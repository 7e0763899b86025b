//! Configuration-driven experiment runs behind the `surfconv` binary.

pub mod config;
pub mod genmatrix;
pub mod report;
pub mod run;
pub mod suites;

pub use config::{load_config, resolve, resolve_seed, ExperimentConfig, MatrixRef, ResolvedConfig, Suite, SEED_ENV};
pub use genmatrix::{gen_matrix, GenMatrixSpec, MAX_ATTEMPTS};
pub use report::{cmd_report, ReportSummary};
pub use run::{cmd_run, RunOutcome, RunReport};
pub use suites::{run_suite, EnsembleRatio, SuiteOutput, Table, Verdict};
