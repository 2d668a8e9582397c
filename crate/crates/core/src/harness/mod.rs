//! Config-driven experiments: TOML ingestion, the data expression grammar,
//! pipelines for each CLI subcommand, sweeps and artifact emission.

pub mod config;
pub mod expr;
mod run;

pub use config::{
    CheckConfig, Constants, DataConfig, Domain, ExperimentConfig, Exponent, NormConfig, NormKind, OutputConfig,
    PhiConfig, Source, MIN_INTERIOR_CELLS,
};
pub use expr::Expr;
pub use run::{
    band_limited_field, barrier_only, exit_code, norms_only, problem, run, run_config, solve_only, sweep_config,
    symmetrize, write_atomic, CheckEntry, Report, RunOutcome, SolverSummary, Status, SweepOutcome, SweepRow,
};
