//! Configuration, run drivers and CSV output behind the `stokes-asgs`
//! binary.

mod config;
mod run;

pub use config::{CONFIG_KEYS, RunConfig, SolverKind};
pub use run::{
    CaseOutcome, STEP_HEADER, StepRow, cmd_solve, cmd_study, level_config, run_case, run_study,
    solve_csv,
};
