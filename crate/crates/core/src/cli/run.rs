use std::io::Write;

use super::config::RunConfig;
use crate::asgs::{FieldState, TransientSolver};
use crate::error::{Error, Result};
use crate::fem::DofMap;
use crate::manufactured::{
    ErrorAccumulator, ExactSolution, LevelResult, ManufacturedSolution, RateBasis, RateTable,
    fmt_float, rate_table, residual_indicator,
};
use crate::mesh::Mesh;

pub const STEP_HEADER: &str = "step,t,err_u_l2,err_u_h1,err_p_l2,eta";

/// Per-step diagnostics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRow {
    pub step: usize,
    pub t: f64,
    /// `||u(t) - u_h||` at the end of the step.
    pub err_u_l2: f64,
    /// H1 error of the time-weighted velocity over the step.
    pub err_u_h1: f64,
    /// Pressure error over the step.
    pub err_p_l2: f64,
    /// Spatial residual indicator of the step.
    pub eta: f64,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub rows: Vec<StepRow>,
    pub result: LevelResult,
    pub final_state: FieldState,
    /// Largest `|integral p_h|` over all steps.
    pub max_pressure_mean: f64,
    /// Whether every step kept the boundary velocity exactly zero.
    pub dirichlet_exact: bool,
}

/// Runs the manufactured-solution problem described by `config`, starting
/// from the nodal interpolant of the exact solution at `t = 0`.
pub fn run_case(config: &RunConfig, level: usize) -> Result<CaseOutcome> {
    config.validate()?;
    let scheme = config.scheme()?;
    let mesh = Mesh::unit_square(config.nx)?;
    let dofmap = DofMap::new(&mesh)?;
    let exact = ManufacturedSolution::new(config.mu);
    let solver = TransientSolver::new(
        &mesh,
        &dofmap,
        scheme,
        config.params(),
        config.linear_solver(),
    )?;
    let disc = solver.discretization();

    let initial = FieldState::interpolated(
        &mesh,
        |x, y, t| exact.velocity(x, y, t),
        |x, y, t| exact.pressure(x, y, t),
        0.0,
    );
    let mut acc = ErrorAccumulator::new(&mesh)?;
    acc.record_snapshot(&initial, &exact);
    let mut rows = Vec::with_capacity(scheme.n_steps());
    let mut max_pressure_mean = 0.0f64;
    let mut dirichlet_exact = true;

    let (final_state, _) = solver.run(&exact, initial, |ev| {
        let (interval, snapshot) = acc.accumulate(ev.previous, ev.current, &exact, scheme.theta());
        let eta = residual_indicator(disc, ev.previous, ev.current, &exact);
        acc.add_estimator(eta.global_sq, scheme.dt());
        max_pressure_mean = max_pressure_mean.max(dofmap.mean(&ev.current.p).abs());
        dirichlet_exact &= ev.current.boundary_velocity_is_zero(&dofmap);
        rows.push(StepRow {
            step: ev.step,
            t: ev.current.t,
            err_u_l2: snapshot.velocity_l2_sq.sqrt(),
            err_u_h1: interval.velocity_h1_sq.sqrt(),
            err_p_l2: interval.pressure_l2_sq.sqrt(),
            eta: eta.global(),
        });
    })?;

    let result = LevelResult::new(
        level,
        config.nx,
        config.dt,
        acc.err_u_vtilde(),
        acc.err_p_l2l2(),
        acc.estimator(),
        acc.divergence_l2l2(),
    );
    Ok(CaseOutcome {
        rows,
        result,
        final_state,
        max_pressure_mean,
        dirichlet_exact,
    })
}

/// Configuration of refinement level `i`: `dt / 2^i`, and `nx * 2^i` unless
/// `time_study` keeps the mesh fixed.
pub fn level_config(base: &RunConfig, level: usize, time_study: bool) -> RunConfig {
    let factor = 1usize << level;
    RunConfig {
        nx: if time_study {
            base.nx
        } else {
            base.nx * factor
        },
        dt: base.dt / factor as f64,
        ..base.clone()
    }
}

pub fn run_study(base: &RunConfig, levels: usize, time_study: bool) -> Result<RateTable> {
    if levels == 0 {
        return Err(Error::Config("a study needs at least one level".into()));
    }
    let mut results = Vec::with_capacity(levels);
    for level in 0..levels {
        let config = level_config(base, level, time_study);
        let outcome = run_case(&config, level).map_err(|e| Error::Level {
            level,
            nx: config.nx,
            dt: config.dt,
            source: Box::new(e),
        })?;
        results.push(outcome.result);
    }
    let basis = if time_study {
        RateBasis::Time
    } else {
        RateBasis::Space
    };
    rate_table(&results, basis)
}

/// Per-step CSV followed by a `#` summary line.
pub fn solve_csv(outcome: &CaseOutcome) -> String {
    let mut out = String::from(STEP_HEADER);
    out.push('\n');
    for r in &outcome.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.step,
            fmt_float(r.t),
            fmt_float(r.err_u_l2),
            fmt_float(r.err_u_h1),
            fmt_float(r.err_p_l2),
            fmt_float(r.eta),
        ));
    }
    let s = &outcome.result;
    out.push_str(&format!(
        "# err_u_vtilde={},err_p_l2l2={},total={},eta={},div_l2l2={}\n",
        fmt_float(s.err_u_vtilde),
        fmt_float(s.err_p_l2l2),
        fmt_float(s.total),
        fmt_float(s.eta),
        fmt_float(s.div_l2l2),
    ));
    out
}

pub fn cmd_solve(config: &RunConfig, out: &mut dyn Write) -> Result<CaseOutcome> {
    let outcome = run_case(config, 0)?;
    out.write_all(solve_csv(&outcome).as_bytes())?;
    Ok(outcome)
}

pub fn cmd_study(
    config: &RunConfig,
    levels: usize,
    time_study: bool,
    out: &mut dyn Write,
) -> Result<RateTable> {
    let table = run_study(config, levels, time_study)?;
    out.write_all(table.to_csv().as_bytes())?;
    Ok(table)
}
