use super::assembly::Discretization;
use super::params::{StabilizationParams, TimeScheme};
use super::state::{FieldState, Forcing, SubscaleState};
use crate::error::{Error, Result};
use crate::fem::DofMap;
use crate::linalg::{
    GmresOptions, LuFactorization, PIVOT_THRESHOLD, SolveReport, SparseMatrix, relative_residual,
    solve_gmres,
};
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearSolver {
    Direct,
    Gmres(GmresOptions),
}

/// Result of one time step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: FieldState,
    pub subscale: SubscaleState,
    pub report: SolveReport,
}

/// Data handed to the observer after each step.
#[derive(Debug)]
pub struct StepEvent<'s> {
    /// 1-based index of the step just taken.
    pub step: usize,
    pub previous: &'s FieldState,
    pub current: &'s FieldState,
    pub subscale: &'s SubscaleState,
    pub report: &'s SolveReport,
}

/// LU of the bordered system through a reduced matrix: the multiplier row
/// and column become identity, the first pressure row is pinned and
/// Dirichlet columns are dropped. The bordered right-hand side is always
/// consistent (zero multiplier), so shifting the reduced solution to zero
/// mean recovers the bordered solution. A dense multiplier row and column
/// otherwise ruin the fill-reducing ordering.
struct BorderedLu {
    lu: LuFactorization,
    pin: usize,
    multiplier: usize,
}

impl BorderedLu {
    fn new(dofmap: &DofMap, system: &SparseMatrix) -> Result<Self> {
        let n = system.n_rows();
        let pin = dofmap.pressure(0);
        let multiplier = dofmap.multiplier();
        let t: Vec<_> = system
            .triplets()
            .filter(|&(i, j, _)| {
                i != multiplier
                    && j != multiplier
                    && i != pin
                    && (i == j || !dofmap.is_dirichlet(j))
            })
            .chain([(multiplier, multiplier, 1.0), (pin, pin, 1.0)])
            .collect();
        let lu = LuFactorization::new(&SparseMatrix::from_triplets(n, n, &t)?)?;
        Ok(Self {
            lu,
            pin,
            multiplier,
        })
    }

    fn solve(
        &self,
        dofmap: &DofMap,
        system: &SparseMatrix,
        rhs: &[f64],
    ) -> Result<(Vec<f64>, SolveReport)> {
        let mut b = rhs.to_vec();
        b[self.pin] = 0.0;
        b[self.multiplier] = 0.0;
        let (mut x, mut report) = self.lu.solve(&b)?;
        let p = 2 * dofmap.n_u..2 * dofmap.n_u + dofmap.n_p;
        let total: f64 = dofmap.mean_vector.iter().sum();
        // second pass removes the summation roundoff of the first
        for _ in 0..2 {
            let shift = dofmap.mean(&x[p.clone()]) / total;
            x[p.clone()].iter_mut().for_each(|v| *v -= shift);
        }
        x[self.multiplier] = 0.0;
        let residual = relative_residual(system, &x, rhs)?;
        if !(residual <= PIVOT_THRESHOLD) {
            return Err(Error::SingularMatrix(format!(
                "bordered system residual {residual:e} exceeds {PIVOT_THRESHOLD:e}"
            )));
        }
        report.relative_residual = residual;
        Ok((x, report))
    }
}

/// Time integrator with the system matrix assembled (and, for the direct
/// solver, factored) once. The matrix does not change between steps.
///
/// Both solvers work on the row-equilibrated system; with `tau2 ~ 1/h^2` the
/// grad-div rows otherwise put the unscaled residual of a converged f64
/// solution above the direct-solve tolerance on fine meshes.
pub struct TransientSolver<'a> {
    disc: Discretization<'a>,
    matrix: SparseMatrix,
    scaled: SparseMatrix,
    row_scale: Vec<f64>,
    lu: Option<BorderedLu>,
    solver: LinearSolver,
}

impl<'a> TransientSolver<'a> {
    pub fn new(
        mesh: &'a Mesh,
        dofmap: &'a DofMap,
        scheme: TimeScheme,
        params: StabilizationParams,
        solver: LinearSolver,
    ) -> Result<Self> {
        let disc = Discretization::new(mesh, dofmap, scheme, params)?;
        let matrix = disc.system_matrix()?;
        let row_scale = matrix.row_equilibration();
        let mut scaled = matrix.clone();
        scaled.scale_rows(&row_scale)?;
        let lu = match solver {
            LinearSolver::Direct => Some(BorderedLu::new(dofmap, &scaled)?),
            LinearSolver::Gmres(_) => None,
        };
        Ok(Self {
            disc,
            matrix,
            scaled,
            row_scale,
            lu,
            solver,
        })
    }

    pub fn discretization(&self) -> &Discretization<'a> {
        &self.disc
    }

    /// Unscaled system matrix.
    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Row scaling applied before solving.
    pub fn row_scale(&self) -> &[f64] {
        &self.row_scale
    }

    pub fn step(
        &self,
        state_n: &FieldState,
        subscale_n: &SubscaleState,
        forcing: &dyn Forcing,
    ) -> Result<StepOutput> {
        let dm = self.disc.dofmap();
        let scheme = self.disc.scheme();
        let f_qp = self.disc.forcing_at_qps(forcing, state_n.t);
        let mut rhs = self.disc.rhs_with_forcing(state_n, subscale_n, &f_qp)?;
        rhs.iter_mut()
            .zip(&self.row_scale)
            .for_each(|(b, s)| *b *= s);
        let (x, report) = match (&self.lu, self.solver) {
            (Some(lu), _) => lu.solve(dm, &self.scaled, &rhs)?,
            (None, LinearSolver::Gmres(opts)) => {
                solve_gmres(&self.scaled, &rhs, Some(&state_n.to_vector(dm)), opts)?
            }
            (None, LinearSolver::Direct) => {
                unreachable!("direct solver is factored at construction")
            }
        };
        let n = dm.n_u;
        let mut state = FieldState {
            u1: x[..n].to_vec(),
            u2: x[n..2 * n].to_vec(),
            p: x[2 * n..2 * n + dm.n_p].to_vec(),
            t: state_n.t + scheme.dt(),
            p_time: state_n.t + scheme.dt_eff(),
        };
        // identity rows with zero rhs; clear pivoting roundoff
        for &d in &dm.dirichlet_dofs {
            if d < n {
                state.u1[d] = 0.0;
            } else {
                state.u2[d - n] = 0.0;
            }
        }
        let subscale = self
            .disc
            .update_subscales_with_forcing(&state, state_n, subscale_n, &f_qp)?;
        Ok(StepOutput {
            state,
            subscale,
            report,
        })
    }

    /// Advances `initial` through all steps of the scheme, handing every step
    /// to `observer`. Returns the final state and subscales.
    pub fn run(
        &self,
        forcing: &dyn Forcing,
        initial: FieldState,
        mut observer: impl FnMut(StepEvent<'_>),
    ) -> Result<(FieldState, SubscaleState)> {
        let mut state = initial;
        let mut subscale = self.disc.zero_subscales();
        for step in 1..=self.disc.scheme().n_steps() {
            let out = self
                .step(&state, &subscale, forcing)
                .map_err(|e| Error::Step {
                    step,
                    source: Box::new(e),
                })?;
            observer(StepEvent {
                step,
                previous: &state,
                current: &out.state,
                subscale: &out.subscale,
                report: &out.report,
            });
            state = out.state;
            subscale = out.subscale;
        }
        Ok((state, subscale))
    }
}

/// Single step from scratch (assembles and factors the system).
#[allow(clippy::too_many_arguments)]
pub fn step(
    mesh: &Mesh,
    dofmap: &DofMap,
    state_n: &FieldState,
    subscale_n: &SubscaleState,
    scheme: &TimeScheme,
    params: &StabilizationParams,
    forcing: &dyn Forcing,
    solver: LinearSolver,
) -> Result<StepOutput> {
    TransientSolver::new(mesh, dofmap, *scheme, *params, solver)?.step(state_n, subscale_n, forcing)
}

#[allow(clippy::too_many_arguments)]
pub fn solve_transient(
    mesh: &Mesh,
    dofmap: &DofMap,
    scheme: &TimeScheme,
    params: &StabilizationParams,
    forcing: &dyn Forcing,
    initial: FieldState,
    solver: LinearSolver,
    observer: impl FnMut(StepEvent<'_>),
) -> Result<(FieldState, SubscaleState)> {
    TransientSolver::new(mesh, dofmap, *scheme, *params, solver)?.run(forcing, initial, observer)
}
