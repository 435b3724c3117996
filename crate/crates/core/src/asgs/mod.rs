//! Algebraic subgrid-scale (ASGS) stabilized transient Stokes discretization
//! with dynamic subscale tracking.

mod assembly;
mod diagnostics;
mod local;
mod params;
mod state;
mod stepper;
mod subscale;

pub use assembly::{ASSEMBLY_DEGREE, AssembledSystem, Discretization, assemble_system};
pub use diagnostics::{
    coercivity_check, coercivity_operator, constrained_basis, infsup_constant, min_eigenvalue,
    projected_symmetric_part,
};
pub use local::{LocalMatrices, local_galerkin_matrices};
pub use params::{ElementTaus, StabilizationParams, TimeScheme, compute_taus};
pub use state::{FieldState, Forcing, SubscaleState};
pub use stepper::{LinearSolver, StepEvent, StepOutput, TransientSolver, solve_transient, step};
pub use subscale::{advance_subscale, update_subscales};
