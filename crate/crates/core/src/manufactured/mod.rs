//! Manufactured-solution verification: exact fields, space-time error
//! norms, residual indicators and convergence rates.

mod estimator;
mod exact;
mod norms;
mod rates;

pub use estimator::{ResidualIndicator, residual_indicator, residual_indicator_with_forcing};
pub use exact::{ExactSolution, ManufacturedSolution, Scaled, ZeroSolution};
pub use norms::{ErrorAccumulator, NORM_DEGREE, SpatialErrors};
pub use rates::{
    LevelResult, RATE_TABLE_HEADER, RateBasis, RateRow, RateTable, convergence_rate, fitted_order,
    fmt_float, rate_table,
};
