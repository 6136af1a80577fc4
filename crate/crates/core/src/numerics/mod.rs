//! Numeric routines shared by the analysis core.

mod gamma;
mod minimize;
mod quadrature;

pub use gamma::{ln_upper_incomplete_gamma, upper_incomplete_gamma};
pub use minimize::{minimize_scalar, minimize_scalar_with_grid, Minimum, DEFAULT_GRID_POINTS};
pub use quadrature::{adaptive_simpson, integrate_exp_weighted, GaussLaguerre, QuadratureSpec, TRUNCATION};
pub use crate::error::NumericsError;
