//! Independent numerical oracles for the closed forms.

use thiserror::Error;

use crate::eigenfunctions::EigenError;
use crate::fields::CaseId;
use crate::grid::GridError;
use crate::quad::QuadError;
use crate::specfun::SpecfunError;

pub mod laplace;
pub mod ode;
pub mod reduction;
pub mod residual;
pub mod shooting;

pub use laplace::{convolve, kummer_pair_density, kummer_pair_transform, laplace_forward};
pub use reduction::{reduced_ode, reduction_residual, symmetry_check, ReducedODE, SymbolPoint, SUBSTITUTIONS};
pub use residual::{default_grid, ode_residual, ode_residual_at, ResidualReport, ODE_RESIDUAL_TOL};
pub use shooting::{closed_form_bracket, matching_function, scan_brackets, shoot_eigenvalue, shoot_eigenvalue_with, ShootOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("no sign change of the matching function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("stiff integration: step size collapsed at x2 = {x} after {steps} steps")]
    StiffIntegration { x: f64, steps: usize },
    #[error("not a bound-state energy: {0}")]
    NotBound(String),
    #[error("case {0} has no shooting oracle")]
    UnsupportedCase(CaseId),
    #[error("Laplace integral diverges: {0}")]
    Divergence(String),
    #[error("t = {t} is a singular point of the reduction")]
    SingularPoint { t: f64 },
}
