//! Double-precision layer: series evaluation in the upper half-plane, the
//! nonlinear ODE fields and an adaptive integrator, the hypergeometric
//! side of the Schwarz map, and numeric transformation laws.
//!
//! Derivatives are never taken by differencing values of a function we
//! have a series for; they come from [`Jet`] arithmetic instead.

pub mod checks;
mod eval;
mod hyper;
mod jet;
mod ode;
mod shadow;
mod transform;

use num_complex::Complex64;
use thiserror::Error;

use crate::catalog::CatalogError;

pub use checks::NumericReport;
pub use eval::{eval_series, order_for, series_jet, ComplexEval, Evaluable, LAMBDA};
pub use hyper::{
    default_samples, half_potential, hyp2f1, hyp_jet, schwarz_map_check, schwarzian_at,
    schwarzian_fd, FD_STEP, MAX_ABS_S, SAMPLE_WINDOW,
};
pub use jet::{Jet, Scalar};
pub use ode::{
    field_rhs, integrate, integrate_fixed, make_field, potential, rk_integrate, solution_jet,
    Integration, OdeField, OdeKind, EQ18_GUARD, MIN_STEP, SCHWARZ_GUARD,
};
pub use shadow::{eval_expr, eval_jet, identity_residual};
pub use transform::{
    random_complex, random_sl2z, transform_residual, transform_residuals, Matrix2, TransformLaw,
    MIN_ORDER, U_MARGIN, U_POLE_IM,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("point {re}{im:+}i is not in the upper half-plane")]
    HalfPlane { re: f64, im: f64 },
    #[error("singularity guard: |{what}| = {magnitude:e}")]
    Singular { what: &'static str, magnitude: f64 },
    #[error("step size underflow (h = {step:e}) near z = {at}")]
    StepUnderflow { at: Complex64, step: f64 },
    #[error("{law} needs a matrix in {need}, got {matrix}")]
    Group {
        law: &'static str,
        need: &'static str,
        matrix: String,
    },
    #[error("domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("coefficient does not fit in a double")]
    Overflow,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
