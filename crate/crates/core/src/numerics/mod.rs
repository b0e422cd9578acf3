//! Numerical checks of the stochastic limit with Gaussian test functions.

mod assignment;
mod gaussian;
mod kernels;
pub mod quadrature;
mod smeared;

use std::fmt::Write;

use num_complex::Complex64;
use thiserror::Error;

pub use assignment::{dot3, norm3, phase_arg_value, phase_value, Assignment, Dispersion, Vec3};
pub use gaussian::{gaussian_integral, GaussianTest};
pub use kernels::{
    delta_kernel, delta_kernel_ladder, delta_kernel_quadrature, delta_kernel_target, vanishing_kernel,
    vanishing_kernel_ladder, vanishing_kernel_log_abs,
};
pub use smeared::{suppression, term_convergence, term_convergence_with, SmearedTerm, Suppression};

use crate::label::{MomentumLabel, TimeLabel};

#[derive(Debug, Error, PartialEq)]
pub enum NumericError {
    #[error("momentum label {0} has no assigned value")]
    UnassignedMomentum(MomentumLabel),
    #[error("time label {0} has no test function")]
    UnassignedTime(TimeLabel),
    #[error("x = 0: the kernel tends to the integral of the test function, not to 0")]
    ZeroFrequency,
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("lambda ladder must be nonempty, positive and strictly decreasing")]
    BadLadder,
    #[error("test function needs a positive width (center {center}, width {width})")]
    BadTestFunction { center: f64, width: f64 },
    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    #[error("non-finite value")]
    NonFinite,
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("term has lambda power {found} but {weighted} weighted phases")]
    LambdaPower { found: i32, weighted: usize },
    #[error("delta({0}-{1}) has not been applied to the phases; canonicalize first")]
    UnappliedDelta(MomentumLabel, MomentumLabel),
    #[error("delta({0}-{0}) has no numeric value")]
    DegenerateDelta(MomentumLabel),
    #[error("time and energy deltas have no pointwise value")]
    LimitDelta,
    #[error("a weighted phase has a time argument that is not a difference")]
    NotADifference,
    #[error("weighted phases impose a redundant time delta")]
    DegenerateTimeDeltas,
}

pub(crate) fn check_lambda(lambda: f64) -> Result<(), NumericError> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(NumericError::BadLambda(lambda))
    }
}

/// Accepts nonempty, positive, strictly decreasing ladders.
pub fn check_ladder(lambdas: &[f64]) -> Result<(), NumericError> {
    let positive = lambdas.iter().all(|&l| check_lambda(l).is_ok());
    if lambdas.is_empty() || !positive || lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(NumericError::BadLadder);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub lambda: f64,
    pub value: Complex64,
    pub target: Complex64,
    pub abs_err: f64,
}

impl ConvergenceRow {
    pub fn new(lambda: f64, value: Complex64, target: Complex64) -> Self {
        ConvergenceRow { lambda, value, target, abs_err: (value - target).norm() }
    }
}

pub const CSV_HEADER: &str = "lambda,re_value,im_value,re_target,im_target,abs_err";

/// CSV with a header row; every number with 12 significant digits.
pub fn rows_to_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            r.lambda, r.value.re, r.value.im, r.target.re, r.target.im, r.abs_err
        )
        .unwrap();
    }
    out
}

/// Least-squares slope of `ln(abs_err)` against `ln(lambda)`.
pub fn loglog_slope(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.lambda.ln(), r.abs_err.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}
