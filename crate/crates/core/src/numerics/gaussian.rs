use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericError;

/// `f(t) = exp(-(t - center)² / (2 width²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianTest {
    pub center: f64,
    pub width: f64,
}

impl GaussianTest {
    pub fn new(center: f64, width: f64) -> Result<Self, NumericError> {
        if !(width > 0.0 && width.is_finite() && center.is_finite()) {
            return Err(NumericError::BadTestFunction { center, width });
        }
        Ok(GaussianTest { center, width })
    }

    pub fn standard() -> Self {
        GaussianTest { center: 0.0, width: 1.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let z = (t - self.center) / self.width;
        (-0.5 * z * z).exp()
    }

    pub fn integral(&self) -> f64 {
        (2.0 * PI).sqrt() * self.width
    }

    /// `f̂(ω) = ∫ f(t) e^{-iωt} dt`.
    pub fn fourier(&self, omega: f64) -> Complex64 {
        Complex64::from_polar(self.integral() * (-0.5 * (self.width * omega).powi(2)).exp(), -omega * self.center)
    }

    /// `ln |f̂(ω)|`, finite where `|f̂|` underflows.
    pub fn fourier_log_abs(&self, omega: f64) -> f64 {
        self.integral().ln() - 0.5 * (self.width * omega).powi(2)
    }
}

/// `∫_{ℝⁿ} exp(-½ tᵀ A t + bᵀ t + c) dt` for symmetric positive definite `A`
/// and complex `b = b_re + i b_im`.
pub fn gaussian_integral(
    a: DMatrix<f64>,
    b_re: &DVector<f64>,
    b_im: &DVector<f64>,
    c: Complex64,
) -> Result<Complex64, NumericError> {
    let n = a.nrows();
    let chol = a.cholesky().ok_or(NumericError::NotPositiveDefinite)?;
    let log_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().take(n).map(|d| d.ln()).sum::<f64>();
    let z_re = chol.solve(b_re);
    let z_im = chol.solve(b_im);
    let quad = Complex64::new(b_re.dot(&z_re) - b_im.dot(&z_im), b_re.dot(&z_im) + b_im.dot(&z_re));
    let log = 0.5 * n as f64 * (2.0 * PI).ln() - 0.5 * log_det + 0.5 * quad + c;
    let v = log.exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(NumericError::NonFinite)
    }
}
