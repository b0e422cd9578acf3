//! Smeared versions of `q(t, x) → 0` and `λ⁻² q(t, x) → 2π δ(t) δ(x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::integrate;
use super::{check_lambda, ConvergenceRow, GaussianTest, NumericError};

/// `V(λ) = ∫ f(t) exp(-i t x / λ²) dt = f̂(x / λ²)`.
pub fn vanishing_kernel(x: f64, f: &GaussianTest, lambda: f64) -> Result<Complex64, NumericError> {
    if x == 0.0 {
        return Err(NumericError::ZeroFrequency);
    }
    check_lambda(lambda)?;
    Ok(f.fourier(x / (lambda * lambda)))
}

/// `ln |V(λ)|`, usable after `|V|` itself underflows.
pub fn vanishing_kernel_log_abs(x: f64, f: &GaussianTest, lambda: f64) -> Result<f64, NumericError> {
    if x == 0.0 {
        return Err(NumericError::ZeroFrequency);
    }
    check_lambda(lambda)?;
    Ok(f.fourier_log_abs(x / (lambda * lambda)))
}

/// `∫ f(t) g(t - s) dt` for Gaussians: returns `(amplitude, exponent)` with
/// the value `amplitude · exp(exponent)`.
fn overlap(f: &GaussianTest, g: &GaussianTest, s: f64) -> (f64, f64) {
    let sum = f.width.powi(2) + g.width.powi(2);
    let d = f.center - g.center - s;
    ((2.0 * PI).sqrt() * f.width * g.width / sum.sqrt(), -d * d / (2.0 * sum))
}

/// `J(λ) = ∫∫∫ f(t) g(t') h(x) λ⁻² exp(-i (t - t') x / λ²) dt dt' dx` in closed form.
///
/// After `τ = (t - t')/λ²` this is `∫∫ f(t) g(t - λ²τ) ĥ(τ) dt dτ`; both
/// integrals are Gaussian.
pub fn delta_kernel(
    f: &GaussianTest,
    g: &GaussianTest,
    h: &GaussianTest,
    lambda: f64,
) -> Result<Complex64, NumericError> {
    check_lambda(lambda)?;
    let sum = f.width.powi(2) + g.width.powi(2);
    let d = f.center - g.center;
    let l2 = lambda * lambda;
    let (amp, _) = overlap(f, g, 0.0);
    let alpha = h.width.powi(2) + l2 * l2 / sum;
    let beta = Complex64::new(l2 * d / sum, -h.center);
    let exponent = beta * beta / (2.0 * alpha) - d * d / (2.0 * sum);
    Ok((2.0 * PI).sqrt() * h.width * amp * (2.0 * PI / alpha).sqrt() * exponent.exp())
}

/// The λ → 0 limit `2π h(0) ∫ f g`.
pub fn delta_kernel_target(f: &GaussianTest, g: &GaussianTest, h: &GaussianTest) -> f64 {
    let (amp, exponent) = overlap(f, g, 0.0);
    2.0 * PI * h.eval(0.0) * amp * exponent.exp()
}

const QUAD_TOL: f64 = 1e-10;
const TRUNCATION: f64 = 8.0;
const MAX_PIECES: usize = 400;

/// [`delta_kernel`] by nested adaptive quadrature of the non-oscillatory
/// `(t, τ)` integrand, truncated at eight standard deviations.
pub fn delta_kernel_quadrature(
    f: &GaussianTest,
    g: &GaussianTest,
    h: &GaussianTest,
    lambda: f64,
) -> Result<Complex64, NumericError> {
    check_lambda(lambda)?;
    let l2 = lambda * lambda;
    let sum = f.width.powi(2) + g.width.powi(2);
    let spread = f.width * g.width / sum.sqrt();
    let mut inner_failure = None;
    let outer = integrate(
        |tau| {
            let s = l2 * tau;
            // the t-integrand f(t) g(t - s) is a Gaussian bump around `mid`
            let mid = (f.center * g.width.powi(2) + (g.center + s) * f.width.powi(2)) / sum;
            let inner = integrate(
                |t| Complex64::new(f.eval(t) * g.eval(t - s), 0.0),
                mid - TRUNCATION * spread,
                mid + TRUNCATION * spread,
                0.01 * QUAD_TOL,
                MAX_PIECES,
            );
            match inner {
                Ok(e) => e.value * h.fourier(tau),
                Err(e) => {
                    inner_failure.get_or_insert(e);
                    e.best.value * h.fourier(tau)
                }
            }
        },
        -TRUNCATION / h.width,
        TRUNCATION / h.width,
        QUAD_TOL,
        MAX_PIECES,
    );
    if let Some(e) = inner_failure {
        return Err(NumericError::Quadrature { estimate: e.best.error, tolerance: e.tolerance });
    }
    let e = outer.map_err(|e| NumericError::Quadrature { estimate: e.best.error, tolerance: e.tolerance })?;
    if !(e.value.re.is_finite() && e.value.im.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    Ok(e.value)
}

pub fn delta_kernel_ladder(
    f: &GaussianTest,
    g: &GaussianTest,
    h: &GaussianTest,
    lambdas: &[f64],
) -> Result<Vec<ConvergenceRow>, NumericError> {
    let target = Complex64::new(delta_kernel_target(f, g, h), 0.0);
    lambdas.iter().map(|&l| Ok(ConvergenceRow::new(l, delta_kernel(f, g, h, l)?, target))).collect()
}

pub fn vanishing_kernel_ladder(x: f64, f: &GaussianTest, lambdas: &[f64]) -> Result<Vec<ConvergenceRow>, NumericError> {
    lambdas.iter().map(|&l| Ok(ConvergenceRow::new(l, vanishing_kernel(x, f, l)?, Complex64::new(0.0, 0.0)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std() -> GaussianTest {
        GaussianTest::standard()
    }

    #[test]
    fn vanishing_kernel_decay() {
        assert_eq!(vanishing_kernel(0.0, &std(), 1.0), Err(NumericError::ZeroFrequency));
        for lambda in [1.0, 0.8, 0.5] {
            let v = vanishing_kernel(1.0, &std(), lambda).unwrap();
            let expect = (2.0 * PI).sqrt() * (-0.5 / lambda.powi(4)).exp();
            assert!((v.norm() - expect).abs() < 1e-15);
        }
        let ladder = [1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05];
        let logs: Vec<f64> = ladder.iter().map(|&l| vanishing_kernel_log_abs(1.0, &std(), l).unwrap()).collect();
        assert!(logs.windows(2).all(|w| w[1] < w[0]));
        assert!(
            vanishing_kernel(1.0, &std(), 0.5).unwrap().norm()
                < 1e-3 * vanishing_kernel(1.0, &std(), 1.0).unwrap().norm()
        );
    }

    #[test]
    fn standard_delta_kernel() {
        let target = delta_kernel_target(&std(), &std(), &std());
        assert!((target - 2.0 * PI.powf(1.5)).abs() < 1e-13);
        for lambda in [1.0, 0.5, 0.1] {
            let j = delta_kernel(&std(), &std(), &std(), lambda).unwrap();
            let expect = 2.0 * PI.powf(1.5) / (1.0 + lambda.powi(4) / 2.0).sqrt();
            assert!((j - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_and_quadrature_agree() {
        let cases = [
            (std(), std(), std()),
            (GaussianTest::new(0.5, 1.0).unwrap(), std(), GaussianTest::new(0.3, 1.0).unwrap()),
            (
                GaussianTest::new(-1.0, 0.7).unwrap(),
                GaussianTest::new(0.4, 1.3).unwrap(),
                GaussianTest::new(0.8, 0.6).unwrap(),
            ),
        ];
        for (f, g, h) in cases {
            for lambda in [1.0, 0.5] {
                let closed = delta_kernel(&f, &g, &h, lambda).unwrap();
                let quad = delta_kernel_quadrature(&f, &g, &h, lambda).unwrap();
                assert!((closed - quad).norm() <= 1e-8 * closed.norm(), "{closed} vs {quad}");
            }
        }
    }

    #[test]
    fn far_away_energy_smearing_kills_the_limit() {
        let h = GaussianTest::new(30.0, 0.5).unwrap();
        assert!(delta_kernel_target(&std(), &std(), &h) < 1e-100);
        assert!(delta_kernel(&std(), &std(), &h, 0.01).unwrap().norm() < 1e-100);
    }

    #[test]
    fn error_shrinks_along_ladder() {
        let rows = delta_kernel_ladder(&std(), &std(), &std(), &[1.0, 0.5, 0.25, 0.125]).unwrap();
        assert!(rows.windows(2).all(|w| w[1].abs_err < w[0].abs_err));
    }
}
