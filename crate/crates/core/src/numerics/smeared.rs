//! Time-smeared evaluation of closed-form correlator terms at finite λ.
//!
//! Every time label carries a Gaussian test function. A weighted phase
//! `λ⁻² q(Δt, x)` is read as the distribution it converges to, smeared in its
//! energy variable by a test function `h`: `λ⁻² ĥ(Δt/λ²)`, which tends to
//! `2π h(0) δ(Δt)`. Unweighted phases keep their numeric argument
//! `y = phase_value(x)` and oscillate as `exp(-i Δt y / λ²)`. The resulting
//! integrand is the exponential of a quadratic form in the times, so every
//! ladder point is a closed-form multivariate Gaussian integral.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::gaussian::gaussian_integral;
use super::{check_lambda, phase_arg_value, Assignment, ConvergenceRow, GaussianTest, NumericError};
use crate::label::TimeLabel;
use crate::symbolic::{DeltaFactor, ScalarTerm, TimeComb};

/// The structure of a term, reduced to numbers.
#[derive(Clone, Debug)]
pub struct SmearedTerm {
    coeff: Complex64,
    times: Vec<TimeLabel>,
    tests: Vec<GaussianTest>,
    energy: GaussianTest,
    // time-combination vectors of the weighted phases
    weighted: Vec<DVector<f64>>,
    // (time-combination vector, numeric argument) of the unweighted phases
    oscillating: Vec<(DVector<f64>, f64)>,
}

fn coeff_value(t: &ScalarTerm) -> Complex64 {
    let re = t.coeff.re.to_f64().unwrap_or(f64::NAN);
    let im = t.coeff.im.to_f64().unwrap_or(f64::NAN);
    Complex64::new(re, im) * (2.0 * PI).powi(t.two_pi_power)
}

impl SmearedTerm {
    /// Reduces a finite-λ term. The term must be canonical: its momentum
    /// deltas already applied to the phases and no limit deltas present.
    pub fn new(
        t: &ScalarTerm,
        tests: &BTreeMap<TimeLabel, GaussianTest>,
        energy: GaussianTest,
        a: &Assignment,
    ) -> Result<Self, NumericError> {
        let weighted_count = t.weighted_count();
        if t.lambda_power != -2 * weighted_count as i32 {
            return Err(NumericError::LambdaPower { found: t.lambda_power, weighted: weighted_count });
        }
        for d in &t.deltas {
            match d {
                DeltaFactor::Momentum(x, y) if x == y => return Err(NumericError::DegenerateDelta(x.clone())),
                DeltaFactor::Momentum(x, y) => {
                    if t.phases.iter().any(|p| p.arg.mentions(y)) {
                        return Err(NumericError::UnappliedDelta(x.clone(), y.clone()));
                    }
                }
                DeltaFactor::Pol(i, j) if i == j => {}
                DeltaFactor::Pol(..) => return Ok(SmearedTerm::zero(energy)),
                DeltaFactor::Time(_) | DeltaFactor::Phase(_) => return Err(NumericError::LimitDelta),
            }
        }

        let mut times: Vec<TimeLabel> = Vec::new();
        for p in &t.phases {
            for (l, _) in p.time.iter() {
                if !times.contains(l) {
                    times.push(l.clone());
                }
            }
        }
        times.sort();
        let test_fns = times
            .iter()
            .map(|l| tests.get(l).copied().ok_or_else(|| NumericError::UnassignedTime(l.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let vector = |c: &TimeComb| DVector::from_iterator(times.len(), times.iter().map(|l| c.coeff(l) as f64));

        let mut weighted = Vec::new();
        let mut oscillating = Vec::new();
        for p in &t.phases {
            let y = phase_arg_value(&p.arg, a)?;
            if p.weighted {
                weighted.push(vector(&p.time));
            } else {
                oscillating.push((vector(&p.time), y));
            }
        }
        Ok(SmearedTerm { coeff: coeff_value(t), times, tests: test_fns, energy, weighted, oscillating })
    }

    fn zero(energy: GaussianTest) -> Self {
        SmearedTerm {
            coeff: Complex64::new(0.0, 0.0),
            times: Vec::new(),
            tests: Vec::new(),
            energy,
            weighted: Vec::new(),
            oscillating: Vec::new(),
        }
    }

    /// True when every oscillating factor has a vanishing numeric argument.
    pub fn has_zero_phase(&self) -> bool {
        self.oscillating.iter().all(|(_, y)| y.abs() < 1e-12)
    }

    fn time_part(&self) -> (DMatrix<f64>, DVector<f64>, f64) {
        let n = self.times.len();
        let mut a = DMatrix::zeros(n, n);
        let mut b = DVector::zeros(n);
        let mut c = 0.0;
        for (i, f) in self.tests.iter().enumerate() {
            let inv = f.width.powi(-2);
            a[(i, i)] += inv;
            b[i] += f.center * inv;
            c -= 0.5 * f.center * f.center * inv;
        }
        (a, b, c)
    }

    pub fn value(&self, lambda: f64) -> Result<Complex64, NumericError> {
        check_lambda(lambda)?;
        if self.coeff == Complex64::new(0.0, 0.0) {
            return Ok(self.coeff);
        }
        let l2 = lambda * lambda;
        let (mut a, b_re, c_re) = self.time_part();
        let mut b_im = DVector::zeros(self.times.len());
        let h = &self.energy;
        let mut log_prefactor = 0.0;
        for e in &self.weighted {
            // λ⁻² ĥ(e·t / λ²)
            a += e * e.transpose() * (h.width * h.width / (l2 * l2));
            b_im -= e * (h.center / l2);
            log_prefactor += (h.integral() / l2).ln();
        }
        for (e, y) in &self.oscillating {
            b_im -= e * (y / l2);
        }
        let v = gaussian_integral(a, &b_re, &b_im, Complex64::new(c_re + log_prefactor, 0.0))?;
        Ok(self.coeff * v)
    }

    /// The λ → 0 value.
    pub fn target(&self) -> Result<Complex64, NumericError> {
        if self.coeff == Complex64::new(0.0, 0.0) {
            return Ok(self.coeff);
        }
        let n = self.times.len();
        let mut rep: Vec<usize> = (0..n).collect();
        fn find(rep: &[usize], mut i: usize) -> usize {
            while rep[i] != i {
                i = rep[i];
            }
            i
        }
        for e in &self.weighted {
            let nonzero: Vec<usize> = (0..n).filter(|&i| e[i] != 0.0).collect();
            let [i, j] = nonzero[..] else {
                return Err(NumericError::NotADifference);
            };
            let (ri, rj) = (find(&rep, i), find(&rep, j));
            if ri == rj {
                return Err(NumericError::DegenerateTimeDeltas);
            }
            rep[ri.max(rj)] = ri.min(rj);
        }
        let reps: Vec<usize> = (0..n).map(|i| find(&rep, i)).collect();
        let roots: Vec<usize> = (0..n).filter(|&i| reps[i] == i).collect();
        let slot = |i: usize| roots.iter().position(|&r| r == reps[i]).expect("every root is listed");

        let mut residual = vec![0.0; roots.len()];
        let mut scale: f64 = 1.0;
        for (e, y) in &self.oscillating {
            for i in 0..n {
                residual[slot(i)] += e[i] * y;
            }
            scale = scale.max(y.abs());
        }
        if residual.iter().any(|r| r.abs() > 1e-12 * scale) {
            return Ok(Complex64::new(0.0, 0.0));
        }

        let m = roots.len();
        let mut a = DMatrix::zeros(m, m);
        let mut b = DVector::zeros(m);
        let mut c = 0.0;
        for (i, f) in self.tests.iter().enumerate() {
            let inv = f.width.powi(-2);
            a[(slot(i), slot(i))] += inv;
            b[slot(i)] += f.center * inv;
            c -= 0.5 * f.center * f.center * inv;
        }
        let delta_weight = (2.0 * PI * self.energy.eval(0.0)).powi(self.weighted.len() as i32);
        let v = gaussian_integral(a, &b, &DVector::zeros(m), Complex64::new(c, 0.0))?;
        Ok(self.coeff * delta_weight * v)
    }
}

/// Ladder of smeared values of `t` with the unit energy smearing at 0.
pub fn term_convergence(
    t: &ScalarTerm,
    tests: &BTreeMap<TimeLabel, GaussianTest>,
    a: &Assignment,
    lambdas: &[f64],
) -> Result<Vec<ConvergenceRow>, NumericError> {
    term_convergence_with(t, tests, GaussianTest::standard(), a, lambdas)
}

pub fn term_convergence_with(
    t: &ScalarTerm,
    tests: &BTreeMap<TimeLabel, GaussianTest>,
    energy: GaussianTest,
    a: &Assignment,
    lambdas: &[f64],
) -> Result<Vec<ConvergenceRow>, NumericError> {
    let s = SmearedTerm::new(t, tests, energy, a)?;
    let target = s.target()?;
    lambdas.iter().map(|&l| Ok(ConvergenceRow::new(l, s.value(l)?, target))).collect()
}

/// Outcome of a ladder for a term with oscillating factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suppression {
    /// All oscillating arguments evaluate to zero; nothing to suppress.
    ZeroPhase,
    /// Last magnitude at most 10% of the first.
    Suppressed,
    NotSuppressed,
}

impl fmt::Display for Suppression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suppression::ZeroPhase => "none (zero phase)",
            Suppression::Suppressed => "suppressed",
            Suppression::NotSuppressed => "not suppressed",
        })
    }
}

pub fn suppression(s: &SmearedTerm, rows: &[ConvergenceRow]) -> Suppression {
    if s.has_zero_phase() {
        return Suppression::ZeroPhase;
    }
    match (rows.first(), rows.last()) {
        (Some(first), Some(last)) if rows.len() > 1 && last.value.norm() <= 0.1 * first.value.norm() => {
            Suppression::Suppressed
        }
        _ => Suppression::NotSuppressed,
    }
}

#[cfg(test)]
mod tests {
    use gauss_quad::GaussLegendre;

    use super::*;
    use crate::correlators::{pair_sum_term, Pairing};
    use crate::label::MomentumLabel;
    use crate::numerics::{delta_kernel, dot3};
    use crate::qalgebra::{parse_pattern, Word};

    fn four_point(pairs: Vec<(usize, usize)>) -> ScalarTerm {
        let w = Word::from_pattern(&parse_pattern("a a adag adag").unwrap());
        pair_sum_term(&w, &Pairing::new(pairs))
    }
    fn crossing() -> ScalarTerm {
        four_point(vec![(0, 2), (1, 3)])
    }
    fn nested() -> ScalarTerm {
        four_point(vec![(0, 3), (1, 2)])
    }
    fn unit_tests() -> BTreeMap<TimeLabel, GaussianTest> {
        (1..=4).map(|i| (TimeLabel::new(format!("t{i}")), GaussianTest::standard())).collect()
    }
    fn assignment(k2: [f64; 3]) -> Assignment {
        Assignment::new([(MomentumLabel::new("k1"), [1.0, 0.0, 0.0]), (MomentumLabel::new("k2"), k2)], [0.0; 3])
    }

    /// Direct quadrature in (t1, t2, τ1, τ2) with t3, t4 recovered from the
    /// contraction variables of the pairing; `cross` is the argument of the
    /// crossing factor (`None` for the nested term).
    fn brute_force(lambda: f64, cross: Option<f64>, nested: bool) -> Complex64 {
        let rule = GaussLegendre::new(std::num::NonZeroUsize::new(72).unwrap());
        let l2 = lambda * lambda;
        let f = GaussianTest::standard();
        let h = GaussianTest::standard();
        let mut total = Complex64::new(0.0, 0.0);
        for (t1, w1) in rule.nodes().zip(rule.weights()).map(|(x, w)| (8.0 * x, 8.0 * w)) {
            for (t2, w2) in rule.nodes().zip(rule.weights()).map(|(x, w)| (8.0 * x, 8.0 * w)) {
                for (s1, v1) in rule.nodes().zip(rule.weights()).map(|(x, w)| (8.0 * x, 8.0 * w)) {
                    for (s2, v2) in rule.nodes().zip(rule.weights()).map(|(x, w)| (8.0 * x, 8.0 * w)) {
                        let (t3, t4) = if nested { (t2 - l2 * s2, t1 - l2 * s1) } else { (t1 - l2 * s1, t2 - l2 * s2) };
                        let mut v = Complex64::new(f.eval(t1) * f.eval(t2) * f.eval(t3) * f.eval(t4), 0.0)
                            * h.fourier(s1)
                            * h.fourier(s2);
                        if let Some(y) = cross {
                            v *= Complex64::from_polar(1.0, -(t2 - t3) * y / l2);
                        }
                        total += v * (w1 * w2 * v1 * v2);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn closed_form_matches_direct_quadrature() {
        let a = assignment([1.0, 1.0, 0.0]);
        let y = dot3(&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]);
        for lambda in [1.0, 0.5] {
            let c = SmearedTerm::new(&crossing(), &unit_tests(), GaussianTest::standard(), &a).unwrap();
            let n = SmearedTerm::new(&nested(), &unit_tests(), GaussianTest::standard(), &a).unwrap();
            let (cv, nv) = (c.value(lambda).unwrap(), n.value(lambda).unwrap());
            let (cb, nb) = (brute_force(lambda, Some(y), false), brute_force(lambda, None, true));
            assert!((cv - cb).norm() < 1e-9 * nv.norm(), "crossing at {lambda}: {cv} vs {cb}");
            assert!((nv - nb).norm() < 1e-9 * nv.norm(), "nested at {lambda}: {nv} vs {nb}");
        }
    }

    #[test]
    fn nested_term_factorizes_into_delta_kernels() {
        let a = assignment([1.0, 1.0, 0.0]);
        let rows = term_convergence(&nested(), &unit_tests(), &a, &[1.0, 0.3, 0.1]).unwrap();
        let f = GaussianTest::standard();
        for r in &rows {
            let j = delta_kernel(&f, &f, &f, r.lambda).unwrap();
            assert!((r.value - j * j).norm() < 1e-10 * r.value.norm());
        }
        let limit = 2.0 * PI.powf(1.5);
        assert!((rows[0].target.re - limit * limit).abs() < 1e-9);
    }

    #[test]
    fn crossing_term_is_suppressed() {
        let a = assignment([1.0, 1.0, 0.0]);
        let lambdas = [1.0, 0.5, 0.2, 0.1];
        let c = SmearedTerm::new(&crossing(), &unit_tests(), GaussianTest::standard(), &a).unwrap();
        let rows = term_convergence(&crossing(), &unit_tests(), &a, &lambdas).unwrap();
        assert_eq!(rows[0].target, Complex64::new(0.0, 0.0));
        assert!(rows.windows(2).all(|w| w[1].value.norm() < w[0].value.norm()));
        assert_eq!(suppression(&c, &rows), Suppression::Suppressed);

        let nested_rows = term_convergence(&nested(), &unit_tests(), &a, &lambdas).unwrap();
        let ratio = |r: &[ConvergenceRow]| r[3].value.norm() / r[0].value.norm();
        assert!(ratio(&rows) <= 0.1 * ratio(&nested_rows));
    }

    #[test]
    fn orthogonal_momenta_leave_crossing_factor_trivial() {
        let a = assignment([0.0, 2.0, 0.0]);
        let c = SmearedTerm::new(&crossing(), &unit_tests(), GaussianTest::standard(), &a).unwrap();
        let rows = term_convergence(&crossing(), &unit_tests(), &a, &[1.0, 0.1]).unwrap();
        assert_eq!(suppression(&c, &rows), Suppression::ZeroPhase);
        assert!(rows[1].target.norm() > 1.0);
        let n = term_convergence(&nested(), &unit_tests(), &a, &[1.0, 0.1]).unwrap();
        assert!((rows[1].value - n[1].value).norm() < 1e-9 * n[1].value.norm());
    }

    #[test]
    fn input_errors() {
        let a = assignment([1.0, 1.0, 0.0]);
        let mut tests = unit_tests();
        tests.remove(&TimeLabel::new("t2"));
        assert_eq!(
            SmearedTerm::new(&crossing(), &tests, GaussianTest::standard(), &a).unwrap_err(),
            NumericError::UnassignedTime(TimeLabel::new("t2"))
        );
        let partial = Assignment::new([(MomentumLabel::new("k1"), [1.0, 0.0, 0.0])], [0.0; 3]);
        assert_eq!(
            SmearedTerm::new(&crossing(), &unit_tests(), GaussianTest::standard(), &partial).unwrap_err(),
            NumericError::UnassignedMomentum(MomentumLabel::new("k2"))
        );
        let raw = crossing().with_delta(DeltaFactor::momentum(&MomentumLabel::new("k0"), &MomentumLabel::new("k1")));
        assert!(matches!(
            SmearedTerm::new(&raw, &unit_tests(), GaussianTest::standard(), &a),
            Err(NumericError::UnappliedDelta(..))
        ));
    }
}
