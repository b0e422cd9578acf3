//! Canonical scalar arithmetic: phase atoms, oscillating exponents, delta
//! factors, and the canonical form that makes equality decidable.

mod atoms;
pub mod json;
pub mod latex;
mod term;

pub use atoms::{PhaseArg, PhaseAtom, TimeComb};
pub use term::{coeff_int, Coeff, ContractionPhase, DeltaFactor, MergedExponent, ScalarExpr, ScalarTerm, TermKey};

use crate::label::MomentumLabel;

pub fn canonicalize(e: &ScalarExpr) -> ScalarExpr {
    e.canonicalize()
}

pub fn substitute_momentum(e: &ScalarExpr, from: &MomentumLabel, to: &MomentumLabel) -> ScalarExpr {
    e.substitute_momentum(from, to)
}

pub fn multiply(a: &ScalarExpr, b: &ScalarExpr) -> ScalarExpr {
    a * b
}

pub fn add(a: &ScalarExpr, b: &ScalarExpr) -> ScalarExpr {
    a + b
}

pub fn merged_exponent(t: &ScalarTerm) -> MergedExponent {
    t.merged_exponent()
}
