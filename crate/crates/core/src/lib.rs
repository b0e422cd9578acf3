//! Computer algebra for rescaled field operators whose commutation relations
//! carry an oscillating, momentum-dependent factor `q(t, x) = exp(-i t x / λ²)`:
//! vacuum correlators at finite λ, in the λ → 0 limit, and numerical checks of
//! the limit.
//!
//! Three independent routes lead to every correlator: the recursive expansion
//! of [`qalgebra`], the pair-partition formula of [`correlators`], and, in the
//! limit, the non-crossing formula and rewriting engine of [`wick`].

pub mod correlators;
pub mod label;
pub mod numerics;
pub mod qalgebra;
pub mod symbolic;
pub mod verify;
pub mod wick;

pub use correlators::{enumerate_pairings, pair_sum_correlator, pair_sum_term, Pairing, StraddleRule};
pub use label::{MomentumLabel, PolIndex, TimeLabel};
pub use qalgebra::{correlator_recursive, Eps, Generator, Mode, WeightedWord, Word, WordError, WordFileError};
pub use symbolic::{
    Coeff, ContractionPhase, DeltaFactor, MergedExponent, PhaseArg, PhaseAtom, ScalarExpr, ScalarTerm, TimeComb,
};
pub use wick::{limit_of_pair_sum, limit_rewrite_correlator, noncrossing_match, wick_correlator, LimitError};
