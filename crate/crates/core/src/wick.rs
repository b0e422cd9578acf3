//! The λ → 0 limit: the structural limit map on closed-form terms, the
//! rewriting engine of the limit algebra, and the non-crossing Wick formula.
//!
//! In the limit `λ⁻² q(Δt, x) → 2π δ(Δt) δ(x)` and `q(Δt, x) → 0` for a
//! nonvanishing exponent, and the limit generators obey
//! `b(t,k) b†(t',k') = 2π δ(t - t') δ(ω̃(k) + k·p) δ(k - k')`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::correlators::{straddle_set, Pairing};
use crate::label::TimeLabel;
use crate::qalgebra::{shift_p, Direction, Generator, Word};
use crate::symbolic::{ContractionPhase, DeltaFactor, PhaseArg, PhaseAtom, ScalarExpr, ScalarTerm, TimeComb};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitError {
    #[error("term {index} has lambda power {found} but {weighted} weighted phases")]
    LambdaMismatch { index: usize, found: i32, weighted: usize },
}

/// The unique non-crossing pairing, by a right-to-left stack scan.
pub fn noncrossing_match(w: &Word) -> Option<Pairing> {
    let mut stack = Vec::new();
    let mut pairs = Vec::new();
    for (i, g) in w.gens().iter().enumerate().rev() {
        if g.is_creator() {
            stack.push(i);
        } else {
            pairs.push((i, stack.pop()?));
        }
    }
    stack.is_empty().then(|| Pairing::new(pairs))
}

struct TimeClasses(BTreeMap<TimeLabel, TimeLabel>);

impl TimeClasses {
    fn find(&self, t: &TimeLabel) -> TimeLabel {
        let mut cur = t.clone();
        while let Some(p) = self.0.get(&cur) {
            cur = p.clone();
        }
        cur
    }

    fn union(&mut self, a: &TimeLabel, b: &TimeLabel) {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => {
                self.0.insert(rb, ra);
            }
            std::cmp::Ordering::Greater => {
                self.0.insert(ra, rb);
            }
            std::cmp::Ordering::Equal => {}
        }
    }
}

fn limit_term(t: &ScalarTerm) -> Option<ScalarTerm> {
    let mut out = ScalarTerm { lambda_power: 0, phases: Vec::new(), ..t.clone() };
    let mut classes = TimeClasses(BTreeMap::new());
    let mut oscillating = Vec::new();
    for p in &t.phases {
        if p.weighted {
            out.two_pi_power += 1;
            out.deltas.push(DeltaFactor::Time(p.time.clone()));
            out.deltas.push(DeltaFactor::Phase(p.arg.clone()));
            if let Some((a, b)) = p.time.as_difference() {
                classes.union(a, b);
            }
        } else {
            oscillating.push(p);
        }
    }
    let survivors = ScalarTerm {
        phases: oscillating
            .into_iter()
            .map(|p| ContractionPhase { time: p.time.rename_times(&|l| classes.find(l)), ..p.clone() })
            .collect(),
        ..ScalarTerm::one()
    };
    survivors.merged_exponent().is_zero().then_some(out)
}

/// Replaces every weighted phase by `2π δ(Δt) δ(x)` and drops terms whose
/// remaining oscillation does not cancel once the time deltas are imposed.
pub fn limit_of_pair_sum(e: &ScalarExpr) -> Result<ScalarExpr, LimitError> {
    let mut terms = Vec::new();
    for (index, t) in e.terms().iter().enumerate() {
        let weighted = t.weighted_count();
        if t.lambda_power != -2 * weighted as i32 {
            return Err(LimitError::LambdaMismatch { index, found: t.lambda_power, weighted });
        }
        terms.extend(limit_term(t));
    }
    Ok(ScalarExpr::from_terms(terms))
}

fn limit_contraction(x: &Generator, y: &Generator, shift: PhaseArg) -> ScalarTerm {
    let mut t = ScalarTerm { two_pi_power: 1, ..ScalarTerm::one() }
        .with_delta(DeltaFactor::Time(TimeComb::diff(&x.t, &y.t)))
        .with_delta(DeltaFactor::Phase(&PhaseArg::bare_contraction(&x.k) + &shift))
        .with_delta(DeltaFactor::momentum(&x.k, &y.k));
    if let (Some(i), Some(j)) = (x.pol, y.pol) {
        t = t.with_delta(DeltaFactor::Pol(i, j));
    }
    t
}

/// Closed-form limit correlator: one term for the non-crossing pairing.
pub fn wick_correlator(w: &Word) -> ScalarExpr {
    if !w.is_balanced() {
        return ScalarExpr::zero();
    }
    let Some(pairing) = noncrossing_match(w) else {
        return ScalarExpr::zero();
    };
    let g = w.gens();
    let mut term = ScalarTerm::one();
    for &h in pairing.pairs() {
        let shift = straddle_set(&pairing, h).into_iter().map(|a| (PhaseAtom::dot(&g[a.0].k, &g[h.0].k), 1)).collect();
        term = &term * &limit_contraction(&g[h.0], &g[h.1], shift);
    }
    ScalarExpr::from_term(term)
}

/// Limit correlator by rewriting: contract the leftmost adjacent `b b†`, move
/// the produced scalar to the far right, repeat; a nonempty word without an
/// adjacent `b b†` is normal ordered and has zero vacuum expectation.
pub fn limit_rewrite_correlator(w: &Word) -> ScalarExpr {
    let mut gens = w.gens().to_vec();
    let mut acc = ScalarTerm::one();
    while !gens.is_empty() {
        let Some(i) = gens.windows(2).position(|p| p[0].is_annihilator() && p[1].is_creator()) else {
            return ScalarExpr::zero();
        };
        let mut s = limit_contraction(&gens[i], &gens[i + 1], PhaseArg::zero());
        for g in &gens[i + 2..] {
            s = shift_p(&s, g, Direction::Right);
        }
        acc = &s * &acc;
        gens.drain(i..i + 2);
    }
    ScalarExpr::from_term(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::{enumerate_pairings, pair_sum_correlator, pair_sum_term};
    use crate::label::MomentumLabel;
    use crate::qalgebra::{parse_pattern, Eps};

    fn w(ops: &str) -> Word {
        Word::from_pattern(&parse_pattern(ops).unwrap())
    }
    fn k(s: &str) -> MomentumLabel {
        MomentumLabel::new(s)
    }
    fn t(s: &str) -> TimeLabel {
        TimeLabel::new(s)
    }
    fn all_patterns(len: usize) -> impl Iterator<Item = Vec<Eps>> {
        (0..1u32 << len)
            .map(move |bits| (0..len).map(|i| if bits >> i & 1 == 1 { Eps::Create } else { Eps::Annihilate }).collect())
    }
    fn energy(a: &str, shifts: &[(&str, &str)]) -> DeltaFactor {
        DeltaFactor::Phase(
            shifts
                .iter()
                .fold(PhaseArg::bare_contraction(&k(a)), |x, (p, q)| x.with_term(PhaseAtom::dot(&k(p), &k(q)), 1)),
        )
    }
    fn time(a: &str, b: &str) -> DeltaFactor {
        DeltaFactor::Time(TimeComb::diff(&t(a), &t(b)))
    }

    #[test]
    fn stack_match() {
        assert_eq!(noncrossing_match(&w("a adag")), Some(Pairing::new(vec![(0, 1)])));
        assert_eq!(noncrossing_match(&w("a a adag adag")), Some(Pairing::new(vec![(0, 3), (1, 2)])));
        assert_eq!(noncrossing_match(&w("adag a")), None);
        assert_eq!(noncrossing_match(&w("a a adag")), None);
    }

    #[test]
    fn two_point_limit() {
        let want = ScalarExpr::from_term(
            ScalarTerm { two_pi_power: 1, ..ScalarTerm::one() }
                .with_delta(time("t1", "t2"))
                .with_delta(energy("k1", &[]))
                .with_delta(DeltaFactor::momentum(&k("k1"), &k("k2"))),
        );
        let word = w("a adag");
        assert_eq!(limit_of_pair_sum(&pair_sum_correlator(&word)).unwrap(), want);
        assert_eq!(wick_correlator(&word), want);
        assert_eq!(limit_rewrite_correlator(&word), want);
        assert!(wick_correlator(&w("adag a")).is_zero());
        assert!(limit_rewrite_correlator(&w("adag a")).is_zero());
    }

    #[test]
    fn four_point_limits() {
        let word = w("a a adag adag");
        let nested = ScalarExpr::from_term(
            ScalarTerm { two_pi_power: 2, ..ScalarTerm::one() }
                .with_delta(DeltaFactor::momentum(&k("k1"), &k("k4")))
                .with_delta(DeltaFactor::momentum(&k("k2"), &k("k3")))
                .with_delta(time("t1", "t4"))
                .with_delta(energy("k1", &[]))
                .with_delta(time("t2", "t3"))
                .with_delta(energy("k2", &[("k1", "k2")])),
        );
        let nested_term = pair_sum_term(&word, &Pairing::new(vec![(0, 3), (1, 2)]));
        assert_eq!(limit_of_pair_sum(&ScalarExpr::from_term(nested_term)).unwrap(), nested);
        let crossing_term = pair_sum_term(&word, &Pairing::new(vec![(0, 2), (1, 3)]));
        assert!(limit_of_pair_sum(&ScalarExpr::from_term(crossing_term)).unwrap().is_zero());
        assert_eq!(wick_correlator(&word), nested);
        assert_eq!(limit_rewrite_correlator(&word), nested);
    }

    #[test]
    fn six_point_block_word_shifts() {
        let word = w("a a a adag adag adag");
        let c = wick_correlator(&word);
        assert_eq!(c.len(), 1);
        let deltas = &c.terms()[0].deltas;
        assert!(deltas.contains(&energy("k1", &[]).clone()));
        assert!(deltas.contains(&energy("k2", &[("k1", "k2")])));
        assert!(deltas.contains(&energy("k3", &[("k1", "k3"), ("k2", "k3")])));
        assert_eq!(limit_rewrite_correlator(&word), c);
    }

    #[test]
    fn rejects_inconsistent_lambda_power() {
        let p = ContractionPhase::weighted(TimeComb::diff(&t("t1"), &t("t2")), PhaseArg::bare_contraction(&k("k1")));
        let bad = ScalarTerm { lambda_power: 0, ..ScalarTerm::phase(p) };
        assert_eq!(
            limit_of_pair_sum(&ScalarExpr::raw(vec![bad])),
            Err(LimitError::LambdaMismatch { index: 0, found: 0, weighted: 1 })
        );
    }

    #[test]
    fn triple_agreement_and_crossing_annihilation() {
        for len in (0..=8).step_by(2) {
            for p in all_patterns(len) {
                for word in [Word::from_pattern(&p), Word::from_pattern_with_pols(&p, &vec![2; len]).unwrap()] {
                    let closed = wick_correlator(&word);
                    assert_eq!(limit_of_pair_sum(&pair_sum_correlator(&word)).unwrap(), closed, "{word}");
                    assert_eq!(limit_rewrite_correlator(&word), closed, "{word}");
                    for t in closed.terms() {
                        assert_eq!(t.two_pi_power as usize, len / 2);
                    }

                    let pairings = enumerate_pairings(&word);
                    assert_eq!(noncrossing_match(&word).is_some(), !pairings.is_empty());
                    assert!(pairings.iter().filter(|p| p.is_noncrossing()).count() <= 1);
                    for pairing in pairings.iter().filter(|p| !p.is_noncrossing()) {
                        let term = ScalarExpr::from_term(pair_sum_term(&word, pairing));
                        assert!(limit_of_pair_sum(&term).unwrap().is_zero(), "{word} {pairing}");
                    }
                }
            }
        }
    }
}
