//! The finite-λ module algebra: operator words, the commutation rules, the
//! annihilator expansion and the recursive vacuum correlator.
//!
//! Conventions: `q(Δt, x) = exp(-i Δt·x / λ²)` and
//!
//! ```text
//! a(x) a(y)  = q⁻¹(t_x - t_y, k_x·k_y) a(y) a(x)
//! a(x) a†(y) = q(t_x - t_y, k_x·k_y) a†(y) a(x)
//!            + λ⁻² q(t_x - t_y, ω̃(k_x) + k_x·p) δ(k_x - k_y) δ_{pol}
//! ```
//!
//! Scalars depending on `p` do not commute with generators:
//! `f(p) a†(κ) = a†(κ) f(p + κ)` and `f(p) a(κ) = a(κ) f(p - κ)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{is_valid_label, MomentumLabel, PolIndex, TimeLabel};
use crate::symbolic::{ContractionPhase, DeltaFactor, PhaseArg, PhaseAtom, ScalarExpr, ScalarTerm, TimeComb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Eps {
    #[serde(rename = "a")]
    Annihilate,
    #[serde(rename = "adag")]
    Create,
}

impl Eps {
    pub fn flip(self) -> Eps {
        match self {
            Eps::Annihilate => Eps::Create,
            Eps::Create => Eps::Annihilate,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Eps::Annihilate => "a",
            Eps::Create => "adag",
        }
    }
}

/// Parses a whitespace separated list of `a` / `adag`.
pub fn parse_pattern(s: &str) -> Option<Vec<Eps>> {
    s.split_whitespace()
        .map(|tok| match tok {
            "a" => Some(Eps::Annihilate),
            "adag" => Some(Eps::Create),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub eps: Eps,
    pub t: TimeLabel,
    pub k: MomentumLabel,
    pub pol: PolIndex,
}

impl Generator {
    pub fn a(t: impl AsRef<str>, k: impl AsRef<str>) -> Self {
        Generator { eps: Eps::Annihilate, t: TimeLabel::new(t), k: MomentumLabel::new(k), pol: None }
    }

    pub fn adag(t: impl AsRef<str>, k: impl AsRef<str>) -> Self {
        Generator { eps: Eps::Create, t: TimeLabel::new(t), k: MomentumLabel::new(k), pol: None }
    }

    pub fn with_pol(self, pol: u8) -> Self {
        Generator { pol: Some(pol), ..self }
    }

    pub fn is_creator(&self) -> bool {
        self.eps == Eps::Create
    }

    pub fn is_annihilator(&self) -> bool {
        self.eps == Eps::Annihilate
    }

    pub fn adjoint(&self) -> Self {
        Generator { eps: self.eps.flip(), ..self.clone() }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.is_creator() { "a†" } else { "a" };
        write!(f, "{op}({},{}", self.t, self.k)?;
        if let Some(j) = self.pol {
            write!(f, ";{j}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Scalar,
    Polarized,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("time label {0} appears more than once")]
    DuplicateTime(TimeLabel),
    #[error("momentum label {0} appears more than once")]
    DuplicateMomentum(MomentumLabel),
    #[error("momentum label \"p\" is reserved for the atomic momentum")]
    ReservedMomentum,
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("polarization index {0} is outside 1..=3")]
    PolOutOfRange(u8),
    #[error("polarization indices must be given for all generators or none")]
    MixedPolarization,
    #[error("generator {0} has no polarization index in polarized mode")]
    MissingPol(usize),
    #[error("generator {0} has a polarization index in scalar mode")]
    UnexpectedPol(usize),
    #[error("expansion needs a word starting with an annihilator")]
    NoLeadingAnnihilator,
}

/// An operator monomial with pairwise distinct time and momentum labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    gens: Vec<Generator>,
}

impl Word {
    pub fn new(gens: Vec<Generator>) -> Result<Self, WordError> {
        let mut times = BTreeSet::new();
        let mut momenta = BTreeSet::new();
        for g in &gens {
            for s in [g.t.as_str(), g.k.as_str()] {
                if !is_valid_label(s) {
                    return Err(WordError::InvalidLabel(s.to_string()));
                }
            }
            if g.k.as_str() == "p" {
                return Err(WordError::ReservedMomentum);
            }
            if !times.insert(g.t.clone()) {
                return Err(WordError::DuplicateTime(g.t.clone()));
            }
            if !momenta.insert(g.k.clone()) {
                return Err(WordError::DuplicateMomentum(g.k.clone()));
            }
            if let Some(j) = g.pol {
                if !(1..=3).contains(&j) {
                    return Err(WordError::PolOutOfRange(j));
                }
            }
        }
        let with_pol = gens.iter().filter(|g| g.pol.is_some()).count();
        if with_pol != 0 && with_pol != gens.len() {
            return Err(WordError::MixedPolarization);
        }
        Ok(Word { gens })
    }

    /// Generators with labels `t1, k1, t2, k2, ...` in the given order.
    pub fn from_pattern(eps: &[Eps]) -> Self {
        Self::labelled(eps, |_| None)
    }

    /// As [`Word::from_pattern`] with polarization `pols[i]` on generator `i`.
    pub fn from_pattern_with_pols(eps: &[Eps], pols: &[u8]) -> Result<Self, WordError> {
        assert_eq!(eps.len(), pols.len());
        Word::new(Self::labelled(eps, |i| Some(pols[i])).gens)
    }

    fn labelled(eps: &[Eps], pol: impl Fn(usize) -> PolIndex) -> Self {
        let gens = eps
            .iter()
            .enumerate()
            .map(|(i, &e)| Generator {
                eps: e,
                t: TimeLabel::new(format!("t{}", i + 1)),
                k: MomentumLabel::new(format!("k{}", i + 1)),
                pol: pol(i),
            })
            .collect();
        Word { gens }
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn pattern(&self) -> Vec<Eps> {
        self.gens.iter().map(|g| g.eps).collect()
    }

    pub fn mode(&self) -> Mode {
        if self.gens.iter().any(|g| g.pol.is_some()) {
            Mode::Polarized
        } else {
            Mode::Scalar
        }
    }

    pub fn creator_count(&self) -> usize {
        self.gens.iter().filter(|g| g.is_creator()).count()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.creator_count() == self.len()
    }

    /// Reversed word with creators and annihilators exchanged.
    pub fn adjoint(&self) -> Word {
        Word { gens: self.gens.iter().rev().map(Generator::adjoint).collect() }
    }

    /// The word with generator `i` removed. Sub-words of valid words are valid.
    pub fn without(&self, i: usize) -> Word {
        let mut gens = self.gens.clone();
        gens.remove(i);
        Word { gens }
    }

    pub fn swapped(&self, i: usize) -> Word {
        let mut gens = self.gens.clone();
        gens.swap(i, i + 1);
        Word { gens }
    }

    pub fn from_json(s: &str) -> Result<Word, WordFileError> {
        let file: WordFile = serde_json::from_str(s)?;
        file.into_word()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WordFile::from(self)).expect("words always serialize")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum WordFileError {
    #[error("malformed word file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid word: {0}")]
    Invalid(#[from] WordError),
}

/// On-disk word document: `{"mode":"scalar","word":[{"op":"a","t":"t1","k":"k1"}]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    #[serde(default)]
    pub mode: Mode,
    pub word: Vec<GeneratorRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    pub op: Eps,
    pub t: String,
    pub k: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pol: Option<u8>,
}

impl WordFile {
    pub fn into_word(self) -> Result<Word, WordFileError> {
        let mut gens = Vec::with_capacity(self.word.len());
        for (i, r) in self.word.into_iter().enumerate() {
            match (self.mode, r.pol) {
                (Mode::Scalar, Some(_)) => return Err(WordError::UnexpectedPol(i + 1).into()),
                (Mode::Polarized, None) => return Err(WordError::MissingPol(i + 1).into()),
                _ => {}
            }
            for s in [&r.t, &r.k] {
                if !is_valid_label(s) {
                    return Err(WordError::InvalidLabel(s.clone()).into());
                }
            }
            gens.push(Generator { eps: r.op, t: TimeLabel::new(&r.t), k: MomentumLabel::new(&r.k), pol: r.pol });
        }
        Ok(Word::new(gens)?)
    }
}

impl From<&Word> for WordFile {
    fn from(w: &Word) -> Self {
        WordFile {
            mode: w.mode(),
            word: w
                .gens
                .iter()
                .map(|g| GeneratorRecord { op: g.eps, t: g.t.to_string(), k: g.k.to_string(), pol: g.pol })
                .collect(),
        }
    }
}

/// A scalar standing to the right of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedWord {
    pub scalar: ScalarTerm,
    pub word: Word,
}

fn dot_phase(x: &Generator, y: &Generator) -> ContractionPhase {
    ContractionPhase::unweighted(TimeComb::diff(&x.t, &y.t), PhaseArg::atom(PhaseAtom::dot(&x.k, &y.k)))
}

/// `a(x) a(y) = q⁻¹(t_x - t_y, k_x·k_y) a(y) a(x)`.
pub fn rewrite_aa(x: &Generator, y: &Generator) -> WeightedWord {
    debug_assert!(x.is_annihilator() && y.is_annihilator());
    WeightedWord {
        scalar: ScalarTerm::phase(dot_phase(x, y).inverse()).canonical_or_zero(),
        word: Word { gens: vec![y.clone(), x.clone()] },
    }
}

/// The `a a†` exchange: the swapped word and the contraction scalar.
pub fn rewrite_a_adag(x: &Generator, y: &Generator) -> (WeightedWord, ScalarTerm) {
    debug_assert!(x.is_annihilator() && y.is_creator());
    let swapped = WeightedWord {
        scalar: ScalarTerm::phase(dot_phase(x, y)).canonical_or_zero(),
        word: Word { gens: vec![y.clone(), x.clone()] },
    };
    (swapped, contraction(x, y).canonical_or_zero())
}

/// `λ⁻² q(t_x - t_y, ω̃(k_x) + k_x·p) δ(k_x - k_y) δ_{pol}`.
pub fn contraction(x: &Generator, y: &Generator) -> ScalarTerm {
    let phase = ContractionPhase::weighted(TimeComb::diff(&x.t, &y.t), PhaseArg::bare_contraction(&x.k));
    let mut t = ScalarTerm::phase(phase).with_delta(DeltaFactor::momentum(&x.k, &y.k));
    if let (Some(i), Some(j)) = (x.pol, y.pol) {
        t = t.with_delta(DeltaFactor::Pol(i, j));
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

fn shift_arg(x: &PhaseArg, kappa: &MomentumLabel, sign: i64) -> PhaseArg {
    let mut out = x.clone();
    for (a, c) in x.iter() {
        if let PhaseAtom::DotP(k) = a {
            out.add_term(PhaseAtom::dot(k, kappa), sign * c);
        }
    }
    out
}

/// Moves a `p`-dependent scalar past `g` in the given direction.
///
/// Rightward past a creator of momentum κ maps `k·p` to `k·p + k·κ`, past an
/// annihilator to `k·p - k·κ`; leftward moves use the opposite signs.
pub fn shift_p(s: &ScalarTerm, g: &Generator, direction: Direction) -> ScalarTerm {
    let sign = match (direction, g.eps) {
        (Direction::Right, Eps::Create) | (Direction::Left, Eps::Annihilate) => 1,
        (Direction::Right, Eps::Annihilate) | (Direction::Left, Eps::Create) => -1,
    };
    ScalarTerm {
        phases: s
            .phases
            .iter()
            .map(|ph| ContractionPhase { arg: shift_arg(&ph.arg, &g.k, sign), ..ph.clone() })
            .collect(),
        deltas: s
            .deltas
            .iter()
            .map(|d| match d {
                DeltaFactor::Phase(x) => DeltaFactor::Phase(shift_arg(x, &g.k, sign)),
                other => other.clone(),
            })
            .collect(),
        ..s.clone()
    }
}

/// Commutes the leading annihilator through the word, one term per creator
/// it can contract with.
///
/// For the `j`-th creator the scalar is the contraction, moved to the far
/// right of the remaining word, times an exchange phase for every generator
/// standing before that creator. The remaining word keeps its order.
pub fn expand_leftmost(w: &Word) -> Result<Vec<WeightedWord>, WordError> {
    let (x, tail) = match w.gens.split_first() {
        Some((x, tail)) if x.is_annihilator() => (x, tail),
        _ => return Err(WordError::NoLeadingAnnihilator),
    };
    let mut out = Vec::new();
    for (j, y) in tail.iter().enumerate().filter(|(_, g)| g.is_creator()) {
        let mut scalar = contraction(x, y);
        for g in &tail[j + 1..] {
            scalar = shift_p(&scalar, g, Direction::Right);
        }
        for g in &tail[..j] {
            let ph = dot_phase(x, g);
            scalar = scalar.with_phase(if g.is_creator() { ph } else { ph.inverse() });
        }
        let mut gens = tail.to_vec();
        gens.remove(j);
        out.push(WeightedWord { scalar: scalar.canonical_or_zero(), word: Word { gens } });
    }
    Ok(out)
}

/// Vacuum expectation `⟨Ψ, w Ψ⟩` by repeated expansion of the leading annihilator.
pub fn correlator_recursive(w: &Word) -> ScalarExpr {
    if !w.is_balanced() {
        return ScalarExpr::zero();
    }
    let mut terms = Vec::new();
    reduce(w, ScalarTerm::one(), &mut terms);
    ScalarExpr::from_terms(terms)
}

fn reduce(w: &Word, acc: ScalarTerm, out: &mut Vec<ScalarTerm>) {
    match (w.gens.first(), w.gens.last()) {
        (None, _) => out.push(acc),
        (Some(first), _) if first.is_creator() => {}
        (_, Some(last)) if last.is_annihilator() => {}
        _ => {
            for ww in expand_leftmost(w).expect("leading generator is an annihilator") {
                if ww.scalar.coeff == num_traits::Zero::zero() {
                    continue;
                }
                reduce(&ww.word, &ww.scalar * &acc, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{coeff_int, Coeff};

    fn k(s: &str) -> MomentumLabel {
        MomentumLabel::new(s)
    }
    fn t(s: &str) -> TimeLabel {
        TimeLabel::new(s)
    }
    fn w(ops: &str) -> Word {
        Word::from_pattern(&parse_pattern(ops).unwrap())
    }
    fn q(a: &str, b: &str, x: PhaseArg) -> ContractionPhase {
        ContractionPhase::unweighted(TimeComb::diff(&t(a), &t(b)), x)
    }
    fn dot(a: &str, b: &str) -> PhaseArg {
        PhaseArg::atom(PhaseAtom::dot(&k(a), &k(b)))
    }
    fn two_point() -> ScalarExpr {
        ScalarExpr::from_term(
            ScalarTerm::phase(ContractionPhase::weighted(
                TimeComb::diff(&t("t1"), &t("t2")),
                PhaseArg::bare_contraction(&k("k1")),
            ))
            .with_delta(DeltaFactor::momentum(&k("k1"), &k("k2"))),
        )
    }

    #[test]
    fn aa_exchange_phase() {
        let (x, y) = (Generator::a("t1", "k1"), Generator::a("t2", "k2"));
        let ww = rewrite_aa(&x, &y);
        assert_eq!(ww.word.gens(), &[y.clone(), x.clone()]);
        assert_eq!(
            ScalarExpr::from_term(ww.scalar.clone()),
            ScalarExpr::from_term(ScalarTerm::phase(q("t1", "t2", dot("k1", "k2")).inverse()))
        );

        let back = rewrite_aa(&y, &x);
        assert_eq!(back.word.gens(), &[x.clone(), y.clone()]);
        assert_eq!(ScalarExpr::from_term(&ww.scalar * &back.scalar), ScalarExpr::one());

        let polarized = rewrite_aa(&x.clone().with_pol(1), &y.clone().with_pol(3));
        assert_eq!(polarized.scalar, ww.scalar);
    }

    #[test]
    fn a_adag_exchange() {
        let (x, y) = (Generator::a("t1", "k1"), Generator::adag("t2", "k2"));
        let (swapped, c) = rewrite_a_adag(&x, &y);
        assert_eq!(swapped.word.gens(), &[y.clone(), x.clone()]);
        assert_eq!(
            ScalarExpr::from_term(swapped.scalar),
            ScalarExpr::from_term(ScalarTerm::phase(q("t1", "t2", dot("k1", "k2"))))
        );
        assert_eq!(ScalarExpr::from_term(c.clone()), two_point());

        let (_, c) = rewrite_a_adag(&x.clone().with_pol(1), &y.clone().with_pol(2));
        assert_eq!(c.coeff, coeff_int(0));
        let (_, c) = rewrite_a_adag(&x.with_pol(2), &y.with_pol(2));
        assert_eq!(ScalarExpr::from_term(c), two_point());
    }

    #[test]
    fn shift_past_creator() {
        let d = ScalarTerm::delta(DeltaFactor::Phase(PhaseArg::bare_contraction(&k("k2"))));
        let moved = shift_p(&d, &Generator::adag("t4", "k1"), Direction::Right);
        let want = PhaseArg::bare_contraction(&k("k2")).with_term(PhaseAtom::dot(&k("k1"), &k("k2")), 1);
        assert_eq!(moved.deltas, vec![DeltaFactor::Phase(want)]);

        let plain = ScalarTerm::phase(q("t1", "t2", dot("k1", "k2")));
        assert_eq!(shift_p(&plain, &Generator::a("t3", "k3"), Direction::Right), plain);

        for g in [Generator::adag("t4", "k1"), Generator::a("t4", "k1")] {
            let there = shift_p(&d, &g, Direction::Right);
            assert_eq!(shift_p(&there, &g, Direction::Left), d);
        }
    }

    #[test]
    fn expansion_shapes() {
        let e = expand_leftmost(&w("a adag")).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].word.is_empty());
        assert_eq!(ScalarExpr::from_term(e[0].scalar.clone()), two_point());

        assert_eq!(expand_leftmost(&w("a adag adag")).unwrap().len(), 2);
        assert_eq!(expand_leftmost(&w("a a adag a adag adag")).unwrap().len(), 3);
        assert_eq!(expand_leftmost(&w("adag a")), Err(WordError::NoLeadingAnnihilator));
        assert_eq!(expand_leftmost(&Word::default()), Err(WordError::NoLeadingAnnihilator));
    }

    #[test]
    fn small_correlators() {
        assert_eq!(correlator_recursive(&Word::default()), ScalarExpr::one());
        assert!(correlator_recursive(&w("adag a")).is_zero());
        assert_eq!(correlator_recursive(&w("a adag")), two_point());
        assert!(correlator_recursive(&w("a adag adag")).is_zero());
    }

    #[test]
    fn four_point_block_word() {
        let c = correlator_recursive(&w("a a adag adag"));
        let nested = ScalarTerm::phase(ContractionPhase::weighted(
            TimeComb::diff(&t("t1"), &t("t4")),
            PhaseArg::bare_contraction(&k("k1")),
        ))
        .with_phase(ContractionPhase::weighted(
            TimeComb::diff(&t("t2"), &t("t3")),
            PhaseArg::bare_contraction(&k("k2")).with_term(PhaseAtom::dot(&k("k1"), &k("k2")), 1),
        ))
        .with_delta(DeltaFactor::momentum(&k("k1"), &k("k4")))
        .with_delta(DeltaFactor::momentum(&k("k2"), &k("k3")));
        let crossing = ScalarTerm::phase(ContractionPhase::weighted(
            TimeComb::diff(&t("t1"), &t("t3")),
            PhaseArg::bare_contraction(&k("k1")),
        ))
        .with_phase(ContractionPhase::weighted(
            TimeComb::diff(&t("t2"), &t("t4")),
            PhaseArg::bare_contraction(&k("k2")),
        ))
        .with_phase(q("t2", "t3", dot("k1", "k2")))
        .with_delta(DeltaFactor::momentum(&k("k1"), &k("k3")))
        .with_delta(DeltaFactor::momentum(&k("k2"), &k("k4")));
        assert_eq!(c, ScalarExpr::from_terms([nested, crossing]));
    }

    fn all_patterns(len: usize) -> impl Iterator<Item = Vec<Eps>> {
        (0..1u32 << len)
            .map(move |bits| (0..len).map(|i| if bits >> i & 1 == 1 { Eps::Create } else { Eps::Annihilate }).collect())
    }

    #[test]
    fn odd_or_unbalanced_words_vanish() {
        for len in 1..=7 {
            for p in all_patterns(len) {
                let word = Word::from_pattern(&p);
                if !word.is_balanced() {
                    assert!(correlator_recursive(&word).is_zero(), "{word}");
                }
            }
        }
    }

    #[test]
    fn adjoint_gives_conjugate() {
        for len in [2, 4, 6] {
            for p in all_patterns(len) {
                let word = Word::from_pattern(&p);
                assert_eq!(correlator_recursive(&word.adjoint()), correlator_recursive(&word).conj(), "{word}");
            }
        }
    }

    #[test]
    fn annihilator_exchange_preserves_correlator() {
        for len in [4, 6] {
            for p in all_patterns(len) {
                let word = Word::from_pattern(&p);
                let lhs = correlator_recursive(&word);
                for i in 0..len - 1 {
                    let (x, y) = (&word.gens()[i], &word.gens()[i + 1]);
                    if x.is_annihilator() && y.is_annihilator() {
                        let ww = rewrite_aa(x, y);
                        let rhs = &correlator_recursive(&word.swapped(i)) * &ScalarExpr::from_term(ww.scalar);
                        assert_eq!(lhs, rhs, "{word} at {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn word_validation() {
        let dup_t = vec![Generator::a("t1", "k1"), Generator::adag("t1", "k2")];
        assert_eq!(Word::new(dup_t), Err(WordError::DuplicateTime(t("t1"))));
        let dup_k = vec![Generator::a("t1", "k1"), Generator::adag("t2", "k1")];
        assert_eq!(Word::new(dup_k), Err(WordError::DuplicateMomentum(k("k1"))));
        assert_eq!(Word::new(vec![Generator::a("t1", "p")]), Err(WordError::ReservedMomentum));
        let mixed = vec![Generator::a("t1", "k1").with_pol(1), Generator::adag("t2", "k2")];
        assert_eq!(Word::new(mixed), Err(WordError::MixedPolarization));
        assert_eq!(Word::new(vec![Generator::a("t1", "k1").with_pol(4)]), Err(WordError::PolOutOfRange(4)));
    }

    #[test]
    fn word_json() {
        let s = r#"{"mode":"polarized","word":[{"op":"a","t":"t1","k":"k1","pol":1},{"op":"adag","t":"t2","k":"k2","pol":1}]}"#;
        let word = Word::from_json(s).unwrap();
        assert_eq!(word.mode(), Mode::Polarized);
        assert_eq!(word.to_json(), s);

        assert!(matches!(Word::from_json(r#"{"word":[{"op":"b","t":"t1","k":"k1"}]}"#), Err(WordFileError::Json(_))));
        assert!(matches!(
            Word::from_json(r#"{"mode":"scalar","word":[{"op":"a","t":"t1","k":"k1","pol":2}]}"#),
            Err(WordFileError::Invalid(WordError::UnexpectedPol(1)))
        ));
        assert!(matches!(
            Word::from_json(r#"{"mode":"polarized","word":[{"op":"a","t":"t1","k":"k1"}]}"#),
            Err(WordFileError::Invalid(WordError::MissingPol(1)))
        ));
        assert!(matches!(
            Word::from_json(r#"{"word":[{"op":"a","t":"t 1","k":"k1"}]}"#),
            Err(WordFileError::Invalid(WordError::InvalidLabel(_)))
        ));
    }

    #[test]
    fn conjugate_coefficients() {
        let c = Coeff::new(1.into(), 2.into());
        let e = ScalarExpr::one().scale(c);
        assert_eq!(e.conj().terms()[0].coeff, c.conj());
    }
}
