//! Closed-form finite-λ correlators as a sum over pair partitions.
//!
//! Each pairing of annihilators with later creators contributes
//!
//! ```text
//! Π_h δ(k_{m_h} - k_{m'_h}) λ⁻² q(t_{m_h} - t_{m'_h}, ω̃(k_{m_h}) + k_{m_h}·p + Σ_α k_{m_α}·k_{m_h})
//!   × Π_{m_j < m_i < m'_j < m'_i} q(t_{m_i} - t_{m'_j}, k_{m_i}·k_{m_j})
//! ```
//!
//! where the shift sum runs over the pairs α enclosing h (`m_α < m_h < m'_h < m'_α`).

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::qalgebra::Word;
use crate::symbolic::{ContractionPhase, DeltaFactor, PhaseArg, PhaseAtom, ScalarExpr, ScalarTerm, TimeComb};

/// A contraction pattern: `(annihilator, creator)` positions, 0-based, sorted
/// by annihilator position. Serializes 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort();
        Pairing { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of crossing pattern occurrences.
    pub fn crossing_count(&self) -> usize {
        let mut n = 0;
        for (i, a) in self.pairs.iter().enumerate() {
            for b in &self.pairs[i + 1..] {
                if is_crossing(*a, *b) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn is_noncrossing(&self) -> bool {
        self.crossing_count() == 0
    }

    /// 1-based pairs, the form used in output.
    pub fn one_based(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(a, c)| (a + 1, c + 1)).collect()
    }
}

impl Serialize for Pairing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.pairs.len()))?;
        for (a, c) in self.one_based() {
            seq.serialize_element(&[a, c])?;
        }
        seq.end()
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, (a, c)) in self.one_based().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{c})")?;
        }
        f.write_str("}")
    }
}

/// All matchings of every annihilator to a strictly later creator, sorted.
pub fn enumerate_pairings(w: &Word) -> Vec<Pairing> {
    if !w.is_balanced() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut open = Vec::new();
    let mut pairs = Vec::new();
    extend_pairings(w, 0, &mut open, &mut pairs, &mut out);
    out.sort();
    out
}

fn extend_pairings(
    w: &Word,
    pos: usize,
    open: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<Pairing>,
) {
    let gens = w.gens();
    if pos == gens.len() {
        if open.is_empty() {
            out.push(Pairing::new(pairs.clone()));
        }
        return;
    }
    if gens[pos].is_annihilator() {
        // more open annihilators than creators left: dead branch
        let creators_left = gens[pos..].iter().filter(|g| g.is_creator()).count();
        if open.len() + 1 > creators_left {
            return;
        }
        open.push(pos);
        extend_pairings(w, pos + 1, open, pairs, out);
        open.pop();
        return;
    }
    for i in 0..open.len() {
        let a = open.remove(i);
        pairs.push((a, pos));
        extend_pairings(w, pos + 1, open, pairs, out);
        pairs.pop();
        open.insert(i, a);
    }
}

/// True iff the two pairs form the pattern `m_j < m_i < m'_j < m'_i`.
pub fn is_crossing(p1: (usize, usize), p2: (usize, usize)) -> bool {
    let (a, b) = if p1.0 <= p2.0 { (p1, p2) } else { (p2, p1) };
    a.0 < b.0 && b.0 < a.1 && a.1 < b.1
}

/// Pairs α of `pairing` with `m_α < m_h < m'_α`, crossing straddlers included.
pub fn straddle_set(pairing: &Pairing, h: (usize, usize)) -> Vec<(usize, usize)> {
    pairing.pairs.iter().copied().filter(|&a| a != h && a.0 < h.0 && h.0 < a.1).collect()
}

/// Which pairs contribute `k_{m_α}·k_{m_h}` to the contraction phase of `h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StraddleRule {
    /// Pairs enclosing `h`: `m_α < m_h < m'_h < m'_α`. Agrees with the recursion.
    #[default]
    Nesting,
    /// Every pair with `m_α < m_h < m'_α`, crossing ones included.
    AsWritten,
}

impl StraddleRule {
    fn shifters(self, pairing: &Pairing, h: (usize, usize)) -> Vec<(usize, usize)> {
        let all = straddle_set(pairing, h);
        match self {
            StraddleRule::AsWritten => all,
            StraddleRule::Nesting => all.into_iter().filter(|a| h.1 < a.1).collect(),
        }
    }
}

pub fn pair_sum_term(w: &Word, pairing: &Pairing) -> ScalarTerm {
    pair_sum_term_with(w, pairing, StraddleRule::Nesting)
}

/// One pairing's contribution, canonicalized (a zero-coefficient term if a
/// polarization Kronecker vanishes).
pub fn pair_sum_term_with(w: &Word, pairing: &Pairing, rule: StraddleRule) -> ScalarTerm {
    let g = w.gens();
    let mut term = ScalarTerm::one();
    for &h in pairing.pairs() {
        let (ann, cre) = (&g[h.0], &g[h.1]);
        let mut arg = PhaseArg::bare_contraction(&ann.k);
        for a in rule.shifters(pairing, h) {
            arg.add_term(PhaseAtom::dot(&g[a.0].k, &ann.k), 1);
        }
        term = term
            .with_phase(ContractionPhase::weighted(TimeComb::diff(&ann.t, &cre.t), arg))
            .with_delta(DeltaFactor::momentum(&ann.k, &cre.k));
        if let (Some(i), Some(j)) = (ann.pol, cre.pol) {
            term = term.with_delta(DeltaFactor::Pol(i, j));
        }
    }
    for (n, &pj) in pairing.pairs().iter().enumerate() {
        for &pi in &pairing.pairs()[n + 1..] {
            if is_crossing(pj, pi) {
                term = term.with_phase(ContractionPhase::unweighted(
                    TimeComb::diff(&g[pi.0].t, &g[pj.1].t),
                    PhaseArg::atom(PhaseAtom::dot(&g[pi.0].k, &g[pj.0].k)),
                ));
            }
        }
    }
    term.canonical_or_zero()
}

pub fn pair_sum_correlator(w: &Word) -> ScalarExpr {
    pair_sum_correlator_with(w, StraddleRule::Nesting)
}

pub fn pair_sum_correlator_with(w: &Word, rule: StraddleRule) -> ScalarExpr {
    ScalarExpr::from_terms(enumerate_pairings(w).iter().map(|p| pair_sum_term_with(w, p, rule)))
}

/// A pairing together with its contribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatedTerm {
    pub pairing: Pairing,
    pub crossings: usize,
    pub term: ScalarTerm,
}

impl AnnotatedTerm {
    pub fn tag(&self) -> &'static str {
        if self.crossings == 0 {
            "noncrossing"
        } else {
            "crossing"
        }
    }
}

/// Per-pairing terms in pairing order, vanishing ones omitted.
pub fn annotated_pair_sum(w: &Word) -> Vec<AnnotatedTerm> {
    enumerate_pairings(w)
        .into_iter()
        .map(|p| AnnotatedTerm { crossings: p.crossing_count(), term: pair_sum_term(w, &p), pairing: p })
        .filter(|a| !num_traits::Zero::is_zero(&a.term.coeff))
        .collect()
}
