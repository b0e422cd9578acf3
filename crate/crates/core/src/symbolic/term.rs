use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::atoms::{PhaseArg, PhaseAtom, TimeComb};
use crate::label::{MomentumLabel, TimeLabel};

/// Exact Gaussian rational.
pub type Coeff = Complex<Rational64>;

pub fn coeff_int(n: i64) -> Coeff {
    Complex::new(Rational64::from_integer(n), Rational64::zero())
}

/// A factor `q_λ(Δt, x) = exp(-i Δt·x / λ²)`, optionally carrying `1/λ²`.
///
/// Weighted phases come from pair contractions; unweighted ones from
/// crossing factors and commutation phases. The inverse `q_λ⁻¹(Δt, x)` is
/// stored as `q_λ(-Δt, x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContractionPhase {
    pub time: TimeComb,
    pub arg: PhaseArg,
    pub weighted: bool,
}

impl ContractionPhase {
    pub fn weighted(time: TimeComb, arg: PhaseArg) -> Self {
        ContractionPhase { time, arg, weighted: true }
    }

    pub fn unweighted(time: TimeComb, arg: PhaseArg) -> Self {
        ContractionPhase { time, arg, weighted: false }
    }

    pub fn inverse(&self) -> Self {
        ContractionPhase { time: -self.time.clone(), arg: self.arg.clone(), weighted: self.weighted }
    }

    pub fn merged_exponent(&self) -> MergedExponent {
        let mut out = MergedExponent::default();
        for (t, ct) in self.time.iter() {
            for (x, cx) in self.arg.iter() {
                out.add_entry(t.clone(), x.clone(), ct * cx);
            }
        }
        out
    }

    // q(Δt, x) = q(-Δt, -x): keep the representative whose time leads positive.
    fn normalized(&self) -> Self {
        let flip = match self.time.leading_sign() {
            0 => self.arg.leading_sign() < 0,
            s => s < 0,
        };
        if flip {
            ContractionPhase { time: -self.time.clone(), arg: -self.arg.clone(), weighted: self.weighted }
        } else {
            self.clone()
        }
    }
}

/// Delta-type factors. All are formal distributions except the polarization
/// Kronecker, which is evaluated as soon as both indices are concrete.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaFactor {
    /// `δ(k_a - k_b)`, stored with `a <= b`.
    Momentum(MomentumLabel, MomentumLabel),
    /// `δ(Σ c_i t_i)`.
    Time(TimeComb),
    /// `δ(x)` of a phase argument.
    Phase(PhaseArg),
    /// `δ_{jn}`.
    Pol(u8, u8),
}

impl DeltaFactor {
    pub fn momentum(a: &MomentumLabel, b: &MomentumLabel) -> Self {
        if a <= b {
            DeltaFactor::Momentum(a.clone(), b.clone())
        } else {
            DeltaFactor::Momentum(b.clone(), a.clone())
        }
    }

    fn rename_momenta(&self, f: &dyn Fn(&MomentumLabel) -> MomentumLabel) -> Self {
        match self {
            DeltaFactor::Momentum(a, b) => DeltaFactor::momentum(&f(a), &f(b)),
            DeltaFactor::Phase(x) => DeltaFactor::Phase(x.rename_momenta(f)),
            other => other.clone(),
        }
    }

    fn normalized(&self) -> Self {
        match self {
            DeltaFactor::Momentum(a, b) => DeltaFactor::momentum(a, b),
            DeltaFactor::Time(c) => DeltaFactor::Time(c.sign_normalized()),
            DeltaFactor::Phase(x) => DeltaFactor::Phase(x.sign_normalized()),
            DeltaFactor::Pol(a, b) => DeltaFactor::Pol(*a.min(b), *a.max(b)),
        }
    }
}

/// Fully expanded exponent of `exp(-(i/λ²) Σ c_{τ,x} τ·x)`: the equality
/// signature of a product of phases.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MergedExponent(BTreeMap<(TimeLabel, PhaseAtom), i64>);

impl MergedExponent {
    pub fn add_entry(&mut self, t: TimeLabel, x: PhaseAtom, c: i64) {
        if c == 0 {
            return;
        }
        let key = (t, x);
        let e = self.0.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&key);
        }
    }

    pub fn get(&self, t: &TimeLabel, x: &PhaseAtom) -> i64 {
        self.0.get(&(t.clone(), x.clone())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TimeLabel, &PhaseAtom, i64)> {
        self.0.iter().map(|((t, x), c)| (t, x, *c))
    }
}

impl Add for MergedExponent {
    type Output = MergedExponent;
    fn add(mut self, rhs: MergedExponent) -> MergedExponent {
        for ((t, x), c) in rhs.0 {
            self.add_entry(t, x, c);
        }
        self
    }
}

impl Neg for MergedExponent {
    type Output = MergedExponent;
    fn neg(self) -> MergedExponent {
        MergedExponent(self.0.into_iter().map(|(k, c)| (k, -c)).collect())
    }
}

impl FromIterator<(TimeLabel, PhaseAtom, i64)> for MergedExponent {
    fn from_iter<I: IntoIterator<Item = (TimeLabel, PhaseAtom, i64)>>(iter: I) -> Self {
        let mut out = MergedExponent::default();
        for (t, x, c) in iter {
            out.add_entry(t, x, c);
        }
        out
    }
}

/// One product term: `coeff · (2π)^a · λ^b · Π phases · Π deltas`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarTerm {
    #[serde(with = "super::json::coeff_pairs")]
    pub coeff: Coeff,
    pub two_pi_power: i32,
    pub lambda_power: i32,
    pub phases: Vec<ContractionPhase>,
    pub deltas: Vec<DeltaFactor>,
}

/// Equality signature of a canonical term; terms with equal keys are like terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub lambda_power: i32,
    pub two_pi_power: i32,
    pub deltas: Vec<DeltaFactor>,
    pub exponent: MergedExponent,
}

impl Default for ScalarTerm {
    fn default() -> Self {
        ScalarTerm::one()
    }
}

impl ScalarTerm {
    pub fn one() -> Self {
        ScalarTerm::constant(Coeff::one())
    }

    pub fn constant(coeff: Coeff) -> Self {
        ScalarTerm { coeff, two_pi_power: 0, lambda_power: 0, phases: Vec::new(), deltas: Vec::new() }
    }

    pub fn phase(p: ContractionPhase) -> Self {
        let lambda_power = if p.weighted { -2 } else { 0 };
        ScalarTerm { lambda_power, phases: vec![p], ..ScalarTerm::one() }
    }

    pub fn delta(d: DeltaFactor) -> Self {
        ScalarTerm { deltas: vec![d], ..ScalarTerm::one() }
    }

    pub fn with_phase(mut self, p: ContractionPhase) -> Self {
        if p.weighted {
            self.lambda_power -= 2;
        }
        self.phases.push(p);
        self
    }

    pub fn with_delta(mut self, d: DeltaFactor) -> Self {
        self.deltas.push(d);
        self
    }

    pub fn weighted_count(&self) -> usize {
        self.phases.iter().filter(|p| p.weighted).count()
    }

    pub fn merged_exponent(&self) -> MergedExponent {
        self.phases.iter().map(ContractionPhase::merged_exponent).fold(MergedExponent::default(), Add::add)
    }

    /// Complex conjugate: coefficient conjugated, every oscillation inverted.
    pub fn conj(&self) -> Self {
        ScalarTerm {
            coeff: self.coeff.conj(),
            phases: self.phases.iter().map(ContractionPhase::inverse).collect(),
            ..self.clone()
        }
    }

    pub fn substitute_momentum(&self, from: &MomentumLabel, to: &MomentumLabel) -> Self {
        self.rename_momenta(&|k| if k == from { to.clone() } else { k.clone() })
    }

    pub(crate) fn rename_momenta(&self, f: &dyn Fn(&MomentumLabel) -> MomentumLabel) -> Self {
        ScalarTerm {
            phases: self
                .phases
                .iter()
                .map(|p| ContractionPhase { arg: p.arg.rename_momenta(f), ..p.clone() })
                .collect(),
            deltas: self.deltas.iter().map(|d| d.rename_momenta(f)).collect(),
            ..self.clone()
        }
    }

    /// Canonical form, or `None` if the term vanishes.
    ///
    /// Momentum deltas are resolved by classes: every label is replaced by the
    /// smallest label of its class, and each class of size `s` keeps `s - 1`
    /// deltas `δ(rep - k)` (extra deltas in a class survive as `δ(rep - rep)`).
    pub fn canonical(&self) -> Option<ScalarTerm> {
        if self.coeff.is_zero() {
            return None;
        }
        let mut deltas = Vec::with_capacity(self.deltas.len());
        let mut edges = Vec::new();
        for d in &self.deltas {
            match d {
                DeltaFactor::Pol(a, b) if a == b => {}
                DeltaFactor::Pol(..) => return None,
                DeltaFactor::Momentum(a, b) => edges.push((a.clone(), b.clone())),
                other => deltas.push(other.clone()),
            }
        }
        let classes = LabelClasses::from_edges(&edges);
        let rep = |k: &MomentumLabel| classes.rep(k);
        deltas = deltas.iter().map(|d| d.rename_momenta(&rep).normalized()).collect();
        deltas.extend(classes.canonical_deltas());
        deltas.sort();

        let mut weighted = Vec::new();
        let mut unweighted: BTreeMap<TimeComb, PhaseArg> = BTreeMap::new();
        for p in &self.phases {
            let p = ContractionPhase { arg: p.arg.rename_momenta(&rep), ..p.clone() }.normalized();
            if p.weighted {
                weighted.push(p);
            } else if !p.time.is_zero() && !p.arg.is_zero() {
                let slot = unweighted.entry(p.time).or_default();
                *slot = &*slot + &p.arg;
            }
        }
        let mut phases = weighted;
        phases.extend(
            unweighted
                .into_iter()
                .filter(|(_, arg)| !arg.is_zero())
                .map(|(time, arg)| ContractionPhase::unweighted(time, arg).normalized()),
        );
        phases.sort();

        Some(ScalarTerm { phases, deltas, ..self.clone() })
    }

    /// Canonical form, with a zero-coefficient term standing in for a vanishing one.
    pub fn canonical_or_zero(&self) -> ScalarTerm {
        self.canonical().unwrap_or_else(|| ScalarTerm::constant(Coeff::zero()))
    }

    /// Signature of the canonical form of this term.
    pub fn key(&self) -> TermKey {
        TermKey {
            lambda_power: self.lambda_power,
            two_pi_power: self.two_pi_power,
            deltas: self.deltas.clone(),
            exponent: self.merged_exponent(),
        }
    }
}

impl Mul<&ScalarTerm> for &ScalarTerm {
    type Output = ScalarTerm;

    fn mul(self, rhs: &ScalarTerm) -> ScalarTerm {
        let mut phases = self.phases.clone();
        phases.extend(rhs.phases.iter().cloned());
        let mut deltas = self.deltas.clone();
        deltas.extend(rhs.deltas.iter().cloned());
        ScalarTerm {
            coeff: self.coeff * rhs.coeff,
            two_pi_power: self.two_pi_power + rhs.two_pi_power,
            lambda_power: self.lambda_power + rhs.lambda_power,
            phases,
            deltas,
        }
    }
}

struct LabelClasses {
    rep: BTreeMap<MomentumLabel, MomentumLabel>,
    edge_count: BTreeMap<MomentumLabel, usize>,
}

impl LabelClasses {
    fn from_edges(edges: &[(MomentumLabel, MomentumLabel)]) -> Self {
        let mut parent: BTreeMap<MomentumLabel, MomentumLabel> = BTreeMap::new();
        fn find(parent: &BTreeMap<MomentumLabel, MomentumLabel>, k: &MomentumLabel) -> MomentumLabel {
            let mut cur = k.clone();
            while let Some(p) = parent.get(&cur) {
                if *p == cur {
                    break;
                }
                cur = p.clone();
            }
            cur
        }
        for (a, b) in edges {
            parent.entry(a.clone()).or_insert_with(|| a.clone());
            parent.entry(b.clone()).or_insert_with(|| b.clone());
            let (ra, rb) = (find(&parent, a), find(&parent, b));
            // the smaller root survives, so every root is the minimum of its class
            match ra.cmp(&rb) {
                std::cmp::Ordering::Less => {
                    parent.insert(rb, ra);
                }
                std::cmp::Ordering::Greater => {
                    parent.insert(ra, rb);
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        let rep: BTreeMap<_, _> = parent.keys().map(|k| (k.clone(), find(&parent, k))).collect();
        let mut edge_count = BTreeMap::new();
        for (a, _) in edges {
            *edge_count.entry(rep[a].clone()).or_insert(0) += 1;
        }
        LabelClasses { rep, edge_count }
    }

    fn rep(&self, k: &MomentumLabel) -> MomentumLabel {
        self.rep.get(k).cloned().unwrap_or_else(|| k.clone())
    }

    fn canonical_deltas(&self) -> Vec<DeltaFactor> {
        let mut members: BTreeMap<&MomentumLabel, Vec<&MomentumLabel>> = BTreeMap::new();
        for (k, r) in &self.rep {
            if k != r {
                members.entry(r).or_default().push(k);
            } else {
                members.entry(r).or_default();
            }
        }
        let mut out = Vec::new();
        for (r, ms) in members {
            out.extend(ms.iter().map(|m| DeltaFactor::Momentum(r.clone(), (*m).clone())));
            let extra = self.edge_count.get(r).copied().unwrap_or(0).saturating_sub(ms.len());
            out.extend(std::iter::repeat_n(DeltaFactor::Momentum(r.clone(), r.clone()), extra));
        }
        out
    }
}

/// Sum of [`ScalarTerm`]s.
///
/// Values built through the public constructors and arithmetic are canonical:
/// terms are sorted by [`TermKey`], no two share a key, and none has a zero
/// coefficient. Equality compares canonical keys and coefficients, so two
/// expressions whose phases factor differently but merge to the same exponent
/// are equal.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ScalarExpr {
    terms: Vec<ScalarTerm>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        ScalarExpr::from_term(ScalarTerm::one())
    }

    pub fn from_term(t: ScalarTerm) -> Self {
        ScalarExpr::from_terms([t])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ScalarTerm>) -> Self {
        ScalarExpr::raw(terms.into_iter().collect()).canonicalize()
    }

    /// Wraps terms without canonicalizing them.
    pub fn raw(terms: Vec<ScalarTerm>) -> Self {
        ScalarExpr { terms }
    }

    pub fn terms(&self) -> &[ScalarTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<ScalarTerm> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn canonicalize(&self) -> ScalarExpr {
        let mut merged: BTreeMap<TermKey, ScalarTerm> = BTreeMap::new();
        for t in self.terms.iter().filter_map(ScalarTerm::canonical) {
            match merged.entry(t.key()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(t);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let slot = o.get_mut();
                    slot.coeff += t.coeff;
                    if t.phases < slot.phases {
                        slot.phases = t.phases;
                    }
                }
            }
        }
        ScalarExpr { terms: merged.into_values().filter(|t| !t.coeff.is_zero()).collect() }
    }

    pub fn substitute_momentum(&self, from: &MomentumLabel, to: &MomentumLabel) -> ScalarExpr {
        ScalarExpr::from_terms(self.terms.iter().map(|t| t.substitute_momentum(from, to)))
    }

    pub fn conj(&self) -> ScalarExpr {
        ScalarExpr::from_terms(self.terms.iter().map(ScalarTerm::conj))
    }

    pub fn scale(&self, c: Coeff) -> ScalarExpr {
        ScalarExpr::from_terms(self.terms.iter().map(|t| ScalarTerm { coeff: t.coeff * c, ..t.clone() }))
    }

    fn keyed(&self) -> Vec<(TermKey, Coeff)> {
        self.canonicalize().terms.into_iter().map(|t| (t.key(), t.coeff)).collect()
    }
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        self.keyed() == other.keyed()
    }
}

impl Eq for ScalarExpr {}

impl Add<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Mul<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_terms(self.terms.iter().flat_map(|a| rhs.terms.iter().map(move |b| a * b)))
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scale(coeff_int(-1))
    }
}

impl From<ScalarTerm> for ScalarExpr {
    fn from(t: ScalarTerm) -> Self {
        ScalarExpr::from_term(t)
    }
}
