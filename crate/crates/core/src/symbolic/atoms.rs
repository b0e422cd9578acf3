use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::label::{is_valid_label, MomentumLabel, TimeLabel};

/// Basis symbol of every oscillation and energy-delta argument.
///
/// The variant order fixes how arguments print: `ω̃(k)` first, then `k·p`,
/// then the `k·k'` products.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhaseAtom {
    /// `ω̃(k) = ω(k) + k²/2`.
    OmegaTilde(MomentumLabel),
    /// `k·p`, with `p` the atomic momentum operator.
    DotP(MomentumLabel),
    /// `k_a·k_b`, always stored with `a <= b`.
    Dot(MomentumLabel, MomentumLabel),
}

impl PhaseAtom {
    pub fn omega(k: &MomentumLabel) -> Self {
        PhaseAtom::OmegaTilde(k.clone())
    }

    pub fn dot_p(k: &MomentumLabel) -> Self {
        PhaseAtom::DotP(k.clone())
    }

    pub fn dot(a: &MomentumLabel, b: &MomentumLabel) -> Self {
        if a <= b {
            PhaseAtom::Dot(a.clone(), b.clone())
        } else {
            PhaseAtom::Dot(b.clone(), a.clone())
        }
    }

    pub fn substitute_momentum(&self, from: &MomentumLabel, to: &MomentumLabel) -> Self {
        self.rename(&|k| if k == from { to.clone() } else { k.clone() })
    }

    pub fn rename(&self, f: &dyn Fn(&MomentumLabel) -> MomentumLabel) -> Self {
        match self {
            PhaseAtom::OmegaTilde(k) => PhaseAtom::OmegaTilde(f(k)),
            PhaseAtom::DotP(k) => PhaseAtom::DotP(f(k)),
            PhaseAtom::Dot(a, b) => PhaseAtom::dot(&f(a), &f(b)),
        }
    }

    pub fn momenta(&self) -> Vec<&MomentumLabel> {
        match self {
            PhaseAtom::OmegaTilde(k) | PhaseAtom::DotP(k) => vec![k],
            PhaseAtom::Dot(a, b) => vec![a, b],
        }
    }
}

/// Compact text form used as JSON map key: `wt(k1)`, `k1.p`, `k1.k2`.
impl fmt::Display for PhaseAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseAtom::OmegaTilde(k) => write!(f, "wt({k})"),
            PhaseAtom::DotP(k) => write!(f, "{k}.p"),
            PhaseAtom::Dot(a, b) => write!(f, "{a}.{b}"),
        }
    }
}

impl FromStr for PhaseAtom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let label = |x: &str| {
            if is_valid_label(x) {
                Ok(MomentumLabel::new(x))
            } else {
                Err(format!("invalid momentum label {x:?} in atom {s:?}"))
            }
        };
        if let Some(inner) = s.strip_prefix("wt(").and_then(|r| r.strip_suffix(')')) {
            return Ok(PhaseAtom::OmegaTilde(label(inner)?));
        }
        match s.split_once('.') {
            Some((a, "p")) => Ok(PhaseAtom::DotP(label(a)?)),
            Some((a, b)) => {
                let (a, b) = (label(a)?, label(b)?);
                if a > b {
                    return Err(format!("dot atom {s:?} is not normalized"));
                }
                Ok(PhaseAtom::Dot(a, b))
            }
            None => Err(format!("unrecognized phase atom {s:?}")),
        }
    }
}

/// Sparse integer combination of keys with no zero entries stored.
macro_rules! sparse_comb {
    ($name:ident, $key:ty) => {
        impl $name {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn coeff(&self, key: &$key) -> i64 {
                self.coeffs.get(key).copied().unwrap_or(0)
            }

            pub fn add_term(&mut self, key: $key, c: i64) {
                if c == 0 {
                    return;
                }
                let entry = self.coeffs.entry(key.clone()).or_insert(0);
                *entry += c;
                if *entry == 0 {
                    self.coeffs.remove(&key);
                }
            }

            pub fn with_term(mut self, key: $key, c: i64) -> Self {
                self.add_term(key, c);
                self
            }

            pub fn iter(&self) -> impl Iterator<Item = (&$key, i64)> {
                self.coeffs.iter().map(|(k, c)| (k, *c))
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn scale(&self, c: i64) -> Self {
                if c == 0 {
                    return Self::zero();
                }
                Self { coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
            }

            /// Sign of the coefficient of the smallest key; `0` for the zero combination.
            pub fn leading_sign(&self) -> i64 {
                self.coeffs.values().next().map_or(0, |c| c.signum())
            }

            /// Representative of `{x, -x}` whose leading coefficient is positive.
            pub fn sign_normalized(&self) -> Self {
                if self.leading_sign() < 0 {
                    -self.clone()
                } else {
                    self.clone()
                }
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(mut self, rhs: $name) -> $name {
                for (k, c) in rhs.coeffs {
                    self.add_term(k, c);
                }
                self
            }
        }

        impl Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                self.clone() + rhs.clone()
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                self + (-rhs)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                $name { coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect() }
            }
        }

        impl FromIterator<($key, i64)> for $name {
            fn from_iter<I: IntoIterator<Item = ($key, i64)>>(iter: I) -> Self {
                let mut out = Self::zero();
                for (k, c) in iter {
                    out.add_term(k, c);
                }
                out
            }
        }
    };
}

/// Integer linear combination of [`PhaseAtom`]s: the `x` in `q_λ(t, x)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseArg {
    coeffs: BTreeMap<PhaseAtom, i64>,
}

sparse_comb!(PhaseArg, PhaseAtom);

impl PhaseArg {
    pub fn atom(a: PhaseAtom) -> Self {
        Self::zero().with_term(a, 1)
    }

    /// `ω̃(k) + k·p`, the argument of a contraction before any straddle shift.
    pub fn bare_contraction(k: &MomentumLabel) -> Self {
        Self::atom(PhaseAtom::omega(k)).with_term(PhaseAtom::dot_p(k), 1)
    }

    pub fn substitute_momentum(&self, from: &MomentumLabel, to: &MomentumLabel) -> Self {
        self.coeffs.iter().map(|(a, c)| (a.substitute_momentum(from, to), *c)).collect()
    }

    pub fn rename_momenta(&self, f: &dyn Fn(&MomentumLabel) -> MomentumLabel) -> Self {
        self.coeffs.iter().map(|(a, c)| (a.rename(f), *c)).collect()
    }

    pub fn mentions(&self, k: &MomentumLabel) -> bool {
        self.coeffs.keys().any(|a| a.momenta().contains(&k))
    }
}

/// Integer combination of time labels; engine output always has zero sum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeComb {
    coeffs: BTreeMap<TimeLabel, i64>,
}

sparse_comb!(TimeComb, TimeLabel);

impl TimeComb {
    /// `a - b`.
    pub fn diff(a: &TimeLabel, b: &TimeLabel) -> Self {
        Self::zero().with_term(a.clone(), 1).with_term(b.clone(), -1)
    }

    pub fn substitute_time(&self, from: &TimeLabel, to: &TimeLabel) -> Self {
        self.rename_times(&|t| if t == from { to.clone() } else { t.clone() })
    }

    pub fn rename_times(&self, f: &dyn Fn(&TimeLabel) -> TimeLabel) -> Self {
        self.coeffs.iter().map(|(t, c)| (f(t), *c)).collect()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `Some((a, b))` when the combination is exactly `a - b` up to sign and scale.
    pub fn as_difference(&self) -> Option<(&TimeLabel, &TimeLabel)> {
        let mut it = self.coeffs.iter();
        match (it.next(), it.next(), it.next()) {
            (Some((a, ca)), Some((b, cb)), None) if *ca == -*cb => {
                if *ca > 0 {
                    Some((a, b))
                } else {
                    Some((b, a))
                }
            }
            _ => None,
        }
    }
}

struct SparseMapVisitor<K>(std::marker::PhantomData<K>);

impl<'de, K: FromStr<Err = String> + Ord> Visitor<'de> for SparseMapVisitor<K> {
    type Value = BTreeMap<K, i64>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a map from symbols to nonzero integers")
    }

    fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> Result<Self::Value, M::Error> {
        let mut out = BTreeMap::new();
        while let Some((key, c)) = map.next_entry::<String, i64>()? {
            let key = key.parse::<K>().map_err(de::Error::custom)?;
            if c == 0 {
                return Err(de::Error::custom("zero coefficient stored"));
            }
            if out.insert(key, c).is_some() {
                return Err(de::Error::custom("duplicate key"));
            }
        }
        Ok(out)
    }
}

impl Serialize for PhaseArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (a, c) in &self.coeffs {
            map.serialize_entry(&a.to_string(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for PhaseArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = d.deserialize_map(SparseMapVisitor::<PhaseAtom>(Default::default()))?;
        Ok(PhaseArg { coeffs })
    }
}

impl Serialize for TimeComb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (t, c) in &self.coeffs {
            map.serialize_entry(t.as_str(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for TimeComb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = d.deserialize_map(SparseMapVisitor::<TimeLabel>(Default::default()))?;
        Ok(TimeComb { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> MomentumLabel {
        MomentumLabel::new(s)
    }

    #[test]
    fn dot_is_symmetric() {
        assert_eq!(PhaseAtom::dot(&k("k2"), &k("k1")), PhaseAtom::Dot(k("k1"), k("k2")));
    }

    #[test]
    fn substitution_examples() {
        let (k1, k2, k3) = (k("k1"), k("k2"), k("k3"));
        assert_eq!(PhaseAtom::dot(&k1, &k2).substitute_momentum(&k2, &k1), PhaseAtom::Dot(k1.clone(), k1.clone()));
        assert_eq!(PhaseAtom::dot_p(&k2).substitute_momentum(&k2, &k1), PhaseAtom::DotP(k1.clone()));
        assert_eq!(PhaseAtom::omega(&k3).substitute_momentum(&k2, &k1), PhaseAtom::OmegaTilde(k3.clone()));
        // re-normalization after substitution
        assert_eq!(PhaseAtom::dot(&k1, &k3).substitute_momentum(&k1, &k("k9")), PhaseAtom::Dot(k("k3"), k("k9")));
    }

    #[test]
    fn substitution_merges_coefficients() {
        let (k1, k2) = (k("k1"), k("k2"));
        let arg = PhaseArg::atom(PhaseAtom::dot_p(&k1)).with_term(PhaseAtom::dot_p(&k2), -1);
        assert!(arg.substitute_momentum(&k2, &k1).is_zero());
    }

    #[test]
    fn atom_text_round_trip() {
        for a in [PhaseAtom::omega(&k("k1")), PhaseAtom::dot_p(&k("k12")), PhaseAtom::dot(&k("k3"), &k("k10"))] {
            assert_eq!(a.to_string().parse::<PhaseAtom>().unwrap(), a);
        }
        assert!("k2.k1".parse::<PhaseAtom>().is_err());
        assert!("w(k1)".parse::<PhaseAtom>().is_err());
    }

    #[test]
    fn time_difference_shape() {
        let t = |s: &str| TimeLabel::new(s);
        let d = TimeComb::diff(&t("t3"), &t("t1"));
        assert_eq!(d.as_difference(), Some((&t("t3"), &t("t1"))));
        assert_eq!(d.leading_sign(), -1);
        assert_eq!(d.coefficient_sum(), 0);
        assert_eq!(d.sign_normalized(), TimeComb::diff(&t("t1"), &t("t3")));
        assert!(d.substitute_time(&t("t3"), &t("t1")).is_zero());
    }
}
