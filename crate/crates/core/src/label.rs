//! Time and momentum labels.
//!
//! Labels are opaque names (`t1`, `k2`, ...) compared in natural order: the
//! alphabetic prefix first, then the numeric suffix as a number, so `k2 < k10`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn split_natural(s: &str) -> (&str, Option<u128>) {
    let digits = s.bytes().rev().take_while(u8::is_ascii_digit).count();
    let (prefix, suffix) = s.split_at(s.len() - digits);
    (prefix, suffix.parse().ok())
}

pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (pa, na) = split_natural(a);
    let (pb, nb) = split_natural(b);
    pa.cmp(pb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
}

/// True if `s` is usable as a label in the JSON and LaTeX forms.
pub fn is_valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! label_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                Self(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                natural_cmp(&self.0, &other.0)
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl std::str::FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                if is_valid_label(s) {
                    Ok(Self::new(s))
                } else {
                    Err(format!("invalid label {s:?}"))
                }
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                if !is_valid_label(&s) {
                    return Err(serde::de::Error::custom(format!("invalid label {s:?}")));
                }
                Ok(Self::new(s))
            }
        }
    };
}

label_type!(
    /// A slow-time variable `t_i`.
    TimeLabel
);
label_type!(
    /// A momentum 3-vector `k_i`. Two labels are identified only through a
    /// momentum delta.
    MomentumLabel
);

/// Polarization index: `Some(1..=3)` in polarized mode, `None` in scalar mode.
pub type PolIndex = Option<u8>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v: Vec<MomentumLabel> = ["k10", "k2", "k1", "q", "k"].into_iter().map(Into::into).collect();
        v.sort();
        let names: Vec<_> = v.iter().map(|l| l.as_str()).collect();
        assert_eq!(names, ["k", "k1", "k2", "k10", "q"]);
    }

    #[test]
    fn leading_zeros_still_total() {
        let a = TimeLabel::new("t01");
        let b = TimeLabel::new("t1");
        assert_ne!(a.cmp(&b), Ordering::Equal);
        assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn label_validation() {
        assert!(is_valid_label("k_1"));
        assert!(!is_valid_label("k.1"));
        assert!(!is_valid_label(""));
        assert!(serde_json::from_str::<TimeLabel>("\"t(1)\"").is_err());
    }
}
