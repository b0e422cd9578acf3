//! JSON form of [`ScalarExpr`].
//!
//! ```json
//! {"terms":[{"coeff":[[1,1],[0,1]],"twoPiPower":0,"lambdaPower":-2,
//!   "phases":[{"time":{"t1":1,"t2":-1},"arg":{"wt(k1)":1,"k1.p":1},"weighted":true}],
//!   "deltas":[{"momentum":["k1","k2"]}]}]}
//! ```
//!
//! `coeff` is `[[re_num, re_den], [im_num, im_den]]`. Phase atoms are keyed as
//! `wt(k)` for `ω̃(k)`, `k.p` for `k·p` and `a.b` for `k_a·k_b`. Serializing a
//! parsed document reproduces it byte for byte.

use super::term::ScalarExpr;

pub(crate) mod coeff_pairs {
    use num_complex::Complex;
    use num_rational::Rational64;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::symbolic::Coeff;

    pub fn serialize<S: Serializer>(c: &Coeff, s: S) -> Result<S::Ok, S::Error> {
        [[*c.re.numer(), *c.re.denom()], [*c.im.numer(), *c.im.denom()]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Coeff, D::Error> {
        let [[rn, rd], [inum, iden]] = <[[i64; 2]; 2]>::deserialize(d)?;
        if rd <= 0 || iden <= 0 {
            return Err(D::Error::custom("denominator must be positive"));
        }
        Ok(Complex::new(Rational64::new(rn, rd), Rational64::new(inum, iden)))
    }
}

impl ScalarExpr {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scalar expressions always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scalar expressions always serialize")
    }

    /// Parses the JSON form without canonicalizing it.
    pub fn from_json(s: &str) -> Result<ScalarExpr, serde_json::Error> {
        serde_json::from_str(s)
    }
}
