use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use super::NumericError;
use crate::label::MomentumLabel;
use crate::symbolic::{PhaseArg, PhaseAtom};

pub type Vec3 = [f64; 3];

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub type Dispersion = Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;

/// Concrete momenta, atomic momentum `p`, and the field dispersion `ω(k)`.
#[derive(Clone)]
pub struct Assignment {
    pub momenta: BTreeMap<MomentumLabel, Vec3>,
    pub p: Vec3,
    pub dispersion: Dispersion,
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assignment").field("momenta", &self.momenta).field("p", &self.p).finish_non_exhaustive()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentFile {
    momenta: BTreeMap<MomentumLabel, Vec3>,
    #[serde(default)]
    p: Vec3,
}

impl Assignment {
    /// Massless dispersion `ω(k) = |k|`.
    pub fn new(momenta: impl IntoIterator<Item = (MomentumLabel, Vec3)>, p: Vec3) -> Self {
        Assignment { momenta: momenta.into_iter().collect(), p, dispersion: Arc::new(norm3) }
    }

    pub fn with_dispersion(self, dispersion: impl Fn(&Vec3) -> f64 + Send + Sync + 'static) -> Self {
        Assignment { dispersion: Arc::new(dispersion), ..self }
    }

    /// Parses `{"momenta":{"k1":[1,0,0]},"p":[0,0,0]}`; `p` defaults to zero.
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let file: AssignmentFile = serde_json::from_str(s)?;
        Ok(Assignment::new(file.momenta, file.p))
    }

    pub fn momentum(&self, k: &MomentumLabel) -> Result<&Vec3, NumericError> {
        self.momenta.get(k).ok_or_else(|| NumericError::UnassignedMomentum(k.clone()))
    }

    /// `ω̃(k) = ω(k) + |k|²/2`.
    pub fn omega_tilde(&self, k: &Vec3) -> f64 {
        (self.dispersion)(k) + 0.5 * dot3(k, k)
    }
}

pub fn phase_value(atom: &PhaseAtom, a: &Assignment) -> Result<f64, NumericError> {
    Ok(match atom {
        PhaseAtom::OmegaTilde(k) => a.omega_tilde(a.momentum(k)?),
        PhaseAtom::DotP(k) => dot3(a.momentum(k)?, &a.p),
        PhaseAtom::Dot(x, y) => dot3(a.momentum(x)?, a.momentum(y)?),
    })
}

pub fn phase_arg_value(x: &PhaseArg, a: &Assignment) -> Result<f64, NumericError> {
    x.iter().map(|(atom, c)| Ok(c as f64 * phase_value(atom, a)?)).sum()
}
