use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where depolarizing channels are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScheme {
    /// One channel on the target qubit after every compiled CNOT.
    #[serde(alias = "gbg")]
    GateByGate,
    /// Exact element unitary, then one channel per scheduled CNOT target.
    #[serde(alias = "ebe")]
    ElementByElement,
}

impl NoiseScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseScheme::GateByGate => "gate_by_gate",
            NoiseScheme::ElementByElement => "element_by_element",
        }
    }
}

impl std::str::FromStr for NoiseScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gate_by_gate" | "gbg" => Ok(Self::GateByGate),
            "element_by_element" | "ebe" => Ok(Self::ElementByElement),
            other => Err(Error::InvalidArgument(format!("unknown noise scheme {other:?}"))),
        }
    }
}

/// Depolarizing gate-error model with a noise amplification multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub scheme: NoiseScheme,
    pub multiplier: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            p: 0.0,
            scheme: NoiseScheme::GateByGate,
            multiplier: 1.0,
        }
    }

    pub fn new(p: f64, scheme: NoiseScheme) -> Self {
        Self {
            p,
            scheme,
            multiplier: 1.0,
        }
    }

    pub fn amplified(self, multiplier: f64) -> Self {
        Self { multiplier, ..self }
    }

    /// `p * multiplier`, validated to lie in `[0, 1]`.
    pub fn effective_p(&self) -> Result<f64> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidProbability(self.p));
        }
        if !(self.multiplier > 0.0) || !self.multiplier.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise multiplier must be positive, got {}",
                self.multiplier
            )));
        }
        let p = self.p * self.multiplier;
        if p > 1.0 {
            return Err(Error::InvalidProbability(p));
        }
        Ok(p)
    }

    pub fn is_noiseless(&self) -> bool {
        self.p == 0.0
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless()
    }
}
