use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants used by every operation: reduced Planck constant,
/// particle mass and charge. Natural units (all 1) by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub mass: f64,
    pub charge: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, charge: 1.0 }
    }
}

impl UnitsConfig {
    pub fn new(hbar: f64, mass: f64, charge: f64) -> Result<Self> {
        let units = Self { hbar, mass, charge };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("hbar", self.hbar), ("mass", self.mass), ("charge", self.charge)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(crate::prelude::format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Phase acquired per unit of enclosed flux, `e/ħ`.
    pub fn flux_to_phase(&self) -> f64 {
        self.charge / self.hbar
    }

    /// Magnetic flux whose Aharonov-Bohm phase is one full turn, `2πħ/e`.
    pub fn flux_period(&self) -> f64 {
        2.0 * core::f64::consts::PI * self.hbar / self.charge
    }
}
