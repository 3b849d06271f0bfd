//! Back-of-envelope slab sizing from a dopant cross-section and density.

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateInput {
    /// cm²
    pub sigma40_cm2: f64,
    /// cm⁻³
    pub density_cm3: f64,
    #[serde(rename = "target_alpha40L")]
    pub target_alpha40l: f64,
    /// m
    pub wavelength_m: f64,
}

impl Default for EstimateInput {
    fn default() -> Self {
        Self {
            sigma40_cm2: 1e-16,
            density_cm3: 1e19,
            target_alpha40l: 37.0,
            wavelength_m: 480e-9,
        }
    }
}

impl EstimateInput {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("estimate.sigma40_cm2", self.sigma40_cm2),
            ("estimate.density_cm3", self.density_cm3),
            ("estimate.target_alpha40L", self.target_alpha40l),
            ("estimate.wavelength_m", self.wavelength_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabEstimate {
    /// Resonant absorption coefficient, cm⁻¹.
    pub alpha40_per_cm: f64,
    /// Slab thickness reaching the target optical thickness, μm.
    pub length_um: f64,
    /// Largest refractive-index change the dopants may impose,
    /// `0.5 (λ/4π) α40`.
    pub dn_bound: f64,
}

pub fn estimate_slab(e: &EstimateInput) -> SlabEstimate {
    let alpha40 = e.sigma40_cm2 * e.density_cm3;
    let length_cm = e.target_alpha40l / alpha40;
    let lambda_cm = e.wavelength_m * 100.0;
    SlabEstimate {
        alpha40_per_cm: alpha40,
        length_um: length_cm * 1e4,
        dn_bound: 0.5 * lambda_cm / (4.0 * std::f64::consts::PI) * alpha40,
    }
}
