//! Counter-propagating signal/idler amplitudes in the doped slab.
//!
//! The signal at ω4 is a backward wave: it enters at `z = L` and leaves at
//! `z = 0`, while the idler starts from zero at `z = 0`:
//!
//! ```text
//! da4/dz = −i γ4 a2* exp(iΔk z) + (α4/2) a4
//! da2/dz =  i γ2 a4* exp(iΔk z) − (α2/2) a2
//! a4(L) = a4L,   a2(0) = 0
//! ```

mod closed_form;
mod ode;
mod shooting;

use serde::{Deserialize, Serialize};

pub use closed_form::{fundamental_matrix, solve_closed_form, solve_closed_form_sampled};
pub use shooting::{solve_numeric_oracle, solve_numeric_oracle_sampled};

use crate::error::{Error, Result};
use crate::qresponse::{FourLevelParams, ResponseSet};
use crate::scalar::{cr, Cplx, Real};

/// Default number of profile samples on `[0, L]`.
pub const DEFAULT_SAMPLES: usize = 513;

/// Boundary determinants below this fraction of the fundamental-matrix scale
/// are reported as self-oscillation.
pub const OSCILLATION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabProblem<T: Real> {
    /// Absorption (positive) or gain (negative) per unit length at ω4.
    pub alpha4: T,
    pub alpha2: T,
    pub gamma4: Cplx<T>,
    pub gamma2: Cplx<T>,
    pub dk: T,
    pub length: T,
    /// Signal amplitude entering at `z = L`.
    pub a4l: Cplx<T>,
}

impl<T: Real> SlabProblem<T> {
    /// Lossless, phase-matched slab with equal real couplings `g`, unit length.
    pub fn lossless_matched(g: T) -> Self {
        Self {
            alpha4: T::zero(),
            alpha2: T::zero(),
            gamma4: cr(g),
            gamma2: cr(g),
            dk: T::zero(),
            length: T::one(),
            a4l: cr(T::one()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > T::zero() && self.length.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "slab length must be positive, got {}",
                self.length
            )));
        }
        let finite = [
            self.alpha4,
            self.alpha2,
            self.gamma4.re,
            self.gamma4.im,
            self.gamma2.re,
            self.gamma2.im,
            self.dk,
            self.a4l.re,
            self.a4l.im,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams(
                "slab coefficients must be finite".into(),
            ));
        }
        if self.a4l.norm() == T::zero() {
            return Err(Error::InvalidParams(
                "incident signal amplitude must be nonzero".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled fields and output figures of one slab solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabSolution<T: Real> {
    pub z: Vec<T>,
    pub a4: Vec<Cplx<T>>,
    pub a2: Vec<Cplx<T>>,
    /// `|a4(0)/a4(L)|²`; `+∞` when `oscillation_flag` is set.
    pub eta4: T,
    /// `|a2(z)/a4L|²` on the same grid.
    pub eta2_profile: Vec<T>,
    pub oscillation_flag: bool,
    /// Boundary determinant relative to its coefficient scale; the flag trips
    /// when this falls below [`OSCILLATION_THRESHOLD`].
    pub relative_determinant: T,
}

impl<T: Real> SlabSolution<T> {
    pub(crate) fn oscillating(relative_determinant: T) -> Self {
        Self {
            z: Vec::new(),
            a4: Vec::new(),
            a2: Vec::new(),
            eta4: T::infinity(),
            eta2_profile: Vec::new(),
            oscillation_flag: true,
            relative_determinant,
        }
    }

    pub(crate) fn from_profile(
        z: Vec<T>,
        a4: Vec<Cplx<T>>,
        a2: Vec<Cplx<T>>,
        a4l: Cplx<T>,
        eta4: T,
        relative_determinant: T,
    ) -> Self {
        let norm = a4l.norm_sqr();
        let eta2_profile = a2.iter().map(|v| v.norm_sqr() / norm).collect();
        Self {
            z,
            a4,
            a2,
            eta4,
            eta2_profile,
            oscillation_flag: false,
            relative_determinant,
        }
    }
}

/// Converts the dopant response into per-slab coefficients in units `L = 1`.
///
/// The host's own loss at ω4 enters as the additive background
/// `ln(1/host_transmission)` in `α4 L`. The couplings are
/// `γ4 = √C α40L g4/2` and `γ2 = √C κ α40L g2/2`, so that `C` scales the
/// product `γ4 γ2*` that controls parametric gain.
pub fn assemble_slab_problem<T: Real>(
    resp: &ResponseSet<T>,
    alpha40l: T,
    params: &FourLevelParams<T>,
    host_transmission: T,
    coupling_calibration: T,
) -> Result<SlabProblem<T>> {
    if !(host_transmission > T::zero() && host_transmission <= T::one()) {
        return Err(Error::InvalidParams(format!(
            "host transmission must lie in (0, 1], got {host_transmission}"
        )));
    }
    if !(coupling_calibration >= T::zero()) {
        return Err(Error::InvalidParams(
            "coupling calibration must be non-negative".into(),
        ));
    }
    let kappa = params.idler_alpha_ratio;
    let root_c = coupling_calibration.sqrt();
    Ok(SlabProblem {
        alpha4: alpha40l * resp.alpha4_ratio + (T::one() / host_transmission).ln(),
        alpha2: alpha40l * kappa * resp.alpha2_ratio,
        gamma4: resp.g4_norm * (root_c * alpha40l * T::half()),
        gamma2: resp.g2_norm * (root_c * kappa * alpha40l * T::half()),
        dk: alpha40l * resp.dk_over_alpha40,
        length: T::one(),
        a4l: cr(T::one()),
    })
}

/// Signal and idler photon-flux profiles, both normalized by `|a4L|²`.
pub fn photon_flux_profiles<T: Real>(s: &SlabSolution<T>) -> (Vec<T>, Vec<T>) {
    let Some(last) = s.a4.last() else {
        return (Vec::new(), Vec::new());
    };
    let norm = last.norm_sqr();
    let sig = s.a4.iter().map(|v| v.norm_sqr() / norm).collect();
    let idl = s.a2.iter().map(|v| v.norm_sqr() / norm).collect();
    (sig, idl)
}

pub(crate) fn uniform_grid<T: Real>(length: T, samples: usize) -> Vec<T> {
    let n = samples.max(2);
    let step = length / T::lit((n - 1) as f64);
    (0..n)
        .map(|k| {
            if k == n - 1 {
                length
            } else {
                step * T::lit(k as f64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;

    fn zero_response() -> ResponseSet<f64> {
        ResponseSet {
            rho0: CMatrix::identity(4),
            a44: cr(0.0),
            a42: cr(0.0),
            a22: cr(0.0),
            a24: cr(0.0),
            alpha4_ratio: 0.0,
            alpha2_ratio: 0.0,
            dn4_norm: 0.0,
            dn2_norm: 0.0,
            dn1_norm: 0.0,
            dn3_norm: 0.0,
            g4_norm: cr(0.0),
            g2_norm: cr(0.0),
            dk_over_alpha40: 0.0,
            condition: 1.0,
            ill_conditioned: false,
        }
    }

    #[test]
    fn host_background() {
        let params = FourLevelParams::published_defaults();
        let p = assemble_slab_problem(&zero_response(), 37.02, &params, 0.10, 1.0).unwrap();
        assert!((p.alpha4 - 10f64.ln()).abs() < 1e-15);
        assert!((p.alpha4 - std::f64::consts::LN_10).abs() < 1e-15);
    }

    #[test]
    fn transparent_host_and_inert_dopants_give_nothing() {
        let params = FourLevelParams::published_defaults();
        let p = assemble_slab_problem(&zero_response(), 20.0, &params, 1.0, 1.0).unwrap();
        assert_eq!(p.alpha4, 0.0);
        assert_eq!(p.alpha2, 0.0);
        assert_eq!(p.gamma4, cr(0.0));
        assert_eq!(p.gamma2, cr(0.0));
        assert_eq!(p.dk, 0.0);
    }

    #[test]
    fn operating_point_absorption() {
        let params = FourLevelParams::published_defaults();
        let mut r = zero_response();
        r.alpha4_ratio = -0.01;
        let p = assemble_slab_problem(&r, 37.02, &params, 0.10, 1.0).unwrap();
        assert!((p.alpha4 - (37.02 * -0.01 + 10f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_host_transmission() {
        let params = FourLevelParams::published_defaults();
        assert!(assemble_slab_problem(&zero_response(), 1.0, &params, 0.0, 1.0).is_err());
        assert!(assemble_slab_problem(&zero_response(), 1.0, &params, 1.5, 1.0).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let z = uniform_grid(0.7f64, 513);
        assert_eq!(z.len(), 513);
        assert_eq!(z[0], 0.0);
        assert_eq!(z[512], 0.7);
    }
}
