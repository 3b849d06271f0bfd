//! Steady state under the controls and the first-order response to the weak
//! signal/idler pair.
//!
//! Coefficient convention: with `ρ[m][l] = i(a44 G4 + a42 G2*)` and
//! `ρ[g][n] = i(a22 G2 + a24 G4*)` in the frame of [`super::liouvillian`],
//! the reported `A_jk` are the complex conjugates `a_jk*`. This makes the
//! undriven signal response exactly `A44 = 1/(Γ_lm + iΩ4)`, and every
//! normalized quantity below is measured against that anchor.

use serde::{Deserialize, Serialize};

use super::liouvillian::{liouvillian, unvec, vec_index, SUPER_DIM};
use super::params::{DriveConfig, FourLevelParams, Level, Probes, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Lu};
use crate::scalar::{cr, imag_unit, Cplx, Real};

/// Zeroth-order density matrix together with everything the slab equations
/// need from the dopants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSet<T: Real> {
    pub rho0: CMatrix<T>,
    pub a44: Cplx<T>,
    pub a42: Cplx<T>,
    pub a22: Cplx<T>,
    pub a24: Cplx<T>,
    /// `α4/α40 = Γ_lm Re A44`.
    pub alpha4_ratio: T,
    /// `α2/α20 = Γ_ng Re A22`.
    pub alpha2_ratio: T,
    pub dn4_norm: T,
    pub dn2_norm: T,
    /// Dispersive parts of the two controls on their own transitions,
    /// `−Γ Im(ρ0_upper,lower / iG)*`; zero for a control that is switched off.
    pub dn1_norm: T,
    pub dn3_norm: T,
    /// `Γ_lm A42`.
    pub g4_norm: Cplx<T>,
    /// `Γ_ng A24`.
    pub g2_norm: Cplx<T>,
    pub dk_over_alpha40: T,
    /// 1-norm condition number of the trace-constrained steady-state system.
    pub condition: T,
    pub ill_conditioned: bool,
}

/// Trace-constrained steady-state operator, factored once per drive.
struct Constrained<T: Real> {
    base: CMatrix<T>,
    lu: Lu<T>,
    scale: T,
    condition: T,
}

const TRACE_ROW: usize = 0;

impl<T: Real> Constrained<T> {
    /// Replaces the `ρ_ll` equation (linearly dependent on the other three
    /// population equations) by the trace functional.
    fn new(params: &FourLevelParams<T>, drive: &DriveConfig<T>) -> Result<Self> {
        let base = liouvillian(params, drive, &Probes::off());
        let scale = params.coherence.lm;
        let mut a = base.scale(T::one() / scale);
        for col in 0..SUPER_DIM {
            a[(TRACE_ROW, col)] = cr(T::zero());
        }
        for lvl in Level::ALL {
            a[(TRACE_ROW, vec_index(lvl, lvl))] = cr(T::one());
        }
        let lu = a
            .lu()
            .map_err(|e| Error::SingularModel { column: e.column })?;
        let condition = lu.condition_one();
        if !condition.is_finite() || condition * T::epsilon() > T::lit(0.1) {
            return Err(Error::SingularModel { column: SUPER_DIM });
        }
        Ok(Self {
            base,
            lu,
            scale,
            condition,
        })
    }

    fn steady(&self) -> CMatrix<T> {
        let mut rhs = vec![cr(T::zero()); SUPER_DIM];
        rhs[TRACE_ROW] = cr(T::one());
        let rho = unvec(&self.lu.solve(&rhs));
        // Project onto Hermitian, unit-trace matrices; only roundoff is removed.
        let mut herm = CMatrix::from_fn(4, |i, j| (rho[(i, j)] + rho[(j, i)].conj()) * T::half());
        let tr = herm.trace().re;
        herm = herm.scale(T::one() / tr);
        herm
    }

    /// Solves `𝓛0 δρ = −δ𝓛 ρ0` with `tr δρ = 0`.
    fn first_order(&self, perturbation: &CMatrix<T>, rho0: &[Cplx<T>]) -> CMatrix<T> {
        let mut rhs: Vec<Cplx<T>> = perturbation
            .mul_vec(rho0)
            .into_iter()
            .map(|v| -v / self.scale)
            .collect();
        rhs[TRACE_ROW] = cr(T::zero());
        unvec(&self.lu.solve(&rhs))
    }
}

/// Condition numbers above this are flagged on the response.
pub fn ill_condition_threshold<T: Real>() -> T {
    T::epsilon().powf(T::lit(-0.75))
}

/// Zeroth-order (controls only) steady state.
pub fn steady_state<T: Real>(
    params: &FourLevelParams<T>,
    drive: &DriveConfig<T>,
) -> Result<CMatrix<T>> {
    params.validate()?;
    drive.validate()?;
    Ok(Constrained::new(params, drive)?.steady())
}

/// Linear response of the driven medium to the weak signal/idler pair.
pub fn probe_response<T: Real>(
    params: &FourLevelParams<T>,
    drive: &DriveConfig<T>,
) -> Result<ResponseSet<T>> {
    params.validate()?;
    drive.validate()?;
    let sys = Constrained::new(params, drive)?;
    let rho0 = sys.steady();
    let rho0_vec = super::liouvillian::vectorize(&rho0);

    let unit = cr(T::one());
    let d4 = liouvillian(params, drive, &Probes::signal(unit)).sub(&sys.base);
    let d2 = liouvillian(params, drive, &Probes::idler(unit)).sub(&sys.base);
    let r4 = sys.first_order(&d4, &rho0_vec);
    let r2 = sys.first_order(&d2, &rho0_vec);

    use Level::*;
    let coeff = |rho: &CMatrix<T>, upper: Level, lower: Level| -> Cplx<T> {
        (rho[(upper.index(), lower.index())] / imag_unit()).conj()
    };
    let a44 = coeff(&r4, M, L);
    let a24 = coeff(&r4, G, N);
    let a42 = coeff(&r2, M, L);
    let a22 = coeff(&r2, G, N);

    let w = &params.coherence;
    let dn1_norm = control_dispersion(&rho0, params, drive, Control::One);
    let dn3_norm = control_dispersion(&rho0, params, drive, Control::Three);
    let mut resp = ResponseSet {
        alpha4_ratio: w.lm * a44.re,
        alpha2_ratio: w.ng * a22.re,
        dn4_norm: -w.lm * a44.im,
        dn2_norm: -w.ng * a22.im,
        dn1_norm,
        dn3_norm,
        g4_norm: a42 * w.lm,
        g2_norm: a24 * w.ng,
        rho0,
        a44,
        a42,
        a22,
        a24,
        dk_over_alpha40: T::zero(),
        condition: sys.condition,
        ill_conditioned: sys.condition > ill_condition_threshold(),
    };
    resp.dk_over_alpha40 = phase_mismatch(params, drive, &resp);
    Ok(resp)
}

#[derive(Clone, Copy)]
enum Control {
    One,
    Three,
}

fn control_dispersion<T: Real>(
    rho0: &CMatrix<T>,
    params: &FourLevelParams<T>,
    drive: &DriveConfig<T>,
    which: Control,
) -> T {
    use Level::*;
    let (rabi, upper, lower, width) = match which {
        Control::One => (drive.g1, G, L, params.coherence.lg),
        Control::Three => (drive.g3, M, N, params.coherence.nm),
    };
    if rabi.norm() == T::zero() {
        return T::zero();
    }
    let a = (rho0[(upper.index(), lower.index())] / (imag_unit::<T>() * rabi)).conj();
    -width * a.im
}

/// `Δk/α40 = ½ Σ_j s_j (ω_j/ω4) δn_j` over `j = 1..4` with `s = (+, −, +, −)`.
///
/// The idler term carries the resonant-absorption ratio `κ = α20/α40`; the
/// host medium contributes nothing.
pub fn phase_mismatch<T: Real>(
    params: &FourLevelParams<T>,
    drive: &DriveConfig<T>,
    resp: &ResponseSet<T>,
) -> T {
    let [w1, w2, w3, w4] = field_frequencies(params, drive);
    let kappa = params.idler_alpha_ratio;
    let sum = (w1 / w4) * resp.dn1_norm - (w2 / w4) * kappa * resp.dn2_norm
        + (w3 / w4) * resp.dn3_norm
        - resp.dn4_norm;
    sum * T::half()
}

/// Angular frequencies `(ω1, ω2, ω3, ω4)` of the four fields, each the
/// transition frequency plus its detuning.
pub fn field_frequencies<T: Real>(params: &FourLevelParams<T>, drive: &DriveConfig<T>) -> [T; 4] {
    let two_pi_c = T::two() * T::PI() * T::lit(SPEED_OF_LIGHT);
    let (l1, l3) = params.control_wavelengths();
    let w = &params.wavelengths;
    [
        two_pi_c / l1 + drive.omega1,
        two_pi_c / w.idler + drive.omega2(),
        two_pi_c / l3 + drive.omega3,
        two_pi_c / w.signal + drive.omega4,
    ]
}
