use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cr, Cplx, Real};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Energy levels in ascending order. The signal couples `L`–`M`, the idler
/// `N`–`G`, and the two controls drive `L`–`G` and `N`–`M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    L,
    N,
    G,
    M,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::L, Level::N, Level::G, Level::M];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }
}

/// Total population decay rates (s⁻¹); the ground level `l` does not decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelDecay<T> {
    pub n: T,
    pub g: T,
    pub m: T,
}

/// Partial population transfer rates (s⁻¹), read as `γ_ab`: from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialRates<T> {
    pub gl: T,
    pub gn: T,
    pub ml: T,
    pub mn: T,
}

/// Homogeneous half-widths of the six coherences (s⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceWidths<T> {
    pub lg: T,
    pub lm: T,
    pub ng: T,
    pub nm: T,
    pub gm: T,
    pub ln: T,
}

impl<T: Real> CoherenceWidths<T> {
    /// Half-width of the coherence between two distinct levels.
    pub fn between(&self, a: Level, b: Level) -> T {
        use Level::*;
        match (a, b) {
            (L, G) | (G, L) => self.lg,
            (L, M) | (M, L) => self.lm,
            (N, G) | (G, N) => self.ng,
            (N, M) | (M, N) => self.nm,
            (G, M) | (M, G) => self.gm,
            (L, N) | (N, L) => self.ln,
            _ => T::zero(),
        }
    }
}

/// Transition wavelengths in meters. Control wavelengths are optional; when
/// absent both are placed at the mean wave number of signal and idler, which
/// satisfies the level-spacing closure `1/λ1 + 1/λ3 = 1/λ4 + 1/λ2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavelengths<T> {
    pub signal: T,
    pub idler: T,
    pub control1: Option<T>,
    pub control3: Option<T>,
}

/// Relaxation constants and transition data of the four-level center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourLevelParams<T> {
    pub level_decay: LevelDecay<T>,
    pub partial_rates: PartialRates<T>,
    pub coherence: CoherenceWidths<T>,
    pub wavelengths: Wavelengths<T>,
    /// `α20/α40`: resonant absorption of the idler transition relative to the signal.
    pub idler_alpha_ratio: T,
}

impl<T: Real> FourLevelParams<T> {
    /// The representative relaxation-rate set for dye-like centers with
    /// λ4 = 480 nm and λ2 = 756 nm.
    pub fn published_defaults() -> Self {
        Self {
            level_decay: LevelDecay {
                n: T::lit(20e6),
                g: T::lit(120e6),
                m: T::lit(120e6),
            },
            partial_rates: PartialRates {
                gl: T::lit(7e6),
                gn: T::lit(4e6),
                ml: T::lit(10e6),
                mn: T::lit(5e6),
            },
            coherence: CoherenceWidths {
                lg: T::lit(1e12),
                lm: T::lit(1.9e12),
                ng: T::lit(1.5e12),
                nm: T::lit(1.8e12),
                gm: T::lit(5e10),
                ln: T::lit(1e10),
            },
            wavelengths: Wavelengths {
                signal: T::lit(480e-9),
                idler: T::lit(756e-9),
                control1: None,
                control3: None,
            },
            idler_alpha_ratio: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.level_decay;
        let p = &self.partial_rates;
        let w = &self.coherence;
        let positive = [
            ("level_decay.n", d.n),
            ("level_decay.g", d.g),
            ("level_decay.m", d.m),
            ("partial_rates.gl", p.gl),
            ("partial_rates.gn", p.gn),
            ("partial_rates.ml", p.ml),
            ("partial_rates.mn", p.mn),
            ("coherence.lg", w.lg),
            ("coherence.lm", w.lm),
            ("coherence.ng", w.ng),
            ("coherence.nm", w.nm),
            ("coherence.gm", w.gm),
            ("coherence.ln", w.ln),
            ("wavelengths.signal", self.wavelengths.signal),
            ("wavelengths.idler", self.wavelengths.idler),
            ("idler_alpha_ratio", self.idler_alpha_ratio),
        ];
        for (name, v) in positive {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("wavelengths.control1", self.wavelengths.control1),
            ("wavelengths.control3", self.wavelengths.control3),
        ] {
            if let Some(v) = v {
                if !(v > T::zero() && v.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if p.gl + p.gn > d.g {
            return Err(Error::InvalidParams(
                "partial rates out of g exceed its total decay".into(),
            ));
        }
        if p.ml + p.mn > d.m {
            return Err(Error::InvalidParams(
                "partial rates out of m exceed its total decay".into(),
            ));
        }
        // Pure dephasing must be non-negative on every coherence.
        use Level::*;
        for (a, b) in [(L, G), (L, M), (N, G), (N, M), (G, M), (L, N)] {
            let floor = (self.total_decay(a) + self.total_decay(b)) * T::half();
            let width = w.between(a, b);
            if width < floor {
                return Err(Error::InvalidParams(format!(
                    "coherence {a:?}{b:?} half-width {width} below population-decay floor {floor}"
                )));
            }
        }
        Ok(())
    }

    pub fn total_decay(&self, level: Level) -> T {
        match level {
            Level::L => T::zero(),
            Level::N => self.level_decay.n,
            Level::G => self.level_decay.g,
            Level::M => self.level_decay.m,
        }
    }

    /// Control wavelengths `(λ1, λ3)`, filled in as documented on [`Wavelengths`].
    pub fn control_wavelengths(&self) -> (T, T) {
        let w = &self.wavelengths;
        let mean_k = (T::one() / w.signal + T::one() / w.idler) * T::half();
        match (w.control1, w.control3) {
            (Some(a), Some(b)) => (a, b),
            (Some(a), None) => (a, T::one() / (T::two() * mean_k - T::one() / a)),
            (None, Some(b)) => (T::one() / (T::two() * mean_k - T::one() / b), b),
            (None, None) => (T::one() / mean_k, T::one() / mean_k),
        }
    }
}

/// Control-field Rabi frequencies and detunings (all s⁻¹).
///
/// The idler detuning is not stored: the frequency loop `ω2 = ω1 + ω3 − ω4`
/// fixes it as `Ω2 = Ω1 + Ω3 − Ω4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig<T: Real> {
    pub g1: Cplx<T>,
    pub g3: Cplx<T>,
    pub omega1: T,
    pub omega3: T,
    pub omega4: T,
}

impl<T: Real> DriveConfig<T> {
    /// `G1 = G3 = 5×10¹⁰ s⁻¹`, `Ω1 = Ω3 = 2.5 Γ_lg`, signal on resonance.
    pub fn published_defaults(params: &FourLevelParams<T>) -> Self {
        let det = T::lit(2.5) * params.coherence.lg;
        Self {
            g1: cr(T::lit(5e10)),
            g3: cr(T::lit(5e10)),
            omega1: det,
            omega3: det,
            omega4: T::zero(),
        }
    }

    pub fn undriven() -> Self {
        Self {
            g1: cr(T::zero()),
            g3: cr(T::zero()),
            omega1: T::zero(),
            omega3: T::zero(),
            omega4: T::zero(),
        }
    }

    #[inline]
    pub fn omega2(&self) -> T {
        self.omega1 + self.omega3 - self.omega4
    }

    /// Sets the signal detuning from `y4 = Ω4/Γ_lm`.
    pub fn with_y4(mut self, params: &FourLevelParams<T>, y4: T) -> Self {
        self.omega4 = y4 * params.coherence.lm;
        self
    }

    /// Sign-flipped detunings and conjugated Rabi frequencies.
    pub fn mirrored(&self) -> Self {
        Self {
            g1: self.g1.conj(),
            g3: self.g3.conj(),
            omega1: -self.omega1,
            omega3: -self.omega3,
            omega4: -self.omega4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.g1.re,
            self.g1.im,
            self.g3.re,
            self.g3.im,
            self.omega1,
            self.omega3,
            self.omega4,
        ]
        .iter()
        .all(|v| v.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidParams(
                "drive contains non-finite values".into(),
            ))
        }
    }
}

/// Weak signal and idler Rabi frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Probes<T: Real> {
    pub g4: Cplx<T>,
    pub g2: Cplx<T>,
}

impl<T: Real> Probes<T> {
    pub fn off() -> Self {
        Self {
            g4: cr(T::zero()),
            g2: cr(T::zero()),
        }
    }

    pub fn signal(g4: Cplx<T>) -> Self {
        Self { g4, ..Self::off() }
    }

    pub fn idler(g2: Cplx<T>) -> Self {
        Self { g2, ..Self::off() }
    }
}
