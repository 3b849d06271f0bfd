//! JSON run configuration. Every key is optional; omitted keys take the
//! published parameter set. Rates and Rabi frequencies are plain s⁻¹ (no
//! hidden 2π), wavelengths are meters, cross-sections cm², densities cm⁻³.

use std::path::Path;

use nimopa::qresponse::{
    CoherenceWidths, DriveConfig, FourLevelParams, LevelDecay, PartialRates, Wavelengths,
};
use nimopa::scan::{Axis, AxisRange, SlabSettings, SweepSpec};
use nimopa::{Cplx, DriveConfigF64, FourLevelParamsF64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::estimate::EstimateInput;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub drive: DriveSection,
    pub slab: SlabSection,
    pub response: ResponseSweep,
    pub slab_sweep: SlabSweep,
    pub scan_g: ControlSweep,
    pub dk_zeros: DkZeros,
    pub estimate: EstimateInput,
    /// Seed for the randomized self-test suite.
    pub seed: u64,
    /// Filled in by the manifest writer and ignored on input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    /// s⁻¹
    pub level_decay: LevelDecayConfig,
    /// s⁻¹, `γ_ab` read as a → b
    pub partial_rates: PartialRatesConfig,
    /// s⁻¹ half-widths
    pub coherence: CoherenceConfig,
    /// m
    pub wavelengths: WavelengthConfig,
    /// `α20/α40`
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelDecayConfig {
    pub n: f64,
    pub g: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialRatesConfig {
    pub gl: f64,
    pub gn: f64,
    pub ml: f64,
    pub mn: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoherenceConfig {
    pub lg: f64,
    pub lm: f64,
    pub ng: f64,
    pub nm: f64,
    pub gm: f64,
    pub ln: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavelengthConfig {
    pub signal: f64,
    pub idler: f64,
    pub control1: Option<f64>,
    pub control3: Option<f64>,
}

fn published() -> FourLevelParamsF64 {
    FourLevelParams::published_defaults()
}

impl Default for LevelDecayConfig {
    fn default() -> Self {
        let d = published().level_decay;
        Self {
            n: d.n,
            g: d.g,
            m: d.m,
        }
    }
}

impl Default for PartialRatesConfig {
    fn default() -> Self {
        let p = published().partial_rates;
        Self {
            gl: p.gl,
            gn: p.gn,
            ml: p.ml,
            mn: p.mn,
        }
    }
}

impl Default for CoherenceConfig {
    fn default() -> Self {
        let w = published().coherence;
        Self {
            lg: w.lg,
            lm: w.lm,
            ng: w.ng,
            nm: w.nm,
            gm: w.gm,
            ln: w.ln,
        }
    }
}

impl Default for WavelengthConfig {
    fn default() -> Self {
        let w = published().wavelengths;
        Self {
            signal: w.signal,
            idler: w.idler,
            control1: w.control1,
            control3: w.control3,
        }
    }
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            level_decay: LevelDecayConfig::default(),
            partial_rates: PartialRatesConfig::default(),
            coherence: CoherenceConfig::default(),
            wavelengths: WavelengthConfig::default(),
            kappa: published().idler_alpha_ratio,
        }
    }
}

impl ParamsConfig {
    pub fn to_params(&self) -> FourLevelParamsF64 {
        let (d, p, w, l) = (
            self.level_decay,
            self.partial_rates,
            self.coherence,
            self.wavelengths,
        );
        FourLevelParams {
            level_decay: LevelDecay {
                n: d.n,
                g: d.g,
                m: d.m,
            },
            partial_rates: PartialRates {
                gl: p.gl,
                gn: p.gn,
                ml: p.ml,
                mn: p.mn,
            },
            coherence: CoherenceWidths {
                lg: w.lg,
                lm: w.lm,
                ng: w.ng,
                nm: w.nm,
                gm: w.gm,
                ln: w.ln,
            },
            wavelengths: Wavelengths {
                signal: l.signal,
                idler: l.idler,
                control1: l.control1,
                control3: l.control3,
            },
            idler_alpha_ratio: self.kappa,
        }
    }
}

/// Control fields. The applied Rabi frequency is `rabi_scale · g`; set
/// `rabi_scale` to 2π to read the quoted strengths as cyclic frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSection {
    /// s⁻¹
    pub g1: f64,
    /// s⁻¹
    pub g3: f64,
    /// rad
    pub g1_phase: f64,
    /// rad
    pub g3_phase: f64,
    /// s⁻¹
    pub omega1: f64,
    /// s⁻¹
    pub omega3: f64,
    pub rabi_scale: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        let d = DriveConfig::published_defaults(&published());
        Self {
            g1: d.g1.re,
            g3: d.g3.re,
            g1_phase: 0.0,
            g3_phase: 0.0,
            omega1: d.omega1,
            omega3: d.omega3,
            rabi_scale: 1.0,
        }
    }
}

impl DriveSection {
    pub fn to_drive(&self) -> DriveConfigF64 {
        DriveConfig {
            g1: Cplx::from_polar(self.rabi_scale * self.g1, self.g1_phase),
            g3: Cplx::from_polar(self.rabi_scale * self.g3, self.g3_phase),
            omega1: self.omega1,
            omega3: self.omega3,
            omega4: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlabSection {
    #[serde(rename = "alpha40L")]
    pub alpha40l: f64,
    pub host_transmission: f64,
    /// `C_g`, multiplies the product of the two couplings.
    pub coupling_calibration: f64,
    /// z samples per profile
    pub samples: usize,
}

impl Default for SlabSection {
    fn default() -> Self {
        let s = SlabSettings::<f64>::default();
        Self {
            alpha40l: s.alpha40l,
            host_transmission: s.host_transmission,
            coupling_calibration: s.coupling_calibration,
            samples: s.samples,
        }
    }
}

impl SlabSection {
    fn settings(&self) -> SlabSettings<f64> {
        SlabSettings {
            alpha40l: self.alpha40l,
            host_transmission: self.host_transmission,
            coupling_calibration: self.coupling_calibration,
            samples: self.samples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub const fn new(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count }
    }

    fn on(self, axis: Axis) -> AxisRange<f64> {
        AxisRange::new(axis, self.lo, self.hi, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseSweep {
    pub y4: Range,
}

impl Default for ResponseSweep {
    fn default() -> Self {
        Self {
            y4: Range::new(0.0, 3.0, 1024),
        }
    }
}

/// η4 against optical thickness at fixed detuning, or a (y4, α40L) map
/// when `y4_range` is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlabSweep {
    pub y4: f64,
    #[serde(rename = "alpha40L")]
    pub alpha40l: Range,
    pub y4_range: Option<Range>,
}

impl Default for SlabSweep {
    fn default() -> Self {
        Self {
            y4: 2.5266,
            alpha40l: Range::new(50.0 / 1024.0, 50.0, 1024),
            y4_range: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlAxis {
    G1,
    G3,
}

/// η4 against one control strength (s⁻¹, before `rabi_scale`) at the slab
/// section's optical thickness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlSweep {
    pub axis: ControlAxis,
    pub range: Range,
    pub y4: f64,
}

impl Default for ControlSweep {
    fn default() -> Self {
        Self {
            axis: ControlAxis::G3,
            range: Range::new(1e9, 2e11, 512),
            y4: 2.5266,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DkZeros {
    pub y4: Range,
    /// Zeros inside `[window[0], window[1]]` are counted separately.
    pub window: [f64; 2],
}

impl Default for DkZeros {
    fn default() -> Self {
        Self {
            y4: Range::new(0.0, 3.0, 1024),
            window: [0.29, 2.34],
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> FourLevelParamsF64 {
        self.params.to_params()
    }

    pub fn drive(&self) -> DriveConfigF64 {
        self.drive.to_drive()
    }

    fn base_spec(&self, axis: AxisRange<f64>, y4: f64) -> SweepSpec<f64> {
        let params = self.params();
        let drive = self.drive().with_y4(&params, y4);
        SweepSpec::new(axis, params, drive, self.slab.settings())
    }

    pub fn response_spec(&self) -> SweepSpec<f64> {
        self.base_spec(self.response.y4.on(Axis::Y4), 0.0)
    }

    pub fn slab_spec(&self) -> SweepSpec<f64> {
        let s = self.slab_sweep;
        let spec = self.base_spec(s.alpha40l.on(Axis::Alpha40L), s.y4);
        match s.y4_range {
            Some(r) => spec.with_secondary(r.on(Axis::Y4)),
            None => spec,
        }
    }

    /// The control axis is swept in applied units, `rabi_scale` included.
    pub fn scan_g_spec(&self) -> SweepSpec<f64> {
        let s = self.scan_g;
        let k = self.drive.rabi_scale;
        let axis = match s.axis {
            ControlAxis::G1 => Axis::G1,
            ControlAxis::G3 => Axis::G3,
        };
        self.base_spec(
            AxisRange::new(axis, k * s.range.lo, k * s.range.hi, s.range.count),
            s.y4,
        )
    }

    pub fn dk_spec(&self) -> SweepSpec<f64> {
        self.base_spec(self.dk_zeros.y4.on(Axis::Y4), 0.0)
    }

    /// Checks everything any subcommand could need, so that no run starts
    /// on a configuration that would fail halfway.
    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |e: nimopa::Error| CliError::Config(e.to_string());
        self.params().validate().map_err(cfg)?;
        self.drive().validate().map_err(cfg)?;
        let d = &self.drive;
        if !(d.rabi_scale > 0.0 && d.rabi_scale.is_finite()) {
            return Err(CliError::Config(format!(
                "drive.rabi_scale must be positive, got {}",
                d.rabi_scale
            )));
        }
        let s = &self.slab;
        if !(s.host_transmission > 0.0 && s.host_transmission <= 1.0) {
            return Err(CliError::Config(format!(
                "slab.host_transmission must lie in (0, 1], got {}",
                s.host_transmission
            )));
        }
        if !(s.coupling_calibration >= 0.0 && s.coupling_calibration.is_finite()) {
            return Err(CliError::Config(
                "slab.coupling_calibration must be non-negative".into(),
            ));
        }
        if !(s.alpha40l > 0.0 && s.alpha40l.is_finite()) {
            return Err(CliError::Config("slab.alpha40L must be positive".into()));
        }
        if s.samples < 2 {
            return Err(CliError::Config("slab.samples must be at least 2".into()));
        }
        for spec in [
            self.response_spec(),
            self.slab_spec(),
            self.scan_g_spec(),
            self.dk_spec(),
        ] {
            spec.validate().map_err(cfg)?;
        }
        if self.slab_sweep.alpha40l.lo <= 0.0 {
            return Err(CliError::Config(
                "slab_sweep.alpha40L.lo must be positive".into(),
            ));
        }
        let r = self.scan_g.range;
        if r.lo < 0.0 {
            return Err(CliError::Config(
                "scan_g.range.lo must be non-negative".into(),
            ));
        }
        let w = self.dk_zeros.window;
        if w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less) {
            return Err(CliError::Config(
                "dk_zeros.window must be increasing".into(),
            ));
        }
        self.estimate.validate()
    }
}
