//! Parameter sweeps over signal detuning, optical thickness and control
//! strengths, with resonance, zero and threshold location on the results.
//!
//! Grid points are evaluated in parallel and collected in grid order, so a
//! given [`SweepSpec`] always yields the same [`SweepResult`].

mod peaks;
mod threshold;
mod zeros;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use peaks::{find_peaks, Peak};
pub use threshold::{find_oscillation_threshold_in, oscillation_roots, relative_determinant};
pub use zeros::{find_zero_crossings, ZERO_TOLERANCE};

use crate::error::{Error, Result};
use crate::qresponse::{probe_response, DriveConfig, FourLevelParams, ResponseSet};
use crate::scalar::{cr, Cplx, Real};
use crate::slab::{assemble_slab_problem, solve_closed_form_sampled, SlabProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Normalized signal detuning `Ω4/Γ_lm`.
    Y4,
    /// Optical thickness `L/L_ra`.
    #[serde(rename = "alpha40L")]
    Alpha40L,
    /// Control Rabi frequency `G1` (s⁻¹, real).
    G1,
    /// Control Rabi frequency `G3` (s⁻¹, real).
    G3,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Y4 => "y4",
            Axis::Alpha40L => "alpha40L",
            Axis::G1 => "G1",
            Axis::G3 => "G3",
        }
    }

    fn affects_response(self) -> bool {
        !matches!(self, Axis::Alpha40L)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange<T> {
    pub axis: Axis,
    pub lo: T,
    pub hi: T,
    pub count: usize,
}

impl<T: Real> AxisRange<T> {
    pub fn new(axis: Axis, lo: T, hi: T, count: usize) -> Self {
        Self {
            axis,
            lo,
            hi,
            count,
        }
    }

    pub fn values(&self) -> Vec<T> {
        let n = self.count;
        let span = self.hi - self.lo;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.hi
                } else {
                    self.lo + span * T::lit(k as f64) / T::lit((n - 1) as f64)
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidParams(format!(
                "{} range needs lo < hi, got [{}, {}]",
                self.axis.name(),
                self.lo,
                self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidParams(format!(
                "{} needs at least 2 samples",
                self.axis.name()
            )));
        }
        Ok(())
    }
}

/// Optical thickness, host loss and coupling calibration of the slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabSettings<T> {
    pub alpha40l: T,
    pub host_transmission: T,
    pub coupling_calibration: T,
    pub samples: usize,
}

impl<T: Real> Default for SlabSettings<T> {
    fn default() -> Self {
        Self {
            alpha40l: T::lit(37.02),
            host_transmission: T::lit(0.10),
            coupling_calibration: T::one(),
            samples: crate::slab::DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec<T: Real> {
    pub axis: AxisRange<T>,
    pub secondary: Option<AxisRange<T>>,
    pub params: FourLevelParams<T>,
    pub drive: DriveConfig<T>,
    pub slab: SlabSettings<T>,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(
        axis: AxisRange<T>,
        params: FourLevelParams<T>,
        drive: DriveConfig<T>,
        slab: SlabSettings<T>,
    ) -> Self {
        Self {
            axis,
            secondary: None,
            params,
            drive,
            slab,
        }
    }

    pub fn with_secondary(mut self, secondary: AxisRange<T>) -> Self {
        self.secondary = Some(secondary);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.axis.validate()?;
        if let Some(s) = &self.secondary {
            s.validate()?;
            if s.axis == self.axis.axis {
                return Err(Error::InvalidParams("2D sweep axes must differ".into()));
            }
        }
        self.params.validate()?;
        self.drive.validate()
    }

    fn axes(&self) -> impl Iterator<Item = Axis> + '_ {
        std::iter::once(self.axis.axis).chain(self.secondary.map(|s| s.axis))
    }

    /// Drive and slab settings at one grid point.
    pub fn context_at(
        &self,
        primary: T,
        secondary: Option<T>,
    ) -> (DriveConfig<T>, SlabSettings<T>) {
        let mut drive = self.drive;
        let mut slab = self.slab;
        let mut apply = |axis: Axis, v: T| match axis {
            Axis::Y4 => drive = drive.with_y4(&self.params, v),
            Axis::Alpha40L => slab.alpha40l = v,
            Axis::G1 => drive.g1 = cr(v),
            Axis::G3 => drive.g3 = cr(v),
        };
        apply(self.axis.axis, primary);
        if let (Some(s), Some(v)) = (self.secondary, secondary) {
            apply(s.axis, v);
        }
        (drive, slab)
    }

    /// Slab problem at one grid point, or the reason the point is invalid.
    pub fn problem_at(&self, primary: T, secondary: Option<T>) -> Result<SlabProblem<T>> {
        let (drive, slab) = self.context_at(primary, secondary);
        let resp = probe_response(&self.params, &drive)?;
        assemble_slab_problem(
            &resp,
            slab.alpha40l,
            &self.params,
            slab.host_transmission,
            slab.coupling_calibration,
        )
    }
}

/// Normalized optical constants at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseSummary<T: Real> {
    pub alpha4_ratio: T,
    pub alpha2_ratio: T,
    pub dn4_norm: T,
    pub dn2_norm: T,
    pub g4_norm: Cplx<T>,
    pub g2_norm: Cplx<T>,
    pub dk_over_alpha40: T,
    pub ill_conditioned: bool,
}

impl<T: Real> From<&ResponseSet<T>> for ResponseSummary<T> {
    fn from(r: &ResponseSet<T>) -> Self {
        Self {
            alpha4_ratio: r.alpha4_ratio,
            alpha2_ratio: r.alpha2_ratio,
            dn4_norm: r.dn4_norm,
            dn2_norm: r.dn2_norm,
            g4_norm: r.g4_norm,
            g2_norm: r.g2_norm,
            dk_over_alpha40: r.dk_over_alpha40,
            ill_conditioned: r.ill_conditioned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T: Real> {
    pub primary: T,
    pub secondary: Option<T>,
    pub response: Option<ResponseSummary<T>>,
    pub eta4: Option<T>,
    pub oscillation_flag: bool,
    /// Why the point carries no data, when it doesn't.
    pub error: Option<String>,
}

impl<T: Real> SweepPoint<T> {
    fn invalid(primary: T, secondary: Option<T>, err: &Error) -> Self {
        Self {
            primary,
            secondary,
            response: None,
            eta4: None,
            oscillation_flag: false,
            error: Some(err.to_string()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<T: Real> {
    pub primary_axis: Axis,
    pub primary_grid: Vec<T>,
    pub secondary_axis: Option<Axis>,
    pub secondary_grid: Vec<T>,
    /// Row-major over `(secondary, primary)`: the primary index runs fastest.
    pub points: Vec<SweepPoint<T>>,
    pub peaks: Vec<Peak<T>>,
    pub zeros: Vec<T>,
    pub thresholds: Vec<T>,
}

impl<T: Real> SweepResult<T> {
    pub fn invalid_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().filter(|p| !p.is_valid()).count() as f64 / self.points.len() as f64
    }

    /// Primary-axis rows, one per secondary value (a single row in 1D).
    pub fn rows(&self) -> impl Iterator<Item = &[SweepPoint<T>]> {
        self.points.chunks(self.primary_grid.len().max(1))
    }
}

type Grid<T> = (Vec<T>, Vec<T>, Vec<(T, Option<T>)>);

fn grid_coords<T: Real>(spec: &SweepSpec<T>) -> Grid<T> {
    let primary = spec.axis.values();
    let secondary = spec.secondary.map(|s| s.values()).unwrap_or_default();
    let coords = if secondary.is_empty() {
        primary.iter().map(|&x| (x, None)).collect()
    } else {
        secondary
            .iter()
            .flat_map(|&s| primary.iter().map(move |&x| (x, Some(s))))
            .collect()
    };
    (primary, secondary, coords)
}

/// Driven optical constants on the grid; the tracked zeros are those of
/// `Δk/α40` and the peaks those of `|g4_norm|`, both along the primary axis.
pub fn sweep_response<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.validate()?;
    if spec.axes().any(|a| !a.affects_response()) {
        return Err(Error::InvalidParams(
            "response sweeps take y4, G1 or G3 axes only".into(),
        ));
    }
    let (primary, secondary, coords) = grid_coords(spec);
    let points: Vec<SweepPoint<T>> = coords
        .par_iter()
        .map(|&(x, s)| {
            let (drive, _) = spec.context_at(x, s);
            match probe_response(&spec.params, &drive) {
                Ok(r) => SweepPoint {
                    primary: x,
                    secondary: s,
                    response: Some(ResponseSummary::from(&r)),
                    eta4: None,
                    oscillation_flag: false,
                    error: None,
                },
                Err(e) => SweepPoint::invalid(x, s, &e),
            }
        })
        .collect();

    let mut result = SweepResult {
        primary_axis: spec.axis.axis,
        primary_grid: primary,
        secondary_axis: spec.secondary.map(|s| s.axis),
        secondary_grid: secondary,
        points,
        peaks: Vec::new(),
        zeros: Vec::new(),
        thresholds: Vec::new(),
    };
    let nan = T::nan();
    let rows: Vec<Vec<SweepPoint<T>>> = result.rows().map(|r| r.to_vec()).collect();
    for row in rows {
        let s = row.first().and_then(|p| p.secondary);
        let dk: Vec<T> = row
            .iter()
            .map(|p| p.response.map_or(nan, |r| r.dk_over_alpha40))
            .collect();
        let zeros = find_zero_crossings(&result.primary_grid, &dk, |x| {
            let (drive, _) = spec.context_at(x, s);
            probe_response(&spec.params, &drive)
                .ok()
                .map(|r| r.dk_over_alpha40)
        });
        result.zeros.extend(zeros);
        let g4: Vec<T> = row
            .iter()
            .map(|p| p.response.map_or(nan, |r| r.g4_norm.norm()))
            .collect();
        result.peaks.extend(
            find_peaks(&result.primary_grid, &g4)
                .into_iter()
                .map(|pk| Peak { secondary: s, ..pk }),
        );
    }
    Ok(result)
}

/// Transmittance `η4` on the grid, with the peaks of `η4` and the
/// self-oscillation roots along the primary axis.
pub fn sweep_slab<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.validate()?;
    let (primary, secondary, coords) = grid_coords(spec);

    // The dopant response does not depend on the optical thickness; evaluate
    // it once per distinct response-affecting coordinate.
    let key = |x: T, s: Option<T>| -> (Option<T>, Option<T>) {
        let kp = spec.axis.axis.affects_response().then_some(x);
        let ks = match (spec.secondary, s) {
            (Some(r), Some(v)) if r.axis.affects_response() => Some(v),
            _ => None,
        };
        (kp, ks)
    };
    let mut keys: Vec<(Option<T>, Option<T>)> = Vec::new();
    for &(x, s) in &coords {
        let k = key(x, s);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let responses: Vec<Result<ResponseSet<T>>> = keys
        .par_iter()
        .map(|&(kp, ks)| {
            let x = kp.unwrap_or(primary[0]);
            let s = ks.or_else(|| secondary.first().copied());
            let (drive, _) = spec.context_at(x, s);
            probe_response(&spec.params, &drive)
        })
        .collect();

    let points: Vec<SweepPoint<T>> = coords
        .par_iter()
        .map(|&(x, s)| {
            let idx = keys
                .iter()
                .position(|k| *k == key(x, s))
                .expect("key registered");
            let resp = match &responses[idx] {
                Ok(r) => r,
                Err(e) => return SweepPoint::invalid(x, s, e),
            };
            let (_, slab) = spec.context_at(x, s);
            let solved = assemble_slab_problem(
                resp,
                slab.alpha40l,
                &spec.params,
                slab.host_transmission,
                slab.coupling_calibration,
            )
            .and_then(|p| solve_closed_form_sampled(&p, 2));
            match solved {
                Ok(sol) => SweepPoint {
                    primary: x,
                    secondary: s,
                    response: Some(ResponseSummary::from(resp)),
                    eta4: Some(sol.eta4),
                    oscillation_flag: sol.oscillation_flag,
                    error: None,
                },
                Err(e) => SweepPoint::invalid(x, s, &e),
            }
        })
        .collect();

    let mut result = SweepResult {
        primary_axis: spec.axis.axis,
        primary_grid: primary,
        secondary_axis: spec.secondary.map(|s| s.axis),
        secondary_grid: secondary,
        points,
        peaks: Vec::new(),
        zeros: Vec::new(),
        thresholds: Vec::new(),
    };
    let rows: Vec<Vec<SweepPoint<T>>> = result.rows().map(|r| r.to_vec()).collect();
    for row in rows {
        let s = row.first().and_then(|p| p.secondary);
        let eta: Vec<T> = row.iter().map(|p| p.eta4.unwrap_or(T::nan())).collect();
        result.peaks.extend(
            find_peaks(&result.primary_grid, &eta)
                .into_iter()
                .map(|pk| Peak { secondary: s, ..pk }),
        );
        if spec.secondary.is_none() {
            result.thresholds =
                oscillation_roots(&result.primary_grid, |x| spec.problem_at(x, s).ok());
        }
    }
    Ok(result)
}

/// Smallest primary-axis value at which the slab self-oscillates (1D sweeps).
pub fn find_oscillation_threshold<T: Real>(spec: &SweepSpec<T>) -> Result<T> {
    spec.validate()?;
    if spec.secondary.is_some() {
        return Err(Error::InvalidParams(
            "oscillation threshold search needs a 1D sweep".into(),
        ));
    }
    find_oscillation_threshold_in(&spec.axis.values(), |x| spec.problem_at(x, None).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(axis: AxisRange<f64>) -> SweepSpec<f64> {
        let params = FourLevelParams::published_defaults();
        let drive = DriveConfig::published_defaults(&params);
        SweepSpec::new(axis, params, drive, SlabSettings::default())
    }

    #[test]
    fn two_level_lorentzian_along_y4() {
        let mut spec = base(AxisRange::new(Axis::Y4, -5.0, 5.0, 101));
        spec.drive = DriveConfig::undriven();
        let res = sweep_response(&spec).unwrap();
        for p in &res.points {
            let r = p.response.unwrap();
            let want = 1.0 / (1.0 + p.primary * p.primary);
            assert!((r.alpha4_ratio - want).abs() < 1e-10);
        }
    }

    #[test]
    fn fwm_vanishes_without_second_control() {
        let mut spec = base(AxisRange::new(Axis::G1, 1e9, 2e11, 17));
        spec.drive.g3 = cr(0.0);
        let res = sweep_response(&spec).unwrap();
        assert!(res
            .points
            .iter()
            .all(|p| p.response.unwrap().g4_norm.norm() == 0.0));
        assert!(res.peaks.is_empty());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(sweep_response(&base(AxisRange::new(Axis::Alpha40L, 0.0, 1.0, 10))).is_err());
        assert!(sweep_slab(&base(AxisRange::new(Axis::Y4, 1.0, 1.0, 10))).is_err());
        assert!(sweep_slab(&base(AxisRange::new(Axis::Y4, 0.0, 1.0, 1))).is_err());
        let dup = base(AxisRange::new(Axis::Y4, 0.0, 1.0, 4)).with_secondary(AxisRange::new(
            Axis::Y4,
            0.0,
            1.0,
            4,
        ));
        assert!(sweep_slab(&dup).is_err());
    }

    #[test]
    fn uncoupled_slab_follows_beer_law() {
        let mut spec = base(AxisRange::new(Axis::Alpha40L, 0.5, 50.0, 64));
        spec.drive.g3 = cr(0.0);
        spec.drive = spec.drive.with_y4(&spec.params, 2.5266);
        let res = sweep_slab(&spec).unwrap();
        let resp = probe_response(&spec.params, &spec.drive).unwrap();
        for p in &res.points {
            let a4l = p.primary * resp.alpha4_ratio + 10f64.ln();
            let want = (-a4l).exp();
            assert!((p.eta4.unwrap() - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300);
        }
        assert!(res.peaks.is_empty());
        assert!(res.thresholds.is_empty());
    }

    #[test]
    fn two_dimensional_layout() {
        let spec = base(AxisRange::new(Axis::Alpha40L, 1.0, 40.0, 5))
            .with_secondary(AxisRange::new(Axis::Y4, 2.0, 3.0, 3));
        let res = sweep_slab(&spec).unwrap();
        assert_eq!(res.points.len(), 15);
        assert_eq!(res.points[6].secondary, Some(2.5));
        assert_eq!(res.points[6].primary, 1.0 + 39.0 / 4.0);
        assert_eq!(res.rows().count(), 3);
    }

    #[test]
    fn invalid_points_are_tagged_not_fatal() {
        let mut spec = base(AxisRange::new(Axis::Y4, 0.0, 1.0, 4));
        spec.slab.host_transmission = 2.0;
        let res = sweep_slab(&spec).unwrap();
        assert_eq!(res.invalid_fraction(), 1.0);
        assert!(res
            .points
            .iter()
            .all(|p| p.error.is_some() && p.eta4.is_none()));
    }
}
