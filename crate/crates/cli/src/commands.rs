//! Subcommand bodies. Each builds its artifacts fully in memory; nothing
//! touches the output directory until the run has succeeded.

use std::path::Path;

use nimopa::qresponse::probe_response;
use nimopa::scan::{sweep_response, sweep_slab, Peak, SweepResult};
use nimopa::slab::{
    assemble_slab_problem, photon_flux_profiles, solve_closed_form_sampled, SlabProblem,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::estimate::estimate_slab;
use crate::output::{flag, num, Artifacts, Table};
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Response,
    Slab,
    ScanG,
    DkZeros,
    Estimate,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Response => "response",
            Command::Slab => "slab",
            Command::ScanG => "scan-g",
            Command::DkZeros => "dk-zeros",
            Command::Estimate => "estimate",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Format {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub format: Format,
    pub threads: Option<usize>,
}

/// Sweeps with more than this fraction of invalid points are failures.
pub const MAX_INVALID_FRACTION: f64 = 0.5;

/// Outcome of a run: files to write plus human-readable summary lines.
#[derive(Debug)]
pub struct Report {
    pub artifacts: Artifacts,
    pub summary: Vec<String>,
    /// `false` when a self-test check failed.
    pub ok: bool,
}

pub fn execute(cmd: Command, cfg: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut report = match cmd {
        Command::Response => response(cfg, opts)?,
        Command::Slab => slab(cfg, opts)?,
        Command::ScanG => scan_g(cfg, opts)?,
        Command::DkZeros => dk_zeros(cfg, opts)?,
        Command::Estimate => estimate(cfg)?,
        Command::Selftest => selftest(cfg)?,
    };
    let manifest = manifest(cmd, cfg, opts, &report.artifacts)?;
    report.artifacts.add("manifest.json", manifest);
    Ok(report)
}

/// Runs, then writes all artifacts at once into `out`.
pub fn run(cmd: Command, cfg: &RunConfig, opts: &Options, out: &Path) -> Result<Report, CliError> {
    let report = execute(cmd, cfg, opts)?;
    if !report.ok {
        return Err(CliError::Numeric(report.summary.join("; ")));
    }
    report.artifacts.write_all(out)?;
    Ok(report)
}

fn manifest(
    cmd: Command,
    cfg: &RunConfig,
    opts: &Options,
    artifacts: &Artifacts,
) -> Result<Vec<u8>, CliError> {
    let mut resolved = cfg.clone();
    let mut outputs = artifacts.names();
    outputs.push("manifest.json".into());
    resolved.run = Some(serde_json::json!({
        "command": cmd.name(),
        "format": opts.format,
        "threads": opts.threads,
        "version": env!("CARGO_PKG_VERSION"),
        "outputs": outputs,
    }));
    let mut bytes =
        serde_json::to_vec_pretty(&resolved).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn check_invalid<T: nimopa::Real>(res: &SweepResult<T>, what: &str) -> Result<(), CliError> {
    let frac = res.invalid_fraction();
    if frac > MAX_INVALID_FRACTION {
        let first = res
            .points
            .iter()
            .find_map(|p| p.error.clone())
            .unwrap_or_default();
        return Err(CliError::Numeric(format!(
            "{what}: {:.0}% of grid points invalid (first: {first})",
            100.0 * frac
        )));
    }
    Ok(())
}

fn features(peaks: &[Peak<f64>], peak_kind: &str, zeros: &[(&str, f64)]) -> Table {
    let mut t = Table::new(&["kind", "location", "height", "width", "secondary"]);
    for p in peaks {
        t.push(vec![
            peak_kind.into(),
            num(p.location),
            num(p.height),
            p.width.map(num).unwrap_or_default(),
            p.secondary.map(num).unwrap_or_default(),
        ]);
    }
    for (kind, z) in zeros {
        t.push(vec![
            kind.to_string(),
            num(*z),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    t
}

fn svg_enabled(opts: &Options) -> bool {
    opts.format == Format::CsvSvg
}

fn response(cfg: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let res = sweep_response(&cfg.response_spec())?;
    check_invalid(&res, "response sweep")?;
    let mut t = Table::new(&[
        "y4",
        "alpha4_ratio",
        "alpha2_ratio",
        "dn4",
        "dn2",
        "re_g4",
        "im_g4",
        "re_g2",
        "im_g2",
        "dk_over_alpha40",
    ]);
    let nan = f64::NAN;
    let mut cols: [Vec<f64>; 5] = Default::default();
    for p in &res.points {
        let r = p.response;
        let v = |f: fn(&nimopa::scan::ResponseSummary<f64>) -> f64| r.as_ref().map_or(nan, f);
        let row = [
            p.primary,
            v(|r| r.alpha4_ratio),
            v(|r| r.alpha2_ratio),
            v(|r| r.dn4_norm),
            v(|r| r.dn2_norm),
            v(|r| r.g4_norm.re),
            v(|r| r.g4_norm.im),
            v(|r| r.g2_norm.re),
            v(|r| r.g2_norm.im),
            v(|r| r.dk_over_alpha40),
        ];
        for (c, x) in cols
            .iter_mut()
            .zip([row[1], row[2], row[3], row[9], v(|r| r.g4_norm.norm())])
        {
            c.push(x);
        }
        t.push(row.iter().map(|&x| num(x)).collect());
    }
    let zeros: Vec<(&str, f64)> = res.zeros.iter().map(|&z| ("dk_zero", z)).collect();
    let mut a = Artifacts::default();
    a.add("response.csv", t.to_csv()?);
    a.add(
        "response_features.csv",
        features(&res.peaks, "g4_peak", &zeros).to_csv()?,
    );
    if svg_enabled(opts) {
        let x = &res.primary_grid;
        let names = ["alpha4/alpha40", "alpha2/alpha20", "dn4", "dk/alpha40"];
        let series: Vec<Series> = names
            .iter()
            .zip(&cols)
            .map(|(name, y)| Series { name, x, y })
            .collect();
        let g4 = Series {
            name: "|g4|",
            x,
            y: &cols[4],
        };
        a.add(
            "response.svg",
            line_plot("Driven optical constants", "y4", &series).into_bytes(),
        );
        a.add(
            "response_g4.svg",
            line_plot("FWM coupling", "y4", &[g4]).into_bytes(),
        );
    }
    let n_ill = res
        .points
        .iter()
        .filter(|p| p.response.is_some_and(|r| r.ill_conditioned))
        .count();
    Ok(Report {
        artifacts: a,
        summary: vec![
            format!(
                "response: {} points, {} ill-conditioned",
                res.points.len(),
                n_ill
            ),
            format!(
                "dk zeros: {}, g4 peaks: {}",
                res.zeros.len(),
                res.peaks.len()
            ),
        ],
        ok: true,
    })
}

fn eta_table(
    res: &SweepResult<f64>,
    first: &str,
    value: impl Fn(&nimopa::scan::SweepPoint<f64>) -> [f64; 3],
) -> Table {
    let mut t = Table::new(&[first, "y4", "alpha40L", "eta4", "oscillation_flag"]);
    let with_first = first != "y4";
    if !with_first {
        t.header.remove(0);
    }
    for p in &res.points {
        let [a, y4, l] = value(p);
        let mut row = vec![
            num(y4),
            num(l),
            num(p.eta4.unwrap_or(f64::NAN)),
            flag(p.oscillation_flag),
        ];
        if with_first {
            row.insert(0, num(a));
        }
        t.push(row);
    }
    t
}

fn eta_plot(res: &SweepResult<f64>, title: &str, xlabel: &str) -> String {
    let rows: Vec<_> = res.rows().collect();
    let pick: Vec<usize> = if rows.len() <= 6 {
        (0..rows.len()).collect()
    } else {
        (0..6).map(|k| k * (rows.len() - 1) / 5).collect()
    };
    let ys: Vec<(String, Vec<f64>)> = pick
        .iter()
        .map(|&k| {
            let name = rows[k][0]
                .secondary
                .map_or("eta4".to_string(), |s| format!("y4={s:.4}"));
            (
                name,
                rows[k].iter().map(|p| p.eta4.unwrap_or(f64::NAN)).collect(),
            )
        })
        .collect();
    let series: Vec<Series> = ys
        .iter()
        .map(|(name, y)| Series {
            name,
            x: &res.primary_grid,
            y,
        })
        .collect();
    line_plot(title, xlabel, &series)
}

fn slab(cfg: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let res = sweep_slab(&cfg.slab_spec())?;
    check_invalid(&res, "slab sweep")?;
    let y4 = cfg.slab_sweep.y4;
    let t = eta_table(&res, "y4", |p| [0.0, p.secondary.unwrap_or(y4), p.primary]);
    let thresholds: Vec<(&str, f64)> = res
        .thresholds
        .iter()
        .map(|&z| ("oscillation_threshold", z))
        .collect();
    let mut a = Artifacts::default();
    a.add("slab.csv", t.to_csv()?);
    a.add(
        "slab_features.csv",
        features(&res.peaks, "eta4_peak", &thresholds).to_csv()?,
    );
    if svg_enabled(opts) {
        a.add(
            "slab.svg",
            eta_plot(&res, "Signal transmittance", "alpha40 L").into_bytes(),
        );
    }
    let (profile, eta_op) = operating_profile(cfg)?;
    a.add("slab_profile.csv", profile.0.to_csv()?);
    if svg_enabled(opts) {
        let title = format!("Photon fluxes at alpha40 L = {}", cfg.slab.alpha40l);
        let sig = Series {
            name: "signal",
            x: &profile.1,
            y: &profile.2,
        };
        let idl = Series {
            name: "idler",
            x: &profile.1,
            y: &profile.3,
        };
        a.add(
            "slab_profile.svg",
            line_plot(&title, "z/L", &[sig, idl]).into_bytes(),
        );
    }
    let above = res.peaks.iter().filter(|p| p.height > 1.0).count();
    Ok(Report {
        artifacts: a,
        summary: vec![
            format!(
                "slab: {} points, {} eta4 peaks ({} above 1), {} oscillation thresholds",
                res.points.len(),
                res.peaks.len(),
                above,
                res.thresholds.len()
            ),
            format!(
                "operating point alpha40L = {}: eta4 = {eta_op:e}",
                cfg.slab.alpha40l
            ),
        ],
        ok: true,
    })
}

type Profile = (Table, Vec<f64>, Vec<f64>, Vec<f64>);

/// Flux profiles at the slab section's optical thickness and the sweep's y4.
fn operating_profile(cfg: &RunConfig) -> Result<(Profile, f64), CliError> {
    let params = cfg.params();
    let drive = cfg.drive().with_y4(&params, cfg.slab_sweep.y4);
    let resp = probe_response(&params, &drive)?;
    let s = &cfg.slab;
    let problem = assemble_slab_problem(
        &resp,
        s.alpha40l,
        &params,
        s.host_transmission,
        s.coupling_calibration,
    )?;
    let sol = solve_closed_form_sampled(&problem, s.samples)?;
    let (sig, idl) = photon_flux_profiles(&sol);
    let mut t = Table::new(&["z", "signal_flux", "idler_flux"]);
    for k in 0..sol.z.len() {
        t.push(vec![num(sol.z[k]), num(sig[k]), num(idl[k])]);
    }
    Ok(((t, sol.z.clone(), sig, idl), sol.eta4))
}

fn scan_g(cfg: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let spec = cfg.scan_g_spec();
    let res = sweep_slab(&spec)?;
    check_invalid(&res, "control sweep")?;
    let axis = spec.axis.axis.name();
    let (y4, l) = (cfg.scan_g.y4, cfg.slab.alpha40l);
    let t = eta_table(&res, axis, |p| [p.primary, y4, l]);
    let thresholds: Vec<(&str, f64)> = res
        .thresholds
        .iter()
        .map(|&z| ("oscillation_threshold", z))
        .collect();
    let mut a = Artifacts::default();
    a.add("scan_g.csv", t.to_csv()?);
    a.add(
        "scan_g_features.csv",
        features(&res.peaks, "eta4_peak", &thresholds).to_csv()?,
    );
    if svg_enabled(opts) {
        let xlabel = format!("{axis} (s^-1)");
        a.add(
            "scan_g.svg",
            eta_plot(&res, "Transmittance against control strength", &xlabel).into_bytes(),
        );
    }
    Ok(Report {
        artifacts: a,
        summary: vec![format!(
            "scan-g ({axis}): {} points, {} eta4 peaks",
            res.points.len(),
            res.peaks.len()
        )],
        ok: true,
    })
}

fn dk_zeros(cfg: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let res = sweep_response(&cfg.dk_spec())?;
    check_invalid(&res, "dk sweep")?;
    let [lo, hi] = cfg.dk_zeros.window;
    let mut t = Table::new(&["index", "y4", "in_window"]);
    for (k, &z) in res.zeros.iter().enumerate() {
        t.push(vec![k.to_string(), num(z), flag(z > lo && z < hi)]);
    }
    let inside = res.zeros.iter().filter(|&&z| z > lo && z < hi).count();
    let mut a = Artifacts::default();
    a.add("dk_zeros.csv", t.to_csv()?);
    if svg_enabled(opts) {
        let dk: Vec<f64> = res
            .points
            .iter()
            .map(|p| p.response.map_or(f64::NAN, |r| r.dk_over_alpha40))
            .collect();
        let s = Series {
            name: "dk/alpha40",
            x: &res.primary_grid,
            y: &dk,
        };
        a.add(
            "dk_zeros.svg",
            line_plot("Phase mismatch", "y4", &[s]).into_bytes(),
        );
    }
    let list: Vec<String> = res.zeros.iter().map(|z| format!("{z:.6}")).collect();
    Ok(Report {
        artifacts: a,
        summary: vec![
            format!(
                "dk zeros: {} total, {} in ({lo}, {hi})",
                res.zeros.len(),
                inside
            ),
            format!("at y4 = [{}]", list.join(", ")),
        ],
        ok: true,
    })
}

fn estimate(cfg: &RunConfig) -> Result<Report, CliError> {
    let e = estimate_slab(&cfg.estimate);
    let mut t = Table::new(&["alpha40_per_cm", "L_um", "dn_bound"]);
    t.push(vec![
        num(e.alpha40_per_cm),
        num(e.length_um),
        num(e.dn_bound),
    ]);
    let mut a = Artifacts::default();
    a.add("estimate.csv", t.to_csv()?);
    Ok(Report {
        artifacts: a,
        summary: vec![format!(
            "alpha40 = {:e} cm^-1, L = {} um, dn bound = {:e}",
            e.alpha40_per_cm, e.length_um, e.dn_bound
        )],
        ok: true,
    })
}

/// Fast built-in checks against closed-form limits.
fn selftest(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut checks: Vec<(&str, f64, f64)> = Vec::new();

    let params = cfg.params();
    let mut worst = 0.0f64;
    for k in 0..=64 {
        let y = -5.0 + 10.0 * k as f64 / 64.0;
        let d = nimopa::qresponse::DriveConfig::undriven().with_y4(&params, y);
        let r = probe_response(&params, &d)?;
        worst = worst.max((r.alpha4_ratio - 1.0 / (1.0 + y * y)).abs());
    }
    checks.push(("two_level_lorentzian", worst, 1e-10));

    let g: f64 = 1.0;
    let s = solve_closed_form_sampled(&SlabProblem::lossless_matched(g), 2)?;
    checks.push((
        "lossless_eta4",
        (s.eta4 * g.cos().powi(2) - 1.0).abs(),
        1e-10,
    ));

    let grid: Vec<f64> = (0..64).map(|k| 0.1 + 2.9 * k as f64 / 63.0).collect();
    let t = nimopa::scan::find_oscillation_threshold_in(&grid, |g| {
        Some(SlabProblem::lossless_matched(g))
    })?;
    checks.push((
        "oscillation_threshold",
        (t - std::f64::consts::FRAC_PI_2).abs(),
        1e-8,
    ));

    let rho = nimopa::qresponse::steady_state(&params, &cfg.drive())?;
    checks.push(("trace", (rho.trace().re - 1.0).abs(), 1e-12));
    checks.push(("hermiticity", rho.hermiticity_defect(), 1e-12));

    let mut table = Table::new(&["check", "value", "tolerance", "pass"]);
    let mut summary = Vec::new();
    let mut ok = true;
    for (name, v, tol) in checks {
        let pass = v <= tol;
        ok &= pass;
        table.push(vec![name.into(), num(v), num(tol), flag(pass)]);
        summary.push(format!(
            "{} {name}: {v:e} (tol {tol:e})",
            if pass { "PASS" } else { "FAIL" }
        ));
    }
    let mut a = Artifacts::default();
    a.add("selftest.csv", table.to_csv()?);
    Ok(Report {
        artifacts: a,
        summary,
        ok,
    })
}
