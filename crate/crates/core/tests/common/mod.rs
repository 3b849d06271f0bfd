//! Shared oracles for the integration and acceptance suites.
#![allow(dead_code)]

use nalgebra::Matrix4;
use nimopa::linalg::CMatrix;
use nimopa::qresponse::{
    liouvillian, unvec, vec_index, DriveConfig, FourLevelParams, Level, Probes, SUPER_DIM,
};
use nimopa::slab::SlabProblem;
use nimopa::C64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A random parameter set satisfying every validation rule.
pub fn random_params(rng: &mut impl Rng) -> FourLevelParams<f64> {
    let mut p = FourLevelParams::<f64>::published_defaults();
    let log_uniform =
        |rng: &mut dyn rand::RngCore, lo: f64, hi: f64| (rng.gen_range(lo.ln()..hi.ln())).exp();
    p.level_decay.n = log_uniform(rng, 1e6, 1e9);
    p.level_decay.g = log_uniform(rng, 1e7, 1e9);
    p.level_decay.m = log_uniform(rng, 1e7, 1e9);
    let fg: [f64; 2] = [rng.gen_range(0.01..0.5), rng.gen_range(0.01..0.5)];
    let fm: [f64; 2] = [rng.gen_range(0.01..0.5), rng.gen_range(0.01..0.5)];
    p.partial_rates.gl = fg[0] * p.level_decay.g;
    p.partial_rates.gn = fg[1] * p.level_decay.g;
    p.partial_rates.ml = fm[0] * p.level_decay.m;
    p.partial_rates.mn = fm[1] * p.level_decay.m;
    let floor = |a: f64, b: f64| 0.5 * (a + b);
    let (n, g, m) = (p.level_decay.n, p.level_decay.g, p.level_decay.m);
    p.coherence.lg = floor(0.0, g) + log_uniform(rng, 1e11, 3e12);
    p.coherence.lm = floor(0.0, m) + log_uniform(rng, 1e11, 3e12);
    p.coherence.ng = floor(n, g) + log_uniform(rng, 1e11, 3e12);
    p.coherence.nm = floor(n, m) + log_uniform(rng, 1e11, 3e12);
    p.coherence.gm = floor(g, m) + log_uniform(rng, 1e9, 1e11);
    p.coherence.ln = floor(0.0, n) + log_uniform(rng, 1e9, 1e11);
    p.validate()
        .expect("generator must produce valid parameters");
    p
}

pub fn random_drive(rng: &mut impl Rng, params: &FourLevelParams<f64>) -> DriveConfig<f64> {
    let lg = params.coherence.lg;
    let rabi = |rng: &mut dyn rand::RngCore| {
        let mag = rng.gen_range(1e10..2e11);
        let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        C64::from_polar(mag, ph)
    };
    DriveConfig {
        g1: rabi(rng),
        g3: rabi(rng),
        omega1: rng.gen_range(-4.0..4.0) * lg,
        omega3: rng.gen_range(-4.0..4.0) * lg,
        omega4: rng.gen_range(-4.0..4.0) * params.coherence.lm,
    }
}

/// Full steady state with finite probe amplitudes, solved directly.
pub fn finite_probe_state(
    params: &FourLevelParams<f64>,
    drive: &DriveConfig<f64>,
    probes: &Probes<f64>,
) -> CMatrix<f64> {
    let mut a = liouvillian(params, drive, probes).scale(1.0 / params.coherence.lm);
    for col in 0..SUPER_DIM {
        a[(0, col)] = c(0.0, 0.0);
    }
    for l in Level::ALL {
        a[(0, vec_index(l, l))] = c(1.0, 0.0);
    }
    let mut rhs = vec![c(0.0, 0.0); SUPER_DIM];
    rhs[0] = c(1.0, 0.0);
    unvec(&a.lu().expect("finite-probe system is regular").solve(&rhs))
}

pub fn min_eigenvalue(rho: &CMatrix<f64>) -> f64 {
    let m = Matrix4::from_fn(|i, j| rho[(i, j)]);
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Random slab problem; most draws sit far from any oscillation threshold.
pub fn random_slab(rng: &mut impl Rng) -> SlabProblem<f64> {
    SlabProblem {
        alpha4: rng.gen_range(0.0..8.0),
        alpha2: rng.gen_range(-3.0..3.0),
        gamma4: c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
        gamma2: c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
        dk: rng.gen_range(-6.0..6.0),
        length: 1.0,
        a4l: c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
    }
}
