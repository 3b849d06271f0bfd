mod common;

use common::{c, random_slab};
use nimopa::qresponse::{probe_response, DriveConfig, FourLevelParams};
use nimopa::scan::relative_determinant;
use nimopa::slab::{
    assemble_slab_problem, photon_flux_profiles, solve_closed_form, solve_closed_form_sampled,
    solve_numeric_oracle, SlabProblem, DEFAULT_SAMPLES,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn conserved(p: &SlabProblem<f64>) -> Vec<f64> {
    let s = solve_closed_form(p).unwrap();
    s.a4.iter()
        .zip(&s.a2)
        .map(|(a4, a2)| a4.norm_sqr() / p.gamma4.re + a2.norm_sqr() / p.gamma2.re)
        .collect()
}

#[test]
fn default_profile_resolution() {
    let s = solve_closed_form(&SlabProblem::lossless_matched(0.7)).unwrap();
    assert_eq!(s.z.len(), DEFAULT_SAMPLES);
    assert_eq!(s.a4.last().copied(), Some(c(1.0, 0.0)));
}

#[test]
fn unequal_real_couplings_conserve_weighted_flux() {
    let p = SlabProblem {
        gamma4: c(0.9, 0.0),
        gamma2: c(0.4, 0.0),
        ..SlabProblem::lossless_matched(0.0)
    };
    let q = conserved(&p);
    let q0 = q[0];
    assert!(q.iter().all(|v| (v - q0).abs() < 1e-10 * q0));
}

#[test]
fn operating_point_has_internal_signal_above_exit() {
    let params = FourLevelParams::<f64>::published_defaults();
    let drive = DriveConfig::published_defaults(&params).with_y4(&params, 2.5266);
    let resp = probe_response(&params, &drive).unwrap();
    let p = assemble_slab_problem(&resp, 36.52, &params, 0.1, 1.0).unwrap();
    let s = solve_closed_form(&p).unwrap();
    let (sig, _) = photon_flux_profiles(&s);
    let peak = sig.iter().cloned().fold(0.0, f64::max);
    assert!(peak > s.eta4);
    assert_eq!(sig.last().copied(), Some(1.0));
}

#[test]
fn divergence_approach_is_monotone() {
    let mut last = 0.0;
    for k in 1..=200 {
        let g = std::f64::consts::FRAC_PI_2 * (k as f64 / 201.0);
        let eta = solve_closed_form_sampled(&SlabProblem::lossless_matched(g), 2)
            .unwrap()
            .eta4;
        assert!(eta > last);
        last = eta;
    }
    assert!(last > 1e4);
}

#[test]
fn oracle_suite_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 40 {
        let p = random_slab(&mut rng);
        if relative_determinant(&p) < 1e-3 {
            continue;
        }
        let a = solve_closed_form(&p).unwrap();
        let b = solve_numeric_oracle(&p).unwrap();
        assert!((a.eta4 - b.eta4).abs() < 1e-8 * a.eta4, "{p:?}");
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lossless_real_coupling_conservation(g4 in 0.05f64..1.2, g2 in 0.05f64..1.2) {
        prop_assume!((g4 * g2).sqrt() < 1.4);
        let p = SlabProblem { gamma4: c(g4, 0.0), gamma2: c(g2, 0.0), ..SlabProblem::lossless_matched(0.0) };
        let q = conserved(&p);
        let q0 = q[0];
        for v in &q {
            prop_assert!((v - q0).abs() < 1e-10 * q0.max(1.0));
        }
    }

    #[test]
    fn beer_law_strictly_monotone(a in 0.0f64..40.0, da in 1e-3f64..5.0) {
        let p = |x: f64| SlabProblem { alpha4: x, ..SlabProblem::lossless_matched(0.0) };
        let e0 = solve_closed_form_sampled(&p(a), 2).unwrap().eta4;
        let e1 = solve_closed_form_sampled(&p(a + da), 2).unwrap().eta4;
        prop_assert!(e1 < e0);
        prop_assert!((e0 - (-a).exp()).abs() <= 1e-12 * (-a).exp());
    }

    #[test]
    fn input_scaling_leaves_transmittance(seed in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.hypot(im) > 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_slab(&mut rng);
        prop_assume!(relative_determinant(&p) > 1e-6);
        let a = solve_closed_form(&p).unwrap();
        let b = solve_closed_form(&SlabProblem { a4l: p.a4l * c(re, im), ..p }).unwrap();
        prop_assert!((a.eta4 - b.eta4).abs() <= 1e-12 * a.eta4);
        for (u, v) in a.eta2_profile.iter().zip(&b.eta2_profile) {
            prop_assert!((u - v).abs() <= 1e-10 * u.max(1e-12));
        }
    }
}
