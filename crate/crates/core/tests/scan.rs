use nimopa::qresponse::{DriveConfig, FourLevelParams};
use nimopa::scan::{
    find_oscillation_threshold, find_peaks, sweep_response, sweep_slab, Axis, AxisRange,
    SlabSettings, SweepSpec,
};
use nimopa::slab::SlabProblem;
use nimopa::Error;

fn spec(axis: AxisRange<f64>) -> SweepSpec<f64> {
    let params = FourLevelParams::published_defaults();
    let drive = DriveConfig::published_defaults(&params).with_y4(&params, 2.5266);
    SweepSpec::new(axis, params, drive, SlabSettings::default())
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn sweeps_are_bit_identical_across_thread_counts() {
    let s = spec(AxisRange::new(Axis::Y4, 0.0, 3.0, 257));
    let a = in_pool(1, || sweep_response(&s).unwrap());
    let b = in_pool(4, || sweep_response(&s).unwrap());
    assert_eq!(a, b);
    let s = spec(AxisRange::new(Axis::Alpha40L, 0.5, 50.0, 64)).with_secondary(AxisRange::new(
        Axis::G3,
        1e10,
        1e11,
        5,
    ));
    let a = in_pool(1, || sweep_slab(&s).unwrap());
    let b = in_pool(3, || sweep_slab(&s).unwrap());
    assert_eq!(a, b);
}

#[test]
fn zero_count_stable_under_grid_density() {
    let counts: Vec<usize> = [512, 777, 1024, 2048]
        .iter()
        .map(|&n| {
            sweep_response(&spec(AxisRange::new(Axis::Y4, 1e-3, 3.0, n)))
                .unwrap()
                .zeros
                .len()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn results_stay_inside_range() {
    let r = sweep_response(&spec(AxisRange::new(Axis::Y4, 0.0, 3.0, 513))).unwrap();
    assert!(r.zeros.windows(2).all(|w| w[0] < w[1]));
    assert!(r
        .zeros
        .iter()
        .chain(r.peaks.iter().map(|p| &p.location))
        .all(|&z| (0.0..=3.0).contains(&z)));
}

#[test]
fn g4_resonance_stable_under_refinement() {
    let coarse = sweep_response(&spec(AxisRange::new(Axis::Y4, 1.0, 1.6, 400))).unwrap();
    let fine = sweep_response(&spec(AxisRange::new(Axis::Y4, 1.0, 1.6, 799))).unwrap();
    let h = 0.6 / 399.0;
    assert!(!coarse.peaks.is_empty());
    for p in &coarse.peaks {
        assert!(
            fine.peaks
                .iter()
                .any(|q| (q.location - p.location).abs() < 0.1 * h),
            "{p:?}"
        );
    }
}

#[test]
fn refinement_keeps_prominent_peaks() {
    let track = |n: usize| {
        let x: Vec<f64> = (0..n).map(|k| 10.0 * k as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 1.0 / (1e-2 + (v - 3.3f64).powi(2)) + 0.3 * v.sin())
            .collect();
        find_peaks(&x, &y)
    };
    let (a, b) = (track(301), track(601));
    for p in a.iter().filter(|p| p.height > 2.0) {
        assert!(b.iter().any(|q| (q.location - p.location).abs() < 0.05));
    }
}

#[test]
fn threshold_requires_one_dimension() {
    let s = spec(AxisRange::new(Axis::Alpha40L, 1.0, 2.0, 4)).with_secondary(AxisRange::new(
        Axis::Y4,
        0.0,
        1.0,
        3,
    ));
    assert!(matches!(
        find_oscillation_threshold(&s),
        Err(Error::InvalidParams(_))
    ));
}

#[test]
fn undriven_slab_has_no_threshold() {
    let mut s = spec(AxisRange::new(Axis::Alpha40L, 0.1, 50.0, 100));
    s.drive = DriveConfig::undriven();
    assert!(matches!(
        find_oscillation_threshold(&s),
        Err(Error::NotFound { .. })
    ));
}

#[test]
fn lossless_problem_family_threshold() {
    let grid: Vec<f64> = (0..100).map(|k| 0.05 + 3.0 * k as f64 / 99.0).collect();
    let t = nimopa::scan::find_oscillation_threshold_in(&grid, |g| {
        Some(SlabProblem::lossless_matched(g))
    })
    .unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
}
