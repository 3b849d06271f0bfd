//! Shooting oracle: integrates the raw amplitude equations forward from
//! `z = 0`, where the idler is known to vanish.
//!
//! The system is linear over the reals only (it couples `a4` to `a2*`), so
//! two runs with `a4(0) = 1` and `a4(0) = i` span all solutions obeying
//! `a2(0) = 0`; a real 2×2 solve then matches `a4(L) = a4L`.

use super::ode::{integrate, State, Tolerance};
use super::{uniform_grid, SlabProblem, SlabSolution, DEFAULT_SAMPLES, OSCILLATION_THRESHOLD};
use crate::error::{Error, Result};
use crate::scalar::{cr, imag_unit, Cplx, Real};

pub fn solve_numeric_oracle<T: Real>(p: &SlabProblem<T>) -> Result<SlabSolution<T>> {
    solve_numeric_oracle_sampled(p, DEFAULT_SAMPLES)
}

pub fn solve_numeric_oracle_sampled<T: Real>(
    p: &SlabProblem<T>,
    samples: usize,
) -> Result<SlabSolution<T>> {
    p.validate()?;
    let i = imag_unit::<T>();
    let half = T::half();
    let rhs = |z: T, y: &State<T, 2>| -> State<T, 2> {
        let phase = (i * p.dk * z).exp();
        [
            -i * p.gamma4 * y[1].conj() * phase + y[0] * (p.alpha4 * half),
            i * p.gamma2 * y[0].conj() * phase - y[1] * (p.alpha2 * half),
        ]
    };
    let tol = Tolerance {
        rtol: T::epsilon() * T::lit(1e4),
        atol: T::min_positive_value().sqrt(),
        max_steps: 2_000_000,
    };
    let z = uniform_grid(p.length, samples);
    let run = |a4_0: Cplx<T>| {
        integrate(rhs, T::zero(), [a4_0, cr(T::zero())], &z[1..], tol).map_err(|e| {
            Error::NonConvergent {
                z: e.z.to_f64().unwrap_or(f64::NAN),
                reason: e.reason.to_string(),
            }
        })
    };
    let mut s1 = vec![[cr(T::one()), cr(T::zero())]];
    s1.extend(run(cr(T::one()))?);
    let mut s2 = vec![[i, cr(T::zero())]];
    s2.extend(run(i)?);

    // x·s1(L) + y·s2(L) = a4L over the reals
    let end1 = s1.last().expect("grid has ≥ 2 points");
    let end2 = s2.last().expect("grid has ≥ 2 points");
    let (u, v) = (end1[0], end2[0]);
    let det = u.re * v.im - v.re * u.im;
    // comparable with the closed form's |Φ11| / max|Φ_ij|
    let scale = end1
        .iter()
        .chain(end2)
        .map(|w| w.norm())
        .fold(T::one(), T::max);
    let rel = det.abs().sqrt() / scale;
    if !(rel >= T::lit(OSCILLATION_THRESHOLD)) {
        return Ok(SlabSolution::oscillating(rel));
    }
    let x = (p.a4l.re * v.im - v.re * p.a4l.im) / det;
    let y = (u.re * p.a4l.im - p.a4l.re * u.im) / det;

    let a4: Vec<Cplx<T>> = s1
        .iter()
        .zip(&s2)
        .map(|(a, b)| a[0] * x + b[0] * y)
        .collect();
    let a2: Vec<Cplx<T>> = s1
        .iter()
        .zip(&s2)
        .map(|(a, b)| a[1] * x + b[1] * y)
        .collect();
    let eta4 = (x * x + y * y) / p.a4l.norm_sqr();
    Ok(SlabSolution::from_profile(z, a4, a2, p.a4l, eta4, rel))
}
