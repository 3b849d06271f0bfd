//! Self-oscillation thresholds: parameter values where the split-boundary
//! determinant `Φ11(L)` of the slab vanishes.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::slab::{fundamental_matrix, SlabProblem, OSCILLATION_THRESHOLD};

/// `|Φ11(L)| / max(1, max |Φ_ij(L)|)`, the quantity the oscillation flag tests.
pub fn relative_determinant<T: Real>(p: &SlabProblem<T>) -> T {
    let phi = fundamental_matrix(p, p.length);
    let scale = phi
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(T::one(), T::max);
    phi[0][0].norm() / scale
}

/// All roots of the boundary determinant along a 1D family of problems, in
/// ascending order.
///
/// Every local minimum of the sampled relative determinant (and every
/// already-flagged sample) is refined by golden-section search on the
/// bracketing grid cells; minima whose refined value falls below the
/// oscillation threshold are roots. Near a simple root the determinant
/// modulus is V-shaped, so the search pins its location to roundoff.
pub fn oscillation_roots<T: Real>(
    grid: &[T],
    problem: impl Fn(T) -> Option<SlabProblem<T>>,
) -> Vec<T> {
    let det = |x: T| problem(x).map(|p| relative_determinant(&p));
    let samples: Vec<Option<T>> = grid.iter().map(|&x| det(x)).collect();
    let n = grid.len();
    let thr = T::lit(OSCILLATION_THRESHOLD);
    let mut roots: Vec<T> = Vec::new();
    for k in 0..n {
        let Some(dk) = samples[k] else { continue };
        let left = if k > 0 { samples[k - 1] } else { None };
        let right = if k + 1 < n { samples[k + 1] } else { None };
        let is_min = left.is_none_or(|v| dk <= v) && right.is_none_or(|v| dk < v);
        if !(is_min || dk < thr) {
            continue;
        }
        let lo = if k > 0 && left.is_some() {
            grid[k - 1]
        } else {
            grid[k]
        };
        let hi = if k + 1 < n && right.is_some() {
            grid[k + 1]
        } else {
            grid[k]
        };
        let (x, v) = golden_min(lo, hi, &det);
        if v < thr
            && roots
                .last()
                .is_none_or(|&r| (x - r).abs() > (hi - lo) * T::lit(1e-6))
        {
            roots.push(x);
        }
    }
    roots
}

/// Smallest grid-family parameter at which the slab self-oscillates.
pub fn find_oscillation_threshold_in<T: Real>(
    grid: &[T],
    problem: impl Fn(T) -> Option<SlabProblem<T>>,
) -> Result<T> {
    oscillation_roots(grid, problem)
        .first()
        .copied()
        .ok_or_else(|| Error::NotFound {
            lo: grid.first().and_then(|v| v.to_f64()).unwrap_or(f64::NAN),
            hi: grid.last().and_then(|v| v.to_f64()).unwrap_or(f64::NAN),
        })
}

fn golden_min<T: Real>(mut a: T, mut b: T, f: &impl Fn(T) -> Option<T>) -> (T, T) {
    let eval = |x: T| f(x).unwrap_or(T::infinity());
    if a == b {
        return (a, eval(a));
    }
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = eval(c);
    let mut fd = eval(d);
    let tol = T::epsilon() * T::lit(4.0);
    for _ in 0..300 {
        let scale = a.abs().max(b.abs()).max(T::one());
        if (b - a) <= tol * scale {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = eval(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use std::f64::consts::FRAC_PI_2;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn lossless_threshold_at_quarter_wave() {
        let t = find_oscillation_threshold_in(&grid(0.1, 3.0, 64), |g| {
            Some(SlabProblem::lossless_matched(g))
        })
        .unwrap();
        assert!((t - FRAC_PI_2).abs() < 1e-8, "{t}");
    }

    #[test]
    fn higher_order_roots_follow() {
        let r = oscillation_roots(&grid(0.1, 8.0, 200), |g| {
            Some(SlabProblem::lossless_matched(g))
        });
        assert_eq!(r.len(), 3);
        for (k, v) in r.iter().enumerate() {
            assert!((v - FRAC_PI_2 * (2 * k + 1) as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn uncoupled_slab_never_oscillates() {
        let res = find_oscillation_threshold_in(&grid(0.0, 10.0, 50), |a| {
            Some(SlabProblem {
                alpha4: a,
                alpha2: 0.0,
                gamma4: cr(0.0),
                gamma2: cr(0.0),
                dk: 0.0,
                length: 1.0,
                a4l: cr(1.0),
            })
        });
        assert!(matches!(res, Err(Error::NotFound { .. })));
    }

    #[test]
    fn independent_of_input_amplitude() {
        let base = find_oscillation_threshold_in(&grid(0.1, 3.0, 40), |g| {
            Some(SlabProblem::lossless_matched(g))
        })
        .unwrap();
        let scaled = find_oscillation_threshold_in(&grid(0.1, 3.0, 40), |g| {
            let mut p = SlabProblem::lossless_matched(g);
            p.a4l = crate::scalar::c(-3.0, 7.5);
            Some(p)
        })
        .unwrap();
        assert_eq!(base, scaled);
    }
}
