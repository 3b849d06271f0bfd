use crate::scalar::Real;

/// Relative bracket width at which bisection stops.
pub const ZERO_TOLERANCE: f64 = 1e-10;

/// Zeros of a continuous function, bracketed by sign changes of its samples
/// and refined by bisection on the function itself.
///
/// `track[k]` must hold `f(grid[k])`; non-finite samples break brackets.
/// `f` returns `None` where the function cannot be evaluated, which ends
/// the refinement of that bracket at its current midpoint. Samples that are
/// exactly zero are reported as zeros. The result is ascending.
pub fn find_zero_crossings<T: Real>(grid: &[T], track: &[T], f: impl Fn(T) -> Option<T>) -> Vec<T> {
    assert_eq!(
        grid.len(),
        track.len(),
        "find_zero_crossings: grid and track lengths differ"
    );
    let mut zeros = Vec::new();
    for k in 0..grid.len() {
        let yk = track[k];
        if yk == T::zero() {
            zeros.push(grid[k]);
            continue;
        }
        if k + 1 == grid.len() {
            break;
        }
        let yn = track[k + 1];
        if !(yk.is_finite() && yn.is_finite()) || yn == T::zero() {
            continue;
        }
        if (yk < T::zero()) != (yn < T::zero()) {
            zeros.push(bisect(grid[k], grid[k + 1], yk, &f));
        }
    }
    zeros
}

fn bisect<T: Real>(mut a: T, mut b: T, mut fa: T, f: &impl Fn(T) -> Option<T>) -> T {
    let tol = T::lit(ZERO_TOLERANCE);
    for _ in 0..200 {
        let mid = (a + b) * T::half();
        let scale = a.abs().max(b.abs()).max(T::min_positive_value());
        if (b - a).abs() <= tol * scale || mid == a || mid == b {
            return mid;
        }
        let Some(fm) = f(mid) else {
            return mid;
        };
        if fm == T::zero() {
            return mid;
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    (a + b) * T::half()
}
