use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A local maximum of a sampled track.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak<T> {
    pub location: T,
    pub height: T,
    /// Full width at half maximum, when both half-height crossings lie in the
    /// sampled range.
    pub width: Option<T>,
    /// Secondary-axis value of the row the peak was found on (2D sweeps).
    pub secondary: Option<T>,
}

/// Local maxima by the three-point test, refined by a parabola through the
/// neighbors. Non-finite samples never qualify as neighbors, except that a
/// `+∞` sample (oscillation sentinel) is itself reported as an infinite peak.
/// Peaks closer than one grid step are merged, keeping the higher.
pub fn find_peaks<T: Real>(x: &[T], y: &[T]) -> Vec<Peak<T>> {
    assert_eq!(
        x.len(),
        y.len(),
        "find_peaks: grid and track lengths differ"
    );
    let n = x.len();
    if n < 3 {
        return Vec::new();
    }
    let mut found: Vec<Peak<T>> = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let (yl, yc) = (y[i - 1], y[i]);
        if yc == T::infinity() {
            found.push(Peak {
                location: x[i],
                height: yc,
                width: Some(T::zero()),
                secondary: None,
            });
            i += 1;
            continue;
        }
        if !(yl.is_finite() && yc.is_finite() && yc > yl) {
            i += 1;
            continue;
        }
        // walk across a flat top
        let mut j = i;
        while j + 1 < n && y[j + 1] == yc {
            j += 1;
        }
        if j + 1 >= n {
            break;
        }
        let yr = y[j + 1];
        if !(yr.is_finite() && yr < yc) {
            i = j + 1;
            continue;
        }
        let (location, height) = if j == i {
            parabola_vertex((x[i - 1], yl), (x[i], yc), (x[i + 1], yr))
        } else {
            ((x[i] + x[j]) * T::half(), yc)
        };
        let width = half_width(x, y, i, j, height);
        found.push(Peak {
            location,
            height,
            width,
            secondary: None,
        });
        i = j + 1;
    }
    merge_close(found, min_step(x))
}

fn parabola_vertex<T: Real>((x0, y0): (T, T), (x1, y1): (T, T), (x2, y2): (T, T)) -> (T, T) {
    let d1 = (y1 - y0) / (x1 - x0);
    let d2 = (y2 - y1) / (x2 - x1);
    let curv = (d2 - d1) / (x2 - x0);
    if !(curv < T::zero()) {
        return (x1, y1);
    }
    // y = y1 + b (x − x1) + curv (x − x1)², slope b at x1 from the two secants
    let b = d1 + curv * (x1 - x0);
    let dx = -b / (T::two() * curv);
    let lo = x0.min(x2);
    let hi = x0.max(x2);
    let xv = (x1 + dx).max(lo).min(hi);
    let yv = y1 + b * (xv - x1) + curv * (xv - x1) * (xv - x1);
    (xv, yv.max(y1))
}

fn half_width<T: Real>(
    x: &[T],
    y: &[T],
    left_top: usize,
    right_top: usize,
    height: T,
) -> Option<T> {
    let half = height * T::half();
    let cross = |a: usize, b: usize| -> T {
        let t = (half - y[a]) / (y[b] - y[a]);
        x[a] + (x[b] - x[a]) * t
    };
    let mut k = left_top;
    let left = loop {
        if k == 0 || !y[k - 1].is_finite() {
            return None;
        }
        if y[k - 1] <= half {
            break cross(k - 1, k);
        }
        k -= 1;
    };
    let mut k = right_top;
    let right = loop {
        if k + 1 >= y.len() || !y[k + 1].is_finite() {
            return None;
        }
        if y[k + 1] <= half {
            break cross(k + 1, k);
        }
        k += 1;
    };
    Some(right - left)
}

fn min_step<T: Real>(x: &[T]) -> T {
    x.windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(T::infinity(), T::min)
}

fn merge_close<T: Real>(peaks: Vec<Peak<T>>, step: T) -> Vec<Peak<T>> {
    let mut out: Vec<Peak<T>> = Vec::with_capacity(peaks.len());
    for p in peaks {
        match out.last_mut() {
            Some(prev) if (p.location - prev.location).abs() < step => {
                if p.height > prev.height {
                    *prev = p;
                }
            }
            _ => out.push(p),
        }
    }
    out
}
