//! Adaptive Dormand–Prince 5(4) integrator for small complex systems.

use crate::scalar::{Cplx, Real};

pub(crate) type State<T, const N: usize> = [Cplx<T>; N];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct StepFailure<T> {
    pub z: T,
    pub reason: &'static str,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// fifth-order weights (also the last stage row, FSAL)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// fifth minus fourth order
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<T: Real, const N: usize>(y: &State<T, N>, terms: &[(T, &State<T, N>)]) -> State<T, N> {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..N {
            out[i] = out[i] + k[i] * *w;
        }
    }
    out
}

/// Integrates `y' = f(z, y)` from `z0` through every point of `stops`
/// (ascending, all `≥ z0`), returning the state at each stop.
pub(crate) fn integrate<T, F, const N: usize>(
    f: F,
    z0: T,
    y0: State<T, N>,
    stops: &[T],
    tol: Tolerance<T>,
) -> Result<Vec<State<T, N>>, StepFailure<T>>
where
    T: Real,
    F: Fn(T, &State<T, N>) -> State<T, N>,
{
    let l = T::lit;
    let mut out = Vec::with_capacity(stops.len());
    let mut z = z0;
    let mut y = y0;
    let span = stops.last().map_or(T::zero(), |&e| e - z0);
    let mut h = span * l(1e-3);
    let mut k1 = f(z, &y);
    let mut steps = 0usize;

    for &stop in stops {
        while z < stop {
            if steps >= tol.max_steps {
                return Err(StepFailure {
                    z,
                    reason: "step budget exhausted",
                });
            }
            let last = z + h >= stop;
            let hs = if last { stop - z } else { h };
            let zh = |c: f64| z + hs * l(c);

            let k2 = f(zh(C2), &axpy(&y, &[(hs * l(A21), &k1)]));
            let k3 = f(zh(C3), &axpy(&y, &[(hs * l(A31), &k1), (hs * l(A32), &k2)]));
            let k4 = f(
                zh(C4),
                &axpy(
                    &y,
                    &[(hs * l(A41), &k1), (hs * l(A42), &k2), (hs * l(A43), &k3)],
                ),
            );
            let k5 = f(
                zh(C5),
                &axpy(
                    &y,
                    &[
                        (hs * l(A51), &k1),
                        (hs * l(A52), &k2),
                        (hs * l(A53), &k3),
                        (hs * l(A54), &k4),
                    ],
                ),
            );
            let k6 = f(
                z + hs,
                &axpy(
                    &y,
                    &[
                        (hs * l(A61), &k1),
                        (hs * l(A62), &k2),
                        (hs * l(A63), &k3),
                        (hs * l(A64), &k4),
                        (hs * l(A65), &k5),
                    ],
                ),
            );
            let y_new = axpy(
                &y,
                &[
                    (hs * l(B1), &k1),
                    (hs * l(B3), &k3),
                    (hs * l(B4), &k4),
                    (hs * l(B5), &k5),
                    (hs * l(B6), &k6),
                ],
            );
            let z_new = if last { stop } else { z + hs };
            let k7 = f(z_new, &y_new);

            let mut err = T::zero();
            for i in 0..N {
                let e = (k1[i] * l(E1)
                    + k3[i] * l(E3)
                    + k4[i] * l(E4)
                    + k5[i] * l(E5)
                    + k6[i] * l(E6)
                    + k7[i] * l(E7))
                    * hs;
                let sc = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / sc);
            }
            steps += 1;
            if !err.is_finite() {
                return Err(StepFailure {
                    z,
                    reason: "non-finite error estimate",
                });
            }
            let factor = if err == T::zero() {
                l(5.0)
            } else {
                (l(0.9) * err.powf(l(-0.2))).min(l(5.0)).max(l(0.2))
            };
            if err <= T::one() {
                z = z_new;
                y = y_new;
                k1 = k7;
                if !last {
                    h = hs * factor;
                }
            } else {
                h = hs * factor;
            }
            if h < span * T::epsilon() {
                return Err(StepFailure {
                    z,
                    reason: "step size underflow",
                });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cr};

    #[test]
    fn harmonic_oscillator_to_high_accuracy() {
        // y0' = y1, y1' = −y0
        let f = |_z: f64, y: &State<f64, 2>| [y[1], -y[0]];
        let tol = Tolerance {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 100_000,
        };
        let out = integrate(f, 0.0, [cr(1.0), cr(0.0)], &[1.0, 2.0, 10.0], tol).unwrap();
        for (z, y) in [1.0f64, 2.0, 10.0].iter().zip(&out) {
            assert!((y[0].re - z.cos()).abs() < 1e-10);
            assert!((y[1].re + z.sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn complex_exponential_growth() {
        let lam = c(3.0, -2.0);
        let f = move |_z: f64, y: &State<f64, 1>| [lam * y[0]];
        let tol = Tolerance {
            rtol: 1e-12,
            atol: 1e-300,
            max_steps: 100_000,
        };
        let out = integrate(f, 0.0, [cr(1.0)], &[1.5], tol).unwrap();
        let want = (lam * 1.5).exp();
        assert!((out[0][0] - want).norm() / want.norm() < 1e-10);
    }

    #[test]
    fn budget_is_enforced() {
        let f = |_z: f64, y: &State<f64, 1>| [y[0] * 50.0];
        let tol = Tolerance {
            rtol: 1e-14,
            atol: 1e-300,
            max_steps: 5,
        };
        assert!(integrate(f, 0.0, [cr(1.0)], &[1.0], tol).is_err());
    }
}
