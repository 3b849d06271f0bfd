//! Rotating-frame Hamiltonian and Liouville superoperator of the four-level
//! center.
//!
//! Basis order is `(l, n, g, m)`. The frame attaches phases
//! `(0, ω1 − ω2, ω1, ω4)` to the levels, so with the loop `ω4 = ω1 + ω3 − ω2`
//! closed every coupling is static. Density matrices are vectorized row-major:
//! `vec(ρ)[4i + j] = ρ_ij`.

use num_traits::Zero;

use super::params::{DriveConfig, FourLevelParams, Level, Probes};
use crate::linalg::CMatrix;
use crate::scalar::{cr, imag_unit, Cplx, Real};

pub const DIM: usize = 4;
pub const SUPER_DIM: usize = DIM * DIM;

#[inline]
pub const fn vec_index(row: Level, col: Level) -> usize {
    row.index() * DIM + col.index()
}

/// RWA Hamiltonian (ħ = 1, units s⁻¹).
///
/// Diagonal `(0, −(Ω1 − Ω2), −Ω1, −Ω4)`; the coupling on each driven
/// transition is `−G` in the (upper, lower) entry and its conjugate opposite.
pub fn hamiltonian<T: Real>(drive: &DriveConfig<T>, probes: &Probes<T>) -> CMatrix<T> {
    use Level::*;
    let mut h = CMatrix::zeros(DIM);
    h[(N.index(), N.index())] = cr(-(drive.omega1 - drive.omega2()));
    h[(G.index(), G.index())] = cr(-drive.omega1);
    h[(M.index(), M.index())] = cr(-drive.omega4);
    for (upper, lower, rabi) in [
        (G, L, drive.g1),
        (G, N, probes.g2),
        (M, N, drive.g3),
        (M, L, probes.g4),
    ] {
        h[(upper.index(), lower.index())] = -rabi;
        h[(lower.index(), upper.index())] = -rabi.conj();
    }
    h
}

/// Superoperator `𝓛` with `dρ/dt = 𝓛 vec(ρ)`.
///
/// Population relaxation uses the listed partial rates `g→n` and `m→n`; every
/// other loss channel of `g`, `m` and all of `Γ_n` returns to `l`. Each
/// coherence decays at exactly its listed half-width.
pub fn liouvillian<T: Real>(
    params: &FourLevelParams<T>,
    drive: &DriveConfig<T>,
    probes: &Probes<T>,
) -> CMatrix<T> {
    let h = hamiltonian(drive, probes);
    let mut sup = coherent_part(&h);
    add_relaxation(&mut sup, params);
    sup
}

/// `−i[H, ·]` as a superoperator.
pub fn coherent_part<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let mi = -imag_unit::<T>();
    let mut sup = CMatrix::zeros(SUPER_DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            let row = i * DIM + j;
            for k in 0..DIM {
                // H ρ
                let hik = h[(i, k)];
                if !hik.is_zero() {
                    sup[(row, k * DIM + j)] = sup[(row, k * DIM + j)] + mi * hik;
                }
                // −ρ H
                let hkj = h[(k, j)];
                if !hkj.is_zero() {
                    sup[(row, i * DIM + k)] = sup[(row, i * DIM + k)] - mi * hkj;
                }
            }
        }
    }
    sup
}

fn add_relaxation<T: Real>(sup: &mut CMatrix<T>, params: &FourLevelParams<T>) {
    use Level::*;
    let d = &params.level_decay;
    let p = &params.partial_rates;
    let transfers: [(Level, Level, T); 5] = [
        (N, L, d.n),
        (G, N, p.gn),
        (G, L, d.g - p.gn),
        (M, N, p.mn),
        (M, L, d.m - p.mn),
    ];
    for (from, to, rate) in transfers {
        let src = vec_index(from, from);
        let dst = vec_index(to, to);
        sup[(dst, src)] = sup[(dst, src)] + cr(rate);
        sup[(src, src)] = sup[(src, src)] - cr(rate);
    }
    for a in Level::ALL {
        for b in Level::ALL {
            if a != b {
                let k = vec_index(a, b);
                sup[(k, k)] = sup[(k, k)] - cr(params.coherence.between(a, b));
            }
        }
    }
}

/// Reshapes a vectorized density matrix.
pub fn unvec<T: Real>(v: &[Cplx<T>]) -> CMatrix<T> {
    CMatrix::from_fn(DIM, |i, j| v[i * DIM + j])
}

pub fn vectorize<T: Real>(rho: &CMatrix<T>) -> Vec<Cplx<T>> {
    (0..DIM)
        .flat_map(|i| (0..DIM).map(move |j| (i, j)))
        .map(|(i, j)| rho[(i, j)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn defaults() -> (FourLevelParams<f64>, DriveConfig<f64>) {
        let p = FourLevelParams::published_defaults();
        let d = DriveConfig::published_defaults(&p);
        (p, d)
    }

    #[test]
    fn undriven_hamiltonian_vanishes() {
        let h = hamiltonian(&DriveConfig::<f64>::undriven(), &Probes::off());
        assert_eq!(h.norm_max(), 0.0);
    }

    #[test]
    fn signal_diagonal_entry() {
        let (p, d) = defaults();
        let d = d.with_y4(&p, 2.5266);
        let h = hamiltonian(&d, &Probes::off());
        let m = Level::M.index();
        assert!((h[(m, m)].re + 2.5266 * 1.9e12).abs() < 1e-3);
        assert_eq!(h[(m, m)].im, 0.0);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let (p, d) = defaults();
        let d = d.with_y4(&p, 0.7);
        let probes = Probes {
            g4: c(3.0e9, -1.2e9),
            g2: c(-0.4e9, 2.2e9),
        };
        let h = hamiltonian(&d, &probes);
        assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn couplings_sit_on_driven_transitions() {
        let (_, d) = defaults();
        let h = hamiltonian(
            &d,
            &Probes {
                g4: c(2.0, 0.0),
                g2: c(0.0, 3.0),
            },
        );
        let (l, n, g, m) = (0, 1, 2, 3);
        assert_eq!(h[(g, l)], -d.g1);
        assert_eq!(h[(m, n)], -d.g3);
        assert_eq!(h[(m, l)], c(-2.0, 0.0));
        assert_eq!(h[(g, n)], c(0.0, -3.0));
        assert_eq!(h[(n, g)], c(0.0, 3.0));
        assert_eq!(h[(l, n)], c(0.0, 0.0));
        assert_eq!(h[(g, m)], c(0.0, 0.0));
    }

    #[test]
    fn trace_preserving() {
        let (p, d) = defaults();
        let sup = liouvillian(
            &p,
            &d.with_y4(&p, 1.3),
            &Probes {
                g4: c(1e9, 2e8),
                g2: c(-3e8, 1e9),
            },
        );
        let pops: Vec<usize> = Level::ALL.iter().map(|&a| vec_index(a, a)).collect();
        for col in 0..SUPER_DIM {
            let s: Cplx<f64> = pops.iter().map(|&r| sup[(r, col)]).sum();
            assert!(s.norm() < 1e-3, "column {col} sum {s}");
        }
    }

    #[test]
    fn undriven_relaxation_flows_downward() {
        let p = FourLevelParams::<f64>::published_defaults();
        let sup = liouvillian(&p, &DriveConfig::undriven(), &Probes::off());
        for to in Level::ALL {
            for from in Level::ALL {
                let v = sup[(vec_index(to, to), vec_index(from, from))];
                if to.index() > from.index() {
                    assert_eq!(v, c(0.0, 0.0), "{from:?} -> {to:?} must not be fed");
                }
            }
        }
        // ground never decays
        assert_eq!(sup[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn raman_coherence_rate() {
        let p = FourLevelParams::<f64>::published_defaults();
        let sup = liouvillian(&p, &DriveConfig::undriven(), &Probes::off());
        let k = vec_index(Level::L, Level::N);
        assert_eq!(sup[(k, k)], c(-1e10, 0.0));
        let k = vec_index(Level::N, Level::L);
        assert_eq!(sup[(k, k)], c(-1e10, 0.0));
    }

    #[test]
    fn vectorization_round_trip() {
        let rho = CMatrix::from_fn(4, |i, j| c(i as f64, j as f64));
        assert_eq!(unvec(&vectorize(&rho)), rho);
    }
}
