//! Small dense complex linear algebra: row-major square matrices, LU with
//! partial pivoting, and a 1-norm condition number.
//!
//! Every system in this crate is at most 16×16, so the inverse needed for the
//! condition number is formed explicitly; the estimate is then exact.

use std::ops::{Index, IndexMut};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{Cplx, Real};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix<T: Real> {
    dim: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Cplx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Cplx::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Cplx<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.dim, "mul_vec: dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Cplx::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] * s)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).fold(Cplx::zero(), |acc, i| acc + self[(i, i)])
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn lu(&self) -> Result<Lu<T>, SingularMatrix> {
        Lu::factor(self.clone())
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cplx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Raised when elimination meets an exactly vanishing (or relatively
/// negligible) pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularMatrix {
    pub column: usize,
}

/// `PA = LU` with unit-diagonal `L` packed below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    norm_one: T,
}

impl<T: Real> Lu<T> {
    fn factor(mut a: CMatrix<T>) -> Result<Self, SingularMatrix> {
        let n = a.dim;
        let norm_one = a.norm_one();
        // Pivots below this are treated as structural zeros of a rank-deficient
        // matrix rather than as merely small numbers.
        let tiny = norm_one * T::epsilon() * T::lit(n as f64);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[(i, k)].norm()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if !(pmax > tiny) {
                return Err(SingularMatrix { column: k });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in (k + 1)..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let akj = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - factor * akj;
                }
            }
        }
        Ok(Self {
            lu: a,
            perm,
            norm_one,
        })
    }

    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.lu.dim;
        assert_eq!(b.len(), n, "solve: dimension mismatch");
        let mut x: Vec<Cplx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix<T> {
        let n = self.lu.dim;
        let mut inv = CMatrix::zeros(n);
        let mut e = vec![Cplx::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = Cplx::zero());
            e[j] = Cplx::new(T::one(), T::zero());
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv
    }

    /// `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_one(&self) -> T {
        self.norm_one * self.inverse().norm_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn solves_small_complex_system() {
        let a = CMatrix::from_fn(3, |i, j| {
            c(
                1.0 + (i * 3 + j) as f64 * 0.7 - if i == j { 4.0 } else { 0.0 },
                (i as f64) - (j as f64),
            )
        });
        let x_true = vec![c(1.0, -2.0), c(0.5, 0.25), c(-3.0, 1.0)];
        let b = a.mul_vec(&x_true);
        let x = a.lu().unwrap().solve(&b);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = CMatrix::from_fn(4, |i, j| {
            c(
                ((i + 2 * j) % 5) as f64 + if i == j { 3.0 } else { 0.0 },
                0.1 * j as f64,
            )
        });
        let inv = a.lu().unwrap().inverse();
        let prod = a.matmul(&inv).sub(&CMatrix::identity(4));
        assert!(prod.norm_max() < 1e-13);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let a = CMatrix::from_fn(3, |i, j| c((i + 1) as f64 * (j + 1) as f64, 0.0));
        assert!(a.lu().is_err());
    }

    #[test]
    fn condition_of_diagonal() {
        let mut a = CMatrix::<f64>::identity(3);
        a[(2, 2)] = c(1e-6, 0.0);
        let k = a.lu().unwrap().condition_one();
        assert!((k - 1e6).abs() < 1e-6);
    }
}
