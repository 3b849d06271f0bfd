//! Loss compensation in negative-index slabs doped with four-level
//! nonlinear-optical centers.
//!
//! [`qresponse`] turns relaxation constants and two control lasers into the
//! driven absorption, dispersion and four-wave-mixing couplings of the
//! dopants; [`slab`] solves the counter-propagating signal/idler
//! boundary-value problem; [`scan`] sweeps both and locates resonances.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! below fix the double-precision instantiation used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod qresponse;
pub mod scalar;
pub mod scan;
pub mod slab;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub type C64 = Cplx<f64>;
pub type C32 = Cplx<f32>;

pub type FourLevelParamsF64 = qresponse::FourLevelParams<f64>;
pub type DriveConfigF64 = qresponse::DriveConfig<f64>;
pub type ResponseSetF64 = qresponse::ResponseSet<f64>;
pub type SlabProblemF64 = slab::SlabProblem<f64>;
pub type SlabSolutionF64 = slab::SlabSolution<f64>;
pub type SweepSpecF64 = scan::SweepSpec<f64>;
pub type SweepResultF64 = scan::SweepResult<f64>;

pub type FourLevelParamsF32 = qresponse::FourLevelParams<f32>;
pub type DriveConfigF32 = qresponse::DriveConfig<f32>;
pub type SlabProblemF32 = slab::SlabProblem<f32>;
