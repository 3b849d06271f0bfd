//! Driven four-level centers: steady-state density matrix and the
//! laser-controlled optical constants seen by the signal and idler.

mod liouvillian;
mod params;
mod response;

pub use liouvillian::{
    coherent_part, hamiltonian, liouvillian, unvec, vec_index, vectorize, DIM, SUPER_DIM,
};
pub use params::{
    CoherenceWidths, DriveConfig, FourLevelParams, Level, LevelDecay, PartialRates, Probes,
    Wavelengths, SPEED_OF_LIGHT,
};
pub use response::{
    field_frequencies, ill_condition_threshold, phase_mismatch, probe_response, steady_state,
    ResponseSet,
};
