//! Figures of merit extracted from states and runs.

use crate::integrator::FinalState;
use crate::liouvillian::CMat3;

/// Atomic level, in the fixed basis order (|g⟩, |e⟩, |s⟩).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Level {
    G,
    E,
    S,
}

impl Level {
    fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::S => 2,
        }
    }
}

/// Population of one level, Re ⟨l|ρ|l⟩.
pub fn population(rho: &CMat3, level: Level) -> f64 {
    let i = level.index();
    rho[(i, i)].re
}

/// Storage efficiency P_s = Re ⟨s|ρ|s⟩.
pub fn storage_efficiency(rho: &CMat3) -> f64 {
    population(rho, Level::S)
}

/// Scalar summary of one simulation, as stored in sweep tables.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StorageResult {
    pub p_s: f64,
    pub p_g: f64,
    pub p_e_max: f64,
    pub converged: bool,
    pub trace_dev: f64,
    /// Wall-clock seconds spent in the integrator. Never written to output
    /// files (they must be byte-reproducible).
    pub runtime: f64,
}

impl StorageResult {
    pub fn from_final(state: &FinalState, runtime: f64) -> Self {
        StorageResult {
            p_s: storage_efficiency(&state.rho_final),
            p_g: population(&state.rho_final, Level::G),
            p_e_max: state.diagnostics.p_e_max,
            converged: state.diagnostics.converged,
            trace_dev: state.diagnostics.max_trace_dev,
            runtime,
        }
    }
}
