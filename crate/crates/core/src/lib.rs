//! Storage of single-photon pulses in a single Λ-type atom coupled to a 1D
//! waveguide.
//!
//! The atom has two stable ground states |g⟩ and |s⟩ and one excited state
//! |e⟩. An incident single-photon pulse (Fock-state or coherent-state, same
//! mean energy) pumps the g↔e transition; spontaneous decay into the s-channel
//! realizes the storage. An optional classical control pulse on s↔e steers and
//! accelerates the transfer. Everything is expressed in the rotating frame
//! under two-photon resonance, with the total decay rate γ = γ_eg + γ_es as
//! the frequency unit.
//!
//! The crate provides:
//!
//! - the coherent-pump Lindblad master equation and the Fock-state hierarchy
//!   (ρ₁₁, ρ₀₁, ρ₀₀) right-hand sides ([`liouvillian`]),
//! - an adaptive embedded Runge–Kutta integrator over the scattering window
//!   ([`integrator`]),
//! - an independent single-excitation-amplitude oracle for the no-control
//!   Fock case ([`oracle`]),
//! - grid sweeps, multistart downhill-simplex optimization, and a registry of
//!   preconfigured parameter studies ([`sweep`], [`figures`]),
//! - figures of merit ([`observables`]), chiefly the storage efficiency P_s.

pub mod figures;
pub mod integrator;
pub mod liouvillian;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod pulses;
pub mod sweep;

pub use figures::{figure, CurveSet, FigureId, FigureOutput, LabeledCurve};
pub use integrator::{
    integrate, Diagnostics, FinalState, IntegrateError, IntegrationOptions, Trajectory,
};
pub use liouvillian::{
    coherent_rhs, fock_rhs, lindblad_rhs, rotating_hamiltonian, CMat3, HierarchyState,
    OperatorBasis,
};
pub use model::{
    effective_coupling, validate_config, AtomConfig, ConfigError, ControlPulse,
    EffectiveCoupling, RawConfig, SimulationConfig, Statistics, TargetPulse, Topology,
};
pub use observables::{population, storage_efficiency, Level, StorageResult};
pub use oracle::{adiabatic_limit, fssp_no_control_oracle, AmplitudeState, OracleError};
pub use sweep::{
    optimize, run_sweep, AxisScale, AxisSpec, EvalRecord, FreeParam, OptimizeResult, OptimizeSpec,
    SweepError, SweepOptions, SweepParam, SweepTable,
};
