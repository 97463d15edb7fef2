//! Independent semi-analytic checks for the no-control Fock-state case.
//!
//! With Ω = 0 the single photon occupies the single-excitation sector, so the
//! whole problem reduces to one complex amplitude: the excited-state
//! amplitude e(t) obeys ė = −(iΔ + γ_eff/2)e − iκξ̃(t), and the stored
//! probability accumulates incoherently as P_s = γ_es_eff·∫|e|²dt. This path
//! shares the adaptive stepper settings with the main integrator but lives in
//! a structurally different (3-real-dimensional) state space, which makes it
//! a genuine cross-check of the hierarchy.
//!
//! The oracle deliberately excludes the control field: once population sits
//! in |s⟩ a control pulse re-excites it and the pure-amplitude picture stops
//! being exact.

use nalgebra::SVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::integrator::{
    integrate_adaptive, DriveEnd, DriverError, IntegrateError, IntegrationOptions, StepControl,
};
use crate::model::{SimulationConfig, Statistics};
use crate::pulses::target_envelope;

/// State of the single-excitation reduction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    /// Excited-state amplitude e(t).
    pub e_amp: Complex64,
    /// Accumulated γ_es_eff·∫|e|²dt (monotone non-decreasing).
    pub stored_incoherent: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("the single-excitation oracle requires omega = 0")]
    ControlNotSupported,
    #[error("the single-excitation oracle requires Fock statistics")]
    CoherentNotSupported,
    #[error("step size underflow at t={t}")]
    StepUnderflow { t: f64 },
    #[error("oracle integration hit the hard time cap with |e|^2 above threshold")]
    NonConvergent,
}

fn require_domain(config: &SimulationConfig) -> Result<(), OracleError> {
    if config.control.omega != 0.0 {
        return Err(OracleError::ControlNotSupported);
    }
    if config.target.statistics != Statistics::Fock {
        return Err(OracleError::CoherentNotSupported);
    }
    Ok(())
}

/// Storage efficiency of the no-control Fock-state pulse from the
/// single-excitation amplitude equation.
pub fn fssp_no_control_oracle(
    config: &SimulationConfig,
    opts: &IntegrationOptions,
) -> Result<f64, OracleError> {
    let (state, _) = amplitude_evolution(config, opts)?;
    Ok(state.stored_incoherent)
}

/// Closed form of the τ_p ≫ 1/γ limit: the amplitude follows the drive,
/// e(t) ≈ −i(2/γ_eff)κξ̃(t), giving P_s = 4·γ_es_eff·κ²/γ_eff². This reduces
/// to 2γ_egγ_es/γ² for a regular waveguide and 4γ_egγ_es/γ² for the chiral
/// and Sagnac configurations.
pub fn adiabatic_limit(config: &SimulationConfig) -> Result<f64, OracleError> {
    require_domain(config)?;
    let eff = &config.coupling;
    let gamma_eff = eff.gamma_eff();
    Ok(4.0 * eff.gamma_es_eff * eff.kappa * eff.kappa / (gamma_eff * gamma_eff))
}

/// Integrate the amplitude equation; returns the final state and end time.
pub(crate) fn amplitude_evolution(
    config: &SimulationConfig,
    opts: &IntegrationOptions,
) -> Result<(AmplitudeState, f64), OracleError> {
    require_domain(config)?;

    let ctrl = StepControl {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_step: opts.resolved_max_step(config),
    };
    let t_start = opts.t_start(config);
    let t_cap = opts.t_cap(config);
    // Same envelope floor as the main path; no control by the domain check.
    let sources_done =
        config.target.t0 + 2.0 * config.target.tau_p * (-(1e-6f64).ln()).sqrt();
    let tail = opts.tail_excited_threshold;

    let kappa = config.coupling.kappa;
    let ges = config.coupling.gamma_es_eff;
    let half_gamma = 0.5 * config.coupling.gamma_eff();
    let delta = config.atom.delta;

    // State layout: [Re e, Im e, accumulated P_s].
    let rhs = |t: f64, y: &SVector<f64, 3>| {
        let e = Complex64::new(y[0], y[1]);
        let xi = target_envelope(t, &config.target);
        let de = -Complex64::new(half_gamma, delta) * e - Complex64::new(0.0, kappa) * xi;
        SVector::<f64, 3>::new(de.re, de.im, ges * e.norm_sqr())
    };

    let outcome = integrate_adaptive(
        rhs,
        t_start,
        t_cap,
        SVector::<f64, 3>::zeros(),
        &ctrl,
        |_, _| {},
        |t, y: &SVector<f64, 3>| t >= sources_done && y[0] * y[0] + y[1] * y[1] < tail,
    );
    match outcome {
        Ok((t, y, end, _stats)) => {
            let pe = y[0] * y[0] + y[1] * y[1];
            if end == DriveEnd::CapReached && pe > tail {
                return Err(OracleError::NonConvergent);
            }
            Ok((
                AmplitudeState {
                    e_amp: Complex64::new(y[0], y[1]),
                    stored_incoherent: y[2],
                },
                t,
            ))
        }
        Err(DriverError::StepUnderflow { t }) => Err(OracleError::StepUnderflow { t }),
    }
}

/// Convenience used by tests and the selftest: absolute P_s difference
/// between the hierarchy and the oracle on one configuration.
pub fn hierarchy_oracle_gap(
    config: &SimulationConfig,
    opts: &IntegrationOptions,
) -> Result<f64, IntegrateError> {
    let mut no_traj = *opts;
    no_traj.record_trajectory = false;
    let hierarchy = crate::integrator::integrate(config, &no_traj)?;
    let p_hier = crate::observables::storage_efficiency(&hierarchy.rho_final);
    let p_oracle = fssp_no_control_oracle(config, opts)
        .expect("oracle domain must match the hierarchy configuration");
    Ok((p_hier - p_oracle).abs())
}
