//! Adaptive integration of the coherent master equation or the Fock-state
//! hierarchy over the scattering window.
//!
//! The stepper is an embedded Dormand–Prince 5(4) pair with PI-free step
//! control and FSAL reuse. The hierarchy is integrated jointly as one
//! flattened real state vector (3 matrices × 9 complex entries = 54 reals) so
//! a single error controller governs all blocks; the coherent path uses the
//! same driver on 18 reals.
//!
//! Integration starts at t₀ − pad·τ_p from the ground state and stops when
//! both envelopes have decayed to 1e−6 of their peaks and P_e has fallen
//! below the tail threshold, or at the hard time cap. Reaching the cap with
//! P_e still above the threshold is a [`IntegrateError::NonConvergent`] run.

use nalgebra::SVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::liouvillian::{
    coherent_rhs, fock_rhs, hermiticity_defect, min_eigenvalue_hermitian, trace_re, CMat3,
    HierarchyState,
};
use crate::model::{SimulationConfig, Statistics};

/// Envelopes count as extinguished below this fraction of their peak.
const ENVELOPE_FLOOR: f64 = 1e-6;
/// Step-size underflow guard.
const H_MIN: f64 = 1e-12;

/// Tolerances and window controls for [`integrate`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct IntegrationOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step size. `None` resolves to 0.01·min(τ_p, 1/γ), floored at
    /// 1e−4/γ.
    pub max_step: Option<f64>,
    /// Integration starts at t₀ − pad·τ_p; the same pad sets the post-pulse
    /// part of the hard cap.
    pub window_pad_front: f64,
    /// P_e below this value counts as a finished tail.
    pub tail_excited_threshold: f64,
    /// Absolute override for the hard end cap; `None` resolves to
    /// t₀ + max(pad·τ_p, b + pad·a) + 40/γ.
    pub hard_t_end_cap: Option<f64>,
    /// Record a sample at every accepted step. Sweeps switch this off.
    pub record_trajectory: bool,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: None,
            window_pad_front: 6.0,
            tail_excited_threshold: 1e-8,
            hard_t_end_cap: None,
            record_trajectory: true,
        }
    }
}

impl IntegrationOptions {
    pub fn resolved_max_step(&self, config: &SimulationConfig) -> f64 {
        match self.max_step {
            Some(h) => h,
            None => {
                let gamma = config.gamma();
                (0.01 * config.target.tau_p.min(1.0 / gamma)).max(1e-4 / gamma)
            }
        }
    }

    pub fn t_start(&self, config: &SimulationConfig) -> f64 {
        config.target.t0 - self.window_pad_front * config.target.tau_p
    }

    pub fn t_cap(&self, config: &SimulationConfig) -> f64 {
        match self.hard_t_end_cap {
            Some(t) => t,
            None => {
                let pad = self.window_pad_front;
                let tail = (pad * config.target.tau_p)
                    .max(config.control.b + pad * config.control.a);
                config.target.t0 + tail + 40.0 / config.gamma()
            }
        }
    }

    /// Earliest time at which both envelopes are below [`ENVELOPE_FLOOR`] of
    /// their peaks (past both peaks).
    fn sources_done_time(&self, config: &SimulationConfig) -> f64 {
        let half_widths = (-ENVELOPE_FLOOR.ln()).sqrt();
        let t0 = config.target.t0;
        let target_done = t0 + 2.0 * config.target.tau_p * half_widths;
        if config.control.omega > 0.0 {
            let control_done = t0 + config.control.b + 2.0 * config.control.a * half_widths;
            target_done.max(control_done)
        } else {
            target_done
        }
    }
}

/// Per-sample record of the evolution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub p_g: Vec<f64>,
    pub p_e: Vec<f64>,
    pub p_s: Vec<f64>,
    pub trace_dev: Vec<f64>,
    pub min_eig: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// CSV dump with header `t,P_g,P_e,P_s,trace_dev,min_eig`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,P_g,P_e,P_s,trace_dev,min_eig\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
                self.t[k], self.p_g[k], self.p_e[k], self.p_s[k], self.trace_dev[k],
                self.min_eig[k]
            ));
        }
        out
    }
}

/// Numerical-hygiene summary of one run.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// max over the run of |Tr ρ − 1| for the physical blocks.
    pub max_trace_dev: f64,
    /// max over the run of max_ij |ρ_ij − conj(ρ_ji)| for the physical blocks.
    pub max_hermiticity_defect: f64,
    /// min over the run of the smallest eigenvalue of ρ₁₁ (or ρ).
    pub min_eigenvalue: f64,
    pub p_e_max: f64,
    pub converged: bool,
    pub t_final: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evals: usize,
}

/// Result of one integration.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalState {
    /// Final physical state: ρ₁₁ for Fock statistics, ρ for coherent.
    pub rho_final: CMat3,
    /// Final vacuum-sector block for Fock runs (analytically constant at
    /// |g⟩⟨g|; integrated anyway as a regression check).
    pub rho00_final: Option<CMat3>,
    pub trajectory: Trajectory,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Error)]
pub enum IntegrateError {
    /// Hard cap reached with P_e still above the tail threshold.
    #[error("integration hit the hard time cap at t={} with P_e above threshold", .0.diagnostics.t_final)]
    NonConvergent(Box<FinalState>),
    #[error("step size underflow at t={t}")]
    StepUnderflow { t: f64 },
}

// Dormand–Prince 5(4) coefficients.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights (error estimator).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

#[derive(Copy, Clone, Debug, Default)]
pub(crate) struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum DriveEnd {
    SourcesDone,
    CapReached,
}

pub(crate) enum DriverError {
    StepUnderflow { t: f64 },
}

/// Advance `y' = rhs(t, y)` from `t_start` until `stop` fires at an accepted
/// step or `t_cap` is reached. `observer` sees the initial state and every
/// accepted step.
pub(crate) fn integrate_adaptive<const N: usize, F, O, P>(
    rhs: F,
    t_start: f64,
    t_cap: f64,
    y0: SVector<f64, N>,
    ctrl: &StepControl,
    mut observer: O,
    stop: P,
) -> Result<(f64, SVector<f64, N>, DriveEnd, StepStats), DriverError>
where
    F: Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    O: FnMut(f64, &SVector<f64, N>),
    P: Fn(f64, &SVector<f64, N>) -> bool,
{
    let mut stats = StepStats::default();
    let mut t = t_start;
    let mut y = y0;
    observer(t, &y);
    if stop(t, &y) {
        return Ok((t, y, DriveEnd::SourcesDone, stats));
    }
    if t_cap - t <= H_MIN {
        return Ok((t, y, DriveEnd::CapReached, stats));
    }

    let mut k1 = rhs(t, &y);
    stats.rhs_evals += 1;
    let mut h_prop = ctrl.max_step;

    loop {
        let remaining = t_cap - t;
        if remaining <= H_MIN {
            return Ok((t, y, DriveEnd::CapReached, stats));
        }
        let clamped = h_prop >= remaining;
        let h = if clamped { remaining } else { h_prop };

        let k2 = rhs(t + C2 * h, &(y + k1 * (A21 * h)));
        let k3 = rhs(t + C3 * h, &(y + k1 * (A31 * h) + k2 * (A32 * h)));
        let k4 = rhs(t + C4 * h, &(y + k1 * (A41 * h) + k2 * (A42 * h) + k3 * (A43 * h)));
        let k5 = rhs(
            t + C5 * h,
            &(y + k1 * (A51 * h) + k2 * (A52 * h) + k3 * (A53 * h) + k4 * (A54 * h)),
        );
        let k6 = rhs(
            t + h,
            &(y + k1 * (A61 * h) + k2 * (A62 * h) + k3 * (A63 * h) + k4 * (A64 * h)
                + k5 * (A65 * h)),
        );
        let y_new = y
            + k1 * (B1 * h)
            + k3 * (B3 * h)
            + k4 * (B4 * h)
            + k5 * (B5 * h)
            + k6 * (B6 * h);
        let k7 = rhs(t + h, &y_new);
        stats.rhs_evals += 6;

        let err_vec = k1 * (E1 * h)
            + k3 * (E3 * h)
            + k4 * (E4 * h)
            + k5 * (E5 * h)
            + k6 * (E6 * h)
            + k7 * (E7 * h);
        let mut err_acc = 0.0;
        for i in 0..N {
            let scale = ctrl.abs_tol + ctrl.rel_tol * y[i].abs().max(y_new[i].abs());
            let r = err_vec[i] / scale;
            err_acc += r * r;
        }
        let err = (err_acc / N as f64).sqrt();

        if err.is_finite() && err <= 1.0 {
            t = if clamped { t_cap } else { t + h };
            y = y_new;
            k1 = k7;
            stats.accepted += 1;
            observer(t, &y);
            if stop(t, &y) {
                return Ok((t, y, DriveEnd::SourcesDone, stats));
            }
            if clamped {
                return Ok((t, y, DriveEnd::CapReached, stats));
            }
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            h_prop = (h * factor).min(ctrl.max_step);
        } else {
            stats.rejected += 1;
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            h_prop = h * factor;
            if h_prop < H_MIN {
                return Err(DriverError::StepUnderflow { t });
            }
        }
    }
}

fn pack_mat(m: &CMat3, out: &mut [f64]) {
    for i in 0..3 {
        for j in 0..3 {
            let z = m[(i, j)];
            out[2 * (3 * i + j)] = z.re;
            out[2 * (3 * i + j) + 1] = z.im;
        }
    }
}

fn unpack_mat(s: &[f64]) -> CMat3 {
    CMat3::from_fn(|i, j| Complex64::new(s[2 * (3 * i + j)], s[2 * (3 * i + j) + 1]))
}

/// Index of Re ρ_ee in a packed matrix block (2·(3·row + col), row = col = 1).
const EE_RE: usize = 8;

struct Monitor {
    record: bool,
    trajectory: Trajectory,
    max_trace_dev: f64,
    max_herm: f64,
    min_eig: f64,
    p_e_max: f64,
}

impl Monitor {
    fn new(record: bool) -> Self {
        Monitor {
            record,
            trajectory: Trajectory::default(),
            max_trace_dev: 0.0,
            max_herm: 0.0,
            min_eig: f64::INFINITY,
            p_e_max: 0.0,
        }
    }

    fn observe(&mut self, t: f64, rho: &CMat3, rho00: Option<&CMat3>) {
        let trace_dev = (trace_re(rho) - 1.0).abs();
        let mut dev = trace_dev;
        let mut herm = hermiticity_defect(rho);
        if let Some(r00) = rho00 {
            dev = dev.max((trace_re(r00) - 1.0).abs());
            herm = herm.max(hermiticity_defect(r00));
        }
        let min_eig = min_eigenvalue_hermitian(rho);
        let p_e = rho[(1, 1)].re;
        self.max_trace_dev = self.max_trace_dev.max(dev);
        self.max_herm = self.max_herm.max(herm);
        self.min_eig = self.min_eig.min(min_eig);
        self.p_e_max = self.p_e_max.max(p_e);
        if self.record {
            self.trajectory.t.push(t);
            self.trajectory.p_g.push(rho[(0, 0)].re);
            self.trajectory.p_e.push(p_e);
            self.trajectory.p_s.push(rho[(2, 2)].re);
            self.trajectory.trace_dev.push(trace_dev);
            self.trajectory.min_eig.push(min_eig);
        }
    }

    fn into_final(
        self,
        rho_final: CMat3,
        rho00_final: Option<CMat3>,
        converged: bool,
        t_final: f64,
        stats: StepStats,
    ) -> FinalState {
        FinalState {
            rho_final,
            rho00_final,
            trajectory: self.trajectory,
            diagnostics: Diagnostics {
                max_trace_dev: self.max_trace_dev,
                max_hermiticity_defect: self.max_herm,
                min_eigenvalue: self.min_eig,
                p_e_max: self.p_e_max,
                converged,
                t_final,
                steps_accepted: stats.accepted,
                steps_rejected: stats.rejected,
                rhs_evals: stats.rhs_evals,
            },
        }
    }
}

/// Integrate the configured system from the ground state over the scattering
/// window and return the final state plus diagnostics.
pub fn integrate(
    config: &SimulationConfig,
    opts: &IntegrationOptions,
) -> Result<FinalState, IntegrateError> {
    let ctrl = StepControl {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_step: opts.resolved_max_step(config),
    };
    let t_start = opts.t_start(config);
    let t_cap = opts.t_cap(config);
    let sources_done = opts.sources_done_time(config);
    let tail = opts.tail_excited_threshold;

    match config.target.statistics {
        Statistics::Coherent => {
            let mut y0 = SVector::<f64, 18>::zeros();
            y0[0] = 1.0; // Re ρ_gg
            let mut monitor = Monitor::new(opts.record_trajectory);
            let outcome = integrate_adaptive(
                |t, y: &SVector<f64, 18>| {
                    let rho = unpack_mat(y.as_slice());
                    let d = coherent_rhs(&rho, t, config);
                    let mut out = SVector::<f64, 18>::zeros();
                    pack_mat(&d, out.as_mut_slice());
                    out
                },
                t_start,
                t_cap,
                y0,
                &ctrl,
                |t, y: &SVector<f64, 18>| {
                    monitor.observe(t, &unpack_mat(y.as_slice()), None);
                },
                |t, y| t >= sources_done && y[EE_RE] < tail,
            );
            match outcome {
                Ok((t, y, end, stats)) => {
                    let rho = unpack_mat(y.as_slice());
                    let converged = end == DriveEnd::SourcesDone || y[EE_RE] <= tail;
                    let state = monitor.into_final(rho, None, converged, t, stats);
                    if converged {
                        Ok(state)
                    } else {
                        Err(IntegrateError::NonConvergent(Box::new(state)))
                    }
                }
                Err(DriverError::StepUnderflow { t }) => Err(IntegrateError::StepUnderflow { t }),
            }
        }
        Statistics::Fock => {
            let init = HierarchyState::ground();
            let mut y0 = SVector::<f64, 54>::zeros();
            pack_mat(&init.rho11, &mut y0.as_mut_slice()[0..18]);
            pack_mat(&init.rho01, &mut y0.as_mut_slice()[18..36]);
            pack_mat(&init.rho00, &mut y0.as_mut_slice()[36..54]);
            let mut monitor = Monitor::new(opts.record_trajectory);
            let outcome = integrate_adaptive(
                |t, y: &SVector<f64, 54>| {
                    let state = HierarchyState {
                        rho11: unpack_mat(&y.as_slice()[0..18]),
                        rho01: unpack_mat(&y.as_slice()[18..36]),
                        rho00: unpack_mat(&y.as_slice()[36..54]),
                    };
                    let d = fock_rhs(&state, t, config);
                    let mut out = SVector::<f64, 54>::zeros();
                    pack_mat(&d.rho11, &mut out.as_mut_slice()[0..18]);
                    pack_mat(&d.rho01, &mut out.as_mut_slice()[18..36]);
                    pack_mat(&d.rho00, &mut out.as_mut_slice()[36..54]);
                    out
                },
                t_start,
                t_cap,
                y0,
                &ctrl,
                |t, y: &SVector<f64, 54>| {
                    let rho11 = unpack_mat(&y.as_slice()[0..18]);
                    let rho00 = unpack_mat(&y.as_slice()[36..54]);
                    monitor.observe(t, &rho11, Some(&rho00));
                },
                |t, y| t >= sources_done && y[EE_RE] < tail,
            );
            match outcome {
                Ok((t, y, end, stats)) => {
                    let rho11 = unpack_mat(&y.as_slice()[0..18]);
                    let rho00 = unpack_mat(&y.as_slice()[36..54]);
                    let converged = end == DriveEnd::SourcesDone || y[EE_RE] <= tail;
                    let state =
                        monitor.into_final(rho11, Some(rho00), converged, t, stats);
                    if converged {
                        Ok(state)
                    } else {
                        Err(IntegrateError::NonConvergent(Box::new(state)))
                    }
                }
                Err(DriverError::StepUnderflow { t }) => Err(IntegrateError::StepUnderflow { t }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_config, AtomConfig, ControlPulse, TargetPulse, Topology};
    use approx::assert_relative_eq;

    fn config(
        gamma_eg: f64,
        gamma_es: f64,
        statistics: Statistics,
        tau_p: f64,
        omega: f64,
    ) -> SimulationConfig {
        validate_config(
            AtomConfig { gamma_eg, gamma_es, delta: 0.0 },
            TargetPulse { tau_p, t0: 0.0, statistics, nbar: 1.0 },
            ControlPulse { omega, a: 0.9 * tau_p, b: 0.6 * tau_p },
            Topology::Regular,
        )
        .unwrap()
    }

    #[test]
    fn decoupled_atom_stays_in_ground_state() {
        // gamma_eg = 0 gives kappa = 0: no pump, and |g⟩⟨g| is an exact
        // fixed point, so every sample is bit-identical.
        let cfg = config(0.0, 1.0, Statistics::Fock, 1.0, 0.7);
        let out = integrate(&cfg, &IntegrationOptions::default()).unwrap();
        assert_eq!(out.rho_final, HierarchyState::ground().rho11);
        assert!(out.trajectory.p_s.iter().all(|&p| p == 0.0));
        assert!(out.trajectory.p_e.iter().all(|&p| p == 0.0));
        assert!(out.trajectory.p_g.iter().all(|&p| p == 1.0));
        assert_eq!(out.diagnostics.max_trace_dev, 0.0);
    }

    #[test]
    fn short_pulse_run_is_well_behaved() {
        let cfg = config(0.5, 0.5, Statistics::Fock, 1.0, 0.0);
        let out = integrate(&cfg, &IntegrationOptions::default()).unwrap();
        let d = &out.diagnostics;
        assert!(d.converged);
        assert!(d.max_trace_dev < 1e-7, "trace dev {}", d.max_trace_dev);
        assert!(d.max_hermiticity_defect < 1e-9, "herm {}", d.max_hermiticity_defect);
        assert!(d.min_eigenvalue > -1e-7, "min eig {}", d.min_eigenvalue);
        let p_s = out.rho_final[(2, 2)].re;
        assert!(p_s > 0.0 && p_s < 0.5, "P_s = {p_s}");
        // Samples strictly increasing.
        assert!(out.trajectory.t.windows(2).all(|w| w[1] > w[0]));
        // Vacuum block stays at |g⟩⟨g|.
        let rho00 = out.rho00_final.unwrap();
        assert!((rho00[(0, 0)].re - 1.0).abs() < 1e-9);
        assert!(rho00[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn coherent_and_fock_paths_agree_without_pump() {
        // nbar = 0 removes the coherent drive; both statistics then reduce to
        // a dark atom in |g⟩.
        let mut cfg = config(0.5, 0.5, Statistics::Coherent, 1.0, 0.0);
        cfg.target.nbar = 0.0;
        let out = integrate(&cfg, &IntegrationOptions::default()).unwrap();
        assert_eq!(out.rho_final[(0, 0)].re, 1.0);
        assert_eq!(out.rho_final[(2, 2)].re, 0.0);
    }

    #[test]
    fn early_cap_with_hot_atom_is_nonconvergent() {
        let cfg = config(0.5, 0.5, Statistics::Fock, 1.0, 0.0);
        let opts = IntegrationOptions {
            hard_t_end_cap: Some(0.5), // mid-pulse, P_e is O(0.1) here
            ..IntegrationOptions::default()
        };
        match integrate(&cfg, &opts) {
            Err(IntegrateError::NonConvergent(partial)) => {
                assert!(!partial.diagnostics.converged);
                assert!(partial.diagnostics.p_e_max > 1e-4);
                assert_relative_eq!(partial.diagnostics.t_final, 0.5, max_relative = 1e-12);
            }
            other => panic!("expected NonConvergent, got {other:?}"),
        }
    }

    #[test]
    fn unreachable_tolerance_underflows_step() {
        let cfg = config(0.5, 0.5, Statistics::Fock, 1.0, 0.0);
        let opts = IntegrationOptions {
            rel_tol: 1e-300,
            abs_tol: 1e-300,
            ..IntegrationOptions::default()
        };
        assert!(matches!(
            integrate(&cfg, &opts),
            Err(IntegrateError::StepUnderflow { .. })
        ));
    }

    #[test]
    fn max_step_default_resolution() {
        let cfg = config(0.5, 0.5, Statistics::Fock, 50.0, 0.0);
        let opts = IntegrationOptions::default();
        assert_relative_eq!(opts.resolved_max_step(&cfg), 0.01, max_relative = 1e-12);
        let cfg = config(0.5, 0.5, Statistics::Fock, 0.2, 0.0);
        assert_relative_eq!(opts.resolved_max_step(&cfg), 0.002, max_relative = 1e-12);
        // Floor at 1e-4/γ.
        let cfg = config(0.5, 0.5, Statistics::Fock, 1e-3, 0.0);
        assert_relative_eq!(opts.resolved_max_step(&cfg), 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn trajectory_csv_has_expected_header() {
        let cfg = config(0.5, 0.5, Statistics::Fock, 0.5, 0.0);
        let out = integrate(&cfg, &IntegrationOptions::default()).unwrap();
        let csv = out.trajectory.to_csv();
        assert!(csv.starts_with("t,P_g,P_e,P_s,trace_dev,min_eig\n"));
        assert_eq!(csv.lines().count(), out.trajectory.len() + 1);
        assert!(!csv.contains('\r'));
    }
}
