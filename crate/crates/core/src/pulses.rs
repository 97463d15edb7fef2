//! Gaussian envelopes of the target photon pulse and the classical control
//! pulse, evaluated analytically at arbitrary times.

use num_complex::Complex64;

use crate::model::{ControlPulse, TargetPulse};

/// Both envelopes at one instant.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EnvelopeSample {
    pub t: f64,
    /// Target-pulse amplitude ξ̃(t), units (1/time)^{1/2}. Real-valued for the
    /// zero-chirp Gaussian; the complex type is kept for generality.
    pub xi: Complex64,
    /// Control amplitude Ω_c(t), units of γ.
    pub omega_c: f64,
}

/// Wave-packet amplitude of the target pulse,
/// ξ̃(t) = (2πτ_p²)^{-1/4}·exp(−(t−t₀)²/(4τ_p²)), normalized so that
/// ∫|ξ̃|²dt = 1.
pub fn target_envelope(t: f64, p: &TargetPulse) -> Complex64 {
    let norm = (2.0 * std::f64::consts::PI * p.tau_p * p.tau_p).powf(-0.25);
    let arg = (t - p.t0) / (2.0 * p.tau_p);
    Complex64::new(norm * (-arg * arg).exp(), 0.0)
}

/// Control envelope Ω_c(t) = Ω·exp(−((t−t₀−b)/(2a))²), peaked at t₀+b.
pub fn control_envelope(t: f64, c: &ControlPulse, t0: f64) -> f64 {
    if c.omega == 0.0 {
        return 0.0;
    }
    let arg = (t - t0 - c.b) / (2.0 * c.a);
    c.omega * (-arg * arg).exp()
}

/// Pulse area ∫Ω_c(t)dt = 2aΩ√π (analytic Gaussian integral).
pub fn pulse_area(c: &ControlPulse) -> f64 {
    2.0 * c.a * c.omega * std::f64::consts::PI.sqrt()
}

pub fn sample_envelopes(t: f64, target: &TargetPulse, control: &ControlPulse) -> EnvelopeSample {
    EnvelopeSample {
        t,
        xi: target_envelope(t, target),
        omega_c: control_envelope(t, control, target.t0),
    }
}
