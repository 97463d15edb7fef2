//! Shared benchmark configurations.

use lambda_memory::{RawConfig, SimulationConfig, Statistics, Topology};

/// Matched rates, no control, the statistics and pulse length given.
pub fn plain_config(statistics: Statistics, tau_p: f64) -> SimulationConfig {
    let raw = RawConfig { statistics, tau_p, ..RawConfig::default() };
    raw.validate().expect("benchmark config must validate")
}

/// The standard enhanced control-pulse setup (γ_eg = 0.9γ, Ω = 0.7γ,
/// a = 0.9τ_p, b = 0.6τ_p, Sagnac).
pub fn control_config(tau_p: f64) -> SimulationConfig {
    let raw = RawConfig {
        gamma_eg: 0.9,
        gamma_es: 0.1,
        omega: 0.7,
        a: 0.9,
        b: 0.6,
        relative_units: true,
        topology: Topology::Sagnac,
        tau_p,
        ..RawConfig::default()
    };
    raw.validate().expect("benchmark config must validate")
}
