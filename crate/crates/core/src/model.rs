//! Configuration types, the basis convention, and the topology-dependent
//! effective coupling constants.
//!
//! Units: the total decay rate γ = γ_eg + γ_es of |e⟩ is the frequency unit
//! (γ = 1 for all default configurations); times are in 1/γ and rates in γ.
//! The basis order is (|g⟩, |e⟩, |s⟩) everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Decay rates and detuning of the Λ atom.
///
/// `delta` is the residual common detuning Δ of |e⟩ in the rotating frame;
/// two-photon resonance between |g⟩ and |s⟩ is maintained by construction, so
/// no other frequency survives.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AtomConfig {
    /// Decay rate of |e⟩ → |g⟩ (pumping channel), units of γ.
    pub gamma_eg: f64,
    /// Decay rate of |e⟩ → |s⟩ (storage channel), units of γ.
    pub gamma_es: f64,
    /// Detuning Δ of |e⟩, units of γ.
    pub delta: f64,
}

impl AtomConfig {
    /// Total decay rate γ = γ_eg + γ_es (the frequency unit).
    pub fn gamma(&self) -> f64 {
        self.gamma_eg + self.gamma_es
    }
}

/// Coupling topology between the atom and the waveguide modes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Bidirectional waveguide; the pump addresses only the forward modes.
    Regular,
    /// The atom couples to one propagation direction only; decay channels
    /// are halved at unchanged pump amplitude.
    Chiral,
    /// The pulse is split onto both waveguide ends and addresses only the
    /// even mode; the pump rate doubles at unchanged decay.
    Sagnac,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Regular => "regular",
            Topology::Chiral => "chiral",
            Topology::Sagnac => "sagnac",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Photon-number statistics of the target pulse.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Statistics {
    /// Single-photon Fock state; propagated with the two-sector hierarchy.
    Fock,
    /// Coherent state of mean photon number `nbar`; acts as a classical pump.
    Coherent,
}

impl Statistics {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statistics::Fock => "fock",
            Statistics::Coherent => "coherent",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Gaussian target-pulse parameters.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TargetPulse {
    /// Half-length τ_p of the pulse, units of 1/γ.
    pub tau_p: f64,
    /// Arrival time t₀ of the pulse center at the atom.
    pub t0: f64,
    pub statistics: Statistics,
    /// Mean photon number of the coherent pulse; ignored for Fock statistics.
    pub nbar: f64,
}

/// Gaussian control-pulse parameters. `a` and `b` are stored in absolute time
/// units here; [`RawConfig::relative_units`] converts from multiples of τ_p.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ControlPulse {
    /// Peak amplitude Ω, units of γ. Ω = 0 disables the control exactly.
    pub omega: f64,
    /// Half-width a of the control envelope.
    pub a: f64,
    /// Delay b of the control-pulse center relative to t₀.
    pub b: f64,
}

/// Pump amplitude prefactor and effective decay rates after the topology is
/// folded in.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EffectiveCoupling {
    /// Pump amplitude prefactor κ multiplying ξ̃(t), units of γ^{1/2}.
    pub kappa: f64,
    pub gamma_eg_eff: f64,
    pub gamma_es_eff: f64,
}

impl EffectiveCoupling {
    /// Total effective decay rate of |e⟩.
    pub fn gamma_eff(&self) -> f64 {
        self.gamma_eg_eff + self.gamma_es_eff
    }
}

/// Map (topology, atom) onto the pump prefactor and effective decay rates.
///
/// Regular keeps the 1/√2 pump deficit (κ² = γ_eg/2) at full decay; Chiral
/// halves both decay channels at unchanged κ; Sagnac doubles the pump rate
/// (κ² = γ_eg) at unchanged decay. Chiral and Sagnac both satisfy
/// κ² = γ_eg_eff, which is what removes the storage-efficiency ceiling.
pub fn effective_coupling(topology: Topology, atom: &AtomConfig) -> EffectiveCoupling {
    match topology {
        Topology::Regular => EffectiveCoupling {
            kappa: (atom.gamma_eg / 2.0).sqrt(),
            gamma_eg_eff: atom.gamma_eg,
            gamma_es_eff: atom.gamma_es,
        },
        Topology::Chiral => EffectiveCoupling {
            kappa: (atom.gamma_eg / 2.0).sqrt(),
            gamma_eg_eff: atom.gamma_eg / 2.0,
            gamma_es_eff: atom.gamma_es / 2.0,
        },
        Topology::Sagnac => EffectiveCoupling {
            kappa: atom.gamma_eg.sqrt(),
            gamma_eg_eff: atom.gamma_eg,
            gamma_es_eff: atom.gamma_es,
        },
    }
}

/// A fully validated simulation configuration with derived quantities baked
/// in. Construct through [`validate_config`] or [`RawConfig::validate`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub atom: AtomConfig,
    pub target: TargetPulse,
    /// Control pulse with `a`, `b` in absolute time units.
    pub control: ControlPulse,
    pub topology: Topology,
    pub coupling: EffectiveCoupling,
}

impl SimulationConfig {
    pub fn gamma(&self) -> f64 {
        self.atom.gamma()
    }

    /// Drive amplitude prefactor in front of ξ̃(t): κ for Fock, κ·√nbar for
    /// coherent statistics.
    pub fn pump_amplitude(&self) -> f64 {
        match self.target.statistics {
            Statistics::Fock => self.coupling.kappa,
            Statistics::Coherent => self.coupling.kappa * self.target.nbar.sqrt(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid control: {0}")]
    InvalidControl(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("cannot read config file: {0}")]
    Io(String),
}

fn finite_non_negative(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

fn finite_positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Validate an already-assembled configuration and populate the derived
/// coupling constants. `control.a`/`control.b` must be absolute here.
pub fn validate_config(
    atom: AtomConfig,
    target: TargetPulse,
    control: ControlPulse,
    topology: Topology,
) -> Result<SimulationConfig, ConfigError> {
    if !finite_non_negative(atom.gamma_eg) || !finite_non_negative(atom.gamma_es) {
        return Err(ConfigError::InvalidAtom(format!(
            "decay rates must be non-negative (gamma_eg={}, gamma_es={})",
            atom.gamma_eg, atom.gamma_es
        )));
    }
    if !finite_positive(atom.gamma()) {
        return Err(ConfigError::InvalidAtom(
            "gamma_eg + gamma_es must be positive".into(),
        ));
    }
    if !atom.delta.is_finite() {
        return Err(ConfigError::InvalidAtom("delta must be finite".into()));
    }
    if !finite_positive(target.tau_p) {
        return Err(ConfigError::InvalidPulse(format!(
            "tau_p must be positive (got {})",
            target.tau_p
        )));
    }
    if !target.t0.is_finite() {
        return Err(ConfigError::InvalidPulse("t0 must be finite".into()));
    }
    if !finite_non_negative(target.nbar) {
        return Err(ConfigError::InvalidPulse(format!(
            "nbar must be non-negative (got {})",
            target.nbar
        )));
    }
    if !finite_positive(control.a) {
        return Err(ConfigError::InvalidControl(format!(
            "control half-width a must be positive (got {})",
            control.a
        )));
    }
    if !finite_non_negative(control.omega) {
        return Err(ConfigError::InvalidControl(format!(
            "control amplitude omega must be non-negative (got {})",
            control.omega
        )));
    }
    if !control.b.is_finite() {
        return Err(ConfigError::InvalidControl("control delay b must be finite".into()));
    }
    let coupling = effective_coupling(topology, &atom);
    Ok(SimulationConfig {
        atom,
        target,
        control,
        topology,
        coupling,
    })
}

/// Canonical key order of the config-file format.
pub const CONFIG_KEY_ORDER: [&str; 12] = [
    "gamma_eg",
    "gamma_es",
    "delta",
    "topology",
    "statistics",
    "nbar",
    "tau_p",
    "t0",
    "omega",
    "a",
    "b",
    "relative_units",
];

/// The flat key=value configuration, before validation. This mirrors the
/// on-disk format one-to-one; `a` and `b` are multiples of τ_p when
/// `relative_units` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct RawConfig {
    pub gamma_eg: f64,
    pub gamma_es: f64,
    pub delta: f64,
    pub topology: Topology,
    pub statistics: Statistics,
    pub nbar: f64,
    pub tau_p: f64,
    pub t0: f64,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub relative_units: bool,
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig {
            gamma_eg: 0.5,
            gamma_es: 0.5,
            delta: 0.0,
            topology: Topology::Regular,
            statistics: Statistics::Fock,
            nbar: 1.0,
            tau_p: 1.0,
            t0: 0.0,
            omega: 0.0,
            a: 1.0,
            b: 0.0,
            relative_units: false,
        }
    }
}

impl RawConfig {
    /// Parse the plain-text `key=value` format. `#` starts a comment; blank
    /// lines are ignored. Unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RawConfig::default();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::BadValue {
                key: format!("line {}", lineno + 1),
                message: format!("expected key=value, got `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Set one field from its config-file key. Used by the file parser and by
    /// CLI `--set key=value` overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError::BadValue {
            key: key.to_string(),
            message,
        };
        let parse_f64 = |value: &str| {
            value
                .parse::<f64>()
                .map_err(|e| bad(format!("`{value}` is not a number ({e})")))
        };
        match key {
            "gamma_eg" => self.gamma_eg = parse_f64(value)?,
            "gamma_es" => self.gamma_es = parse_f64(value)?,
            "delta" => self.delta = parse_f64(value)?,
            "nbar" => self.nbar = parse_f64(value)?,
            "tau_p" => self.tau_p = parse_f64(value)?,
            "t0" => self.t0 = parse_f64(value)?,
            "omega" => self.omega = parse_f64(value)?,
            "a" => self.a = parse_f64(value)?,
            "b" => self.b = parse_f64(value)?,
            "topology" => {
                self.topology = match value.to_ascii_lowercase().as_str() {
                    "regular" => Topology::Regular,
                    "chiral" => Topology::Chiral,
                    "sagnac" => Topology::Sagnac,
                    other => {
                        return Err(bad(format!(
                            "`{other}` is not one of regular|chiral|sagnac"
                        )))
                    }
                }
            }
            "statistics" => {
                self.statistics = match value.to_ascii_lowercase().as_str() {
                    "fock" => Statistics::Fock,
                    "coherent" => Statistics::Coherent,
                    other => return Err(bad(format!("`{other}` is not one of fock|coherent"))),
                }
            }
            "relative_units" => {
                self.relative_units = match value.to_ascii_lowercase().as_str() {
                    "true" => true,
                    "false" => false,
                    other => return Err(bad(format!("`{other}` is not true|false"))),
                }
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Validate and resolve into a [`SimulationConfig`] (absolute control
    /// units, derived couplings populated).
    pub fn validate(&self) -> Result<SimulationConfig, ConfigError> {
        if self.relative_units && !finite_positive(self.tau_p) {
            return Err(ConfigError::InvalidPulse(format!(
                "tau_p must be positive (got {})",
                self.tau_p
            )));
        }
        let scale = if self.relative_units { self.tau_p } else { 1.0 };
        validate_config(
            AtomConfig {
                gamma_eg: self.gamma_eg,
                gamma_es: self.gamma_es,
                delta: self.delta,
            },
            TargetPulse {
                tau_p: self.tau_p,
                t0: self.t0,
                statistics: self.statistics,
                nbar: self.nbar,
            },
            ControlPulse {
                omega: self.omega,
                a: self.a * scale,
                b: self.b * scale,
            },
            self.topology,
        )
    }

    /// Key/value view in the canonical key order, used for the `#` config
    /// echo in CSV headers. Floats are rendered with full precision so the
    /// echo round-trips.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let mut map = BTreeMap::new();
        map.insert("gamma_eg", format!("{:?}", self.gamma_eg));
        map.insert("gamma_es", format!("{:?}", self.gamma_es));
        map.insert("delta", format!("{:?}", self.delta));
        map.insert("topology", self.topology.to_string());
        map.insert("statistics", self.statistics.to_string());
        map.insert("nbar", format!("{:?}", self.nbar));
        map.insert("tau_p", format!("{:?}", self.tau_p));
        map.insert("t0", format!("{:?}", self.t0));
        map.insert("omega", format!("{:?}", self.omega));
        map.insert("a", format!("{:?}", self.a));
        map.insert("b", format!("{:?}", self.b));
        map.insert("relative_units", self.relative_units.to_string());
        map
    }

    /// `#`-prefixed header lines echoing the resolved configuration.
    pub fn echo_lines(&self) -> Vec<String> {
        let entries = self.entries();
        CONFIG_KEY_ORDER
            .iter()
            .map(|k| format!("# {k}={}", entries[k]))
            .collect()
    }
}
