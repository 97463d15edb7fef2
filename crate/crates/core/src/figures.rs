//! Registry of preconfigured parameter studies: each id carries its baked
//! parameter set and grid, and reproduces one panel of the standard result
//! set (efficiency heatmaps, Fock-vs-coherent curves, control-pulse scans,
//! and the globally optimized comparison).
//!
//! Heatmaps default to 60×60 grids and curves to 40 points, with log-spaced
//! τ_p axes; the optimization panel uses a reduced τ_p grid (geometric,
//! containing τ_p = 1 exactly) to stay inside a minutes-scale budget.

use std::fmt;

use crate::model::{RawConfig, Statistics, Topology, CONFIG_KEY_ORDER};
use crate::sweep::{
    evaluate, optimize, run_sweep, AxisSpec, FreeParam, OptimizeSpec, SweepError, SweepOptions,
    SweepParam, SweepTable,
};

const HEATMAP_STEPS: usize = 60;
const CURVE_STEPS: usize = 40;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FigureId {
    F2a,
    F2b,
    F3a,
    F3b,
    F4b,
    F5a,
    F5b,
    F5c,
    F7a,
    F7b,
    F8a,
    F8b,
    F9a,
    F9b,
    F10a,
    F10b,
}

impl FigureId {
    pub const ALL: [FigureId; 16] = [
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4b,
        FigureId::F5a,
        FigureId::F5b,
        FigureId::F5c,
        FigureId::F7a,
        FigureId::F7b,
        FigureId::F8a,
        FigureId::F8b,
        FigureId::F9a,
        FigureId::F9b,
        FigureId::F10a,
        FigureId::F10b,
    ];

    pub fn parse(s: &str) -> Result<Self, SweepError> {
        match s.to_ascii_lowercase().as_str() {
            "2a" => Ok(FigureId::F2a),
            "2b" => Ok(FigureId::F2b),
            "3a" => Ok(FigureId::F3a),
            "3b" => Ok(FigureId::F3b),
            "4b" => Ok(FigureId::F4b),
            "5a" => Ok(FigureId::F5a),
            "5b" => Ok(FigureId::F5b),
            "5c" => Ok(FigureId::F5c),
            "7a" => Ok(FigureId::F7a),
            "7b" => Ok(FigureId::F7b),
            "8a" => Ok(FigureId::F8a),
            "8b" => Ok(FigureId::F8b),
            "9a" => Ok(FigureId::F9a),
            "9b" => Ok(FigureId::F9b),
            "10a" => Ok(FigureId::F10a),
            "10b" => Ok(FigureId::F10b),
            other => Err(SweepError::UnknownFigure(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4b => "4b",
            FigureId::F5a => "5a",
            FigureId::F5b => "5b",
            FigureId::F5c => "5c",
            FigureId::F7a => "7a",
            FigureId::F7b => "7b",
            FigureId::F8a => "8a",
            FigureId::F8b => "8b",
            FigureId::F9a => "9a",
            FigureId::F9b => "9b",
            FigureId::F10a => "10a",
            FigureId::F10b => "10b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One labeled curve of a multi-curve figure.
#[derive(Clone, Debug)]
pub struct LabeledCurve {
    pub label: String,
    pub table: SweepTable,
    /// Parameters that were re-optimized at every grid point (listed as
    /// `optimized` in the manifest instead of a base value).
    pub optimized: Vec<SweepParam>,
}

#[derive(Clone, Debug)]
pub struct CurveSet {
    pub figure: String,
    pub curves: Vec<LabeledCurve>,
}

impl CurveSet {
    /// Manifest listing curve labels, file names, and baked parameters.
    pub fn manifest(&self) -> String {
        let mut out = format!("# figure {}\nlabel,file,params\n", self.figure);
        for curve in &self.curves {
            let swept: Vec<&str> =
                curve.table.axes.iter().map(|ax| ax.param.name()).collect();
            let entries = curve.table.base.entries();
            let params: Vec<String> = CONFIG_KEY_ORDER
                .iter()
                .map(|key| {
                    if swept.contains(key) {
                        format!("{key}=swept")
                    } else if curve.optimized.iter().any(|p| p.name() == *key) {
                        format!("{key}=optimized")
                    } else {
                        format!("{key}={}", entries[key])
                    }
                })
                .collect();
            out.push_str(&format!(
                "{},{}.csv,{}\n",
                curve.label,
                curve.label,
                params.join(" ")
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum FigureOutput {
    Table(SweepTable),
    Curves(CurveSet),
}

fn matched_base(statistics: Statistics, topology: Topology) -> RawConfig {
    RawConfig { statistics, topology, ..RawConfig::default() }
}

/// γ_eg = 0.9γ, γ_es = 0.1γ with the standard control pulse (Ω = 0.7γ,
/// a = 0.9τ_p, b = 0.6τ_p) in relative units.
fn controlled_base(statistics: Statistics, topology: Topology) -> RawConfig {
    RawConfig {
        statistics,
        topology,
        gamma_eg: 0.9,
        gamma_es: 0.1,
        omega: 0.7,
        a: 0.9,
        b: 0.6,
        relative_units: true,
        ..RawConfig::default()
    }
}

fn gamma_tau_heatmap(
    statistics: Statistics,
    topology: Topology,
    opts: &SweepOptions,
) -> Result<FigureOutput, SweepError> {
    let base = matched_base(statistics, topology);
    let axes = [
        AxisSpec::linear(SweepParam::GammaEg, 0.05, 0.95, HEATMAP_STEPS),
        AxisSpec::log(SweepParam::TauP, 0.2, 20.0, HEATMAP_STEPS),
    ];
    Ok(FigureOutput::Table(run_sweep(&base, &axes, opts)?))
}

fn statistics_curves(
    figure: FigureId,
    make_base: impl Fn(Statistics) -> RawConfig,
    tau_max: f64,
    opts: &SweepOptions,
) -> Result<FigureOutput, SweepError> {
    let axis = AxisSpec::log(SweepParam::TauP, 0.2, tau_max, CURVE_STEPS);
    let mut curves = Vec::new();
    for statistics in [Statistics::Fock, Statistics::Coherent] {
        let base = make_base(statistics);
        curves.push(LabeledCurve {
            label: statistics.as_str().to_string(),
            table: run_sweep(&base, &[axis], opts)?,
            optimized: Vec::new(),
        });
    }
    Ok(FigureOutput::Curves(CurveSet { figure: figure.name().to_string(), curves }))
}

/// τ_p grid for the global-optimization panel: 0.25·2^{k/2}, k = 0..10.
/// Geometric with ratio √2, contains τ_p = 1 exactly.
fn optimization_tau_axis() -> AxisSpec {
    AxisSpec::log(SweepParam::TauP, 0.25, 8.0, 11)
}

/// Globally optimized storage efficiency over {a, b, Ω, Δ} at each τ_p.
/// Besides the Halton starts, each point pins two deterministic ones: the
/// plain no-control configuration (so the optimum can never fall below it)
/// and the previous point's optimum (warm start).
fn optimized_curve(
    label: &str,
    gamma_eg: f64,
    gamma_es: f64,
    opts: &SweepOptions,
) -> Result<LabeledCurve, SweepError> {
    let axis = optimization_tau_axis();
    let mut base = controlled_base(Statistics::Fock, Topology::Sagnac);
    base.gamma_eg = gamma_eg;
    base.gamma_es = gamma_es;

    let free = vec![
        FreeParam { param: SweepParam::A, lo: 0.1, hi: 3.0 },
        FreeParam { param: SweepParam::B, lo: -2.0, hi: 3.0 },
        FreeParam { param: SweepParam::Omega, lo: 0.0, hi: 3.0 },
        FreeParam { param: SweepParam::Delta, lo: -2.0, hi: 2.0 },
    ];
    let no_control_start = vec![0.9, 0.6, 0.0, 0.0];

    let mut results = Vec::new();
    let mut previous_best: Option<Vec<f64>> = None;
    for tau_p in axis.values() {
        let mut cell = base.clone();
        cell.tau_p = tau_p;
        let mut spec = OptimizeSpec::new(free.clone());
        spec.multistart = 6;
        spec.max_evals = 640;
        spec.pinned_starts = match &previous_best {
            Some(prev) => vec![no_control_start.clone(), prev.clone()],
            None => vec![no_control_start.clone()],
        };
        let opt = optimize(&cell, &spec, opts)?;

        let mut best_cfg = cell.clone();
        for (fp, &v) in free.iter().zip(opt.best_params.iter()) {
            match fp.param {
                SweepParam::A => best_cfg.a = v,
                SweepParam::B => best_cfg.b = v,
                SweepParam::Omega => best_cfg.omega = v,
                SweepParam::Delta => best_cfg.delta = v,
                _ => unreachable!(),
            }
        }
        results.push(evaluate(&best_cfg.validate()?, &opts.integration)?);
        previous_best = Some(opt.best_params);
    }

    Ok(LabeledCurve {
        label: label.to_string(),
        table: SweepTable { axes: vec![axis], base, results },
        optimized: vec![SweepParam::A, SweepParam::B, SweepParam::Omega, SweepParam::Delta],
    })
}

fn no_control_curve(
    label: &str,
    gamma_eg: f64,
    gamma_es: f64,
    opts: &SweepOptions,
) -> Result<LabeledCurve, SweepError> {
    let axis = optimization_tau_axis();
    let mut base = controlled_base(Statistics::Fock, Topology::Sagnac);
    base.gamma_eg = gamma_eg;
    base.gamma_es = gamma_es;
    base.omega = 0.0;
    Ok(LabeledCurve {
        label: label.to_string(),
        table: run_sweep(&base, &[axis], opts)?,
        optimized: Vec::new(),
    })
}

/// Build the figure with the given id.
pub fn figure(id: FigureId, opts: &SweepOptions) -> Result<FigureOutput, SweepError> {
    match id {
        FigureId::F2a => gamma_tau_heatmap(Statistics::Fock, Topology::Regular, opts),
        FigureId::F2b => gamma_tau_heatmap(Statistics::Coherent, Topology::Regular, opts),
        FigureId::F7a => gamma_tau_heatmap(Statistics::Fock, Topology::Sagnac, opts),
        FigureId::F7b => gamma_tau_heatmap(Statistics::Coherent, Topology::Sagnac, opts),

        FigureId::F3a => statistics_curves(
            id,
            |statistics| matched_base(statistics, Topology::Regular),
            50.0,
            opts,
        ),
        FigureId::F8a => statistics_curves(
            id,
            |statistics| matched_base(statistics, Topology::Sagnac),
            50.0,
            opts,
        ),
        FigureId::F3b => statistics_curves(
            id,
            |statistics| controlled_base(statistics, Topology::Regular),
            20.0,
            opts,
        ),
        FigureId::F8b => statistics_curves(
            id,
            |statistics| controlled_base(statistics, Topology::Sagnac),
            20.0,
            opts,
        ),

        FigureId::F4b => {
            let mut base = controlled_base(Statistics::Fock, Topology::Regular);
            base.tau_p = 1.0;
            let axes = [
                AxisSpec::linear(SweepParam::Omega, 0.0, 3.0, HEATMAP_STEPS),
                AxisSpec::linear(SweepParam::A, 0.1, 2.0, HEATMAP_STEPS),
            ];
            Ok(FigureOutput::Table(run_sweep(&base, &axes, opts)?))
        }
        FigureId::F5a => {
            let mut base = controlled_base(Statistics::Fock, Topology::Regular);
            base.tau_p = 1.0;
            let axes = [
                AxisSpec::linear(SweepParam::A, 0.1, 3.0, HEATMAP_STEPS),
                AxisSpec::linear(SweepParam::B, -2.0, 3.0, HEATMAP_STEPS),
            ];
            Ok(FigureOutput::Table(run_sweep(&base, &axes, opts)?))
        }
        FigureId::F5b | FigureId::F9a => {
            let topology = if id == FigureId::F5b { Topology::Regular } else { Topology::Sagnac };
            let base = controlled_base(Statistics::Fock, topology);
            let axes = [
                AxisSpec::log(SweepParam::TauP, 0.2, 20.0, HEATMAP_STEPS),
                AxisSpec::linear(SweepParam::A, 0.1, 3.0, HEATMAP_STEPS),
            ];
            Ok(FigureOutput::Table(run_sweep(&base, &axes, opts)?))
        }
        FigureId::F5c | FigureId::F9b => {
            let topology = if id == FigureId::F5c { Topology::Regular } else { Topology::Sagnac };
            let base = controlled_base(Statistics::Fock, topology);
            let axes = [
                AxisSpec::log(SweepParam::TauP, 0.2, 20.0, HEATMAP_STEPS),
                AxisSpec::linear(SweepParam::Delta, -2.0, 2.0, HEATMAP_STEPS),
            ];
            Ok(FigureOutput::Table(run_sweep(&base, &axes, opts)?))
        }

        FigureId::F10a => {
            // Three control settings (b, a, Ω), in τ_p and γ units.
            let triples = [(1.3, 0.7, 1.5), (0.6, 0.9, 0.7), (-0.4, 1.2, 0.4)];
            let axis = AxisSpec::log(SweepParam::TauP, 0.2, 20.0, 24);
            let mut curves = Vec::new();
            for (b, a, omega) in triples {
                let mut base = controlled_base(Statistics::Fock, Topology::Sagnac);
                base.a = a;
                base.b = b;
                base.omega = omega;
                curves.push(LabeledCurve {
                    label: format!("b_{b}"),
                    table: run_sweep(&base, &[axis], opts)?,
                    optimized: Vec::new(),
                });
            }
            Ok(FigureOutput::Curves(CurveSet {
                figure: id.name().to_string(),
                curves,
            }))
        }
        FigureId::F10b => {
            let curves = vec![
                optimized_curve("optimal_gamma_eg_0.9", 0.9, 0.1, opts)?,
                optimized_curve("optimal_gamma_eg_0.8", 0.8, 0.2, opts)?,
                no_control_curve("no_control_gamma_eg_0.9", 0.9, 0.1, opts)?,
                no_control_curve("no_control_gamma_eg_0.5", 0.5, 0.5, opts)?,
            ];
            Ok(FigureOutput::Curves(CurveSet {
                figure: id.name().to_string(),
                curves,
            }))
        }
    }
}
