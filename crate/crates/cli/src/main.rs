//! `lmem`: single simulations, parameter sweeps, control-pulse optimization,
//! and one-command reproduction of the preconfigured figures.
//!
//! Exit codes: 0 on success, 1 on usage or runtime errors, 2 when a sweep or
//! figure produced more non-converged cells than `--max-bad-cells` allows.
//! All output files are written atomically (temp file + rename) and embed the
//! resolved configuration as `#` header comments; bodies carry no timestamps,
//! so repeated runs produce byte-identical files.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lambda_memory::{
    figure, fssp_no_control_oracle, integrate, optimize, run_sweep, storage_efficiency,
    AxisScale, AxisSpec, FigureId, FigureOutput, FreeParam, IntegrateError, IntegrationOptions,
    OptimizeSpec, RawConfig, Statistics, SweepOptions, SweepParam, Topology,
};

#[derive(Parser)]
#[command(
    name = "lmem",
    about = "Single-photon storage in a waveguide-coupled three-level atom",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Plain-text key=value configuration file ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set tau_p=50 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Clone, Copy)]
struct WorkerArgs {
    /// Worker threads (default: available parallelism; LM_WORKERS as fallback).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and print the storage efficiency.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the sampled trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[command(flatten)]
        workers: WorkerArgs,
    },
    /// Evaluate a 1-D or 2-D parameter grid and write it as CSV.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Axis spec name:min:max:steps, with an optional :log suffix
        /// (repeatable, at most 2).
        #[arg(long = "axis", value_name = "SPEC")]
        axis: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        workers: WorkerArgs,
        /// Tolerated number of non-converged cells before exiting 2.
        #[arg(long, default_value_t = 0)]
        max_bad_cells: usize,
    },
    /// Maximize P_s over a box of free parameters (multistart simplex).
    Optimize {
        #[command(flatten)]
        config: ConfigArgs,
        /// Free parameter, either a bare name or name:lo:hi (repeatable).
        /// Bare names use the default boxes: a:0.1:3, b:-2:3, omega:0:3,
        /// delta:-2:2, tau_p:0.2:50.
        #[arg(long = "free", value_name = "SPEC")]
        free: Vec<String>,
        #[arg(long)]
        multistart: Option<usize>,
        #[arg(long)]
        max_evals: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Write the evaluation log as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        workers: WorkerArgs,
    },
    /// Reproduce a preconfigured figure into a directory of CSV files.
    Figure {
        /// Figure id: 2a 2b 3a 3b 4b 5a 5b 5c 7a 7b 8a 8b 9a 9b 10a 10b.
        id: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        workers: WorkerArgs,
        #[arg(long, default_value_t = 0)]
        max_bad_cells: usize,
    },
    /// Run the built-in oracle-equivalence and invariant checks.
    Selftest {
        #[command(flatten)]
        workers: WorkerArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems (and --help/--version) all print to stderr; only
            // genuine errors exit non-zero.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Simulate { config, trajectory, workers } => {
            let raw = load_config(&config)?;
            let cfg = raw.validate().map_err(|e| e.to_string())?;
            let _ = resolve_workers(workers);
            let opts = IntegrationOptions::default();
            let outcome = integrate(&cfg, &opts);
            let (state, converged) = match outcome {
                Ok(state) => (state, true),
                Err(IntegrateError::NonConvergent(state)) => (*state, false),
                Err(e) => return Err(e.to_string()),
            };
            println!("P_s={:.12}", storage_efficiency(&state.rho_final));
            println!("P_g={:.12}", state.rho_final[(0, 0)].re);
            println!("P_e_max={:.12e}", state.diagnostics.p_e_max);
            println!("trace_dev={:.12e}", state.diagnostics.max_trace_dev);
            println!("min_eig={:.12e}", state.diagnostics.min_eigenvalue);
            println!("converged={converged}");
            if let Some(path) = trajectory {
                let mut body = String::new();
                for line in raw.echo_lines() {
                    body.push_str(&line);
                    body.push('\n');
                }
                body.push_str(&state.trajectory.to_csv());
                write_atomic(&path, &body)?;
            }
            Ok(if converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }

        Command::Sweep { config, axis, out, workers, max_bad_cells } => {
            if axis.is_empty() || axis.len() > 2 {
                return Err(format!(
                    "sweep takes 1 or 2 --axis specs, got {}; usage: --axis name:min:max:steps[:log]",
                    axis.len()
                ));
            }
            let raw = load_config(&config)?;
            let axes: Vec<AxisSpec> =
                axis.iter().map(|s| parse_axis(s)).collect::<Result<_, _>>()?;
            let opts = SweepOptions { workers: resolve_workers(workers), ..Default::default() };
            let table = run_sweep(&raw, &axes, &opts).map_err(|e| e.to_string())?;
            write_atomic(&out, &table.to_csv(&raw.echo_lines()))?;
            let bad = table.nonconverged_count();
            println!(
                "wrote {} ({} cells, {} non-converged)",
                out.display(),
                table.results.len(),
                bad
            );
            Ok(if bad > max_bad_cells { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }

        Command::Optimize { config, free, multistart, max_evals, seed, tol, out, workers } => {
            if free.is_empty() {
                return Err(
                    "optimize needs at least one --free parameter (name[:lo:hi])".to_string()
                );
            }
            let raw = load_config(&config)?;
            let free: Vec<FreeParam> =
                free.iter().map(|s| parse_free(s)).collect::<Result<_, _>>()?;
            let mut spec = OptimizeSpec::new(free);
            if let Some(n) = multistart {
                spec.multistart = n;
            }
            if let Some(n) = max_evals {
                spec.max_evals = n;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(t) = tol {
                spec.tol = t;
            }
            let opts = SweepOptions { workers: resolve_workers(workers), ..Default::default() };
            let result = optimize(&raw, &spec, &opts).map_err(|e| e.to_string())?;
            for (fp, v) in spec.free.iter().zip(result.best_params.iter()) {
                println!("best_{}={:.12}", fp.param.name(), v);
            }
            println!("best_P_s={:.12}", result.best_p_s);
            println!("evaluations={}", result.evals);
            println!("budget_exhausted={}", result.budget_exhausted);
            if let Some(path) = out {
                write_atomic(&path, &result.to_csv(&spec.free, &raw.echo_lines()))?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Figure { id, out, workers, max_bad_cells } => {
            let id = FigureId::parse(&id).map_err(|e| e.to_string())?;
            let opts = SweepOptions { workers: resolve_workers(workers), ..Default::default() };
            let output = figure(id, &opts).map_err(|e| e.to_string())?;
            fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let mut bad = 0usize;
            match output {
                FigureOutput::Table(table) => {
                    bad += table.nonconverged_count();
                    write_atomic(&out.join("table.csv"), &table.to_csv(&table.base.echo_lines()))?;
                    println!("wrote {}", out.join("table.csv").display());
                }
                FigureOutput::Curves(set) => {
                    for curve in &set.curves {
                        bad += curve.table.nonconverged_count();
                        let path = out.join(format!("{}.csv", curve.label));
                        write_atomic(&path, &curve.table.to_csv(&curve.table.base.echo_lines()))?;
                        println!("wrote {}", path.display());
                    }
                    write_atomic(&out.join("manifest.txt"), &set.manifest())?;
                    println!("wrote {}", out.join("manifest.txt").display());
                }
            }
            Ok(if bad > max_bad_cells { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }

        Command::Selftest { workers } => {
            let _ = resolve_workers(workers);
            let ok = selftest();
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn load_config(args: &ConfigArgs) -> Result<RawConfig, String> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::from_file(path).map_err(|e| e.to_string())?,
        None => RawConfig::default(),
    };
    for pair in &args.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("--set expects key=value, got `{pair}`"))?;
        raw.set(key.trim(), value.trim()).map_err(|e| e.to_string())?;
    }
    Ok(raw)
}

fn resolve_workers(args: WorkerArgs) -> Option<usize> {
    args.workers.or_else(|| {
        std::env::var("LM_WORKERS").ok().and_then(|v| v.parse::<usize>().ok())
    })
}

/// `name:min:max:steps[:log|:linear]`
fn parse_axis(spec: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 4 || parts.len() > 5 {
        return Err(format!(
            "bad axis `{spec}`; expected name:min:max:steps[:log]"
        ));
    }
    let param = SweepParam::parse(parts[0]).map_err(|e| e.to_string())?;
    let min: f64 = parts[1].parse().map_err(|_| format!("bad axis min `{}`", parts[1]))?;
    let max: f64 = parts[2].parse().map_err(|_| format!("bad axis max `{}`", parts[2]))?;
    let steps: usize = parts[3].parse().map_err(|_| format!("bad axis steps `{}`", parts[3]))?;
    let scale = match parts.get(4) {
        None => AxisScale::Linear,
        Some(&"linear") => AxisScale::Linear,
        Some(&"log") => AxisScale::Log,
        Some(other) => return Err(format!("bad axis scale `{other}` (linear|log)")),
    };
    let axis = AxisSpec { param, min, max, steps, scale };
    axis.validate().map_err(|e| e.to_string())?;
    Ok(axis)
}

/// `name` (default bounds) or `name:lo:hi`.
fn parse_free(spec: &str) -> Result<FreeParam, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.len() {
        1 => {
            let param = SweepParam::parse(parts[0]).map_err(|e| e.to_string())?;
            FreeParam::with_default_bounds(param).map_err(|e| e.to_string())
        }
        3 => {
            let param = SweepParam::parse(parts[0]).map_err(|e| e.to_string())?;
            let lo: f64 = parts[1].parse().map_err(|_| format!("bad bound `{}`", parts[1]))?;
            let hi: f64 = parts[2].parse().map_err(|_| format!("bad bound `{}`", parts[2]))?;
            Ok(FreeParam { param, lo, hi })
        }
        _ => Err(format!("bad --free `{spec}`; expected name or name:lo:hi")),
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), String> {
    let tmp = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".tmp");
            path.with_file_name(n)
        }
        None => return Err(format!("bad output path {}", path.display())),
    };
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)?;
        Ok(())
    };
    write().map_err(|e| format!("{}: {e}", path.display()))
}

struct Check {
    failures: usize,
}

impl Check {
    fn report(&mut self, name: &str, pass: bool, detail: String) {
        if pass {
            println!("PASS {name} ({detail})");
        } else {
            println!("FAIL {name} ({detail})");
            self.failures += 1;
        }
    }
}

/// Built-in verification: oracle equivalence across pulse lengths and
/// topologies, the closed-form long-pulse limits, numerical hygiene on a
/// control-pulse run, the topology-mapping identity, and the weak-field
/// equivalence of the two statistics.
fn selftest() -> bool {
    let mut check = Check { failures: 0 };
    let opts = IntegrationOptions { record_trajectory: false, ..Default::default() };

    // Hierarchy vs single-excitation oracle on a 3×3 grid.
    let mut worst_gap = 0.0f64;
    for topology in [Topology::Regular, Topology::Chiral, Topology::Sagnac] {
        for tau_p in [0.5, 2.0, 10.0] {
            let raw = RawConfig { tau_p, topology, ..RawConfig::default() };
            let cfg = raw.validate().unwrap();
            let hierarchy = match integrate(&cfg, &opts) {
                Ok(state) => storage_efficiency(&state.rho_final),
                Err(e) => {
                    check.report("oracle-equivalence", false, e.to_string());
                    return false;
                }
            };
            let oracle = fssp_no_control_oracle(&cfg, &opts).unwrap();
            worst_gap = worst_gap.max((hierarchy - oracle).abs());
        }
    }
    check.report("oracle-equivalence", worst_gap < 1e-6, format!("worst gap {worst_gap:.2e}"));

    // Long-pulse storage limit on a regular waveguide.
    let raw = RawConfig { tau_p: 50.0, ..RawConfig::default() };
    let p_half = integrate(&raw.validate().unwrap(), &opts)
        .map(|s| storage_efficiency(&s.rho_final))
        .unwrap_or(f64::NAN);
    check.report("fssp-limit-regular", (p_half - 0.5).abs() < 0.01, format!("P_s {p_half:.4}"));

    // Adiabatic closed form at tau_p = 100.
    let raw = RawConfig {
        gamma_eg: 0.9,
        gamma_es: 0.1,
        tau_p: 100.0,
        ..RawConfig::default()
    };
    let p_adiabatic = fssp_no_control_oracle(&raw.validate().unwrap(), &opts).unwrap();
    check.report(
        "adiabatic-limit",
        (p_adiabatic - 0.18).abs() < 5e-3,
        format!("P_s {p_adiabatic:.5} vs 0.18"),
    );

    // Numerical hygiene on the standard control-pulse configuration.
    let raw = RawConfig {
        gamma_eg: 0.9,
        gamma_es: 0.1,
        omega: 0.7,
        a: 0.9,
        b: 0.6,
        relative_units: true,
        topology: Topology::Sagnac,
        ..RawConfig::default()
    };
    match integrate(&raw.validate().unwrap(), &opts) {
        Ok(state) => {
            let d = state.diagnostics;
            check.report(
                "trace-conservation",
                d.max_trace_dev < 1e-7,
                format!("max dev {:.2e}", d.max_trace_dev),
            );
            check.report(
                "hermiticity",
                d.max_hermiticity_defect < 1e-9,
                format!("max defect {:.2e}", d.max_hermiticity_defect),
            );
            check.report(
                "positivity",
                d.min_eigenvalue > -1e-7,
                format!("min eig {:.2e}", d.min_eigenvalue),
            );
        }
        Err(e) => check.report("control-run", false, e.to_string()),
    }

    // The chiral configuration at doubled bare rates equals the Sagnac one.
    let sagnac = RawConfig {
        gamma_eg: 0.9,
        gamma_es: 0.1,
        omega: 0.7,
        a: 0.9,
        b: 0.6,
        relative_units: true,
        topology: Topology::Sagnac,
        tau_p: 2.0,
        ..RawConfig::default()
    };
    let chiral = RawConfig {
        topology: Topology::Chiral,
        gamma_eg: 1.8,
        gamma_es: 0.2,
        ..sagnac.clone()
    };
    let p_sagnac = integrate(&sagnac.validate().unwrap(), &opts)
        .map(|s| storage_efficiency(&s.rho_final))
        .unwrap_or(f64::NAN);
    let p_chiral = integrate(&chiral.validate().unwrap(), &opts)
        .map(|s| storage_efficiency(&s.rho_final))
        .unwrap_or(f64::NAN);
    check.report(
        "topology-mapping",
        (p_sagnac - p_chiral).abs() < 1e-8,
        format!("|diff| {:.2e}", (p_sagnac - p_chiral).abs()),
    );

    // Weak coherent pulses reproduce the Fock response linearly.
    let fock = RawConfig { tau_p: 2.0, ..RawConfig::default() };
    let p_fock = integrate(&fock.validate().unwrap(), &opts)
        .map(|s| storage_efficiency(&s.rho_final))
        .unwrap_or(f64::NAN);
    let weak = RawConfig {
        statistics: Statistics::Coherent,
        nbar: 1e-3,
        ..fock.clone()
    };
    let p_weak = integrate(&weak.validate().unwrap(), &opts)
        .map(|s| storage_efficiency(&s.rho_final) / 1e-3)
        .unwrap_or(f64::NAN);
    check.report(
        "weak-field-equivalence",
        (p_weak / p_fock - 1.0).abs() < 1e-2,
        format!("relative gap {:.2e}", (p_weak / p_fock - 1.0).abs()),
    );

    if check.failures == 0 {
        println!("selftest: all checks passed");
        true
    } else {
        println!("selftest: {} check(s) failed", check.failures);
        false
    }
}
