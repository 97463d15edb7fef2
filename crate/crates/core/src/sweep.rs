//! Grid sweeps over 1–2 parameters and derivative-free global optimization
//! over the control/pulse parameter box.
//!
//! Every cell (and every optimizer start) is an independent pure evaluation;
//! they run on a rayon pool and are reassembled in grid order, so results are
//! identical for any worker count. All CSV output is byte-reproducible: 12
//! significant digits, LF endings, no timestamps.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::integrator::{integrate, IntegrateError, IntegrationOptions};
use crate::model::{ConfigError, RawConfig, SimulationConfig};
use crate::observables::StorageResult;

/// Parameter that can be swept or optimized. Sweeping `gamma_eg` holds the
/// total γ fixed by adjusting `gamma_es` to γ − γ_eg.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SweepParam {
    GammaEg,
    TauP,
    Omega,
    A,
    B,
    Delta,
    Nbar,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::GammaEg => "gamma_eg",
            SweepParam::TauP => "tau_p",
            SweepParam::Omega => "omega",
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::Delta => "delta",
            SweepParam::Nbar => "nbar",
        }
    }

    pub fn parse(name: &str) -> Result<Self, SweepError> {
        match name {
            "gamma_eg" => Ok(SweepParam::GammaEg),
            "tau_p" => Ok(SweepParam::TauP),
            "omega" => Ok(SweepParam::Omega),
            "a" => Ok(SweepParam::A),
            "b" => Ok(SweepParam::B),
            "delta" => Ok(SweepParam::Delta),
            "nbar" => Ok(SweepParam::Nbar),
            other => Err(SweepError::InvalidAxis(format!(
                "`{other}` is not a sweepable parameter (gamma_eg, tau_p, omega, a, b, delta, nbar)"
            ))),
        }
    }

    fn apply(&self, raw: &mut RawConfig, value: f64, gamma_total: f64) {
        match self {
            SweepParam::GammaEg => {
                raw.gamma_eg = value;
                raw.gamma_es = gamma_total - value;
            }
            SweepParam::TauP => raw.tau_p = value,
            SweepParam::Omega => raw.omega = value,
            SweepParam::A => raw.a = value,
            SweepParam::B => raw.b = value,
            SweepParam::Delta => raw.delta = value,
            SweepParam::Nbar => raw.nbar = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

impl AxisScale {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisScale::Linear => "linear",
            AxisScale::Log => "log",
        }
    }
}

/// One swept axis.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AxisSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: AxisScale,
}

impl AxisSpec {
    pub fn linear(param: SweepParam, min: f64, max: f64, steps: usize) -> Self {
        AxisSpec { param, min, max, steps, scale: AxisScale::Linear }
    }

    pub fn log(param: SweepParam, min: f64, max: f64, steps: usize) -> Self {
        AxisSpec { param, min, max, steps, scale: AxisScale::Log }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let ordered = self.min.is_finite() && self.max.is_finite() && self.min < self.max;
        if !ordered {
            return Err(SweepError::InvalidAxis(format!(
                "{}: min must be < max (got {}..{})",
                self.param, self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(SweepError::InvalidAxis(format!(
                "{}: need at least 2 steps (got {})",
                self.param, self.steps
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(SweepError::InvalidAxis(format!(
                "{}: log axes need min > 0 (got {})",
                self.param, self.min
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + (self.max - self.min) * f,
                    AxisScale::Log => {
                        (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp()
                    }
                }
            })
            .collect()
    }

    /// `name:min:max:steps:scale` echo used in CSV headers.
    pub fn descriptor(&self) -> String {
        format!(
            "{}:{}:{}:{}:{}",
            self.param,
            self.min,
            self.max,
            self.steps,
            self.scale.as_str()
        )
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("sweeps take 1 or 2 axes (got {0})")]
    BadAxisCount(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("invalid optimize spec: {0}")]
    InvalidSpec(String),
    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),
}

/// Execution options shared by sweeps, figures, and the optimizer.
#[derive(Copy, Clone, Debug)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub integration: IntegrationOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: None,
            integration: IntegrationOptions {
                record_trajectory: false,
                ..IntegrationOptions::default()
            },
        }
    }
}

fn with_pool<R: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, SweepError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| SweepError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn evaluate(
    config: &SimulationConfig,
    opts: &IntegrationOptions,
) -> Result<StorageResult, SweepError> {
    let start = Instant::now();
    match integrate(config, opts) {
        Ok(state) => Ok(StorageResult::from_final(&state, start.elapsed().as_secs_f64())),
        // Non-convergence is carried as a flag, not a failure.
        Err(IntegrateError::NonConvergent(partial)) => {
            Ok(StorageResult::from_final(&partial, start.elapsed().as_secs_f64()))
        }
        Err(e @ IntegrateError::StepUnderflow { .. }) => Err(SweepError::Integration(e.to_string())),
    }
}

/// Rectangular grid of results, row-major with the first axis outermost.
#[derive(Clone, Debug)]
pub struct SweepTable {
    pub axes: Vec<AxisSpec>,
    pub base: RawConfig,
    pub results: Vec<StorageResult>,
}

impl SweepTable {
    pub fn axis_values(&self, axis: usize) -> Vec<f64> {
        self.axes[axis].values()
    }

    /// Cell lookup for 2-D tables.
    pub fn result(&self, i: usize, j: usize) -> &StorageResult {
        &self.results[i * self.axes[1].steps + j]
    }

    pub fn nonconverged_count(&self) -> usize {
        self.results.iter().filter(|r| !r.converged).count()
    }

    /// CSV body. `extra_header` lines (already `#`-prefixed) go first,
    /// followed by the axis echo; the column header is
    /// `param1[,param2],P_s,P_e_max,trace_dev,converged`.
    pub fn to_csv(&self, extra_header: &[String]) -> String {
        let mut out = String::new();
        for line in extra_header {
            out.push_str(line);
            out.push('\n');
        }
        for (i, axis) in self.axes.iter().enumerate() {
            out.push_str(&format!("# axis{}={}\n", i + 1, axis.descriptor()));
        }
        if self.axes.len() == 2 {
            out.push_str("param1,param2,P_s,P_e_max,trace_dev,converged\n");
            let v0 = self.axis_values(0);
            let v1 = self.axis_values(1);
            for (i, x0) in v0.iter().enumerate() {
                for (j, x1) in v1.iter().enumerate() {
                    let r = self.result(i, j);
                    out.push_str(&format!(
                        "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{}\n",
                        x0, x1, r.p_s, r.p_e_max, r.trace_dev, r.converged
                    ));
                }
            }
        } else {
            out.push_str("param1,P_s,P_e_max,trace_dev,converged\n");
            let v0 = self.axis_values(0);
            for (i, x0) in v0.iter().enumerate() {
                let r = &self.results[i];
                out.push_str(&format!(
                    "{:.11e},{:.11e},{:.11e},{:.11e},{}\n",
                    x0, r.p_s, r.p_e_max, r.trace_dev, r.converged
                ));
            }
        }
        out
    }
}

/// Evaluate the grid spanned by 1 or 2 axes around `base`.
pub fn run_sweep(
    base: &RawConfig,
    axes: &[AxisSpec],
    opts: &SweepOptions,
) -> Result<SweepTable, SweepError> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(SweepError::BadAxisCount(axes.len()));
    }
    for axis in axes {
        axis.validate()?;
    }
    let gamma_total = base.gamma_eg + base.gamma_es;

    let mut cells: Vec<SimulationConfig> = Vec::new();
    if axes.len() == 1 {
        for v in axes[0].values() {
            let mut raw = base.clone();
            axes[0].param.apply(&mut raw, v, gamma_total);
            cells.push(raw.validate()?);
        }
    } else {
        for v0 in axes[0].values() {
            for v1 in axes[1].values() {
                let mut raw = base.clone();
                axes[0].param.apply(&mut raw, v0, gamma_total);
                axes[1].param.apply(&mut raw, v1, gamma_total);
                cells.push(raw.validate()?);
            }
        }
    }

    let integration = opts.integration;
    let results: Result<Vec<StorageResult>, SweepError> = with_pool(opts.workers, || {
        cells
            .par_iter()
            .map(|cfg| evaluate(cfg, &integration))
            .collect()
    })?;

    Ok(SweepTable {
        axes: axes.to_vec(),
        base: base.clone(),
        results: results?,
    })
}

/// One optimized parameter with its box bounds. Degenerate bounds (lo = hi)
/// pin the parameter.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FreeParam {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
}

impl FreeParam {
    /// Default search boxes: a ∈ [0.1, 3], b ∈ [−2, 3] (multiples of τ_p for
    /// relative-unit configs), Ω ∈ [0, 3]γ, Δ ∈ [−2, 2]γ, τ_p ∈ [0.2, 50]/γ.
    pub fn with_default_bounds(param: SweepParam) -> Result<Self, SweepError> {
        let (lo, hi) = match param {
            SweepParam::A => (0.1, 3.0),
            SweepParam::B => (-2.0, 3.0),
            SweepParam::Omega => (0.0, 3.0),
            SweepParam::Delta => (-2.0, 2.0),
            SweepParam::TauP => (0.2, 50.0),
            other => {
                return Err(SweepError::InvalidSpec(format!(
                    "no default bounds for `{other}`; give them explicitly"
                )))
            }
        };
        Ok(FreeParam { param, lo, hi })
    }
}

/// Multistart downhill-simplex specification.
#[derive(Clone, Debug)]
pub struct OptimizeSpec {
    pub free: Vec<FreeParam>,
    /// Number of low-discrepancy starts.
    pub multistart: usize,
    /// Convergence tolerance on the P_s spread of the simplex.
    pub tol: f64,
    /// Total evaluation budget across all starts.
    pub max_evals: usize,
    /// Offset into the start sequence; same seed ⇒ same starts.
    pub seed: u64,
    /// Extra deterministic starts (full coordinate vectors over `free`),
    /// evaluated before the sequence starts.
    pub pinned_starts: Vec<Vec<f64>>,
}

impl OptimizeSpec {
    pub fn new(free: Vec<FreeParam>) -> Self {
        OptimizeSpec {
            free,
            multistart: 16,
            tol: 1e-5,
            max_evals: 6400,
            seed: 0,
            pinned_starts: Vec::new(),
        }
    }
}

/// One objective evaluation in the log.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub index: usize,
    pub params: Vec<f64>,
    pub p_s: f64,
    pub best_so_far: f64,
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    /// Coordinates of the best point, in `spec.free` order.
    pub best_params: Vec<f64>,
    pub best_p_s: f64,
    pub log: Vec<EvalRecord>,
    pub evals: usize,
    pub nonconverged_evals: usize,
    /// Set when any start ran out of budget before its simplex converged.
    pub budget_exhausted: bool,
}

impl OptimizeResult {
    /// CSV dump of the evaluation log: `eval,<names...>,P_s,best_so_far`.
    pub fn to_csv(&self, free: &[FreeParam], extra_header: &[String]) -> String {
        let mut out = String::new();
        for line in extra_header {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("eval");
        for fp in free {
            out.push(',');
            out.push_str(fp.param.name());
        }
        out.push_str(",P_s,best_so_far\n");
        for rec in &self.log {
            out.push_str(&format!("{}", rec.index));
            for v in &rec.params {
                out.push_str(&format!(",{:.11e}", v));
            }
            out.push_str(&format!(",{:.11e},{:.11e}\n", rec.p_s, rec.best_so_far));
        }
        out
    }
}

const HALTON_PRIMES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

/// k-th element of the van der Corput sequence in the given base.
fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

struct StartOutcome {
    evals: Vec<(Vec<f64>, f64)>,
    exhausted: bool,
    nonconverged: usize,
}

/// Bounded Nelder–Mead on the reduced (non-degenerate) coordinates,
/// maximizing P_s. Every candidate is clamped into the box before
/// evaluation. Returns the per-start evaluation list in call order.
fn nelder_mead_start<F>(
    x0: Vec<f64>,
    lo: &[f64],
    hi: &[f64],
    tol: f64,
    budget: usize,
    objective: &F,
) -> Result<StartOutcome, SweepError>
where
    F: Fn(&[f64]) -> Result<(f64, bool), SweepError> + Sync,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = x0.len();
    let clamp = |x: &mut Vec<f64>| {
        for d in 0..n {
            x[d] = x[d].clamp(lo[d], hi[d]);
        }
    };

    let mut evals: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut nonconverged = 0usize;
    let mut used = 0usize;
    // f = −P_s (minimized).
    let eval = |x: Vec<f64>,
                evals: &mut Vec<(Vec<f64>, f64)>,
                nonconverged: &mut usize,
                used: &mut usize|
     -> Result<f64, SweepError> {
        let (p_s, converged) = objective(&x)?;
        if !converged {
            *nonconverged += 1;
        }
        evals.push((x, p_s));
        *used += 1;
        Ok(-p_s)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut fvals: Vec<f64> = Vec::with_capacity(n + 1);
    let mut first = x0;
    clamp(&mut first);
    if used >= budget {
        return Ok(StartOutcome { evals, exhausted: true, nonconverged });
    }
    fvals.push(eval(first.clone(), &mut evals, &mut nonconverged, &mut used)?);
    simplex.push(first.clone());
    for d in 0..n {
        let mut v = first.clone();
        let step = 0.1 * (hi[d] - lo[d]);
        v[d] = if v[d] + step <= hi[d] { v[d] + step } else { v[d] - step };
        clamp(&mut v);
        if used >= budget {
            return Ok(StartOutcome { evals, exhausted: true, nonconverged });
        }
        fvals.push(eval(v.clone(), &mut evals, &mut nonconverged, &mut used)?);
        simplex.push(v);
    }

    loop {
        // Order best → worst.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if (fvals[worst] - fvals[best]).abs() < tol {
            return Ok(StartOutcome { evals, exhausted: false, nonconverged });
        }
        if used >= budget {
            return Ok(StartOutcome { evals, exhausted: true, nonconverged });
        }

        let mut centroid = vec![0.0; n];
        for &idx in order.iter().take(n) {
            for d in 0..n {
                centroid[d] += simplex[idx][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let mut reflected: Vec<f64> = (0..n)
            .map(|d| centroid[d] + ALPHA * (centroid[d] - simplex[worst][d]))
            .collect();
        clamp(&mut reflected);
        let f_r = eval(reflected.clone(), &mut evals, &mut nonconverged, &mut used)?;

        if f_r < fvals[best] {
            // Try to expand.
            if used < budget {
                let mut expanded: Vec<f64> = (0..n)
                    .map(|d| centroid[d] + GAMMA * (reflected[d] - centroid[d]))
                    .collect();
                clamp(&mut expanded);
                let f_e = eval(expanded.clone(), &mut evals, &mut nonconverged, &mut used)?;
                if f_e < f_r {
                    simplex[worst] = expanded;
                    fvals[worst] = f_e;
                } else {
                    simplex[worst] = reflected;
                    fvals[worst] = f_r;
                }
            } else {
                simplex[worst] = reflected;
                fvals[worst] = f_r;
            }
            continue;
        }
        if f_r < fvals[second_worst] {
            simplex[worst] = reflected;
            fvals[worst] = f_r;
            continue;
        }

        if used >= budget {
            return Ok(StartOutcome { evals, exhausted: true, nonconverged });
        }
        let mut contracted: Vec<f64> = (0..n)
            .map(|d| centroid[d] + RHO * (simplex[worst][d] - centroid[d]))
            .collect();
        clamp(&mut contracted);
        let f_c = eval(contracted.clone(), &mut evals, &mut nonconverged, &mut used)?;
        if f_c < fvals[worst] {
            simplex[worst] = contracted;
            fvals[worst] = f_c;
            continue;
        }

        // Shrink toward the best vertex.
        for &idx in order.iter().skip(1) {
            let mut v: Vec<f64> = (0..n)
                .map(|d| simplex[best][d] + SIGMA * (simplex[idx][d] - simplex[best][d]))
                .collect();
            clamp(&mut v);
            if used >= budget {
                return Ok(StartOutcome { evals, exhausted: true, nonconverged });
            }
            fvals[idx] = eval(v.clone(), &mut evals, &mut nonconverged, &mut used)?;
            simplex[idx] = v;
        }
    }
}

/// Maximize P_s over the box by multistart downhill simplex. Starts are drawn
/// from a Halton sequence offset by `spec.seed`, run independently (in
/// parallel), and reduced deterministically; the returned log is the
/// concatenation in start order with a running best.
pub fn optimize(
    base: &RawConfig,
    spec: &OptimizeSpec,
    opts: &SweepOptions,
) -> Result<OptimizeResult, SweepError> {
    if spec.free.is_empty() {
        return Err(SweepError::InvalidSpec("no free parameters".into()));
    }
    if spec.free.len() > HALTON_PRIMES.len() {
        return Err(SweepError::InvalidSpec(format!(
            "at most {} free parameters",
            HALTON_PRIMES.len()
        )));
    }
    if spec.multistart == 0 {
        return Err(SweepError::InvalidSpec("multistart must be at least 1".into()));
    }
    if !(spec.tol.is_finite() && spec.tol > 0.0) {
        return Err(SweepError::InvalidSpec("tol must be positive".into()));
    }
    for fp in &spec.free {
        if !fp.lo.is_finite() || !fp.hi.is_finite() || fp.lo > fp.hi {
            return Err(SweepError::InvalidSpec(format!(
                "bad bounds for {}: {}..{}",
                fp.param.name(),
                fp.lo,
                fp.hi
            )));
        }
    }
    for pin in &spec.pinned_starts {
        if pin.len() != spec.free.len() {
            return Err(SweepError::InvalidSpec(
                "pinned start length must match the number of free parameters".into(),
            ));
        }
    }

    let gamma_total = base.gamma_eg + base.gamma_es;
    let integration = opts.integration;
    let free = spec.free.clone();
    let objective = move |x: &[f64]| -> Result<(f64, bool), SweepError> {
        let mut raw = base.clone();
        for (fp, &v) in free.iter().zip(x.iter()) {
            fp.param.apply(&mut raw, v, gamma_total);
        }
        let cfg = raw.validate()?;
        let r = evaluate(&cfg, &integration)?;
        Ok((r.p_s, r.converged))
    };

    // Split off degenerate (pinned) coordinates.
    let free_dims: Vec<usize> = spec
        .free
        .iter()
        .enumerate()
        .filter(|(_, fp)| fp.lo < fp.hi)
        .map(|(d, _)| d)
        .collect();
    let full_point = |reduced: &[f64]| -> Vec<f64> {
        let mut x: Vec<f64> = spec.free.iter().map(|fp| fp.lo).collect();
        for (r, &d) in free_dims.iter().enumerate() {
            x[d] = reduced[r];
        }
        x
    };

    if free_dims.is_empty() {
        // Fully degenerate box: one evaluation at the pinned point.
        let x: Vec<f64> = spec.free.iter().map(|fp| fp.lo).collect();
        let (p_s, converged) = objective(&x)?;
        return Ok(OptimizeResult {
            best_params: x.clone(),
            best_p_s: p_s,
            log: vec![EvalRecord { index: 0, params: x, p_s, best_so_far: p_s }],
            evals: 1,
            nonconverged_evals: if converged { 0 } else { 1 },
            budget_exhausted: false,
        });
    }

    let lo: Vec<f64> = free_dims.iter().map(|&d| spec.free[d].lo).collect();
    let hi: Vec<f64> = free_dims.iter().map(|&d| spec.free[d].hi).collect();

    let mut starts: Vec<Vec<f64>> = Vec::new();
    for pin in &spec.pinned_starts {
        starts.push(free_dims.iter().map(|&d| pin[d]).collect());
    }
    for k in 0..spec.multistart {
        let index = spec.seed.wrapping_mul(spec.multistart as u64) + k as u64 + 1;
        starts.push(
            free_dims
                .iter()
                .enumerate()
                .map(|(r, _)| lo[r] + halton(index, HALTON_PRIMES[r]) * (hi[r] - lo[r]))
                .collect(),
        );
    }
    let budget_per_start = (spec.max_evals / starts.len()).max(2 + free_dims.len());

    let objective_ref = &objective;
    let lo_ref = &lo;
    let hi_ref = &hi;
    let tol = spec.tol;
    let outcomes: Result<Vec<StartOutcome>, SweepError> = with_pool(opts.workers, move || {
        starts
            .into_par_iter()
            .map(|x0| nelder_mead_start(x0, lo_ref, hi_ref, tol, budget_per_start, objective_ref))
            .collect()
    })?;
    let outcomes = outcomes?;

    let mut log: Vec<EvalRecord> = Vec::new();
    let mut best_p = f64::NEG_INFINITY;
    let mut best_x: Vec<f64> = Vec::new();
    let mut nonconverged = 0usize;
    let mut exhausted = false;
    for outcome in &outcomes {
        nonconverged += outcome.nonconverged;
        exhausted |= outcome.exhausted;
        for (x, p) in &outcome.evals {
            if *p > best_p {
                best_p = *p;
                best_x = full_point(x);
            }
            log.push(EvalRecord {
                index: log.len(),
                params: full_point(x),
                p_s: *p,
                best_so_far: best_p,
            });
        }
    }
    let evals = log.len();
    Ok(OptimizeResult {
        best_params: best_x,
        best_p_s: best_p,
        log,
        evals,
        nonconverged_evals: nonconverged,
        budget_exhausted: exhausted,
    })
}
