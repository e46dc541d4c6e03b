//! Time series, η families, (α, t) grids and the critical-α search.
//!
//! Every grid point is an independent pure evaluation; results are collected
//! by index, so the output does not depend on the worker count.

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::decoherence::{Eq6Variant, StateKernel};
use crate::error::{domain, Error, Result};
use crate::spectrum::{ChainParams, QutritCoupling};
use crate::state::negativity_closed_form;

/// Uniform time grid with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_start: 0.0, t_end: 50.0, steps: 501 }
    }
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() || t_start < 0.0 {
            return Err(domain(format!("time window must be finite with t_start >= 0 (got {t_start}..{t_end})")));
        }
        if t_end <= t_start {
            return Err(domain(format!("t_end must exceed t_start (got {t_start}..{t_end})")));
        }
        if steps < 2 {
            return Err(domain(format!("time grid needs at least 2 steps (got {steps})")));
        }
        Ok(Self { t_start, t_end, steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.t_start, self.t_end, self.steps)
    }
}

fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    let h = (b - a) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { b } else { a + h * i as f64 })
        .collect()
}

/// How the three coherence magnitudes are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorSource {
    /// Per-mode closed-form magnitude.
    #[default]
    Magnitude,
    /// Modulus of the complex product.
    Complex(Eq6Variant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepOptions {
    pub workers: usize,
    pub source: FactorSource,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { workers: 1, source: FactorSource::Magnitude }
    }
}

impl SweepOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self { workers, ..Self::default() }
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        if self.workers == 0 {
            return Err(domain("workers must be >= 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| domain(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(job))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    TimeSeries,
    AlphaTimeGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    /// Base parameters; the swept coordinate is overridden per point.
    pub params: ChainParams,
    pub coupling: QutritCoupling,
    pub grid: TimeGrid,
    pub source: FactorSource,
    pub version: &'static str,
    pub created_unix: u64,
}

impl SweepMetadata {
    fn new(params: ChainParams, coupling: QutritCoupling, grid: TimeGrid, source: FactorSource) -> Self {
        let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { params, coupling, grid, source, version: env!("CARGO_PKG_VERSION"), created_unix }
    }
}

/// Negativity over a rectangular grid, stored row-major over `axes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub axes: Vec<Axis>,
    pub negativity: Vec<f64>,
    /// `[|F15|, |F19|, |F59|]` per grid point.
    pub magnitudes: Vec<[f64; 3]>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Values along the last axis for one index of the first (grids only).
    pub fn row(&self, i: usize) -> &[f64] {
        let width = self.axes.last().map_or(0, |a| a.values.len());
        &self.negativity[i * width..(i + 1) * width]
    }

    pub fn times(&self) -> &[f64] {
        &self.axes.last().expect("sweep has a time axis").values
    }

    pub fn mean(&self) -> f64 {
        mean(&self.negativity)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn evaluate(kernel: &StateKernel, t: f64, source: FactorSource) -> Result<([f64; 3], f64)> {
    let mags = match source {
        FactorSource::Magnitude => kernel.magnitudes(t),
        FactorSource::Complex(variant) => kernel.factors(t, variant).magnitudes(),
    };
    let n = negativity_closed_form(mags[0], mags[1], mags[2])?;
    Ok((mags, n))
}

fn series_points(kernel: &StateKernel, times: &[f64], source: FactorSource) -> Result<Vec<([f64; 3], f64)>> {
    times.par_iter().map(|&t| evaluate(kernel, t, source)).collect()
}

pub fn time_series(
    params: &ChainParams,
    coupling: QutritCoupling,
    grid: &TimeGrid,
    options: &SweepOptions,
) -> Result<SweepResult> {
    let times = grid.points();
    let kernel = StateKernel::new(params, coupling);
    let points = options.run(|| series_points(&kernel, &times, options.source))??;
    let (magnitudes, negativity) = points.into_iter().unzip();
    Ok(SweepResult {
        kind: SweepKind::TimeSeries,
        axes: vec![Axis { name: "t", values: times }],
        negativity,
        magnitudes,
        metadata: SweepMetadata::new(*params, coupling, *grid, options.source),
    })
}

pub const DEFAULT_ETAS: [f64; 5] = [0.0, 0.5, 0.9, 1.0, 1.2];

/// One time series per field value on a shared grid.
pub fn eta_family(
    params_base: &ChainParams,
    coupling: QutritCoupling,
    grid: &TimeGrid,
    etas: &[f64],
    options: &SweepOptions,
) -> Result<Vec<SweepResult>> {
    if etas.is_empty() {
        return Err(domain("eta family needs at least one eta"));
    }
    etas.iter()
        .map(|&eta| time_series(&params_base.with_eta(eta)?, coupling, grid, options))
        .collect()
}

/// Three-site coupling range of an (α, t) grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Default for AlphaRange {
    fn default() -> Self {
        Self { min: -1.0, max: 0.5, steps: 61 }
    }
}

impl AlphaRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(domain(format!("alpha range needs finite min < max (got {min}..{max})")));
        }
        if steps < 2 {
            return Err(domain(format!("alpha range needs at least 2 steps (got {steps})")));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

/// Negativity over α (rows) and t (columns).
pub fn alpha_time_grid(
    params_base: &ChainParams,
    coupling: QutritCoupling,
    grid: &TimeGrid,
    alphas: &AlphaRange,
    options: &SweepOptions,
) -> Result<SweepResult> {
    let alphas = AlphaRange::new(alphas.min, alphas.max, alphas.steps)?;
    let alpha_values = alphas.points();
    let times = grid.points();
    let kernels: Vec<StateKernel> = alpha_values
        .iter()
        .map(|&a| Ok(StateKernel::new(&params_base.with_alpha(a)?, coupling)))
        .collect::<Result<_>>()?;
    let width = times.len();
    let points: Vec<([f64; 3], f64)> = options.run(|| {
        (0..alpha_values.len() * width)
            .into_par_iter()
            .map(|idx| evaluate(&kernels[idx / width], times[idx % width], options.source))
            .collect::<Result<Vec<_>>>()
    })??;
    let (magnitudes, negativity) = points.into_iter().unzip();
    Ok(SweepResult {
        kind: SweepKind::AlphaTimeGrid,
        axes: vec![Axis { name: "alpha", values: alpha_values }, Axis { name: "t", values: times }],
        negativity,
        magnitudes,
        metadata: SweepMetadata::new(*params_base, coupling, *grid, options.source),
    })
}

/// Scalar extracted from a negativity time series when ranking α values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalObjective {
    /// Arithmetic mean over the grid.
    #[default]
    TimeAverage,
    /// Value at the last grid point.
    LateTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalSearch {
    pub range: AlphaRange,
    /// Golden-section iteration cap.
    pub refine_iters: usize,
    /// Bracket width at which refinement stops.
    pub resolution: f64,
    pub objective: CriticalObjective,
}

impl Default for CriticalSearch {
    fn default() -> Self {
        Self {
            range: AlphaRange::default(),
            refine_iters: 60,
            resolution: 1e-4,
            objective: CriticalObjective::TimeAverage,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalAlpha {
    pub alpha: f64,
    pub objective: f64,
    /// `(α, objective)` at every coarse grid point.
    pub coarse: Vec<(f64, f64)>,
    pub refine_iterations: usize,
}

/// Objectives closer than this count as tied.
const TIE_TOLERANCE: f64 = 1e-12;
const FLAT_SPREAD: f64 = 1e-9;

fn better(candidate: (f64, f64), incumbent: (f64, f64)) -> bool {
    let (ca, cv) = candidate;
    let (ia, iv) = incumbent;
    if cv > iv + TIE_TOLERANCE {
        true
    } else if (cv - iv).abs() <= TIE_TOLERANCE {
        ca.abs() < ia.abs()
    } else {
        false
    }
}

fn objective_at(
    params_base: &ChainParams,
    coupling: QutritCoupling,
    times: &[f64],
    alpha: f64,
    search: &CriticalSearch,
    source: FactorSource,
) -> Result<f64> {
    let kernel = StateKernel::new(&params_base.with_alpha(alpha)?, coupling);
    Ok(match search.objective {
        CriticalObjective::TimeAverage => {
            let values = series_points(&kernel, times, source)?;
            values.iter().map(|p| p.1).sum::<f64>() / values.len() as f64
        }
        CriticalObjective::LateTime => evaluate(&kernel, *times.last().expect("grid is nonempty"), source)?.1,
    })
}

/// Coarse scan of the objective over `search.range` followed by golden-section
/// refinement inside the bracket of the best coarse point.
pub fn find_critical_alpha(
    params_base: &ChainParams,
    coupling: QutritCoupling,
    grid: &TimeGrid,
    search: &CriticalSearch,
    options: &SweepOptions,
) -> Result<CriticalAlpha> {
    let range = AlphaRange::new(search.range.min, search.range.max, search.range.steps)?;
    if search.resolution.is_nan() || search.resolution <= 0.0 {
        return Err(domain("refinement resolution must be positive"));
    }
    let times = grid.points();
    let f = |a: f64| objective_at(params_base, coupling, &times, a, search, options.source);

    options.run(|| {
        let alphas = range.points();
        let values: Vec<f64> = alphas.par_iter().map(|&a| f(a)).collect::<Result<_>>()?;
        let coarse: Vec<(f64, f64)> = alphas.iter().copied().zip(values.iter().copied()).collect();

        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        if hi - lo < FLAT_SPREAD {
            return Err(Error::FlatObjective { spread: hi - lo });
        }
        let mut best_idx = 0;
        for i in 1..coarse.len() {
            if better(coarse[i], coarse[best_idx]) {
                best_idx = i;
            }
        }
        let mut best = coarse[best_idx];

        let mut a = alphas[best_idx.saturating_sub(1)];
        let mut b = alphas[(best_idx + 1).min(alphas.len() - 1)];
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = f(x1)?;
        let mut f2 = f(x2)?;
        let mut iterations = 0;
        while b - a > search.resolution && iterations < search.refine_iters {
            if better((x1, f1), (x2, f2)) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = f(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = f(x2)?;
            }
            iterations += 1;
        }
        for candidate in [(x1, f1), (x2, f2)] {
            if better(candidate, best) {
                best = candidate;
            }
        }
        Ok(CriticalAlpha { alpha: best.0, objective: best.1, coarse, refine_iterations: iterations })
    })?
}
