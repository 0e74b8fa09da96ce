//! Sweep engines: error against classical rounding as `k` grows, error
//! against a wide window as the window shrinks, and side-by-side tables of
//! all three methods.
//!
//! Per-point evaluation runs in parallel; every reduction is sequential over
//! the grid order, so results never depend on scheduling.

use std::fmt;

use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::gradients::GradResult;
use crate::kernels::{classical_round, DenominatorFloor, MethodKind, Rounder, WindowSpec};
use crate::sigmoid::SharpnessK;

/// Default half-integer exclusion for convergence sweeps.
pub const DEFAULT_EXCLUSION: f64 = 0.05;
/// Radius used as the truncation oracle.
pub const WIDE_RADIUS: u32 = 10;

/// Evenly spaced points over `[start, stop]` (both endpoints included),
/// minus those closer than `exclusion_radius` to a half-integer.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    start: f64,
    stop: f64,
    count: usize,
    exclusion_radius: f64,
    points: Vec<f64>,
}

impl SampleGrid {
    pub fn new(start: f64, stop: f64, count: usize, exclusion_radius: f64) -> Result<Self> {
        ensure_finite("grid start", start)?;
        ensure_finite("grid stop", stop)?;
        if !(start < stop) {
            return Err(Error::InvalidArgument(format!(
                "grid start must be below stop, got {start}..{stop}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        if !(exclusion_radius.is_finite() && exclusion_radius >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exclusion radius must be finite and >= 0, got {exclusion_radius}"
            )));
        }
        let points: Vec<f64> = linspace(start, stop, count)
            .into_iter()
            .filter(|&x| distance_to_half_integer(x) >= exclusion_radius)
            .collect();
        if points.is_empty() {
            return Err(Error::InvalidArgument(
                "every grid point falls inside the half-integer exclusion".into(),
            ));
        }
        Ok(Self {
            start,
            stop,
            count,
            exclusion_radius,
            points,
        })
    }

    /// Grid without exclusion.
    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self> {
        Self::new(start, stop, count, 0.0)
    }

    pub fn with_exclusion(&self, exclusion_radius: f64) -> Result<Self> {
        Self::new(self.start, self.stop, self.count, exclusion_radius)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl Default for SampleGrid {
    /// `[-1, 1]` with 1000 points, no exclusion.
    fn default() -> Self {
        Self::linear(-1.0, 1.0, 1000).expect("default grid is valid")
    }
}

/// numpy-compatible `linspace`: `x_i = i·step + start`, last point pinned to `stop`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            let mut out: Vec<f64> = (0..count).map(|i| i as f64 * step + start).collect();
            out[count - 1] = stop;
            out
        }
    }
}

pub fn distance_to_half_integer(x: f64) -> f64 {
    (x - x.floor() - 0.5).abs()
}

/// What a sweep measures its errors against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepReference {
    Classical,
    WideWindow { radius: u32 },
}

impl fmt::Display for SweepReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Classical => f.write_str("classical"),
            Self::WideWindow { radius } => write!(f, "wide-window(W={radius})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// `k` for sharpness sweeps, the window radius for window sweeps.
    pub param: f64,
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub argmax_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub method: MethodKind,
    pub reference: SweepReference,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Whether the max error never increases along the sweep (reported, not required).
    pub fn max_error_nonincreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].max_abs_err <= w[0].max_abs_err)
    }

    pub fn max_error_strictly_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].max_abs_err < w[0].max_abs_err)
    }
}

fn error_row(param: f64, xs: &[f64], errors: &[f64]) -> SweepRow {
    let mut max_abs_err = 0.0;
    let mut argmax_x = xs[0];
    let mut total = 0.0;
    for (&x, &e) in xs.iter().zip(errors) {
        total += e;
        if e > max_abs_err {
            max_abs_err = e;
            argmax_x = x;
        }
    }
    SweepRow {
        param,
        max_abs_err,
        mean_abs_err: total / errors.len() as f64,
        argmax_x,
    }
}

fn map_points<F>(xs: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

fn require_smooth(method: MethodKind) -> Result<()> {
    if method.is_smooth() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "sweeps need a smooth method (sigma-diff or norm-deriv)".into(),
        ))
    }
}

fn require_ascending<T: PartialOrd + fmt::Debug>(what: &str, values: &[T]) -> Result<()> {
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be strictly ascending, got {values:?}"
        )));
    }
    Ok(())
}

/// Max and mean `|f(x; k) - round(x)|` over the grid, one row per `k`.
pub fn sweep_k(
    method: MethodKind,
    grid: &SampleGrid,
    ks: &[SharpnessK],
    spec: WindowSpec,
    floor: DenominatorFloor,
) -> Result<SweepReport> {
    require_smooth(method)?;
    if ks.is_empty() {
        return Err(Error::InvalidArgument("no k values to sweep".into()));
    }
    let raw: Vec<f64> = ks.iter().map(|k| k.get()).collect();
    require_ascending("k values", &raw)?;

    let xs = grid.points();
    let classical = map_points(xs, classical_round)?;
    let rows = ks
        .iter()
        .map(|&k| {
            let rounder = Rounder::new(method, k).with_window(spec).with_floor(floor);
            let values = map_points(xs, |x| rounder.eval(x))?;
            let errors: Vec<f64> = values
                .iter()
                .zip(&classical)
                .map(|(v, c)| (v - c).abs())
                .collect();
            Ok(error_row(k.get(), xs, &errors))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        method,
        reference: SweepReference::Classical,
        rows,
    })
}

/// Max and mean `|f(x; W) - f(x; W_max)|` for each symmetric radius `W`.
/// The largest radius is the reference, so its row is exactly zero.
pub fn sweep_window(
    method: MethodKind,
    grid: &SampleGrid,
    k: SharpnessK,
    radii: &[u32],
    floor: DenominatorFloor,
) -> Result<SweepReport> {
    require_smooth(method)?;
    if radii.len() < 2 {
        return Err(Error::InvalidArgument(
            "a window sweep needs at least two radii".into(),
        ));
    }
    require_ascending("radii", radii)?;
    let wide = *radii.last().expect("non-empty");

    let xs = grid.points();
    let evaluate = |radius: u32| {
        let rounder = Rounder::new(method, k)
            .with_window(WindowSpec::symmetric(radius))
            .with_floor(floor);
        map_points(xs, |x| rounder.eval(x))
    };
    let reference = evaluate(wide)?;
    let rows = radii
        .iter()
        .map(|&radius| {
            let values = evaluate(radius)?;
            let errors: Vec<f64> = values
                .iter()
                .zip(&reference)
                .map(|(v, r)| (v - r).abs())
                .collect();
            Ok(error_row(f64::from(radius), xs, &errors))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        method,
        reference: SweepReference::WideWindow { radius: wide },
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    pub classical: f64,
    pub sigma_diff: f64,
    pub norm_deriv: f64,
}

impl ComparisonRow {
    pub fn get(&self, method: MethodKind) -> f64 {
        match method {
            MethodKind::Classical => self.classical,
            MethodKind::SigmaDiff => self.sigma_diff,
            MethodKind::NormDeriv => self.norm_deriv,
        }
    }
}

/// All three methods at every grid point.
pub fn compare_methods(
    grid: &SampleGrid,
    k: SharpnessK,
    spec: WindowSpec,
    floor: DenominatorFloor,
) -> Result<Vec<ComparisonRow>> {
    let sigma = Rounder::new(MethodKind::SigmaDiff, k).with_window(spec);
    let norm = Rounder::new(MethodKind::NormDeriv, k)
        .with_window(spec)
        .with_floor(floor);
    grid.points()
        .par_iter()
        .map(|&x| {
            Ok(ComparisonRow {
                x,
                classical: classical_round(x)?,
                sigma_diff: sigma.eval(x)?,
                norm_deriv: norm.eval(x)?,
            })
        })
        .collect()
}

/// Grid points where `f` decreases from the previous point.
pub fn monotonicity_violations(rounder: &Rounder, grid: &SampleGrid) -> Result<Vec<f64>> {
    let xs = grid.points();
    let values = map_points(xs, |x| rounder.eval(x))?;
    Ok(values
        .windows(2)
        .zip(&xs[1..])
        .filter(|(v, _)| v[1] < v[0])
        .map(|(_, &x)| x)
        .collect())
}

/// Sign summary of the analytic derivative over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeScan {
    pub min_derivative: f64,
    pub argmin_x: f64,
    pub negative_count: usize,
    pub points: usize,
}

pub fn derivative_sign_scan(rounder: &Rounder, grid: &SampleGrid) -> Result<DerivativeScan> {
    let xs = grid.points();
    let grads: Vec<GradResult> = xs
        .par_iter()
        .map(|&x| rounder.grad(x))
        .collect::<Result<_>>()?;
    let mut scan = DerivativeScan {
        min_derivative: f64::INFINITY,
        argmin_x: xs[0],
        negative_count: 0,
        points: xs.len(),
    };
    for (&x, g) in xs.iter().zip(&grads) {
        if g.derivative < 0.0 {
            scan.negative_count += 1;
        }
        if g.derivative < scan.min_derivative {
            scan.min_derivative = g.derivative;
            scan.argmin_x = x;
        }
    }
    Ok(scan)
}
