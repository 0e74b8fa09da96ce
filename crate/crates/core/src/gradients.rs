//! Analytic first derivatives of the smooth kernels and a central-difference
//! gradient check.
//!
//! Derivatives are taken of the truncated sum with the window held fixed.
//! The window only changes when `x` crosses an integer, so this is the exact
//! derivative almost everywhere.

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{
    neighbor_window, norm_sum, round_norm_on, round_sigma_on, sigma_sum, DenominatorFloor,
    MethodKind, Neighbors, Rounder, WindowSpec,
};
use crate::sigmoid::SharpnessK;

/// Central-difference step used by the gradient check.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Function value and `d/dx` at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradResult {
    pub value: f64,
    pub derivative: f64,
    /// Set when the normalized kernel's denominator floor determined the
    /// result; the derivative then treats the denominator as constant.
    pub clamp_active: bool,
}

pub fn grad_round_sigma_on(x: f64, k: SharpnessK, window: &Neighbors) -> Result<GradResult> {
    ensure_finite("x", x)?;
    let e = sigma_sum(x, k.get(), window, true);
    Ok(GradResult {
        value: e.value,
        derivative: e.slope,
        clamp_active: false,
    })
}

/// `d/dx round_σ = k Σ n [σ'(k(x-(n-½))) - σ'(k(x-(n+½)))]`.
pub fn grad_round_sigma(x: f64, k: SharpnessK, spec: WindowSpec) -> Result<GradResult> {
    spec.check_smooth()?;
    let window = neighbor_window(x, spec)?;
    grad_round_sigma_on(x, k, &window)
}

pub fn grad_round_norm_on(
    x: f64,
    k: SharpnessK,
    window: &Neighbors,
    floor: DenominatorFloor,
) -> Result<GradResult> {
    ensure_finite("x", x)?;
    let e = norm_sum(x, k.get(), window, floor, true);
    Ok(GradResult {
        value: e.value,
        derivative: e.slope,
        clamp_active: e.clamp_active,
    })
}

/// Quotient rule: `(Σ n ρ'_n · Σ ρ_n - Σ n ρ_n · Σ ρ'_n) / (Σ ρ_n)²`.
pub fn grad_round_norm(
    x: f64,
    k: SharpnessK,
    spec: WindowSpec,
    floor: DenominatorFloor,
) -> Result<GradResult> {
    spec.check_smooth()?;
    let window = neighbor_window(x, spec)?;
    grad_round_norm_on(x, k, &window, floor)
}

/// `(f(x+h) - f(x-h)) / 2h`.
pub fn finite_difference<F>(f: F, x: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be finite and > 0, got {step}"
        )));
    }
    let hi = ensure_finite("f(x+h)", f(x + step)?)?;
    let lo = ensure_finite("f(x-h)", f(x - step)?)?;
    Ok((hi - lo) / (2.0 * step))
}

/// `|a - b| / max(|a|, |b|, 1)`: relative above unit magnitude, absolute below.
pub fn scaled_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

impl Rounder {
    /// Value and derivative of the configured smooth method.
    pub fn grad(&self, x: f64) -> Result<GradResult> {
        match self.method {
            MethodKind::Classical => Err(Error::InvalidArgument(
                "classical rounding has no derivative to report".into(),
            )),
            MethodKind::SigmaDiff => grad_round_sigma(x, self.k, self.window),
            MethodKind::NormDeriv => grad_round_norm(x, self.k, self.window, self.floor),
        }
    }

    /// Value and derivative with an explicit window.
    pub fn grad_on(&self, x: f64, window: &Neighbors) -> Result<GradResult> {
        match self.method {
            MethodKind::Classical => Err(Error::InvalidArgument(
                "classical rounding has no derivative to report".into(),
            )),
            MethodKind::SigmaDiff => grad_round_sigma_on(x, self.k, window),
            MethodKind::NormDeriv => grad_round_norm_on(x, self.k, window, self.floor),
        }
    }

    pub fn eval_on(&self, x: f64, window: &Neighbors) -> Result<f64> {
        match self.method {
            MethodKind::Classical => crate::kernels::classical_round(x),
            MethodKind::SigmaDiff => round_sigma_on(x, self.k, window),
            MethodKind::NormDeriv => round_norm_on(x, self.k, window, self.floor),
        }
    }
}

/// Outcome of comparing analytic derivatives against central differences.
#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub checked: usize,
    /// Points dropped because the denominator floor was active nearby.
    pub skipped: usize,
    pub max_error: f64,
    pub worst_x: f64,
    pub all_finite: bool,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.all_finite && self.checked > 0 && self.max_error <= tolerance
    }
}

const CLAMP_GUARD: f64 = 1e-3;

/// Compares `rounder.grad` with a central difference of the kernel value at
/// every point, holding the window fixed at the point's own window.
///
/// Points with the denominator floor active within `1e-3` are skipped.
pub fn check_gradient(rounder: &Rounder, points: &[f64], step: f64) -> Result<GradCheckReport> {
    let mut report = GradCheckReport {
        checked: 0,
        skipped: 0,
        max_error: 0.0,
        worst_x: f64::NAN,
        all_finite: true,
    };
    for &x in points {
        let window = neighbor_window(x, rounder.window)?;
        let g = rounder.grad_on(x, &window)?;
        let guard = [x - CLAMP_GUARD, x + CLAMP_GUARD]
            .iter()
            .map(|&t| rounder.grad_on(t, &window).map(|r| r.clamp_active))
            .collect::<Result<Vec<_>>>()?;
        if g.clamp_active || guard.into_iter().any(|c| c) {
            report.skipped += 1;
            continue;
        }
        let fd = finite_difference(|t| rounder.eval_on(t, &window), x, step)?;
        if !(g.value.is_finite() && g.derivative.is_finite()) {
            report.all_finite = false;
        }
        let err = scaled_error(g.derivative, fd);
        report.checked += 1;
        if !(err <= report.max_error) {
            report.max_error = err;
            report.worst_x = x;
        }
    }
    Ok(report)
}
