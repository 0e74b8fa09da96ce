//! Scalar sigmoid primitives and the per-integer density `ρ_n`.
//!
//! Everything here is `f64`. The public functions validate their inputs; the
//! `pub(crate)` variants skip validation and are what the kernels call in
//! their inner loops once `x` has been checked.

use std::fmt;

use crate::error::{ensure_finite, Error, Result};

/// Sharpness of the sigmoid transitions. Always finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SharpnessK(f64);

impl SharpnessK {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidArgument(format!(
                "sharpness k must be finite and > 0, got {value}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for SharpnessK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<f64> for SharpnessK {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// Two-branch logistic: never evaluates `exp` of a positive argument.
#[inline]
pub(crate) fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `σ(z)(1-σ(z))`, evaluated on the tail side so that it is exactly even
/// and keeps full relative precision for large `|z|`.
#[inline]
pub(crate) fn logistic_prime(z: f64) -> f64 {
    let s = logistic(-z.abs());
    s * (1.0 - s)
}

/// `1 - 2σ(z)` written as `σ(-z) - σ(z)`, which is exactly odd in `z`.
#[inline]
pub(crate) fn logistic_skew(z: f64) -> f64 {
    logistic(-z) - logistic(z)
}

/// The standard sigmoid `1 / (1 + e^{-z})`.
///
/// Saturates to exactly `1.0` for large positive `z` and to a subnormal or
/// zero for large negative `z`; never returns NaN.
pub fn sigmoid(z: f64) -> Result<f64> {
    ensure_finite("z", z).map(logistic)
}

/// Derivative of the sigmoid, `σ(z)(1-σ(z))`. Peaks at `0.25` for `z = 0`.
pub fn sigmoid_prime(z: f64) -> Result<f64> {
    ensure_finite("z", z).map(logistic_prime)
}

#[inline]
pub(crate) fn density(x: f64, n: f64, k: f64) -> f64 {
    k * logistic_prime(k * (x - n))
}

#[inline]
pub(crate) fn density_prime(x: f64, n: f64, k: f64) -> f64 {
    let u = k * (x - n);
    k * k * logistic_skew(u) * logistic_prime(u)
}

/// Density of integer `n` at `x`: `ρ_n(x) = k σ(k(x-n)) (1-σ(k(x-n)))`.
///
/// Bell-shaped around `n` with maximum `k/4` at `x = n`.
pub fn rho(x: f64, n: i64, k: SharpnessK) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(density(x, n as f64, k.get()))
}

/// `ρ'_n(x) = k² (1 - 2σ(k(x-n))) σ(k(x-n)) (1-σ(k(x-n)))`; odd about `n`.
pub fn rho_prime(x: f64, n: i64, k: SharpnessK) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(density_prime(x, n as f64, k.get()))
}
