//! Smooth, differentiable approximations to integer rounding.
//!
//! Two constructions are provided alongside classical rounding:
//!
//! * **sigmoid differences** (`sigma-diff`): every integer `n` owns a soft
//!   window `σ(k(x-(n-½))) - σ(k(x-(n+½)))` and the result is `Σ n·window_n(x)`;
//! * **normalized derivative** (`norm-deriv`): every integer owns a bell-shaped
//!   density `ρ_n(x) = k σ'(k(x-n))` and the result is the density-weighted
//!   average `Σ n ρ_n / Σ ρ_n`.
//!
//! Both are evaluated over a small window of integers around `floor(x)` and
//! converge pointwise to classical rounding as the sharpness `k` grows.
//! Analytic first derivatives live in [`gradients`], convergence and
//! truncation sweeps in [`analysis`], and the `softround` command-line front
//! end in [`cli`].
//!
//! ```
//! use softround::{round_norm, round_sigma, DenominatorFloor, SharpnessK, WindowSpec};
//!
//! let k = SharpnessK::new(1000.0).unwrap();
//! let w = WindowSpec::default();
//! assert!((round_sigma(2.3, k, w).unwrap() - 2.0).abs() < 1e-9);
//! assert!((round_norm(2.7, k, w, DenominatorFloor::default()).unwrap() - 3.0).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod gradients;
pub mod kernels;
pub mod sigmoid;
pub mod svg;

pub use error::{Error, Result};
pub use gradients::{finite_difference, grad_round_norm, grad_round_sigma, GradResult};
pub use kernels::{
    classical_round, neighbor_window, round_norm, round_sigma, window_mass_sigma,
    DenominatorFloor, FloorMode, MethodKind, Neighbors, Rounder, WindowSpec,
};
pub use sigmoid::{rho, rho_prime, sigmoid, sigmoid_prime, SharpnessK};
