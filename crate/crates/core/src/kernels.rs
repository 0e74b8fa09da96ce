//! Classical rounding and the two smooth rounding kernels, evaluated over a
//! finite window of integers near `x`.
//!
//! The window is a pure function of `floor(x)`, so it is piecewise constant
//! and recenters by exactly one integer when `x` moves by one.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_finite, Error, Result};
use crate::sigmoid::{logistic, logistic_prime, logistic_skew, SharpnessK};

/// Which rounding function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Classical,
    SigmaDiff,
    NormDeriv,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [Self::Classical, Self::SigmaDiff, Self::NormDeriv];

    /// Serialized name used on the command line and in CSV/SVG output.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::SigmaDiff => "sigma-diff",
            Self::NormDeriv => "norm-deriv",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Classical => "Classical round(x)",
            Self::SigmaDiff => "Sigmoid differences",
            Self::NormDeriv => "Normalized derivative",
        }
    }

    pub fn is_smooth(self) -> bool {
        !matches!(self, Self::Classical)
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method {s:?} (expected classical, sigma-diff or norm-deriv)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WindowShape {
    Symmetric { radius: u32 },
    /// `{floor(x)-1, ..., floor(x)+2}`, the four-neighbour set of the
    /// reference `smooth_round_precise`. Not mirror-symmetric about integers,
    /// so it carries a small bias there.
    AppendixPrecise,
}

/// Policy for choosing the finite set of integers a kernel sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    shape: WindowShape,
}

impl WindowSpec {
    pub const DEFAULT_RADIUS: u32 = 2;

    /// `{floor(x)-radius, ..., floor(x)+radius}`.
    ///
    /// Radius 0 is representable (it is meaningful for
    /// [`window_mass_sigma`]) but the smooth rounding kernels reject it.
    pub fn symmetric(radius: u32) -> Self {
        Self {
            shape: WindowShape::Symmetric { radius },
        }
    }

    pub fn appendix_precise() -> Self {
        Self {
            shape: WindowShape::AppendixPrecise,
        }
    }

    /// Radius of a symmetric window, `None` for the four-neighbour variant.
    pub fn radius(self) -> Option<u32> {
        match self.shape {
            WindowShape::Symmetric { radius } => Some(radius),
            WindowShape::AppendixPrecise => None,
        }
    }

    pub fn is_appendix_precise(self) -> bool {
        matches!(self.shape, WindowShape::AppendixPrecise)
    }

    /// Number of integers in the window.
    pub fn len(self) -> usize {
        match self.shape {
            WindowShape::Symmetric { radius } => 2 * radius as usize + 1,
            WindowShape::AppendixPrecise => 4,
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub(crate) fn check_smooth(self) -> Result<()> {
        if self.radius() == Some(0) {
            return Err(Error::InvalidArgument(
                "window radius must be at least 1 for smooth rounding".into(),
            ));
        }
        Ok(())
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::symmetric(Self::DEFAULT_RADIUS)
    }
}

/// A run of consecutive integers `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbors {
    lo: i64,
    hi: i64,
}

impl Neighbors {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "empty neighbour range {lo}..={hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// `center-radius ..= center+radius`.
    pub fn around(center: i64, radius: u32) -> Self {
        let r = i64::from(radius);
        Self {
            lo: center.saturating_sub(r),
            hi: center.saturating_add(r),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }
}

impl IntoIterator for Neighbors {
    type Item = i64;
    type IntoIter = std::ops::RangeInclusive<i64>;

    fn into_iter(self) -> Self::IntoIter {
        self.lo..=self.hi
    }
}

/// How the normalized kernel stabilizes its denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorMode {
    /// `max(denominator, ε)`, applied to the density sum taken relative to
    /// the largest density in the window (so the sum is always ≥ 1 unless ε
    /// is set above 1). Scale-free, valid for any `k`.
    Clamp,
    /// `denominator + ε` on the absolute density sum, as in the reference
    /// `smooth_round_precise`. Biases results toward 0 once the densities
    /// fall below ε, which happens for large `k`.
    Additive,
}

/// Stabilizer for the normalized kernel's denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorFloor {
    epsilon: f64,
    mode: FloorMode,
}

impl DenominatorFloor {
    pub const DEFAULT_EPSILON: f64 = 1e-8;

    pub fn new(epsilon: f64) -> Result<Self> {
        Self::with_mode(epsilon, FloorMode::Clamp)
    }

    pub fn additive(epsilon: f64) -> Result<Self> {
        Self::with_mode(epsilon, FloorMode::Additive)
    }

    pub fn with_mode(epsilon: f64, mode: FloorMode) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "denominator floor must be finite and > 0, got {epsilon}"
            )));
        }
        Ok(Self { epsilon, mode })
    }

    pub fn epsilon(self) -> f64 {
        self.epsilon
    }

    pub fn mode(self) -> FloorMode {
        self.mode
    }
}

impl Default for DenominatorFloor {
    fn default() -> Self {
        Self {
            epsilon: Self::DEFAULT_EPSILON,
            mode: FloorMode::Clamp,
        }
    }
}

/// Nearest integer, ties to even (`2.5 → 2`, `-1.5 → -2`).
pub fn classical_round(x: f64) -> Result<f64> {
    ensure_finite("x", x).map(f64::round_ties_even)
}

fn floor_index(x: f64) -> i64 {
    // saturating float->int cast; beyond 2^53 every double is an integer anyway
    x.floor() as i64
}

/// Integers the kernels sum over at `x`, in ascending order.
pub fn neighbor_window(x: f64, spec: WindowSpec) -> Result<Neighbors> {
    ensure_finite("x", x)?;
    let base = floor_index(x);
    Ok(match spec.shape {
        WindowShape::Symmetric { radius } => Neighbors::around(base, radius),
        WindowShape::AppendixPrecise => Neighbors {
            lo: base.saturating_sub(1),
            hi: base.saturating_add(2),
        },
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelEval {
    pub value: f64,
    pub slope: f64,
    pub clamp_active: bool,
}

pub(crate) fn sigma_sum(x: f64, k: f64, window: &Neighbors, with_slope: bool) -> KernelEval {
    let mut value = 0.0;
    let mut slope = 0.0;
    for n in window.iter() {
        let n = n as f64;
        let rise = k * (x - (n - 0.5));
        let fall = k * (x - (n + 0.5));
        value += n * (logistic(rise) - logistic(fall));
        if with_slope {
            slope += n * (logistic_prime(rise) - logistic_prime(fall));
        }
    }
    KernelEval {
        value,
        slope: k * slope,
        clamp_active: false,
    }
}

/// `(1 + e^{-a})^{-2}`, so that `σ'(u) = e^{-|u|} · tail_factor(|u|)`.
#[inline]
fn tail_factor(a: f64) -> f64 {
    let d = 1.0 + (-a).exp();
    1.0 / (d * d)
}

pub(crate) fn norm_sum(
    x: f64,
    k: f64,
    window: &Neighbors,
    floor: DenominatorFloor,
    with_slope: bool,
) -> KernelEval {
    // Densities are accumulated relative to the peak density in the window:
    // weight_n = ρ_n / ρ_peak = e^{-(a_n - a_min)} · t(a_n) / t(a_min), a = |k(x-n)|.
    // The ratio is scale-free and stays representable when every ρ_n underflows.
    let a_min = window
        .iter()
        .map(|n| (k * (x - n as f64)).abs())
        .fold(f64::INFINITY, f64::min);
    let peak_tail = tail_factor(a_min);

    let (mut num, mut den, mut dnum, mut dden) = (0.0, 0.0, 0.0, 0.0);
    for n in window.iter() {
        let n = n as f64;
        let u = k * (x - n);
        let a = u.abs();
        let w = (a_min - a).exp() * (tail_factor(a) / peak_tail);
        num += n * w;
        den += w;
        if with_slope {
            // ρ'_n / ρ_peak
            let wp = w * k * logistic_skew(u);
            dnum += n * wp;
            dden += wp;
        }
    }

    let eps = floor.epsilon();
    match floor.mode() {
        FloorMode::Clamp => {
            let clamp_active = den < eps;
            let denom = den.max(eps);
            let slope = match (with_slope, clamp_active) {
                (false, _) => 0.0,
                (true, false) => (dnum * den - num * dden) / (den * den),
                (true, true) => dnum / denom,
            };
            KernelEval {
                value: num / denom,
                slope,
                clamp_active,
            }
        }
        FloorMode::Additive => {
            let scale = k * (-a_min).exp() * peak_tail;
            let (num, den) = (scale * num, scale * den);
            let denom = den + eps;
            let slope = if with_slope {
                (scale * dnum * denom - num * scale * dden) / (denom * denom)
            } else {
                0.0
            };
            KernelEval {
                value: num / denom,
                slope,
                clamp_active: den < eps,
            }
        }
    }
}

/// Sigmoid-difference rounding over an explicit set of integers:
/// `Σ n [σ(k(x-(n-½))) - σ(k(x-(n+½)))]`.
pub fn round_sigma_on(x: f64, k: SharpnessK, window: &Neighbors) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(sigma_sum(x, k.get(), window, false).value)
}

/// Sigmoid-difference rounding, summed over `neighbor_window(x, spec)`.
pub fn round_sigma(x: f64, k: SharpnessK, spec: WindowSpec) -> Result<f64> {
    spec.check_smooth()?;
    let window = neighbor_window(x, spec)?;
    round_sigma_on(x, k, &window)
}

/// Normalized-derivative rounding over an explicit set of integers:
/// the `ρ_n`-weighted mean of the window.
pub fn round_norm_on(
    x: f64,
    k: SharpnessK,
    window: &Neighbors,
    floor: DenominatorFloor,
) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(norm_sum(x, k.get(), window, floor, false).value)
}

/// Normalized-derivative rounding `Σ n ρ_n(x) / Σ ρ_n(x)` over
/// `neighbor_window(x, spec)`.
///
/// With [`FloorMode::Clamp`] the result is a convex combination of the window
/// integers.
pub fn round_norm(
    x: f64,
    k: SharpnessK,
    spec: WindowSpec,
    floor: DenominatorFloor,
) -> Result<f64> {
    spec.check_smooth()?;
    let window = neighbor_window(x, spec)?;
    round_norm_on(x, k, &window, floor)
}

pub fn window_mass_sigma_on(x: f64, k: SharpnessK, window: &Neighbors) -> Result<f64> {
    ensure_finite("x", x)?;
    let k = k.get();
    Ok(window
        .iter()
        .map(|n| {
            let n = n as f64;
            logistic(k * (x - (n - 0.5))) - logistic(k * (x - (n + 0.5)))
        })
        .sum())
}

/// Total sigmoid-window mass over the window: `Σ [σ(k(x-(n-½))) - σ(k(x-(n+½)))]`.
///
/// Telescopes to `σ(k(x-(lo-½))) - σ(k(x-(hi+½)))`. Note that
/// `round_sigma(x+1) - round_sigma(x)` equals this mass, not exactly 1.
pub fn window_mass_sigma(x: f64, k: SharpnessK, spec: WindowSpec) -> Result<f64> {
    let window = neighbor_window(x, spec)?;
    window_mass_sigma_on(x, k, &window)
}

/// A configured rounding function: method, sharpness, window and floor.
#[derive(Debug, Clone, Copy)]
pub struct Rounder {
    pub method: MethodKind,
    pub k: SharpnessK,
    pub window: WindowSpec,
    pub floor: DenominatorFloor,
}

impl Rounder {
    pub fn new(method: MethodKind, k: SharpnessK) -> Self {
        Self {
            method,
            k,
            window: WindowSpec::default(),
            floor: DenominatorFloor::default(),
        }
    }

    pub fn with_window(mut self, window: WindowSpec) -> Self {
        self.window = window;
        self
    }

    pub fn with_floor(mut self, floor: DenominatorFloor) -> Self {
        self.floor = floor;
        self
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.method {
            MethodKind::Classical => classical_round(x),
            MethodKind::SigmaDiff => round_sigma(x, self.k, self.window),
            MethodKind::NormDeriv => round_norm(x, self.k, self.window, self.floor),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(v: f64) -> SharpnessK {
        SharpnessK::new(v).unwrap()
    }

    fn sig(z: f64) -> f64 {
        1.0 / (1.0 + (-z).exp())
    }

    // Brute-force wide-window evaluations, written directly from the
    // defining sums and sharing no code with the kernels.
    fn wide_sigma(x: f64, k: f64, radius: i64) -> f64 {
        let f = x.floor() as i64;
        (f - radius..=f + radius)
            .map(|n| {
                let n = n as f64;
                n * (sig(k * (x - n + 0.5)) - sig(k * (x - n - 0.5)))
            })
            .sum()
    }

    fn wide_norm(x: f64, k: f64, radius: i64) -> f64 {
        let f = x.floor() as i64;
        let (mut num, mut den) = (0.0, 0.0);
        for n in f - radius..=f + radius {
            let n = n as f64;
            let s = sig(k * (x - n));
            let r = k * s * (1.0 - s);
            num += n * r;
            den += r;
        }
        num / den
    }

    #[test]
    fn method_names_round_trip() {
        for m in MethodKind::ALL {
            assert_eq!(m.as_str().parse::<MethodKind>().unwrap(), m);
            assert_eq!(m.to_string(), m.as_str());
        }
        assert_eq!(MethodKind::SigmaDiff.as_str(), "sigma-diff");
        assert_eq!(MethodKind::NormDeriv.as_str(), "norm-deriv");
        assert!("round".parse::<MethodKind>().is_err());
        assert!(!MethodKind::Classical.is_smooth());
    }

    #[test]
    fn classical_round_examples() {
        assert_eq!(classical_round(0.4).unwrap(), 0.0);
        assert_eq!(classical_round(2.5).unwrap(), 2.0);
        assert_eq!(classical_round(-1.5).unwrap(), -2.0);
        assert_eq!(classical_round(3.5).unwrap(), 4.0);
        assert_eq!(classical_round(-0.6).unwrap(), -1.0);
        assert!(classical_round(f64::NAN).is_err());
    }

    #[test]
    fn neighbor_window_examples() {
        let w = |x, s| neighbor_window(x, s).unwrap().to_vec();
        assert_eq!(w(0.7, WindowSpec::symmetric(2)), vec![-2, -1, 0, 1, 2]);
        assert_eq!(w(3.0, WindowSpec::symmetric(1)), vec![2, 3, 4]);
        assert_eq!(w(-0.3, WindowSpec::appendix_precise()), vec![-2, -1, 0, 1]);
        assert_eq!(w(-0.3, WindowSpec::symmetric(0)), vec![-1]);
        assert!(neighbor_window(f64::INFINITY, WindowSpec::default()).is_err());
    }

    #[test]
    fn window_sizes() {
        for r in 0..6 {
            let spec = WindowSpec::symmetric(r);
            assert_eq!(neighbor_window(1.3, spec).unwrap().len(), spec.len());
            assert_eq!(spec.len(), 2 * r as usize + 1);
        }
        assert_eq!(WindowSpec::appendix_precise().len(), 4);
        assert_eq!(WindowSpec::default().radius(), Some(2));
    }

    #[test]
    fn neighbors_constructor() {
        assert!(Neighbors::new(3, 2).is_err());
        let n = Neighbors::new(-1, 2).unwrap();
        assert_eq!(n.to_vec(), vec![-1, 0, 1, 2]);
        assert_eq!(n.into_iter().count(), 4);
    }

    #[test]
    fn radius_zero_rejected_for_smooth_kernels() {
        let spec = WindowSpec::symmetric(0);
        assert!(round_sigma(0.2, k(10.0), spec).is_err());
        assert!(round_norm(0.2, k(10.0), spec, DenominatorFloor::default()).is_err());
        assert!(window_mass_sigma(0.2, k(10.0), spec).is_ok());
    }

    #[test]
    fn floor_validation() {
        assert!(DenominatorFloor::new(0.0).is_err());
        assert!(DenominatorFloor::additive(-1e-8).is_err());
        assert!(DenominatorFloor::new(f64::NAN).is_err());
        let d = DenominatorFloor::default();
        assert_eq!(d.epsilon(), 1e-8);
        assert_eq!(d.mode(), FloorMode::Clamp);
    }

    #[test]
    fn round_sigma_examples() {
        let w2 = WindowSpec::symmetric(2);
        let at_zero = round_sigma(0.0, k(10.0), w2).unwrap();
        assert!(at_zero.abs() <= 1e-4);
        assert!((at_zero - wide_sigma(0.0, 10.0, 20)).abs() <= 1e-4);
        assert!(round_sigma(f64::NAN, k(10.0), w2).is_err());
    }

    #[test]
    fn round_sigma_matches_reference_values() {
        // Produced by running the reference numpy loop (`round_sigma_original`, k = 10).
        let frozen = [
            (0.25, 0.07530910257751353),
            (-0.3, -0.11887373157514182),
            (0.5, 0.49999999381672605),
            (0.7, 0.881126253194866),
            (1.3, 1.118873700000125),
            (-2.6, -2.7311652766274115),
        ];
        for (x, expected) in frozen {
            let got = round_sigma(x, k(10.0), WindowSpec::default()).unwrap();
            assert!((got - expected).abs() <= 1e-12, "x={x}: {got} vs {expected}");
        }
    }

    #[test]
    fn round_norm_matches_reference_values() {
        // `round_sigma_derivative_normalized`, k = 10
        let frozen = [
            (0.25, 0.007766724923385529),
            (-0.3, -0.01970188259965775),
            (0.5, 0.49999999738882744),
            (0.7, 0.9802981174003422),
            (1.3, 1.0197018779811895),
            (-2.6, -2.877502076127554),
        ];
        for (x, expected) in frozen {
            let got = round_norm(x, k(10.0), WindowSpec::default(), DenominatorFloor::default())
                .unwrap();
            assert!((got - expected).abs() <= 1e-12, "x={x}: {got} vs {expected}");
        }
        // `smooth_round_precise`, k = 10: four neighbours, additive 1e-8
        let frozen_precise = [
            (0.25, 0.007766729620910901),
            (-0.3, -0.01970188205064231),
            (0.5, 0.4999999623967559),
            (0.7, 0.980298096252293),
            (1.3, 1.0197018603535721),
            (-2.6, -2.8775019292022854),
        ];
        let additive = DenominatorFloor::additive(1e-8).unwrap();
        for (x, expected) in frozen_precise {
            let got = round_norm(x, k(10.0), WindowSpec::appendix_precise(), additive).unwrap();
            assert!((got - expected).abs() <= 1e-12, "x={x}: {got} vs {expected}");
        }
    }

    #[test]
    fn round_norm_examples() {
        let w2 = WindowSpec::symmetric(2);
        let fl = DenominatorFloor::default();
        assert!((round_norm(3.0, k(10.0), w2, fl).unwrap() - 3.0).abs() <= 1e-12);

        // mirror-image windows centred at n
        for n in [-2i64, 0, 4] {
            let win = Neighbors::around(n, 2);
            let nf = n as f64;
            let up = round_norm_on(nf + 0.3, k(10.0), &win, fl).unwrap() - nf;
            let down = round_norm_on(nf - 0.3, k(10.0), &win, fl).unwrap() - nf;
            assert!((up + down).abs() <= 1e-12, "n={n}: {up} {down}");
        }

        let wide = wide_norm(0.25, 10.0, 20);
        assert!((round_norm(0.25, k(10.0), w2, fl).unwrap() - wide).abs() <= 1e-6);
        assert!(round_norm(f64::NEG_INFINITY, k(10.0), w2, fl).is_err());
    }

    #[test]
    fn round_norm_survives_large_k() {
        let fl = DenominatorFloor::default();
        for kv in [1e3, 1e4, 1e6] {
            for (x, r) in [(0.8, 1.0), (0.3, 0.0), (-1.7, -2.0), (4.45, 4.0)] {
                let v = round_norm(x, k(kv), WindowSpec::default(), fl).unwrap();
                assert!((v - r).abs() <= 1e-12, "k={kv} x={x}: {v}");
            }
        }
    }

    #[test]
    fn additive_floor_collapses_at_large_k() {
        // documented behaviour of the reference's additive stabilizer
        let additive = DenominatorFloor::additive(1e-8).unwrap();
        let v = round_norm(0.8, k(1000.0), WindowSpec::appendix_precise(), additive).unwrap();
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn window_mass_examples() {
        let w2 = WindowSpec::symmetric(2);
        let m0 = window_mass_sigma(0.0, k(10.0), w2).unwrap();
        assert!((m0 - 1.0).abs() <= 3e-11);
        assert!((m0 - (sig(25.0) - sig(-25.0))).abs() <= 1e-15);
        let m = window_mass_sigma(0.5, k(10.0), w2).unwrap();
        assert!((m - (sig(30.0) - sig(-20.0))).abs() <= 1e-15);
        for x in [-1.4f64, 0.2, 3.9] {
            let n = x.floor();
            let one = window_mass_sigma(x, k(10.0), WindowSpec::symmetric(0)).unwrap();
            let direct = sig(10.0 * (x - n + 0.5)) - sig(10.0 * (x - n - 0.5));
            assert!((one - direct).abs() <= 1e-15);
        }
    }

    #[test]
    fn sigma_shift_differs_from_one_by_window_mass() {
        // round_sigma is not normalized: the shift by one integer adds the
        // window mass, which falls short of 1 by the two endpoint tails.
        let w2 = WindowSpec::symmetric(2);
        for kv in [1.0, 10.0, 100.0] {
            for x in [0.13, 0.49, 0.77, -2.21, 3.6] {
                let step = round_sigma(x + 1.0, k(kv), w2).unwrap() - round_sigma(x, k(kv), w2).unwrap();
                let mass = window_mass_sigma(x, k(kv), w2).unwrap();
                assert!((step - mass).abs() <= 1e-12, "k={kv} x={x}");
            }
        }
    }

    #[test]
    fn round_norm_shift_equivariant() {
        let fl = DenominatorFloor::default();
        for kv in [1.0, 10.0, 100.0] {
            for x in [0.13, 0.49, 0.77, -2.21, 3.6] {
                let a = round_norm(x + 1.0, k(kv), WindowSpec::default(), fl).unwrap();
                let b = round_norm(x, k(kv), WindowSpec::default(), fl).unwrap();
                assert!((a - b - 1.0).abs() <= 1e-10, "k={kv} x={x}");
            }
        }
    }

    #[test]
    fn integer_fixed_points() {
        let fl = DenominatorFloor::default();
        for n in -5..=5 {
            for kv in [1.0, 10.0, 100.0] {
                for r in [2, 3] {
                    let v = round_norm(n as f64, k(kv), WindowSpec::symmetric(r), fl).unwrap();
                    assert!((v - n as f64).abs() <= 1e-12, "n={n} k={kv} W={r}: {v}");
                }
            }
        }
    }

    #[test]
    fn truncation_decay_norm() {
        let fl = DenominatorFloor::default();
        for kv in [10.0, 30.0, 100.0] {
            for i in 0..=400 {
                let x = -5.0 + i as f64 * 0.025;
                let short = round_norm(x, k(kv), WindowSpec::symmetric(2), fl).unwrap();
                let long = round_norm(x, k(kv), WindowSpec::symmetric(10), fl).unwrap();
                assert!((short - long).abs() <= 1e-6, "k={kv} x={x}");
            }
        }
    }

    #[test]
    fn rounder_dispatch() {
        let r = Rounder::new(MethodKind::NormDeriv, k(10.0));
        assert_eq!(
            r.eval(0.3).unwrap(),
            round_norm(0.3, k(10.0), WindowSpec::default(), DenominatorFloor::default()).unwrap()
        );
        let c = Rounder::new(MethodKind::Classical, k(10.0));
        assert_eq!(c.eval(2.5).unwrap(), 2.0);
        let s = Rounder::new(MethodKind::SigmaDiff, k(3.0)).with_window(WindowSpec::symmetric(4));
        assert_eq!(
            s.eval(-0.7).unwrap(),
            round_sigma(-0.7, k(3.0), WindowSpec::symmetric(4)).unwrap()
        );
    }

    fn k_choice() -> impl Strategy<Value = f64> {
        prop_oneof![Just(1.0), Just(10.0), Just(100.0)]
    }

    fn away_from_half(x: f64, d: f64) -> bool {
        (x - x.floor() - 0.5).abs() >= d
    }

    proptest! {
        #[test]
        fn telescoping_partition(x in -10.0f64..10.0, kv in k_choice(), r in 0u32..5) {
            let spec = WindowSpec::symmetric(r);
            let win = neighbor_window(x, spec).unwrap();
            let (a, b) = (win.lo() as f64, win.hi() as f64);
            let closed = sig(kv * (x - (a - 0.5))) - sig(kv * (x - (b + 0.5)));
            let mass = window_mass_sigma(x, k(kv), spec).unwrap();
            prop_assert!((mass - closed).abs() <= 1e-12);
        }

        #[test]
        fn norm_is_convex_combination(
            x in -20.0f64..20.0,
            kv in 0.01f64..2000.0,
            r in 1u32..6,
            precise in any::<bool>(),
        ) {
            let spec = if precise { WindowSpec::appendix_precise() } else { WindowSpec::symmetric(r) };
            let win = neighbor_window(x, spec).unwrap();
            let v = round_norm(x, k(kv), spec, DenominatorFloor::default()).unwrap();
            prop_assert!(v >= win.lo() as f64 && v <= win.hi() as f64, "{} not in window", v);
        }

        #[test]
        fn norm_antisymmetric_about_integers(n in -6i64..6, t in 1e-6f64..=0.5, kv in 0.5f64..200.0, r in 1u32..5) {
            let win = Neighbors::around(n, r);
            let fl = DenominatorFloor::default();
            let up = round_norm_on(n as f64 + t, k(kv), &win, fl).unwrap();
            let down = round_norm_on(n as f64 - t, k(kv), &win, fl).unwrap();
            prop_assert!((up + down - 2.0 * n as f64).abs() <= 1e-10);
        }

        #[test]
        fn norm_shift_equivariance(x in -8.0f64..8.0, kv in 0.5f64..500.0) {
            prop_assume!(away_from_half(x, 1e-9));
            let fl = DenominatorFloor::default();
            let a = round_norm(x + 1.0, k(kv), WindowSpec::default(), fl).unwrap();
            let b = round_norm(x, k(kv), WindowSpec::default(), fl).unwrap();
            prop_assert!((a - b - 1.0).abs() <= 1e-10);
        }

        #[test]
        fn pointwise_convergence_at_high_k(x in -6.0f64..6.0) {
            prop_assume!(away_from_half(x, 0.05));
            let kk = k(1000.0);
            let target = classical_round(x).unwrap();
            let s = round_sigma(x, kk, WindowSpec::default()).unwrap();
            let nv = round_norm(x, kk, WindowSpec::default(), DenominatorFloor::default()).unwrap();
            prop_assert!((s - target).abs() <= 1e-6);
            prop_assert!((nv - target).abs() <= 1e-6);
            prop_assert!((s - wide_sigma(x, 1000.0, 10)).abs() <= 1e-6);
        }
    }
}
