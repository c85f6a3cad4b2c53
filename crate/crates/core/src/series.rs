//! Sample grids, finite differences and monotonicity verdicts.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// `count` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(Error::InvalidSpec(
            "grid needs 0 < lo < hi and at least 2 points",
        ));
    }
    let ratio = math::ln(hi / lo) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count)
        .map(|i| lo * math::exp(ratio * i as f64))
        .collect();
    out[count - 1] = hi;
    Ok(out)
}

/// `lo, lo r, lo r^2, ...` up to `hi` (appended if not hit exactly).
pub fn geometric_ratio_grid(lo: f64, hi: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && ratio > 1.0) {
        return Err(Error::InvalidSpec("grid needs 0 < lo < hi and ratio > 1"));
    }
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let s = lo * math::powi(ratio, i);
        if s > hi * (1.0 + 1e-12) {
            break;
        }
        out.push(s);
        i += 1;
    }
    if (out[out.len() - 1] - hi).abs() > 1e-12 * hi {
        out.push(hi);
    } else {
        let last = out.len() - 1;
        out[last] = hi;
    }
    Ok(out)
}

/// The default scale grid: ratio `2^(1/8)` from `1e-3` to `1`.
pub fn default_scale_grid() -> Vec<f64> {
    geometric_ratio_grid(1e-3, 1.0, math::powf(2.0, 0.125)).expect("static grid")
}

/// Five-point central difference `f'(x)` with step `h`.
pub fn derivative5(mut f: impl FnMut(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let a = f(x + h)?;
    let b = f(x - h)?;
    let c = f(x + 2.0 * h)?;
    let d = f(x - 2.0 * h)?;
    Ok((8.0 * (a - b) - (c - d)) / (12.0 * h))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Monotone,
    /// First sample pair (by largest violation) that breaks monotonicity.
    Violation {
        index: usize,
        excess: f64,
    },
}

impl Verdict {
    pub fn is_monotone(&self) -> bool {
        matches!(self, Verdict::Monotone)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

/// Checks `values` for monotonicity allowing `slack` per step.
pub fn monotone_verdict(values: &[f64], direction: Direction, slack: f64) -> Verdict {
    let mut worst: Option<(usize, f64)> = None;
    for (i, w) in values.windows(2).enumerate() {
        let step = match direction {
            Direction::Nondecreasing => w[0] - w[1],
            Direction::Nonincreasing => w[1] - w[0],
        };
        if (step > slack || step.is_nan()) && worst.is_none_or(|(_, e)| step > e) {
            worst = Some((i, step));
        }
    }
    match worst {
        None => Verdict::Monotone,
        Some((index, excess)) => Verdict::Violation { index, excess },
    }
}

/// Largest minus smallest entry.
pub fn range(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// A sampled scale or time series with its identity checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonotoneSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Closed-form derivative (boundary flux, `-dissipation + excess`, ...).
    pub derivative: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl MonotoneSeries {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `|a - b| / (1 + |b|)`.
pub fn mixed_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// `|a - b| / max(|b|, 1)`: relative, with an absolute floor for values
/// that vanish.
pub fn relative_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_scale_grid();
        assert_eq!(g[0], 1e-3);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let r = g[1] / g[0];
        assert!((r - math::powf(2.0, 0.125)).abs() < 1e-12);
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(1e-3, 1.0, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[63], 1.0);
        assert!(geometric_grid(0.0, 1.0, 5).is_err());
    }

    #[test]
    fn derivative_of_cubic_is_exact() {
        let d = derivative5(|x| Ok(x * x * x - 2.0 * x), 0.7, 0.01).unwrap();
        assert!((d - (3.0 * 0.49 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn verdicts() {
        assert!(monotone_verdict(&[1.0, 1.0, 2.0], Direction::Nondecreasing, 0.0).is_monotone());
        let v = monotone_verdict(&[1.0, 0.5, 0.9, 0.1], Direction::Nondecreasing, 0.0);
        assert!(matches!(v, Verdict::Violation { index: 2, .. }));
        assert!(monotone_verdict(&[3.0, 2.0], Direction::Nonincreasing, 0.0).is_monotone());
        assert!(monotone_verdict(&[1.0, 1.0 - 1e-9], Direction::Nondecreasing, 1e-8).is_monotone());
    }
}
