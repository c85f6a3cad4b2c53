//! One-dimensional Gauss rules.

use alloc::vec::Vec;

use crate::math::{self, PI};

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Legendre rule on `[-1, 1]` with `n` nodes, from Newton iteration
    /// on the three-term recurrence.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut z = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_eval(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_eval(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Gauss–Hermite rule for `int f(x) exp(-x^2) dx` with `n` nodes.
    pub fn hermite(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let pim4 = math::powf(PI, -0.25);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..half {
            // initial guesses follow the classical asymptotic placement
            z = match i {
                0 => math::sqrt(2.0 * nf + 1.0) - 1.85575 * math::powf(2.0 * nf + 1.0, -1.0 / 6.0),
                1 => z - 1.14 * math::powf(nf, 0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[n - 1],
                3 => 1.91 * z - 0.91 * nodes[n - 2],
                _ => 2.0 * z - nodes[n + 1 - i],
            };
            let mut pp = 0.0;
            for _ in 0..200 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * math::sqrt(2.0 / (jf + 1.0)) * p2 - math::sqrt(jf / (jf + 1.0)) * p3;
                }
                pp = math::sqrt(2.0 * nf) * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= 3e-16 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[n - 1 - i] = z;
            nodes[i] = -z;
            let w = 2.0 / (pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped from `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_eval(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
    }
    let dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in 1..=16 {
            let rule = GaussRule::legendre(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            // x^(2n-2) is the highest even power integrated exactly
            let p = 2 * n - 2;
            let exact = 2.0 / (p as f64 + 1.0);
            let got = rule.integrate(-1.0, 1.0, |x| math::powi(x, p as i32));
            assert!((got - exact).abs() < 1e-13, "n={n} got {got}");
        }
    }

    #[test]
    fn legendre_mapped_interval() {
        let rule = GaussRule::legendre(8);
        let got = rule.integrate(0.0, PI, math::sin);
        assert!((got - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_moments() {
        for n in [1usize, 2, 5, 10, 20, 32, 40] {
            let rule = GaussRule::hermite(n);
            let m0: f64 = rule.weights.iter().sum();
            assert!((m0 - math::sqrt(PI)).abs() < 1e-12, "n={n}");
            if n >= 2 {
                let m2: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x * x)
                    .sum();
                assert!((m2 - 0.5 * math::sqrt(PI)).abs() < 1e-12, "n={n}");
            }
        }
    }
}
