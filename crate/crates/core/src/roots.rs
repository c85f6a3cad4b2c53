//! Bracketed scalar root finding.

use alloc::vec::Vec;

/// Brent's method on a bracket `[a, b]` with `fa`, `fb` of opposite sign.
///
/// `+inf` values are allowed (they count as positive); the solver bisects
/// until both ends are finite before trusting interpolation.
pub fn brent(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: f64,
) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa.signum() != fb.signum(), "root not bracketed");
    while !(fa.is_finite() && fb.is_finite()) && (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    if !(fa.is_finite() && fb.is_finite()) {
        return 0.5 * (a + b);
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            // fall back to bisection towards c
            b = 0.5 * (a + c);
            fb = f(b);
            d = b - a;
            e = d;
        }
    }
    b
}

/// All sign changes of `f` on `[a, b]`, located by sampling at `samples + 1`
/// equispaced points and polishing each bracket with [`brent`].
///
/// Roots of even multiplicity between samples are not detected.
pub fn roots_on_interval(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    samples: usize,
    xtol: f64,
) -> Vec<f64> {
    let samples = samples.max(1);
    let mut out = Vec::new();
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=samples {
        let x1 = if i == samples {
            b
        } else {
            a + (b - a) * i as f64 / samples as f64
        };
        let f1 = f(x1);
        if f0 == 0.0 {
            if out.last().is_none_or(|&r| r != x0) {
                out.push(x0);
            }
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            out.push(brent(&mut f, x0, x1, f0, f1, xtol));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 && out.last().is_none_or(|&r| r != x0) {
        out.push(x0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn brent_finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, -2.0, 2.0, 1e-15);
        assert!((r - math::sqrt(2.0)).abs() < 1e-14);
        let r = brent(math::cos, 0.0, 3.0, 1.0, math::cos(3.0), 1e-15);
        assert!((r - 0.5 * math::PI).abs() < 1e-14);
    }

    #[test]
    fn brent_tolerates_infinite_end() {
        let f = |x: f64| if x > 1.5 { f64::INFINITY } else { x - 1.2 };
        let r = brent(f, 0.0, 4.0, -1.2, f64::INFINITY, 1e-15);
        assert!((r - 1.2).abs() < 1e-13);
    }

    #[test]
    fn several_roots() {
        let roots = roots_on_interval(math::sin, 0.5, 10.0, 40, 1e-14);
        assert_eq!(roots.len(), 3);
        for (i, r) in roots.iter().enumerate() {
            assert!((r - (i + 1) as f64 * math::PI).abs() < 1e-12);
        }
    }
}
