//! Level curves `{g o embed = c}` on two-dimensional patches.
//!
//! The parameter box is refined like the sub-level integrator until, in
//! every cell the curve passes through, `g o embed` is strictly monotone
//! along one axis. Inside such a cell the curve is a graph `h(b)` over the
//! other axis, evaluated pointwise by root solving, so both the extracted
//! polyline vertices and the line-integral nodes lie on the level set to
//! solver precision.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::patch::{Patch, PatchPoint};
use crate::quadrature::{
    axis_scores, classify, pick_axis, sample_points, Quadrature, QuadratureSpec, Side,
};
use crate::roots;
use crate::rules::GaussRule;
use crate::vector::RealVec;

/// Smallest parameter-space gradient accepted on a level set.
pub const REGULAR_FLOOR: f64 = 1e-10;

/// Straight segments in parameter space whose endpoints lie on `{g = c}`.
#[derive(Clone, Debug, Default)]
pub struct LevelPolyline {
    pub segments: Vec<(RealVec, RealVec)>,
}

impl LevelPolyline {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// A piece of the level curve that is a graph over axis `b` for
/// `b in [b0, b1]`, with height axis `h` confined to the cell.
#[derive(Clone, Copy, Debug)]
struct Arc {
    lo: RealVec,
    hi: RealVec,
    h: usize,
    b: usize,
    b0: f64,
    b1: f64,
}

struct Tracer<'a> {
    patch: &'a dyn Patch,
    g: &'a dyn ScalarField,
    c: f64,
    spec: &'a QuadratureSpec,
    rule: GaussRule,
    arcs: Vec<Arc>,
}

impl Tracer<'_> {
    fn eval(&self, u: &RealVec) -> f64 {
        self.g.value(&self.patch.embed(u)) - self.c
    }

    fn process(&mut self, lo: RealVec, hi: RealVec, depth: usize) -> Result<()> {
        let pts = sample_points(2, &self.rule, &lo, &hi);
        let xs: Vec<RealVec> = pts.iter().map(|u| self.patch.embed(u)).collect();
        let vals: Vec<f64> = xs.iter().map(|x| self.g.value(x) - self.c).collect();
        if classify(&vals, true) != Side::Crossing {
            return Ok(());
        }
        let axis =
            axis_scores(self.patch, self.g, &lo, &hi, &pts, &xs).and_then(|s| pick_axis(&s, 2));
        match axis {
            Some(h) => self.split_arcs(lo, hi, h),
            None if depth < self.spec.refinement_depth => {
                let mid = (lo + hi) * 0.5;
                for mask in 0..4usize {
                    let mut clo = lo;
                    let mut chi = hi;
                    for a in 0..2 {
                        if mask & (1 << a) != 0 {
                            clo[a] = mid[a];
                        } else {
                            chi[a] = mid[a];
                        }
                    }
                    self.process(clo, chi, depth + 1)?;
                }
                Ok(())
            }
            None => {
                let gradient_norm = pts
                    .iter()
                    .zip(&xs)
                    .map(|(u, x)| {
                        PatchPoint::at(self.patch, u)
                            .map(|p| p.pullback(&self.g.gradient(x)).norm())
                            .unwrap_or(0.0)
                    })
                    .fold(f64::INFINITY, f64::min);
                Err(Error::RegularValue { gradient_norm })
            }
        }
    }

    fn split_arcs(&mut self, lo: RealVec, hi: RealVec, h: usize) -> Result<()> {
        let b = 1 - h;
        let xtol = 1e-15 * (hi[b] - lo[b]);
        let mut breaks = alloc::vec![lo[b], hi[b]];
        for face in [lo[h], hi[h]] {
            let rs = roots::roots_on_interval(
                |t| {
                    let mut u = lo;
                    u[h] = face;
                    u[b] = t;
                    self.eval(&u)
                },
                lo[b],
                hi[b],
                self.rule.len(),
                xtol,
            );
            breaks.extend(rs);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() <= xtol);
        for w in breaks.windows(2) {
            let (b0, b1) = (w[0], w[1]);
            if b1 - b0 <= xtol {
                continue;
            }
            let mut u = lo;
            u[b] = 0.5 * (b0 + b1);
            let g0 = self.eval(&u);
            u[h] = hi[h];
            let g1 = self.eval(&u);
            if (g0 < 0.0) != (g1 < 0.0) {
                self.arcs.push(Arc {
                    lo,
                    hi,
                    h,
                    b,
                    b0,
                    b1,
                });
            }
        }
        Ok(())
    }

    /// Point of the arc above base coordinate `t`.
    fn point(&self, arc: &Arc, t: f64) -> RealVec {
        let mut u = arc.lo;
        u[arc.b] = t;
        let at = |s: f64| {
            let mut v = u;
            v[arc.h] = s;
            v
        };
        let (h0, h1) = (arc.lo[arc.h], arc.hi[arc.h]);
        let g0 = self.eval(&at(h0));
        let g1 = self.eval(&at(h1));
        let s = if g0 == 0.0 {
            h0
        } else if g1 == 0.0 || (g0 < 0.0) == (g1 < 0.0) {
            // only at arc ends, where the root sits on a face
            if g0.abs() <= g1.abs() {
                h0
            } else {
                h1
            }
        } else {
            roots::brent(|s| self.eval(&at(s)), h0, h1, g0, g1, 1e-15 * (h1 - h0))
        };
        at(s)
    }

    fn arc_integral(
        &self,
        arc: &Arc,
        (b0, b1): (f64, f64),
        rule: &GaussRule,
        integrand: &dyn Fn(&PatchPoint) -> f64,
    ) -> Result<f64> {
        let mut sum = 0.0;
        for (t, w) in rule.mapped(b0, b1) {
            let u = self.point(arc, t);
            let p = PatchPoint::at(self.patch, &u)?;
            let grad_u = p.pullback(&self.g.gradient(&p.x));
            if grad_u.norm() <= REGULAR_FLOOR {
                return Err(Error::RegularValue {
                    gradient_norm: grad_u.norm(),
                });
            }
            let slope = -grad_u[arc.b] / grad_u[arc.h];
            let tangent = p.frame.row(arc.b).axpy(slope, p.frame.row(arc.h));
            sum += w * integrand(&p) * tangent.norm();
        }
        Ok(sum)
    }

    /// Integral over `[b0, b1]` of the arc, bisected until the order `n`
    /// and `n - 1` rules agree to `budget` (scaled by the piece length).
    /// Returns `(value, error estimate)`.
    #[allow(clippy::too_many_arguments)]
    fn arc_adaptive(
        &self,
        arc: &Arc,
        (b0, b1): (f64, f64),
        rule_lo: &GaussRule,
        integrand: &dyn Fn(&PatchPoint) -> f64,
        budget: f64,
        depth: usize,
    ) -> Result<(f64, f64)> {
        let q = self.arc_integral(arc, (b0, b1), &self.rule, integrand)?;
        let q_lo = self.arc_integral(arc, (b0, b1), rule_lo, integrand)?;
        let est = (q - q_lo).abs();
        let share = budget * (b1 - b0) / (arc.b1 - arc.b0);
        if est <= share || depth >= self.spec.refinement_depth {
            return Ok((q, est));
        }
        let mid = 0.5 * (b0 + b1);
        let (a, ea) = self.arc_adaptive(arc, (b0, mid), rule_lo, integrand, budget, depth + 1)?;
        let (b, eb) = self.arc_adaptive(arc, (mid, b1), rule_lo, integrand, budget, depth + 1)?;
        Ok((a + b, ea + eb))
    }
}

fn trace<'a>(
    patch: &'a dyn Patch,
    g: &'a dyn ScalarField,
    c: f64,
    spec: &'a QuadratureSpec,
) -> Result<Tracer<'a>> {
    spec.validate()?;
    if patch.k() != 2 {
        return Err(Error::UnsupportedDimension(patch.k()));
    }
    let mut tr = Tracer {
        patch,
        g,
        c,
        spec,
        rule: GaussRule::legendre(spec.order),
        arcs: Vec::new(),
    };
    let dom = patch.domain();
    let n = spec.cells_per_axis;
    for i in 0..n {
        for j in 0..n {
            let mut lo = dom.lo;
            let mut hi = dom.hi;
            for (a, idx) in [(0, i), (1, j)] {
                let w = dom.width(a) / n as f64;
                lo[a] = dom.lo[a] + w * idx as f64;
                hi[a] = if idx + 1 == n {
                    dom.hi[a]
                } else {
                    dom.lo[a] + w * (idx + 1) as f64
                };
            }
            tr.process(lo, hi, 0)?;
        }
    }
    Ok(tr)
}

/// Polyline approximation of `{g o embed = c}`; every vertex is on the level
/// set to root-solver precision.
pub fn extract_level_polyline(
    patch: &dyn Patch,
    g: &dyn ScalarField,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<LevelPolyline> {
    let tr = trace(patch, g, c, spec)?;
    let pieces = spec.order;
    let mut segments = Vec::with_capacity(tr.arcs.len() * pieces);
    for arc in &tr.arcs {
        let mut prev = tr.point(arc, arc.b0);
        for i in 1..=pieces {
            let t = arc.b0 + (arc.b1 - arc.b0) * i as f64 / pieces as f64;
            let next = tr.point(arc, t);
            segments.push((prev, next));
            prev = next;
        }
    }
    Ok(LevelPolyline { segments })
}

/// `int_{g o embed = c} integrand ds`, arclength induced by the immersion.
pub fn integrate_level_curve(
    patch: &dyn Patch,
    g: &dyn ScalarField,
    c: f64,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let tr = trace(patch, g, c, spec)?;
    let rule_lo = GaussRule::legendre(spec.order - 1);
    let mut value = 0.0;
    let mut bound = 0.0;
    let mut magnitude = 0.0;
    let budget = 0.25 * spec.tolerance / tr.arcs.len().max(1) as f64;
    for arc in &tr.arcs {
        let (q, est) = tr.arc_adaptive(arc, (arc.b0, arc.b1), &rule_lo, integrand, budget, 0)?;
        value += q;
        magnitude += q.abs();
        bound += est;
    }
    let bound = bound + 1e-15 * magnitude;
    if bound > spec.tolerance {
        return Err(Error::ToleranceNotMet {
            bound,
            tolerance: spec.tolerance,
        });
    }
    Ok(Quadrature {
        value,
        error_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SquaredDistance;
    use crate::math::PI;

    #[test]
    fn circle_circumference() {
        let disk = crate::catalog::unit_disk();
        let g = SquaredDistance::origin(3);
        for r in [0.1, 0.37, 0.5, 0.9] {
            let q = integrate_level_curve(&disk, &g, r * r, &|_| 1.0, &QuadratureSpec::default())
                .unwrap();
            assert!((q.value - 2.0 * PI * r).abs() < 1e-6, "r={r}: {}", q.value);
            let q = integrate_level_curve(
                &disk,
                &g,
                r * r,
                &|p| p.x.norm(),
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!((q.value - 2.0 * PI * r * r).abs() < 1e-6);
        }
    }

    #[test]
    fn polyline_vertices_on_level() {
        let disk = crate::catalog::unit_disk();
        let g = SquaredDistance {
            centre: RealVec::from_slice(&[0.1, -0.2, 0.0]),
        };
        let line = extract_level_polyline(&disk, &g, 0.3, &QuadratureSpec::default()).unwrap();
        assert!(!line.is_empty());
        for (a, b) in &line.segments {
            for u in [a, b] {
                let v = g.value(&disk.embed(u)) - 0.3;
                assert!(v.abs() <= 1e-10, "{v}");
            }
        }
    }

    #[test]
    fn critical_level_is_rejected() {
        let disk = crate::catalog::unit_disk();
        // saddle of x^2 - y^2 at the origin with level 0
        let g = crate::field::FnField {
            value: |x: &RealVec| x[0] * x[0] - x[1] * x[1],
            gradient: |x: &RealVec| RealVec::from_slice(&[2.0 * x[0], -2.0 * x[1], 0.0]),
        };
        let err = integrate_level_curve(&disk, &g, 0.0, &|_| 1.0, &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::RegularValue { .. })), "{err:?}");
    }
}
