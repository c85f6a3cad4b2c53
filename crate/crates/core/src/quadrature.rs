//! Quadrature over parametric patches and over star-shaped regions of `R^m`.
//!
//! Sub-level and band regions `{g < c}` are integrated with tensor Gauss
//! rules on a uniform cell grid. Cells crossed by a level set are refined
//! dyadically until the level set is a graph over the remaining axes, and
//! then integrated exactly along the height direction: the crossing point on
//! every height line is found by root solving, and for surfaces the base
//! interval is split where the level set meets the cell faces. The result is
//! high-order accurate and depends smoothly on the level value, which the
//! finite-difference identity checks rely on.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::math::{self, PI};
use crate::patch::{ParamBox, Patch, PatchPoint, MAX_K};
use crate::roots;
use crate::rules::GaussRule;
use crate::vector::RealVec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub cells_per_axis: usize,
    /// Gauss points per axis in each cell.
    pub order: usize,
    /// Maximum dyadic refinement depth below the base grid.
    pub refinement_depth: usize,
    /// Absolute error bound the integrator must certify.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            cells_per_axis: 16,
            order: 8,
            refinement_depth: 12,
            tolerance: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.cells_per_axis < 1 {
            return Err(Error::InvalidSpec("cells_per_axis must be >= 1"));
        }
        if !(2..=10).contains(&self.order) {
            return Err(Error::InvalidSpec("order must lie in 2..=10"));
        }
        if self.refinement_depth > 12 {
            return Err(Error::InvalidSpec("refinement_depth must be <= 12"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidSpec("tolerance must be positive"));
        }
        Ok(())
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells_per_axis = cells;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// A quadrature value together with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_bound: f64,
}

/// One side of a level set: `{field < level}` or `{field >= level}`.
#[derive(Clone, Copy)]
pub struct Level<'a> {
    pub field: &'a dyn ScalarField,
    pub level: f64,
}

impl<'a> Level<'a> {
    pub fn new(field: &'a dyn ScalarField, level: f64) -> Self {
        Self { field, level }
    }
}

/// Region of ambient space: inside `below` (if given) and outside
/// `not_below` (if given). `{a <= g < b}` is `below = (g, b)`,
/// `not_below = (g, a)`.
#[derive(Clone, Copy, Default)]
pub struct Region<'a> {
    pub below: Option<Level<'a>>,
    pub not_below: Option<Level<'a>>,
}

impl<'a> Region<'a> {
    pub fn everything() -> Self {
        Self::default()
    }

    pub fn sublevel(field: &'a dyn ScalarField, level: f64) -> Self {
        Self {
            below: Some(Level::new(field, level)),
            not_below: None,
        }
    }

    pub fn band(field: &'a dyn ScalarField, lo: f64, hi: f64) -> Self {
        Self {
            below: Some(Level::new(field, hi)),
            not_below: Some(Level::new(field, lo)),
        }
    }

    /// `{outer < 0} \ {inner < 0}` for two different fields.
    pub fn between(outer: Level<'a>, inner: Level<'a>) -> Self {
        Self {
            below: Some(outer),
            not_below: Some(inner),
        }
    }

    fn constraints(&self) -> Vec<Constraint<'a>> {
        let mut out = Vec::with_capacity(2);
        if let Some(l) = self.below {
            out.push(Constraint {
                field: l.field,
                level: l.level,
                want_negative: true,
            });
        }
        if let Some(l) = self.not_below {
            out.push(Constraint {
                field: l.field,
                level: l.level,
                want_negative: false,
            });
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Constraint<'a> {
    field: &'a dyn ScalarField,
    level: f64,
    want_negative: bool,
}

impl Constraint<'_> {
    fn eval(&self, x: &RealVec) -> f64 {
        self.field.value(x) - self.level
    }

    fn holds(&self, v: f64) -> bool {
        if self.want_negative {
            v < 0.0
        } else {
            v >= 0.0
        }
    }
}

/// `int_{u : g(embed(u)) < c} integrand * dA`.
pub fn integrate_sublevel(
    patch: &dyn Patch,
    g: &dyn ScalarField,
    c: f64,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    integrate_region(patch, &Region::sublevel(g, c), integrand, spec)
}

/// Integral of `integrand * dA` over the part of the patch inside `region`.
pub fn integrate_region(
    patch: &dyn Patch,
    region: &Region<'_>,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    integrate_region_on(patch, &patch.domain(), region, integrand, spec)
}

/// As [`integrate_region`], restricted to a sub-box of the parameter domain.
pub fn integrate_region_on(
    patch: &dyn Patch,
    bbox: &ParamBox,
    region: &Region<'_>,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    spec.validate()?;
    let k = patch.k();
    if k == 0 || k > MAX_K {
        return Err(Error::UnsupportedDimension(k));
    }
    bbox.lo.check_dim(k)?;
    let mut it = CellIntegrator {
        patch,
        constraints: region.constraints(),
        integrand,
        spec,
        rule: GaussRule::legendre(spec.order),
        rule_lo: GaussRule::legendre(spec.order - 1),
        k,
        box_volume: bbox.volume(),
        value: 0.0,
        bound: 0.0,
        magnitude: 0.0,
    };
    let n = spec.cells_per_axis;
    for_each_index(k, n, |idx| {
        let mut lo = bbox.lo;
        let mut hi = bbox.hi;
        for a in 0..k {
            let w = bbox.width(a) / n as f64;
            lo[a] = bbox.lo[a] + w * idx[a] as f64;
            hi[a] = if idx[a] + 1 == n {
                bbox.hi[a]
            } else {
                bbox.lo[a] + w * (idx[a] + 1) as f64
            };
        }
        it.process(lo, hi, 0)
    })?;
    let bound = it.bound + 1e-15 * it.magnitude;
    if bound > spec.tolerance {
        return Err(Error::ToleranceNotMet {
            bound,
            tolerance: spec.tolerance,
        });
    }
    Ok(Quadrature {
        value: it.value,
        error_bound: bound,
    })
}

/// Calls `f` for every multi-index in `{0..n}^k`, stopping at the first error.
pub(crate) fn for_each_index(
    k: usize,
    n: usize,
    mut f: impl FnMut(&[usize; MAX_K]) -> Result<()>,
) -> Result<()> {
    let mut idx = [0usize; MAX_K];
    if n == 0 {
        return Ok(());
    }
    loop {
        f(&idx)?;
        let mut a = 0;
        loop {
            if a == k {
                return Ok(());
            }
            idx[a] += 1;
            if idx[a] < n {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Classifies a cell from level-function samples (centre first).
pub(crate) fn classify(values: &[f64], want_negative: bool) -> Side {
    let inside = |v: f64| if want_negative { v < 0.0 } else { v >= 0.0 };
    let first = inside(values[0]);
    if values.iter().any(|&v| inside(v) != first) {
        return Side::Crossing;
    }
    let centre = values[0];
    if centre.is_finite() {
        let spread = values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, &v| m.max((v - centre).abs()));
        let any_infinite = values.iter().any(|v| !v.is_finite());
        if centre.abs() <= 2.0 * spread || (any_infinite && centre <= 0.0) {
            return Side::Crossing;
        }
    }
    if first {
        Side::Satisfied
    } else {
        Side::Violated
    }
}

/// Monotonicity margins per parameter axis of `field o embed` over a cell:
/// for each axis, the smallest directional derivative (signed by its value
/// at the centre, scaled by the cell width) relative to the largest scaled
/// gradient. `None` if any gradient is non-finite.
pub(crate) fn axis_scores(
    patch: &dyn Patch,
    field: &dyn ScalarField,
    lo: &RealVec,
    hi: &RealVec,
    pts: &[RealVec],
    xs: &[RealVec],
) -> Option<[f64; MAX_K]> {
    let k = patch.k();
    let mut centre_sign = [0.0f64; MAX_K];
    let mut min_dir = [f64::INFINITY; MAX_K];
    let mut max_norm = 0.0f64;
    for (i, (u, x)) in pts.iter().zip(xs).enumerate() {
        let grad = field.gradient(x);
        let frame = patch.jacobian(u);
        let mut scaled = [0.0; MAX_K];
        let mut norm_sq = 0.0;
        for a in 0..k {
            let d = frame.row(a).dot(&grad) * (hi[a] - lo[a]);
            if !d.is_finite() {
                return None;
            }
            scaled[a] = d;
            norm_sq += d * d;
        }
        max_norm = max_norm.max(math::sqrt(norm_sq));
        for a in 0..k {
            if i == 0 {
                centre_sign[a] = if scaled[a] >= 0.0 { 1.0 } else { -1.0 };
            }
            min_dir[a] = min_dir[a].min(centre_sign[a] * scaled[a]);
        }
    }
    let mut out = [f64::NEG_INFINITY; MAX_K];
    for a in 0..k {
        out[a] = if max_norm > 0.0 {
            min_dir[a] / max_norm
        } else {
            -1.0
        };
    }
    Some(out)
}

pub(crate) fn pick_axis(score: &[f64; MAX_K], k: usize) -> Option<usize> {
    (0..k)
        .max_by(|&a, &b| score[a].total_cmp(&score[b]))
        .filter(|&a| score[a] > 0.05)
}

/// Cell centre, corners and tensor Gauss nodes.
pub(crate) fn sample_points(
    k: usize,
    rule: &GaussRule,
    lo: &RealVec,
    hi: &RealVec,
) -> Vec<RealVec> {
    let mut pts = Vec::with_capacity(1 + (1 << k) + rule.len().pow(k as u32));
    pts.push((*lo + *hi) * 0.5);
    for mask in 0..(1usize << k) {
        let mut u = *lo;
        for a in 0..k {
            if mask & (1 << a) != 0 {
                u[a] = hi[a];
            }
        }
        pts.push(u);
    }
    let _ = for_each_index(k, rule.len(), |idx| {
        let mut u = *lo;
        for a in 0..k {
            u[a] = 0.5 * (lo[a] + hi[a]) + 0.5 * (hi[a] - lo[a]) * rule.nodes[idx[a]];
        }
        pts.push(u);
        Ok(())
    });
    pts
}

struct CellIntegrator<'a> {
    patch: &'a dyn Patch,
    constraints: Vec<Constraint<'a>>,
    integrand: &'a dyn Fn(&PatchPoint) -> f64,
    spec: &'a QuadratureSpec,
    rule: GaussRule,
    rule_lo: GaussRule,
    k: usize,
    box_volume: f64,
    value: f64,
    bound: f64,
    magnitude: f64,
}

/// Per-constraint classification of a cell.
#[derive(Clone, Copy, PartialEq, Debug)]
pub(crate) enum Side {
    Satisfied,
    Violated,
    Crossing,
}

impl CellIntegrator<'_> {
    fn weighted(&self, u: &RealVec) -> Result<f64> {
        let p = PatchPoint::at(self.patch, u)?;
        Ok((self.integrand)(&p) * p.area_element())
    }

    fn process(&mut self, lo: RealVec, hi: RealVec, depth: usize) -> Result<()> {
        let pts = sample_points(self.k, &self.rule, &lo, &hi);
        let xs: Vec<RealVec> = pts.iter().map(|u| self.patch.embed(u)).collect();
        let mut crossing: Vec<usize> = Vec::new();
        let mut values: Vec<Vec<f64>> = Vec::new();
        for (j, c) in self.constraints.iter().enumerate() {
            let vals: Vec<f64> = xs.iter().map(|x| c.eval(x)).collect();
            match classify(&vals, c.want_negative) {
                Side::Violated => return Ok(()),
                Side::Satisfied => {}
                Side::Crossing => crossing.push(j),
            }
            values.push(vals);
        }

        if crossing.is_empty() {
            let v = self.tensor_gauss(&lo, &hi)?;
            self.value += v;
            self.magnitude += v.abs();
            return Ok(());
        }

        let axis = self.height_axis(&lo, &hi, &pts, &xs, &crossing)?;
        let at_max = depth >= self.spec.refinement_depth;
        match axis {
            Some(h) => {
                let q = self.cut_cell(&lo, &hi, h, false, &crossing, &self.rule)?;
                let q_lo = self.cut_cell(&lo, &hi, h, false, &crossing, &self.rule_lo)?;
                let est = (q - q_lo).abs();
                let cell_volume: f64 = (0..self.k).map(|a| hi[a] - lo[a]).product();
                let local_tol = 0.25 * self.spec.tolerance * cell_volume / self.box_volume;
                if est > local_tol && !at_max {
                    return self.subdivide(&lo, &hi, depth);
                }
                self.value += q;
                self.magnitude += q.abs();
                self.bound += est;
                Ok(())
            }
            None if !at_max => self.subdivide(&lo, &hi, depth),
            None => {
                // refinement budget spent: integrate with sampled roots and
                // charge the whole cell to the error bound
                let h = (0..self.k)
                    .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                    .unwrap_or(0);
                let q = self.cut_cell(&lo, &hi, h, true, &crossing, &self.rule)?;
                self.value += q;
                self.magnitude += q.abs();
                self.bound += q.abs();
                Ok(())
            }
        }
    }

    fn subdivide(&mut self, lo: &RealVec, hi: &RealVec, depth: usize) -> Result<()> {
        let k = self.k;
        let mid = (*lo + *hi) * 0.5;
        for mask in 0..(1usize << k) {
            let mut clo = *lo;
            let mut chi = *hi;
            for a in 0..k {
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

    fn tensor_gauss(&self, lo: &RealVec, hi: &RealVec) -> Result<f64> {
        let k = self.k;
        let mut sum = 0.0;
        for_each_index(k, self.rule.len(), |idx| {
            let mut u = *lo;
            let mut w = 1.0;
            for a in 0..k {
                let half = 0.5 * (hi[a] - lo[a]);
                u[a] = 0.5 * (lo[a] + hi[a]) + half * self.rule.nodes[idx[a]];
                w *= half * self.rule.weights[idx[a]];
            }
            sum += w * self.weighted(&u)?;
            Ok(())
        })?;
        Ok(sum)
    }

    /// Axis along which every crossing constraint is strictly monotone over
    /// the cell (with margin), if any.
    fn height_axis(
        &self,
        lo: &RealVec,
        hi: &RealVec,
        pts: &[RealVec],
        xs: &[RealVec],
        crossing: &[usize],
    ) -> Result<Option<usize>> {
        let k = self.k;
        let mut score = [f64::INFINITY; MAX_K];
        for &j in crossing {
            let Some(s) = axis_scores(self.patch, self.constraints[j].field, lo, hi, pts, xs)
            else {
                return Ok(None);
            };
            for a in 0..k {
                score[a] = score[a].min(s[a]);
            }
        }
        Ok(pick_axis(&score, k))
    }

    /// Exact-in-height integration over a cell for which `h` is a height
    /// direction of all crossing constraints.
    fn cut_cell(
        &self,
        lo: &RealVec,
        hi: &RealVec,
        h: usize,
        forced: bool,
        crossing: &[usize],
        rule: &GaussRule,
    ) -> Result<f64> {
        let k = self.k;
        let base: Vec<usize> = (0..k).filter(|&a| a != h).collect();
        match base.len() {
            0 => self.height_line(lo, hi, h, lo, forced, crossing, rule),
            1 => {
                let b = base[0];
                let mut breaks = alloc::vec![lo[b], hi[b]];
                let samples = if forced { 4 * rule.len() } else { rule.len() };
                let xtol = 1e-15 * (hi[b] - lo[b]).max(1e-300);
                for &j in crossing {
                    let c = &self.constraints[j];
                    for face in [lo[h], hi[h]] {
                        let mut u = *lo;
                        u[h] = face;
                        let rs = roots::roots_on_interval(
                            |t| {
                                let mut v = u;
                                v[b] = t;
                                c.eval(&self.patch.embed(&v))
                            },
                            lo[b],
                            hi[b],
                            samples,
                            xtol,
                        );
                        breaks.extend(rs);
                    }
                }
                breaks.sort_by(f64::total_cmp);
                breaks.dedup_by(|a, b| (*a - *b).abs() <= xtol);
                let mut sum = 0.0;
                for w in breaks.windows(2) {
                    let (a0, a1) = (w[0], w[1]);
                    if a1 - a0 <= xtol {
                        continue;
                    }
                    for (t, wt) in rule.mapped(a0, a1) {
                        let mut u = *lo;
                        u[b] = t;
                        sum += wt * self.height_line(lo, hi, h, &u, forced, crossing, rule)?;
                    }
                }
                Ok(sum)
            }
            _ => {
                let mut sum = 0.0;
                let d = base.len();
                for_each_index(d, rule.len(), |idx| {
                    let mut u = *lo;
                    let mut w = 1.0;
                    for (i, &a) in base.iter().enumerate() {
                        let half = 0.5 * (hi[a] - lo[a]);
                        u[a] = 0.5 * (lo[a] + hi[a]) + half * rule.nodes[idx[i]];
                        w *= half * rule.weights[idx[i]];
                    }
                    sum += w * self.height_line(lo, hi, h, &u, forced, crossing, rule)?;
                    Ok(())
                })?;
                Ok(sum)
            }
        }
    }

    /// Integral along the height line through the base point `u`.
    #[allow(clippy::too_many_arguments)]
    fn height_line(
        &self,
        lo: &RealVec,
        hi: &RealVec,
        h: usize,
        u: &RealVec,
        forced: bool,
        crossing: &[usize],
        rule: &GaussRule,
    ) -> Result<f64> {
        let (h0, h1) = (lo[h], hi[h]);
        let xtol = 1e-15 * (h1 - h0).max(1e-300);
        let at = |t: f64| {
            let mut v = *u;
            v[h] = t;
            v
        };
        let mut breaks = alloc::vec![h0, h1];
        for &j in crossing {
            let c = &self.constraints[j];
            let g = |t: f64| c.eval(&self.patch.embed(&at(t)));
            if forced {
                breaks.extend(roots::roots_on_interval(g, h0, h1, 4 * rule.len(), xtol));
            } else {
                let (g0, g1) = (g(h0), g(h1));
                if g0 != 0.0 && g1 != 0.0 && (g0 < 0.0) != (g1 < 0.0) {
                    breaks.push(roots::brent(g, h0, h1, g0, g1, xtol));
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        let mut sum = 0.0;
        for w in breaks.windows(2) {
            let (a0, a1) = (w[0], w[1]);
            if a1 - a0 <= xtol {
                continue;
            }
            let xm = self.patch.embed(&at(0.5 * (a0 + a1)));
            let inside = self.constraints.iter().all(|c| c.holds(c.eval(&xm)));
            if !inside {
                continue;
            }
            for (t, wt) in rule.mapped(a0, a1) {
                sum += wt * self.weighted(&at(t))?;
            }
        }
        Ok(sum)
    }
}

/// Integral of `integrand * dA` over the whole parameter box (or a sub-box).
pub fn integrate_patch(
    patch: &dyn Patch,
    bbox: &ParamBox,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    integrate_region_on(patch, bbox, &Region::everything(), integrand, spec)
}

/// Angular quadrature on the unit sphere `S^{m-1}`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub directions: Vec<RealVec>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Product rule with `polar` Gauss–Legendre nodes per polar angle and a
    /// `2 * polar`-point trapezoid rule in the azimuth.
    pub fn new(m: usize, polar: usize) -> Self {
        assert!(m >= 2, "sphere rule needs m >= 2");
        let mut dirs: Vec<(Vec<f64>, f64)> = (0..2 * polar)
            .map(|j| {
                let phi = 2.0 * PI * (j as f64 + 0.5) / (2 * polar) as f64;
                (
                    alloc::vec![math::cos(phi), math::sin(phi)],
                    PI / polar as f64,
                )
            })
            .collect();
        let gl = GaussRule::legendre(polar);
        for dim in 3..=m {
            let mut next = Vec::with_capacity(dirs.len() * polar);
            for (theta, w) in gl.mapped(0.0, PI) {
                let (st, ct) = (math::sin(theta), math::cos(theta));
                let jac = math::powi(st, dim as i32 - 2);
                for (d, wd) in &dirs {
                    let mut v = Vec::with_capacity(dim);
                    v.push(ct);
                    v.extend(d.iter().map(|c| st * c));
                    next.push((v, w * wd * jac));
                }
            }
            dirs = next;
        }
        Self {
            directions: dirs.iter().map(|(d, _)| RealVec::from_slice(d)).collect(),
            weights: dirs.iter().map(|(_, w)| *w).collect(),
        }
    }

    /// `int_{|x - centre| = radius} f dS`.
    pub fn integrate_sphere(
        &self,
        centre: &RealVec,
        radius: f64,
        mut f: impl FnMut(&RealVec) -> f64,
    ) -> f64 {
        let m = centre.dim();
        let jac = math::powi(radius, m as i32 - 1);
        self.directions
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| w * f(&centre.axpy(radius, d)))
            .sum::<f64>()
            * jac
    }
}

/// Resolution of polar quadrature about a pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarSpec {
    pub polar_nodes: usize,
    pub radial_nodes: usize,
}

impl Default for PolarSpec {
    fn default() -> Self {
        Self {
            polar_nodes: 24,
            radial_nodes: 16,
        }
    }
}

/// Integral of `integrand` over `{lo <= g < hi}` in `R^m`, for sets that are
/// star-shaped about `pole` with `g(pole) < lo` (or `< hi` when `lo` is
/// `None`): each ray from the pole meets each level set exactly once.
///
/// Integrating in polar coordinates about the pole absorbs point
/// singularities there of order below `m`.
pub fn integrate_star_band(
    pole: &RealVec,
    g: &dyn ScalarField,
    lo: Option<f64>,
    hi: f64,
    integrand: &dyn Fn(&RealVec) -> f64,
    spec: &PolarSpec,
) -> Result<f64> {
    let m = pole.dim();
    let g0 = g.value(pole);
    if !(g0 < lo.unwrap_or(hi)) {
        return Err(Error::Domain("pole must lie inside the inner level set"));
    }
    let sphere = SphereRule::new(m, spec.polar_nodes);
    let radial = GaussRule::legendre(spec.radial_nodes);
    let mut total = 0.0;
    for (d, w) in sphere.directions.iter().zip(&sphere.weights) {
        let r_hi = ray_exit(pole, d, g, hi)?;
        let r_lo = match lo {
            Some(l) => ray_exit(pole, d, g, l)?,
            None => 0.0,
        };
        if r_hi <= r_lo {
            continue;
        }
        let line: f64 = radial
            .mapped(r_lo, r_hi)
            .map(|(r, wr)| wr * integrand(&pole.axpy(r, d)) * math::powi(r, m as i32 - 1))
            .sum();
        total += w * line;
    }
    Ok(total)
}

/// Distance along the ray `pole + r d` at which `g` first reaches `level`.
pub fn ray_exit(pole: &RealVec, d: &RealVec, g: &dyn ScalarField, level: f64) -> Result<f64> {
    let f = |r: f64| g.value(&pole.axpy(r, d)) - level;
    let f0 = f(0.0);
    if !(f0 < 0.0) {
        return Err(Error::Domain("pole not inside the level set"));
    }
    let mut a = 0.0;
    let mut fa = f0;
    let mut b = 1e-3;
    let mut fb = f(b);
    let mut steps = 0;
    while fb < 0.0 {
        a = b;
        fa = fb;
        b *= 2.0;
        fb = f(b);
        steps += 1;
        if steps > 80 {
            return Err(Error::Domain("level set is unbounded along a ray"));
        }
    }
    Ok(roots::brent(f, a, b, fa, fb, 1e-15 * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Sphere;
    use crate::field::SquaredDistance;

    fn one(_: &PatchPoint) -> f64 {
        1.0
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec::default().with_order(1).validate().is_err());
        assert!(QuadratureSpec::default().with_order(11).validate().is_err());
        assert!(QuadratureSpec::default().with_cells(0).validate().is_err());
        let deep = QuadratureSpec {
            refinement_depth: 13,
            ..QuadratureSpec::default()
        };
        assert!(deep.validate().is_err());
    }

    #[test]
    fn quarter_disk_area() {
        let disk = crate::catalog::unit_disk();
        let g = SquaredDistance::origin(3);
        let q = integrate_sublevel(&disk, &g, 0.25, &one, &QuadratureSpec::default()).unwrap();
        assert!((q.value - PI / 4.0).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn whole_sphere_area() {
        let s = Sphere::new(RealVec::zeros(3), 1.0);
        let g = SquaredDistance::origin(3);
        let q = integrate_sublevel(&s, &g, 10.0, &one, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 4.0 * PI).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn band_is_difference_of_sublevels() {
        let disk = crate::catalog::unit_disk();
        let g = SquaredDistance::origin(3);
        let spec = QuadratureSpec::default();
        let band = integrate_region(&disk, &Region::band(&g, 0.09, 0.49), &one, &spec).unwrap();
        assert!((band.value - PI * 0.4).abs() < 1e-9, "{}", band.value);
    }

    #[test]
    fn sphere_rule_measures() {
        for m in 2..=4 {
            let rule = SphereRule::new(m, 12);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - math::unit_sphere_area(m)).abs() < 1e-12, "m={m}");
        }
        let rule = SphereRule::new(3, 12);
        let z2 = rule.integrate_sphere(&RealVec::zeros(3), 2.0, |x| x[2] * x[2]);
        // int_{S_2} z^2 = 4/3 pi R^4
        assert!((z2 - 4.0 / 3.0 * PI * 16.0).abs() < 1e-10);
    }

    #[test]
    fn star_band_ball_volume() {
        let g = SquaredDistance {
            centre: RealVec::from_slice(&[0.2, 0.0, 0.1]),
        };
        let v = integrate_star_band(
            &RealVec::zeros(3),
            &g,
            None,
            1.0,
            &|_| 1.0,
            &PolarSpec::default(),
        )
        .unwrap();
        assert!((v - 4.0 / 3.0 * PI).abs() < 1e-10, "{v}");
    }
}
