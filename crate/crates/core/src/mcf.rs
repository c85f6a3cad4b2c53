//! Gaussian densities along mean curvature flow with a moving centre.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::catalog::{Circle, Cylinder, FlatPlane, Sphere};
use crate::error::{Error, Result};
use crate::math::{self, PI};
use crate::patch::{ParamBox, Patch, PatchPoint};
use crate::quadrature::{integrate_patch, Quadrature, QuadratureSpec};
use crate::rules::GaussRule;
use crate::series::{self, Direction, Verdict};
use crate::vector::RealVec;

/// Weights below this fraction of the maximum are dropped.
pub const TRUNCATION: f64 = 1e-16;

/// A centre curve `y(t)` with its exact velocity.
#[derive(Clone, Debug, PartialEq)]
pub enum CentrePath {
    Constant(RealVec),
    /// `base + t velocity`.
    Line {
        base: RealVec,
        velocity: RealVec,
    },
    /// `eps (cos t, sin t, 0, ...)`.
    Circle {
        eps: f64,
        n: usize,
    },
    /// `eps (t, t^2, 0, ...)`.
    Parabola {
        eps: f64,
        n: usize,
    },
}

impl CentrePath {
    /// The straight line `x0 + (t0 - t) y0`.
    pub fn towards(x0: RealVec, t0: f64, y0: RealVec) -> Self {
        CentrePath::Line {
            base: x0.axpy(t0, &y0),
            velocity: -y0,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CentrePath::Constant(p) => p.dim(),
            CentrePath::Line { base, .. } => base.dim(),
            CentrePath::Circle { n, .. } | CentrePath::Parabola { n, .. } => *n,
        }
    }

    pub fn y(&self, t: f64) -> RealVec {
        match self {
            CentrePath::Constant(p) => *p,
            CentrePath::Line { base, velocity } => base.axpy(t, velocity),
            CentrePath::Circle { eps, n } => {
                let mut v = RealVec::zeros(*n);
                v[0] = eps * math::cos(t);
                v[1] = eps * math::sin(t);
                v
            }
            CentrePath::Parabola { eps, n } => {
                let mut v = RealVec::zeros(*n);
                v[0] = eps * t;
                v[1] = eps * t * t;
                v
            }
        }
    }

    pub fn y_prime(&self, t: f64) -> RealVec {
        match self {
            CentrePath::Constant(p) => RealVec::zeros(p.dim()),
            CentrePath::Line { velocity, .. } => *velocity,
            CentrePath::Circle { eps, n } => {
                let mut v = RealVec::zeros(*n);
                v[0] = -eps * math::sin(t);
                v[1] = eps * math::cos(t);
                v
            }
            CentrePath::Parabola { eps, n } => {
                let mut v = RealVec::zeros(*n);
                v[0] = *eps;
                v[1] = 2.0 * eps * t;
                v
            }
        }
    }

    /// `int_t^t0 |y'|^2`: exact for constant and straight paths, 32-point
    /// Gauss otherwise.
    pub fn energy(&self, t: f64, t0: f64) -> f64 {
        match self {
            CentrePath::Constant(_) => 0.0,
            CentrePath::Line { velocity, .. } => velocity.norm_sq() * (t0 - t),
            _ => GaussRule::legendre(32).integrate(t, t0, |s| self.y_prime(s).norm_sq()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CentrePath::Constant(_) => "constant",
            CentrePath::Line { .. } => "line",
            CentrePath::Circle { .. } => "circle",
            CentrePath::Parabola { .. } => "parabola",
        }
    }
}

/// `Phi(x, t) = (4 pi (t0 - t))^(-k/2) exp(-|x - y(t)|^2 / (4 (t0 - t)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianWeight {
    pub k: usize,
    pub t0: f64,
    pub centre: CentrePath,
}

impl GaussianWeight {
    pub fn tau(&self, t: f64) -> Result<f64> {
        let tau = self.t0 - t;
        if !(tau > 0.0) {
            return Err(Error::Domain("Gaussian weight needs t < t0"));
        }
        Ok(tau)
    }

    pub fn value(&self, x: &RealVec, t: f64) -> Result<f64> {
        let tau = self.tau(t)?;
        Ok(heat_kernel(self.k, x, &self.centre.y(t), tau))
    }
}

/// `(4 pi tau)^(-k/2) exp(-|x - x0|^2 / (4 tau))`.
pub fn heat_kernel(k: usize, x: &RealVec, x0: &RealVec, tau: f64) -> f64 {
    math::powf(4.0 * PI * tau, -0.5 * k as f64) * math::exp(-(*x - *x0).norm_sq() / (4.0 * tau))
}

/// An exact mean curvature flow `t -> Sigma_t` on its time interval.
pub trait FlowSolution: Send + Sync {
    fn k(&self) -> usize;
    fn n(&self) -> usize;
    /// Open interval `(a, b)` on which the flow exists.
    fn valid_interval(&self) -> (f64, f64);
    fn patch_at(&self, t: f64) -> Result<Box<dyn Patch>>;
    /// `d/dt embed(t, u)`, which equals the mean curvature vector.
    fn velocity_at(&self, t: f64, u: &RealVec) -> Result<RealVec>;
    fn label(&self) -> &str;

    fn check_time(&self, t: f64) -> Result<()> {
        let (a, b) = self.valid_interval();
        if t > a && t < b {
            Ok(())
        } else {
            Err(Error::Domain("time outside the flow's interval"))
        }
    }
}

/// A stationary `k`-plane.
pub struct StaticPlane {
    pub plane: FlatPlane,
}

impl StaticPlane {
    /// The hyperplane through `point` with normal `normal`, large enough for
    /// Gaussian scales up to about 4.
    pub fn new(point: RealVec, normal: &RealVec) -> Self {
        Self {
            plane: FlatPlane::orthogonal_to(point, normal, 30.0),
        }
    }
}

impl FlowSolution for StaticPlane {
    fn k(&self) -> usize {
        self.plane.k()
    }
    fn n(&self) -> usize {
        self.plane.n()
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn patch_at(&self, _t: f64) -> Result<Box<dyn Patch>> {
        Ok(Box::new(self.plane.clone()))
    }
    fn velocity_at(&self, _t: f64, _u: &RealVec) -> Result<RealVec> {
        Ok(RealVec::zeros(self.plane.n()))
    }
    fn label(&self) -> &str {
        "plane"
    }
}

/// Round sphere `S^2(sqrt(-4 (t - T)))` about the origin of `R^3`.
pub struct ShrinkingSphere {
    pub extinction: f64,
}

impl ShrinkingSphere {
    fn radius(&self, t: f64) -> f64 {
        math::sqrt(-4.0 * (t - self.extinction))
    }
}

impl FlowSolution for ShrinkingSphere {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, self.extinction)
    }
    fn patch_at(&self, t: f64) -> Result<Box<dyn Patch>> {
        self.check_time(t)?;
        Ok(Box::new(Sphere::new(RealVec::zeros(3), self.radius(t))))
    }
    fn velocity_at(&self, t: f64, u: &RealVec) -> Result<RealVec> {
        self.check_time(t)?;
        let r = self.radius(t);
        let x = Sphere::new(RealVec::zeros(3), r).embed(u);
        Ok(x * (-2.0 / (r * r)))
    }
    fn label(&self) -> &str {
        "sphere"
    }
}

/// Circle `S^1(sqrt(-2 (t - T)))` about the origin of `R^2`.
pub struct ShrinkingCircle {
    pub extinction: f64,
}

impl ShrinkingCircle {
    fn circle(&self, t: f64) -> Circle {
        Circle {
            centre: RealVec::zeros(2),
            radius: math::sqrt(-2.0 * (t - self.extinction)),
        }
    }
}

impl FlowSolution for ShrinkingCircle {
    fn k(&self) -> usize {
        1
    }
    fn n(&self) -> usize {
        2
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, self.extinction)
    }
    fn patch_at(&self, t: f64) -> Result<Box<dyn Patch>> {
        self.check_time(t)?;
        Ok(Box::new(self.circle(t)))
    }
    fn velocity_at(&self, t: f64, u: &RealVec) -> Result<RealVec> {
        self.check_time(t)?;
        let c = self.circle(t);
        Ok(c.embed(u) * (-1.0 / (c.radius * c.radius)))
    }
    fn label(&self) -> &str {
        "circle"
    }
}

/// Cylinder `S^1(sqrt(-2 (t - T))) x R` about the `x3`-axis.
pub struct ShrinkingCylinder {
    pub extinction: f64,
    pub half_length: f64,
}

impl ShrinkingCylinder {
    pub fn new(extinction: f64) -> Self {
        Self {
            extinction,
            half_length: 30.0,
        }
    }

    fn cylinder(&self, t: f64) -> Cylinder {
        Cylinder {
            radius: math::sqrt(-2.0 * (t - self.extinction)),
            half_length: self.half_length,
        }
    }
}

impl FlowSolution for ShrinkingCylinder {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, self.extinction)
    }
    fn patch_at(&self, t: f64) -> Result<Box<dyn Patch>> {
        self.check_time(t)?;
        Ok(Box::new(self.cylinder(t)))
    }
    fn velocity_at(&self, t: f64, u: &RealVec) -> Result<RealVec> {
        self.check_time(t)?;
        let c = self.cylinder(t);
        let x = c.embed(u);
        let r2 = c.radius * c.radius;
        Ok(RealVec::from_slice(&[-x[0] / r2, -x[1] / r2, 0.0]))
    }
    fn label(&self) -> &str {
        "cylinder"
    }
}

/// Sub-box of the parameter domain outside which `weight < TRUNCATION *
/// max weight`, found on a coarse scan. Fails if the weight is still above
/// the threshold on a face that is a genuine boundary of the surface.
pub fn gaussian_box(
    patch: &dyn Patch,
    weight: &dyn Fn(&RealVec) -> f64,
) -> Result<(ParamBox, f64)> {
    let k = patch.k();
    let dom = patch.domain();
    let scan = match k {
        1 => 1024,
        2 => 160,
        _ => 40,
    };
    let node = |idx: &[usize]| {
        let mut u = dom.lo;
        for a in 0..k {
            u[a] = dom.lo[a] + dom.width(a) * idx[a] as f64 / scan as f64;
        }
        u
    };
    let mut samples: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut idx = alloc::vec![0usize; k];
    loop {
        let w = weight(&patch.embed(&node(&idx)));
        samples.push((idx.clone(), w));
        let mut a = 0;
        while a < k {
            idx[a] += 1;
            if idx[a] <= scan {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == k {
            break;
        }
    }
    let wmax = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if !(wmax > 0.0) {
        return Err(Error::Domain("Gaussian weight vanishes on the patch"));
    }
    let cut = TRUNCATION * wmax;
    let mut lo_i = alloc::vec![scan; k];
    let mut hi_i = alloc::vec![0usize; k];
    let mut face_max: f64 = 0.0;
    for (ix, w) in &samples {
        if *w >= cut {
            for a in 0..k {
                lo_i[a] = lo_i[a].min(ix[a]);
                hi_i[a] = hi_i[a].max(ix[a]);
            }
        }
        for a in 0..k {
            if patch.edge_is_boundary(a) && (ix[a] == 0 || ix[a] == scan) {
                face_max = face_max.max(*w);
            }
        }
    }
    let tail = face_max / wmax;
    if tail >= TRUNCATION {
        return Err(Error::TruncationNotMet {
            relative_tail: tail,
        });
    }
    let mut lo = dom.lo;
    let mut hi = dom.hi;
    for a in 0..k {
        let step = dom.width(a) / scan as f64;
        lo[a] = dom.lo[a] + step * lo_i[a].saturating_sub(1) as f64;
        hi[a] = dom.lo[a] + step * (hi_i[a] + 1).min(scan) as f64;
    }
    Ok((ParamBox { lo, hi }, tail))
}

/// `int_patch g(p) (4 pi tau)^(-k/2) exp(-|x - x0|^2 / (4 tau))` over the
/// significant part of the patch.
pub fn gaussian_integral(
    patch: &dyn Patch,
    x0: &RealVec,
    tau: f64,
    integrand: &dyn Fn(&PatchPoint) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(tau > 0.0) {
        return Err(Error::Domain("Gaussian scale must be positive"));
    }
    x0.check_dim(patch.n())?;
    let k = patch.k();
    let (bbox, tail) = gaussian_box(patch, &|x| heat_kernel(k, x, x0, tau))?;
    let mut q = integrate_patch(
        patch,
        &bbox,
        &|p| integrand(p) * heat_kernel(k, &p.x, x0, tau),
        spec,
    )?;
    q.error_bound += tail * q.value.abs();
    Ok(q)
}

/// `F_{x0, tau}(Sigma) = int_Sigma (4 pi tau)^(-k/2) exp(-|x - x0|^2 / (4 tau))`.
pub fn gaussian_density(
    patch: &dyn Patch,
    x0: &RealVec,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(gaussian_integral(patch, x0, tau, &|_| 1.0, spec)?.value)
}

fn check_weight(flow: &dyn FlowSolution, weight: &GaussianWeight) -> Result<()> {
    if weight.k != flow.k() {
        return Err(Error::DimensionMismatch {
            expected: flow.k(),
            found: weight.k,
        });
    }
    if weight.centre.dim() != flow.n() {
        return Err(Error::DimensionMismatch {
            expected: flow.n(),
            found: weight.centre.dim(),
        });
    }
    Ok(())
}

/// `int_{Sigma_t} Phi_{y(t), t0}`.
pub fn moving_density(
    flow: &dyn FlowSolution,
    weight: &GaussianWeight,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_weight(flow, weight)?;
    let tau = weight.tau(t)?;
    let patch = flow.patch_at(t)?;
    gaussian_density(patch.as_ref(), &weight.centre.y(t), tau, spec)
}

/// `(int |H + (x - y - tau y')^perp / (2 tau)|^2 Phi, 1/4 int |(y')^perp|^2 Phi)`.
pub fn mcf_rhs(
    flow: &dyn FlowSolution,
    weight: &GaussianWeight,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    check_weight(flow, weight)?;
    let tau = weight.tau(t)?;
    let patch = flow.patch_at(t)?;
    let y = weight.centre.y(t);
    let yp = weight.centre.y_prime(t);
    let dissipation = gaussian_integral(
        patch.as_ref(),
        &y,
        tau,
        &|p| {
            let h = flow
                .velocity_at(t, &p.u)
                .unwrap_or(RealVec::zeros(p.x.dim()));
            let v = p.x - y - yp * tau;
            h.axpy(0.5 / tau, &p.normal(&v)).norm_sq()
        },
        spec,
    )?
    .value;
    let excess = 0.25
        * gaussian_integral(patch.as_ref(), &y, tau, &|p| p.normal(&yp).norm_sq(), spec)?.value;
    Ok((dissipation, excess))
}

/// `exp(+1/4 int_t^t0 |y'|^2) int_{Sigma_t} Phi_{y(t), t0}`.
///
/// The exponent is positive: with it the product is nonincreasing, and it
/// is exactly constant for a static plane and a straight path normal to it.
pub fn corrected_quantity(
    flow: &dyn FlowSolution,
    weight: &GaussianWeight,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let density = moving_density(flow, weight, t, spec)?;
    Ok(math::exp(0.25 * weight.centre.energy(t, weight.t0)) * density)
}

/// Samples of the moving-centre identity at a list of times.
#[derive(Clone, Debug, PartialEq)]
pub struct McfReport {
    pub times: Vec<f64>,
    pub density: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub excess: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    pub corrected: Vec<f64>,
    /// `|fd - (excess - dissipation)| / max(|excess - dissipation|, 1)`.
    pub residual: Vec<f64>,
    pub verdict: Verdict,
}

/// Relative time step (in units of `t0 - t`) for finite differences.
pub const TIME_FD_STEP: f64 = 1e-3;

pub fn mcf_report(
    flow: &dyn FlowSolution,
    weight: &GaussianWeight,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<McfReport> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("times must be strictly increasing"));
    }
    let mut r = McfReport {
        times: times.to_vec(),
        density: Vec::new(),
        dissipation: Vec::new(),
        excess: Vec::new(),
        fd_derivative: Vec::new(),
        corrected: Vec::new(),
        residual: Vec::new(),
        verdict: Verdict::Monotone,
    };
    for &t in times {
        let tau = weight.tau(t)?;
        r.density.push(moving_density(flow, weight, t, spec)?);
        let (d, e) = mcf_rhs(flow, weight, t, spec)?;
        let fd = series::derivative5(
            |s| moving_density(flow, weight, s, spec),
            t,
            TIME_FD_STEP * tau,
        )?;
        r.residual.push(series::relative_residual(fd, e - d));
        r.dissipation.push(d);
        r.excess.push(e);
        r.fd_derivative.push(fd);
        r.corrected.push(corrected_quantity(flow, weight, t, spec)?);
    }
    r.verdict = series::monotone_verdict(&r.corrected, Direction::Nonincreasing, 1e-8);
    Ok(r)
}

/// `F_{s y, 1 + a s^2}` along a scale grid, with the closed-form derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyScan {
    pub grid: Vec<f64>,
    pub value: Vec<f64>,
    /// `-s / (2 (1 + a s^2)^2) int |(a s x + y)^perp|^2 rho`.
    pub rhs: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    pub residual: Vec<f64>,
    pub verdict: Verdict,
}

/// Largest `|H + x^perp / 2|` accepted for a self-shrinker.
pub const SHRINKER_TOLERANCE: f64 = 1e-10;

fn check_shrinker(patch: &dyn Patch) -> Result<()> {
    let dom = patch.domain();
    let k = patch.k();
    for t in 1..6 {
        let mut u = dom.lo;
        for a in 0..k {
            let v = 0.21 + 0.137 * t as f64 * (a + 1) as f64;
            let frac = v - libm::floor(v);
            u[a] = dom.lo[a] + frac * dom.width(a);
        }
        let p = PatchPoint::at(patch, &u)?;
        let h = patch
            .mean_curvature(&u)
            .ok_or(Error::Domain("shrinker needs an exact mean curvature"))?;
        if h.axpy(0.5, &p.normal(&p.x)).norm() > SHRINKER_TOLERANCE {
            return Err(Error::Domain("patch is not a self-shrinker"));
        }
    }
    Ok(())
}

/// `F_{s y, 1 + a s^2}(Sigma)` for a self-shrinker `Sigma`.
pub fn entropy_value(
    shrinker: &dyn Patch,
    y: &RealVec,
    a: f64,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let scale = 1.0 + a * s * s;
    if !(scale > 0.0) {
        return Err(Error::Domain("1 + a s^2 must be positive"));
    }
    gaussian_density(shrinker, &(*y * s), scale, spec)
}

/// The closed-form `d/ds F_{s y, 1 + a s^2}`.
pub fn entropy_rhs(
    shrinker: &dyn Patch,
    y: &RealVec,
    a: f64,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let scale = 1.0 + a * s * s;
    if !(scale > 0.0) {
        return Err(Error::Domain("1 + a s^2 must be positive"));
    }
    let q = gaussian_integral(
        shrinker,
        &(*y * s),
        scale,
        &|p| p.normal(&(p.x * (a * s) + *y)).norm_sq(),
        spec,
    )?;
    Ok(-s / (2.0 * scale * scale) * q.value)
}

pub fn entropy_scan(
    shrinker: &dyn Patch,
    y: &RealVec,
    a: f64,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<EntropyScan> {
    check_shrinker(shrinker)?;
    y.check_dim(shrinker.n())?;
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|&s| s < 0.0) {
        return Err(Error::InvalidSpec("scan grid must be increasing and >= 0"));
    }
    let mut out = EntropyScan {
        grid: grid.to_vec(),
        value: Vec::new(),
        rhs: Vec::new(),
        fd_derivative: Vec::new(),
        residual: Vec::new(),
        verdict: Verdict::Monotone,
    };
    for &s in grid {
        out.value.push(entropy_value(shrinker, y, a, s, spec)?);
        let rhs = entropy_rhs(shrinker, y, a, s, spec)?;
        let h = 1e-3 * s.max(0.1);
        let fd = series::derivative5(|t| entropy_value(shrinker, y, a, t, spec), s, h)?;
        out.residual.push(series::relative_residual(fd, rhs));
        out.rhs.push(rhs);
        out.fd_derivative.push(fd);
    }
    out.verdict = series::monotone_verdict(&out.value, Direction::Nonincreasing, 1e-8);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Circle;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn plane_densities() {
        let e3 = RealVec::basis(3, 2);
        let plane = FlatPlane::orthogonal_to(RealVec::zeros(3), &e3, 30.0);
        for tau in [0.1, 1.0, 3.0] {
            let f = gaussian_density(&plane, &RealVec::zeros(3), tau, &spec()).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "tau={tau}: {f}");
            let h = 0.7;
            let off = RealVec::from_slice(&[0.3, -1.0, h]);
            let f = gaussian_density(&plane, &off, tau, &spec()).unwrap();
            assert!((f - math::exp(-h * h / (4.0 * tau))).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_density() {
        let c = Circle {
            centre: RealVec::zeros(2),
            radius: math::sqrt(2.0),
        };
        let f = gaussian_density(&c, &RealVec::zeros(2), 1.0, &spec()).unwrap();
        assert!((f - math::sqrt(2.0 * PI / math::E)).abs() < 1e-13);
    }

    #[test]
    fn truncation_failure_is_reported() {
        let plane = FlatPlane::orthogonal_to(RealVec::zeros(3), &RealVec::basis(3, 2), 2.0);
        let err = gaussian_density(&plane, &RealVec::zeros(3), 1.0, &spec());
        assert!(
            matches!(err, Err(Error::TruncationNotMet { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn paths_have_consistent_velocities() {
        let paths = [
            CentrePath::towards(
                RealVec::zeros(3),
                0.5,
                RealVec::from_slice(&[0.0, 0.0, 1.0]),
            ),
            CentrePath::Circle { eps: 0.3, n: 3 },
            CentrePath::Parabola { eps: 0.2, n: 3 },
        ];
        for p in &paths {
            for t in [-0.7, 0.1, 0.9] {
                let h = 1e-5;
                let fd = (p.y(t + h) - p.y(t - h)) * (0.5 / h);
                assert!((fd - p.y_prime(t)).norm() <= 1e-8 * p.y_prime(t).norm().max(1.0));
            }
        }
        let c = CentrePath::Circle { eps: 0.3, n: 3 };
        assert!((c.energy(-1.0, 0.5) - 0.09 * 1.5).abs() < 1e-14);
    }

    #[test]
    fn plane_with_normal_path_is_an_equality_case() {
        let e3 = RealVec::basis(3, 2);
        let flow = StaticPlane::new(RealVec::zeros(3), &e3);
        let y0 = e3 * 0.8;
        let weight = GaussianWeight {
            k: 2,
            t0: 0.0,
            centre: CentrePath::towards(RealVec::zeros(3), 0.0, y0),
        };
        for t in [-2.0, -1.0, -0.3] {
            let tau = -t;
            let m = moving_density(&flow, &weight, t, &spec()).unwrap();
            assert!((m - math::exp(-tau * 0.64 / 4.0)).abs() < 1e-12);
            let (d, e) = mcf_rhs(&flow, &weight, t, &spec()).unwrap();
            assert!(d.abs() < 1e-12);
            assert!((e - 0.16 * m).abs() < 1e-12);
            let c = corrected_quantity(&flow, &weight, t, &spec()).unwrap();
            assert!((c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shrinking_sphere_is_self_similar() {
        let flow = ShrinkingSphere { extinction: 0.0 };
        let weight = GaussianWeight {
            k: 2,
            t0: 0.0,
            centre: CentrePath::Constant(RealVec::zeros(3)),
        };
        let want = 4.0 / math::E;
        for t in [-1.0, -0.2] {
            let m = moving_density(&flow, &weight, t, &spec()).unwrap();
            assert!((m - want).abs() < 1e-12, "{m}");
            let (d, e) = mcf_rhs(&flow, &weight, t, &spec()).unwrap();
            assert!(d.abs() < 1e-12 && e.abs() < 1e-14);
        }
    }

    #[test]
    fn entropy_scan_on_plane() {
        let plane = FlatPlane::orthogonal_to(RealVec::zeros(3), &RealVec::basis(3, 2), 30.0);
        let y = RealVec::from_slice(&[0.0, 0.0, 0.9]);
        let scan = entropy_scan(&plane, &y, 0.0, &[0.0, 0.5, 1.0], &spec()).unwrap();
        for (s, v) in scan.grid.iter().zip(&scan.value) {
            assert!((v - math::exp(-s * s * 0.81 / 4.0)).abs() < 1e-12);
        }
        assert!(scan.residual.iter().all(|r| *r < 1e-6));
        assert!(scan.verdict.is_monotone());
        let tangent = RealVec::from_slice(&[0.7, 0.2, 0.0]);
        let scan = entropy_scan(&plane, &tangent, 0.5, &[0.0, 0.5, 1.0], &spec()).unwrap();
        assert!(scan.value.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(scan.rhs.iter().all(|v| v.abs() < 1e-14));
    }
}
