//! Moving-centre monotonicity for minimal submanifolds.
//!
//! Everything is computed on the balls `E_s` of a [`MinimalBallFamily`]:
//! the area ratio `s^(-k/2) |Sigma cap E_s|`, its boundary-flux derivative,
//! its bulk increment between two scales, the density limit at `y`, and the
//! Brendle–Hung vector field `W` with its divergence identity.

use alloc::vec::Vec;

use crate::ball::MinimalBallFamily;
use crate::error::{Error, Result};
use crate::level::integrate_level_curve;
use crate::math;
use crate::patch::{Patch, PatchPoint, Surface};
use crate::quadrature::{integrate_region, Level, Quadrature, QuadratureSpec, Region};
use crate::series::{self, Direction, Verdict};
use crate::vector::RealVec;

/// Smallest scale at which the bulk weight `f^(-k/2)` is integrated.
pub const MIN_BULK_SCALE: f64 = 1e-3;

/// Slack allowed per step when judging monotonicity.
pub const MONOTONE_SLACK: f64 = 1e-8;

fn check_family(surface: &Surface, family: &MinimalBallFamily) -> Result<()> {
    if surface.n() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: surface.n(),
            found: family.n(),
        });
    }
    Ok(())
}

fn sum_charts(
    surface: &Surface,
    mut f: impl FnMut(&dyn Patch) -> Result<Quadrature>,
) -> Result<Quadrature> {
    let mut total = Quadrature {
        value: 0.0,
        error_bound: 0.0,
    };
    for chart in &surface.charts {
        let q = f(chart.as_ref())?;
        total.value += q.value;
        total.error_bound += q.error_bound;
    }
    Ok(total)
}

/// `|Sigma cap E_s|`.
pub fn area(
    surface: &Surface,
    family: &MinimalBallFamily,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    check_family(surface, family)?;
    family.centre_and_radius(s)?;
    let ball = family.ball(s);
    let region = Region::sublevel(&ball, 0.0);
    sum_charts(surface, |p| integrate_region(p, &region, &|_| 1.0, spec))
}

/// `s^(-k/2) |Sigma cap E_s|`.
///
/// The quadrature tolerance in `spec` applies to the ratio, so the area is
/// integrated to `tolerance * s^(k/2)`.
pub fn area_ratio(
    surface: &Surface,
    family: &MinimalBallFamily,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let scale = math::powf(s, 0.5 * surface.k() as f64);
    let spec = spec.with_tolerance(spec.tolerance * scale);
    Ok(area(surface, family, s, &spec)?.value / scale)
}

/// `(s^(-(k+2)/2) / 2) int_{Sigma cap dE_s} (|(x-y)^perp|^2 + s^2 |y^T|^2) / |(x-y+sy)^T|`.
pub fn boundary_flux(
    surface: &Surface,
    family: &MinimalBallFamily,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_family(surface, family)?;
    if surface.k() != 2 {
        return Err(Error::UnsupportedDimension(surface.k()));
    }
    family.centre_and_radius(s)?;
    let k = surface.k() as f64;
    let y = *family.y();
    let ball = family.ball(s);
    let integrand = |p: &PatchPoint| {
        let d = p.x - y;
        let num = p.normal(&d).norm_sq() + s * s * p.tangential(&y).norm_sq();
        num / p.tangential(&d.axpy(s, &y)).norm()
    };
    let q = sum_charts(surface, |p| {
        integrate_level_curve(p, &ball, 0.0, &integrand, spec)
    })?;
    Ok(0.5 * math::powf(s, -(k + 2.0) / 2.0) * q.value)
}

/// `int_{Sigma cap E_t \ E_s} f^(-k/2) (|(x-y)^perp|^2 + f^2 |y^T|^2) / |x-y|^2`.
pub fn bulk_increment(
    surface: &Surface,
    family: &MinimalBallFamily,
    s: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_family(surface, family)?;
    if !(s < t) {
        return Err(Error::Domain("bulk increment needs s < t"));
    }
    if s < MIN_BULK_SCALE {
        return Err(Error::Domain("bulk increment needs s >= 1e-3"));
    }
    let k = surface.k() as f64;
    let y = *family.y();
    let (outer, inner) = (family.ball(t), family.ball(s));
    let region = Region::between(Level::new(&outer, 0.0), Level::new(&inner, 0.0));
    let integrand = |p: &PatchPoint| {
        let d = p.x - y;
        let f = family.level_function(&p.x).unwrap_or(f64::NAN);
        let num = p.normal(&d).norm_sq() + f * f * p.tangential(&y).norm_sq();
        math::powf(f, -0.5 * k) * num / d.norm_sq()
    };
    Ok(sum_charts(surface, |p| integrate_region(p, &region, &integrand, spec))?.value)
}

/// `exp(k C_H mu(s))` with `mu = 3/2 s |y| + sqrt(s (1 - |y|^2))`.
pub fn almost_mono_factor(family: &MinimalBallFamily, k: usize, c_h: f64, s: f64) -> f64 {
    let yn = family.y().norm();
    let mu = 1.5 * s * yn + math::sqrt(s * (1.0 - yn * yn));
    math::exp(k as f64 * c_h * mu)
}

/// Richardson limit in `sqrt(s)` of the normalised ratio
/// `(1 - |y|^2)^(-k/2) s^(-k/2) |Sigma cap E_s| / |B^k|` at
/// `s_i = s_min 4^(-i)`, `i < samples`.
pub fn density_limit(
    surface: &Surface,
    family: &MinimalBallFamily,
    s_min: f64,
    samples: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if samples < 1 {
        return Err(Error::InvalidSpec(
            "density limit needs at least one sample",
        ));
    }
    let k = surface.k();
    let norm = math::unit_ball_volume(k) * math::powf(1.0 - family.y().norm_sq(), 0.5 * k as f64);
    let mut raw = Vec::with_capacity(samples);
    let mut s = s_min;
    for _ in 0..samples {
        raw.push(area_ratio(surface, family, s, spec)? / norm);
        s *= 0.25;
    }
    // step in sqrt(s) halves between samples
    let mut table = raw.clone();
    let mut estimates = alloc::vec![table[samples - 1]];
    for j in 1..samples {
        let factor = math::powi(2.0, j as i32) - 1.0;
        for i in (j..samples).rev() {
            table[i] = table[i] + (table[i] - table[i - 1]) / factor;
        }
        estimates.push(table[samples - 1]);
    }
    let limit = table[samples - 1];
    let settled = estimates.len() < 2
        || (estimates[estimates.len() - 1] - estimates[estimates.len() - 2]).abs()
            <= 1e-2 * limit.abs().max(1.0);
    if !limit.is_finite() || !settled {
        return Err(Error::NonConvergent { sequence: raw });
    }
    Ok(limit)
}

/// Sampled moving-centre monotone quantity with its identity checks.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalMonoReport {
    pub grid: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Empty unless requested (surfaces only).
    pub boundary_flux: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    /// `bulk_increment[i]` covers `[grid[i], grid[i + 1]]`.
    pub bulk_increment: Vec<f64>,
    pub flux_residual: Vec<f64>,
    pub bulk_residual: Vec<f64>,
    pub verdict: Verdict,
}

impl MinimalMonoReport {
    pub fn max_flux_residual(&self) -> f64 {
        self.flux_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_bulk_residual(&self) -> f64 {
        self.bulk_residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Relative step of the five-point derivative in `s`.
pub const FD_STEP: f64 = 1e-3;

/// Samples the ratio on `grid` together with its finite-difference
/// derivative and, when asked, the boundary flux and bulk increments.
pub fn minimal_mono_report(
    surface: &Surface,
    family: &MinimalBallFamily,
    grid: &[f64],
    spec: &QuadratureSpec,
    with_flux: bool,
    with_bulk: bool,
) -> Result<MinimalMonoReport> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("grid must be strictly increasing"));
    }
    let mut ratio = Vec::with_capacity(grid.len());
    let mut fd = Vec::with_capacity(grid.len());
    let mut flux = Vec::new();
    let mut flux_residual = Vec::new();
    for &s in grid {
        ratio.push(area_ratio(surface, family, s, spec)?);
        let d = series::derivative5(|t| area_ratio(surface, family, t, spec), s, FD_STEP * s)?;
        fd.push(d);
        if with_flux {
            let b = boundary_flux(surface, family, s, spec)?;
            flux_residual.push(series::mixed_residual(d, b));
            flux.push(b);
        }
    }
    let mut bulk = Vec::new();
    let mut bulk_residual = Vec::new();
    if with_bulk {
        for (i, w) in grid.windows(2).enumerate() {
            let b = bulk_increment(surface, family, w[0], w[1], spec)?;
            let diff = ratio[i + 1] - ratio[i];
            bulk_residual.push((diff - b).abs() / (1.0 + ratio[i + 1].abs()));
            bulk.push(b);
        }
    }
    let verdict = series::monotone_verdict(&ratio, Direction::Nondecreasing, MONOTONE_SLACK);
    Ok(MinimalMonoReport {
        grid: grid.to_vec(),
        ratio,
        boundary_flux: flux,
        fd_derivative: fd,
        bulk_increment: bulk,
        flux_residual,
        bulk_residual,
        verdict,
    })
}

/// Outcome of the Brendle–Hung comparison between scales `0` and `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrendleHungReport {
    pub grid: Vec<f64>,
    pub ratio: Vec<f64>,
    pub verdict: Verdict,
    pub density: f64,
    /// `|B^k| (1 - |y|^2)^(k/2) density`.
    pub lower_bound: f64,
    /// `ratio(1) - lower_bound`.
    pub margin: f64,
}

/// Checks that the ratio is nondecreasing on `grid` and compares its value
/// at `s = 1` (the unit ball) with the density bound at `y`.
pub fn brendle_hung_check(
    surface: &Surface,
    family: &MinimalBallFamily,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<BrendleHungReport> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("grid must be strictly increasing"));
    }
    let ratio: Vec<f64> = grid
        .iter()
        .map(|&s| area_ratio(surface, family, s, spec))
        .collect::<Result<_>>()?;
    let verdict = series::monotone_verdict(&ratio, Direction::Nondecreasing, MONOTONE_SLACK);
    let density = density_limit(surface, family, grid[0], 3, spec)?;
    let k = surface.k();
    let lower_bound = math::unit_ball_volume(k)
        * math::powf(1.0 - family.y().norm_sq(), 0.5 * k as f64)
        * density;
    let at_one = area_ratio(surface, family, 1.0, spec)?;
    Ok(BrendleHungReport {
        grid: grid.to_vec(),
        ratio,
        verdict,
        density,
        lower_bound,
        margin: at_one - lower_bound,
    })
}

/// `F(t) = (t^((2-k)/2) - 1)/(k-2)` for `k > 2`, `-log(t)/2` for `k = 2`.
pub fn bh_profile(k: usize, t: f64) -> f64 {
    if k == 2 {
        -0.5 * math::ln(t)
    } else {
        let kf = k as f64;
        (math::powf(t, (2.0 - kf) / 2.0) - 1.0) / (kf - 2.0)
    }
}

/// The Brendle–Hung field `W` and `W_0 = (x - y)/k - W` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BHFieldSample {
    pub x: RealVec,
    pub w: RealVec,
    pub w0: RealVec,
    /// `tr_Sigma D W_0` from the chain rule through `Df`.
    pub div_w0: f64,
    /// `(f^(-k/2) |(x-y)^perp|^2 + f^(-(k-4)/2) |y^T|^2) / |x-y|^2`.
    pub div_w0_identity: f64,
}

/// `W(x) = -(f^(-k/2) - 1)(x - y)/k + F(f) y`.
pub fn bh_field(family: &MinimalBallFamily, k: usize, x: &RealVec) -> Result<RealVec> {
    let f = family.level_function(x)?;
    if f <= 0.0 {
        return Err(Error::Domain("Brendle-Hung field is singular at f = 0"));
    }
    let y = *family.y();
    let kf = k as f64;
    Ok((*x - y) * (-(math::powf(f, -0.5 * kf) - 1.0) / kf) + y * bh_profile(k, f))
}

/// Evaluates `W`, `W_0` and both forms of `div_Sigma W_0` at `embed(u)`.
pub fn bh_field_identity(
    patch: &dyn Patch,
    family: &MinimalBallFamily,
    u: &RealVec,
) -> Result<BHFieldSample> {
    let k = patch.k();
    if k < 2 {
        return Err(Error::UnsupportedDimension(k));
    }
    let p = PatchPoint::at(patch, u)?;
    let x = p.x;
    let y = *family.y();
    let kf = k as f64;
    let w = bh_field(family, k, &x)?;
    let d = x - y;
    let w0 = d * (1.0 / kf) - w;
    let f = family.level_function(&x)?;
    let df = family.level_gradient(&x)?;
    let fk = math::powf(f, -0.5 * kf);
    // D W_0 v = (f^(-k/2)/k) v + <Df, v> (-(1/2) f^(-k/2-1) (x-y) + (1/2) f^(-k/2) y);
    // its trace over the tangent space is f^(-k/2) + <(Df)^T, w>
    let wdir = d * (-0.5 * fk / f) + y * (0.5 * fk);
    let div_w0 = fk + p.tangential(&df).dot(&wdir);
    let identity =
        (fk * p.normal(&d).norm_sq() + fk * f * f * p.tangential(&y).norm_sq()) / d.norm_sq();
    Ok(BHFieldSample {
        x,
        w,
        w0,
        div_w0,
        div_w0_identity: identity,
    })
}

/// `div_Sigma W_0` by fourth-order differences of `W_0 o embed` in the
/// chart, contracted with the inverse metric.
pub fn bh_divergence_fd(
    patch: &dyn Patch,
    family: &MinimalBallFamily,
    u: &RealVec,
    h: f64,
) -> Result<f64> {
    let k = patch.k();
    let p = PatchPoint::at(patch, u)?;
    let y = *family.y();
    let w0 = |v: &RealVec| -> Result<RealVec> {
        let x = patch.embed(v);
        Ok((x - y) * (1.0 / k as f64) - bh_field(family, k, &x)?)
    };
    let mut total = 0.0;
    for j in 0..k {
        let at = |t: f64| {
            let mut v = *u;
            v[j] += t;
            w0(&v)
        };
        let dj = (at(h)? - at(-h)?) * 8.0 - (at(2.0 * h)? - at(-2.0 * h)?);
        let dj = dj * (1.0 / (12.0 * h));
        // sum_i g^{ij} <d_i x, d_j W_0>
        let mut b = [0.0; crate::patch::MAX_K];
        b[j] = 1.0;
        let col = p.metric.solve(&b);
        for (i, c) in col.iter().enumerate().take(k) {
            total += c * p.frame.row(i).dot(&dj);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FlatPlane, PolarDisk};
    use crate::math::PI;

    fn y3(a: f64) -> RealVec {
        RealVec::from_slice(&[a, 0.0, 0.0])
    }

    fn flat_disk(y: RealVec) -> Surface {
        Surface::single(FlatPlane::orthogonal_to(y, &RealVec::basis(3, 0), 1.0))
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn flat_disk_ratio_is_constant() {
        let y = y3(0.5);
        let fam = MinimalBallFamily::new(y).unwrap();
        let surf = flat_disk(y);
        for s in [1e-3, 0.01, 0.3, 1.0] {
            let r = area_ratio(&surf, &fam, s, &spec()).unwrap();
            assert!((r - 0.75 * PI).abs() < 1e-9, "s={s}: {r}");
            let b = boundary_flux(&surf, &fam, s, &spec()).unwrap();
            assert!(b.abs() < 1e-12);
        }
        let inc = bulk_increment(&surf, &fam, 0.1, 0.9, &spec()).unwrap();
        assert!(inc.abs() < 1e-12);
    }

    #[test]
    fn polar_disk_ratio() {
        let fam = MinimalBallFamily::new(RealVec::zeros(3)).unwrap();
        let surf = Surface::single(crate::catalog::unit_disk());
        let r = area_ratio(&surf, &fam, 0.36, &spec()).unwrap();
        assert!((r - PI).abs() < 1e-9);
        let disk = PolarDisk {
            centre: y3(0.3),
            e1: RealVec::basis(3, 1),
            e2: RealVec::basis(3, 2),
            radius: 1.0,
        };
        let fam = MinimalBallFamily::new(y3(0.3)).unwrap();
        let r = area_ratio(&Surface::single(disk), &fam, 0.2, &spec()).unwrap();
        assert!((r - 0.91 * PI).abs() < 1e-9);
    }

    #[test]
    fn offset_plane_matches_classical_formula() {
        // y = 0, plane at distance d: ratio(s) = pi (1 - d^2 / s) for s > d^2
        let d = 0.2;
        let fam = MinimalBallFamily::new(RealVec::zeros(3)).unwrap();
        let surf = Surface::single(FlatPlane::orthogonal_to(y3(d), &RealVec::basis(3, 0), 1.05));
        let (s, t) = (0.09, 0.8);
        let inc = bulk_increment(&surf, &fam, s, t, &spec()).unwrap();
        let want = PI * d * d * (1.0 / s - 1.0 / t);
        assert!((inc - want).abs() < 1e-8 * want, "{inc} vs {want}");
        let r = area_ratio(&surf, &fam, t, &spec()).unwrap();
        assert!((r - PI * (1.0 - d * d / t)).abs() < 1e-9);
    }

    #[test]
    fn tilted_plane_flux_matches_derivative() {
        let y = y3(0.3);
        let fam = MinimalBallFamily::new(y).unwrap();
        let surf = Surface::single(FlatPlane::tilted(&y, PI / 6.0, RealVec::zeros(3), 1.05));
        for s in [0.2, 0.4, 0.9] {
            let b = boundary_flux(&surf, &fam, s, &spec()).unwrap();
            let fd =
                series::derivative5(|t| area_ratio(&surf, &fam, t, &spec()), s, 1e-3 * s).unwrap();
            assert!(b > 0.0);
            assert!((fd - b).abs() <= 1e-3 * b.abs(), "s={s}: fd {fd} flux {b}");
        }
        let inc = bulk_increment(&surf, &fam, 0.25, 1.0, &spec()).unwrap();
        let diff = area_ratio(&surf, &fam, 1.0, &spec()).unwrap()
            - area_ratio(&surf, &fam, 0.25, &spec()).unwrap();
        assert!((inc - diff).abs() <= 1e-4 * diff.abs(), "{inc} vs {diff}");
    }

    #[test]
    fn almost_mono_factor_values() {
        let fam = MinimalBallFamily::new(RealVec::zeros(3)).unwrap();
        assert_eq!(almost_mono_factor(&fam, 2, 0.0, 0.4), 1.0);
        assert!((almost_mono_factor(&fam, 2, 1.0, 0.25) - math::exp(1.0)).abs() < 1e-15);
    }

    #[test]
    fn density_of_flat_disk_is_one() {
        let y = y3(0.4);
        let fam = MinimalBallFamily::new(y).unwrap();
        let d = density_limit(&flat_disk(y), &fam, 1e-3, 3, &spec()).unwrap();
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bh_field_on_flat_disk() {
        let y = y3(0.5);
        let fam = MinimalBallFamily::new(y).unwrap();
        let plane = FlatPlane::orthogonal_to(y, &RealVec::basis(3, 0), 1.0);
        let u = RealVec::from_slice(&[0.2, -0.3]);
        let sample = bh_field_identity(&plane, &fam, &u).unwrap();
        assert!(sample.div_w0.abs() < 1e-12);
        assert!(sample.div_w0_identity.abs() < 1e-12);
        assert!(bh_field_identity(&plane, &fam, &RealVec::zeros(2)).is_err());
    }

    #[test]
    fn bh_profile_derivative() {
        for k in [2usize, 3, 5] {
            let t = 0.37;
            let h = 1e-5;
            let d = (bh_profile(k, t + h) - bh_profile(k, t - h)) / (2.0 * h);
            let want = -0.5 * math::powf(t, -(k as f64) / 2.0);
            assert!((d - want).abs() < 1e-7 * want.abs());
        }
    }
}
