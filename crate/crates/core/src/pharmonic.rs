//! Moving-centre monotonicity for stationary p-harmonic maps.
//!
//! Every `E_s^(q)` is a ball containing the origin, so domain integrals are
//! done in polar coordinates about 0 with exact ray exits. That absorbs the
//! point singularity of `x/|x|` at the pole.

use alloc::vec::Vec;

use crate::ball::QBallFamily;
use crate::catalog::FlatPlane;
use crate::error::{Error, Result};
use crate::math;
use crate::patch::ParamBox;
use crate::quadrature::{integrate_patch, PolarSpec, QuadratureSpec, SphereRule};
use crate::rules::GaussRule;
use crate::series::{self, Direction, Verdict};
use crate::vector::{Mat, RealVec};

/// Below this `|grad u|` the factor `|grad u|^(p-2)` is taken as 0 when `p < 2`.
pub const CRITICAL_FLOOR: f64 = 1e-14;

/// A map `u: R^m -> R^n` with closed-form gradient.
pub trait MapSolution: Send + Sync {
    fn m(&self) -> usize;
    fn n(&self) -> usize;
    fn p(&self) -> f64;
    fn value(&self, x: &RealVec) -> RealVec;
    /// `m x n` matrix with entries `u^a_{,i}` (row `i`, column `a`).
    fn gradient(&self, x: &RealVec) -> Mat;
    fn label(&self) -> &str;
}

fn check_p(p: f64, m: usize) -> Result<()> {
    if !(p > 1.0 && p < m as f64) {
        return Err(Error::Domain("p must lie in (1, m)"));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ConstantMap {
    pub m: usize,
    pub point: RealVec,
    pub p: f64,
}

impl ConstantMap {
    pub fn new(m: usize, point: RealVec, p: f64) -> Result<Self> {
        check_p(p, m)?;
        Ok(Self { m, point, p })
    }
}

impl MapSolution for ConstantMap {
    fn m(&self) -> usize {
        self.m
    }
    fn n(&self) -> usize {
        self.point.dim()
    }
    fn p(&self) -> f64 {
        self.p
    }
    fn value(&self, _x: &RealVec) -> RealVec {
        self.point
    }
    fn gradient(&self, _x: &RealVec) -> Mat {
        Mat::zeros(self.m, self.point.dim())
    }
    fn label(&self) -> &str {
        "constant"
    }
}

/// `u^a(x) = sum_i g_{ia} x_i` into flat `R^n`.
#[derive(Clone, Debug)]
pub struct LinearMap {
    pub grad: Mat,
    pub p: f64,
}

impl LinearMap {
    pub fn new(grad: Mat, p: f64) -> Result<Self> {
        check_p(p, grad.rows())?;
        Ok(Self { grad, p })
    }
}

impl MapSolution for LinearMap {
    fn m(&self) -> usize {
        self.grad.rows()
    }
    fn n(&self) -> usize {
        self.grad.cols()
    }
    fn p(&self) -> f64 {
        self.p
    }
    fn value(&self, x: &RealVec) -> RealVec {
        self.grad.contract_rows(x)
    }
    fn gradient(&self, _x: &RealVec) -> Mat {
        self.grad
    }
    fn label(&self) -> &str {
        "linear"
    }
}

/// `x / |x|` into `S^(m-1)`, `m >= 3`.
#[derive(Clone, Debug)]
pub struct RadialProjection {
    pub m: usize,
    pub p: f64,
}

impl RadialProjection {
    pub fn new(m: usize, p: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::UnsupportedDimension(m));
        }
        check_p(p, m)?;
        Ok(Self { m, p })
    }
}

impl MapSolution for RadialProjection {
    fn m(&self) -> usize {
        self.m
    }
    fn n(&self) -> usize {
        self.m
    }
    fn p(&self) -> f64 {
        self.p
    }
    fn value(&self, x: &RealVec) -> RealVec {
        *x * (1.0 / x.norm())
    }
    fn gradient(&self, x: &RealVec) -> Mat {
        let r2 = x.norm_sq();
        let r = math::sqrt(r2);
        let mut g = Mat::zeros(self.m, self.m);
        for i in 0..self.m {
            for a in 0..self.m {
                let d = if i == a { 1.0 } else { 0.0 };
                g.set(i, a, (d - x[i] * x[a] / r2) / r);
            }
        }
        g
    }
    fn label(&self) -> &str {
        "radial"
    }
}

/// `(|grad u|^2, |grad u|^(p-2))` with the critical-set convention.
fn energy_parts(grad: &Mat, p: f64) -> (f64, f64) {
    let g2 = grad.norm_sq();
    let w = if p < 2.0 && g2 < CRITICAL_FLOOR * CRITICAL_FLOOR {
        0.0
    } else if g2 == 0.0 {
        if p == 2.0 {
            1.0
        } else {
            0.0
        }
    } else {
        math::powf(g2, 0.5 * (p - 2.0))
    };
    (g2, w)
}

fn check_family(map: &dyn MapSolution, family: &QBallFamily) -> Result<()> {
    if family.m() != map.m() {
        return Err(Error::DimensionMismatch {
            expected: map.m(),
            found: family.m(),
        });
    }
    if family.q() > map.p() {
        return Err(Error::Domain("q must not exceed p"));
    }
    Ok(())
}

/// Distance from 0 along unit `d` to the sphere `|x - c| = r`, 0 inside.
fn exit_radius(c: &RealVec, r2: f64, d: &RealVec) -> f64 {
    let b = d.dot(c);
    let disc = b * b + r2 - c.norm_sq();
    b + math::sqrt(disc)
}

/// `int_{E_t \ E_s} integrand` (`E_0` empty) in polar coordinates about 0.
pub fn integrate_ball_band(
    family: &QBallFamily,
    s: f64,
    t: f64,
    integrand: &dyn Fn(&RealVec) -> f64,
    spec: &PolarSpec,
) -> Result<f64> {
    if !(t > 0.0 && s >= 0.0 && s < t) {
        return Err(Error::Domain("band needs 0 <= s < t"));
    }
    let m = family.m();
    let sphere = SphereRule::new(m, spec.polar_nodes);
    let radial = GaussRule::legendre(spec.radial_nodes);
    let outer = family.ball(t);
    let inner = family.ball(s);
    let mut total = 0.0;
    for (d, w) in sphere.directions.iter().zip(&sphere.weights) {
        let r_hi = exit_radius(&outer.centre, outer.radius_sq, d);
        let r_lo = if s > 0.0 {
            exit_radius(&inner.centre, inner.radius_sq, d)
        } else {
            0.0
        };
        let line: f64 = radial
            .mapped(r_lo, r_hi)
            .map(|(r, wr)| wr * integrand(&(*d * r)) * math::powi(r, m as i32 - 1))
            .sum();
        total += w * line;
    }
    if !total.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(total)
}

/// `int_{E_s} |grad u|^p`.
pub fn energy(
    map: &dyn MapSolution,
    family: &QBallFamily,
    s: f64,
    spec: &PolarSpec,
) -> Result<f64> {
    check_family(map, family)?;
    let p = map.p();
    integrate_ball_band(
        family,
        0.0,
        s,
        &|x| {
            let (g2, w) = energy_parts(&map.gradient(x), p);
            w * g2
        },
        spec,
    )
}

/// `s^((p-m)/2) int_{E_s^(q)} |grad u|^p`.
pub fn energy_ratio(
    map: &dyn MapSolution,
    family: &QBallFamily,
    s: f64,
    spec: &PolarSpec,
) -> Result<f64> {
    let e = energy(map, family, s, spec)?;
    Ok(math::powf(s, 0.5 * (map.p() - map.m() as f64)) * e)
}

/// The two boundary terms `(A, B)` of the differential identity.
pub fn pharm_boundary_terms(
    map: &dyn MapSolution,
    family: &QBallFamily,
    s: f64,
    spec: &PolarSpec,
) -> Result<(f64, f64)> {
    check_family(map, family)?;
    let (c, r) = family.centre_and_radius(s)?;
    let (p, q, m) = (map.p(), family.q(), map.m() as f64);
    let y = *family.y();
    let y2 = y.norm_sq();
    let sphere = SphereRule::new(map.m(), spec.polar_nodes);
    let a_int = sphere.integrate_sphere(&c, r, |x| {
        let g = map.gradient(x);
        let (g2, w) = energy_parts(&g, p);
        w * (y2 * g2 - g.contract_rows(&y).norm_sq())
    });
    let b_int = sphere.integrate_sphere(&c, r, |x| {
        let g = map.gradient(x);
        let (_, w) = energy_parts(&g, p);
        w * (p * g.contract_rows(x).norm_sq() - (p - q) * s * s * g.contract_rows(&y).norm_sq())
    });
    let a = q * math::powf(s, 0.5 * (p - m + 2.0)) / (2.0 * r) * a_int;
    let b = math::powf(s, 0.5 * (p - m - 2.0)) / (2.0 * r) * b_int;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok((a, b))
}

/// Bulk form of `ratio(t) - ratio(s)` over `E_t \ E_s`.
pub fn pharm_bulk_increment(
    map: &dyn MapSolution,
    family: &QBallFamily,
    s: f64,
    t: f64,
    spec: &PolarSpec,
) -> Result<f64> {
    check_family(map, family)?;
    if !(s > 0.0 && t > s) {
        return Err(Error::Domain("bulk increment needs 0 < s < t"));
    }
    let (p, q, m) = (map.p(), family.q(), map.m() as f64);
    let y = *family.y();
    let y2 = y.norm_sq();
    integrate_ball_band(
        family,
        s,
        t,
        &|x| {
            let f = match family.level_function(x) {
                Ok(f) => f,
                Err(_) => return f64::NAN,
            };
            let g = map.gradient(x);
            let (g2, w) = energy_parts(&g, p);
            let yu = g.contract_rows(&y).norm_sq();
            let xu = g.contract_rows(x).norm_sq();
            let den = family.gradient_denominator(x, f);
            let first = q * math::powf(f, 0.5 * (p - m + 4.0)) * (y2 * g2 - yu);
            let second = math::powf(f, 0.5 * (p - m)) * (p * xu - (p - q) * f * f * yu);
            w * (first + second) / den
        },
        spec,
    )
}

/// Samples of the p-harmonic identities over a scale grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PharmReport {
    pub grid: Vec<f64>,
    pub ratio: Vec<f64>,
    /// The `q`-term of the boundary identity.
    pub a: Vec<f64>,
    /// The `p`-term of the boundary identity.
    pub b: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    /// `|fd - (A + B)| / (1 + |A + B|)`.
    pub flux_residual: Vec<f64>,
    /// Bulk increments between consecutive grid points.
    pub bulk_increment: Vec<f64>,
    /// `|diff - bulk| / max(|diff|, 1)`.
    pub bulk_residual: Vec<f64>,
    pub verdict: Verdict,
}

impl PharmReport {
    pub fn max_flux_residual(&self) -> f64 {
        self.flux_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_bulk_residual(&self) -> f64 {
        self.bulk_residual.iter().copied().fold(0.0, f64::max)
    }
}

pub fn pharm_report(
    map: &dyn MapSolution,
    family: &QBallFamily,
    grid: &[f64],
    spec: &PolarSpec,
) -> Result<PharmReport> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("grid must be positive and increasing"));
    }
    let mut r = PharmReport {
        grid: grid.to_vec(),
        ratio: Vec::new(),
        a: Vec::new(),
        b: Vec::new(),
        fd_derivative: Vec::new(),
        flux_residual: Vec::new(),
        bulk_increment: Vec::new(),
        bulk_residual: Vec::new(),
        verdict: Verdict::Monotone,
    };
    for &s in grid {
        r.ratio.push(energy_ratio(map, family, s, spec)?);
        let (a, b) = pharm_boundary_terms(map, family, s, spec)?;
        let fd = series::derivative5(|t| energy_ratio(map, family, t, spec), s, 1e-3 * s)?;
        r.flux_residual.push(series::mixed_residual(fd, a + b));
        r.a.push(a);
        r.b.push(b);
        r.fd_derivative.push(fd);
    }
    for (i, w) in grid.windows(2).enumerate() {
        let bulk = pharm_bulk_increment(map, family, w[0], w[1], spec)?;
        let diff = r.ratio[i + 1] - r.ratio[i];
        r.bulk_residual.push(series::relative_residual(bulk, diff));
        r.bulk_increment.push(bulk);
    }
    r.verdict = series::monotone_verdict(&r.ratio, Direction::Nondecreasing, 1e-8);
    Ok(r)
}

/// Exponent `(q-1)/(p-1) (p-m)/2` of the general monotone quantity.
pub fn scaled_energy_exponent(p: f64, q: f64, m: usize) -> f64 {
    (q - 1.0) / (p - 1.0) * 0.5 * (p - m as f64)
}

/// The two scaled energy quantities on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledEnergies {
    pub grid: Vec<f64>,
    /// `s^((q-1)/(p-1) (p-m)/2) int_{E_s^(q)} |grad u|^p` for the given family.
    pub general: Vec<f64>,
    pub general_verdict: Verdict,
    /// `s^((p-m)/2) int_{E_s^(p)} |grad u|^p`.
    pub sharp: Vec<f64>,
    pub sharp_verdict: Verdict,
    /// Whether the sharp quantity has range below `1e-8`.
    pub sharp_constant: bool,
}

pub fn scaled_energies(
    map: &dyn MapSolution,
    family: &QBallFamily,
    grid: &[f64],
    spec: &PolarSpec,
) -> Result<ScaledEnergies> {
    let (p, m) = (map.p(), map.m());
    let sharp_family = QBallFamily::new(*family.y(), p)?;
    let ex = scaled_energy_exponent(p, family.q(), m);
    let mut general = Vec::with_capacity(grid.len());
    let mut sharp = Vec::with_capacity(grid.len());
    for &s in grid {
        general.push(math::powf(s, ex) * energy(map, family, s, spec)?);
        sharp.push(energy_ratio(map, &sharp_family, s, spec)?);
    }
    Ok(ScaledEnergies {
        grid: grid.to_vec(),
        general_verdict: series::monotone_verdict(&general, Direction::Nondecreasing, 1e-8),
        sharp_verdict: series::monotone_verdict(&sharp, Direction::Nondecreasing, 1e-8),
        sharp_constant: series::range(&sharp) < 1e-8,
        general,
        sharp,
    })
}

/// Polynomial vector field `R^m -> R^m` of bounded total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialField {
    m: usize,
    exponents: Vec<[u8; 6]>,
    /// `coeffs[j * exponents.len() + t]` multiplies monomial `t` in component `j`.
    coeffs: Vec<f64>,
}

fn monomials(m: usize, degree: usize) -> Vec<[u8; 6]> {
    let mut out = Vec::new();
    let mut e = [0u8; 6];
    loop {
        let total: usize = e[..m].iter().map(|&v| v as usize).sum();
        if total <= degree {
            out.push(e);
        }
        let mut a = 0;
        while a < m {
            e[a] += 1;
            if e[a] as usize <= degree {
                break;
            }
            e[a] = 0;
            a += 1;
        }
        if a == m {
            break;
        }
    }
    out
}

impl PolynomialField {
    /// Number of coefficients needed for `from_coefficients`.
    pub fn coefficient_count(m: usize, degree: usize) -> usize {
        m * monomials(m, degree).len()
    }

    pub fn from_coefficients(m: usize, degree: usize, coeffs: &[f64]) -> Result<Self> {
        let exponents = monomials(m, degree);
        if coeffs.len() != m * exponents.len() {
            return Err(Error::DimensionMismatch {
                expected: m * exponents.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self {
            m,
            exponents,
            coeffs: coeffs.to_vec(),
        })
    }

    /// `X(x) = x`.
    pub fn position(m: usize) -> Self {
        let exponents = monomials(m, 1);
        let mut coeffs = alloc::vec![0.0; m * exponents.len()];
        for j in 0..m {
            let t = exponents
                .iter()
                .position(|e| (0..m).all(|a| e[a] == u8::from(a == j)))
                .expect("linear monomial");
            coeffs[j * exponents.len() + t] = 1.0;
        }
        Self {
            m,
            exponents,
            coeffs,
        }
    }

    fn monomial(&self, e: &[u8; 6], x: &RealVec) -> f64 {
        (0..self.m).map(|a| math::powi(x[a], e[a] as i32)).product()
    }

    pub fn value(&self, x: &RealVec) -> RealVec {
        let nt = self.exponents.len();
        let mut out = RealVec::zeros(self.m);
        for (t, e) in self.exponents.iter().enumerate() {
            let v = self.monomial(e, x);
            for j in 0..self.m {
                out[j] += self.coeffs[j * nt + t] * v;
            }
        }
        out
    }

    /// `m x m` matrix with entries `d_i X^j` (row `i`, column `j`).
    pub fn jacobian(&self, x: &RealVec) -> Mat {
        let nt = self.exponents.len();
        let mut out = Mat::zeros(self.m, self.m);
        for (t, e) in self.exponents.iter().enumerate() {
            for i in 0..self.m {
                if e[i] == 0 {
                    continue;
                }
                let mut d = *e;
                d[i] -= 1;
                let v = e[i] as f64 * self.monomial(&d, x);
                for j in 0..self.m {
                    out.set(i, j, out.get(i, j) + self.coeffs[j * nt + t] * v);
                }
            }
        }
        out
    }
}

/// `(bulk, boundary, |bulk - boundary| / (1 + |bulk|))` for the stationarity
/// identity of `map` on an axis-aligned box.
pub fn stationarity_check(
    map: &dyn MapSolution,
    domain: &ParamBox,
    field: &PolynomialField,
    spec: &QuadratureSpec,
) -> Result<(f64, f64, f64)> {
    let m = map.m();
    if domain.dim() != m || field.m != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: domain.dim(),
        });
    }
    let p = map.p();
    let basis: Vec<RealVec> = (0..m).map(|i| RealVec::basis(m, i)).collect();
    let body = FlatPlane::new(RealVec::zeros(m), &basis, *domain, "box");
    let bulk = integrate_patch(
        &body,
        domain,
        &|pt| {
            let x = &pt.x;
            let g = map.gradient(x);
            let (g2, w) = energy_parts(&g, p);
            let jac = field.jacobian(x);
            let mut div = 0.0;
            let mut contraction = 0.0;
            for i in 0..m {
                div += jac.get(i, i);
                let gi = g.row(i);
                for j in 0..m {
                    contraction += jac.get(i, j) * gi.dot(&g.row(j));
                }
            }
            w * (g2 * div - p * contraction)
        },
        spec,
    )?
    .value;
    let mut boundary = 0.0;
    for axis in 0..m {
        for (side, sign) in [(domain.lo[axis], -1.0), (domain.hi[axis], 1.0)] {
            let others: Vec<usize> = (0..m).filter(|&a| a != axis).collect();
            let lo: Vec<f64> = others.iter().map(|&a| domain.lo[a]).collect();
            let hi: Vec<f64> = others.iter().map(|&a| domain.hi[a]).collect();
            let face_box = ParamBox::new(&lo, &hi);
            let face_basis: Vec<RealVec> = others.iter().map(|&a| basis[a]).collect();
            let face = FlatPlane::new(basis[axis] * side, &face_basis, face_box, "face");
            let nu = basis[axis] * sign;
            boundary += integrate_patch(
                &face,
                &face_box,
                &|pt| {
                    let x = &pt.x;
                    let g = map.gradient(x);
                    let (g2, w) = energy_parts(&g, p);
                    let xv = field.value(x);
                    w * (g2 * xv.dot(&nu) - p * g.contract_rows(&xv).dot(&g.contract_rows(&nu)))
                },
                spec,
            )?
            .value;
        }
    }
    let residual = (bulk - boundary).abs() / (1.0 + bulk.abs());
    Ok((bulk, boundary, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    fn polar() -> PolarSpec {
        PolarSpec::default()
    }

    fn linear3() -> LinearMap {
        let g = Mat::from_rows(&[&[1.0, 0.2], &[-0.5, 0.3], &[0.1, 0.7]]);
        LinearMap::new(g, 2.0).unwrap()
    }

    #[test]
    fn radial_ratio_is_eight_pi() {
        let u = RadialProjection::new(3, 2.0).unwrap();
        let fam = QBallFamily::new(RealVec::zeros(3), 2.0).unwrap();
        for s in [0.01, 0.3, 1.0] {
            let r = energy_ratio(&u, &fam, s, &polar()).unwrap();
            assert!((r - 8.0 * PI).abs() < 1e-10, "{r}");
            let (a, b) = pharm_boundary_terms(&u, &fam, s, &polar()).unwrap();
            assert!(a.abs() < 1e-12 && b.abs() < 1e-10);
        }
        let inc = pharm_bulk_increment(&u, &fam, 0.2, 0.7, &polar()).unwrap();
        assert!(inc.abs() < 1e-10);
    }

    #[test]
    fn linear_ratio_closed_form() {
        let u = linear3();
        let fam = QBallFamily::new(RealVec::zeros(3), 2.0).unwrap();
        let vol = math::unit_ball_volume(3);
        for s in [0.1, 0.5] {
            let r = energy_ratio(&u, &fam, s, &polar()).unwrap();
            let want = u.grad.norm_sq() * vol * s;
            assert!((r - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn identities_for_moving_centre() {
        let y = RealVec::from_slice(&[0.4, 0.0, 0.0]);
        let maps: [&dyn MapSolution; 2] = [&linear3(), &RadialProjection::new(3, 2.0).unwrap()];
        for u in maps {
            for q in [1.0, 1.5, 2.0] {
                let fam = QBallFamily::new(y, q).unwrap();
                let rep = pharm_report(u, &fam, &[0.05, 0.2, 0.6, 1.0], &polar()).unwrap();
                assert!(
                    rep.max_flux_residual() < 1e-6,
                    "{} q={q}: {rep:?}",
                    u.label()
                );
                assert!(
                    rep.max_bulk_residual() < 1e-8,
                    "{} q={q}: {rep:?}",
                    u.label()
                );
                assert!(rep.a.iter().all(|a| *a >= -1e-12));
            }
        }
    }

    #[test]
    fn sharp_scaled_energy_grows_for_radial_map() {
        let y = RealVec::from_slice(&[0.4, 0.0, 0.0]);
        let u = RadialProjection::new(3, 2.0).unwrap();
        let fam = QBallFamily::new(y, 1.5).unwrap();
        let c = scaled_energies(&u, &fam, &[0.1, 0.3, 0.9], &polar()).unwrap();
        assert!(c.general_verdict.is_monotone() && c.sharp_verdict.is_monotone());
        assert!(!c.sharp_constant);
        assert!(c.sharp.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn polynomial_field_jacobian() {
        let n = PolynomialField::coefficient_count(3, 3);
        let coeffs: Vec<f64> = (0..n).map(|i| math::sin(i as f64 * 1.7)).collect();
        let x_field = PolynomialField::from_coefficients(3, 3, &coeffs).unwrap();
        let x = RealVec::from_slice(&[0.3, -0.7, 1.1]);
        let jac = x_field.jacobian(&x);
        let h = 1e-6;
        for i in 0..3 {
            let e = RealVec::basis(3, i);
            let fd = (x_field.value(&x.axpy(h, &e)) - x_field.value(&x.axpy(-h, &e))) * (0.5 / h);
            for j in 0..3 {
                assert!((fd[j] - jac.get(i, j)).abs() < 1e-7);
            }
        }
        let pos = PolynomialField::position(3);
        assert_eq!(pos.value(&x), x);
    }

    #[test]
    fn stationarity_of_catalog_maps() {
        let bx = ParamBox::new(&[0.5, -0.4, -0.3], &[1.4, 0.6, 0.5]);
        let spec = QuadratureSpec::default().with_cells(4);
        let pos = PolynomialField::position(3);
        let (bulk, _, res) = stationarity_check(&linear3(), &bx, &pos, &spec).unwrap();
        assert!((bulk - linear3().grad.norm_sq() * bx.volume()).abs() < 1e-12);
        assert!(res < 1e-8);
        let n = PolynomialField::coefficient_count(3, 3);
        let coeffs: Vec<f64> = (0..n).map(|i| math::cos(i as f64 * 0.9)).collect();
        let xf = PolynomialField::from_coefficients(3, 3, &coeffs).unwrap();
        let u = RadialProjection::new(3, 2.0).unwrap();
        let (_, _, res) = stationarity_check(&u, &bx, &xf, &spec).unwrap();
        assert!(res < 1e-6, "{res}");
    }
}
