//! Closed-form patches: planes, disks, spheres, cylinders, catenoids,
//! helicoids and spherical caps.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::math;
use crate::patch::{Frame, ParamBox, Patch, Surface, MAX_K};
use crate::vector::RealVec;

/// Orthonormal basis of the orthogonal complement of `normal` in `R^n`.
pub fn orthonormal_complement(normal: &RealVec) -> Vec<RealVec> {
    let n = normal.dim();
    let nu = *normal * (1.0 / normal.norm());
    let mut out: Vec<RealVec> = Vec::with_capacity(n - 1);
    for i in 0..n {
        if out.len() == n - 1 {
            break;
        }
        let mut v = RealVec::basis(n, i);
        v = v.axpy(-v.dot(&nu), &nu);
        for b in &out {
            v = v.axpy(-v.dot(b), b);
        }
        let len = v.norm();
        if len > 1e-6 {
            out.push(v * (1.0 / len));
        }
    }
    out
}

/// Affine `k`-plane `origin + sum u_i e_i` over a parameter box.
#[derive(Clone, Debug)]
pub struct FlatPlane {
    origin: RealVec,
    basis: [RealVec; MAX_K],
    k: usize,
    domain: ParamBox,
    label: &'static str,
}

impl FlatPlane {
    pub fn new(origin: RealVec, basis: &[RealVec], domain: ParamBox, label: &'static str) -> Self {
        let k = basis.len();
        assert!((1..=MAX_K).contains(&k) && domain.dim() == k);
        let mut b = [RealVec::zeros(origin.dim()); MAX_K];
        b[..k].copy_from_slice(basis);
        Self {
            origin,
            basis: b,
            k,
            domain,
            label,
        }
    }

    fn square(k: usize, half_width: f64) -> ParamBox {
        let lo = alloc::vec![-half_width; k];
        let hi = alloc::vec![half_width; k];
        ParamBox::new(&lo, &hi)
    }

    /// Hyperplane through `point` with normal `normal`, chart `[-w, w]^(n-1)`.
    pub fn orthogonal_to(point: RealVec, normal: &RealVec, half_width: f64) -> Self {
        let basis = orthonormal_complement(normal);
        let k = basis.len();
        Self::new(point, &basis, Self::square(k, half_width), "plane")
    }

    /// `k`-plane through `point` spanned by the first `k` of `basis`.
    pub fn spanned(point: RealVec, basis: &[RealVec], half_width: f64) -> Self {
        Self::new(point, basis, Self::square(basis.len(), half_width), "plane")
    }

    /// Hyperplane through `point` whose normal is `y/|y|` rotated by `angle`
    /// towards the last coordinate axis (`e_1` when `y = 0`).
    pub fn tilted(y: &RealVec, angle: f64, point: RealVec, half_width: f64) -> Self {
        let n = y.dim();
        let yhat = if y.norm() > 0.0 {
            *y * (1.0 / y.norm())
        } else {
            RealVec::basis(n, 0)
        };
        let mut e = RealVec::basis(n, n - 1);
        if (e.dot(&yhat)).abs() > 0.9 {
            e = RealVec::basis(n, 0);
        }
        e = e.axpy(-e.dot(&yhat), &yhat);
        e = e * (1.0 / e.norm());
        let normal = yhat * math::cos(angle) + e * math::sin(angle);
        let mut p = Self::orthogonal_to(point, &normal, half_width);
        p.label = "tilted-plane";
        p
    }

    pub fn with_label(mut self, label: &'static str) -> Self {
        self.label = label;
        self
    }

    pub fn origin(&self) -> &RealVec {
        &self.origin
    }

    pub fn basis(&self) -> &[RealVec] {
        &self.basis[..self.k]
    }
}

impl Patch for FlatPlane {
    fn k(&self) -> usize {
        self.k
    }
    fn n(&self) -> usize {
        self.origin.dim()
    }
    fn domain(&self) -> ParamBox {
        self.domain
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let mut x = self.origin;
        for i in 0..self.k {
            x = x.axpy(u[i], &self.basis[i]);
        }
        x
    }
    fn jacobian(&self, _u: &RealVec) -> Frame {
        Frame::new(&self.basis[..self.k])
    }
    fn mean_curvature(&self, _u: &RealVec) -> Option<RealVec> {
        Some(RealVec::zeros(self.origin.dim()))
    }
    fn label(&self) -> &str {
        self.label
    }
}

/// Flat disk `centre + r (cos t e1 + sin t e2)` in polar coordinates
/// `(r, t) in [0, radius] x [-pi, pi]`.
#[derive(Clone, Debug)]
pub struct PolarDisk {
    pub centre: RealVec,
    pub e1: RealVec,
    pub e2: RealVec,
    pub radius: f64,
}

/// The unit disk in the `x1 x2`-plane of `R^3`.
pub fn unit_disk() -> PolarDisk {
    PolarDisk {
        centre: RealVec::zeros(3),
        e1: RealVec::basis(3, 0),
        e2: RealVec::basis(3, 1),
        radius: 1.0,
    }
}

impl Patch for PolarDisk {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        self.centre.dim()
    }
    fn domain(&self) -> ParamBox {
        ParamBox::new(&[0.0, -math::PI], &[self.radius, math::PI])
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let (c, s) = (math::cos(u[1]), math::sin(u[1]));
        self.centre
            .axpy(u[0] * c, &self.e1)
            .axpy(u[0] * s, &self.e2)
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let (c, s) = (math::cos(u[1]), math::sin(u[1]));
        Frame::new(&[
            self.e1 * c + self.e2 * s,
            (self.e2 * c - self.e1 * s) * u[0],
        ])
    }
    fn mean_curvature(&self, _u: &RealVec) -> Option<RealVec> {
        Some(RealVec::zeros(self.centre.dim()))
    }
    fn label(&self) -> &str {
        "disk"
    }
    fn edge_is_boundary(&self, axis: usize) -> bool {
        axis == 0
    }
}

/// Round 2-sphere in `R^3`, chart `(theta, phi) in [0, pi] x [-pi, pi]`.
#[derive(Clone, Debug)]
pub struct Sphere {
    pub centre: RealVec,
    pub radius: f64,
}

impl Sphere {
    pub fn new(centre: RealVec, radius: f64) -> Self {
        assert_eq!(centre.dim(), 3);
        Self { centre, radius }
    }
}

impl Patch for Sphere {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamBox {
        ParamBox::new(&[0.0, -math::PI], &[math::PI, math::PI])
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let (st, ct) = (math::sin(u[0]), math::cos(u[0]));
        let (sp, cp) = (math::sin(u[1]), math::cos(u[1]));
        self.centre + RealVec::from_slice(&[st * cp, st * sp, ct]) * self.radius
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let (st, ct) = (math::sin(u[0]), math::cos(u[0]));
        let (sp, cp) = (math::sin(u[1]), math::cos(u[1]));
        let r = self.radius;
        Frame::new(&[
            RealVec::from_slice(&[r * ct * cp, r * ct * sp, -r * st]),
            RealVec::from_slice(&[-r * st * sp, r * st * cp, 0.0]),
        ])
    }
    fn mean_curvature(&self, u: &RealVec) -> Option<RealVec> {
        let x = self.embed(u);
        Some((self.centre - x) * (2.0 / (self.radius * self.radius)))
    }
    fn label(&self) -> &str {
        "sphere"
    }
    fn edge_is_boundary(&self, _axis: usize) -> bool {
        false
    }
}

/// Circle `centre + R (cos t, sin t, 0, ...)`.
#[derive(Clone, Debug)]
pub struct Circle {
    pub centre: RealVec,
    pub radius: f64,
}

impl Patch for Circle {
    fn k(&self) -> usize {
        1
    }
    fn n(&self) -> usize {
        self.centre.dim()
    }
    fn domain(&self) -> ParamBox {
        ParamBox::new(&[-math::PI], &[math::PI])
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let mut x = self.centre;
        x[0] += self.radius * math::cos(u[0]);
        x[1] += self.radius * math::sin(u[0]);
        x
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let mut d = RealVec::zeros(self.centre.dim());
        d[0] = -self.radius * math::sin(u[0]);
        d[1] = self.radius * math::cos(u[0]);
        Frame::new(&[d])
    }
    fn mean_curvature(&self, u: &RealVec) -> Option<RealVec> {
        Some((self.centre - self.embed(u)) * (1.0 / (self.radius * self.radius)))
    }
    fn label(&self) -> &str {
        "circle"
    }
    fn edge_is_boundary(&self, _axis: usize) -> bool {
        false
    }
}

/// Cylinder `(R cos t, R sin t, z)` about the `x3`-axis, `|z| <= half_length`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub radius: f64,
    pub half_length: f64,
}

impl Patch for Cylinder {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamBox {
        ParamBox::new(
            &[-math::PI, -self.half_length],
            &[math::PI, self.half_length],
        )
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let r = self.radius;
        RealVec::from_slice(&[r * math::cos(u[0]), r * math::sin(u[0]), u[1]])
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let r = self.radius;
        Frame::new(&[
            RealVec::from_slice(&[-r * math::sin(u[0]), r * math::cos(u[0]), 0.0]),
            RealVec::basis(3, 2),
        ])
    }
    fn mean_curvature(&self, u: &RealVec) -> Option<RealVec> {
        let r = self.radius;
        Some(RealVec::from_slice(&[
            -math::cos(u[0]) / r,
            -math::sin(u[0]) / r,
            0.0,
        ]))
    }
    fn label(&self) -> &str {
        "cylinder"
    }
    fn edge_is_boundary(&self, axis: usize) -> bool {
        axis == 1
    }
}

/// Catenoid `(a cosh(v/a) cos t, a cosh(v/a) sin t, v)` with neck radius `a`,
/// optionally times a line `w` (then in `R^4`).
#[derive(Clone, Debug)]
pub struct Catenoid {
    pub neck: f64,
    pub half_height: f64,
    /// Half-length of the extra flat factor; `None` for the plain catenoid.
    pub line: Option<f64>,
}

impl Catenoid {
    pub fn new(neck: f64) -> Self {
        Self {
            neck,
            half_height: 0.7,
            line: None,
        }
    }

    pub fn times_line(neck: f64, half_length: f64) -> Self {
        Self {
            neck,
            half_height: 0.7,
            line: Some(half_length),
        }
    }
}

impl Patch for Catenoid {
    fn k(&self) -> usize {
        2 + self.line.is_some() as usize
    }
    fn n(&self) -> usize {
        3 + self.line.is_some() as usize
    }
    fn domain(&self) -> ParamBox {
        let h = self.half_height;
        match self.line {
            None => ParamBox::new(&[-math::PI, -h], &[math::PI, h]),
            Some(l) => ParamBox::new(&[-math::PI, -h, -l], &[math::PI, h, l]),
        }
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let a = self.neck;
        let rho = a * math::cosh(u[1] / a);
        let mut x = RealVec::zeros(self.n());
        x[0] = rho * math::cos(u[0]);
        x[1] = rho * math::sin(u[0]);
        x[2] = u[1];
        if self.line.is_some() {
            x[3] = u[2];
        }
        x
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let a = self.neck;
        let n = self.n();
        let rho = a * math::cosh(u[1] / a);
        let drho = math::sinh(u[1] / a);
        let (c, s) = (math::cos(u[0]), math::sin(u[0]));
        let mut dt = RealVec::zeros(n);
        dt[0] = -rho * s;
        dt[1] = rho * c;
        let mut dv = RealVec::zeros(n);
        dv[0] = drho * c;
        dv[1] = drho * s;
        dv[2] = 1.0;
        if self.line.is_some() {
            Frame::new(&[dt, dv, RealVec::basis(n, 3)])
        } else {
            Frame::new(&[dt, dv])
        }
    }
    fn mean_curvature(&self, _u: &RealVec) -> Option<RealVec> {
        Some(RealVec::zeros(self.n()))
    }
    fn label(&self) -> &str {
        if self.line.is_some() {
            "catenoid-x-line"
        } else {
            "catenoid"
        }
    }
    fn edge_is_boundary(&self, axis: usize) -> bool {
        axis != 0
    }
}

/// Helicoid `(v cos t, v sin t, c t)`.
#[derive(Clone, Debug)]
pub struct Helicoid {
    pub pitch: f64,
    pub half_turn: f64,
    pub half_width: f64,
}

impl Helicoid {
    pub fn new(pitch: f64) -> Self {
        Self {
            pitch,
            half_turn: 1.1 / pitch,
            half_width: 1.05,
        }
    }
}

impl Patch for Helicoid {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamBox {
        ParamBox::new(
            &[-self.half_turn, -self.half_width],
            &[self.half_turn, self.half_width],
        )
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let (t, v) = (u[0], u[1]);
        RealVec::from_slice(&[v * math::cos(t), v * math::sin(t), self.pitch * t])
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let (t, v) = (u[0], u[1]);
        let (c, s) = (math::cos(t), math::sin(t));
        Frame::new(&[
            RealVec::from_slice(&[-v * s, v * c, self.pitch]),
            RealVec::from_slice(&[c, s, 0.0]),
        ])
    }
    fn mean_curvature(&self, _u: &RealVec) -> Option<RealVec> {
        Some(RealVec::zeros(3))
    }
    fn label(&self) -> &str {
        "helicoid"
    }
}

/// Cap of the sphere of radius `R` through `apex` with centre
/// `apex + R nu`, written as a graph over the tangent plane at `apex`.
#[derive(Clone, Debug)]
pub struct SphericalCap {
    apex: RealVec,
    nu: RealVec,
    e1: RealVec,
    e2: RealVec,
    radius: f64,
    half_width: f64,
}

impl SphericalCap {
    pub fn new(apex: RealVec, nu: &RealVec, radius: f64, half_width: f64) -> Self {
        assert_eq!(apex.dim(), 3);
        assert!(
            half_width * math::sqrt(2.0) < radius,
            "chart must stay below the equator"
        );
        let nu = *nu * (1.0 / nu.norm());
        let basis = orthonormal_complement(&nu);
        Self {
            apex,
            nu,
            e1: basis[0],
            e2: basis[1],
            radius,
            half_width,
        }
    }

    pub fn centre(&self) -> RealVec {
        self.apex.axpy(self.radius, &self.nu)
    }
}

impl Patch for SphericalCap {
    fn k(&self) -> usize {
        2
    }
    fn n(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamBox {
        let w = self.half_width;
        ParamBox::new(&[-w, -w], &[w, w])
    }
    fn embed(&self, u: &RealVec) -> RealVec {
        let r = self.radius;
        let h = r - math::sqrt(r * r - u[0] * u[0] - u[1] * u[1]);
        self.apex
            .axpy(u[0], &self.e1)
            .axpy(u[1], &self.e2)
            .axpy(h, &self.nu)
    }
    fn jacobian(&self, u: &RealVec) -> Frame {
        let r = self.radius;
        let root = math::sqrt(r * r - u[0] * u[0] - u[1] * u[1]);
        Frame::new(&[
            self.e1.axpy(u[0] / root, &self.nu),
            self.e2.axpy(u[1] / root, &self.nu),
        ])
    }
    fn mean_curvature(&self, u: &RealVec) -> Option<RealVec> {
        let x = self.embed(u);
        Some((self.centre() - x) * (2.0 / (self.radius * self.radius)))
    }
    fn label(&self) -> &str {
        "spherical-cap"
    }
}

/// Two transverse planes through `point` (density 2 there).
pub fn pair_of_planes(point: RealVec, half_width: f64) -> Surface {
    let n = point.dim();
    let a = FlatPlane::orthogonal_to(point, &RealVec::basis(n, 0), half_width);
    let b = FlatPlane::orthogonal_to(point, &RealVec::basis(n, 1), half_width);
    Surface::union("pair-of-planes", alloc::vec![Box::new(a), Box::new(b)])
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::patch::PatchPoint;
    use alloc::boxed::Box;

    pub(crate) fn all_patches() -> Vec<Box<dyn Patch>> {
        let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
        alloc::vec![
            Box::new(FlatPlane::tilted(
                &y,
                math::PI / 6.0,
                RealVec::zeros(3),
                1.05
            )),
            Box::new(FlatPlane::spanned(
                RealVec::zeros(4),
                &[
                    RealVec::basis(4, 0),
                    RealVec::basis(4, 1),
                    RealVec::basis(4, 3)
                ],
                1.0,
            )),
            Box::new(unit_disk()),
            Box::new(Sphere::new(RealVec::from_slice(&[0.1, 0.0, -0.2]), 1.3)),
            Box::new(Circle {
                centre: RealVec::zeros(2),
                radius: math::sqrt(2.0),
            }),
            Box::new(Cylinder {
                radius: 1.2,
                half_length: 3.0,
            }),
            Box::new(Catenoid::new(0.5)),
            Box::new(Catenoid::times_line(0.5, 1.0)),
            Box::new(Helicoid::new(0.5)),
            Box::new(SphericalCap::new(
                y,
                &RealVec::from_slice(&[0.0, 0.0, 1.0]),
                2.0,
                1.35
            )),
        ]
    }

    fn interior_point(p: &dyn Patch, t: f64) -> RealVec {
        let d = p.domain();
        let mut u = d.lo;
        for i in 0..p.k() {
            let frac = 0.13 + 0.71 * ((t * (i + 1) as f64 * 0.618).fract());
            u[i] = d.lo[i] + frac * d.width(i);
        }
        u
    }

    /// Mean curvature from second differences: trace of the second
    /// fundamental form, `g^{ij} (d_ij x)^perp`.
    fn fd_mean_curvature(p: &dyn Patch, u: &RealVec) -> RealVec {
        let k = p.k();
        let pt = PatchPoint::at(p, u).unwrap();
        let g = pt.frame.gram();
        // invert the Gram matrix column by column
        let mut ginv = [[0.0; MAX_K]; MAX_K];
        for j in 0..k {
            let mut e = [0.0; MAX_K];
            e[j] = 1.0;
            let c = pt.metric.solve(&e);
            for i in 0..k {
                ginv[i][j] = c[i];
            }
        }
        let _ = g;
        let h = 1e-4;
        let mut trace = RealVec::zeros(p.n());
        for i in 0..k {
            for j in 0..k {
                let at = |di: f64, dj: f64| {
                    let mut v = *u;
                    v[i] += di;
                    v[j] += dj;
                    p.embed(&v)
                };
                let dij = if i == j {
                    (at(h, 0.0) - p.embed(u) * 2.0 + at(-h, 0.0)) * (1.0 / (h * h))
                } else {
                    (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) * (1.0 / (4.0 * h * h))
                };
                trace = trace.axpy(ginv[i][j], &pt.normal(&dij));
            }
        }
        trace
    }

    #[test]
    fn jacobians_match_finite_differences() {
        for p in all_patches() {
            for t in 1..6 {
                let u = interior_point(p.as_ref(), t as f64);
                let frame = p.jacobian(&u);
                for i in 0..p.k() {
                    let h = 1e-6;
                    let mut up = u;
                    let mut um = u;
                    up[i] += h;
                    um[i] -= h;
                    let fd = (p.embed(&up) - p.embed(&um)) * (0.5 / h);
                    let err = (fd - *frame.row(i)).norm();
                    assert!(
                        err <= 1e-6 * frame.row(i).norm().max(1.0),
                        "{} axis {i}",
                        p.label()
                    );
                }
            }
        }
    }

    #[test]
    fn mean_curvature_is_normal_and_correct() {
        for p in all_patches() {
            for t in 1..6 {
                let u = interior_point(p.as_ref(), t as f64);
                let h = p.mean_curvature(&u).unwrap();
                let frame = p.jacobian(&u);
                for row in frame.rows() {
                    assert!(h.dot(row).abs() < 1e-10, "{}", p.label());
                }
                let fd = fd_mean_curvature(p.as_ref(), &u);
                assert!((fd - h).norm() < 1e-5, "{}: {:?} vs {:?}", p.label(), fd, h);
            }
        }
    }

    #[test]
    fn tilted_plane_normal() {
        let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
        let p = FlatPlane::tilted(&y, math::PI / 6.0, RealVec::zeros(3), 1.0);
        let u = RealVec::zeros(2);
        let nv = crate::patch::normal_part(&p, &u, &RealVec::basis(3, 0)).unwrap();
        // |e1^perp| = cos(30 deg)
        assert!((nv.norm() - math::cos(math::PI / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn complement_is_orthonormal() {
        let n = RealVec::from_slice(&[0.3, -1.0, 0.2, 0.5]);
        let b = orthonormal_complement(&n);
        assert_eq!(b.len(), 3);
        for i in 0..3 {
            assert!(b[i].dot(&n).abs() < 1e-14);
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b[i].dot(&b[j]) - want).abs() < 1e-14);
            }
        }
    }
}
