//! Parametric patches and tangent-space projections.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::vector::RealVec;

/// Largest supported intrinsic dimension of a patch.
pub const MAX_K: usize = 4;

/// Gram determinants at or below this value declare a chart singular.
pub const GRAM_FLOOR: f64 = 1e-14;

/// Axis-aligned box in parameter space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamBox {
    pub lo: RealVec,
    pub hi: RealVec,
}

impl ParamBox {
    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(hi).all(|(a, b)| a < b), "empty box");
        Self {
            lo: RealVec::from_slice(lo),
            hi: RealVec::from_slice(hi),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn centre(&self) -> RealVec {
        (self.lo + self.hi) * 0.5
    }

    pub fn contains(&self, u: &RealVec) -> bool {
        (0..self.dim()).all(|i| u[i] >= self.lo[i] && u[i] <= self.hi[i])
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }
}

/// The `k` tangent vectors `d embed / d u_i` at a parameter point.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    rows: [RealVec; MAX_K],
    k: usize,
}

impl Frame {
    pub fn new(rows: &[RealVec]) -> Self {
        assert!(!rows.is_empty() && rows.len() <= MAX_K);
        let n = rows[0].dim();
        let mut all = [RealVec::zeros(n); MAX_K];
        all[..rows.len()].copy_from_slice(rows);
        Self {
            rows: all,
            k: rows.len(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &RealVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RealVec] {
        &self.rows[..self.k]
    }

    pub fn gram(&self) -> [[f64; MAX_K]; MAX_K] {
        let mut g = [[0.0; MAX_K]; MAX_K];
        for i in 0..self.k {
            for j in i..self.k {
                let v = self.rows[i].dot(&self.rows[j]);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        g
    }

    /// Cholesky factorisation of the Gram matrix; `None` when the Gram
    /// determinant is at or below [`GRAM_FLOOR`].
    pub fn metric(&self) -> Result<Metric> {
        let g = self.gram();
        let k = self.k;
        let mut l = [[0.0; MAX_K]; MAX_K];
        let mut det = 1.0;
        for j in 0..k {
            let mut d = g[j][j];
            for p in 0..j {
                d -= l[j][p] * l[j][p];
            }
            if d <= 0.0 {
                return Err(Error::SingularChart { gram_det: 0.0 });
            }
            det *= d;
            let ljj = math::sqrt(d);
            l[j][j] = ljj;
            for i in j + 1..k {
                let mut s = g[i][j];
                for p in 0..j {
                    s -= l[i][p] * l[j][p];
                }
                l[i][j] = s / ljj;
            }
        }
        if det <= GRAM_FLOOR {
            return Err(Error::SingularChart { gram_det: det });
        }
        Ok(Metric { chol: l, k, det })
    }
}

/// Cholesky factor of a Gram matrix.
#[derive(Clone, Copy, Debug)]
pub struct Metric {
    chol: [[f64; MAX_K]; MAX_K],
    k: usize,
    det: f64,
}

impl Metric {
    pub fn gram_det(&self) -> f64 {
        self.det
    }

    /// Induced area element `sqrt(det G)`.
    pub fn area_element(&self) -> f64 {
        math::sqrt(self.det)
    }

    /// Solves `G c = b`.
    pub fn solve(&self, b: &[f64]) -> [f64; MAX_K] {
        let k = self.k;
        let l = &self.chol;
        let mut z = [0.0; MAX_K];
        for i in 0..k {
            let mut s = b[i];
            for p in 0..i {
                s -= l[i][p] * z[p];
            }
            z[i] = s / l[i][i];
        }
        let mut c = [0.0; MAX_K];
        for i in (0..k).rev() {
            let mut s = z[i];
            for p in i + 1..k {
                s -= l[p][i] * c[p];
            }
            c[i] = s / l[i][i];
        }
        c
    }
}

/// An analytic immersion of a `k`-dimensional parameter box into `R^n`.
pub trait Patch: Send + Sync {
    fn k(&self) -> usize;
    fn n(&self) -> usize;
    fn domain(&self) -> ParamBox;
    fn embed(&self, u: &RealVec) -> RealVec;
    /// Rows are the partial derivatives of [`Patch::embed`].
    fn jacobian(&self, u: &RealVec) -> Frame;
    /// Exact mean curvature vector, when the catalog knows it.
    fn mean_curvature(&self, _u: &RealVec) -> Option<RealVec> {
        None
    }
    fn label(&self) -> &str;
    /// Whether the faces `u_axis = lo/hi` are a genuine boundary of the
    /// surface (as opposed to a periodic seam or a coordinate pole).
    fn edge_is_boundary(&self, _axis: usize) -> bool {
        true
    }
}

/// Everything an integrand may want to know at a quadrature node.
#[derive(Clone, Copy, Debug)]
pub struct PatchPoint {
    pub u: RealVec,
    pub x: RealVec,
    pub frame: Frame,
    pub metric: Metric,
}

impl PatchPoint {
    pub fn at(patch: &dyn Patch, u: &RealVec) -> Result<Self> {
        let frame = patch.jacobian(u);
        let metric = frame.metric()?;
        Ok(Self {
            u: *u,
            x: patch.embed(u),
            frame,
            metric,
        })
    }

    pub fn area_element(&self) -> f64 {
        self.metric.area_element()
    }

    /// Orthogonal projection of `v` onto the tangent space.
    pub fn tangential(&self, v: &RealVec) -> RealVec {
        let k = self.frame.k();
        let mut b = [0.0; MAX_K];
        for (i, bi) in b.iter_mut().enumerate().take(k) {
            *bi = self.frame.row(i).dot(v);
        }
        let c = self.metric.solve(&b);
        let mut out = RealVec::zeros(v.dim());
        for (i, ci) in c.iter().enumerate().take(k) {
            out = out.axpy(*ci, self.frame.row(i));
        }
        out
    }

    /// `v - tangential(v)`.
    pub fn normal(&self, v: &RealVec) -> RealVec {
        *v - self.tangential(v)
    }

    /// Tangential gradient `grad^Sigma` of an ambient gradient.
    pub fn surface_gradient(&self, ambient_gradient: &RealVec) -> RealVec {
        self.tangential(ambient_gradient)
    }

    /// Parameter-space gradient `d (g o embed) / d u_i` from the ambient
    /// gradient of `g`.
    pub fn pullback(&self, ambient_gradient: &RealVec) -> RealVec {
        let k = self.frame.k();
        let mut out = RealVec::zeros(k);
        for i in 0..k {
            out[i] = self.frame.row(i).dot(ambient_gradient);
        }
        out
    }

    /// Ambient velocity of a parameter-space direction.
    pub fn push_forward(&self, du: &RealVec) -> RealVec {
        let mut out = RealVec::zeros(self.x.dim());
        for i in 0..self.frame.k() {
            out = out.axpy(du[i], self.frame.row(i));
        }
        out
    }
}

/// Projection of `v` onto the tangent space of `patch` at `u`.
pub fn tangential_part(patch: &dyn Patch, u: &RealVec, v: &RealVec) -> Result<RealVec> {
    u.check_dim(patch.k())?;
    v.check_dim(patch.n())?;
    Ok(PatchPoint::at(patch, u)?.tangential(v))
}

/// `v - tangential_part(v)`.
pub fn normal_part(patch: &dyn Patch, u: &RealVec, v: &RealVec) -> Result<RealVec> {
    Ok(*v - tangential_part(patch, u, v)?)
}

/// A surface made of one or more charts; integrals add over charts.
pub struct Surface {
    pub charts: Vec<Box<dyn Patch>>,
    pub label: String,
}

impl Surface {
    pub fn single(patch: impl Patch + 'static) -> Self {
        let label = String::from(patch.label());
        Self {
            charts: alloc::vec![Box::new(patch)],
            label,
        }
    }

    pub fn union(label: &str, charts: Vec<Box<dyn Patch>>) -> Self {
        assert!(!charts.is_empty());
        Self {
            charts,
            label: String::from(label),
        }
    }

    pub fn k(&self) -> usize {
        self.charts[0].k()
    }

    pub fn n(&self) -> usize {
        self.charts[0].n()
    }
}

impl core::fmt::Debug for Surface {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Surface")
            .field("label", &self.label)
            .field("charts", &self.charts.len())
            .finish()
    }
}
