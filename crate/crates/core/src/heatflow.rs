//! Weighted Dirichlet energies along closed-form harmonic map heat flows
//! into flat targets.
//!
//! Integrals over `R^m` use a product Gauss–Hermite rule centred at the
//! weight's centre with scale `2 sqrt(t0 - t)`, so the Gaussian tail is
//! handled exactly rather than cut off.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, PI};
use crate::mcf::CentrePath;
use crate::rules::GaussRule;
use crate::series::{self, Direction, Verdict};
use crate::vector::{Mat, RealVec};

/// An exact solution of `du/dt = Laplacian u` into flat `R^n`.
pub trait HeatFlowSolution: Send + Sync {
    fn m(&self) -> usize;
    fn n(&self) -> usize;
    fn valid_interval(&self) -> (f64, f64);
    fn value(&self, x: &RealVec, t: f64) -> RealVec;
    fn du_dt(&self, x: &RealVec, t: f64) -> RealVec;
    /// `m x n` matrix of `u^a_{,i}`.
    fn gradient(&self, x: &RealVec, t: f64) -> Mat;
    /// A bound for `|grad u|` over the whole interval.
    fn gradient_bound(&self) -> f64;
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

#[derive(Clone, Debug)]
pub struct ZeroMap {
    pub m: usize,
    pub n: usize,
}

impl HeatFlowSolution for ZeroMap {
    fn m(&self) -> usize {
        self.m
    }
    fn n(&self) -> usize {
        self.n
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn value(&self, _x: &RealVec, _t: f64) -> RealVec {
        RealVec::zeros(self.n)
    }
    fn du_dt(&self, _x: &RealVec, _t: f64) -> RealVec {
        RealVec::zeros(self.n)
    }
    fn gradient(&self, _x: &RealVec, _t: f64) -> Mat {
        Mat::zeros(self.m, self.n)
    }
    fn gradient_bound(&self) -> f64 {
        0.0
    }
    fn label(&self) -> &str {
        "zero"
    }
}

/// `u(x, t) = <a, x>`.
#[derive(Clone, Debug)]
pub struct StaticLinear {
    pub a: RealVec,
}

impl HeatFlowSolution for StaticLinear {
    fn m(&self) -> usize {
        self.a.dim()
    }
    fn n(&self) -> usize {
        1
    }
    fn valid_interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn value(&self, x: &RealVec, _t: f64) -> RealVec {
        RealVec::from_slice(&[self.a.dot(x)])
    }
    fn du_dt(&self, _x: &RealVec, _t: f64) -> RealVec {
        RealVec::zeros(1)
    }
    fn gradient(&self, _x: &RealVec, _t: f64) -> Mat {
        let mut g = Mat::zeros(self.a.dim(), 1);
        for i in 0..self.a.dim() {
            g.set(i, 0, self.a[i]);
        }
        g
    }
    fn gradient_bound(&self) -> f64 {
        self.a.norm()
    }
    fn label(&self) -> &str {
        "linear"
    }
}

/// `u(x, t) = (4 pi (t - ts))^(-m/2) exp(-|x|^2 / (4 (t - ts)))` for
/// `t > t_min > ts`.
#[derive(Clone, Debug)]
pub struct HeatKernel {
    pub m: usize,
    pub ts: f64,
    pub t_min: f64,
}

impl HeatKernel {
    pub fn new(m: usize, ts: f64, t_min: f64) -> Result<Self> {
        if !(t_min > ts) {
            return Err(Error::Domain("heat kernel needs t_min > ts"));
        }
        Ok(Self { m, ts, t_min })
    }

    fn kernel(&self, x: &RealVec, t: f64) -> (f64, f64) {
        let sigma = t - self.ts;
        let h = crate::mcf::heat_kernel(self.m, x, &RealVec::zeros(self.m), sigma);
        (h, sigma)
    }
}

impl HeatFlowSolution for HeatKernel {
    fn m(&self) -> usize {
        self.m
    }
    fn n(&self) -> usize {
        1
    }
    fn valid_interval(&self) -> (f64, f64) {
        (self.t_min, f64::INFINITY)
    }
    fn value(&self, x: &RealVec, t: f64) -> RealVec {
        RealVec::from_slice(&[self.kernel(x, t).0])
    }
    fn du_dt(&self, x: &RealVec, t: f64) -> RealVec {
        let (h, sigma) = self.kernel(x, t);
        let m = self.m as f64;
        RealVec::from_slice(&[h * (x.norm_sq() / (4.0 * sigma * sigma) - m / (2.0 * sigma))])
    }
    fn gradient(&self, x: &RealVec, t: f64) -> Mat {
        let (h, sigma) = self.kernel(x, t);
        let mut g = Mat::zeros(self.m, 1);
        for i in 0..self.m {
            g.set(i, 0, -h * x[i] / (2.0 * sigma));
        }
        g
    }
    fn gradient_bound(&self) -> f64 {
        let sigma = self.t_min - self.ts;
        let m = self.m as f64;
        math::powf(4.0 * PI * sigma, -0.5 * m) * math::sqrt(2.0 * sigma) / (2.0 * sigma)
            * math::exp(-0.5)
    }
    fn label(&self) -> &str {
        "heat-kernel"
    }
}

/// `Phi(x, t) = (4 pi (t0 - t))^(-(m-2)/2) exp(-|x - y(t)|^2 / (4 (t0 - t)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatWeight {
    pub m: usize,
    pub t0: f64,
    pub centre: CentrePath,
}

impl HeatWeight {
    pub fn tau(&self, t: f64) -> Result<f64> {
        let tau = self.t0 - t;
        if !(tau > 0.0) {
            return Err(Error::Domain("heat weight needs t < t0"));
        }
        Ok(tau)
    }
}

/// Nodes per axis of the Gauss–Hermite rule.
pub const HERMITE_NODES: usize = 40;

/// `int_{R^m} g(x) Phi(x, t)` by Gauss–Hermite about `y(t)`.
fn weighted_integral(
    weight: &HeatWeight,
    t: f64,
    nodes: usize,
    g: &dyn Fn(&RealVec) -> f64,
) -> Result<f64> {
    let tau = weight.tau(t)?;
    let m = weight.m;
    let y = weight.centre.y(t);
    let scale = 2.0 * math::sqrt(tau);
    let rule = GaussRule::hermite(nodes);
    // (4 pi tau)^(-(m-2)/2) (2 sqrt(tau))^m = 4 tau pi^(1 - m/2)
    let prefactor = 4.0 * tau * math::powf(PI, 1.0 - 0.5 * m as f64);
    let mut idx = alloc::vec![0usize; m];
    let mut total = 0.0;
    loop {
        let mut x = y;
        let mut w = 1.0;
        for a in 0..m {
            x[a] += scale * rule.nodes[idx[a]];
            w *= rule.weights[idx[a]];
        }
        total += w * g(&x);
        let mut a = 0;
        while a < m {
            idx[a] += 1;
            if idx[a] < nodes {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == m {
            break;
        }
    }
    let v = prefactor * total;
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(v)
}

fn check_pair(flow: &dyn HeatFlowSolution, weight: &HeatWeight) -> Result<()> {
    if weight.m != flow.m() || weight.centre.dim() != flow.m() {
        return Err(Error::DimensionMismatch {
            expected: flow.m(),
            found: weight.centre.dim(),
        });
    }
    if weight.m < 2 {
        return Err(Error::UnsupportedDimension(weight.m));
    }
    Ok(())
}

/// `int_{R^m} |grad u|^2 Phi`.
pub fn weighted_energy(flow: &dyn HeatFlowSolution, weight: &HeatWeight, t: f64) -> Result<f64> {
    check_pair(flow, weight)?;
    flow.check_time(t)?;
    weighted_integral(weight, t, HERMITE_NODES, &|x| flow.gradient(x, t).norm_sq())
}

/// `(2 int |u_t - grad u . (x - y - tau y') / (2 tau)|^2 Phi, 1/2 int |grad u . y'|^2 Phi)`.
pub fn heat_rhs(flow: &dyn HeatFlowSolution, weight: &HeatWeight, t: f64) -> Result<(f64, f64)> {
    check_pair(flow, weight)?;
    flow.check_time(t)?;
    let tau = weight.tau(t)?;
    let y = weight.centre.y(t);
    let yp = weight.centre.y_prime(t);
    let dissipation = 2.0
        * weighted_integral(weight, t, HERMITE_NODES, &|x| {
            let v = (*x - y - yp * tau) * (0.5 / tau);
            let g = flow.gradient(x, t);
            (flow.du_dt(x, t) - g.contract_rows(&v)).norm_sq()
        })?;
    let excess = 0.5
        * weighted_integral(weight, t, HERMITE_NODES, &|x| {
            flow.gradient(x, t).contract_rows(&yp).norm_sq()
        })?;
    Ok((dissipation, excess))
}

/// `exp(+1/2 int_t^t0 |y'|^2) int |grad u|^2 Phi`, nonincreasing in `t`.
pub fn heat_corrected_quantity(
    flow: &dyn HeatFlowSolution,
    weight: &HeatWeight,
    t: f64,
) -> Result<f64> {
    let e = weighted_energy(flow, weight, t)?;
    Ok(math::exp(0.5 * weight.centre.energy(t, weight.t0)) * e)
}

/// Heat-flow identity samples at a list of times.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatReport {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub excess: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    pub corrected: Vec<f64>,
    pub residual: Vec<f64>,
    pub verdict: Verdict,
}

pub fn heat_report(
    flow: &dyn HeatFlowSolution,
    weight: &HeatWeight,
    times: &[f64],
) -> Result<HeatReport> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("times must be strictly increasing"));
    }
    let mut r = HeatReport {
        times: times.to_vec(),
        energy: Vec::new(),
        dissipation: Vec::new(),
        excess: Vec::new(),
        fd_derivative: Vec::new(),
        corrected: Vec::new(),
        residual: Vec::new(),
        verdict: Verdict::Monotone,
    };
    for &t in times {
        let tau = weight.tau(t)?;
        r.energy.push(weighted_energy(flow, weight, t)?);
        let (d, e) = heat_rhs(flow, weight, t)?;
        let fd = series::derivative5(
            |s| weighted_energy(flow, weight, s),
            t,
            crate::mcf::TIME_FD_STEP * tau,
        )?;
        r.residual.push(series::relative_residual(fd, e - d));
        r.dissipation.push(d);
        r.excess.push(e);
        r.fd_derivative.push(fd);
        r.corrected.push(heat_corrected_quantity(flow, weight, t)?);
    }
    r.verdict = series::monotone_verdict(&r.corrected, Direction::Nonincreasing, 1e-8);
    Ok(r)
}
