//! Moving-centre ball families and their level-set functions.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::math;
use crate::vector::RealVec;

/// `|x - centre|^2 - radius^2`; negative exactly inside the open ball.
///
/// Used for region tests instead of the level function itself: it is a
/// polynomial, defined everywhere, and has the same zero set.
#[derive(Clone, Copy, Debug)]
pub struct BallField {
    pub centre: RealVec,
    pub radius_sq: f64,
}

impl ScalarField for BallField {
    fn value(&self, x: &RealVec) -> f64 {
        (*x - self.centre).norm_sq() - self.radius_sq
    }
    fn gradient(&self, x: &RealVec) -> RealVec {
        (*x - self.centre) * 2.0
    }
}

/// `E_s = B((1 - s) y, r(s))` with `r(s)^2 = s (1 - |y|^2) + s^2 |y|^2`.
#[derive(Clone, Copy, Debug)]
pub struct MinimalBallFamily {
    y: RealVec,
    self_check: bool,
}

impl MinimalBallFamily {
    pub fn new(y: RealVec) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(y.norm_sq() < 1.0) {
            return Err(Error::Domain("|y| must be < 1"));
        }
        Ok(Self {
            y,
            self_check: false,
        })
    }

    /// Verify the defining identity whenever the family is evaluated as a
    /// field; a violation panics.
    pub fn with_self_check(mut self, on: bool) -> Self {
        self.self_check = on;
        self
    }

    pub fn y(&self) -> &RealVec {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.y.dim()
    }

    /// `rho(s) = r(s)^2`.
    pub fn radius_sq(&self, s: f64) -> f64 {
        let y2 = self.y.norm_sq();
        s * (1.0 - y2) + s * s * y2
    }

    pub fn centre_and_radius(&self, s: f64) -> Result<(RealVec, f64)> {
        if !(s > 0.0) {
            return Err(Error::Domain("scale s must be positive"));
        }
        Ok((self.y * (1.0 - s), math::sqrt(self.radius_sq(s))))
    }

    /// `{x : |x - (1-s) y|^2 - r(s)^2 < 0} = E_s`.
    pub fn ball(&self, s: f64) -> BallField {
        BallField {
            centre: self.y * (1.0 - s),
            radius_sq: self.radius_sq(s),
        }
    }

    fn denominator(&self, x: &RealVec) -> f64 {
        1.0 - 2.0 * x.dot(&self.y) + self.y.norm_sq()
    }

    /// `f(x) = |x - y|^2 / (1 - 2<x, y> + |y|^2)`.
    pub fn level_function(&self, x: &RealVec) -> Result<f64> {
        x.check_dim(self.n())?;
        let d = self.denominator(x);
        if !(d > 0.0) {
            return Err(Error::OutsideFoliation);
        }
        Ok((*x - self.y).norm_sq() / d)
    }

    /// `|x - y|^2 / (1 - |x|^2 + |x - y|^2)`, the second algebraic form.
    pub fn level_function_alt(&self, x: &RealVec) -> Result<f64> {
        x.check_dim(self.n())?;
        let xy2 = (*x - self.y).norm_sq();
        let d = 1.0 - x.norm_sq() + xy2;
        if !(d > 0.0) {
            return Err(Error::OutsideFoliation);
        }
        Ok(xy2 / d)
    }

    /// `Df = 2 f (x - y + f y) / |x - y|^2`.
    pub fn level_gradient(&self, x: &RealVec) -> Result<RealVec> {
        let f = self.level_function(x)?;
        if f <= 0.0 {
            return Err(Error::GradientUndefined);
        }
        let d = *x - self.y;
        Ok(d.axpy(f, &self.y) * (2.0 * f / d.norm_sq()))
    }

    /// `|x - (1 - f) y|^2 - rho(f)` at `f = f(x)`.
    pub fn defining_residual(&self, x: &RealVec) -> Result<f64> {
        let f = self.level_function(x)?;
        Ok((*x - self.y * (1.0 - f)).norm_sq() - self.radius_sq(f))
    }
}

impl ScalarField for MinimalBallFamily {
    fn value(&self, x: &RealVec) -> f64 {
        match self.level_function(x) {
            Ok(f) => {
                if self.self_check {
                    let r = (*x - self.y * (1.0 - f)).norm_sq() - self.radius_sq(f);
                    assert!(
                        r.abs() <= 1e-10 * (1.0 + x.norm_sq()),
                        "defining identity residual {r:e} at {x:?}"
                    );
                }
                f
            }
            Err(_) => f64::INFINITY,
        }
    }

    fn gradient(&self, x: &RealVec) -> RealVec {
        match self.level_gradient(x) {
            Ok(g) => g,
            Err(Error::GradientUndefined) => RealVec::zeros(x.dim()),
            Err(_) => {
                let mut g = RealVec::zeros(x.dim());
                g[0] = f64::NAN;
                g
            }
        }
    }
}

/// `E_s^(q) = B(s y, R_q(s))` with `R_q(s)^2 = s (1 - q|y|^2) + s^2 q |y|^2`.
#[derive(Clone, Copy, Debug)]
pub struct QBallFamily {
    y: RealVec,
    q: f64,
}

impl QBallFamily {
    pub fn new(y: RealVec, q: f64) -> Result<Self> {
        if !y.is_finite() || !q.is_finite() {
            return Err(Error::NonFinite);
        }
        if q < 1.0 {
            return Err(Error::Domain("q must be >= 1"));
        }
        if !(q * y.norm_sq() < 1.0) {
            return Err(Error::Domain("q |y|^2 must be < 1"));
        }
        Ok(Self { y, q })
    }

    pub fn y(&self) -> &RealVec {
        &self.y
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.y.dim()
    }

    pub fn radius_sq(&self, s: f64) -> f64 {
        let qy2 = self.q * self.y.norm_sq();
        s * (1.0 - qy2) + s * s * qy2
    }

    pub fn centre_and_radius(&self, s: f64) -> Result<(RealVec, f64)> {
        if !(s > 0.0) {
            return Err(Error::Domain("scale s must be positive"));
        }
        Ok((self.y * s, math::sqrt(self.radius_sq(s))))
    }

    pub fn ball(&self, s: f64) -> BallField {
        BallField {
            centre: self.y * s,
            radius_sq: self.radius_sq(s),
        }
    }

    /// Positive root of `(q-1)|y|^2 f^2 + (1 - q|y|^2 + 2<x,y>) f - |x|^2 = 0`.
    ///
    /// Written in rationalised form, so it is continuous through `q = 1`
    /// and `y = 0` without a branch switch.
    pub fn level_function(&self, x: &RealVec) -> Result<f64> {
        x.check_dim(self.m())?;
        let y2 = self.y.norm_sq();
        let a = (self.q - 1.0) * y2;
        let b = 1.0 - self.q * y2 + 2.0 * x.dot(&self.y);
        let c = x.norm_sq();
        if c == 0.0 {
            return Ok(0.0);
        }
        let disc = b * b + 4.0 * a * c;
        if b > 0.0 {
            Ok(2.0 * c / (b + math::sqrt(disc)))
        } else if a > 0.0 {
            Ok((-b + math::sqrt(disc)) / (2.0 * a))
        } else {
            Err(Error::OutsideFoliation)
        }
    }

    /// `2 f (x - f y) / (|x|^2 + (q-1) f^2 |y|^2)`.
    pub fn level_gradient(&self, x: &RealVec) -> Result<RealVec> {
        let f = self.level_function(x)?;
        if f <= 0.0 {
            return Err(Error::GradientUndefined);
        }
        Ok(x.axpy(-f, &self.y) * (2.0 * f / self.gradient_denominator(x, f)))
    }

    /// `|x|^2 + (q-1) f^2 |y|^2`.
    pub fn gradient_denominator(&self, x: &RealVec, f: f64) -> f64 {
        x.norm_sq() + (self.q - 1.0) * f * f * self.y.norm_sq()
    }

    /// Closed-form `|grad f_q| = 2 f R_q(f) / (|x|^2 + (q-1) f^2 |y|^2)`.
    pub fn level_gradient_norm(&self, x: &RealVec) -> Result<f64> {
        let f = self.level_function(x)?;
        if f <= 0.0 {
            return Err(Error::GradientUndefined);
        }
        Ok(2.0 * f * math::sqrt(self.radius_sq(f)) / self.gradient_denominator(x, f))
    }

    pub fn defining_residual(&self, x: &RealVec) -> Result<f64> {
        let f = self.level_function(x)?;
        Ok((*x - self.y * f).norm_sq() - self.radius_sq(f))
    }
}

impl ScalarField for QBallFamily {
    fn value(&self, x: &RealVec) -> f64 {
        self.level_function(x).unwrap_or(f64::INFINITY)
    }

    fn gradient(&self, x: &RealVec) -> RealVec {
        match self.level_gradient(x) {
            Ok(g) => g,
            Err(Error::GradientUndefined) => RealVec::zeros(x.dim()),
            Err(_) => {
                let mut g = RealVec::zeros(x.dim());
                g[0] = f64::NAN;
                g
            }
        }
    }
}
