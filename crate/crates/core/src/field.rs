//! Scalar fields on ambient space.

use crate::vector::RealVec;

/// A smooth scalar function on (an open subset of) `R^n`.
///
/// Points outside the natural domain evaluate to `+inf`, which the region
/// and root-finding code treat as "beyond every level".
pub trait ScalarField: Sync {
    fn value(&self, x: &RealVec) -> f64;

    /// Ambient gradient. The default is a central difference.
    fn gradient(&self, x: &RealVec) -> RealVec {
        let mut g = RealVec::zeros(x.dim());
        for i in 0..x.dim() {
            let h = 1e-6 * x[i].abs().max(1.0);
            let mut xp = *x;
            let mut xm = *x;
            xp[i] += h;
            xm[i] -= h;
            g[i] = (self.value(&xp) - self.value(&xm)) / (2.0 * h);
        }
        g
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn value(&self, x: &RealVec) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &RealVec) -> RealVec {
        (**self).gradient(x)
    }
}

/// `|x - centre|^2`.
#[derive(Clone, Copy, Debug)]
pub struct SquaredDistance {
    pub centre: RealVec,
}

impl SquaredDistance {
    pub fn origin(n: usize) -> Self {
        Self {
            centre: RealVec::zeros(n),
        }
    }
}

impl ScalarField for SquaredDistance {
    fn value(&self, x: &RealVec) -> f64 {
        (*x - self.centre).norm_sq()
    }
    fn gradient(&self, x: &RealVec) -> RealVec {
        (*x - self.centre) * 2.0
    }
}

/// Scalar field from a closure pair (value, gradient).
pub struct FnField<F, G> {
    pub value: F,
    pub gradient: G,
}

impl<F, G> ScalarField for FnField<F, G>
where
    F: Fn(&RealVec) -> f64 + Sync,
    G: Fn(&RealVec) -> RealVec + Sync,
{
    fn value(&self, x: &RealVec) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &RealVec) -> RealVec {
        (self.gradient)(x)
    }
}

/// Scalar field from a value closure only; gradient by central differences.
pub struct ValueField<F>(pub F);

impl<F: Fn(&RealVec) -> f64 + Sync> ScalarField for ValueField<F> {
    fn value(&self, x: &RealVec) -> f64 {
        (self.0)(x)
    }
}
