//! Moving-centre monotonicity formulae, checked numerically.
//!
//! The crate evaluates the monotone quantities for minimal submanifolds,
//! mean curvature flow, stationary p-harmonic maps and the harmonic map heat
//! flow on closed-form solution catalogs, together with the boundary-flux and
//! bulk terms that should reproduce their derivatives and increments.
//!
//! Everything here is `no_std` (with `alloc`): pure functions of immutable
//! inputs. IO, CLI and file formats live in the `monoform` crate.

#![no_std]
// `!(a < b)` rejects NaN on purpose; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ball;
pub mod catalog;
pub mod error;
pub mod field;
pub mod heatflow;
pub mod level;
pub mod math;
pub mod mcf;
pub mod minimal;
pub mod patch;
pub mod pharmonic;
pub mod quadrature;
pub mod roots;
pub mod rules;
pub mod series;
pub mod vector;

pub use ball::{MinimalBallFamily, QBallFamily};
pub use error::{Error, Result};
pub use field::ScalarField;
pub use patch::{Frame, Patch, PatchPoint, Surface};
pub use quadrature::{Quadrature, QuadratureSpec};
pub use vector::{RealVec, MAX_DIM};
