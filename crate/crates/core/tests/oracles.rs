//! Independent oracles: Monte Carlo, dense tensor grids, closed forms.

use monoform_core::ball::MinimalBallFamily;
use monoform_core::catalog::{pair_of_planes, Catenoid, FlatPlane};
use monoform_core::field::SquaredDistance;
use monoform_core::heatflow::{self, HeatFlowSolution, HeatKernel, HeatWeight};
use monoform_core::math::PI;
use monoform_core::mcf::CentrePath;
use monoform_core::minimal;
use monoform_core::patch::{Patch, PatchPoint, Surface};
use monoform_core::quadrature::{integrate_sublevel, QuadratureSpec};
use monoform_core::rules::GaussRule;
use monoform_core::vector::RealVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn catenoid_area_against_monte_carlo() {
    let cat = Catenoid::new(0.5);
    let g = SquaredDistance::origin(3);
    let quad = integrate_sublevel(&cat, &g, 1.0, &|_| 1.0, &QuadratureSpec::default())
        .unwrap()
        .value;

    // 10^7 jittered samples, one per cell of a 3163 x 3163 grid
    let dom = cat.domain();
    let side = 3163usize;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (w0, w1) = (dom.width(0) / side as f64, dom.width(1) / side as f64);
    let mut sum = 0.0;
    for i in 0..side {
        for j in 0..side {
            let mut u = dom.lo;
            u[0] += w0 * (i as f64 + rng.gen::<f64>());
            u[1] += w1 * (j as f64 + rng.gen::<f64>());
            let x = cat.embed(&u);
            if x.norm_sq() < 1.0 {
                sum += PatchPoint::at(&cat, &u).unwrap().area_element();
            }
        }
    }
    let mc = sum * w0 * w1;
    assert!(
        (mc - quad).abs() <= 1e-4 * quad,
        "mc {mc} vs quadrature {quad}"
    );
}

#[test]
fn heat_kernel_energy_against_dense_grid() {
    let k = HeatKernel::new(3, -2.0, -1.5).unwrap();
    let w = HeatWeight {
        m: 3,
        t0: 0.5,
        centre: CentrePath::Parabola { eps: 0.3, n: 3 },
    };
    for t in [-1.2, -0.4, 0.2] {
        let got = heatflow::weighted_energy(&k, &w, t).unwrap();
        let tau = 0.5 - t;
        let y = w.centre.y(t);
        // composite Gauss-Legendre on a box of half-width 14 sqrt(tau)
        let half = 14.0 * tau.sqrt();
        let cells = 24;
        let rule = GaussRule::legendre(6);
        let mut axis = Vec::new();
        for c in 0..cells {
            let a = -half + 2.0 * half * c as f64 / cells as f64;
            let b = a + 2.0 * half / cells as f64;
            axis.extend(rule.mapped(a, b));
        }
        let norm = (4.0 * PI * tau).powf(-0.5);
        let mut sum = 0.0;
        for &(a, wa) in &axis {
            for &(b, wb) in &axis {
                for &(c, wc) in &axis {
                    let x = y + RealVec::from_slice(&[a, b, c]);
                    let phi = norm * (-(x - y).norm_sq() / (4.0 * tau)).exp();
                    sum += wa * wb * wc * k.gradient(&x, t).norm_sq() * phi;
                }
            }
        }
        assert!((got - sum).abs() <= 1e-5 * sum, "t={t}: {got} vs {sum}");
    }
}

#[test]
fn pair_of_planes_has_density_two() {
    let y = RealVec::from_slice(&[0.2, -0.1, 0.3]);
    let fam = MinimalBallFamily::new(y).unwrap();
    let pair = pair_of_planes(y, 1.2);
    let d = minimal::density_limit(&pair, &fam, 0.01, 3, &QuadratureSpec::default()).unwrap();
    assert!((d - 2.0).abs() <= 1e-3, "{d}");
}

#[test]
fn catenoid_density_is_one() {
    let y = RealVec::from_slice(&[0.5, 0.0, 0.0]);
    let fam = MinimalBallFamily::new(y).unwrap();
    let cat = Surface::single(Catenoid::new(0.5));
    let d = minimal::density_limit(&cat, &fam, 0.01, 3, &QuadratureSpec::default()).unwrap();
    assert!((d - 1.0).abs() <= 1e-3, "{d}");
}

#[test]
fn tilted_plane_bulk_matches_ratio_difference() {
    let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
    let fam = MinimalBallFamily::new(y).unwrap();
    let plane = Surface::single(FlatPlane::tilted(&y, PI / 6.0, RealVec::zeros(3), 1.05));
    let spec = QuadratureSpec::default();
    let diff = minimal::area_ratio(&plane, &fam, 1.0, &spec).unwrap()
        - minimal::area_ratio(&plane, &fam, 0.25, &spec).unwrap();
    let bulk = minimal::bulk_increment(&plane, &fam, 0.25, 1.0, &spec).unwrap();
    assert!(diff > 0.0);
    assert!((diff - bulk).abs() <= 1e-4 * diff, "{diff} vs {bulk}");
}

#[test]
fn tilted_plane_level_curve_against_sublevel_derivative() {
    let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
    let fam = MinimalBallFamily::new(y).unwrap();
    let plane = FlatPlane::tilted(&y, PI / 6.0, RealVec::zeros(3), 1.05);
    let spec = QuadratureSpec::default();
    for s in [0.2, 0.5, 0.9] {
        let area = |c: f64| {
            integrate_sublevel(&plane, &fam, c, &|_| 1.0, &spec)
                .unwrap()
                .value
        };
        let h = 1e-3 * s;
        let fd = (8.0 * (area(s + h) - area(s - h)) - (area(s + 2.0 * h) - area(s - 2.0 * h)))
            / (12.0 * h);
        let line = monoform_core::level::integrate_level_curve(
            &plane,
            &fam,
            s,
            &|p| {
                1.0 / p
                    .surface_gradient(&fam.level_gradient(&p.x).unwrap())
                    .norm()
            },
            &spec,
        )
        .unwrap()
        .value;
        assert!((fd - line).abs() <= 1e-4 * line, "s={s}: {fd} vs {line}");
    }
}
