use monoform_core::ball::{MinimalBallFamily, QBallFamily};
use monoform_core::catalog::{
    Catenoid, Circle, Cylinder, FlatPlane, Helicoid, Sphere, SphericalCap,
};
use monoform_core::field::{ScalarField, SquaredDistance};
use monoform_core::heatflow::{HeatFlowSolution, HeatKernel};
use monoform_core::level::integrate_level_curve;
use monoform_core::math::PI;
use monoform_core::mcf::{
    CentrePath, FlowSolution, ShrinkingCircle, ShrinkingCylinder, ShrinkingSphere,
};
use monoform_core::patch::{Patch, PatchPoint};
use monoform_core::pharmonic::{LinearMap, MapSolution, RadialProjection};
use monoform_core::quadrature::{integrate_sublevel, QuadratureSpec};
use monoform_core::vector::{Mat, RealVec};
use proptest::prelude::*;

fn patches() -> Vec<Box<dyn Patch>> {
    let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
    vec![
        Box::new(FlatPlane::tilted(&y, PI / 6.0, RealVec::zeros(3), 1.05)),
        Box::new(Sphere::new(RealVec::from_slice(&[0.1, 0.0, -0.2]), 1.3)),
        Box::new(Cylinder {
            radius: 1.2,
            half_length: 3.0,
        }),
        Box::new(Catenoid::new(0.5)),
        Box::new(Catenoid::times_line(0.5, 0.8)),
        Box::new(Helicoid::new(0.4)),
        Box::new(SphericalCap::new(y, &RealVec::basis(3, 0), 2.0, 1.35)),
        Box::new(Circle {
            centre: RealVec::zeros(2),
            radius: 1.4,
        }),
    ]
}

/// Maps unit-cube coordinates into the patch's parameter domain, kept off
/// the edges.
fn interior(patch: &dyn Patch, t: &[f64]) -> RealVec {
    let dom = patch.domain();
    let mut u = dom.lo;
    for a in 0..patch.k() {
        u[a] = dom.lo[a] + (0.02 + 0.96 * t[a]) * dom.width(a);
    }
    u
}

fn vec_in(n: usize, v: &[f64]) -> RealVec {
    RealVec::from_slice(&v[..n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_are_idempotent_and_complementary(
        which in 0usize..8,
        t in prop::collection::vec(0.0f64..1.0, 4),
        v in prop::collection::vec(-2.0f64..2.0, 4),
    ) {
        let all = patches();
        let patch = all[which].as_ref();
        let u = interior(patch, &t);
        let p = PatchPoint::at(patch, &u).unwrap();
        let v = vec_in(patch.n(), &v);
        let tv = p.tangential(&v);
        let nv = p.normal(&v);
        prop_assert!((p.tangential(&tv) - tv).max_abs() <= 1e-12 * (1.0 + v.norm()));
        // normal = v - tangential, so the sum only rounds back to v
        prop_assert!((tv + nv - v).max_abs() <= 4.0 * f64::EPSILON * v.max_abs().max(tv.max_abs()));
        for row in p.frame.rows() {
            prop_assert!(nv.dot(row).abs() <= 1e-12 * (1.0 + v.norm()) * row.norm());
        }
    }

    #[test]
    fn mean_curvature_is_normal(which in 0usize..8, t in prop::collection::vec(0.0f64..1.0, 4)) {
        let all = patches();
        let patch = all[which].as_ref();
        let u = interior(patch, &t);
        let p = PatchPoint::at(patch, &u).unwrap();
        let h = patch.mean_curvature(&u).unwrap();
        prop_assert!(p.tangential(&h).norm() <= 1e-10 * (1.0 + h.norm()));
    }

    #[test]
    fn minimal_balls_are_nested(
        y in prop::collection::vec(-0.55f64..0.55, 3),
        s in 1e-3f64..1.0,
        gap in 1e-3f64..1.0,
    ) {
        let fam = MinimalBallFamily::new(vec_in(3, &y)).unwrap();
        let t = s + gap;
        let (cs, rs) = fam.centre_and_radius(s).unwrap();
        let (ct, rt) = fam.centre_and_radius(t).unwrap();
        prop_assert!((cs - ct).norm() + rs <= rt + 1e-12);
    }

    #[test]
    fn q_balls_are_nested(
        y in prop::collection::vec(-0.4f64..0.4, 3),
        q in 1.0f64..2.0,
        s in 1e-3f64..2.0,
        gap in 1e-3f64..2.0,
    ) {
        let fam = QBallFamily::new(vec_in(3, &y), q).unwrap();
        let t = s + gap;
        let (cs, rs) = fam.centre_and_radius(s).unwrap();
        let (ct, rt) = fam.centre_and_radius(t).unwrap();
        prop_assert!((cs - ct).norm() + rs <= rt + 1e-12);
    }

    #[test]
    fn level_function_recovers_ball_scale(
        y in prop::collection::vec(-0.55f64..0.55, 3),
        q in 1.0f64..2.0,
        s in 1e-3f64..1.0,
        e in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let e = vec_in(3, &e);
        prop_assume!(e.norm() > 1e-3);
        let e = e * (1.0 / e.norm());
        let y = vec_in(3, &y);
        let fam = MinimalBallFamily::new(y).unwrap();
        let (c, r) = fam.centre_and_radius(s).unwrap();
        let x = c.axpy(r, &e);
        prop_assert!((fam.level_function(&x).unwrap() - s).abs() <= 1e-10);
        prop_assert!(fam.defining_residual(&x).unwrap().abs() <= 1e-12 * (1.0 + x.norm_sq()));
        let y = y * 0.7;
        let qf = QBallFamily::new(y, q).unwrap();
        let (c, r) = qf.centre_and_radius(s).unwrap();
        let x = c.axpy(r, &e);
        prop_assert!((qf.level_function(&x).unwrap() - s).abs() <= 1e-10);
        prop_assert!(qf.defining_residual(&x).unwrap().abs() <= 1e-12 * (1.0 + x.norm_sq()));
    }

    #[test]
    fn q_one_is_a_rigid_motion(
        y in prop::collection::vec(-0.55f64..0.55, 3),
        x in prop::collection::vec(-0.6f64..0.6, 3),
    ) {
        let y = vec_in(3, &y);
        let x = vec_in(3, &x);
        let min = MinimalBallFamily::new(y).unwrap();
        let q1 = QBallFamily::new(y, 1.0).unwrap();
        if let (Ok(a), Ok(b)) = (min.level_function(&x), q1.level_function(&(y - x))) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }
    }

    #[test]
    fn level_gradients_match_differences(
        y in prop::collection::vec(-0.4f64..0.4, 3),
        q in 1.0f64..2.5,
        x in prop::collection::vec(-0.6f64..0.6, 3),
    ) {
        let y = vec_in(3, &y);
        let x = vec_in(3, &x);
        prop_assume!((x - y).norm() > 0.05 && x.norm() > 0.05);
        let qf = QBallFamily::new(y * 0.6, q).unwrap();
        let min = MinimalBallFamily::new(y).unwrap();
        let h = 1e-6;
        let fields: [(&dyn ScalarField, RealVec); 2] = [
            (&min, min.level_gradient(&x).unwrap()),
            (&qf, qf.level_gradient(&x).unwrap()),
        ];
        for (f, g) in fields {
            for i in 0..3 {
                let e = RealVec::basis(3, i);
                let fd = (f.value(&x.axpy(h, &e)) - f.value(&x.axpy(-h, &e))) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-7 * (1.0 + g.norm()));
            }
        }
        let norm = qf.level_gradient_norm(&x).unwrap();
        prop_assert!((norm - qf.level_gradient(&x).unwrap().norm()).abs() <= 1e-12 * (1.0 + norm));
    }

    #[test]
    fn flows_move_by_mean_curvature(
        which in 0usize..3,
        t in -2.0f64..-0.05,
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
    ) {
        let flows: [Box<dyn FlowSolution>; 3] = [
            Box::new(ShrinkingSphere { extinction: 0.0 }),
            Box::new(ShrinkingCylinder::new(0.0)),
            Box::new(ShrinkingCircle { extinction: 0.0 }),
        ];
        let flow = flows[which].as_ref();
        let patch = flow.patch_at(t).unwrap();
        let u = interior(patch.as_ref(), &[a, b]);
        let v = flow.velocity_at(t, &u).unwrap();
        let h = patch.mean_curvature(&u).unwrap();
        prop_assert!((v - h).norm() <= 1e-10 * (1.0 + h.norm()));
        let dt = 1e-6;
        let fd = (flow.patch_at(t + dt).unwrap().embed(&u) - flow.patch_at(t - dt).unwrap().embed(&u))
            * (0.5 / dt);
        prop_assert!((fd - v).norm() <= 1e-6 * (1.0 + v.norm()));
    }

    #[test]
    fn centre_path_velocity(t in -2.0f64..2.0, eps in 0.05f64..1.0) {
        let paths = [
            CentrePath::Circle { eps, n: 3 },
            CentrePath::Parabola { eps, n: 4 },
            CentrePath::towards(RealVec::zeros(3), 0.3, RealVec::from_slice(&[eps, 0.1, -0.2])),
        ];
        for p in &paths {
            let h = 1e-5;
            let fd = (p.y(t + h) - p.y(t - h)) * (0.5 / h);
            let v = p.y_prime(t);
            prop_assert!((fd - v).norm() <= 1e-8 * v.norm().max(1.0));
        }
    }

    #[test]
    fn map_gradients_match_differences(x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let x = vec_in(3, &x);
        prop_assume!(x.norm() > 0.1);
        let maps: [Box<dyn MapSolution>; 2] = [
            Box::new(RadialProjection::new(3, 2.0).unwrap()),
            Box::new(LinearMap::new(Mat::from_rows(&[&[1.0, 2.0], &[0.0, -1.0], &[0.5, 0.5]]), 1.5).unwrap()),
        ];
        let h = 1e-6;
        for u in &maps {
            let g = u.gradient(&x);
            for i in 0..3 {
                let e = RealVec::basis(3, i);
                let fd = (u.value(&x.axpy(h, &e)) - u.value(&x.axpy(-h, &e))) * (0.5 / h);
                prop_assert!((fd - g.row(i)).norm() <= 1e-8 * (1.0 + g.row(i).norm()) / x.norm());
            }
        }
    }

    #[test]
    fn heat_kernel_residual(x in prop::collection::vec(-2.0f64..2.0, 3), t in -1.4f64..1.0) {
        let k = HeatKernel::new(3, -2.0, -1.5).unwrap();
        let x = vec_in(3, &x);
        // fourth-order stencil: the kernel is sharp near its start time
        let h = 1e-2;
        let u = |y: RealVec| k.value(&y, t)[0];
        let mut lap = 0.0;
        for i in 0..3 {
            let e = RealVec::basis(3, i);
            lap += (-u(x.axpy(2.0 * h, &e)) + 16.0 * u(x.axpy(h, &e)) - 30.0 * u(x)
                + 16.0 * u(x.axpy(-h, &e))
                - u(x.axpy(-2.0 * h, &e)))
                / (12.0 * h * h);
        }
        prop_assert!((lap - k.du_dt(&x, t)[0]).abs() <= 1e-8);
        prop_assert!(k.gradient(&x, t).norm_sq().sqrt() <= k.gradient_bound());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn refinement_stays_within_reported_bound(
        cx in -0.3f64..0.3,
        cy in -0.3f64..0.3,
        c in 0.1f64..0.8,
    ) {
        let patch = Catenoid::new(0.5);
        let g = SquaredDistance { centre: RealVec::from_slice(&[0.5 + cx, cy, 0.1]) };
        let coarse = QuadratureSpec::default().with_cells(8);
        let fine = QuadratureSpec::default().with_cells(16);
        let a = integrate_sublevel(&patch, &g, c, &|_| 1.0, &coarse).unwrap();
        let b = integrate_sublevel(&patch, &g, c, &|_| 1.0, &fine).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-14);
    }

    #[test]
    fn coarea_consistency(level in 0.1f64..0.8, which in 0usize..3) {
        let y = RealVec::from_slice(&[0.3, 0.0, 0.0]);
        let all: [Box<dyn Patch>; 3] = [
            Box::new(FlatPlane::tilted(&y, PI / 6.0, RealVec::zeros(3), 1.05)),
            Box::new(Catenoid::new(0.5)),
            Box::new(Helicoid::new(0.4)),
        ];
        let patch = all[which].as_ref();
        let g = SquaredDistance { centre: RealVec::from_slice(&[0.2, -0.1, 0.05]) };
        let spec = QuadratureSpec::default();
        let area = |c: f64| integrate_sublevel(patch, &g, c, &|_| 1.0, &spec).unwrap().value;
        let h = 1e-3 * level;
        let fd = (8.0 * (area(level + h) - area(level - h)) - (area(level + 2.0 * h) - area(level - 2.0 * h)))
            / (12.0 * h);
        let line = integrate_level_curve(
            patch,
            &g,
            level,
            &|p| 1.0 / p.surface_gradient(&g.gradient(&p.x)).norm(),
            &spec,
        )
        .unwrap()
        .value;
        prop_assert!((fd - line).abs() <= 1e-3 * line.abs().max(1e-3), "{fd} vs {line}");
    }
}
