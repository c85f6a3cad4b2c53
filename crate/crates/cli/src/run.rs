//! Experiment execution: catalog lookup, report generation and checks.

use std::time::Instant;

use monoform_core::ball::{MinimalBallFamily, QBallFamily};
use monoform_core::catalog::{
    pair_of_planes, Catenoid, Circle, Cylinder, FlatPlane, Helicoid, Sphere, SphericalCap,
};
use monoform_core::heatflow::{
    self, HeatFlowSolution, HeatKernel, HeatWeight, StaticLinear, ZeroMap,
};
use monoform_core::math::PI;
use monoform_core::mcf::{
    self, CentrePath, FlowSolution, GaussianWeight, ShrinkingCircle, ShrinkingCylinder,
    ShrinkingSphere, StaticPlane,
};
use monoform_core::minimal;
use monoform_core::patch::{ParamBox, Patch, Surface};
use monoform_core::pharmonic::{
    self, ConstantMap, LinearMap, MapSolution, PolynomialField, RadialProjection,
};
use monoform_core::quadrature::{PolarSpec, QuadratureSpec};
use monoform_core::series::{self, geometric_grid};
use monoform_core::vector::{Mat, RealVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{Command, ConfigError, ExperimentConfig, Grid};
use crate::output::{Check, Plot, Table, VerdictRecord};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerics(#[from] monoform_core::Error),
}

impl RunError {
    /// 4 for numerical failures, 3 for parameters outside the domain.
    pub fn exit_code(&self) -> u8 {
        use monoform_core::Error as E;
        match self {
            RunError::Config(_) => 3,
            RunError::Numerics(e) => match e {
                E::ToleranceNotMet { .. }
                | E::TruncationNotMet { .. }
                | E::NonConvergent { .. }
                | E::RegularValue { .. }
                | E::SingularChart { .. }
                | E::NonFinite => 4,
                _ => 3,
            },
        }
    }
}

type Result<T> = std::result::Result<T, RunError>;

pub struct Outcome {
    pub table: Table,
    pub plot: Plot,
    pub record: VerdictRecord,
}

const FLUX_TOL: f64 = 1e-3;
const BULK_TOL: f64 = 1e-4;
const SLACK: f64 = 1e-8;
const EQUALITY_TOL: f64 = 1e-8;

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = match cfg.command {
        Command::MinMono => min_mono(cfg)?,
        Command::BhCheck => bh_check(cfg)?,
        Command::McfMono => mcf_mono(cfg)?,
        Command::Entropy => entropy(cfg)?,
        Command::PharmMono => pharm_mono(cfg)?,
        Command::HeatMono => heat_mono(cfg)?,
        Command::IdentitySuite => identity_suite(cfg)?,
    };
    out.record.wall_time_s = start.elapsed().as_secs_f64();
    Ok(out)
}

fn quad_spec(cfg: &ExperimentConfig) -> Result<QuadratureSpec> {
    let mut spec = QuadratureSpec::default();
    if let Some(n) = cfg.count("quad-cells") {
        spec = spec.with_cells(n as usize);
    }
    if let Some(n) = cfg.count("quad-order") {
        spec = spec.with_order(n as usize);
    }
    if let Some(t) = cfg.num("tol") {
        spec = spec.with_tolerance(t);
    }
    spec.validate().map_err(|e| {
        ConfigError::field("quad-cells", format!("quadrature settings rejected: {e}"))
    })?;
    Ok(spec)
}

fn negate_flux(cfg: &ExperimentConfig) -> bool {
    cfg.word("inject-fault") == Some("negate-flux")
}

fn vec3(field: &str, v: &[f64], dim: usize) -> Result<RealVec> {
    if v.len() != dim {
        return Err(
            ConfigError::field(field, format!("needs {dim} entries, got {}", v.len())).into(),
        );
    }
    Ok(RealVec::from_slice(v))
}

fn geometric(cfg: &ExperimentConfig, name: &str, default: Grid) -> Result<Vec<f64>> {
    let g = cfg.grid(name).unwrap_or(default);
    if g.lo <= 0.0 {
        return Err(ConfigError::field(name, "geometric grid needs lo > 0").into());
    }
    Ok(geometric_grid(g.lo, g.hi, g.count)?)
}

fn linear(cfg: &ExperimentConfig, name: &str, default: Grid) -> Vec<f64> {
    let g = cfg.grid(name).unwrap_or(default);
    (0..g.count)
        .map(|i| g.lo + (g.hi - g.lo) * i as f64 / (g.count - 1) as f64)
        .collect()
}

// minimal surfaces

struct MinimalCase {
    surface: Surface,
    family: MinimalBallFamily,
    label: String,
    /// Exact `|H|` bound; zero for minimal surfaces.
    c_h: f64,
}

fn minimal_case(cfg: &ExperimentConfig) -> Result<MinimalCase> {
    let name = cfg.word("surface").unwrap_or("catenoid");
    let neck = cfg.num("neck").unwrap_or(0.5);
    let pitch = cfg.num("pitch").unwrap_or(0.4);
    let nearest = match name {
        "catenoid" => Some(RealVec::from_slice(&[neck, 0.0, 0.0])),
        "helicoid" => Some(RealVec::zeros(3)),
        _ => None,
    };
    let y = match (cfg.word("y"), cfg.vector("y")) {
        (Some(_), _) => nearest.ok_or_else(|| {
            ConfigError::field(
                "y",
                format!("on-surface-nearest-origin is not defined for {name}"),
            )
        })?,
        (None, Some(v)) => vec3("y", v, 3)?,
        (None, None) => nearest.unwrap_or(RealVec::from_slice(&[0.3, 0.0, 0.0])),
    };
    let family = MinimalBallFamily::new(y).map_err(|e| ConfigError::field("y", e.to_string()))?;
    let positive = |field: &str, v: f64| -> Result<f64> {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(ConfigError::field(field, "must be positive").into())
        }
    };
    let hw = cfg.num("half-width");
    let mut c_h = 0.0;
    let surface = match name {
        "flat-disk" => {
            let orient = cfg.flag("orient-normal-to-y");
            let normal = if orient {
                if y.norm() == 0.0 {
                    return Err(
                        ConfigError::field("orient-normal-to-y", "y = 0 has no direction").into(),
                    );
                }
                y * (1.0 / y.norm())
            } else {
                RealVec::basis(3, 2)
            };
            let hw = hw.unwrap_or(if orient { 1.05 } else { 1.05 + y.norm() });
            Surface::single(FlatPlane::orthogonal_to(
                y,
                &normal,
                positive("half-width", hw)?,
            ))
        }
        "tilted-plane" => {
            let angle = cfg.num("angle").unwrap_or(PI / 6.0);
            let hw = positive("half-width", hw.unwrap_or(1.4))?;
            Surface::single(FlatPlane::tilted(&y, angle, y, hw))
        }
        "catenoid" => Surface::single(Catenoid::new(positive("neck", neck)?)),
        "helicoid" => Surface::single(Helicoid::new(positive("pitch", pitch)?)),
        "spherical-cap" => {
            let radius = positive("radius", cfg.num("radius").unwrap_or(2.0))?;
            let hw = positive("half-width", hw.unwrap_or(1.35))?;
            if hw * 2f64.sqrt() >= radius {
                return Err(ConfigError::field(
                    "half-width",
                    "cap chart must satisfy half-width * sqrt(2) < radius",
                )
                .into());
            }
            c_h = 2.0 / radius;
            Surface::single(SphericalCap::new(y, &RealVec::basis(3, 0), radius, hw))
        }
        "pair-of-planes" => pair_of_planes(y, positive("half-width", hw.unwrap_or(1.2))?),
        _ => unreachable!("schema restricts surface names"),
    };
    let yl: Vec<String> = y.as_slice().iter().map(|v| format!("{v}")).collect();
    Ok(MinimalCase {
        surface,
        family,
        label: format!("{name} y=({})", yl.join(",")),
        c_h: cfg.num("c-h").unwrap_or(c_h),
    })
}

const SCALES: Grid = Grid {
    lo: 1e-3,
    hi: 1.0,
    count: 32,
};

/// Largest certified error bound of the ratio over `grid`.
fn ratio_bound(case: &MinimalCase, grid: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let k = case.surface.k() as f64;
    let mut worst: f64 = 0.0;
    for &s in grid {
        let scale = s.powf(0.5 * k);
        let q = minimal::area(
            &case.surface,
            &case.family,
            s,
            &spec.with_tolerance(spec.tolerance * scale),
        )?;
        worst = worst.max(q.error_bound / scale);
    }
    Ok(worst)
}

fn min_mono(cfg: &ExperimentConfig) -> Result<Outcome> {
    let case = minimal_case(cfg)?;
    let spec = quad_spec(cfg)?;
    let grid = geometric(cfg, "s", SCALES)?;
    let exact = case.c_h == 0.0;
    let with_bulk = exact && grid[0] >= minimal::MIN_BULK_SCALE;
    let mut rep =
        minimal::minimal_mono_report(&case.surface, &case.family, &grid, &spec, exact, with_bulk)?;
    if negate_flux(cfg) {
        for (i, b) in rep.boundary_flux.iter_mut().enumerate() {
            *b = -*b;
            rep.flux_residual[i] = series::mixed_residual(rep.fd_derivative[i], *b);
        }
    }
    let mut table = Table::default();
    table.push("s", &grid);
    table.push("ratio", &rep.ratio);
    table.push("fd_derivative", &rep.fd_derivative);
    let mut checks = Vec::new();
    let mut residuals = Vec::new();
    let mut quantity = ("ratio", rep.ratio.clone());
    if exact {
        table.push("boundary_flux", &rep.boundary_flux);
        table.push("residual", &rep.flux_residual);
        checks.push(Check::monotone(
            "ratio nondecreasing",
            &grid,
            &rep.ratio,
            true,
            SLACK,
        ));
        checks.push(Check::residual(
            "differential identity",
            &grid,
            &rep.flux_residual,
            FLUX_TOL,
        ));
        residuals.push(("residual", rep.flux_residual.clone()));
        if with_bulk {
            table.push_intervals("bulk_increment", &rep.bulk_increment);
            table.push_intervals("bulk_residual", &rep.bulk_residual);
            checks.push(Check::residual(
                "integral identity",
                &grid[1..],
                &rep.bulk_residual,
                BULK_TOL,
            ));
            residuals.push(("bulk_residual", rep.bulk_residual.clone()));
        }
    } else {
        let k = case.surface.k();
        let corrected: Vec<f64> = grid
            .iter()
            .zip(&rep.ratio)
            .map(|(&s, r)| minimal::almost_mono_factor(&case.family, k, case.c_h, s) * r)
            .collect();
        table.push("corrected_quantity", &corrected);
        checks.push(Check::monotone(
            "corrected ratio nondecreasing",
            &grid,
            &corrected,
            true,
            SLACK,
        ));
        quantity = ("corrected_quantity", corrected);
    }
    let mut record = VerdictRecord::new(format!("min-mono {}", case.label), checks);
    record.quadrature_bound = Some(ratio_bound(&case, &grid, &spec)?);
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "s",
            x: grid,
            quantity,
            residuals,
        },
        table,
        record,
    })
}

fn bh_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let case = minimal_case(cfg)?;
    let spec = quad_spec(cfg)?;
    let grid = geometric(cfg, "s", SCALES)?;
    let rep = minimal::brendle_hung_check(&case.surface, &case.family, &grid, &spec)?;
    let mut table = Table::default();
    table.push("s", &grid);
    table.push("ratio", &rep.ratio);
    let checks = vec![
        Check::monotone("ratio nondecreasing", &grid, &rep.ratio, true, SLACK),
        Check::new(
            "ratio(1) >= density bound",
            (-rep.margin).max(0.0),
            1e-6,
            Some(1.0),
        ),
    ];
    let mut record = VerdictRecord::new(format!("bh-check {}", case.label), checks);
    record.quadrature_bound = Some(ratio_bound(&case, &grid, &spec)?);
    record.summary.insert("density", rep.density);
    record.summary.insert("lower_bound", rep.lower_bound);
    record.summary.insert("margin", rep.margin);
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "s",
            x: grid,
            quantity: ("ratio", rep.ratio),
            residuals: Vec::new(),
        },
        table,
        record,
    })
}

// flows

fn centre_path(
    cfg: &ExperimentConfig,
    n: usize,
    t0: f64,
    normal: Option<&RealVec>,
) -> Result<CentrePath> {
    let x0 = match cfg.vector("x0") {
        Some(v) => vec3("x0", v, n)?,
        None => RealVec::zeros(n),
    };
    let eps = cfg.num("eps").unwrap_or(0.3);
    Ok(match cfg.word("path").unwrap_or("line") {
        "constant" => CentrePath::Constant(x0),
        "line" => {
            let y0 = match (cfg.word("y0"), cfg.vector("y0")) {
                (Some(_), _) => *normal.ok_or_else(|| {
                    ConfigError::field("y0", "`normal` needs a flow with a fixed normal (plane)")
                })?,
                (None, Some(v)) => vec3("y0", v, n)?,
                (None, None) => match normal {
                    Some(nu) => *nu,
                    None => RealVec::from_slice(&[0.3, 0.4, 0.6, 0.2][..n]),
                },
            };
            CentrePath::towards(x0, t0, y0)
        }
        "circle" => CentrePath::Circle { eps, n },
        "parabola" => CentrePath::Parabola { eps, n },
        _ => unreachable!("schema restricts path names"),
    })
}

fn check_times(times: &[f64], t0: f64) -> Result<()> {
    if times.iter().any(|&t| t >= t0) {
        return Err(ConfigError::field("t", format!("every time must be below t0 = {t0}")).into());
    }
    Ok(())
}

fn mcf_mono(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = quad_spec(cfg)?;
    let t0 = cfg.num("t0").unwrap_or(0.0);
    let e3 = RealVec::basis(3, 2);
    let flow_name = cfg.word("flow").unwrap_or("plane");
    let flow: Box<dyn FlowSolution> = match flow_name {
        "plane" => Box::new(StaticPlane::new(RealVec::zeros(3), &e3)),
        "sphere" => Box::new(ShrinkingSphere { extinction: t0 }),
        "circle" => Box::new(ShrinkingCircle { extinction: t0 }),
        "cylinder" => Box::new(ShrinkingCylinder::new(t0)),
        _ => unreachable!("schema restricts flow names"),
    };
    let normal = (flow_name == "plane").then_some(e3);
    let centre = centre_path(cfg, flow.n(), t0, normal.as_ref())?;
    let times = linear(
        cfg,
        "t",
        Grid {
            lo: t0 - 1.0,
            hi: t0 - 0.1,
            count: 16,
        },
    );
    check_times(&times, t0)?;
    let weight = GaussianWeight {
        k: flow.k(),
        t0,
        centre,
    };
    let mut rep = mcf::mcf_report(flow.as_ref(), &weight, &times, &spec)?;
    if negate_flux(cfg) {
        std::mem::swap(&mut rep.dissipation, &mut rep.excess);
        for i in 0..times.len() {
            rep.residual[i] =
                series::relative_residual(rep.fd_derivative[i], rep.excess[i] - rep.dissipation[i]);
        }
    }
    let mut table = Table::default();
    table.push("t", &times);
    table.push("density", &rep.density);
    table.push("dissipation", &rep.dissipation);
    table.push("excess", &rep.excess);
    table.push("fd_derivative", &rep.fd_derivative);
    table.push("corrected_quantity", &rep.corrected);
    table.push("residual", &rep.residual);
    let mut checks = vec![
        Check::residual("moving-centre identity", &times, &rep.residual, FLUX_TOL),
        Check::monotone(
            "corrected quantity nonincreasing",
            &times,
            &rep.corrected,
            false,
            SLACK,
        ),
    ];
    // a static plane with the centre moving along its normal from a point on it
    let on_plane = cfg.vector("x0").is_none_or(|x| x[2] == 0.0);
    if flow_name == "plane" && cfg.word("path").unwrap_or("line") == "line" && on_plane {
        let y0 = weight.centre.y_prime(times[0]);
        if y0.axpy(-y0.dot(&e3), &e3).norm() == 0.0 {
            let dev: Vec<f64> = rep.corrected.iter().map(|c| (c - 1.0).abs()).collect();
            checks.push(Check::residual(
                "equality case (corrected = 1)",
                &times,
                &dev,
                EQUALITY_TOL,
            ));
        }
    }
    let label = format!("mcf-mono {} {}", flow.label(), weight.centre.label());
    let mut record = VerdictRecord::new(label, checks);
    record.quadrature_bound = Some(spec.tolerance);
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "t",
            x: times,
            quantity: ("corrected_quantity", rep.corrected),
            residuals: vec![("residual", rep.residual)],
        },
        table,
        record,
    })
}

fn entropy(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = quad_spec(cfg)?;
    let name = cfg.word("shrinker").unwrap_or("circle");
    let shrinker: Box<dyn Patch> = match name {
        "circle" => Box::new(Circle {
            centre: RealVec::zeros(2),
            radius: 2f64.sqrt(),
        }),
        "sphere" => Box::new(Sphere::new(RealVec::zeros(3), 2.0)),
        "cylinder" => Box::new(Cylinder {
            radius: 2f64.sqrt(),
            half_length: 30.0,
        }),
        "plane" => Box::new(FlatPlane::orthogonal_to(
            RealVec::zeros(3),
            &RealVec::basis(3, 2),
            30.0,
        )),
        _ => unreachable!("schema restricts shrinker names"),
    };
    let n = shrinker.n();
    let y = match cfg.vector("y") {
        Some(v) => vec3("y", v, n)?,
        None if cfg.word("y").is_some() => {
            return Err(ConfigError::field("y", "entropy needs an explicit vector").into())
        }
        None => RealVec::basis(n, 0),
    };
    let a = cfg.num("a").unwrap_or(0.0);
    let grid = linear(
        cfg,
        "s",
        Grid {
            lo: 0.0,
            hi: 1.5,
            count: 16,
        },
    );
    let mut scan = mcf::entropy_scan(shrinker.as_ref(), &y, a, &grid, &spec)?;
    if negate_flux(cfg) {
        for i in 0..grid.len() {
            scan.rhs[i] = -scan.rhs[i];
            scan.residual[i] = series::relative_residual(scan.fd_derivative[i], scan.rhs[i]);
        }
    }
    let above: Vec<f64> = scan
        .value
        .iter()
        .map(|v| (v - scan.value[0]).max(0.0))
        .collect();
    let checks = vec![
        Check::residual("derivative identity", &grid, &scan.residual, FLUX_TOL),
        Check::monotone("density nonincreasing", &grid, &scan.value, false, SLACK),
        Check::residual("F(s) <= F(0)", &grid, &above, 1e-12),
    ];
    let mut table = Table::default();
    table.push("s", &grid);
    table.push("density", &scan.value);
    table.push("derivative", &scan.rhs);
    table.push("fd_derivative", &scan.fd_derivative);
    table.push("residual", &scan.residual);
    let mut record = VerdictRecord::new(format!("entropy {} a={a}", shrinker.label()), checks);
    record.quadrature_bound = Some(spec.tolerance);
    record.summary.insert("f0", scan.value[0]);
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "s",
            x: grid,
            quantity: ("density", scan.value),
            residuals: vec![("residual", scan.residual)],
        },
        table,
        record,
    })
}

// maps

fn map_case(cfg: &ExperimentConfig, p: f64) -> Result<Box<dyn MapSolution>> {
    let err = |e: monoform_core::Error| RunError::from(ConfigError::field("p", e.to_string()));
    Ok(match cfg.word("map").unwrap_or("radial") {
        "constant" => {
            Box::new(ConstantMap::new(3, RealVec::from_slice(&[1.0, 2.0]), p).map_err(err)?)
        }
        "linear" => Box::new(
            LinearMap::new(Mat::from_rows(&[&[1.0, 0.2], &[-0.5, 0.3], &[0.1, 0.7]]), p)
                .map_err(err)?,
        ),
        "radial" => Box::new(RadialProjection::new(3, p).map_err(err)?),
        other => {
            return Err(ConfigError::field(
                "map",
                format!("{other} is a heat flow map, not stationary"),
            )
            .into())
        }
    })
}

fn pharm_mono(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = cfg.num("p").unwrap_or(2.0);
    let q = cfg.num("q").unwrap_or(p);
    let map = map_case(cfg, p)?;
    let y = match cfg.vector("y") {
        Some(v) => vec3("y", v, 3)?,
        None if cfg.word("y").is_some() => {
            return Err(ConfigError::field("y", "pharm-mono needs an explicit vector").into())
        }
        None => RealVec::from_slice(&[0.4, 0.0, 0.0]),
    };
    let family = QBallFamily::new(y, q).map_err(|e| ConfigError::field("q", e.to_string()))?;
    let grid = geometric(
        cfg,
        "s",
        Grid {
            lo: 1e-2,
            hi: 1.0,
            count: 16,
        },
    )?;
    let polar = PolarSpec::default();
    let mut rep = pharmonic::pharm_report(map.as_ref(), &family, &grid, &polar)?;
    if negate_flux(cfg) {
        for i in 0..grid.len() {
            rep.a[i] = -rep.a[i];
            rep.b[i] = -rep.b[i];
            rep.flux_residual[i] =
                series::mixed_residual(rep.fd_derivative[i], rep.a[i] + rep.b[i]);
        }
    }
    let cor = pharmonic::scaled_energies(map.as_ref(), &family, &grid, &polar)?;
    let negative_a: Vec<f64> = rep.a.iter().map(|a| (-a).max(0.0)).collect();
    let checks = vec![
        Check::residual("differential identity", &grid, &rep.flux_residual, FLUX_TOL),
        Check::residual(
            "integral identity",
            &grid[1..],
            &rep.bulk_residual,
            BULK_TOL,
        ),
        Check::residual("q-term A >= 0", &grid, &negative_a, 1e-12),
        Check::monotone(
            "general quantity nondecreasing",
            &grid,
            &cor.general,
            true,
            SLACK,
        ),
        Check::monotone(
            "sharp quantity nondecreasing",
            &grid,
            &cor.sharp,
            true,
            SLACK,
        ),
    ];
    let mut table = Table::default();
    table.push("s", &grid);
    table.push("ratio", &rep.ratio);
    table.push("boundary_a", &rep.a);
    table.push("boundary_b", &rep.b);
    table.push("fd_derivative", &rep.fd_derivative);
    table.push("residual", &rep.flux_residual);
    table.push_intervals("bulk_increment", &rep.bulk_increment);
    table.push_intervals("bulk_residual", &rep.bulk_residual);
    table.push("general_quantity", &cor.general);
    table.push("sharp_quantity", &cor.sharp);
    let mut record = VerdictRecord::new(format!("pharm-mono {} p={p} q={q}", map.label()), checks);
    record
        .summary
        .insert("sharp_constant", if cor.sharp_constant { 1.0 } else { 0.0 });
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "s",
            x: grid,
            quantity: ("sharp_quantity", cor.sharp),
            residuals: vec![
                ("residual", rep.flux_residual),
                ("bulk_residual", {
                    let mut v = vec![0.0];
                    v.extend(&rep.bulk_residual);
                    v
                }),
            ],
        },
        table,
        record,
    })
}

fn heat_mono(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t0 = cfg.num("t0").unwrap_or(0.5);
    let flow: Box<dyn HeatFlowSolution> = match cfg.word("map").unwrap_or("heat-kernel") {
        "linear" => Box::new(StaticLinear {
            a: vec3(
                "gradient",
                cfg.vector("gradient").unwrap_or(&[0.6, -0.3, 1.1]),
                3,
            )?,
        }),
        "heat-kernel" => Box::new(HeatKernel::new(3, -2.0, -1.5)?),
        "zero" => Box::new(ZeroMap { m: 3, n: 2 }),
        other => {
            return Err(ConfigError::field(
                "map",
                format!("{other} is a stationary map, not a heat flow"),
            )
            .into())
        }
    };
    let centre = centre_path(cfg, flow.m(), t0, None)?;
    let times = linear(
        cfg,
        "t",
        Grid {
            lo: -1.2,
            hi: 0.3,
            count: 16,
        },
    );
    check_times(&times, t0)?;
    let (lo, _) = flow.valid_interval();
    if times[0] <= lo {
        return Err(ConfigError::field("t", format!("the flow starts at t = {lo}")).into());
    }
    let weight = HeatWeight {
        m: flow.m(),
        t0,
        centre,
    };
    let mut rep = heatflow::heat_report(flow.as_ref(), &weight, &times)?;
    if negate_flux(cfg) {
        std::mem::swap(&mut rep.dissipation, &mut rep.excess);
        for i in 0..times.len() {
            rep.residual[i] =
                series::relative_residual(rep.fd_derivative[i], rep.excess[i] - rep.dissipation[i]);
        }
    }
    let checks = vec![
        Check::residual("moving-centre identity", &times, &rep.residual, FLUX_TOL),
        Check::monotone(
            "corrected quantity nonincreasing",
            &times,
            &rep.corrected,
            false,
            SLACK,
        ),
    ];
    let mut table = Table::default();
    table.push("t", &times);
    table.push("energy", &rep.energy);
    table.push("dissipation", &rep.dissipation);
    table.push("excess", &rep.excess);
    table.push("fd_derivative", &rep.fd_derivative);
    table.push("corrected_quantity", &rep.corrected);
    table.push("residual", &rep.residual);
    let label = format!("heat-mono {} {}", flow.label(), weight.centre.label());
    let record = VerdictRecord::new(label, checks);
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "t",
            x: times,
            quantity: ("corrected_quantity", rep.corrected),
            residuals: vec![("residual", rep.residual)],
        },
        table,
        record,
    })
}

// randomized pointwise identities

fn identity_suite(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.count("seed").unwrap_or(0));
    let samples = cfg.count("samples").unwrap_or(20) as usize;
    if samples == 0 {
        return Err(ConfigError::field("samples", "must be positive").into());
    }
    let spec = quad_spec(cfg)?.with_cells(4);
    let patches: Vec<Box<dyn Patch>> = vec![
        Box::new(Catenoid::new(0.5)),
        Box::new(Helicoid::new(0.4)),
        Box::new(FlatPlane::tilted(
            &RealVec::from_slice(&[0.3, 0.0, 0.0]),
            PI / 6.0,
            RealVec::zeros(3),
            1.05,
        )),
    ];
    let bx = ParamBox::new(&[0.4, -0.5, -0.3], &[1.3, 0.4, 0.6]);
    let count = PolynomialField::coefficient_count(3, 3);
    let (mut index, mut bh, mut defining, mut stationary) = (vec![], vec![], vec![], vec![]);
    for i in 0..samples {
        // a centre with |y| < 0.6 and a point of E_1 away from the vertex
        let y = RealVec::from_slice(&[
            rng.gen_range(-0.35..0.35),
            rng.gen_range(-0.35..0.35),
            rng.gen_range(-0.35..0.35),
        ]);
        let family = MinimalBallFamily::new(y)?;
        let patch = &patches[i % patches.len()];
        let dom = patch.domain();
        let sample = loop {
            let mut u = dom.lo;
            for a in 0..patch.k() {
                u[a] = dom.lo[a] + rng.gen::<f64>() * dom.width(a);
            }
            if matches!(family.level_function(&patch.embed(&u)), Ok(f) if f > 0.05) {
                break minimal::bh_field_identity(patch.as_ref(), &family, &u)?;
            }
        };
        bh.push(
            (sample.div_w0 - sample.div_w0_identity).abs() / sample.div_w0_identity.abs().max(1.0),
        );

        let s = rng.gen_range(0.01..1.0);
        let (c, r) = family.centre_and_radius(s)?;
        let mut dir = RealVec::from_slice(&[rng.gen(), rng.gen(), rng.gen::<f64>()]);
        dir = (dir - RealVec::from_slice(&[0.5, 0.5, 0.5])) * 2.0;
        if dir.norm() < 1e-3 {
            dir = RealVec::basis(3, 0);
        }
        let x = c.axpy(r / dir.norm(), &dir);
        defining.push(family.defining_residual(&x)?.abs() / (1.0 + x.norm_sq()));

        let p = if i % 2 == 0 { 2.0 } else { 1.5 };
        let map: Box<dyn MapSolution> = match i % 3 {
            0 => Box::new(ConstantMap::new(3, RealVec::from_slice(&[1.0, 2.0]), p)?),
            1 => Box::new(LinearMap::new(
                Mat::from_rows(&[&[1.0, 0.2], &[-0.5, 0.3], &[0.1, 0.7]]),
                p,
            )?),
            _ => Box::new(RadialProjection::new(3, p)?),
        };
        let coeffs: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let field = PolynomialField::from_coefficients(3, 3, &coeffs)?;
        let (_, _, res) = pharmonic::stationarity_check(map.as_ref(), &bx, &field, &spec)?;
        stationary.push(res);
        index.push(i as f64);
    }
    let checks = vec![
        Check::residual("W0 divergence identity", &index, &bh, 1e-6),
        Check::residual("ball family defining identity", &index, &defining, 1e-12),
        Check::residual("p-harmonic stationarity", &index, &stationary, 1e-6),
    ];
    let mut table = Table::default();
    table.push("sample", &index);
    table.push("bh_residual", &bh);
    table.push("defining_residual", &defining);
    table.push("stationarity_residual", &stationary);
    let record = VerdictRecord::new(
        format!("identity-suite seed={}", cfg.count("seed").unwrap_or(0)),
        checks,
    );
    Ok(Outcome {
        plot: Plot {
            title: record.experiment.clone(),
            x_label: "sample",
            x: index,
            quantity: ("bh_residual", bh.clone()),
            residuals: vec![
                ("bh_residual", bh),
                ("defining_residual", defining),
                ("stationarity_residual", stationary),
            ],
        },
        table,
        record,
    })
}
