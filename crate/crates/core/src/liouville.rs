//! Phase-space volume along the flow.
//!
//! The tangent map `J(t) = ∂x(t)/∂x(0)` is co-integrated with the base
//! trajectory from `dJ/dt = A(x(t))·J`, where `A` is the Jacobian of the
//! vector field. `det J` is the local volume ratio.
//!
//! In the canonical chart `tr A = 0`, so `det J ≡ 1`. In the deformed chart
//! `tr A = −2mω²βpq = d/dt ln(1 + βp²)`, which integrates to
//! `det J(t) = (1 + βp(t)²)/(1 + βp(0)²)`.
//!
//! A finite disc of points evolved with the flow gives a corroborating
//! measurement through its convex-hull area.

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{
    check_deformed_orbit, integrate, rk4_step, schedule, vector_field, Chart, Method, PhasePoint,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::params::OscillatorParams;

/// Step used by [`finite_difference_jacobian`].
pub const FD_STEP: f64 = 1e-6;

pub const MIN_ENSEMBLE_POINTS: usize = 64;
pub const MAX_DISC_RADIUS: f64 = 0.05;

/// Analytic Jacobian of [`vector_field`] in the chart of `point`.
pub fn jacobian_field(point: &PhasePoint, params: &OscillatorParams) -> Matrix2<f64> {
    let m = params.mass();
    let k = m * params.omega() * params.omega();
    match point.chart {
        Chart::Canonical => Matrix2::new(0.0, 1.0 / m, -k, 0.0),
        Chart::Deformed => {
            let (q, p, b) = (point.q, point.momentum, params.beta());
            let g = 1.0 + b * p * p;
            Matrix2::new(0.0, 1.0 / (m * g), -k * g, -2.0 * k * b * p * q)
        }
    }
}

/// Closed-form divergence `tr A`: zero in the canonical chart,
/// `−2mω²βpq` in the deformed chart.
pub fn divergence(point: &PhasePoint, params: &OscillatorParams) -> f64 {
    match point.chart {
        Chart::Canonical => 0.0,
        Chart::Deformed => {
            let k = params.mass() * params.omega() * params.omega();
            -2.0 * k * params.beta() * point.momentum * point.q
        }
    }
}

/// Central-difference Jacobian of [`vector_field`].
pub fn finite_difference_jacobian(
    point: &PhasePoint,
    params: &OscillatorParams,
    h: f64,
) -> Matrix2<f64> {
    let at = |dq: f64, dm: f64| {
        vector_field(
            &PhasePoint {
                chart: point.chart,
                q: point.q + dq,
                momentum: point.momentum + dm,
            },
            params,
        )
    };
    let (fq_p, gq_p) = at(h, 0.0);
    let (fq_m, gq_m) = at(-h, 0.0);
    let (fm_p, gm_p) = at(0.0, h);
    let (fm_m, gm_m) = at(0.0, -h);
    let d = 2.0 * h;
    Matrix2::new(
        (fq_p - fq_m) / d,
        (fm_p - fm_m) / d,
        (gq_p - gq_m) / d,
        (gm_p - gm_m) / d,
    )
}

/// `(1 + βp²)/(1 + βp₀²)`, the volume ratio of the deformed chart.
pub fn predicted_ratio(params: &OscillatorParams, p0: f64, p: f64) -> f64 {
    let b = params.beta();
    (1.0 + b * p * p) / (1.0 + b * p0 * p0)
}

/// A trajectory together with its tangent map at every sample.
#[derive(Debug, Clone)]
pub struct TangentFlow {
    pub base: Trajectory,
    /// `J(t)`, with `J(0)` the identity.
    pub jacobians: Vec<Matrix2<f64>>,
}

impl TangentFlow {
    pub fn determinants(&self) -> Vec<f64> {
        self.jacobians.iter().map(|j| j.determinant()).collect()
    }

    /// The analytic volume ratio for this chart at every sample: 1 in the
    /// canonical chart, `(1 + βp(t)²)/(1 + βp(0)²)` in the deformed chart.
    pub fn predicted_ratios(&self) -> Vec<f64> {
        match self.base.chart {
            Chart::Canonical => vec![1.0; self.base.len()],
            Chart::Deformed => {
                let p0 = self.base.points[0].momentum;
                self.base
                    .points
                    .iter()
                    .map(|pt| predicted_ratio(&self.base.params, p0, pt.momentum))
                    .collect()
            }
        }
    }

    /// max |det J − predicted|.
    pub fn max_determinant_error(&self) -> f64 {
        self.determinants()
            .iter()
            .zip(self.predicted_ratios())
            .fold(0.0, |m, (d, r)| m.max((d - r).abs()))
    }
}

/// RK4 co-integration of the trajectory and its tangent map, on the same
/// schedule as [`integrate`].
pub fn tangent_integrate(
    start: PhasePoint,
    params: &OscillatorParams,
    t_end: f64,
    dt: f64,
) -> Result<TangentFlow> {
    if !(start.q.is_finite() && start.momentum.is_finite()) {
        return Err(Error::invalid("liouville", "start point must be finite"));
    }
    check_deformed_orbit(&start, params, "liouville")?;
    let (n, h) = schedule(t_end, dt)?;
    let chart = start.chart;
    let point = |y: &[f64; 6]| PhasePoint {
        chart,
        q: y[0],
        momentum: y[1],
    };
    let rhs = |y: &[f64; 6]| {
        let pt = point(y);
        let (dq, dm) = vector_field(&pt, params);
        let a = jacobian_field(&pt, params);
        let j = Matrix2::new(y[2], y[3], y[4], y[5]);
        let dj = a * j;
        [dq, dm, dj[(0, 0)], dj[(0, 1)], dj[(1, 0)], dj[(1, 1)]]
    };
    let mut y = [start.q, start.momentum, 1.0, 0.0, 0.0, 1.0];
    let mut times = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    let mut jacobians = Vec::with_capacity(n + 1);
    times.push(0.0);
    points.push(start);
    jacobians.push(Matrix2::identity());
    for i in 1..=n {
        y = rk4_step(&y, h, rhs);
        times.push(i as f64 * h);
        points.push(point(&y));
        jacobians.push(Matrix2::new(y[2], y[3], y[4], y[5]));
    }
    let energies = points.iter().map(|pt| pt.energy(params)).collect();
    Ok(TangentFlow {
        base: Trajectory {
            params: *params,
            chart,
            method: Method::Rk4,
            step: h,
            times,
            points,
            energies,
        },
        jacobians,
    })
}

/// Points sampled reproducibly from a seed, all in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub seed: u64,
    pub chart: Chart,
    pub points: Vec<PhasePoint>,
}

impl Ensemble {
    /// `count` points uniform in a disc of `radius` around `center`.
    pub fn disc(center: PhasePoint, radius: f64, count: usize, seed: u64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(
                "liouville",
                format!("disc radius must be > 0, got {radius}"),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                let (s, c) = theta.sin_cos();
                PhasePoint {
                    chart: center.chart,
                    q: center.q + r * c,
                    momentum: center.momentum + r * s,
                }
            })
            .collect();
        Ok(Ensemble {
            seed,
            chart: center.chart,
            points,
        })
    }
}

/// Area of the convex hull of `pts` (monotone chain + shoelace).
pub fn convex_hull_area(pts: &[(f64, f64)]) -> f64 {
    let mut v: Vec<(f64, f64)> = pts.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v.dedup();
    if v.len() < 3 {
        return 0.0;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * v.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(v.iter())
        } else {
            Box::new(v.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    0.5 * twice.abs()
}

/// Hull areas of an evolving ensemble in both charts.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSeries {
    pub times: Vec<f64>,
    pub hull_area_canonical: Vec<f64>,
    pub hull_area_deformed: Vec<f64>,
}

impl VolumeSeries {
    pub fn canonical_ratios(&self) -> Vec<f64> {
        ratios(&self.hull_area_canonical)
    }

    pub fn deformed_ratios(&self) -> Vec<f64> {
        ratios(&self.hull_area_deformed)
    }
}

fn ratios(areas: &[f64]) -> Vec<f64> {
    let a0 = areas[0];
    areas.iter().map(|a| a / a0).collect()
}

/// Evolves every ensemble point with RK4 in the ensemble's chart and reports
/// the convex-hull area in both charts at every step. Points evolve in
/// parallel; the output does not depend on the thread count.
pub fn ensemble_volume(
    ensemble: &Ensemble,
    params: &OscillatorParams,
    t_end: f64,
    dt: f64,
) -> Result<VolumeSeries> {
    if ensemble.points.len() < MIN_ENSEMBLE_POINTS {
        return Err(Error::invalid(
            "liouville",
            format!(
                "ensemble needs at least {MIN_ENSEMBLE_POINTS} points, got {}",
                ensemble.points.len()
            ),
        ));
    }
    if ensemble.points.iter().any(|p| p.chart != ensemble.chart) {
        return Err(Error::invalid(
            "liouville",
            "ensemble points must share one chart",
        ));
    }
    let radius = half_diameter(&ensemble.points);
    if radius > MAX_DISC_RADIUS * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "liouville",
            format!("ensemble must fit in a disc of radius {MAX_DISC_RADIUS}, spans {radius}"),
        ));
    }
    let initial: Vec<(f64, f64)> = ensemble.points.iter().map(|p| (p.q, p.momentum)).collect();
    if convex_hull_area(&initial) <= 1e-12 * radius * radius {
        return Err(Error::Degenerate {
            module: "liouville",
            message: "ensemble is collinear (zero hull area)".into(),
        });
    }

    let paths: Vec<Trajectory> = ensemble
        .points
        .par_iter()
        .map(|&start| integrate(start, params, t_end, dt, Method::Rk4))
        .collect::<Result<_>>()?;

    let samples = paths[0].len();
    let mut canonical = Vec::with_capacity(samples);
    let mut deformed = Vec::with_capacity(samples);
    let mut buf_c = Vec::with_capacity(paths.len());
    let mut buf_d = Vec::with_capacity(paths.len());
    for i in 0..samples {
        buf_c.clear();
        buf_d.clear();
        for path in &paths {
            let pt = path.points[i];
            let c = pt.to_canonical(params);
            let d = pt.to_deformed(params)?;
            buf_c.push((c.q, c.momentum));
            buf_d.push((d.q, d.momentum));
        }
        canonical.push(convex_hull_area(&buf_c));
        deformed.push(convex_hull_area(&buf_d));
    }
    Ok(VolumeSeries {
        times: paths[0].times.clone(),
        hull_area_canonical: canonical,
        hull_area_deformed: deformed,
    })
}

fn half_diameter(points: &[PhasePoint]) -> f64 {
    let mut widest = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            widest = widest.max((a.q - b.q).hypot(a.momentum - b.momentum));
        }
    }
    0.5 * widest
}

/// One row of the combined volume table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeRow {
    pub t: f64,
    pub det_j_canonical: f64,
    pub det_j_deformed: f64,
    pub predicted_ratio: f64,
    pub hull_area_canonical: f64,
    pub hull_area_deformed: f64,
}

/// Tangent maps in both charts from the same physical start, plus the
/// hull areas of a disc ensemble centered there (in the deformed chart).
pub fn volume_table(
    start: PhasePoint,
    params: &OscillatorParams,
    t_end: f64,
    dt: f64,
    disc_radius: f64,
    disc_points: usize,
    seed: u64,
) -> Result<Vec<VolumeRow>> {
    let deformed_start = start.to_deformed(params)?;
    let canonical_start = start.to_canonical(params);
    let tc = tangent_integrate(canonical_start, params, t_end, dt)?;
    let td = tangent_integrate(deformed_start, params, t_end, dt)?;
    let ensemble = Ensemble::disc(deformed_start, disc_radius, disc_points, seed)?;
    let vol = ensemble_volume(&ensemble, params, t_end, dt)?;
    let det_c = tc.determinants();
    let det_d = td.determinants();
    let pred = td.predicted_ratios();
    Ok((0..vol.times.len())
        .map(|i| VolumeRow {
            t: vol.times[i],
            det_j_canonical: det_c[i],
            det_j_deformed: det_d[i],
            predicted_ratio: pred[i],
            hull_area_canonical: vol.hull_area_canonical[i],
            hull_area_deformed: vol.hull_area_deformed[i],
        })
        .collect())
}
