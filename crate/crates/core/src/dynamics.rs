//! Classical equations of motion in the deformed `(q, p)` chart and the
//! canonical `(q, P)` chart, fixed-step integrators, and the Heisenberg
//! evolution of `a`.
//!
//! In the canonical chart the flow is the ordinary oscillator:
//! `q̇ = P/m`, `Ṗ = −mω²q`. In the deformed chart
//! `q̇ = arctan(√β p)/(m√β)`, `ṗ = −mω²(1 + βp²)q`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock_algebra::{build_hamiltonian, build_ladder, HamiltonianForm};
use crate::momentum_map::{
    momentum_forward, momentum_inverse, momentum_limit, DEFAULT_DOMAIN_GUARD,
};
use crate::operator::{max_abs, DenseOperator};
use crate::params::OscillatorParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `(q, p)`, the physical momentum with the deformed commutator.
    Deformed,
    /// `(q, P)`, the generalized momentum conjugate to `q`.
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub chart: Chart,
    pub q: f64,
    /// `p` in the deformed chart, `P` in the canonical chart.
    pub momentum: f64,
}

impl PhasePoint {
    pub fn deformed(q: f64, p: f64) -> Self {
        PhasePoint {
            chart: Chart::Deformed,
            q,
            momentum: p,
        }
    }

    pub fn canonical(q: f64, big_p: f64) -> Self {
        PhasePoint {
            chart: Chart::Canonical,
            q,
            momentum: big_p,
        }
    }

    pub fn to_canonical(self, params: &OscillatorParams) -> PhasePoint {
        match self.chart {
            Chart::Canonical => self,
            Chart::Deformed => {
                PhasePoint::canonical(self.q, momentum_forward(self.momentum, params))
            }
        }
    }

    /// Fails with `DomainExceeded` when `P` lies outside the range of the
    /// momentum map.
    pub fn to_deformed(self, params: &OscillatorParams) -> Result<PhasePoint> {
        match self.chart {
            Chart::Deformed => Ok(self),
            Chart::Canonical => Ok(PhasePoint::deformed(
                self.q,
                momentum_inverse(self.momentum, params)?,
            )),
        }
    }

    pub fn in_chart(self, chart: Chart, params: &OscillatorParams) -> Result<PhasePoint> {
        match chart {
            Chart::Canonical => Ok(self.to_canonical(params)),
            Chart::Deformed => self.to_deformed(params),
        }
    }

    /// `H = ½mω²q² + P²/2m`, always through `P`.
    pub fn energy(&self, params: &OscillatorParams) -> f64 {
        let c = self.to_canonical(params);
        params.energy(c.q, c.momentum)
    }
}

/// `arctan(√β x)/√β`, reducing to `x` at β = 0.
fn arctan_scaled(x: f64, params: &OscillatorParams) -> f64 {
    momentum_forward(x, params)
}

/// `(q̇, ṗ)` or `(q̇, Ṗ)` depending on the chart of `point`.
pub fn vector_field(point: &PhasePoint, params: &OscillatorParams) -> (f64, f64) {
    let m = params.mass();
    let k = m * params.omega() * params.omega();
    match point.chart {
        Chart::Canonical => (point.momentum / m, -k * point.q),
        Chart::Deformed => {
            let p = point.momentum;
            (
                arctan_scaled(p, params) / m,
                -k * (1.0 + params.beta() * p * p) * point.q,
            )
        }
    }
}

/// Poisson bracket `{f, g} = ∂f/∂q ∂g/∂P − ∂g/∂q ∂f/∂P` by central
/// differences with step `h` in both directions.
pub fn poisson_bracket_fd(
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
    q: f64,
    big_p: f64,
    h: f64,
) -> f64 {
    let dq = |u: &dyn Fn(f64, f64) -> f64| (u(q + h, big_p) - u(q - h, big_p)) / (2.0 * h);
    let dp = |u: &dyn Fn(f64, f64) -> f64| (u(q, big_p + h) - u(q, big_p - h)) / (2.0 * h);
    dq(&f) * dp(&g) - dq(&g) * dp(&f)
}

/// One classical RK4 step of `ẏ = f(y)`.
pub(crate) fn rk4_step<const N: usize>(
    y: &[f64; N],
    h: f64,
    f: impl Fn(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let shift = |base: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *base;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&shift(y, &k1, 0.5 * h));
    let k3 = f(&shift(y, &k2, 0.5 * h));
    let k4 = f(&shift(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    /// Kick-drift-kick leapfrog; canonical chart only.
    Leapfrog,
}

/// Fixed-step schedule covering `[0, t_end]` with the largest uniform step
/// not exceeding `dt`.
pub(crate) fn schedule(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(
            "dynamics",
            format!("dt must be finite and > 0, got {dt}"),
        ));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::invalid(
            "dynamics",
            format!("t_end must be finite and > 0, got {t_end}"),
        ));
    }
    let n = (t_end / dt - 1e-9).ceil().max(1.0);
    if n > 1e8 {
        return Err(Error::invalid(
            "dynamics",
            format!("{n} steps requested; limit is 1e8"),
        ));
    }
    Ok((n as usize, t_end / n))
}

/// A sampled solution of the equations of motion.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: OscillatorParams,
    pub chart: Chart,
    pub method: Method,
    /// Uniform step actually taken.
    pub step: f64,
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    /// `H(q, P)` at every sample.
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.points.iter().map(|pt| pt.q).collect()
    }

    pub fn canonical_momenta(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|pt| pt.to_canonical(&self.params).momentum)
            .collect()
    }

    /// `p` at every sample; `None` where a canonical-chart `P` lies outside
    /// the range of the momentum map.
    pub fn deformed_momenta(&self) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|pt| pt.to_deformed(&self.params).ok().map(|d| d.momentum))
            .collect()
    }

    /// Whole trajectory re-expressed in the canonical chart.
    pub fn to_canonical(&self) -> Trajectory {
        Trajectory {
            chart: Chart::Canonical,
            points: self
                .points
                .iter()
                .map(|pt| pt.to_canonical(&self.params))
                .collect(),
            ..self.clone()
        }
    }

    /// max |E(t) − E(0)| / |E(0)| (absolute when E(0) = 0).
    pub fn max_relative_energy_drift(&self) -> f64 {
        relative_drift(&self.energies)
    }

    /// Drift of the quantity the integrator conserves up to round-off. For
    /// leapfrog this is the modified energy
    /// `P²/2m + ½mω²q²(1 − (ωh)²/4)`; the physical energy oscillates at
    /// `O((ωh)²)` without growing. For RK4 it is the physical energy.
    pub fn secular_energy_drift(&self) -> f64 {
        match self.method {
            Method::Rk4 => self.max_relative_energy_drift(),
            Method::Leapfrog => {
                let wh = self.params.omega() * self.step;
                let m = self.params.mass();
                let k = m * self.params.omega() * self.params.omega() * (1.0 - wh * wh / 4.0);
                let shadow: Vec<f64> = self
                    .points
                    .iter()
                    .map(|pt| {
                        let c = pt.to_canonical(&self.params);
                        c.momentum * c.momentum / (2.0 * m) + 0.5 * k * c.q * c.q
                    })
                    .collect();
                relative_drift(&shadow)
            }
        }
    }

    /// Times at which `q` crosses zero from below, linearly interpolated.
    pub fn upward_zero_crossings(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 1..self.len() {
            let (q0, q1) = (self.points[i - 1].q, self.points[i].q);
            if q0 < 0.0 && q1 >= 0.0 {
                let (t0, t1) = (self.times[i - 1], self.times[i]);
                out.push(t0 + (t1 - t0) * (-q0) / (q1 - q0));
            }
        }
        out
    }

    /// Mean spacing of successive upward zero crossings, if there are at
    /// least two.
    pub fn period_estimate(&self) -> Option<f64> {
        let c = self.upward_zero_crossings();
        (c.len() >= 2).then(|| (c[c.len() - 1] - c[0]) / (c.len() - 1) as f64)
    }
}

fn relative_drift(values: &[f64]) -> f64 {
    let Some(&e0) = values.first() else {
        return 0.0;
    };
    let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
    values
        .iter()
        .fold(0.0, |m, e| m.max((e - e0).abs() / scale))
}

/// Fixed-step integration from `start` over `[0, t_end]`.
///
/// The step is `t_end / ceil(t_end/dt)`, so the last sample lands on
/// `t_end`. Leapfrog is only available in the canonical chart, where the
/// Hamiltonian is separable.
pub fn integrate(
    start: PhasePoint,
    params: &OscillatorParams,
    t_end: f64,
    dt: f64,
    method: Method,
) -> Result<Trajectory> {
    if !(start.q.is_finite() && start.momentum.is_finite()) {
        return Err(Error::invalid("dynamics", "start point must be finite"));
    }
    if method == Method::Leapfrog && start.chart != Chart::Canonical {
        return Err(Error::invalid(
            "dynamics",
            "leapfrog requires the canonical (q,P) chart; the deformed chart is not separable",
        ));
    }
    check_deformed_orbit(&start, params, "dynamics")?;
    let (n, h) = schedule(t_end, dt)?;
    let chart = start.chart;
    let make = |y: [f64; 2]| PhasePoint {
        chart,
        q: y[0],
        momentum: y[1],
    };
    let mut times = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    let mut y = [start.q, start.momentum];
    times.push(0.0);
    points.push(start);
    let m = params.mass();
    let k = m * params.omega() * params.omega();
    for i in 1..=n {
        y = match method {
            Method::Rk4 => rk4_step(&y, h, |s| {
                let (dq, dm) = vector_field(&make(*s), params);
                [dq, dm]
            }),
            Method::Leapfrog => {
                let half = y[1] - 0.5 * h * k * y[0];
                let q = y[0] + h * half / m;
                [q, half - 0.5 * h * k * q]
            }
        };
        times.push(i as f64 * h);
        points.push(make(y));
    }
    let energies = points.iter().map(|pt| pt.energy(params)).collect();
    Ok(Trajectory {
        params: *params,
        chart,
        method,
        step: h,
        times,
        points,
        energies,
    })
}

/// Rejects a deformed-chart start whose orbit leaves the range of the
/// momentum map, where `p` diverges in finite time. Energy conservation puts
/// the largest `|P|` on the orbit at `√(P₀² + m²ω²q₀²)`.
pub fn check_deformed_orbit(
    start: &PhasePoint,
    params: &OscillatorParams,
    module: &'static str,
) -> Result<()> {
    if start.chart != Chart::Deformed {
        return Ok(());
    }
    let Some(limit) = momentum_limit(params, DEFAULT_DOMAIN_GUARD) else {
        return Ok(());
    };
    let c = start.to_canonical(params);
    let reach = c.momentum.hypot(params.mass() * params.omega() * c.q);
    if reach >= limit {
        return Err(Error::DomainExceeded {
            module,
            value: reach,
            limit,
            message: format!(
                "orbit through (q, p) = ({}, {}) reaches |P| = {reach:.6} beyond {limit:.6}; p diverges in finite time",
                start.q, start.momentum
            ),
        });
    }
    Ok(())
}

/// Closed-form canonical-chart solution
/// `q(t) = q₀cos ωt + (P₀/mω) sin ωt`, `P(t) = P₀cos ωt − mωq₀ sin ωt`.
pub fn canonical_exact(start: PhasePoint, params: &OscillatorParams, t: f64) -> PhasePoint {
    let s = start.to_canonical(params);
    let (w, m) = (params.omega(), params.mass());
    let (sn, cs) = (w * t).sin_cos();
    PhasePoint::canonical(
        s.q * cs + s.momentum / (m * w) * sn,
        s.momentum * cs - m * w * s.q * sn,
    )
}

/// `e^{−iωt}`, the phase acquired by `a` in the Heisenberg picture.
pub fn heisenberg_a_evolution(params: &OscillatorParams, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -params.omega() * t)
}

/// `a(t) = e^{iHt/ħ} a e^{−iHt/ħ}` with the quadratic-form `H` of the
/// truncated space, through its eigen-decomposition.
pub fn evolve_annihilation(params: &OscillatorParams, dim: usize, t: f64) -> Result<DenseOperator> {
    let h = build_hamiltonian(params, dim, HamiltonianForm::Quadratic)?;
    let (a, _) = build_ladder(dim)?;
    let u = h.unitary_exp(t / params.hbar())?;
    let m = u.matrix().adjoint() * a.matrix() * u.matrix();
    DenseOperator::new(format!("a({t})"), m)
}

/// max |a(t) − a e^{−iωt}| on the leading `dim − 1` block.
pub fn heisenberg_residual(params: &OscillatorParams, dim: usize, t: f64) -> Result<f64> {
    let at = evolve_annihilation(params, dim, t)?;
    let (a, _) = build_ladder(dim)?;
    let expected = a.matrix() * heisenberg_a_evolution(params, t);
    let k = dim - 1;
    let diff = at.leading_block(k) - expected.view((0, 0), (k, k));
    Ok(max_abs(&diff))
}
