use gup_oscillator::dynamics::integrate;
use gup_oscillator::fock_algebra::{
    algebra_report, analytic_level, ground_state_wavefunction, spectrum, symmetric_grid,
    HamiltonianForm,
};
use gup_oscillator::liouville::volume_table;
use gup_oscillator::momentum_map::{series_momentum, series_momentum_squared};
use gup_oscillator::optics::{
    coherent_state, mode_energy_report, poisson_probabilities, CoherentSpec, ModeSpec,
};
use gup_oscillator::series::rational_from_f64;
use gup_oscillator::{PhasePoint, PowerSeries};
use num_complex::Complex64;
use serde::Serialize;

use crate::artifacts::{Artifact, Cell, Table};
use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Grid half-width, in oscillator lengths, for the exported ground state.
const PSI0_HALF_WIDTH: f64 = 8.0;
const PSI0_POINTS: usize = 401;

pub fn run(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    match cfg.subcommand {
        "series" => series(cfg),
        "commute" => commute(cfg),
        "spectrum" => spectrum_cmd(cfg),
        "evolve" => evolve(cfg),
        "liouville" => liouville(cfg),
        "coherent" => coherent(cfg),
        other => Err(CliError::Internal(format!("unknown subcommand {other}"))),
    }
}

#[derive(Serialize)]
struct Term {
    power: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct SeriesDoc {
    beta: String,
    order: usize,
    momentum: Vec<Term>,
    momentum_squared: Vec<Term>,
}

fn terms(s: &PowerSeries) -> Vec<Term> {
    s.terms()
        .map(|(power, c)| Term {
            power,
            coefficient: c.to_string(),
        })
        .collect()
}

fn series(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let order = cfg.order.unwrap_or(crate::config::DEFAULT_ORDER);
    if order < 2 {
        return Err(CliError::Validation(format!(
            "--order must be >= 2, got {order}"
        )));
    }
    let odd = if order % 2 == 1 { order } else { order - 1 };
    let even = order - order % 2;
    let p = series_momentum(&cfg.params, odd)?;
    let p2 = series_momentum_squared(&cfg.params, even)?;
    let doc = SeriesDoc {
        beta: rational_from_f64(cfg.beta)?.to_string(),
        order,
        momentum: terms(&p),
        momentum_squared: terms(&p2),
    };
    let mut out = vec![Artifact::json("series.json".into(), &doc)?];
    if cfg.format == Format::Csv {
        let mut t = Table::new("series", &["series", "power", "coefficient"]);
        for (name, list) in [("P", &doc.momentum), ("P^2", &doc.momentum_squared)] {
            for term in list {
                t.push(vec![
                    Cell::Text(name.into()),
                    Cell::Int(term.power as u64),
                    Cell::Text(term.coefficient.clone()),
                ]);
            }
        }
        out.push(t.render(Format::Csv)?);
    }
    Ok(out)
}

fn commute(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let mut t = Table::new(
        "commute",
        &[
            "identity",
            "block",
            "metric",
            "residual",
            "tolerance",
            "passed",
        ],
    );
    for row in algebra_report(&cfg.params, cfg.dim)? {
        t.push(vec![
            Cell::Text(row.identity.into()),
            Cell::Int(row.block as u64),
            Cell::Text(row.metric.into()),
            Cell::Num(row.residual),
            Cell::Num(row.tolerance),
            Cell::Flag(row.passed),
        ]);
    }
    Ok(vec![t.render(cfg.format)?])
}

fn spectrum_cmd(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let levels = spectrum(&cfg.params, cfg.dim, HamiltonianForm::Quadratic)?;
    let mut t = Table::new("spectrum", &["n", "E_numeric", "E_analytic", "abs_err"]);
    for (n, e) in levels.iter().take(cfg.dim / 2).enumerate() {
        let exact = analytic_level(&cfg.params, n);
        t.push(vec![
            Cell::Int(n as u64),
            Cell::Num(*e),
            Cell::Num(exact),
            Cell::Num((e - exact).abs()),
        ]);
    }
    let grid = symmetric_grid(&cfg.params, PSI0_HALF_WIDTH, PSI0_POINTS);
    let psi = ground_state_wavefunction(&cfg.params, &grid)?;
    let mut w = Table::new("psi0", &["q", "psi0"]);
    for (q, v) in grid.iter().zip(&psi) {
        w.push(vec![Cell::Num(*q), Cell::Num(*v)]);
    }
    Ok(vec![t.render(cfg.format)?, w.render(cfg.format)?])
}

fn start_point(cfg: &RunConfig) -> PhasePoint {
    let q = cfg.q0.unwrap_or(1.0);
    let m = cfg.mom0.unwrap_or(1.0);
    match cfg.chart.map(Into::into) {
        Some(gup_oscillator::Chart::Canonical) => PhasePoint::canonical(q, m),
        _ => PhasePoint::deformed(q, m),
    }
}

fn evolve(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let method = cfg
        .method
        .map(Into::into)
        .unwrap_or(gup_oscillator::Method::Rk4);
    let tr = integrate(start_point(cfg), &cfg.params, cfg.t_end, cfg.dt, method)?;
    let big_p = tr.canonical_momenta();
    let small_p = tr.deformed_momenta();
    let mut t = Table::new("trajectory", &["t", "q", "p", "P", "energy"]);
    for i in 0..tr.len() {
        t.push(vec![
            Cell::Num(tr.times[i]),
            Cell::Num(tr.points[i].q),
            small_p[i].map_or(Cell::Empty, Cell::Num),
            Cell::Num(big_p[i]),
            Cell::Num(tr.energies[i]),
        ]);
    }
    Ok(vec![t.render(cfg.format)?])
}

fn liouville(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let rows = volume_table(
        start_point(cfg),
        &cfg.params,
        cfg.t_end,
        cfg.dt,
        cfg.disc_radius
            .unwrap_or(crate::config::DEFAULT_DISC_RADIUS),
        cfg.disc_points
            .unwrap_or(crate::config::DEFAULT_DISC_POINTS),
        cfg.seed,
    )?;
    let mut t = Table::new(
        "liouville",
        &[
            "t",
            "detJ_canonical",
            "detJ_deformed",
            "predicted_ratio",
            "hull_area_canonical",
            "hull_area_deformed",
        ],
    );
    for r in rows {
        t.push(vec![
            Cell::Num(r.t),
            Cell::Num(r.det_j_canonical),
            Cell::Num(r.det_j_deformed),
            Cell::Num(r.predicted_ratio),
            Cell::Num(r.hull_area_canonical),
            Cell::Num(r.hull_area_deformed),
        ]);
    }
    Ok(vec![t.render(cfg.format)?])
}

pub fn parse_alpha(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Validation(format!("--alpha must be \"re,im\", got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn parse_modes(text: &str) -> Result<Vec<ModeSpec>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let bad = || CliError::Validation(format!("mode must be \"k:lambda:n\", got {item:?}"));
            let parts: Vec<&str> = item.trim().split(':').collect();
            let [k, lambda, n] = parts.as_slice() else {
                return Err(bad());
            };
            let k: f64 = k.parse().map_err(|_| bad())?;
            let lambda: u8 = lambda.parse().map_err(|_| bad())?;
            let n: u64 = n.parse().map_err(|_| bad())?;
            Ok(ModeSpec::new(k, lambda, n)?)
        })
        .collect()
}

fn coherent(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let alpha = parse_alpha(cfg.alpha.as_deref().unwrap_or("1,0"))?;
    let modes = cfg.modes.as_deref().map(parse_modes).transpose()?;
    let spec = CoherentSpec::new(alpha, cfg.dim)?;
    let numeric = coherent_state(&spec)?.probabilities();
    let analytic = poisson_probabilities(alpha, spec.dim);
    let mut t = Table::new("coherent", &["n", "P_n_numeric", "P_n_analytic", "abs_err"]);
    for (n, (a, b)) in numeric.iter().zip(&analytic).enumerate() {
        t.push(vec![
            Cell::Int(n as u64),
            Cell::Num(*a),
            Cell::Num(*b),
            Cell::Num((a - b).abs()),
        ]);
    }
    let mut out = vec![t.render(cfg.format)?];
    if let Some(modes) = modes {
        let report = mode_energy_report(&modes, cfg.hbar, cfg.c.unwrap_or(1.0))?;
        out.push(Artifact::json("modes.json".into(), &report)?);
    }
    Ok(out)
}
