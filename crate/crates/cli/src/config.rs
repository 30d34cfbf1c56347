use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use gup_oscillator::{Chart, Method, OscillatorParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartArg {
    Deformed,
    Canonical,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Chart {
        match c {
            ChartArg::Deformed => Chart::Deformed,
            ChartArg::Canonical => Chart::Canonical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Rk4,
    Leapfrog,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Leapfrog => Method::Leapfrog,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with any of the flag values; flags given here win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Fock-space truncation.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Integration step (default: period/1000).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// Integration span (default: ten periods).
    #[arg(long = "t-end", global = true, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact rational Taylor coefficients of P(p) and P(p)².
    Series {
        #[arg(long)]
        order: Option<usize>,
    },
    /// Residuals of the oscillator algebra in truncated Fock space.
    Commute,
    /// Energy levels and the ground-state wavefunction.
    Spectrum,
    /// A classical trajectory in either chart.
    Evolve(StartArgs),
    /// Phase-volume evolution: tangent-map determinants and disc hull areas.
    Liouville {
        #[command(flatten)]
        start: StartArgs,
        /// Radius of the sampled disc around the start point.
        #[arg(long)]
        disc_radius: Option<f64>,
        #[arg(long)]
        disc_points: Option<usize>,
    },
    /// Photon statistics of a coherent state and optional mode energies.
    Coherent {
        /// Complex amplitude as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Field modes as "k:lambda:n,...".
        #[arg(long)]
        modes: Option<String>,
        /// Speed of light used for mode energies.
        #[arg(long)]
        c: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Series { .. } => "series",
            Command::Commute => "commute",
            Command::Spectrum => "spectrum",
            Command::Evolve(_) => "evolve",
            Command::Liouville { .. } => "liouville",
            Command::Coherent { .. } => "coherent",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct StartArgs {
    #[arg(long, value_enum)]
    pub chart: Option<ChartArg>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Initial position.
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<f64>,
    /// Initial momentum, in the chosen chart.
    #[arg(long, allow_hyphen_values = true)]
    pub mom0: Option<f64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub beta: Option<f64>,
    pub dim: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub order: Option<usize>,
    pub alpha: Option<String>,
    pub modes: Option<String>,
    pub c: Option<f64>,
    pub chart: Option<ChartArg>,
    pub method: Option<MethodArg>,
    pub q0: Option<f64>,
    pub mom0: Option<f64>,
    pub disc_radius: Option<f64>,
    pub disc_points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run; echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub beta: f64,
    pub dim: usize,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mom0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_points: Option<usize>,
    #[serde(skip)]
    pub params: OscillatorParams,
}

pub const DEFAULT_DIM: usize = 32;
pub const DEFAULT_ORDER: usize = 10;
pub const DEFAULT_DISC_RADIUS: f64 = 0.05;
pub const DEFAULT_DISC_POINTS: usize = 128;

impl RunConfig {
    pub fn resolve(common: &CommonArgs, command: &Command) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let params = OscillatorParams::new(
            common.hbar.or(file.hbar).unwrap_or(1.0),
            common.mass.or(file.mass).unwrap_or(1.0),
            common.omega.or(file.omega).unwrap_or(1.0),
            common.beta.or(file.beta).unwrap_or(0.0),
        )?;
        let period = params.period();
        let mut cfg = RunConfig {
            subcommand: command.name(),
            hbar: params.hbar(),
            mass: params.mass(),
            omega: params.omega(),
            beta: params.beta(),
            dim: common.dim.or(file.dim).unwrap_or(DEFAULT_DIM),
            dt: common.dt.or(file.dt).unwrap_or(period / 1000.0),
            t_end: common.t_end.or(file.t_end).unwrap_or(10.0 * period),
            seed: common.seed.or(file.seed).unwrap_or(0),
            out: common
                .out
                .clone()
                .or(file.out.clone())
                .unwrap_or_else(|| PathBuf::from("gupo-out")),
            format: common.format.or(file.format).unwrap_or(Format::Csv),
            order: None,
            alpha: None,
            modes: None,
            c: None,
            chart: None,
            method: None,
            q0: None,
            mom0: None,
            disc_radius: None,
            disc_points: None,
            params,
        };
        match command {
            Command::Series { order } => {
                cfg.order = Some(order.or(file.order).unwrap_or(DEFAULT_ORDER))
            }
            Command::Commute | Command::Spectrum => {}
            Command::Evolve(start) => {
                cfg.set_start(start, &file, ChartArg::Canonical);
                cfg.method = Some(start.method.or(file.method).unwrap_or(MethodArg::Rk4));
            }
            Command::Liouville {
                start,
                disc_radius,
                disc_points,
            } => {
                cfg.set_start(start, &file, ChartArg::Deformed);
                cfg.disc_radius = Some(
                    disc_radius
                        .or(file.disc_radius)
                        .unwrap_or(DEFAULT_DISC_RADIUS),
                );
                cfg.disc_points = Some(
                    disc_points
                        .or(file.disc_points)
                        .unwrap_or(DEFAULT_DISC_POINTS),
                );
            }
            Command::Coherent { alpha, modes, c } => {
                cfg.alpha = Some(
                    alpha
                        .clone()
                        .or(file.alpha.clone())
                        .unwrap_or_else(|| "1,0".into()),
                );
                cfg.modes = modes.clone().or(file.modes.clone());
                cfg.c = Some(c.or(file.c).unwrap_or(1.0));
            }
        }
        Ok(cfg)
    }

    fn set_start(&mut self, start: &StartArgs, file: &FileConfig, default_chart: ChartArg) {
        self.chart = Some(start.chart.or(file.chart).unwrap_or(default_chart));
        self.q0 = Some(start.q0.or(file.q0).unwrap_or(1.0));
        self.mom0 = Some(start.mom0.or(file.mom0).unwrap_or(1.0));
    }
}
