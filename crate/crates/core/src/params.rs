use serde::Serialize;

use crate::error::{Error, Result};

/// Physical constants of a single oscillator together with the deformation
/// strength `beta` (units of inverse momentum squared).
///
/// `beta = 0` is the undeformed oscillator and is supported everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    hbar: f64,
    mass: f64,
    omega: f64,
    beta: f64,
}

impl Default for OscillatorParams {
    /// Natural units, undeformed.
    fn default() -> Self {
        OscillatorParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            beta: 0.0,
        }
    }
}

impl OscillatorParams {
    pub fn new(hbar: f64, mass: f64, omega: f64, beta: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(
                    "params",
                    format!("{name} must be finite and > 0, got {v}"),
                ))
            }
        };
        positive("hbar", hbar)?;
        positive("mass", mass)?;
        positive("omega", omega)?;
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::invalid(
                "params",
                format!("beta must be finite and >= 0, got {beta}"),
            ));
        }
        Ok(OscillatorParams {
            hbar,
            mass,
            omega,
            beta,
        })
    }

    /// Natural units (ħ = m = ω = 1) with the given deformation.
    pub fn natural(beta: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, beta)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.omega, beta)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sqrt_beta(&self) -> f64 {
        self.beta.sqrt()
    }

    pub fn is_deformed(&self) -> bool {
        self.beta > 0.0
    }

    /// Classical period 2π/ω.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    /// Oscillator length scale √(ħ/mω).
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Oscillator momentum scale √(mħω).
    pub fn momentum_scale(&self) -> f64 {
        (self.mass * self.hbar * self.omega).sqrt()
    }

    /// H = ½mω²q² + P²/2m, evaluated with the canonical momentum.
    pub fn energy(&self, q: f64, big_p: f64) -> f64 {
        0.5 * self.mass * self.omega * self.omega * q * q + big_p * big_p / (2.0 * self.mass)
    }
}
