//! Photon modes and single-mode coherent states.
//!
//! Each mode `(k, λ)` is an oscillator of frequency `ck`, so the field
//! Hamiltonian is `Σ ħck(N + ½)`. Coherent states, photon statistics and
//! quadrature variances are computed in a truncated Fock space whose size
//! is chosen so that the neglected Poisson tail is negligible.

use std::collections::BTreeSet;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock_algebra::{build_ladder, number_operator};
use crate::operator::{DenseOperator, FockState};

/// One field mode: wavenumber, polarization index (1 or 2) and occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpec {
    pub k: f64,
    #[serde(rename = "lambda")]
    pub polarization: u8,
    #[serde(rename = "n")]
    pub occupancy: u64,
}

impl ModeSpec {
    pub fn new(k: f64, polarization: u8, occupancy: u64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::invalid(
                "optics",
                format!("wavenumber must be > 0, got {k}"),
            ));
        }
        if !(polarization == 1 || polarization == 2) {
            return Err(Error::invalid(
                "optics",
                format!("polarization index must be 1 or 2, got {polarization}"),
            ));
        }
        Ok(ModeSpec {
            k,
            polarization,
            occupancy,
        })
    }

    /// `ħck(n + ½)`.
    pub fn energy(&self, hbar: f64, c: f64) -> f64 {
        hbar * c * self.k * (self.occupancy as f64 + 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeContribution {
    #[serde(flatten)]
    pub mode: ModeSpec,
    pub energy_contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeEnergyReport {
    pub modes: Vec<ModeContribution>,
    pub total: f64,
}

/// Per-mode breakdown of `Σ ħck(n_{k,λ} + ½)`. Modes must be distinct in
/// `(k, λ)`.
pub fn mode_energy_report(modes: &[ModeSpec], hbar: f64, c: f64) -> Result<ModeEnergyReport> {
    if !(hbar.is_finite() && hbar > 0.0 && c.is_finite() && c > 0.0) {
        return Err(Error::invalid(
            "optics",
            "hbar and c must be finite and > 0",
        ));
    }
    let mut seen = BTreeSet::new();
    for m in modes {
        ModeSpec::new(m.k, m.polarization, m.occupancy)?;
        if !seen.insert((m.k.to_bits(), m.polarization)) {
            return Err(Error::invalid(
                "optics",
                format!("duplicate mode (k = {}, λ = {})", m.k, m.polarization),
            ));
        }
    }
    let modes: Vec<ModeContribution> = modes
        .iter()
        .map(|&mode| ModeContribution {
            mode,
            energy_contribution: mode.energy(hbar, c),
        })
        .collect();
    let total = modes.iter().map(|m| m.energy_contribution).sum();
    Ok(ModeEnergyReport { modes, total })
}

pub fn mode_energy(modes: &[ModeSpec], hbar: f64, c: f64) -> Result<f64> {
    Ok(mode_energy_report(modes, hbar, c)?.total)
}

/// A coherent amplitude and the truncation used to represent it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    pub alpha: Complex64,
    pub dim: usize,
}

impl CoherentSpec {
    pub fn new(alpha: Complex64, dim: usize) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::invalid(
                "optics",
                "coherent amplitude must be finite",
            ));
        }
        let need = min_dim(alpha);
        if dim < need {
            return Err(Error::invalid(
                "optics",
                format!(
                    "dim {dim} too small for |α| = {}: tail rule needs dim >= {need}",
                    alpha.norm()
                ),
            ));
        }
        Ok(CoherentSpec { alpha, dim })
    }

    /// Smallest admissible truncation for `alpha`.
    pub fn minimal(alpha: Complex64) -> Result<Self> {
        Self::new(alpha, min_dim(alpha))
    }
}

/// `ceil(|α|² + 8|α| + 16)`.
pub fn min_dim(alpha: Complex64) -> usize {
    let r = alpha.norm();
    (r * r + 8.0 * r + 16.0).ceil() as usize
}

/// `e^{−|α|²/2} α^n/√(n!)` for `n < dim`, built from the running ratio
/// `c_n = c_{n−1}·α/√n`. Not renormalized: the truncated tail is simply
/// dropped.
pub fn coherent_state(spec: &CoherentSpec) -> Result<FockState> {
    let spec = CoherentSpec::new(spec.alpha, spec.dim)?;
    let mut amps = Vec::with_capacity(spec.dim);
    let mut c = Complex64::new((-0.5 * spec.alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..spec.dim {
        c = c * spec.alpha / (n as f64).sqrt();
        amps.push(c);
    }
    FockState::new(DVector::from_vec(amps))
}

/// `⟨α|β⟩ = exp(−½(|α|² + |β|² − 2α*β))`.
pub fn coherent_overlap(alpha: Complex64, beta_amp: Complex64) -> Complex64 {
    (-0.5 * (alpha.norm_sqr() + beta_amp.norm_sqr() - 2.0 * alpha.conj() * beta_amp)).exp()
}

/// Poisson weights `e^{−|α|²}|α|^{2n}/n!`, `n < count`, via the running
/// ratio `P(n) = P(n−1)·|α|²/n`.
pub fn poisson_probabilities(alpha: Complex64, count: usize) -> Vec<f64> {
    let mean = alpha.norm_sqr();
    let mut out = Vec::with_capacity(count);
    let mut p = (-mean).exp();
    for n in 0..count {
        if n > 0 {
            p *= mean / n as f64;
        }
        out.push(p);
    }
    out
}

/// Mean and variance of `N` in `state`.
pub fn number_statistics(state: &FockState) -> Result<(f64, f64)> {
    let n = number_operator(state.dim())?;
    let mean = n.expectation(state)?.re;
    let second = n.product(&n).expectation(state)?.re;
    Ok((mean, second - mean * mean))
}

/// `x_λ = (a e^{−iλ} + a† e^{iλ})/√2`.
pub fn quadrature_operator(dim: usize, lambda_phase: f64) -> Result<DenseOperator> {
    let (a, a_dag) = build_ladder(dim)?;
    let ph = Complex64::from_polar(1.0, -lambda_phase);
    let m = (a.matrix() * ph + a_dag.matrix() * ph.conj()).unscale(std::f64::consts::SQRT_2);
    DenseOperator::hermitian(format!("x_{lambda_phase}"), m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureStats {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

/// `⟨x_λ⟩`, `⟨x_λ²⟩` and the variance in `|α⟩`, from the matrices.
pub fn quadrature_stats(spec: &CoherentSpec, lambda_phase: f64) -> Result<QuadratureStats> {
    let state = coherent_state(spec)?;
    let x = quadrature_operator(spec.dim, lambda_phase)?;
    let v = x.apply(&state)?;
    let mean = state.amplitudes().dotc(&v).re;
    let second_moment = v.norm_squared();
    Ok(QuadratureStats {
        mean,
        second_moment,
        variance: second_moment - mean * mean,
    })
}

/// `½(α²e^{−2iλ} + α*²e^{2iλ} + 2|α|² + 1)`.
pub fn quadrature_second_moment_closed_form(alpha: Complex64, lambda_phase: f64) -> f64 {
    let ph = Complex64::from_polar(1.0, -2.0 * lambda_phase);
    let z = alpha * alpha * ph + (alpha.conj() * alpha.conj()) * ph.conj();
    0.5 * (z.re + 2.0 * alpha.norm_sqr() + 1.0)
}

/// `√2·Re(α e^{−iλ})`.
pub fn quadrature_mean_closed_form(alpha: Complex64, lambda_phase: f64) -> f64 {
    std::f64::consts::SQRT_2 * (alpha * Complex64::from_polar(1.0, -lambda_phase)).re
}
