//! Truncated Fock-space matrices for `a`, `a†`, `N`, `q`, `P`, `p` and `H`,
//! plus the measurements built on them: spectra, the ground-state
//! wavefunction, and the deformed uncertainty bound.
//!
//! Truncation to `dim` levels corrupts the last rows and columns of every
//! product. Identities are therefore asserted on leading blocks, with the
//! block size documented per identity:
//!
//! | identity                | block       |
//! |-------------------------|-------------|
//! | `[a, a†] = 1`           | `dim − 1`   |
//! | `[N, a] = −a`, `[N, a†] = a†` | full  |
//! | `[q, P] = iħ`           | `dim − 1`   |
//! | `[q, p] = iħ(1 + βp²)`  | `dim − 4`   |
//! | spectrum of quadratic H | `dim / 2`   |

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{ExactOperator, Surd};
use crate::momentum_map::DEFAULT_DOMAIN_GUARD;
use crate::operator::{frobenius, identity, max_abs, DenseOperator, FockState};
use crate::params::OscillatorParams;

pub const DEFAULT_ALGEBRA_DIM: usize = 16;
pub const DEFAULT_SPECTRUM_DIM: usize = 64;
pub const DEFAULT_UNCERTAINTY_DIM: usize = 32;

/// Slack allowed on `Δq·Δp ≥ ½ħ(1 + βΔp²)`.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

/// Rows/columns dropped from the `[q, p]` comparison.
pub const DEFORMED_COMMUTATOR_MARGIN: usize = 4;

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::invalid(
            "fock_algebra",
            format!("dim must be >= 2, got {dim}"),
        ));
    }
    Ok(())
}

/// Annihilation and creation operators: `a|n⟩ = √n|n−1⟩`,
/// `a†|n⟩ = √(n+1)|n+1⟩` for `n < dim − 1`, `a†|dim−1⟩ = 0`.
/// `a†` is the exact conjugate transpose of `a`.
pub fn build_ladder(dim: usize) -> Result<(DenseOperator, DenseOperator)> {
    check_dim(dim)?;
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let a = DenseOperator::new("a", m)?;
    let a_dag = a.adjoint().relabel("a†");
    Ok((a, a_dag))
}

/// `N = diag(0, 1, …, dim−1)`, built directly so the entries are exact
/// integers.
pub fn number_operator(dim: usize) -> Result<DenseOperator> {
    check_dim(dim)?;
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(if r == c { r as f64 } else { 0.0 }, 0.0)
    });
    DenseOperator::hermitian("N", m)
}

/// Exact counterparts of `a`, `a†` and `N`.
pub fn exact_ladder(dim: usize) -> Result<(ExactOperator, ExactOperator, ExactOperator)> {
    check_dim(dim)?;
    let mut a = ExactOperator::zeros(dim);
    let mut n = ExactOperator::zeros(dim);
    for k in 1..dim {
        a.set(k - 1, k, Surd::sqrt(k as u64));
        n.set(k, k, Surd::integer(k as i64));
    }
    let a_dag = a.adjoint();
    Ok((a, a_dag, n))
}

/// `q = √(ħ/2mω)(a + a†)` and `P = i√(mħω/2)(a† − a)`.
pub fn build_q_and_canonical_momentum(
    params: &OscillatorParams,
    dim: usize,
) -> Result<(DenseOperator, DenseOperator)> {
    let (a, a_dag) = build_ladder(dim)?;
    let qs = (params.hbar() / (2.0 * params.mass() * params.omega())).sqrt();
    let ps = (params.mass() * params.hbar() * params.omega() / 2.0).sqrt();
    let q = (a.matrix() + a_dag.matrix()).scale(qs);
    let big_p = (a_dag.matrix() - a.matrix()) * Complex64::new(0.0, ps);
    Ok((
        DenseOperator::hermitian("q", q)?,
        DenseOperator::hermitian("P", big_p)?,
    ))
}

/// The physical momentum `p = tan(√β P)/√β`, by functional calculus on the
/// Hermitian matrix `P`.
pub fn build_p_operator(params: &OscillatorParams, dim: usize) -> Result<DenseOperator> {
    build_p_operator_with_guard(params, dim, DEFAULT_DOMAIN_GUARD)
}

pub fn build_p_operator_with_guard(
    params: &OscillatorParams,
    dim: usize,
    guard: f64,
) -> Result<DenseOperator> {
    let (_, big_p) = build_q_and_canonical_momentum(params, dim)?;
    p_from_canonical(&big_p, params, guard)
}

/// `p` from an already built `P`.
pub fn p_from_canonical(
    big_p: &DenseOperator,
    params: &OscillatorParams,
    guard: f64,
) -> Result<DenseOperator> {
    if !params.is_deformed() {
        return Ok(big_p.clone().relabel("p"));
    }
    let sb = params.sqrt_beta();
    let limit = std::f64::consts::FRAC_PI_2 * (1.0 - guard);
    let eig = big_p.eigen()?;
    if let Some(&worst) = eig
        .values
        .iter()
        .max_by(|x, y| x.abs().total_cmp(&y.abs()))
        .filter(|v| v.abs() * sb > limit)
    {
        return Err(Error::DomainExceeded {
            module: "fock_algebra",
            value: worst,
            limit: limit / sb,
            message: format!(
                "eigenvalue {worst:.6} of P gives |λ|·√β = {:.6} > (π/2)(1−{guard}) = {limit:.6}; \
                 at dim {} and β = {} the truncated P leaves the range of the momentum map",
                worst.abs() * sb,
                big_p.dim(),
                params.beta()
            ),
        });
    }
    big_p.map_hermitian("p", |lambda| (sb * lambda).tan() / sb)
}

/// The β that puts the largest eigenvalue of `P` at `√β·max|λ| = target`.
pub fn beta_for_spectral_radius(params: &OscillatorParams, dim: usize, target: f64) -> Result<f64> {
    let (_, big_p) = build_q_and_canonical_momentum(params, dim)?;
    let r = big_p.eigen()?.max_abs();
    Ok((target / r).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// `ħω(a†a + ½)`, exactly diagonal.
    Ladder,
    /// `½mω²q² + P²/2m` from the truncated `q`, `P` matrices.
    Quadratic,
}

pub fn build_hamiltonian(
    params: &OscillatorParams,
    dim: usize,
    form: HamiltonianForm,
) -> Result<DenseOperator> {
    check_dim(dim)?;
    match form {
        HamiltonianForm::Ladder => {
            let hw = params.hbar() * params.omega();
            let m = DMatrix::from_fn(dim, dim, |r, c| {
                Complex64::new(if r == c { hw * (r as f64 + 0.5) } else { 0.0 }, 0.0)
            });
            DenseOperator::hermitian("H_ladder", m)
        }
        HamiltonianForm::Quadratic => {
            let (q, big_p) = build_q_and_canonical_momentum(params, dim)?;
            let k = 0.5 * params.mass() * params.omega() * params.omega();
            let q2 = q.matrix() * q.matrix();
            let p2 = big_p.matrix() * big_p.matrix();
            let h = q2.scale(k) + p2.scale(0.5 / params.mass());
            let h = (&h + h.adjoint()).scale(0.5);
            DenseOperator::hermitian("H_quadratic", h)
        }
    }
}

/// Eigenvalues of H, ascending. The ladder form is diagonal, so its
/// eigenvalues are read off the diagonal; the quadratic form goes through
/// the eigensolver.
pub fn spectrum(params: &OscillatorParams, dim: usize, form: HamiltonianForm) -> Result<Vec<f64>> {
    let h = build_hamiltonian(params, dim, form)?;
    match form {
        HamiltonianForm::Ladder => Ok((0..dim).map(|n| h.entry(n, n).re).collect()),
        HamiltonianForm::Quadratic => h.eigenvalues(),
    }
}

/// `E_n = ħω(n + ½)`.
pub fn analytic_level(params: &OscillatorParams, n: usize) -> f64 {
    params.hbar() * params.omega() * (n as f64 + 0.5)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("fock_algebra", "position grid is empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(
            "fock_algebra",
            "position grid has non-finite points",
        ));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "fock_algebra",
            "position grid is not sorted",
        ));
    }
    Ok(())
}

/// `ψ₀(q) = (mω/πħ)^{1/4} exp(−mωq²/2ħ)` sampled on `grid`.
pub fn ground_state_wavefunction(params: &OscillatorParams, grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(grid)?;
    let s = params.mass() * params.omega() / params.hbar();
    let pref = (s / std::f64::consts::PI).powf(0.25);
    Ok(grid
        .iter()
        .map(|&q| pref * (-0.5 * s * q * q).exp())
        .collect())
}

/// Uniform grid of `points` samples over `±half_width_in_lengths·√(ħ/mω)`.
pub fn symmetric_grid(
    params: &OscillatorParams,
    half_width_in_lengths: f64,
    points: usize,
) -> Vec<f64> {
    let half = half_width_in_lengths * params.length_scale();
    if points < 2 {
        return vec![0.0; points];
    }
    let step = 2.0 * half / (points - 1) as f64;
    (0..points)
        .map(|i| {
            // mirror the upper half so the grid is symmetric bit-for-bit
            let j = i.min(points - 1 - i);
            let x = -half + j as f64 * step;
            if i > (points - 1) / 2 {
                -x
            } else {
                x
            }
        })
        .collect()
}

/// Trapezoid-rule `∫|ψ|² dq`.
pub fn trapezoid_norm(grid: &[f64], psi: &[f64]) -> Result<f64> {
    check_grid(grid)?;
    if grid.len() != psi.len() {
        return Err(Error::invalid(
            "fock_algebra",
            "grid and samples differ in length",
        ));
    }
    Ok(grid
        .windows(2)
        .zip(psi.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] * y[0] + y[1] * y[1]))
        .sum())
}

/// `(q + iP/mω)ψ` with `P = −iħ∂_q`, i.e. `qψ + (ħ/mω)ψ'`, evaluated with
/// central differences at interior grid points of a uniform grid.
pub fn annihilation_residual(
    params: &OscillatorParams,
    grid: &[f64],
    psi: &[f64],
) -> Result<Vec<f64>> {
    check_grid(grid)?;
    if grid.len() != psi.len() || grid.len() < 3 {
        return Err(Error::invalid(
            "fock_algebra",
            "annihilation residual needs >= 3 samples matching the grid",
        ));
    }
    let l2 = params.hbar() / (params.mass() * params.omega());
    Ok((1..grid.len() - 1)
        .map(|i| {
            let d = (psi[i + 1] - psi[i - 1]) / (grid[i + 1] - grid[i - 1]);
            grid[i] * psi[i] + l2 * d
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub dq: f64,
    pub dp: f64,
    /// `½ħ(1 + β·dp²)`.
    pub rhs_bound: f64,
    /// `dq·dp − rhs_bound`.
    pub margin: f64,
    pub satisfied: bool,
}

/// `q` and `p` at a fixed `dim`, reusable across many states.
#[derive(Debug, Clone)]
pub struct UncertaintyProbe {
    params: OscillatorParams,
    q: DenseOperator,
    p: DenseOperator,
}

impl UncertaintyProbe {
    pub fn new(params: &OscillatorParams, dim: usize) -> Result<Self> {
        let (q, big_p) = build_q_and_canonical_momentum(params, dim)?;
        let p = p_from_canonical(&big_p, params, DEFAULT_DOMAIN_GUARD)?;
        Ok(UncertaintyProbe {
            params: *params,
            q,
            p,
        })
    }

    pub fn check(&self, state: &FockState) -> Result<UncertaintyReport> {
        if !state.is_normalized() {
            return Err(Error::invalid(
                "fock_algebra",
                "uncertainty check needs a normalized state",
            ));
        }
        let dq = std_dev(&self.q, state)?;
        let dp = std_dev(&self.p, state)?;
        let rhs_bound = 0.5 * self.params.hbar() * (1.0 + self.params.beta() * dp * dp);
        let margin = dq * dp - rhs_bound;
        Ok(UncertaintyReport {
            dq,
            dp,
            rhs_bound,
            margin,
            satisfied: margin >= -UNCERTAINTY_SLACK,
        })
    }
}

fn std_dev(op: &DenseOperator, state: &FockState) -> Result<f64> {
    let v = op.apply(state)?;
    let mean = state.amplitudes().dotc(&v).re;
    let second = v.norm_squared();
    Ok((second - mean * mean).max(0.0).sqrt())
}

/// `Δq`, `Δp` in `state` and the deformed bound `½ħ(1 + β(Δp)²)`.
pub fn uncertainty_check(
    state: &FockState,
    params: &OscillatorParams,
) -> Result<UncertaintyReport> {
    UncertaintyProbe::new(params, state.dim())?.check(state)
}

/// One row of [`algebra_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    /// Size of the leading block the identity is asserted on.
    pub block: usize,
    /// `"exact"` (symbolic equality, residual 0 or 1), `"max_abs"` or
    /// `"rel_frobenius"`.
    pub metric: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(
        identity: &'static str,
        block: usize,
        metric: &'static str,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        IdentityCheck {
            identity,
            block,
            metric,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    fn exact(identity: &'static str, block: usize, holds: bool) -> Self {
        Self::new(identity, block, "exact", if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

/// `[a, a†]` on the leading `dim − 1` block is exactly the identity and the
/// corner entry is exactly `−(dim − 1)`.
pub fn exact_ladder_commutator_holds(dim: usize) -> Result<(bool, bool)> {
    let (a, a_dag, _) = exact_ladder(dim)?;
    let c = a.commutator(&a_dag)?;
    let block_ok = c.leading_block(dim - 1) == ExactOperator::identity(dim - 1);
    let corner_ok = c.get(dim - 1, dim - 1) == Surd::integer(-(dim as i64 - 1));
    Ok((block_ok, corner_ok))
}

/// `[N, a] = −a`, `[N, a†] = a†` and `N = a†a`, exactly, at full dim.
pub fn exact_number_identities_hold(dim: usize) -> Result<(bool, bool, bool)> {
    let (a, a_dag, n) = exact_ladder(dim)?;
    Ok((
        n.commutator(&a)? == a.scale(-1),
        n.commutator(&a_dag)? == a_dag,
        a_dag.mul(&a)? == n,
    ))
}

/// `[q, p]` and `iħ(1 + βp²)` on the leading `dim − 4` block, as relative
/// Frobenius distance.
pub fn deformed_commutator_residual(params: &OscillatorParams, dim: usize) -> Result<f64> {
    let (q, big_p) = build_q_and_canonical_momentum(params, dim)?;
    let p = p_from_canonical(&big_p, params, DEFAULT_DOMAIN_GUARD)?;
    let k = dim.saturating_sub(DEFORMED_COMMUTATOR_MARGIN).max(1);
    let lhs = q.commutator(&p).leading_block(k);
    let p2 = p.matrix() * p.matrix();
    let rhs_full = (identity(dim) + p2.scale(params.beta())) * Complex64::new(0.0, params.hbar());
    let rhs = rhs_full.view((0, 0), (k, k)).into_owned();
    Ok(frobenius(&(lhs - &rhs)) / frobenius(&rhs))
}

/// Every algebraic identity of the truncated oscillator at `dim`, with the
/// block and tolerance it is asserted at.
pub fn algebra_report(params: &OscillatorParams, dim: usize) -> Result<Vec<IdentityCheck>> {
    check_dim(dim)?;
    let mut rows = Vec::new();

    let (block_ok, corner_ok) = exact_ladder_commutator_holds(dim)?;
    rows.push(IdentityCheck::exact("[a,a†]=1 (exact)", dim - 1, block_ok));
    rows.push(IdentityCheck::exact(
        "[a,a†] corner=-(dim-1) (exact)",
        1,
        corner_ok,
    ));
    let (na, nad, n_eq) = exact_number_identities_hold(dim)?;
    rows.push(IdentityCheck::exact("[N,a]=-a (exact)", dim, na));
    rows.push(IdentityCheck::exact("[N,a†]=a† (exact)", dim, nad));
    rows.push(IdentityCheck::exact("N=a†a (exact)", dim, n_eq));

    let (a, a_dag) = build_ladder(dim)?;
    let n = number_operator(dim)?;
    let ulp_tol = 8.0 * f64::EPSILON * dim as f64;
    let c = a.commutator(&a_dag).leading_block(dim - 1);
    rows.push(IdentityCheck::new(
        "[a,a†]=1 (f64)",
        dim - 1,
        "max_abs",
        max_abs(&(c - identity(dim - 1))),
        ulp_tol,
    ));
    let c = n.commutator(&a);
    rows.push(IdentityCheck::new(
        "[N,a]=-a (f64)",
        dim,
        "max_abs",
        max_abs(&(c.matrix() + a.matrix())),
        ulp_tol,
    ));
    let c = n.commutator(&a_dag);
    rows.push(IdentityCheck::new(
        "[N,a†]=a† (f64)",
        dim,
        "max_abs",
        max_abs(&(c.matrix() - a_dag.matrix())),
        ulp_tol,
    ));

    let (q, big_p) = build_q_and_canonical_momentum(params, dim)?;
    let c = q.commutator(&big_p).leading_block(dim - 1);
    let target = identity(dim - 1) * Complex64::new(0.0, params.hbar());
    rows.push(IdentityCheck::new(
        "[q,P]=iħ",
        dim - 1,
        "max_abs",
        max_abs(&(c - target)) / params.hbar(),
        1e-12,
    ));

    let herm = [
        ("q", q.hermiticity_defect()),
        ("P", big_p.hermiticity_defect()),
    ];
    for (name, d) in herm {
        rows.push(IdentityCheck::new(
            if name == "q" {
                "q Hermitian"
            } else {
                "P Hermitian"
            },
            dim,
            "max_abs",
            d,
            1e-10,
        ));
    }

    if dim > DEFORMED_COMMUTATOR_MARGIN {
        rows.push(IdentityCheck::new(
            "[q,p]=iħ(1+βp²)",
            dim - DEFORMED_COMMUTATOR_MARGIN,
            "rel_frobenius",
            deformed_commutator_residual(params, dim)?,
            5e-3,
        ));
    }
    Ok(rows)
}
