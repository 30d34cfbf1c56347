//! The generalized momentum `P = arctan(√β p)/√β` and its inverse, both as
//! scalar maps and as exact power series in `p`.
//!
//! `P` is canonically conjugate to `q` even though `[q, p] = iħ(1 + βp²)`.
//! For β > 0 the map squeezes the whole real line of `p` into the open
//! interval `|P| < π/(2√β)`, so the inverse only exists inside that range.

use std::f64::consts::FRAC_PI_2;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::params::OscillatorParams;
use crate::series::{rational_from_f64, PowerSeries};

/// Fraction of the compact range `π/(2√β)` kept as a safety margin when
/// inverting the map.
pub const DEFAULT_DOMAIN_GUARD: f64 = 0.05;

/// `P(p)`. Exactly `p` when β = 0, exactly odd in `p` otherwise.
pub fn momentum_forward(p: f64, params: &OscillatorParams) -> f64 {
    if !params.is_deformed() {
        return p;
    }
    let sb = params.sqrt_beta();
    let mag = (sb * p.abs()).atan() / sb;
    mag.copysign(p)
}

/// Largest `|P|` accepted by [`momentum_inverse_with_guard`]: `(π/2)(1−ε)/√β`.
/// `None` when β = 0 (no limit).
pub fn momentum_limit(params: &OscillatorParams, guard: f64) -> Option<f64> {
    params
        .is_deformed()
        .then(|| FRAC_PI_2 * (1.0 - guard) / params.sqrt_beta())
}

/// `p(P) = tan(√β P)/√β` with the default guard.
pub fn momentum_inverse(big_p: f64, params: &OscillatorParams) -> Result<f64> {
    momentum_inverse_with_guard(big_p, params, DEFAULT_DOMAIN_GUARD)
}

pub fn momentum_inverse_with_guard(
    big_p: f64,
    params: &OscillatorParams,
    guard: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&guard) {
        return Err(Error::invalid(
            "momentum_map",
            format!("domain guard must lie in [0, 1), got {guard}"),
        ));
    }
    if !params.is_deformed() {
        return Ok(big_p);
    }
    let sb = params.sqrt_beta();
    let scaled = big_p.abs() * sb;
    let limit = FRAC_PI_2 * (1.0 - guard);
    if scaled.is_nan() || scaled >= limit {
        return Err(Error::DomainExceeded {
            module: "momentum_map",
            value: big_p,
            limit: limit / sb,
            message: format!(
                "|P|·√β = {scaled:.6} is not below (π/2)(1−{guard}) = {limit:.6}; \
                 P = {big_p} lies outside the range of the momentum map"
            ),
        });
    }
    Ok((scaled.tan() / sb).copysign(big_p))
}

/// Exact series of `P` in powers of `p` through `p^max_order`:
/// the coefficient of `p^(2r+1)` is `(−β)^r/(2r+1)`.
///
/// β enters as the exact rational value of its double representation.
pub fn series_momentum(params: &OscillatorParams, max_order: usize) -> Result<PowerSeries> {
    if max_order < 1 || max_order.is_multiple_of(2) {
        return Err(Error::invalid(
            "momentum_map",
            format!("series order for P must be odd and >= 1, got {max_order}"),
        ));
    }
    let minus_beta = -rational_from_f64(params.beta())?;
    let mut coefficients = vec![BigRational::zero(); max_order + 1];
    let mut power = BigRational::one();
    for r in 0..=(max_order - 1) / 2 {
        coefficients[2 * r + 1] = &power / BigRational::from_integer((2 * r + 1).into());
        power *= &minus_beta;
    }
    PowerSeries::new(coefficients, max_order)
}

/// Exact series of `P²` through `p^max_order`, by squaring
/// [`series_momentum`] in rational arithmetic.
pub fn series_momentum_squared(params: &OscillatorParams, max_order: usize) -> Result<PowerSeries> {
    if max_order < 2 || max_order % 2 == 1 {
        return Err(Error::invalid(
            "momentum_map",
            format!("series order for P² must be even and >= 2, got {max_order}"),
        ));
    }
    let p = series_momentum(params, max_order - 1)?;
    // p has order max_order-1; lift it so the product keeps the p^max_order term.
    let p = PowerSeries::new(p.coefficients().to_vec(), max_order)?;
    Ok(p.mul_truncated(&p))
}
