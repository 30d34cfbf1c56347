//! Truncated univariate power series with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A power series `Σ c_k x^k` truncated after `x^max_order`.
///
/// `coefficients[k]` is the coefficient of `x^k`; the vector always has
/// length `max_order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coefficients: Vec<BigRational>,
    max_order: usize,
}

impl PowerSeries {
    /// Builds a series from the given coefficients. Missing coefficients up
    /// to `max_order` are zero; coefficients beyond it are dropped.
    pub fn new(mut coefficients: Vec<BigRational>, max_order: usize) -> Result<Self> {
        if max_order < 1 {
            return Err(Error::invalid("series", "max_order must be >= 1"));
        }
        coefficients.resize(max_order + 1, BigRational::zero());
        Ok(PowerSeries {
            coefficients,
            max_order,
        })
    }

    pub fn zero(max_order: usize) -> Result<Self> {
        Self::new(Vec::new(), max_order)
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Coefficient of `x^power`; zero past the truncation order.
    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coefficients
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `(power, coefficient)` pairs for the non-zero coefficients, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }

    /// Re-truncates at a lower (or equal) order.
    pub fn truncate(&self, max_order: usize) -> Result<Self> {
        let keep = self.coefficients[..=max_order.min(self.max_order)].to_vec();
        Self::new(keep, max_order)
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul_truncated(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.max_order.min(other.max_order);
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries {
            coefficients: out,
            max_order: order,
        }
    }

    /// Evaluates the truncated polynomial at `x` in floating point (Horner).
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.max_order.min(rhs.max_order);
        let coefficients = (0..=order)
            .map(|k| &self.coefficients[k] + &rhs.coefficients[k])
            .collect();
        PowerSeries {
            coefficients,
            max_order: order,
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.mul_truncated(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
            max_order: self.max_order,
        }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}·x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}·x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.max_order + 1)
    }
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::invalid("series", format!("cannot represent {x} as a rational")))
}

/// Nearest double to a rational. Goes through a scaled integer division so
/// numerators and denominators far outside the f64 range still convert.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.denom().bits() as i64 - r.numer().bits() as i64 + 64;
    let scaled: BigInt = if shift >= 0 {
        (r.numer() << shift as u64) / r.denom()
    } else {
        r.numer() / (r.denom() << (-shift) as u64)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}
