//! Exact arithmetic for the ladder-operator algebra.
//!
//! Matrix elements of `a`, `a†` and `N` are integer multiples of square
//! roots of integers. In floating point `√n·√n` is usually not `n`, so the
//! identities `[a, a†] = 1` and `[N, a] = −a` can only be checked to a few
//! ulps there. Here every entry is kept as `Σ c_r √r` with rational `c_r`
//! and square-free `r`, and the identities hold with true equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Σ c_r √r` over square-free radicands `r`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

/// Splits `n = s²·r` with `r` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut f = 2u64;
    while f * f <= n {
        while n.is_multiple_of(f * f) {
            n /= f * f;
            outside *= f;
        }
        f += 1;
    }
    (outside, n)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn integer(n: i64) -> Self {
        Self::from_term(BigRational::from_integer(n.into()), 1)
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Self {
        Self::from_term(BigRational::from_integer(1.into()), n)
    }

    fn from_term(coeff: BigRational, radicand: u64) -> Self {
        let mut s = Surd::zero();
        s.push(coeff, radicand);
        s
    }

    fn push(&mut self, coeff: BigRational, radicand: u64) {
        if radicand == 0 || coeff.is_zero() {
            return;
        }
        let (outside, r) = square_free_split(radicand);
        let coeff = coeff * BigRational::from_integer(outside.into());
        let slot = self.terms.entry(r).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| c.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.push(c.clone(), *r);
        }
        out
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(r, c)| (*r, -c)).collect(),
        }
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (ra, ca) in &self.terms {
            for (rb, cb) in &rhs.terms {
                out.push(ca * cb, ra * rb);
            }
        }
        out
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match r {
                1 => write!(f, "{c}")?,
                _ => write!(f, "{c}√{r}")?,
            }
        }
        Ok(())
    }
}

/// Sparse square matrix with [`Surd`] entries. Zero entries are never
/// stored, so `==` is exact matrix equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Surd>,
}

impl ExactOperator {
    pub fn zeros(dim: usize) -> Self {
        ExactOperator {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Surd::integer(1));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, row: usize, col: usize, value: Surd) {
        assert!(row < self.dim && col < self.dim, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Surd {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// Entries are real, so the adjoint is the transpose.
    pub fn adjoint(&self) -> Self {
        ExactOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    fn check_dim(&self, other: &ExactOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::invalid(
                "fock_algebra",
                format!("exact operators of dims {} and {}", self.dim, other.dim),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactOperator) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            let sum = &out.get(r, c) + v;
            out.set(r, c, sum);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Surd::integer(k);
        let mut out = Self::zeros(self.dim);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v * &k);
        }
        out
    }

    pub fn sub(&self, other: &ExactOperator) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &ExactOperator) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zeros(self.dim);
        for (&(i, k), x) in &self.entries {
            for (&(_, j), y) in other.entries.range((k, 0)..(k + 1, 0)) {
                let sum = &out.get(i, j) + &(x * y);
                out.set(i, j, sum);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &ExactOperator) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        ExactOperator {
            dim: k,
            entries: self
                .entries
                .iter()
                .filter(|(&(r, c), _)| r < k && c < k)
                .map(|(&rc, v)| (rc, v.clone()))
                .collect(),
        }
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Surd)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }
}
