//! Harmonic oscillators under the deformed commutator
//! `[q, p] = iħ(1 + βp²)`.
//!
//! The deformation is absorbed by the generalized momentum
//! `P = arctan(√β p)/√β`, which satisfies `[q, P] = iħ`. Everything built
//! from `q` and `P` (ladder operators, the Hamiltonian, its spectrum,
//! Hamilton's equations, coherent states) keeps its undeformed form; `β`
//! only reappears when results are expressed through `p`.
//!
//! Modules:
//!
//! - [`momentum_map`]: `P(p)`, its inverse and exact power series.
//! - [`fock_algebra`]: truncated matrices for `a`, `a†`, `N`, `q`, `P`,
//!   `p`, `H`; spectra, ground state, uncertainty bound.
//! - [`dynamics`]: equations of motion in the `(q, p)` and `(q, P)` charts.
//! - [`liouville`]: tangent-map determinants and ensemble areas.
//! - [`optics`]: mode energies and coherent-state statistics.
//!
//! ```
//! use gup_oscillator::{momentum_map, OscillatorParams};
//!
//! let params = OscillatorParams::natural(1.0)?;
//! let big_p = momentum_map::momentum_forward(1.0, &params);
//! assert!((big_p - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
//! # Ok::<(), gup_oscillator::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fock_algebra;
pub mod liouville;
pub mod momentum_map;
pub mod operator;
pub mod optics;
pub mod params;
pub mod series;

pub use dynamics::{Chart, Method, PhasePoint, Trajectory};
pub use error::{Error, Result};
pub use fock_algebra::HamiltonianForm;
pub use operator::{DenseOperator, FockState};
pub use optics::{CoherentSpec, ModeSpec};
pub use params::OscillatorParams;
pub use series::PowerSeries;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
