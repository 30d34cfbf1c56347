//! Dense complex operators on a truncated Fock basis, state vectors, and
//! functional calculus for Hermitian matrices.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative tolerance of the Hermiticity flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Norm window accepted for a normalized [`FockState`].
pub const NORM_TOL: f64 = 1e-9;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors stored column-wise in the same order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    fn compute(m: &DMatrix<Complex64>) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors =
            DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
        HermitianEigen { values, vectors }
    }

    /// `V diag(f(λ)) V†` for a complex-valued scalar function.
    pub fn reassemble(&self, f: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (c, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A `dim × dim` complex matrix acting on the truncated Fock space.
///
/// Values are immutable after construction. Hermitian operators lazily
/// cache their eigen-decomposition; the cache is shared safely between
/// threads.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    entries: DMatrix<Complex64>,
    label: String,
    hermitian: bool,
    eigen: OnceLock<Arc<HermitianEigen>>,
}

impl DenseOperator {
    /// General (not necessarily Hermitian) operator.
    pub fn new(label: impl Into<String>, entries: DMatrix<Complex64>) -> Result<Self> {
        let label = label.into();
        if entries.nrows() != entries.ncols() {
            return Err(Error::invalid(
                "fock_algebra",
                format!("{label}: operator matrix must be square"),
            ));
        }
        if entries.nrows() < 2 {
            return Err(Error::invalid(
                "fock_algebra",
                format!("{label}: dim must be >= 2, got {}", entries.nrows()),
            ));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid(
                "fock_algebra",
                format!("{label}: operator has non-finite entries"),
            ));
        }
        Ok(DenseOperator {
            entries,
            label,
            hermitian: false,
            eigen: OnceLock::new(),
        })
    }

    /// Hermitian operator. Rejects matrices whose anti-Hermitian part exceeds
    /// [`HERMITIAN_TOL`] relative to the max-norm.
    pub fn hermitian(label: impl Into<String>, entries: DMatrix<Complex64>) -> Result<Self> {
        let mut op = Self::new(label, entries)?;
        let dev = op.hermiticity_defect();
        let scale = max_abs(&op.entries).max(f64::MIN_POSITIVE);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::invalid(
                "fock_algebra",
                format!(
                    "{}: not Hermitian (max |A − A†| = {dev:e}, norm {scale:e})",
                    op.label
                ),
            ));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// max |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            entries: self.entries.adjoint(),
            label: format!("{}†", self.label),
            hermitian: self.hermitian,
            eigen: OnceLock::new(),
        }
    }

    fn derived(label: String, entries: DMatrix<Complex64>) -> DenseOperator {
        DenseOperator {
            entries,
            label,
            hermitian: false,
            eigen: OnceLock::new(),
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &DenseOperator) -> DenseOperator {
        let m = &self.entries * &other.entries - &other.entries * &self.entries;
        Self::derived(format!("[{},{}]", self.label, other.label), m)
    }

    pub fn product(&self, other: &DenseOperator) -> DenseOperator {
        Self::derived(
            format!("{}·{}", self.label, other.label),
            &self.entries * &other.entries,
        )
    }

    /// Eigen-decomposition, computed once and cached.
    pub fn eigen(&self) -> Result<Arc<HermitianEigen>> {
        if !self.hermitian {
            return Err(Error::invalid(
                "fock_algebra",
                format!(
                    "{}: eigen-decomposition requires a Hermitian operator",
                    self.label
                ),
            ));
        }
        Ok(self
            .eigen
            .get_or_init(|| Arc::new(HermitianEigen::compute(&self.entries)))
            .clone())
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigen()?.values.clone())
    }

    /// Applies a real scalar function to a Hermitian operator through its
    /// eigen-decomposition. The result is re-symmetrized so it is exactly
    /// Hermitian.
    pub fn map_hermitian(
        &self,
        label: impl Into<String>,
        f: impl Fn(f64) -> f64,
    ) -> Result<DenseOperator> {
        let m = self.eigen()?.reassemble(|x| Complex64::new(f(x), 0.0));
        let sym = (&m + m.adjoint()).scale(0.5);
        DenseOperator::hermitian(label, sym)
    }

    /// `exp(−i·self·s)` for Hermitian `self`; unitary.
    pub fn unitary_exp(&self, s: f64) -> Result<DenseOperator> {
        let m = self
            .eigen()?
            .reassemble(|x| Complex64::from_polar(1.0, -x * s));
        Ok(Self::derived(format!("exp(-i·{}·{s})", self.label), m))
    }

    pub fn apply(&self, state: &FockState) -> Result<DVector<Complex64>> {
        if state.dim() != self.dim() {
            return Err(Error::invalid(
                "fock_algebra",
                format!(
                    "{}: state dim {} does not match operator dim {}",
                    self.label,
                    state.dim(),
                    self.dim()
                ),
            ));
        }
        Ok(&self.entries * state.amplitudes())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &FockState) -> Result<Complex64> {
        let v = self.apply(state)?;
        Ok(state.amplitudes().dotc(&v))
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> DMatrix<Complex64> {
        let k = k.min(self.dim());
        self.entries.view((0, 0), (k, k)).into_owned()
    }
}

/// max |entry|.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Complex identity of size `dim`.
pub fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

/// A state vector in the truncated Fock basis `|0⟩ … |dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: DVector<Complex64>,
    normalized: bool,
}

impl FockState {
    /// Normalized state; the norm must already lie within [`NORM_TOL`] of 1.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let state = Self::unnormalized(amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(
                "fock_algebra",
                format!("state norm {norm} is not within {NORM_TOL:e} of 1"),
            ));
        }
        Ok(FockState {
            normalized: true,
            ..state
        })
    }

    /// A state flagged as unnormalized; only finiteness and `dim ≥ 2` are
    /// checked.
    pub fn unnormalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::invalid(
                "fock_algebra",
                format!("state dim must be >= 2, got {}", amplitudes.len()),
            ));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid(
                "fock_algebra",
                "state has non-finite amplitudes",
            ));
        }
        Ok(FockState {
            amplitudes,
            normalized: false,
        })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalize(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Degenerate {
                module: "fock_algebra",
                message: "cannot normalize a zero or non-finite vector".into(),
            });
        }
        Self::new(amplitudes.unscale(norm))
    }

    /// Number state `|n⟩`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::invalid(
                "fock_algebra",
                format!("basis index {n} out of range for dim {dim}"),
            ));
        }
        let mut v = DVector::zeros(dim);
        v[n] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    /// Complex-Gaussian amplitudes, normalized. Reproducible for a seeded
    /// generator.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let v = DVector::from_iterator(
            dim,
            (0..dim).map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            }),
        );
        Self::normalize(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(
                "fock_algebra",
                format!("inner product of dims {} and {}", self.dim(), other.dim()),
            ));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨n|ψ⟩|²` for every `n`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(DenseOperator::new("x", DMatrix::zeros(1, 1)).is_err());
        assert!(DenseOperator::new("x", DMatrix::zeros(2, 3)).is_err());
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(DenseOperator::new("x", m).is_err());
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(DenseOperator::hermitian("x", m).is_err());
    }

    #[test]
    fn pauli_y_functional_calculus() {
        let y =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let y = DenseOperator::hermitian("σy", y).unwrap();
        let vals = y.eigenvalues().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        // f(σy) for f(x) = x² is the identity
        let sq = y.map_hermitian("σy²", |x| x * x).unwrap();
        assert!(max_abs(&(sq.matrix() - identity(2))) < 1e-14);
        // exp(−iσy s) = cos s − i sin s σy
        let s = 0.3;
        let u = y.unitary_exp(s).unwrap();
        let expect = identity(2).scale(s.cos()) - y.matrix() * c(0.0, s.sin());
        assert!(max_abs(&(u.matrix() - expect)) < 1e-14);
    }

    #[test]
    fn non_hermitian_has_no_eigen() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let op = DenseOperator::new("a", m).unwrap();
        assert!(op.eigen().is_err());
    }

    #[test]
    fn state_norm_checked() {
        let v = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(FockState::new(v.clone()).is_err());
        let s = FockState::normalize(v).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(s.is_normalized());
        assert!(FockState::normalize(DVector::zeros(3)).is_err());
        assert!(FockState::basis(3, 3).is_err());
    }

    #[test]
    fn random_states_reproducible() {
        let a = FockState::random(8, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = FockState::random(8, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_cache_shared_across_threads() {
        let m = DMatrix::from_fn(6, 6, |i, j| c((i + j) as f64, 0.0));
        let op = Arc::new(DenseOperator::hermitian("s", m).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let op = Arc::clone(&op);
                std::thread::spawn(move || op.eigenvalues().unwrap())
            })
            .collect();
        let first = op.eigenvalues().unwrap();
        for h in handles {
            assert_eq!(h.join().unwrap(), first);
        }
    }
}
