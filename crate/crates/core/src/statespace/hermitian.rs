use num_complex::Complex64;

use super::jacobi;
use crate::{Error, Result};

/// Largest supported matrix order.
pub const MAX_DIM: usize = 64;

/// Asymmetry accepted (and symmetrized away) by [`HermitianMatrix::new`].
const HERMITIAN_TOL: f64 = 1e-8;
/// Asymmetry accepted for density matrices built from raw entries.
const STATE_HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues down to this are treated as rounding noise around zero.
pub(crate) const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

/// Dense Hermitian matrix of order at most [`MAX_DIM`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Eigen-decomposition `M = U diag(values) U†`, values in descending order.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Row-major unitary whose `k`-th column is the eigenvector of `values[k]`.
    pub vectors: Vec<Complex64>,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Recomputes `U diag(values) U†` entry by entry.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| self.vectors[i * n + k] * self.values[k] * self.vectors[j * n + k].conj())
                    .sum();
            }
        }
        out
    }
}

impl HermitianMatrix {
    /// Validates and symmetrizes a row-major `dim × dim` matrix.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(dim, entries, HERMITIAN_TOL)
    }

    fn with_tolerance(dim: usize, mut entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadShape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if let Some(z) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite entry {z}")));
        }
        let asymmetry = max_asymmetry(dim, &entries);
        if asymmetry > tol {
            return Err(Error::NotHermitian(asymmetry));
        }
        for i in 0..dim {
            entries[i * dim + i].im = 0.0;
            for j in (i + 1)..dim {
                let avg = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
                entries[i * dim + j] = avg;
                entries[j * dim + i] = avg.conj();
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = Complex64::new(*d, 0.0);
        }
        Self::new(n, entries)
    }

    /// Projector `|ψ><ψ|` onto the normalized `psi`.
    pub fn projector(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument("state vector has zero or non-finite norm".into()));
        }
        let n = psi.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in psi {
            for b in psi {
                entries.push(a * b.conj() / (norm * norm));
            }
        }
        Self::new(n, entries)
    }

    /// `Σ_k w_k M_k` over matrices of equal order.
    pub fn linear_combination(terms: &[(f64, &HermitianMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let dim = first.1.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (w, m) in terms {
            if m.dim != dim {
                return Err(Error::DimensionMismatch(dim, m.dim));
            }
            for (acc, z) in entries.iter_mut().zip(&m.entries) {
                *acc += z * *w;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j) == Complex64::new(0.0, 0.0)))
    }

    pub fn eigh(&self) -> Result<Eigh> {
        let n = self.dim;
        let (values, vectors) = jacobi::diagonalize(self.entries.clone(), n)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut sorted_vectors = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, &src) in order.iter().enumerate() {
            for i in 0..n {
                sorted_vectors[i * n + k] = vectors[i * n + src];
            }
        }
        Ok(Eigh {
            values: order.iter().map(|&k| values[k]).collect(),
            vectors: sorted_vectors,
        })
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.values)
    }
}

fn max_asymmetry(dim: usize, entries: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in i..dim {
            worst = worst.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of `m` in descending order.
pub fn spectrum(m: &HermitianMatrix) -> Result<Vec<f64>> {
    m.spectrum()
}

/// Dense density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianState {
    matrix: HermitianMatrix,
}

impl HermitianState {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace is {trace}")));
        }
        let lowest = matrix.spectrum()?.last().copied().unwrap_or(0.0);
        if lowest < -NEGATIVE_EIGEN_TOL {
            return Err(Error::NegativeEigenvalue(lowest));
        }
        Ok(Self { matrix })
    }

    /// Builds a state from raw row-major entries, requiring Hermiticity to 1e-12.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::new(HermitianMatrix::with_tolerance(dim, entries, STATE_HERMITIAN_TOL)?)
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::new(HermitianMatrix::projector(psi)?)
    }

    /// Maximally mixed state `I / d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(&vec![1.0 / dim as f64; dim])?)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }
}
