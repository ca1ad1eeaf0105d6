//! Apparatus states in a truncated Fock basis.
//!
//! Every state of the harmonic-oscillator model is diagonal in the Fock
//! basis, so [`DiagonalState`] is the workhorse. [`HermitianState`] carries
//! general small dense density matrices for the spectral paths.

mod hermitian;
mod jacobi;

pub use hermitian::{spectrum, Eigh, HermitianMatrix, HermitianState, MAX_DIM};
pub(crate) use hermitian::NEGATIVE_EIGEN_TOL;

use crate::{Error, Result};

/// Diagonal states must sum to one within this tolerance.
pub const NORM_TOL: f64 = 1e-12;

/// Probability distribution over Fock levels `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState {
    probs: Vec<f64>,
}

impl DiagonalState {
    /// Wraps an already normalized probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_weights(&probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Renormalizes non-negative weights into a state.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidProbabilities("weights sum to zero".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { probs: weights })
    }

    /// All probability on Fock level `level`.
    pub fn point_mass(level: usize) -> Self {
        let mut probs = vec![0.0; level + 1];
        probs[level] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of stored levels, `n_max + 1`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Probability of level `n`; zero beyond the stored support.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    /// The probability vector zero-padded to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut out = self.probs.clone();
        if out.len() < len {
            out.resize(len, 0.0);
        }
        out
    }

    /// The same state stored with at least `len` levels.
    pub fn pad_to(&self, len: usize) -> Self {
        Self {
            probs: self.padded(len),
        }
    }

    pub fn mean_occupation(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Applies the measurement interaction `|n> -> |n + i>`.
    pub fn shift(&self, i: usize) -> Self {
        let mut probs = vec![0.0; i];
        probs.extend_from_slice(&self.probs);
        Self { probs }
    }

    /// Relabels Fock levels: level `n` moves to `perm[n]`.
    ///
    /// `perm` must be a permutation of `0..perm.len()` with
    /// `perm.len() >= self.len()`; the state is padded first.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() < self.len() {
            return Err(Error::DimensionMismatch(perm.len(), self.len()));
        }
        let mut seen = vec![false; perm.len()];
        let mut probs = vec![0.0; perm.len()];
        for (n, &target) in perm.iter().enumerate() {
            if target >= perm.len() || seen[target] {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
            seen[target] = true;
            probs[target] = self.prob(n);
        }
        Ok(Self { probs })
    }

    /// Embeds the state as a dense diagonal density matrix.
    pub fn to_dense(&self) -> Result<HermitianState> {
        HermitianState::new(HermitianMatrix::from_real_diagonal(&self.probs)?)
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidProbabilities("empty vector".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {w} is negative or not finite")));
    }
    Ok(())
}

/// Free-function form of [`DiagonalState::shift`].
pub fn shift(state: &DiagonalState, i: usize) -> DiagonalState {
    state.shift(i)
}

/// Inverse temperature together with the Fock truncation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    pub beta: f64,
    /// Largest probability mass allowed in the discarded tail.
    pub tail_epsilon: f64,
    /// Lower bound on `n_max`.
    pub min_levels: usize,
    /// Hard cap on `n_max`.
    pub max_levels: usize,
}

impl ThermalSpec {
    pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;
    pub const DEFAULT_MIN_LEVELS: usize = 16;
    pub const DEFAULT_MAX_LEVELS: usize = 1_000_000;

    pub fn new(beta: f64) -> Result<Self> {
        let spec = Self {
            beta,
            tail_epsilon: Self::DEFAULT_TAIL_EPSILON,
            min_levels: Self::DEFAULT_MIN_LEVELS,
            max_levels: Self::DEFAULT_MAX_LEVELS,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tail_epsilon(mut self, tail_epsilon: f64) -> Result<Self> {
        self.tail_epsilon = tail_epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta <= 0.0 {
            return Err(Error::NonPositiveBeta(self.beta));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(Error::InvalidTailEpsilon(self.tail_epsilon));
        }
        Ok(())
    }

    /// Smallest `n_max >= min_levels` whose geometric tail
    /// `exp(-beta (n_max + 1))` is below `tail_epsilon`.
    pub fn truncation_level(&self) -> Result<usize> {
        self.validate()?;
        let log_eps = -self.tail_epsilon.ln();
        let estimate = (log_eps / self.beta).floor();
        if estimate > self.max_levels as f64 + 1.0 {
            return Err(Error::TruncationTooLarge {
                beta: self.beta,
                cap: self.max_levels,
            });
        }
        let tail = |n: usize| (-self.beta * (n as f64 + 1.0)).exp();
        let mut n = estimate as usize;
        while tail(n) >= self.tail_epsilon {
            n += 1;
        }
        while n > 0 && tail(n - 1) < self.tail_epsilon {
            n -= 1;
        }
        let n = n.max(self.min_levels);
        if n > self.max_levels {
            return Err(Error::TruncationTooLarge {
                beta: self.beta,
                cap: self.max_levels,
            });
        }
        Ok(n)
    }
}

/// Truncated, renormalized Gibbs state with weights `exp(-beta n) / Z`.
pub fn thermal_state(spec: &ThermalSpec) -> Result<DiagonalState> {
    let n_max = spec.truncation_level()?;
    let weights = (0..=n_max).map(|n| (-spec.beta * n as f64).exp()).collect();
    DiagonalState::from_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_vectors() {
        assert!(DiagonalState::new(vec![0.5, 0.6]).is_err());
        assert!(DiagonalState::new(vec![1.5, -0.5]).is_err());
        assert!(DiagonalState::new(vec![]).is_err());
        assert!(DiagonalState::from_weights(vec![0.0, 0.0]).is_err());
        assert!(DiagonalState::from_weights(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn spec_validation() {
        assert_eq!(ThermalSpec::new(0.0), Err(Error::NonPositiveBeta(0.0)));
        assert!(ThermalSpec::new(-1.0).is_err());
        assert!(ThermalSpec::new(1.0).unwrap().with_tail_epsilon(1.0).is_err());
        assert!(ThermalSpec::new(1.0).unwrap().with_tail_epsilon(0.0).is_err());
    }

    #[test]
    fn truncation_level_at_beta_one() {
        // smallest n with e^{-(n+1)} < 1e-12 is 27
        let spec = ThermalSpec::new(1.0).unwrap();
        assert_eq!(spec.truncation_level().unwrap(), 27);
        let state = thermal_state(&spec).unwrap();
        assert_eq!(state.n_max(), 27);
    }

    #[test]
    fn truncation_respects_min_levels() {
        let spec = ThermalSpec::new(10.0).unwrap();
        assert_eq!(spec.truncation_level().unwrap(), 16);
    }

    #[test]
    fn truncation_cap() {
        let spec = ThermalSpec::new(1e-6).unwrap();
        assert!(matches!(
            thermal_state(&spec),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn zero_temperature_limit() {
        let state = thermal_state(&ThermalSpec::new(50.0).unwrap()).unwrap();
        assert_abs_diff_eq!(state.prob(0), 1.0, epsilon = 1e-15);
        assert!(state.probs()[1..].iter().all(|p| *p < 1e-20));
    }

    #[test]
    fn mean_occupation_at_ln2() {
        let state = thermal_state(&ThermalSpec::new(2f64.ln()).unwrap()).unwrap();
        assert_abs_diff_eq!(state.mean_occupation(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn shift_by_one_matches_post_measurement_state() {
        let beta = 0.7;
        let rho = thermal_state(&ThermalSpec::new(beta).unwrap()).unwrap();
        let shifted = rho.shift(1);
        let z = 1.0 / -(-beta).exp_m1();
        assert_eq!(shifted.prob(0), 0.0);
        for n in 1..10 {
            let expected = (-beta * (n as f64 - 1.0)).exp() / z;
            assert_abs_diff_eq!(shifted.prob(n), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn shift_edge_cases() {
        let rho = DiagonalState::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(shift(&rho, 0), rho);
        assert_eq!(DiagonalState::point_mass(0).shift(3), DiagonalState::point_mass(3));
        assert_eq!(rho.shift(2).len(), 4);
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let rho = DiagonalState::new(vec![0.25, 0.75]).unwrap();
        assert!(rho.relabeled(&[0, 0]).is_err());
        assert!(rho.relabeled(&[0]).is_err());
        assert_eq!(rho.relabeled(&[1, 0]).unwrap().probs(), &[0.75, 0.25]);
    }
}
