//! Entropy functionals and the `exp(H - h)` success-probability bound.
//!
//! All entropies are in nats. `0 ln 0` is taken as 0.

use crate::statespace::{DiagonalState, NEGATIVE_EIGEN_TOL, HermitianMatrix, HermitianState};
use crate::{Error, Result};

/// Priors of an ensemble must sum to one within this tolerance.
pub const PRIOR_TOL: f64 = 1e-12;
/// Tolerance for probability vectors handed to [`shannon_entropy`].
pub const PROBABILITY_TOL: f64 = 1e-9;

/// A density operator in one of the two supported representations.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Diagonal(DiagonalState),
    Dense(HermitianState),
}

impl State {
    /// Stored dimension (number of Fock levels for diagonal states).
    pub fn dim(&self) -> usize {
        match self {
            State::Diagonal(d) => d.len(),
            State::Dense(h) => h.dim(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, State::Diagonal(_))
    }
}

impl From<DiagonalState> for State {
    fn from(s: DiagonalState) -> Self {
        State::Diagonal(s)
    }
}

impl From<HermitianState> for State {
    fn from(s: HermitianState) -> Self {
        State::Dense(s)
    }
}

/// States `ρ_i` prepared with prior probabilities `p_i`.
///
/// Members share one representation. Dense members must have equal order;
/// diagonal members may differ in length and are zero-padded as needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<State>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, State)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let (priors, states): (Vec<f64>, Vec<State>) = members.into_iter().unzip();
        check_probabilities(&priors, PRIOR_TOL)?;
        let diagonal = states[0].is_diagonal();
        if states.iter().any(|s| s.is_diagonal() != diagonal) {
            return Err(Error::MixedRepresentation);
        }
        if !diagonal {
            let dim = states[0].dim();
            if let Some(s) = states.iter().find(|s| s.dim() != dim) {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
        }
        Ok(Self { priors, states })
    }

    /// Equal priors over `states`.
    pub fn uniform(states: Vec<State>) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn members(&self) -> impl DoubleEndedIterator<Item = (f64, &State)> + ExactSizeIterator {
        self.priors.iter().copied().zip(&self.states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.states[0].is_diagonal()
    }

    /// Common dimension after padding.
    pub fn dim(&self) -> usize {
        self.states.iter().map(State::dim).max().unwrap_or(0)
    }

    /// `Σ_i p_i ρ_i`.
    pub fn average_state(&self) -> Result<State> {
        match &self.states[0] {
            State::Diagonal(_) => {
                let dim = self.dim();
                let mut avg = vec![0.0; dim];
                for (p, s) in self.members() {
                    if let State::Diagonal(d) = s {
                        for (acc, q) in avg.iter_mut().zip(d.probs()) {
                            *acc += p * q;
                        }
                    }
                }
                Ok(State::Diagonal(DiagonalState::from_weights(avg)?))
            }
            State::Dense(_) => {
                let terms: Vec<(f64, &HermitianMatrix)> = self
                    .members()
                    .filter_map(|(p, s)| match s {
                        State::Dense(h) => Some((p, h.matrix())),
                        State::Diagonal(_) => None,
                    })
                    .collect();
                Ok(State::Dense(HermitianState::new(
                    HermitianMatrix::linear_combination(&terms)?,
                )?))
            }
        }
    }

    /// Re-expresses a diagonal ensemble with dense members of equal order.
    pub fn to_dense(&self) -> Result<Self> {
        let dim = self.dim();
        let states = self
            .states
            .iter()
            .map(|s| match s {
                State::Diagonal(d) => Ok(State::Dense(d.pad_to(dim).to_dense()?)),
                State::Dense(h) => Ok(State::Dense(h.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            priors: self.priors.clone(),
            states,
        })
    }
}

pub(crate) fn check_probabilities(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("empty vector".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {x} is negative or not finite")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}, expected 1")));
    }
    Ok(())
}

fn entropy_of(p: &[f64]) -> f64 {
    -p.iter().filter(|x| **x > 0.0).map(|x| x * x.ln()).sum::<f64>()
}

/// `h(p) = -Σ p_i ln p_i`.
pub fn shannon_entropy(priors: &[f64]) -> Result<f64> {
    check_probabilities(priors, PROBABILITY_TOL)?;
    Ok(entropy_of(priors).max(0.0))
}

/// `S(ρ) = -Tr ρ ln ρ`.
pub fn von_neumann_entropy(state: &State) -> Result<f64> {
    let (s, dim) = match state {
        State::Diagonal(d) => (entropy_of(d.probs()), d.len()),
        State::Dense(h) => {
            let mut spec = h.matrix().spectrum()?;
            for lambda in spec.iter_mut() {
                if *lambda < -NEGATIVE_EIGEN_TOL {
                    return Err(Error::NegativeEigenvalue(*lambda));
                }
                *lambda = lambda.max(0.0);
            }
            (entropy_of(&spec), h.dim())
        }
    };
    Ok(s.clamp(0.0, (dim as f64).ln()))
}

/// Holevo quantity `H = S(Σ p_i ρ_i) - Σ p_i S(ρ_i)`, clamped at zero.
pub fn holevo_quantity(ensemble: &Ensemble) -> Result<f64> {
    let mixed = von_neumann_entropy(&ensemble.average_state()?)?;
    let mut members = 0.0;
    for (p, s) in ensemble.members() {
        members += p * von_neumann_entropy(s)?;
    }
    Ok((mixed - members).max(0.0))
}

/// `exp(H - h(p))`, clamped to `[0, 1]`.
pub fn success_probability_bound(ensemble: &Ensemble) -> Result<f64> {
    let holevo = holevo_quantity(ensemble)?;
    let h = shannon_entropy(ensemble.priors())?;
    Ok((holevo - h).exp().clamp(0.0, 1.0))
}
