//! Exact optimal single-shot discrimination.
//!
//! Two states use the Helstrom optimum `1/2 + 1/2 Tr|p0 ρ0 - p1 ρ1|`.
//! Commuting (diagonal) ensembles of any size use the Bayes rule
//! `Σ_n max_i p_i ρ_i(n)`.

use crate::infotheory::{Ensemble, State};
use crate::statespace::HermitianMatrix;
use crate::{Error, Result};

/// `Tr|w0 ρ0 - w1 ρ1|`.
fn weighted_trace_norm(rho0: &State, w0: f64, rho1: &State, w1: f64) -> Result<f64> {
    match (rho0, rho1) {
        (State::Diagonal(a), State::Diagonal(b)) => {
            let len = a.len().max(b.len());
            Ok((0..len).map(|n| (w0 * a.prob(n) - w1 * b.prob(n)).abs()).sum())
        }
        (State::Dense(a), State::Dense(b)) => {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch(a.dim(), b.dim()));
            }
            let diff = HermitianMatrix::linear_combination(&[(w0, a.matrix()), (-w1, b.matrix())])?;
            Ok(diff.spectrum()?.iter().map(|l| l.abs()).sum())
        }
        _ => Err(Error::MixedRepresentation),
    }
}

/// Trace-norm distance `Tr|ρ0 - ρ1|`, in `[0, 2]`.
pub fn trace_norm_distance(rho0: &State, rho1: &State) -> Result<f64> {
    Ok(weighted_trace_norm(rho0, 1.0, rho1, 1.0)?.clamp(0.0, 2.0))
}

/// Optimal probability of identifying which of `rho0` (prior `p0`) and
/// `rho1` (prior `1 - p0`) was prepared.
pub fn helstrom(rho0: &State, rho1: &State, p0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidArgument(format!("prior {p0} outside [0, 1]")));
    }
    let p1 = 1.0 - p0;
    let norm = weighted_trace_norm(rho0, p0, rho1, p1)?;
    Ok((0.5 + 0.5 * norm).clamp(p0.max(p1), 1.0))
}

/// Bayes-optimal success probability for an ensemble of diagonal states.
pub fn bayes_optimal_commuting(ensemble: &Ensemble) -> Result<f64> {
    let mut members = Vec::with_capacity(ensemble.len());
    for (p, s) in ensemble.members() {
        match s {
            State::Diagonal(d) => members.push((p, d)),
            State::Dense(_) => return Err(Error::NonDiagonalMember),
        }
    }
    let dim = ensemble.dim();
    let total: f64 = (0..dim)
        .map(|n| members.iter().map(|(p, d)| p * d.prob(n)).fold(0.0, f64::max))
        .sum();
    let best_prior = ensemble.priors().iter().copied().fold(0.0, f64::max);
    Ok(total.clamp(best_prior, 1.0))
}

/// Exact optimum where one is available: the Bayes rule for diagonal
/// ensembles, Helstrom for two dense states.
pub fn optimal_success_probability(ensemble: &Ensemble) -> Result<f64> {
    if ensemble.is_diagonal() {
        return bayes_optimal_commuting(ensemble);
    }
    match ensemble.len() {
        1 => Ok(1.0),
        2 => {
            let states = ensemble.states();
            helstrom(&states[0], &states[1], ensemble.priors()[0])
        }
        _ => Err(Error::NotImplemented(
            "optimal discrimination of three or more noncommuting states",
        )),
    }
}
