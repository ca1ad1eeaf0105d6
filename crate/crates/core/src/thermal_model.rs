//! Harmonic-oscillator apparatus in a thermal state measuring an
//! `(N+1)`-level system through `|i>|n> -> |i>|n+i>`.
//!
//! After the interaction, system state `i` leaves the apparatus in the
//! thermal state shifted up by `i` levels. Closed forms use
//! `x = exp(-β)`, `Z = 1 / (1 - x)` and `n̄ = x / (1 - x)`.

use crate::infotheory::{check_probabilities, Ensemble, State, PRIOR_TOL};
use crate::statespace::{thermal_state, ThermalSpec};
use crate::{Error, Result};

/// Below this β the Fock truncation is refused and only closed forms are used.
pub const MIN_NUMERIC_BETA: f64 = 0.01;

/// One configuration of the apparatus model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub thermal: ThermalSpec,
    /// Number of system states, `N + 1`.
    pub levels: usize,
    pub priors: Vec<f64>,
}

impl ModelConfig {
    /// Uniform priors and the default truncation policy.
    pub fn new(beta: f64, levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 levels, got {levels}")));
        }
        Ok(Self {
            thermal: ThermalSpec::new(beta)?,
            levels,
            priors: vec![1.0 / levels as f64; levels],
        })
    }

    pub fn with_priors(mut self, priors: Vec<f64>) -> Result<Self> {
        if priors.len() != self.levels {
            return Err(Error::DimensionMismatch(self.levels, priors.len()));
        }
        check_probabilities(&priors, PRIOR_TOL)?;
        self.priors = priors;
        Ok(self)
    }

    pub fn with_tail_epsilon(mut self, tail_epsilon: f64) -> Result<Self> {
        self.thermal = self.thermal.with_tail_epsilon(tail_epsilon)?;
        Ok(self)
    }

    pub fn beta(&self) -> f64 {
        self.thermal.beta
    }

    pub fn has_uniform_priors(&self) -> bool {
        let p = 1.0 / self.levels as f64;
        self.priors.iter().all(|q| (q - p).abs() <= PRIOR_TOL)
    }
}

/// Post-measurement apparatus states `ρ_a^i`, one per system state, padded
/// to a common length `n_max + N + 1`.
pub fn build_ensemble(config: &ModelConfig) -> Result<Ensemble> {
    let beta = config.beta();
    if beta < MIN_NUMERIC_BETA {
        return Err(Error::BelowNumericRange {
            beta,
            min: MIN_NUMERIC_BETA,
        });
    }
    let rho = thermal_state(&config.thermal)?;
    let len = rho.len() + config.levels - 1;
    let members = config
        .priors
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, State::Diagonal(rho.shift(i).pad_to(len))))
        .collect();
    Ensemble::new(members)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBeta(beta))
    }
}

/// `Z = Σ_n exp(-β n)`.
pub fn partition_function(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 / -(-beta).exp_m1())
}

/// `n̄ = Σ_n n exp(-β n) / Z`, equal to `<E>` in units of `ħω`.
pub fn mean_occupation(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 / beta.exp_m1())
}

/// `P_c = 1/2 + 1/4 {1/Z + (e^β - 1)(Z - 1)/Z}` for the two-level system.
pub fn two_level_pc_closed_form(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let z = 1.0 / -(-beta).exp_m1();
    // Z - 1 = 1 / (e^β - 1), evaluated without cancellation
    let z_minus_one = 1.0 / beta.exp_m1();
    let braces = 1.0 / z + beta.exp_m1() * z_minus_one / z;
    Ok(0.5 + 0.25 * braces)
}

/// `1 - exp(-β)/2`, the simplified form of [`two_level_pc_closed_form`].
pub fn two_level_pc_simplified(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 - 0.5 * (-beta).exp())
}

/// Inverse temperature at which the two-level success probability reaches
/// `target_pc`, by bisection to `|Δβ| < 1e-9`.
///
/// For a target of 0.8 this is `ln 2.5 ≈ 0.916`; the usual statement
/// `ω/T ≥ k_B/ħ` (β ≥ 1) rounds it up.
pub fn threshold_beta(target_pc: f64) -> Result<f64> {
    if !(target_pc > 0.5 && target_pc < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target {target_pc} is outside the achievable range (0.5, 1)"
        )));
    }
    let pc = |beta: f64| two_level_pc_closed_form(beta).unwrap_or(0.5);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while pc(hi) < target_pc {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::InvalidArgument(format!(
                "target {target_pc} is not reachable in double precision"
            )));
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if pc(mid) < target_pc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `S(ρ_a^i) = <E>/(k_B T) + ln Z = β n̄ + ln Z`, the same for every `i`.
pub fn member_entropy_closed_form(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let n_bar = 1.0 / beta.exp_m1();
    let ln_z = -(-(-beta).exp_m1()).ln();
    Ok(beta * n_bar + ln_z)
}

/// Entropy of the uniform mixture `Σ_i ρ_a^i / (N+1)` from its explicit
/// level weights, with the default truncation policy.
pub fn mixture_entropy_closed_form(beta: f64, levels: usize) -> Result<f64> {
    mixture_entropy_closed_form_with(&ThermalSpec::new(beta)?, levels)
}

/// [`mixture_entropy_closed_form`] with an explicit truncation policy.
///
/// Level `i` of the mixture carries `Σ_{j=a}^{i} x^j / (Z (N+1))` with
/// `a = max(0, i - N)`, which telescopes to `(x^a - x^{i+1}) / (N+1)`.
pub fn mixture_entropy_closed_form_with(spec: &ThermalSpec, levels: usize) -> Result<f64> {
    if levels < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 levels, got {levels}")));
    }
    let beta = spec.beta;
    let n_max = spec.truncation_level()?;
    let big_n = levels - 1;
    let norm = levels as f64;
    let mut entropy = 0.0;
    for i in 0..=(n_max + big_n) {
        let a = i.saturating_sub(big_n);
        let span = (i + 1 - a) as f64;
        let q = (-beta * a as f64).exp() * -(-beta * span).exp_m1() / norm;
        if q > 0.0 {
            entropy -= q * q.ln();
        }
    }
    Ok(entropy)
}

/// `exp(-S(ρ_a^0)) = exp(-<E>/(k_B T)) / Z`, the low-temperature form of the
/// success-probability bound.
pub fn low_temperature_approximation(beta: f64) -> Result<f64> {
    Ok((-member_entropy_closed_form(beta)?).exp())
}

/// `exp(H - ln(N+1))` for uniform priors, from the closed-form entropies.
pub fn bound_closed_form(beta: f64, levels: usize) -> Result<f64> {
    bound_closed_form_with(&ThermalSpec::new(beta)?, levels)
}

pub fn bound_closed_form_with(spec: &ThermalSpec, levels: usize) -> Result<f64> {
    let mixture = mixture_entropy_closed_form_with(spec, levels)?;
    let member = member_entropy_closed_form(spec.beta)?;
    let holevo = (mixture - member).max(0.0);
    Ok((holevo - (levels as f64).ln()).exp().clamp(0.0, 1.0))
}

/// Bayes-optimal success for uniform priors: `1 - x N / (N+1)`.
///
/// Level `n` is best attributed to system state `min(n, N)`, whose weight
/// there is `(1 - x)` for `n <= N` and `(1 - x) x^{n-N}` beyond.
pub fn bayes_optimal_closed_form(beta: f64, levels: usize) -> Result<f64> {
    check_beta(beta)?;
    if levels < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 levels, got {levels}")));
    }
    let big_n = (levels - 1) as f64;
    Ok(1.0 - (-beta).exp() * big_n / levels as f64)
}
