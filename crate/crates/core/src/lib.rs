//! Numerics for quantum measurements performed with a mixed (thermal)
//! apparatus.
//!
//! The crate covers four layers:
//!
//! * [`statespace`]: diagonal Fock-basis states, thermal states, the shift
//!   interaction `|i>|n> -> |i>|n+i>`, and small dense Hermitian matrices with
//!   a Jacobi eigen-solver.
//! * [`infotheory`]: Shannon and von Neumann entropies, the Holevo quantity
//!   and the `exp(H - h)` success-probability bound.
//! * [`discrimination`]: the Helstrom two-state optimum and the Bayes rule
//!   for commuting ensembles.
//! * [`thermal_model`]: the harmonic-oscillator apparatus measuring an
//!   `(N+1)`-level system, with closed forms and a threshold solver.
//!
//! [`sweep`] turns these into β-grid sweeps with CSV output, and [`parallel`]
//! selects between rayon and sequential evaluation.
//!
//! Units: `ħ = ω = k_B = 1`, so the dimensionless inverse temperature β is the
//! only temperature parameter. Entropies are in nats.

pub mod discrimination;
mod error;
pub mod infotheory;
pub mod parallel;
pub mod statespace;
pub mod sweep;
pub mod thermal_model;

pub use error::{Error, Result};
pub use infotheory::{Ensemble, State};
pub use statespace::{DiagonalState, HermitianMatrix, HermitianState, ThermalSpec};
