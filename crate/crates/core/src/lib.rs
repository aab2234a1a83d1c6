//! Heat bounds for entropy changes of small quantum systems coupled to a
//! thermal environment.
//!
//! The classic statement bounds the heat dumped into a bath at temperature T
//! by -T * dS. Calibrating the bath with its own equilibrium curves gives a
//! strictly tighter bound: invert the equilibrium entropy to find the
//! reference temperature that absorbs the required entropy, then charge the
//! equilibrium energy difference up to that temperature. The bound survives
//! at T = 0, where -T * dS collapses to zero.
//!
//! Layout:
//! - [`linalg`]: dense complex matrices and a cyclic Jacobi eigensolver
//! - [`quantum`]: density matrices, thermal states, entropies
//! - [`specfun`]: Lambert W and the upper incomplete gamma at order zero
//! - [`envmodels`]: equilibrium energy/entropy/heat-capacity curves
//! - [`bounds`]: entropy inversion and the bound evaluations
//! - [`rabi`]: exact qubit + single-mode benchmark dynamics
//! - [`harness`]: randomized trials checking the inequality chain
//!
//! Units: hbar = k_B = 1, entropies in nats, all scalars f64.
//!
//! With the default `parallel` feature, sweeps and trial batches fan out via
//! rayon; disabling it swaps in equivalent sequential loops.

pub mod bounds;
pub mod envmodels;
mod error;
pub mod harness;
pub mod fmt;
pub mod linalg;
pub mod quantum;
pub mod rabi;
mod roots;
pub mod specfun;

pub use error::{Error, Result};
