//! Simulation of the one-dimensional quartic anharmonic oscillator
//! `H = p²/2 + x²/2 + λx⁴` (ħ = m = ω = 1) on a virtual qubit register.
//!
//! The crate covers:
//!
//! * [`numkernel`]: dense complex matrices, statevectors, Hermitian
//!   eigendecomposition and unitary exponentials.
//! * [`model`]: truncated Fock-basis and discretized position-space
//!   Hamiltonians, plus Pauli-string decomposition.
//! * [`circuit`]: gate-level statevector simulation, QFT circuits,
//!   Toffoli-cascade phase filters and shot sampling.
//! * [`evolution`]: exact and split-operator propagators, the circuit
//!   realization of the split propagator, trajectories and 2D composition.
//! * [`vqe`]: ansatz circuits, Pauli-sum expectation values, Nelder–Mead and
//!   SPSA optimizers, and deflation for excited states.
//! * [`analysis`]: perturbative, WKB and exact spectra with error metrics.

pub mod analysis;
pub mod circuit;
mod error;
pub mod evolution;
pub mod model;
pub mod numkernel;
pub mod vqe;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, EigenSystem, StateVector};
