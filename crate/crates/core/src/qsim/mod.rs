//! Dense, exact simulation of few-qubit circuits.
//!
//! Basis labelling: qubit 0 is the most significant bit, so `|k₀k₁…⟩` has
//! index `Σ kᵢ 2^{q−1−i}`.

mod circuit;
mod gate;
pub(crate) mod kernel;
mod pauli;
mod state;
mod unitary;

pub use circuit::Circuit;
pub use gate::{Gate, Mat2, SingleQubitOp};
pub use pauli::{Pauli, PauliString};
pub use state::{DensityMatrix, QuantumState, StateVector};
pub use unitary::{circuit_unitary, distance_up_to_phase, distance_up_to_phase_2x2, UnitaryMatrix};
