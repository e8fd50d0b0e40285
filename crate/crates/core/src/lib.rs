//! Compressed simulation of the open transverse-field Ising chain on
//! `log₂ n` qubits, with exact classical references, Clifford+T compilation
//! under a star topology, shot-based noise, tomography and validating-circuit
//! error estimation.

pub mod compile;
pub mod compressed;
pub mod error;
pub mod format;
pub mod noise;
pub mod oracle;
pub mod qsim;
pub mod tolerance;
pub mod tomo;
pub mod validate;

pub use error::{Error, Result};
