//! Numerical tolerances shared by the equality checks in this crate.

/// Structural comparisons: circuit-versus-matrix identities, unitarity of long products.
pub const STRUCTURAL: f64 = 1e-9;

/// Algebraic comparisons on freshly built matrices.
pub const ALGEBRAIC: f64 = 1e-10;

/// Largest register handled by the dense simulator.
pub const MAX_DENSE_QUBITS: usize = 12;
