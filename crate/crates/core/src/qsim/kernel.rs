//! In-place gate application on amplitude buffers.
//!
//! Qubit 0 is the most significant bit of the basis index.

use num_complex::Complex64 as C64;

use super::gate::{Gate, Mat2};

#[inline]
pub(crate) fn stride(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

#[inline]
pub(crate) fn bit(index: usize, num_qubits: usize, qubit: usize) -> usize {
    (index >> (num_qubits - 1 - qubit)) & 1
}

pub(crate) fn apply_single(amps: &mut [C64], num_qubits: usize, qubit: usize, m: &Mat2) {
    let s = stride(num_qubits, qubit);
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + s {
            let x0 = amps[i];
            let x1 = amps[i + s];
            amps[i] = a * x0 + b * x1;
            amps[i + s] = c * x0 + d * x1;
        }
        base += 2 * s;
    }
}

pub(crate) fn apply_cnot(amps: &mut [C64], num_qubits: usize, control: usize, target: usize) {
    let ts = stride(num_qubits, target);
    for i in 0..amps.len() {
        if bit(i, num_qubits, control) == 1 && bit(i, num_qubits, target) == 0 {
            amps.swap(i, i + ts);
        }
    }
}

pub(crate) fn apply_gate(amps: &mut [C64], num_qubits: usize, gate: &Gate) {
    match gate {
        Gate::Single { op, qubit } => apply_single(amps, num_qubits, *qubit, &op.matrix()),
        Gate::Cnot { control, target } => apply_cnot(amps, num_qubits, *control, *target),
    }
}
