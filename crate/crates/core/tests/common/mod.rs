#![allow(dead_code)]

use compressim::qsim::{Circuit, Gate, SingleQubitOp, UnitaryMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let d = DMatrix::from_diagonal(&r.diagonal().map(|z| z / z.norm()));
    UnitaryMatrix::new(q * d).unwrap()
}

fn single_op() -> impl Strategy<Value = SingleQubitOp> {
    prop_oneof![
        Just(SingleQubitOp::X),
        Just(SingleQubitOp::Y),
        Just(SingleQubitOp::Z),
        Just(SingleQubitOp::H),
        Just(SingleQubitOp::S),
        Just(SingleQubitOp::Sdg),
        Just(SingleQubitOp::T),
        Just(SingleQubitOp::Tdg),
        (-3.2f64..3.2).prop_map(SingleQubitOp::Phase),
        (-3.2f64..3.2).prop_map(SingleQubitOp::RotY),
    ]
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let single = (single_op(), 0..n).prop_map(|(op, q)| Gate::single(op, q));
    let cnot = (0..n, 1..n).prop_map(move |(c, d)| Gate::cnot(c, (c + d) % n));
    prop_oneof![3 => single, 1 => cnot]
}

/// Random circuits on `n ≥ 2` qubits with up to `max_len` gates.
pub fn circuit(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(n), 0..=max_len).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
}

/// As [`circuit`] but restricted to the Clifford+T alphabet.
pub fn clifford_t_circuit(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    circuit(n, max_len).prop_map(move |c| {
        let gates = c.into_gates().into_iter().filter(|g| g.is_clifford_t()).collect();
        Circuit::from_gates(n, gates).unwrap()
    })
}
