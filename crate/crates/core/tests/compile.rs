mod common;

use compressim::compile::*;
use compressim::qsim::{circuit_unitary, Circuit, Gate, UnitaryMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn star(n: usize) -> Topology {
    Topology::new(n, 0).unwrap()
}

fn reconstruct_error(u: &UnitaryMatrix, c: &Circuit) -> f64 {
    u.distance_up_to_phase(&circuit_unitary(c).unwrap()).unwrap()
}

#[test]
fn random_two_qubit_unitaries_within_reported_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let budget = SynthesisBudget::default();
    for i in 0..100 {
        let u = common::haar_unitary(4, &mut rng);
        let out = compile_full(&u, &star(2), &budget).unwrap();
        assert!(star(2).admits(&out.circuit));
        assert!(out.circuit.is_clifford_t());
        let err = reconstruct_error(&u, &out.circuit);
        assert!(err <= out.synthesis_error + 1e-9, "case {i}: {err} > {}", out.synthesis_error);
        if !out.over_budget {
            assert!(out.depth <= DEPTH_LIMIT);
        }
    }
}

#[test]
fn kak_is_exact_on_random_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let u = common::haar_unitary(4, &mut rng);
        let c = kak_decompose(&u).unwrap();
        assert!(c.cnot_count() <= 3);
        assert!(reconstruct_error(&u, &c) < 1e-9);
    }
}

#[test]
fn swap_uses_three_cnots() {
    let swap = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]).unwrap();
    let u = circuit_unitary(&swap).unwrap();
    let k = kak_decompose(&u).unwrap();
    assert_eq!(k.cnot_count(), 3);
    let out = compile_full(&u, &star(2), &SynthesisBudget::default()).unwrap();
    assert_eq!(out.circuit.cnot_count(), 3);
    assert!(reconstruct_error(&u, &out.circuit) <= out.synthesis_error + 1e-9);
}

#[test]
fn cnot_class_counts() {
    let id = UnitaryMatrix::identity(4);
    assert_eq!(kak_decompose(&id).unwrap().cnot_count(), 0);
    let cz = circuit_unitary(&Circuit::from_gates(2, vec![Gate::h(1), Gate::cnot(0, 1), Gate::h(1)]).unwrap()).unwrap();
    assert_eq!(kak_decompose(&cz).unwrap().cnot_count(), 1);
    let local =
        circuit_unitary(&Circuit::from_gates(2, vec![Gate::roty(0, 0.3), Gate::phase(1, 1.1)]).unwrap()).unwrap();
    assert_eq!(kak_decompose(&local).unwrap().cnot_count(), 0);
}

#[test]
fn identity_compiles_to_nothing() {
    let out = compile_full(&UnitaryMatrix::identity(4), &star(2), &SynthesisBudget::default()).unwrap();
    assert!(out.circuit.is_empty());
    assert_eq!(out.depth, 0);
}

#[test]
fn eight_dimensional_targets_are_refused() {
    let r = compile_full(&UnitaryMatrix::identity(8), &star(3), &SynthesisBudget::default());
    assert!(matches!(r, Err(compressim::Error::Unsupported(_))));
}

#[test]
fn routing_overhead_on_three_qubits() {
    let c = Circuit::from_gates(3, vec![Gate::cnot(2, 1), Gate::cnot(0, 1), Gate::cnot(1, 0)]).unwrap();
    let r = route(&c, &star(3)).unwrap();
    assert!(star(3).admits(&r));
    // CNOT(2→1): swap(1, hub) twice around CNOT(2→hub); CNOT(0→1): reversed
    assert_eq!(r.cnot_count(), 3 + 3 + 1 + 1 + 1);
}

#[test]
fn tight_depth_limit_is_flagged() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = common::haar_unitary(4, &mut rng);
    let c = kak_decompose(&u).unwrap();
    let out = compile_circuit(&c, &star(2), &SynthesisBudget::default(), Some(2)).unwrap();
    assert!(out.over_budget);
}

#[test]
fn synthesis_error_shrinks_with_t_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let u = common::haar_unitary(2, &mut rng).to_mat2().unwrap();
        let errs: Vec<f64> = (0..=6)
            .map(|t| {
                let b = SynthesisBudget { max_t_count: t, ..Default::default() };
                synthesize_single_qubit(&u, &b).unwrap().error
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routing_preserves_unitary(c in common::circuit(3, 12), hub in 0usize..3) {
        let topo = Topology::new(3, hub).unwrap();
        let r = route(&c, &topo).unwrap();
        prop_assert!(topo.admits(&r));
        let d = circuit_unitary(&c).unwrap().distance_up_to_phase(&circuit_unitary(&r).unwrap()).unwrap();
        prop_assert!(d < 1e-9);
    }

    #[test]
    fn fuse_preserves_unitary(c in common::circuit(2, 16)) {
        let f = fuse(&c);
        prop_assert!(f.len() <= c.len());
        let d = circuit_unitary(&c).unwrap().distance_up_to_phase(&circuit_unitary(&f).unwrap()).unwrap();
        prop_assert!(d < 1e-9);
    }

    #[test]
    fn compiled_circuits_respect_their_bound(c in common::circuit(3, 8)) {
        let out = compile_circuit(&c, &star(3), &SynthesisBudget { max_t_count: 4, ..Default::default() }, None).unwrap();
        prop_assert!(out.circuit.is_clifford_t());
        prop_assert!(star(3).admits(&out.circuit));
        let d = circuit_unitary(&c).unwrap().distance_up_to_phase(&circuit_unitary(&out.circuit).unwrap()).unwrap();
        prop_assert!(d <= out.synthesis_error + 1e-9);
    }

    #[test]
    fn clifford_t_circuits_compile_exactly(c in common::clifford_t_circuit(2, 10)) {
        let out = compile_circuit(&c, &star(2), &SynthesisBudget::default(), None).unwrap();
        prop_assert!(out.synthesis_error < 1e-9);
    }
}
