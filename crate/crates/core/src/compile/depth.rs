use crate::qsim::Circuit;

/// ASAP layer count: each gate starts right after the latest layer occupied
/// by any of its qubits. Every gate, CNOT included, costs one layer.
pub fn depth(c: &Circuit) -> usize {
    let mut frontier = vec![0usize; c.num_qubits()];
    let mut total = 0;
    for g in c.gates() {
        let qs = g.qubits();
        let layer = qs.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for q in qs {
            frontier[q] = layer;
        }
        total = total.max(layer);
    }
    total
}
