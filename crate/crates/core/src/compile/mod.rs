//! Lowering to {X, Y, Z, H, S, S†, T, T†, CNOT} on a star topology.

mod depth;
mod kak;
mod route;
mod synth;

pub use depth::depth;
pub use kak::kak_decompose;
pub use route::{route, Topology};
pub use synth::{
    best_in_table, enumerate, sequence_matrix, synthesize_single_qubit, table, Candidate, SynthesisBudget, Synthesized,
    ALPHABET,
};

use crate::error::{Error, Result};
use crate::qsim::{distance_up_to_phase_2x2, Circuit, Gate, Mat2, SingleQubitOp, UnitaryMatrix};

/// Device limit on sequential gate layers.
pub const DEPTH_LIMIT: usize = 39;

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit {
    pub circuit: Circuit,
    /// Sum of per-gate operator-norm errors; bounds `min_θ ‖U − e^{iθ}V‖`.
    pub synthesis_error: f64,
    pub depth: usize,
    /// CNOTs added by routing.
    pub routing_cnot_overhead: usize,
    /// Longest synthesized sequence admitted per single-qubit slot.
    pub length_cap: usize,
    /// Set when no length cap met the depth limit; the circuit is then the
    /// most accurate attempt.
    pub over_budget: bool,
}

/// Merges each maximal run of single-qubit gates on a qubit into one gate and
/// drops runs equal to the identity up to phase. Runs of a single gate are
/// kept as they are.
pub fn fuse(c: &Circuit) -> Circuit {
    let n = c.num_qubits();
    let mut pending: Vec<Vec<SingleQubitOp>> = vec![Vec::new(); n];
    let mut out = Circuit::new(n);
    let flush = |q: usize, run: &mut Vec<SingleQubitOp>, out: &mut Circuit| {
        let ops = std::mem::take(run);
        let m = sequence_matrix(&ops);
        if ops.is_empty() || distance_up_to_phase_2x2(&m, &Mat2::identity()) < 1e-12 {
            return;
        }
        let op = if ops.len() == 1 { ops.into_iter().next().unwrap() } else { SingleQubitOp::Unitary(m) };
        out.push(Gate::single(op, q)).expect("qubit from a valid circuit");
    };
    for g in c.gates() {
        match g {
            Gate::Single { op, qubit } => pending[*qubit].push(op.clone()),
            Gate::Cnot { control, target } => {
                flush(*control, &mut pending[*control], &mut out);
                flush(*target, &mut pending[*target], &mut out);
                out.push(g.clone()).expect("qubit from a valid circuit");
            }
        }
    }
    for (q, run) in pending.iter_mut().enumerate() {
        flush(q, run, &mut out);
    }
    out
}

/// Per-slot synthesis options: the table errors and, for runs already over
/// the gate set, the run itself.
struct Slot {
    qubit: usize,
    errors: Vec<f64>,
    exact: Option<Vec<SingleQubitOp>>,
}

fn choose(slot: &Slot, table: &[Candidate], eps: f64, cap: usize) -> (Vec<SingleQubitOp>, f64) {
    if let Some(run) = &slot.exact {
        if run.len() <= cap {
            return (run.clone(), 0.0);
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, cand) in table.iter().enumerate() {
        if cand.sequence.len() > cap {
            continue;
        }
        let e = slot.errors[i];
        if best.is_none_or(|(_, be)| e < be) {
            best = Some((i, e));
            if e <= eps {
                break;
            }
        }
    }
    let (i, e) = best.expect("the empty sequence is always in the table");
    (table[i].ops(), e)
}

/// Routes, fuses and synthesizes an arbitrary circuit, shrinking the
/// per-slot sequence length until the depth fits `depth_limit`.
pub fn compile_circuit(
    c: &Circuit,
    topo: &Topology,
    budget: &SynthesisBudget,
    depth_limit: Option<usize>,
) -> Result<CompiledCircuit> {
    budget.validate()?;
    let routed = route(c, topo)?;
    let overhead = routed.cnot_count() - c.cnot_count();
    let fused = fuse(&routed);
    let tab = table(budget.max_t_count, budget.max_total_length);

    let mut slots = Vec::new();
    for g in fused.gates() {
        if let Gate::Single { op, qubit } = g {
            let m = op.matrix();
            let exact = op.is_clifford_t().then(|| vec![op.clone()]);
            let errors = tab.iter().map(|cand| distance_up_to_phase_2x2(&m, &cand.matrix)).collect();
            slots.push(Slot { qubit: *qubit, errors, exact });
        }
    }

    let assemble = |cap: usize| -> (Circuit, f64) {
        let mut out = Circuit::new(c.num_qubits());
        let mut err = 0.0;
        let mut k = 0;
        for g in fused.gates() {
            match g {
                Gate::Cnot { .. } => out.push(g.clone()).expect("valid gate"),
                Gate::Single { .. } => {
                    let (ops, e) = choose(&slots[k], &tab, budget.target_epsilon, cap);
                    for op in ops {
                        out.push(Gate::single(op, slots[k].qubit)).expect("valid gate");
                    }
                    err += e;
                    k += 1;
                }
            }
        }
        (out, err)
    };

    let full_cap = budget.max_total_length;
    let (circuit, err) = assemble(full_cap);
    let d = depth(&circuit);
    let fits = |d: usize| depth_limit.is_none_or(|lim| d <= lim);
    if fits(d) {
        return Ok(CompiledCircuit {
            circuit,
            synthesis_error: err,
            depth: d,
            routing_cnot_overhead: overhead,
            length_cap: full_cap,
            over_budget: false,
        });
    }
    for cap in (0..full_cap).rev() {
        let (cand, e) = assemble(cap);
        let dc = depth(&cand);
        if fits(dc) {
            return Ok(CompiledCircuit {
                circuit: cand,
                synthesis_error: e,
                depth: dc,
                routing_cnot_overhead: overhead,
                length_cap: cap,
                over_budget: false,
            });
        }
    }
    Ok(CompiledCircuit {
        circuit,
        synthesis_error: err,
        depth: d,
        routing_cnot_overhead: overhead,
        length_cap: full_cap,
        over_budget: true,
    })
}

/// Compiles a two-qubit unitary under the device depth limit.
///
/// Eight-dimensional targets have no generic decomposition here; their
/// gate-level constructions go through [`compile_circuit`].
pub fn compile_full(u: &UnitaryMatrix, topo: &Topology, budget: &SynthesisBudget) -> Result<CompiledCircuit> {
    compile_unitary(u, topo, budget, Some(DEPTH_LIMIT))
}

/// [`compile_full`] with a caller-chosen depth limit.
pub fn compile_unitary(
    u: &UnitaryMatrix,
    topo: &Topology,
    budget: &SynthesisBudget,
    depth_limit: Option<usize>,
) -> Result<CompiledCircuit> {
    match u.dim() {
        4 => compile_circuit(&kak_decompose(u)?, topo, budget, depth_limit),
        8 => Err(Error::Unsupported("three-qubit unitaries are compiled from their gate-level construction".into())),
        d => Err(Error::DimensionMismatch { expected: 4, found: d }),
    }
}
