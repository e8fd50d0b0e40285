//! Named circuits available to every subcommand.

use std::f64::consts::PI;

use compressim::compile::{compile_unitary, depth, CompiledCircuit, SynthesisBudget, Topology, DEPTH_LIMIT};
use compressim::compressed::{
    build_a_circuit, build_ccphase, build_prep_circuit, build_step_circuit_2q, build_step_circuit_3q, build_w,
    CompressedSpec, Schedule,
};
use compressim::qsim::{Circuit, DensityMatrix, Pauli, PauliString, QuantumState};
use compressim::{Error, Result};

/// Number of points on the standard J grid.
pub const GRID_POINTS: usize = 12;

pub const NAMES: [&str; 5] = ["step2q", "step3q", "a-gate", "ccphase", "ising-j<k> (k = 1..12)"];

/// Full device circuit for one J value: state preparation followed by the
/// compiled evolution, measured as −⟨Y⟩ on `readout_qubit`.
#[derive(Debug, Clone)]
pub struct DeviceCircuit {
    pub j: f64,
    pub circuit: Circuit,
    /// The compiled evolution on the two data qubits alone.
    pub evolution: CompiledCircuit,
    pub readout_qubit: usize,
}

impl DeviceCircuit {
    /// Magnetization of the noiseless circuit.
    pub fn magnetization(&self) -> Result<f64> {
        let rho = DensityMatrix::zero(self.circuit.num_qubits())?.apply_circuit(&self.circuit)?;
        Ok(-rho.expectation(&self.readout_observable()?)?)
    }

    pub fn readout_observable(&self) -> Result<PauliString> {
        PauliString::single(self.circuit.num_qubits(), self.readout_qubit, Pauli::Y)
    }
}

/// Compiles the two-qubit evolution for `j` so that, with the preparation in
/// front, the whole circuit fits `depth_limit`.
pub fn device_circuit(
    spec: &CompressedSpec,
    j: f64,
    budget: &SynthesisBudget,
    depth_limit: Option<usize>,
) -> Result<DeviceCircuit> {
    if spec.m() != 2 {
        return Err(Error::Unsupported(format!(
            "compiled device circuits exist for n = 4 only (got n = {})",
            spec.n()
        )));
    }
    let prep = build_prep_circuit(2)?;
    let prep_depth = depth(&prep.circuit);
    let limit = depth_limit.map(|d| d.saturating_sub(prep_depth));
    let w = build_w(spec, j)?;
    let evolution = compile_unitary(&w, &Topology::new(2, 0)?, budget, limit)?;
    let mut circuit = prep.circuit.clone();
    circuit.extend_mapped(&evolution.circuit, &prep.data)?;
    Ok(DeviceCircuit { j, circuit, evolution, readout_qubit: *prep.data.last().expect("two data qubits") })
}

/// A resolved builtin.
#[derive(Debug, Clone)]
pub enum Builtin {
    Circuit(Circuit),
    Device(Box<DeviceCircuit>),
}

/// Step-circuit angles at the middle of the standard schedule.
fn mid_schedule() -> (f64, f64) {
    let s = Schedule::standard();
    (s.phi(s.steps() / 2), s.dt())
}

/// Resolves a builtin; `ising-j<k>` is compiled so the whole device circuit
/// fits `depth_limit`.
pub fn lookup(name: &str, budget: &SynthesisBudget, depth_limit: Option<usize>) -> Result<Builtin> {
    let (phi, dt) = mid_schedule();
    let c = match name {
        "step2q" => build_step_circuit_2q(phi, dt),
        "step3q" => build_step_circuit_3q(phi, dt),
        "a-gate" => build_a_circuit(),
        "ccphase" => build_ccphase(PI / 3.0),
        other => {
            let k = other
                .strip_prefix("ising-j")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=GRID_POINTS).contains(k))
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("unknown builtin {other:?}; known: {}", NAMES.join(", ")))
                })?;
            return Ok(Builtin::Device(Box::new(ising_with_limit(k, budget, depth_limit)?)));
        }
    };
    Ok(Builtin::Circuit(c))
}

/// Device circuit for grid point `k` (1-based) of the standard n = 4 sweep.
pub fn ising(k: usize, budget: &SynthesisBudget) -> Result<DeviceCircuit> {
    ising_with_limit(k, budget, Some(DEPTH_LIMIT))
}

pub fn ising_with_limit(k: usize, budget: &SynthesisBudget, depth_limit: Option<usize>) -> Result<DeviceCircuit> {
    if !(1..=GRID_POINTS).contains(&k) {
        return Err(Error::InvalidParameter(format!("grid point {k} outside 1..={GRID_POINTS}")));
    }
    let spec = CompressedSpec::new(4, Schedule::standard())?;
    let j = spec.schedule().grid(GRID_POINTS)[k - 1];
    device_circuit(&spec, j, budget, depth_limit)
}
