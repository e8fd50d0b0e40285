//! Validating circuits: same shape as a circuit of interest, with every
//! Clifford slot redrawn at random so the ideal output stays computable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::noise::{measured_expectation, run_noisy_from_zero, sample_expectation, stream_rng, NoiseModel, Shots};
use crate::qsim::{Circuit, Gate, Pauli, PauliString, SingleQubitOp};

const CLIFFORDS: [SingleQubitOp; 6] = SingleQubitOp::CLIFFORDS;

/// Replacement keeps every gate in its slot, so T-count, CNOT count, gate
/// count and depth all match the base.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatingSpec {
    pub base: Circuit,
    pub count: usize,
    pub measured_qubit: usize,
    pub seed: u64,
}

impl ValidatingSpec {
    pub fn new(base: Circuit, count: usize, measured_qubit: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        if measured_qubit >= base.num_qubits() {
            return Err(Error::QubitOutOfRange { qubit: measured_qubit, num_qubits: base.num_qubits() });
        }
        Ok(ValidatingSpec { base, count, measured_qubit, seed })
    }
}

fn replaceable(g: &Gate) -> Result<bool> {
    match g {
        Gate::Cnot { .. } => Ok(false),
        Gate::Single { op, .. } if op.is_t_like() => Ok(false),
        Gate::Single { op, .. } if op.is_clifford_t() => Ok(true),
        Gate::Single { op, .. } => {
            Err(Error::InvalidParameter(format!("{} is not in the gate set; compile the base first", op.name())))
        }
    }
}

/// Draws `count` variants of the base circuit.
pub fn generate_validating_set(spec: &ValidatingSpec) -> Result<Vec<Circuit>> {
    let slots: Vec<bool> = spec.base.gates().iter().map(replaceable).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let gates = spec
            .base
            .gates()
            .iter()
            .zip(&slots)
            .map(|(g, &swap)| match g {
                Gate::Single { qubit, .. } if swap => {
                    Gate::single(CLIFFORDS[rng.random_range(0..CLIFFORDS.len())].clone(), *qubit)
                }
                _ => g.clone(),
            })
            .collect();
        out.push(Circuit::from_gates(spec.base.num_qubits(), gates)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub circuit_id: usize,
    pub y_ideal: f64,
    pub y_measured: f64,
    pub stderr: f64,
    pub e: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatingReport {
    pub rows: Vec<ValidationRow>,
    pub mean_error: f64,
    pub max_error: f64,
}

impl ValidatingReport {
    pub fn from_rows(rows: Vec<ValidationRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("a report needs at least one circuit".into()));
        }
        let mean_error = rows.iter().map(|r| r.e).sum::<f64>() / rows.len() as f64;
        let max_error = rows.iter().map(|r| r.e).fold(0.0, f64::max);
        Ok(ValidatingReport { rows, mean_error, max_error })
    }

    pub fn per_circuit_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.e).collect()
    }
}

/// Ideal and noisy ⟨Y⟩ on `measured_qubit` for circuit number `id`, which
/// samples from stream `id` of the noise seed.
pub fn evaluate_circuit(
    id: usize,
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: Shots,
    measured_qubit: usize,
) -> Result<ValidationRow> {
    let n = circuit.num_qubits();
    let obs = PauliString::single(n, measured_qubit, Pauli::Y)?;
    // same evaluation path with noise off, so noiseless runs agree bit for bit
    let clean = NoiseModel::noiseless(noise.seed);
    let y_ideal = measured_expectation(&run_noisy_from_zero(circuit, &clean)?, &obs, &clean)?;
    let rho = run_noisy_from_zero(circuit, noise)?;
    let mut rng = stream_rng(noise.seed, id as u64);
    let r = sample_expectation(&rho, &obs, shots, noise, &mut rng)?;
    Ok(ValidationRow {
        circuit_id: id,
        y_ideal,
        y_measured: r.estimate,
        stderr: r.stderr,
        e: (r.estimate - y_ideal).abs(),
    })
}

pub fn evaluate_validating_set(
    circuits: &[Circuit],
    noise: &NoiseModel,
    shots: Shots,
    measured_qubit: usize,
) -> Result<ValidatingReport> {
    let rows = circuits
        .iter()
        .enumerate()
        .map(|(i, c)| evaluate_circuit(i, c, noise, shots, measured_qubit))
        .collect::<Result<Vec<_>>>()?;
    ValidatingReport::from_rows(rows)
}

/// Per-circuit errors measured on the device, for reference only.
pub mod fixture {
    /// First base circuit, ten variants.
    pub const SET_A: [f64; 10] = [0.038, 0.076, 0.030, 0.130, 0.066, 0.166, 0.270, 0.128, 0.260, 0.000];
    /// Second base circuit, ten variants.
    pub const SET_B: [f64; 10] = [0.034, 0.202, 0.070, 0.152, 0.216, 0.076, 0.078, 0.248, 0.144, 0.056];
    pub const REPORTED_MEAN: f64 = 0.122;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_to_replace() {
        let base = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        let set = generate_validating_set(&ValidatingSpec::new(base.clone(), 5, 0, 1).unwrap()).unwrap();
        assert_eq!(set.len(), 5);
        assert!(set.iter().all(|c| *c == base));
    }

    #[test]
    fn parametric_base_is_rejected() {
        let base = Circuit::from_gates(1, vec![Gate::roty(0, 0.2)]).unwrap();
        assert!(generate_validating_set(&ValidatingSpec::new(base, 1, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn zero_count_is_rejected() {
        assert!(ValidatingSpec::new(Circuit::new(1), 0, 0, 0).is_err());
    }

    #[test]
    fn fixture_mean_matches_reported() {
        let all: Vec<f64> = fixture::SET_A.iter().chain(&fixture::SET_B).copied().collect();
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        assert!((mean - fixture::REPORTED_MEAN).abs() < 5e-4);
    }
}
