//! Single-qubit tomography by direct inversion and fidelity scoring.

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::{measured_prob_zero, run_noisy_from_zero, sample_expectation, stream_rng, NoiseModel, Shots};
use crate::qsim::{Circuit, DensityMatrix, Gate, Pauli, PauliString, QuantumState, StateVector};

/// Overlaps below this are reported as unphysical instead of clipped.
pub const OVERLAP_FLOOR: f64 = -1e-6;

/// Bloch vector from three Pauli expectations. No physicality projection is
/// applied, so the length may exceed 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEstimate {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub stderr: [f64; 3],
    /// Whether the components have been divided by η.
    pub rescaled: bool,
}

impl BlochEstimate {
    pub fn exact(x: f64, y: f64, z: f64) -> Self {
        BlochEstimate { x, y, z, stderr: [0.0; 3], rescaled: false }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn length(&self) -> f64 {
        self.components().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Divides every component by `eta`.
    pub fn rescale(&self, eta: f64) -> Result<BlochEstimate> {
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::NonPositiveEta(eta));
        }
        Ok(BlochEstimate {
            x: self.x / eta,
            y: self.y / eta,
            z: self.z / eta,
            stderr: self.stderr.map(|s| s / eta),
            rescaled: true,
        })
    }

    /// Bloch vector of the one-qubit reduced state of `rho`.
    pub fn of_state(rho: &DensityMatrix, qubit: usize) -> Result<BlochEstimate> {
        let r = rho.partial_trace(&[qubit])?;
        let e = r.entries();
        Ok(BlochEstimate::exact(2.0 * e[(1, 0)].re, 2.0 * e[(1, 0)].im, e[(0, 0)].re - e[(1, 1)].re))
    }

    /// Optional clipping to the Bloch ball; not applied anywhere by default.
    pub fn clipped_to_ball(&self) -> BlochEstimate {
        let len = self.length();
        if len <= 1.0 {
            return *self;
        }
        BlochEstimate { x: self.x / len, y: self.y / len, z: self.z / len, ..*self }
    }
}

/// Runs `preparation` under noise three times and measures X, Y and Z on `qubit`.
pub fn tomograph_qubit<R: Rng + ?Sized>(
    preparation: &Circuit,
    qubit: usize,
    shots: Shots,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<BlochEstimate> {
    let n = preparation.num_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange { qubit, num_qubits: n });
    }
    let rho = run_noisy_from_zero(preparation, noise)?;
    let mut vals = [0.0; 3];
    let mut errs = [0.0; 3];
    for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        let obs = PauliString::single(n, qubit, p)?;
        let r = sample_expectation(&rho, &obs, shots, noise, rng)?;
        vals[k] = r.estimate;
        errs[k] = r.stderr;
    }
    Ok(BlochEstimate { x: vals[0], y: vals[1], z: vals[2], stderr: errs, rescaled: false })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub fidelity: f64,
    /// `Tr(ρ_ideal ρ̂)` before clipping.
    pub overlap: f64,
    pub clipped: bool,
}

/// Bloch vector of `qubit` after the noiseless circuit on |0…0⟩.
pub fn ideal_bloch(ideal: &Circuit, qubit: usize) -> Result<BlochEstimate> {
    let psi = StateVector::zero(ideal.num_qubits())?.apply_circuit(ideal)?;
    BlochEstimate::of_state(&psi.to_density(), qubit)
}

/// `F = sqrt(Tr(ρ_ideal ρ̂))` with `ρ̂ = (1 + r·σ)/2`, the ideal state being
/// `qubit` after `ideal` on |0…0⟩.
pub fn fidelity(ideal: &Circuit, qubit: usize, estimate: &BlochEstimate) -> Result<FidelityReport> {
    fidelity_to(&ideal_bloch(ideal, qubit)?, estimate)
}

/// Same score against an explicit ideal Bloch vector.
pub fn fidelity_to(ideal: &BlochEstimate, estimate: &BlochEstimate) -> Result<FidelityReport> {
    let dot: f64 = ideal.components().iter().zip(estimate.components()).map(|(a, b)| a * b).sum();
    let overlap = (1.0 + dot) / 2.0;
    if overlap < OVERLAP_FLOOR {
        return Err(Error::UnphysicalEstimate { overlap });
    }
    let c = overlap.clamp(0.0, 1.0);
    Ok(FidelityReport { fidelity: c.sqrt(), overlap, clipped: c != overlap })
}

/// `η = p(0 | |0⟩ prepared) − p(0 | |1⟩ prepared)`, with |1⟩ made by a noisy X.
pub fn calibrate_eta<R: Rng + ?Sized>(noise: &NoiseModel, shots: Shots, rng: &mut R) -> Result<f64> {
    let mut p0 = [0.0; 2];
    for (k, prep) in [Circuit::new(1), Circuit::from_gates(1, vec![Gate::x(0)])?].iter().enumerate() {
        let rho = run_noisy_from_zero(prep, noise)?;
        let exact = measured_prob_zero(&rho, 0, noise)?;
        p0[k] = match shots {
            Shots::Analytic => exact,
            Shots::Finite(0) => return Err(Error::InvalidParameter("shots must be at least 1".into())),
            Shots::Finite(s) => {
                use rand_distr::{Binomial, Distribution};
                let b = Binomial::new(s, exact.clamp(0.0, 1.0))
                    .map_err(|e| Error::InvalidParameter(format!("binomial sampling: {e}")))?;
                b.sample(rng) as f64 / s as f64
            }
        };
    }
    let eta = p0[0] - p0[1];
    if eta <= 0.0 {
        return Err(Error::NonPositiveEta(eta));
    }
    Ok(eta)
}

/// One row of the single-gate fidelity table.
#[derive(Debug, Clone, PartialEq)]
pub struct TomoRow {
    pub gate: String,
    pub estimate: BlochEstimate,
    pub fidelity: FidelityReport,
}

/// Gate names in table order.
pub const TABLE_GATES: [&str; 7] = ["1", "H", "T", "S", "SDG", "X", "CNOT"];

/// Preparation circuit and tomographed qubit for a table row. CNOT is scored
/// on its target after acting on |00⟩.
pub fn table_preparation(gate: &str) -> Result<(Circuit, usize)> {
    let one = |g: Option<Gate>| Circuit::from_gates(1, g.into_iter().collect());
    let c = match gate.to_ascii_uppercase().as_str() {
        "1" | "I" | "ID" => one(None)?,
        "H" => one(Some(Gate::h(0)))?,
        "T" => one(Some(Gate::t(0)))?,
        "S" => one(Some(Gate::s(0)))?,
        "SDG" | "S†" => one(Some(Gate::sdg(0)))?,
        "X" => one(Some(Gate::x(0)))?,
        "Y" => one(Some(Gate::y(0)))?,
        "Z" => one(Some(Gate::z(0)))?,
        "TDG" | "T†" => one(Some(Gate::tdg(0)))?,
        "CNOT" | "CX" => return Ok((Circuit::from_gates(2, vec![Gate::cnot(0, 1)])?, 1)),
        other => return Err(Error::InvalidParameter(format!("unknown gate {other:?}"))),
    };
    Ok((c, 0))
}

/// Tomography and fidelity for one gate. `eta` rescales the estimate first.
pub fn tomo_row<R: Rng + ?Sized>(
    gate: &str,
    noise: &NoiseModel,
    shots: Shots,
    eta: Option<f64>,
    rng: &mut R,
) -> Result<TomoRow> {
    let (prep, q) = table_preparation(gate)?;
    let mut estimate = tomograph_qubit(&prep, q, shots, noise, rng)?;
    if let Some(eta) = eta {
        estimate = estimate.rescale(eta)?;
    }
    let fidelity = fidelity(&prep, q, &estimate)?;
    Ok(TomoRow { gate: gate.to_string(), estimate, fidelity })
}

/// The seven-gate table. Row `i` draws from stream `i` of the noise seed.
pub fn table1(noise: &NoiseModel, shots: Shots, rescale: bool) -> Result<Vec<TomoRow>> {
    let eta = if rescale {
        let mut rng = stream_rng(noise.seed, TABLE_GATES.len() as u64);
        Some(calibrate_eta(noise, shots, &mut rng)?)
    } else {
        None
    };
    TABLE_GATES
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut rng = stream_rng(noise.seed, i as u64);
            tomo_row(g, noise, shots, eta, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact(c: &Circuit) -> BlochEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        tomograph_qubit(c, 0, Shots::Analytic, &NoiseModel::noiseless(0), &mut rng).unwrap()
    }

    #[test]
    fn cardinal_states() {
        let close =
            |b: BlochEstimate, want: [f64; 3]| b.components().iter().zip(want).all(|(a, w)| (a - w).abs() < 1e-12);
        assert!(close(exact(&Circuit::from_gates(1, vec![Gate::h(0)]).unwrap()), [1.0, 0.0, 0.0]));
        assert!(close(exact(&Circuit::new(1)), [0.0, 0.0, 1.0]));
        assert!(close(exact(&Circuit::from_gates(1, vec![Gate::h(0), Gate::s(0)]).unwrap()), [0.0, 1.0, 0.0]));
    }

    #[test]
    fn mixed_estimate_against_identity() {
        let r = fidelity(&Circuit::new(1), 0, &BlochEstimate::exact(0.0, 0.0, 0.0)).unwrap();
        assert!((r.fidelity - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn overlong_vectors_are_clipped_or_rejected() {
        let r = fidelity_to(&BlochEstimate::exact(0.0, 0.0, 1.0), &BlochEstimate::exact(0.0, 0.0, 1.1)).unwrap();
        assert!(r.clipped && r.fidelity == 1.0 && r.overlap > 1.0);
        let bad = fidelity_to(&BlochEstimate::exact(0.0, 0.0, 1.0), &BlochEstimate::exact(0.0, 0.0, -1.2));
        assert!(matches!(bad, Err(Error::UnphysicalEstimate { .. })));
    }

    #[test]
    fn eta_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(calibrate_eta(&NoiseModel::noiseless(0), Shots::Analytic, &mut rng).unwrap(), 1.0);
        let sym = NoiseModel::new(0.0, 0.0, 0.024, 0.024, 0).unwrap();
        let eta = calibrate_eta(&sym, Shots::Analytic, &mut rng).unwrap();
        assert!((eta - 0.952).abs() < 1e-12);
        let asym = NoiseModel::new(0.0, 0.0, 0.02, 0.03, 0).unwrap();
        assert!((calibrate_eta(&asym, Shots::Analytic, &mut rng).unwrap() - 0.95).abs() < 1e-12);
        let bad = NoiseModel::new(0.0, 0.0, 0.6, 0.6, 0).unwrap();
        assert!(matches!(calibrate_eta(&bad, Shots::Analytic, &mut rng), Err(Error::NonPositiveEta(_))));
    }

    #[test]
    fn noiseless_table_is_perfect() {
        for row in table1(&NoiseModel::noiseless(3), Shots::Analytic, false).unwrap() {
            assert!((row.fidelity.fidelity - 1.0).abs() < 1e-12, "{}", row.gate);
        }
    }
}
