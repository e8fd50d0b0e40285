//! Depolarizing gate noise, classical readout flips and shot sampling.
//!
//! The noise shape is illustrative: depolarizing after each gate on the
//! qubits it touches, and independent bit flips at readout.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::qsim::{Circuit, DensityMatrix, Gate, Pauli, PauliString, QuantumState};

/// Default shot cap per experiment.
pub const MAX_SHOTS: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub p_depol_1q: f64,
    pub p_depol_2q: f64,
    pub readout_flip_0to1: f64,
    pub readout_flip_1to0: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless(0)
    }
}

impl NoiseModel {
    pub fn new(
        p_depol_1q: f64,
        p_depol_2q: f64,
        readout_flip_0to1: f64,
        readout_flip_1to0: f64,
        seed: u64,
    ) -> Result<Self> {
        let m = NoiseModel { p_depol_1q, p_depol_2q, readout_flip_0to1, readout_flip_1to0, seed };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless(seed: u64) -> Self {
        NoiseModel { p_depol_1q: 0.0, p_depol_2q: 0.0, readout_flip_0to1: 0.0, readout_flip_1to0: 0.0, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        NoiseModel { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in self.probabilities() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    fn probabilities(&self) -> [(&'static str, f64); 4] {
        [
            ("p_depol_1q", self.p_depol_1q),
            ("p_depol_2q", self.p_depol_2q),
            ("readout_flip_0to1", self.readout_flip_0to1),
            ("readout_flip_1to0", self.readout_flip_1to0),
        ]
    }

    pub fn is_noiseless(&self) -> bool {
        self.probabilities().iter().all(|(_, p)| *p == 0.0)
    }

    /// Probability that a bit which is `b` is read as `1 − b`.
    fn flip(&self, b: usize) -> f64 {
        if b == 0 {
            self.readout_flip_0to1
        } else {
            self.readout_flip_1to0
        }
    }
}

/// Flat `key = value` format; `#` starts a comment.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut vals: [Option<f64>; 4] = [None; 4];
        let mut seed = None;
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            let slot = match k {
                "p_depol_1q" => 0,
                "p_depol_2q" => 1,
                "readout_flip_0to1" => 2,
                "readout_flip_1to0" => 3,
                "seed" => {
                    seed = Some(v.parse::<u64>().map_err(|e| err(format!("seed: {e}")))?);
                    continue;
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            };
            vals[slot] = Some(v.parse::<f64>().map_err(|e| err(format!("{k}: {e}")))?);
        }
        let get = |i: usize, name: &str| {
            vals[i].ok_or_else(|| Error::Parse { line: 0, message: format!("missing key {name}") })
        };
        NoiseModel::new(
            get(0, "p_depol_1q")?,
            get(1, "p_depol_2q")?,
            get(2, "readout_flip_0to1")?,
            get(3, "readout_flip_1to0")?,
            seed.ok_or_else(|| Error::Parse { line: 0, message: "missing key seed".into() })?,
        )
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.probabilities() {
            writeln!(f, "{k} = {v}")?;
        }
        writeln!(f, "seed = {}", self.seed)
    }
}

/// Number of measurement repetitions; `Analytic` uses exact probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Analytic,
    Finite(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotResult {
    pub observable: PauliString,
    /// 0 for analytic evaluation.
    pub shots: u64,
    pub estimate: f64,
    pub stderr: f64,
}

/// Independent generator for experiment number `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `ρ → (1−p)ρ + p·(1/2^k ⊗ Tr_qs ρ)` on the listed qubits.
fn depolarize(rho: &mut DensityMatrix, qubits: &[usize], p: f64) {
    if p == 0.0 {
        return;
    }
    let n = rho.num_qubits();
    let masks: Vec<usize> = qubits.iter().map(|&q| 1 << (n - 1 - q)).collect();
    let mask: usize = masks.iter().sum();
    let sub = 1usize << qubits.len();
    let spread = |base: usize, k: usize| -> usize {
        masks.iter().enumerate().fold(base, |acc, (pos, &m)| if (k >> pos) & 1 == 1 { acc | m } else { acc })
    };
    let e = rho.entries_mut();
    let dim = e.nrows();
    let mut out = e.clone() * C64::new(1.0 - p, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            if (i & mask) != (j & mask) {
                continue;
            }
            let (bi, bj) = (i & !mask, j & !mask);
            let avg: C64 = (0..sub).map(|k| e[(spread(bi, k), spread(bj, k))]).sum::<C64>() / sub as f64;
            out[(i, j)] += avg * p;
        }
    }
    *e = out;
}

/// Applies one gate followed by its depolarizing channel.
pub fn apply_noisy_gate(rho: &mut DensityMatrix, gate: &Gate, noise: &NoiseModel) -> Result<()> {
    rho.apply_gate_mut(gate)?;
    let p = if gate.is_cnot() { noise.p_depol_2q } else { noise.p_depol_1q };
    depolarize(rho, &gate.qubits(), p);
    Ok(())
}

/// Runs a circuit from `initial` with gate noise.
pub fn run_noisy(circuit: &Circuit, initial: &DensityMatrix, noise: &NoiseModel) -> Result<DensityMatrix> {
    if circuit.num_qubits() != initial.num_qubits() {
        return Err(Error::DimensionMismatch { expected: initial.num_qubits(), found: circuit.num_qubits() });
    }
    let mut rho = initial.clone();
    for g in circuit.gates() {
        apply_noisy_gate(&mut rho, g, noise)?;
    }
    Ok(rho)
}

/// Runs a circuit from |0…0⟩ with gate noise.
pub fn run_noisy_from_zero(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    run_noisy(circuit, &DensityMatrix::zero(circuit.num_qubits())?, noise)
}

/// Rotations taking each Pauli's eigenbasis to the computational basis:
/// `H` for X, `S†` then `H` for Y.
pub fn basis_change(observable: &PauliString) -> Vec<Gate> {
    let mut gates = Vec::new();
    for (q, p) in observable.ops().iter().enumerate() {
        match p {
            Pauli::X => gates.push(Gate::h(q)),
            Pauli::Y => gates.extend([Gate::sdg(q), Gate::h(q)]),
            Pauli::Z | Pauli::I => {}
        }
    }
    gates
}

/// Noisy expectation of `observable` including basis-change gates and
/// readout flips, with infinitely many shots.
pub fn measured_expectation(rho: &DensityMatrix, observable: &PauliString, noise: &NoiseModel) -> Result<f64> {
    let n = rho.num_qubits();
    if observable.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: observable.num_qubits() });
    }
    let mut r = rho.clone();
    for g in basis_change(observable) {
        apply_noisy_gate(&mut r, &g, noise)?;
    }
    let measured: Vec<usize> = (0..n).filter(|&q| observable.ops()[q] != Pauli::I).collect();
    let e = r.entries();
    let mut acc = 0.0;
    for i in 0..r.dim() {
        let mut v = e[(i, i)].re;
        for &q in &measured {
            let b = (i >> (n - 1 - q)) & 1;
            // E[(−1)^{measured bit}] for true bit b
            let sign = if b == 0 { 1.0 } else { -1.0 };
            v *= sign * (1.0 - 2.0 * noise.flip(b));
        }
        acc += v;
    }
    Ok(acc.clamp(-1.0, 1.0))
}

/// Draws `shots` ±1 outcomes with the noisy expectation.
pub fn sample_expectation<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    observable: &PauliString,
    shots: Shots,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<ShotResult> {
    let exact = measured_expectation(rho, observable, noise)?;
    let shots = match shots {
        Shots::Analytic => {
            return Ok(ShotResult { observable: observable.clone(), shots: 0, estimate: exact, stderr: 0.0 })
        }
        Shots::Finite(0) => return Err(Error::InvalidParameter("shots must be at least 1".into())),
        Shots::Finite(s) => s,
    };
    let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let plus = Binomial::new(shots, p_plus)
        .map_err(|e| Error::InvalidParameter(format!("binomial sampling: {e}")))?
        .sample(rng);
    let estimate = 2.0 * plus as f64 / shots as f64 - 1.0;
    let stderr = ((1.0 - estimate * estimate) / shots as f64).sqrt();
    Ok(ShotResult { observable: observable.clone(), shots, estimate, stderr })
}

/// Probability of reading 0 on `qubit`, including readout flips.
pub fn measured_prob_zero(rho: &DensityMatrix, qubit: usize, noise: &NoiseModel) -> Result<f64> {
    let p0 = rho.prob_zero(qubit)?;
    Ok(p0 * (1.0 - noise.readout_flip_0to1) + (1.0 - p0) * noise.readout_flip_1to0)
}
