use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::circuit::Circuit;
use super::gate::Gate;
use super::kernel;
use super::pauli::PauliString;
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};
use crate::tolerance;

/// Operations shared by pure and mixed states.
pub trait QuantumState: Sized + Clone {
    fn num_qubits(&self) -> usize;

    fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()>;

    /// `Tr(ρ P)`, reported as an exact real number.
    fn expectation(&self, observable: &PauliString) -> Result<f64>;

    fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_mut(gate)?;
        Ok(out)
    }

    fn apply_circuit(&self, circuit: &Circuit) -> Result<Self> {
        if circuit.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: circuit.num_qubits() });
        }
        let mut out = self.clone();
        for g in circuit.gates() {
            out.apply_gate_mut(g)?;
        }
        Ok(out)
    }
}

fn check_qubits(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::InvalidParameter("a register needs at least one qubit".into()));
    }
    if num_qubits > tolerance::MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { requested: num_qubits, max: tolerance::MAX_DENSE_QUBITS });
    }
    Ok(())
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("dimension {dim} is not a power of two ≥ 2")));
    }
    let n = dim.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    num_qubits: usize,
}

impl StateVector {
    /// |0…0⟩.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} ≥ {dim}")));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector { amplitudes, num_qubits })
    }

    /// Wraps amplitudes; the vector must be normalized.
    pub fn from_amplitudes(amplitudes: DVector<C64>) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tolerance::ALGEBRAIC {
            return Err(Error::InvalidParameter(format!("state norm {norm} ≠ 1")));
        }
        Ok(StateVector { amplitudes, num_qubits })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { entries: m, num_qubits: self.num_qubits }
    }

    /// Probability that `qubit` reads 0 in the computational basis.
    pub fn prob_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| kernel::bit(*i, self.num_qubits, qubit) == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        kernel::apply_gate(self.amplitudes.as_mut_slice(), self.num_qubits, gate);
        Ok(())
    }

    fn expectation(&self, observable: &PauliString) -> Result<f64> {
        observable.check_width(self.num_qubits)?;
        let mut acc = C64::new(0.0, 0.0);
        for (j, a) in self.amplitudes.iter().enumerate() {
            let (k, phase) = observable.act_on_basis(j);
            acc += self.amplitudes[k].conj() * phase * a;
        }
        Ok(acc.re)
    }
}

/// A density operator. Constructed states satisfy Hermiticity, unit trace and
/// positivity; unitary evolution keeps them.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    num_qubits: usize,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let num_qubits = qubits_for_dim(entries.nrows())?;
        let rho = DensityMatrix { entries, num_qubits };
        rho.check_physical()?;
        Ok(rho)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let entries = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Ok(DensityMatrix { entries, num_qubits })
    }

    pub fn zero(num_qubits: usize) -> Result<Self> {
        Ok(StateVector::zero(num_qubits)?.to_density())
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    /// Ascending eigenvalues of the Hermitian part, computed through the real
    /// embedding `[[A, −B], [B, A]]` of `A + iB`, whose spectrum is that of
    /// `ρ` with every value doubled.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let d = self.dim();
        let real = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
            let z = herm[(i % d, j % d)];
            match (i < d, j < d) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let mut ev: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev.into_iter().step_by(2).collect()
    }

    pub fn check_physical(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > tolerance::ALGEBRAIC {
            return Err(Error::InvalidParameter(format!("density matrix not Hermitian ({herm:.2e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tolerance::ALGEBRAIC {
            return Err(Error::InvalidParameter(format!("density matrix trace {tr} ≠ 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -tolerance::STRUCTURAL {
            return Err(Error::InvalidParameter(format!("density matrix has eigenvalue {min}")));
        }
        Ok(())
    }

    /// Applies `U · ρ · U†` for the gate's unitary.
    fn conjugate_by(&mut self, gate: &Gate) {
        let n = self.num_qubits;
        let dim = self.dim();
        for col in self.entries.as_mut_slice().chunks_mut(dim) {
            kernel::apply_gate(col, n, gate);
        }
        self.entries.adjoint_mut();
        for col in self.entries.as_mut_slice().chunks_mut(dim) {
            kernel::apply_gate(col, n, gate);
        }
        self.entries.adjoint_mut();
    }

    /// Reduced state on `keep` (returned in ascending qubit order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.num_qubits;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&q) = kept.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let compose = |k: usize, t: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in kept.iter().enumerate() {
                let b = (k >> (kept.len() - 1 - pos)) & 1;
                idx |= b << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let b = (t >> (traced.len() - 1 - pos)) & 1;
                idx |= b << (n - 1 - q);
            }
            idx
        };
        let kd = 1usize << kept.len();
        let td = 1usize << traced.len();
        let mut out = DMatrix::zeros(kd, kd);
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.entries[(compose(i, t), compose(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix { entries: out, num_qubits: kept.len() })
    }

    /// Probability that `qubit` reads 0 in the computational basis.
    pub fn prob_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok((0..self.dim())
            .filter(|&i| kernel::bit(i, self.num_qubits, qubit) == 0)
            .map(|i| self.entries[(i, i)].re)
            .sum())
    }

    /// `U ρ U†` for a dense unitary of matching dimension.
    pub fn evolve(&self, u: &UnitaryMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        let m = u.matrix();
        Ok(DensityMatrix { entries: m * &self.entries * m.adjoint(), num_qubits: self.num_qubits })
    }

    pub(crate) fn entries_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.entries
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn kron(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.num_qubits + other.num_qubits;
        check_qubits(n)?;
        Ok(DensityMatrix { entries: self.entries.kronecker(&other.entries), num_qubits: n })
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.conjugate_by(gate);
        Ok(())
    }

    fn expectation(&self, observable: &PauliString) -> Result<f64> {
        observable.check_width(self.num_qubits)?;
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.dim() {
            let (k, phase) = observable.act_on_basis(j);
            acc += phase * self.entries[(j, k)];
        }
        Ok(acc.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::pauli::Pauli;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn x_flips_zero() {
        let s = StateVector::zero(1).unwrap().apply_gate(&Gate::x(0)).unwrap();
        assert!((s.amplitudes()[1] - c(1.0)).norm() < 1e-15);
        assert!(s.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn hadamard_makes_plus() {
        let s = StateVector::zero(1).unwrap().apply_gate(&Gate::h(0)).unwrap();
        for a in s.amplitudes().iter() {
            assert!((a - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_is_invariant() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        for g in [Gate::h(0), Gate::t(0), Gate::roty(0, 0.4), Gate::y(0)] {
            let out = rho.apply_gate(&g).unwrap();
            assert!((out.entries() - rho.entries()).norm() < 1e-15);
        }
    }

    #[test]
    fn y_eigenstate_expectations() {
        // S H |0⟩ = |+y⟩
        let s = StateVector::zero(1).unwrap().apply_gate(&Gate::h(0)).unwrap().apply_gate(&Gate::s(0)).unwrap();
        let y = PauliString::single(1, 0, Pauli::Y).unwrap();
        assert!((s.expectation(&y).unwrap() - 1.0).abs() < 1e-12);
        let zero = StateVector::zero(1).unwrap();
        assert!(zero.expectation(&y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bell_partial_trace_is_mixed() {
        let bell = StateVector::zero(2)
            .unwrap()
            .apply_gate(&Gate::h(0))
            .unwrap()
            .apply_gate(&Gate::cnot(0, 1))
            .unwrap()
            .to_density();
        let red = bell.partial_trace(&[0]).unwrap();
        let half = DMatrix::identity(2, 2) * c(0.5);
        assert!((red.entries() - half).norm() < 1e-15);
    }

    #[test]
    fn product_partial_trace_keeps_factor() {
        let s = StateVector::basis(2, 0b01).unwrap().to_density();
        let first = s.partial_trace(&[0]).unwrap();
        assert!((first.entries()[(0, 0)] - c(1.0)).norm() < 1e-15);
        let second = s.partial_trace(&[1]).unwrap();
        assert!((second.entries()[(1, 1)] - c(1.0)).norm() < 1e-15);
        assert_eq!(s.partial_trace(&[]), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn out_of_range_gate_is_an_error() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(s.apply_gate(&Gate::h(2)), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn density_validation() {
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(DensityMatrix::new(bad).is_err());
        let good = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.25), c(0.75)]));
        assert!(DensityMatrix::new(good).is_ok());
    }
}
