use super::gate::Gate;
use crate::error::{Error, Result};

/// Ordered gate list over a fixed register. Gates apply in list order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, which must act on the same register size.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Embeds `other` by mapping its qubit `i` to `map[i]` in this register.
    pub fn extend_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: other.num_qubits, found: map.len() });
        }
        for g in &other.gates {
            self.push(g.remap(map))?;
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of T and T† gates.
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_t_like()).count()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// ASAP layer count; see [`crate::compile::depth`].
    pub fn depth(&self) -> usize {
        crate::compile::depth(self)
    }

    /// The inverse circuit (reversed order, each gate inverted).
    pub fn inverse(&self) -> Circuit {
        Circuit { num_qubits: self.num_qubits, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    pub fn is_clifford_t(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c =
            Circuit::from_gates(2, vec![Gate::h(0), Gate::t(1), Gate::cnot(0, 1), Gate::tdg(0), Gate::s(1)]).unwrap();
        assert_eq!(c.t_count(), 2);
        assert_eq!(c.cnot_count(), 1);
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::x(2)).is_err());
        assert!(c.push(Gate::cnot(0, 0)).is_err());
        assert!(c.is_empty());
    }
}
