use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Paulis, one letter per qubit (qubit 0 first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { ops }
    }

    /// `p` on qubit `q`, identity elsewhere.
    pub fn single(num_qubits: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
        }
        let mut ops = vec![Pauli::I; num_qubits];
        ops[q] = p;
        Ok(PauliString { ops })
    }

    pub fn num_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub(crate) fn check_width(&self, num_qubits: usize) -> Result<()> {
        if self.ops.len() != num_qubits {
            return Err(Error::DimensionMismatch { expected: num_qubits, found: self.ops.len() });
        }
        Ok(())
    }

    /// Image of basis state `j`: `P|j⟩ = phase · |index⟩`.
    pub(crate) fn act_on_basis(&self, j: usize) -> (usize, C64) {
        let n = self.ops.len();
        let mut idx = j;
        let mut phase = C64::new(1.0, 0.0);
        for (q, p) in self.ops.iter().enumerate() {
            let shift = n - 1 - q;
            let b = (j >> shift) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => idx ^= 1 << shift,
                Pauli::Y => {
                    idx ^= 1 << shift;
                    phase *= if b == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                }
                Pauli::Z => {
                    if b == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        (idx, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter(format!("not a Pauli letter: {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::InvalidParameter("empty Pauli string".into()));
        }
        Ok(PauliString { ops })
    }
}
