use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerance;

pub type Mat2 = Matrix2<C64>;

/// Single-qubit operation kinds.
///
/// `Phase` is `diag(1, e^{iφ})` and `RotY` is `e^{iθY}`; both, together with
/// `Unitary`, only appear before Clifford+T synthesis.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleQubitOp {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Phase(f64),
    RotY(f64),
    Unitary(Mat2),
}

impl SingleQubitOp {
    /// The six non-T Clifford+T single-qubit gates, in canonical order.
    pub const CLIFFORDS: [SingleQubitOp; 6] =
        [SingleQubitOp::X, SingleQubitOp::Y, SingleQubitOp::Z, SingleQubitOp::H, SingleQubitOp::S, SingleQubitOp::Sdg];

    pub fn matrix(&self) -> Mat2 {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            SingleQubitOp::X => Mat2::new(z, o, o, z),
            SingleQubitOp::Y => Mat2::new(z, -i, i, z),
            SingleQubitOp::Z => Mat2::new(o, z, z, -o),
            SingleQubitOp::H => Mat2::new(h, h, h, -h),
            SingleQubitOp::S => Mat2::new(o, z, z, i),
            SingleQubitOp::Sdg => Mat2::new(o, z, z, -i),
            SingleQubitOp::T => Mat2::new(o, z, z, C64::from_polar(1.0, FRAC_PI_4)),
            SingleQubitOp::Tdg => Mat2::new(o, z, z, C64::from_polar(1.0, -FRAC_PI_4)),
            SingleQubitOp::Phase(phi) => Mat2::new(o, z, z, C64::from_polar(1.0, *phi)),
            SingleQubitOp::RotY(theta) => {
                let (s, c) = theta.sin_cos();
                Mat2::new(c.into(), s.into(), (-s).into(), c.into())
            }
            SingleQubitOp::Unitary(m) => *m,
        }
    }

    pub fn inverse(&self) -> SingleQubitOp {
        match self {
            SingleQubitOp::S => SingleQubitOp::Sdg,
            SingleQubitOp::Sdg => SingleQubitOp::S,
            SingleQubitOp::T => SingleQubitOp::Tdg,
            SingleQubitOp::Tdg => SingleQubitOp::T,
            SingleQubitOp::Phase(phi) => SingleQubitOp::Phase(-phi),
            SingleQubitOp::RotY(theta) => SingleQubitOp::RotY(-theta),
            SingleQubitOp::Unitary(m) => SingleQubitOp::Unitary(m.adjoint()),
            other => other.clone(),
        }
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, SingleQubitOp::T | SingleQubitOp::Tdg)
    }

    /// Member of the hardware alphabet {X, Y, Z, H, S, S†, T, T†}.
    pub fn is_clifford_t(&self) -> bool {
        !matches!(self, SingleQubitOp::Phase(_) | SingleQubitOp::RotY(_) | SingleQubitOp::Unitary(_))
    }

    pub fn is_parametric(&self) -> bool {
        !self.is_clifford_t()
    }

    /// Mnemonic used by the textual circuit format.
    pub fn name(&self) -> &'static str {
        match self {
            SingleQubitOp::X => "X",
            SingleQubitOp::Y => "Y",
            SingleQubitOp::Z => "Z",
            SingleQubitOp::H => "H",
            SingleQubitOp::S => "S",
            SingleQubitOp::Sdg => "SDG",
            SingleQubitOp::T => "T",
            SingleQubitOp::Tdg => "TDG",
            SingleQubitOp::Phase(_) => "PHASE",
            SingleQubitOp::RotY(_) => "ROTY",
            SingleQubitOp::Unitary(_) => "U",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single { op: SingleQubitOp, qubit: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn single(op: SingleQubitOp, qubit: usize) -> Self {
        Gate::Single { op, qubit }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn x(q: usize) -> Self {
        Self::single(SingleQubitOp::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::single(SingleQubitOp::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(SingleQubitOp::Z, q)
    }
    pub fn h(q: usize) -> Self {
        Self::single(SingleQubitOp::H, q)
    }
    pub fn s(q: usize) -> Self {
        Self::single(SingleQubitOp::S, q)
    }
    pub fn sdg(q: usize) -> Self {
        Self::single(SingleQubitOp::Sdg, q)
    }
    pub fn t(q: usize) -> Self {
        Self::single(SingleQubitOp::T, q)
    }
    pub fn tdg(q: usize) -> Self {
        Self::single(SingleQubitOp::Tdg, q)
    }
    pub fn phase(q: usize, phi: f64) -> Self {
        Self::single(SingleQubitOp::Phase(phi), q)
    }
    pub fn roty(q: usize, theta: f64) -> Self {
        Self::single(SingleQubitOp::RotY(theta), q)
    }

    /// Arbitrary single-qubit unitary; rejects non-unitary input.
    pub fn unitary(q: usize, m: Mat2) -> Result<Self> {
        let dev = (m.adjoint() * m - Mat2::identity()).norm();
        if dev > tolerance::ALGEBRAIC {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self::single(SingleQubitOp::Unitary(m), q))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { qubit, .. } => vec![*qubit],
            Gate::Cnot { control, target } => vec![*control, *target],
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        if let Gate::Cnot { control, target } = self {
            if control == target {
                return Err(Error::ControlEqualsTarget(*control));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Single { op, qubit } => Gate::Single { op: op.inverse(), qubit: *qubit },
            cx => cx.clone(),
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, Gate::Single { op, .. } if op.is_t_like())
    }

    pub fn is_clifford_t(&self) -> bool {
        match self {
            Gate::Single { op, .. } => op.is_clifford_t(),
            Gate::Cnot { .. } => true,
        }
    }

    /// Same gate acting on relabelled qubits.
    pub fn remap(&self, map: &[usize]) -> Gate {
        match self {
            Gate::Single { op, qubit } => Gate::Single { op: op.clone(), qubit: map[*qubit] },
            Gate::Cnot { control, target } => Gate::Cnot { control: map[*control], target: map[*target] },
        }
    }
}
