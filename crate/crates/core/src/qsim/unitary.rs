use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::circuit::Circuit;
use super::gate::Mat2;
use super::kernel;
use crate::error::{Error, Result};
use crate::tolerance;

/// A square unitary matrix of dimension `2^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<C64>);

impl UnitaryMatrix {
    /// Checks `‖U†U − I‖_F ≤ 1e-10`.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(m, tolerance::ALGEBRAIC)
    }

    pub fn with_tolerance(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if !m.nrows().is_power_of_two() {
            return Err(Error::InvalidParameter(format!("dimension {} is not a power of two", m.nrows())));
        }
        let u = UnitaryMatrix(m);
        let dev = u.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(u)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<C64>) -> Self {
        UnitaryMatrix(m)
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_mat2(m: &Mat2) -> Self {
        UnitaryMatrix(DMatrix::from_fn(2, 2, |i, j| m[(i, j)]))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        (self.0.adjoint() * &self.0 - DMatrix::<C64>::identity(n, n)).norm()
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        UnitaryMatrix(self.0.transpose())
    }

    pub fn kron(&self, other: &UnitaryMatrix) -> Self {
        UnitaryMatrix(self.0.kronecker(&other.0))
    }

    pub fn to_mat2(&self) -> Option<Mat2> {
        (self.dim() == 2).then(|| Mat2::new(self.0[(0, 0)], self.0[(0, 1)], self.0[(1, 0)], self.0[(1, 1)]))
    }

    /// `min_θ ‖self − e^{iθ} other‖` in operator norm.
    pub fn distance_up_to_phase(&self, other: &UnitaryMatrix) -> Result<f64> {
        distance_up_to_phase(self, other)
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for UnitaryMatrix {
    type Output = UnitaryMatrix;

    fn mul(self, rhs: UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(self.0 * rhs.0)
    }
}

/// Unitary of the whole circuit; the last gate in the list is the leftmost factor.
pub fn circuit_unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    let n = c.num_qubits();
    if n > tolerance::MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { requested: n, max: tolerance::MAX_DENSE_QUBITS });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::identity(dim, dim);
    for col in m.as_mut_slice().chunks_mut(dim) {
        for g in c.gates() {
            kernel::apply_gate(col, n, g);
        }
    }
    Ok(UnitaryMatrix(m))
}

/// Closed form for 2×2 unitaries. With `V†U ∝ [[a, −b̄], [b, ā]]` in SU(2)
/// and `α = atan2(√(Im a² + |b|²), |Re a|)`, the distance is `2 sin(α/2)`.
pub fn distance_up_to_phase_2x2(u: &Mat2, v: &Mat2) -> f64 {
    let w = v.adjoint() * u;
    let w = w / w.determinant().sqrt();
    let a = (w[(0, 0)] + w[(1, 1)].conj()) / 2.0;
    let b = (w[(1, 0)] - w[(0, 1)].conj()) / 2.0;
    let alpha = (a.im * a.im + b.norm_sqr()).sqrt().atan2(a.re.abs());
    2.0 * (alpha / 2.0).sin()
}

/// `min_θ ‖U − e^{iθ}V‖₂`.
///
/// The eigenphases of `V†U` are covered by the smallest arc of the unit
/// circle; the optimal phase sits at its centre and the distance is
/// `2 sin(arc/4)`. The returned value is the operator norm evaluated at that
/// phase. If the eigensolver does not converge, the phase of `tr(V†U)` is
/// used instead, which is exact whenever the distance is zero.
pub fn distance_up_to_phase(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    if u.dim() == 2 {
        let (a, b) = (u.to_mat2().unwrap(), v.to_mat2().unwrap());
        return Ok(distance_up_to_phase_2x2(&a, &b));
    }
    let w = v.0.adjoint() * &u.0;
    let norm_at = |theta: f64| {
        let shifted = &u.0 - &v.0 * C64::from_polar(1.0, theta);
        shifted.singular_values().iter().copied().fold(0.0, f64::max)
    };
    // the trace phase is exact when U and V agree up to phase
    let at_trace = norm_at(w.trace().arg());
    let Some(theta) = arc_centre(&w) else { return Ok(at_trace) };
    Ok(norm_at(theta).min(at_trace))
}

/// Centre of the smallest arc covering the eigenphases of `w`.
fn arc_centre(w: &DMatrix<C64>) -> Option<f64> {
    let mut phases = eigenphases(w)?;
    phases.sort_by(|a, b| a.total_cmp(b));
    let n = phases.len();
    // largest gap between consecutive phases (cyclically)
    let (mut gap, mut after) = (phases[0] + 2.0 * PI - phases[n - 1], phases[0]);
    for k in 1..n {
        let g = phases[k] - phases[k - 1];
        if g > gap {
            gap = g;
            after = phases[k];
        }
    }
    Some(after + (2.0 * PI - gap) / 2.0)
}

/// Eigenphases of a unitary. `(W + W†)/2` and `(W − W†)/2i` commute, so a
/// generic real combination of them is Hermitian with W's eigenvectors.
fn eigenphases(w: &DMatrix<C64>) -> Option<Vec<f64>> {
    let wa = w.adjoint();
    let herm = (w + &wa) * C64::new(0.5, 0.0);
    let anti = (w - &wa) * C64::new(0.0, -0.5);
    for r in [0.618_033_988_749_894_9, 1.37, 0.29] {
        let Some(eig) = SymmetricEigen::try_new(&herm + &anti * C64::new(r, 0.0), f64::EPSILON, 2_000) else {
            continue;
        };
        let v = eig.eigenvectors;
        let d = v.adjoint() * w * &v;
        let off = (0..d.nrows())
            .flat_map(|i| (0..d.ncols()).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        if off < 1e-9 {
            return Some((0..d.nrows()).map(|i| d[(i, i)].arg()).collect());
        }
    }
    None
}
