//! Compressed simulation of the open transverse-field Ising chain.
//!
//! An `n = 2^m` site chain is evolved on `m` qubits. Basis states are
//! labelled `|1⟩ … |2^m⟩` with `|k⟩ = ⊗|kᵢ⟩`, `k = 1 + Σ kᵢ 2^{m−i}`; in
//! code the 0-based index `k − 1` is used and qubit 0 is the most significant
//! bit. The spin-up readout qubit is the last one.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qsim::{circuit_unitary, Circuit, DensityMatrix, Gate, Pauli, PauliString, QuantumState, UnitaryMatrix};
use crate::tolerance;

/// Discretization of the adiabatic ramp `J_l = (l/L)·j_max`, `φ_l = 2·J_l·Δt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    j_max: f64,
    steps: usize,
    dt: f64,
}

impl Schedule {
    /// `j_max = 0` is accepted as a degenerate ramp on which only `J = 0`
    /// can be evaluated.
    pub fn new(j_max: f64, steps: usize, dt: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("schedule needs L ≥ 1".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if !(j_max >= 0.0 && j_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("j_max must be non-negative, got {j_max}")));
        }
        Ok(Schedule { j_max, steps, dt })
    }

    /// `j_max = 2`, `L = 2400`, `Δt = 0.1`.
    pub fn standard() -> Self {
        Schedule { j_max: 2.0, steps: 2400, dt: 0.1 }
    }

    pub fn j_max(&self) -> f64 {
        self.j_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn coupling(&self, l: usize) -> f64 {
        l as f64 / self.steps as f64 * self.j_max
    }

    pub fn phi(&self, l: usize) -> f64 {
        2.0 * self.coupling(l) * self.dt
    }

    /// `L(J) = round(L·J/j_max)`.
    pub fn steps_for(&self, j: f64) -> Result<usize> {
        let slack = 1e-12 * self.j_max.max(1.0);
        if !(j >= -slack && j <= self.j_max + slack) {
            return Err(Error::InvalidParameter(format!("J = {j} outside [0, {}]", self.j_max)));
        }
        if self.j_max == 0.0 {
            return Ok(0);
        }
        Ok(((self.steps as f64 * j / self.j_max).round() as usize).min(self.steps))
    }

    /// `J_i = i·j_max/points` for `i = 1..=points`.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        (1..=points).map(|i| i as f64 * self.j_max / points as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressedSpec {
    n: usize,
    m: usize,
    schedule: Schedule,
}

impl CompressedSpec {
    pub fn new(n: usize, schedule: Schedule) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("chain length {n} must be a power of two ≥ 4")));
        }
        let m = n.trailing_zeros() as usize;
        if m > tolerance::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { requested: m, max: tolerance::MAX_DENSE_QUBITS });
        }
        Ok(CompressedSpec { n, m, schedule })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationPoint {
    pub j: f64,
    pub magnetization: f64,
    pub steps_used: usize,
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("compressed register needs m ≥ 2, got {m}")));
    }
    if m > tolerance::MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { requested: m, max: tolerance::MAX_DENSE_QUBITS });
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `ρ_in = 2^{1−m} 1 ⊗ |+y⟩⟨+y|`.
pub fn build_rho_in(m: usize) -> Result<DensityMatrix> {
    check_m(m)?;
    let mixed = DensityMatrix::maximally_mixed(m - 1)?;
    let plus_y = DMatrix::from_row_slice(2, 2, &[real(0.5), C64::new(0.0, -0.5), C64::new(0.0, 0.5), real(0.5)]);
    mixed.kron(&DensityMatrix::new(plus_y)?)
}

/// The readout observable `1 ⊗ Y` on the last qubit.
pub fn readout_observable(m: usize) -> Result<PauliString> {
    PauliString::single(m, m - 1, Pauli::Y)
}

/// `R₀ = 1 ⊗ e^{i·2Δt·Y}`.
pub fn build_r0(m: usize, dt: f64) -> Result<UnitaryMatrix> {
    check_m(m)?;
    let (s, c) = (2.0 * dt).sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[real(c), real(s), real(-s), real(c)]);
    let dim = 1usize << (m - 1);
    Ok(UnitaryMatrix::from_matrix_unchecked(DMatrix::identity(dim, dim).kronecker(&rot)))
}

/// `R_l = (1 − cos φ)(|1⟩⟨1| + |N⟩⟨N|) + cos φ·1 + sin φ·Σ_{k=1}^{N/2−1}(|2k+1⟩⟨2k| − h.c.)`
/// with `N = 2^m`, so the end states are fixed and the interior pairs
/// `(|2k⟩, |2k+1⟩)` rotate.
pub fn build_rl(m: usize, phi: f64) -> Result<UnitaryMatrix> {
    check_m(m)?;
    let dim = 1usize << m;
    let (s, c) = phi.sin_cos();
    let mut r = DMatrix::<C64>::identity(dim, dim) * real(c);
    r[(0, 0)] = real(1.0);
    r[(dim - 1, dim - 1)] = real(1.0);
    for k in 1..dim / 2 {
        // 1-based |2k+1⟩⟨2k| is 0-based (2k, 2k−1)
        r[(2 * k, 2 * k - 1)] += real(s);
        r[(2 * k - 1, 2 * k)] -= real(s);
    }
    Ok(UnitaryMatrix::from_matrix_unchecked(r))
}

/// `U_d = 1 + (e^{iφ} − 1)|N⟩⟨N|`.
pub fn build_ud(m: usize, phi: f64) -> Result<UnitaryMatrix> {
    check_m(m)?;
    let dim = 1usize << m;
    let mut u = DMatrix::<C64>::identity(dim, dim);
    u[(dim - 1, dim - 1)] = C64::from_polar(1.0, phi);
    Ok(UnitaryMatrix::from_matrix_unchecked(u))
}

/// One adiabatic step `U_d · R_lᵀ · R₀ᵀ`.
pub fn step_unitary(m: usize, phi: f64, dt: f64) -> Result<UnitaryMatrix> {
    let ud = build_ud(m, phi)?;
    let rl = build_rl(m, phi)?.transpose();
    let r0 = build_r0(m, dt)?.transpose();
    Ok(&(&ud * &rl) * &r0)
}

/// `W(J) = Π_{l=1}^{L(J)} U_d R_lᵀ R₀ᵀ`, step `l = 1` applied first.
pub fn build_w(spec: &CompressedSpec, j: f64) -> Result<UnitaryMatrix> {
    let sched = spec.schedule();
    let steps = sched.steps_for(j)?;
    let r0t = build_r0(spec.m, sched.dt())?.transpose();
    let mut w = UnitaryMatrix::identity(1 << spec.m);
    for l in 1..=steps {
        let phi = sched.phi(l);
        let step = &(&build_ud(spec.m, phi)? * &build_rl(spec.m, phi)?.transpose()) * &r0t;
        w = &step * &w;
    }
    Ok(w)
}

/// `M(J) = −Tr(W ρ_in W† · 1⊗Y)`.
pub fn magnetization(spec: &CompressedSpec, j: f64) -> Result<MagnetizationPoint> {
    let w = build_w(spec, j)?;
    let rho = build_rho_in(spec.m)?.evolve(&w)?;
    let y = rho.expectation(&readout_observable(spec.m)?)?;
    Ok(MagnetizationPoint { j, magnetization: -y, steps_used: spec.schedule.steps_for(j)? })
}

/// Magnetization read out from an arbitrary evolution operator on the compressed register.
pub fn magnetization_of(w: &UnitaryMatrix) -> Result<f64> {
    let m = w.num_qubits();
    let rho = build_rho_in(m)?.evolve(w)?;
    Ok(-rho.expectation(&readout_observable(m)?)?)
}

pub fn sweep(spec: &CompressedSpec, js: &[f64]) -> Result<Vec<MagnetizationPoint>> {
    js.iter().map(|&j| magnetization(spec, j)).collect()
}

/// `A = |8⟩⟨1| + Σ_{k=1}^{7}|k⟩⟨k+1|`: the cyclic shift `|j⟩ → |j−1 mod 8⟩` (0-based).
pub fn a_matrix() -> UnitaryMatrix {
    let mut a = DMatrix::<C64>::zeros(8, 8);
    for j in 0..8 {
        a[((j + 7) % 8, j)] = real(1.0);
    }
    UnitaryMatrix::from_matrix_unchecked(a)
}

/// Which step a circuit builder emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepForm {
    /// `U_d · R_lᵀ · R₀ᵀ`, as used by the evolution.
    #[default]
    Transposed,
    /// `U_d · R_l · R₀`.
    Untransposed,
}

/// One adiabatic step on two qubits: depth 18, six CNOTs, all with target qubit 0.
pub fn build_step_circuit_2q(phi: f64, dt: f64) -> Circuit {
    build_step_circuit_2q_form(phi, dt, StepForm::Transposed)
}

pub fn build_step_circuit_2q_form(phi: f64, dt: f64, form: StepForm) -> Circuit {
    // R_l and R₀ are real rotations, so transposing them flips their angles.
    let (phi_r, dt_r) = match form {
        StepForm::Transposed => (phi, dt),
        StepForm::Untransposed => (-phi, -dt),
    };
    let gates = vec![
        // R₀ᵀ = e^{−i·2Δt·Y} on qubit 1
        Gate::sdg(1),
        Gate::h(1),
        Gate::phase(1, 4.0 * dt_r),
        Gate::h(1),
        Gate::s(1),
        // R_lᵀ: rotation in the {|01⟩, |10⟩} block
        Gate::cnot(1, 0),
        Gate::sdg(1),
        Gate::h(1),
        Gate::cnot(1, 0),
        Gate::phase(1, phi_r),
        Gate::phase(0, -phi_r),
        Gate::cnot(1, 0),
        Gate::h(1),
        Gate::s(1),
        Gate::cnot(1, 0),
        // U_d = controlled phase
        Gate::phase(1, phi / 2.0),
        Gate::phase(0, phi / 2.0),
        Gate::cnot(1, 0),
        Gate::phase(0, -phi / 2.0),
        Gate::cnot(1, 0),
    ];
    Circuit::from_gates(2, gates).expect("static two-qubit layout")
}

/// A state-preparation circuit together with its qubit roles.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepCircuit {
    pub circuit: Circuit,
    /// Register qubits carrying ρ_in, in order.
    pub data: Vec<usize>,
    /// Auxiliary qubits traced out afterwards.
    pub ancillas: Vec<usize>,
}

impl PrepCircuit {
    /// Runs the circuit on |0…0⟩ and discards the ancillas.
    pub fn prepared_state(&self) -> Result<DensityMatrix> {
        let rho = DensityMatrix::zero(self.circuit.num_qubits())?.apply_circuit(&self.circuit)?;
        rho.partial_trace(&self.data)
    }
}

/// Prepares ρ_in from |0…0⟩ using `m − 1` ancillas. Every CNOT targets qubit 0.
pub fn build_prep_circuit(m: usize) -> Result<PrepCircuit> {
    let gates = match m {
        2 => vec![Gate::h(1), Gate::s(1), Gate::h(2), Gate::cnot(2, 0)],
        // data 0, 1, 2 with |+y⟩ on 2; ancillas 3 and 4
        3 => vec![
            Gate::h(1),
            Gate::h(3),
            Gate::h(4),
            Gate::h(2),
            Gate::s(2),
            Gate::cnot(1, 0),
            Gate::cnot(3, 0),
            Gate::h(0),
            Gate::cnot(4, 0),
        ],
        _ => return Err(Error::Unsupported(format!("preparation circuit for m = {m}"))),
    };
    Ok(PrepCircuit {
        circuit: Circuit::from_gates(2 * m - 1, gates)?,
        data: (0..m).collect(),
        ancillas: (m..2 * m - 1).collect(),
    })
}

/// Toffoli with controls `a`, `b` and target `c` over Clifford+T (7 T gates, 6 CNOTs).
pub fn toffoli(a: usize, b: usize, c: usize) -> Vec<Gate> {
    vec![
        Gate::h(c),
        Gate::cnot(b, c),
        Gate::tdg(c),
        Gate::cnot(a, c),
        Gate::t(c),
        Gate::cnot(b, c),
        Gate::tdg(c),
        Gate::cnot(a, c),
        Gate::t(b),
        Gate::t(c),
        Gate::h(c),
        Gate::cnot(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cnot(a, b),
    ]
}

/// The shift `A` as `X₂`, then `CNOT(2→1)`, then a Toffoli onto qubit 0.
pub fn build_a_circuit() -> Circuit {
    let mut gates = vec![Gate::x(2), Gate::cnot(2, 1)];
    gates.extend(toffoli(1, 2, 0));
    Circuit::from_gates(3, gates).expect("static three-qubit layout")
}

fn controlled_phase(control: usize, target: usize, phi: f64) -> Vec<Gate> {
    vec![
        Gate::phase(control, phi / 2.0),
        Gate::phase(target, phi / 2.0),
        Gate::cnot(control, target),
        Gate::phase(target, -phi / 2.0),
        Gate::cnot(control, target),
    ]
}

/// `Λ₁,₂P₃(φ)`: phase `e^{iφ}` on |111⟩ only.
pub fn build_ccphase(phi: f64) -> Circuit {
    let mut gates = controlled_phase(1, 2, phi / 2.0);
    gates.push(Gate::cnot(0, 1));
    gates.extend(controlled_phase(1, 2, -phi / 2.0));
    gates.push(Gate::cnot(0, 1));
    gates.extend(controlled_phase(0, 2, phi / 2.0));
    Circuit::from_gates(3, gates).expect("static three-qubit layout")
}

/// Doubly controlled `e^{iθY}` on qubit 2.
fn cc_roty(theta: f64) -> Vec<Gate> {
    let mut gates = vec![Gate::roty(2, theta / 2.0)];
    gates.extend(toffoli(0, 1, 2));
    gates.push(Gate::roty(2, -theta / 2.0));
    gates.extend(toffoli(0, 1, 2));
    gates
}

/// `R_lᵀ` on three qubits: `A`, then `Λ₁,₂Oᵀ(φ)`, then `O(φ)₃`, then `A†`,
/// with `O(φ) = e^{iφY}`.
pub fn build_rl_transpose_circuit_3q(phi: f64) -> Circuit {
    let a = build_a_circuit();
    let mut c = a.clone();
    c.extend(&Circuit::from_gates(3, cc_roty(-phi)).expect("static layout")).expect("same width");
    c.push(Gate::roty(2, phi)).expect("qubit in range");
    c.extend(&a.inverse()).expect("same width");
    c
}

/// One step `U_d · R_lᵀ · R₀ᵀ` on three qubits.
pub fn build_step_circuit_3q(phi: f64, dt: f64) -> Circuit {
    let mut c = Circuit::from_gates(3, vec![Gate::roty(2, -2.0 * dt)]).expect("qubit in range");
    c.extend(&build_rl_transpose_circuit_3q(phi)).expect("same width");
    c.extend(&build_ccphase(phi)).expect("same width");
    c
}

/// Gate-level step for `m ∈ {2, 3}`.
pub fn build_step_circuit(m: usize, phi: f64, dt: f64) -> Result<Circuit> {
    match m {
        2 => Ok(build_step_circuit_2q(phi, dt)),
        3 => Ok(build_step_circuit_3q(phi, dt)),
        _ => Err(Error::Unsupported(format!("step circuit for m = {m}"))),
    }
}

/// `W(J)` assembled from gate-level steps.
pub fn build_w_circuit(spec: &CompressedSpec, j: f64) -> Result<Circuit> {
    let sched = spec.schedule();
    let mut c = Circuit::new(spec.m);
    for l in 1..=sched.steps_for(j)? {
        c.extend(&build_step_circuit(spec.m, sched.phi(l), sched.dt())?)?;
    }
    Ok(c)
}

/// Convenience for circuit-versus-matrix checks.
pub fn circuit_distance(c: &Circuit, target: &UnitaryMatrix) -> Result<f64> {
    circuit_unitary(c)?.distance_up_to_phase(target)
}
