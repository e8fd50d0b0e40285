//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;

use compressim::compile::{compile_full, route, SynthesisBudget, Topology, DEPTH_LIMIT};
use compressim::compressed::*;
use compressim::noise::{measured_expectation, run_noisy_from_zero, NoiseModel, Shots};
use compressim::oracle::{exact_ground_magnetization, full_chain_trotter, IsingChainSpec, Observable};
use compressim::qsim::{circuit_unitary, Circuit, Gate, Pauli, PauliString, UnitaryMatrix};
use compressim::tomo::{table1, table_preparation, TABLE_GATES};
use compressim::validate::{evaluate_validating_set, generate_validating_set, ValidatingSpec};
use compressim_cli::builtins::{device_circuit, ising};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// Pinned tolerances.
const TROTTER_MATCH: f64 = 1e-8;
const ADIABATIC_GAP: f64 = 0.02;
const IDENTITY_TOL: f64 = 1e-9;
const RECONSTRUCT_SLACK: f64 = 1e-9;
const FIDELITY_EXACT: f64 = 1e-12;
const FIDELITY_BAND: (f64, f64) = (0.94, 1.0);
const SIGMAS: f64 = 5.0;
const VALIDATION_BAND: (f64, f64) = (0.06, 0.24);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn noise_config(name: &str) -> NoiseModel {
    std::fs::read_to_string(workspace().join("configs").join(name)).unwrap().parse().unwrap()
}

fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let d = DMatrix::from_diagonal(&r.diagonal().map(|z| z / z.norm()));
    UnitaryMatrix::new(q * d).unwrap()
}

fn compression_correctness() -> Verdict {
    let sched = Schedule::new(2.0, 24, 0.1).unwrap();
    let mut worst: f64 = 0.0;
    for n in [4, 8] {
        let spec = CompressedSpec::new(n, sched).unwrap();
        for j in sched.grid(12) {
            let m = magnetization(&spec, j).unwrap().magnetization;
            let full = full_chain_trotter(n, &sched, j, Observable::SiteAveraged).unwrap();
            worst = worst.max((m - full).abs());
        }
    }
    verdict(
        worst <= TROTTER_MATCH,
        format!("max |compressed - full-chain Trotter| = {worst:.2e} (tol {TROTTER_MATCH:.0e})"),
    )
}

fn adiabatic_reproduction() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in [4, 8] {
        let spec = CompressedSpec::new(n, Schedule::standard()).unwrap();
        for j in spec.schedule().grid(12) {
            let m = magnetization(&spec, j).unwrap().magnetization;
            let exact =
                exact_ground_magnetization(&IsingChainSpec::new(n, j).unwrap(), Observable::SiteAveraged).unwrap();
            worst = worst.max((m - exact).abs());
        }
    }
    verdict(
        worst <= ADIABATIC_GAP,
        format!("max |compressed - ground state| = {worst:.4} over n = 4, 8 (tol {ADIABATIC_GAP})"),
    )
}

fn circuit_identities() -> Verdict {
    let s = Schedule::standard();
    let mut worst: f64 = 0.0;
    let mut shape_ok = true;
    for l in [1, 600, 1200, 2400] {
        let (phi, dt) = (s.phi(l), s.dt());
        let c = build_step_circuit_2q(phi, dt);
        shape_ok &= c.depth() == 18;
        worst = worst.max(circuit_distance(&c, &step_unitary(2, phi, dt).unwrap()).unwrap());
        worst = worst.max(circuit_distance(&build_ccphase(phi), &build_ud(3, phi).unwrap()).unwrap());
        let rlt = build_rl(3, phi).unwrap().transpose();
        worst = worst.max(circuit_distance(&build_rl_transpose_circuit_3q(phi), &rlt).unwrap());
    }
    worst = worst.max(circuit_distance(&build_a_circuit(), &a_matrix()).unwrap());
    for m in [2, 3] {
        let got = build_prep_circuit(m).unwrap().prepared_state().unwrap();
        let want = build_rho_in(m).unwrap();
        worst = worst.max((got.entries() - want.entries()).norm());
    }
    verdict(
        worst <= IDENTITY_TOL && shape_ok,
        format!("max distance = {worst:.2e} (tol {IDENTITY_TOL:.0e}); step depth 18: {shape_ok}"),
    )
}

fn compiler_round_trip() -> Verdict {
    let topo = Topology::new(2, 0).unwrap();
    let budget = SynthesisBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2016);
    let mut failures = 0;
    let mut routed_ok = true;
    let mut worst_margin = f64::NEG_INFINITY;
    for _ in 0..100 {
        let u = haar_unitary(4, &mut rng);
        let out = compile_full(&u, &topo, &budget).unwrap();
        let err = u.distance_up_to_phase(&circuit_unitary(&out.circuit).unwrap()).unwrap();
        let margin = err - out.synthesis_error;
        worst_margin = worst_margin.max(margin);
        if margin > RECONSTRUCT_SLACK {
            failures += 1;
        }
        routed_ok &= topo.admits(&out.circuit);
    }
    let swap = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]).unwrap();
    let swap_out = compile_full(&circuit_unitary(&swap).unwrap(), &topo, &budget).unwrap();
    let swap_ok = swap_out.circuit.cnot_count() == 3;
    let three = Circuit::from_gates(3, vec![Gate::cnot(1, 2), Gate::cnot(0, 2), Gate::cnot(2, 1)]).unwrap();
    let star3 = Topology::new(3, 0).unwrap();
    routed_ok &= star3.admits(&route(&three, &star3).unwrap());
    verdict(
        failures == 0 && swap_ok && routed_ok,
        format!(
            "{failures}/100 outside bound (worst err - bound = {worst_margin:.2e}); SWAP CNOTs = {}; routing targets ok: {routed_ok}",
            swap_out.circuit.cnot_count()
        ),
    )
}

fn compiled_sweep_gap() -> Verdict {
    let spec = CompressedSpec::new(4, Schedule::standard()).unwrap();
    let budget = SynthesisBudget::default();
    let mut violations = 0;
    let mut depth_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for j in spec.schedule().grid(12) {
        let d = device_circuit(&spec, j, &budget, Some(DEPTH_LIMIT)).unwrap();
        depth_ok &= !d.evolution.over_budget && d.circuit.depth() <= DEPTH_LIMIT;
        let ideal = magnetization(&spec, j).unwrap().magnetization;
        let gap = (d.magnetization().unwrap() - ideal).abs();
        worst_ratio = worst_ratio.max(gap / d.evolution.synthesis_error.max(f64::MIN_POSITIVE));
        if gap > d.evolution.synthesis_error {
            violations += 1;
        }
    }
    verdict(
        violations == 0 && depth_ok,
        format!("{violations}/12 points with |M_compiled - M| > synthesis_error (worst ratio {worst_ratio:.3}); depth <= {DEPTH_LIMIT}: {depth_ok}"),
    )
}

fn tomography() -> Verdict {
    let clean = table1(&NoiseModel::noiseless(0), Shots::Analytic, false).unwrap();
    let exact_ok = clean.iter().all(|r| (r.fidelity.fidelity - 1.0).abs() <= FIDELITY_EXACT);
    let default = noise_config("default.cfg");
    let sampled = table1(&default, Shots::Finite(8192), false).unwrap();
    let fids: Vec<f64> = sampled.iter().map(|r| r.fidelity.fidelity).collect();
    let band_ok = fids.iter().all(|f| (FIDELITY_BAND.0..=FIDELITY_BAND.1).contains(f));
    let mut worst_sigma: f64 = 0.0;
    for (row, gate) in sampled.iter().zip(TABLE_GATES) {
        let (prep, q) = table_preparation(gate).unwrap();
        let rho = run_noisy_from_zero(&prep, &default).unwrap();
        for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
            let obs = PauliString::single(prep.num_qubits(), q, p).unwrap();
            let exact = measured_expectation(&rho, &obs, &default).unwrap();
            let sigma = ((1.0 - exact * exact) / 8192.0).sqrt();
            let got = row.estimate.components()[k];
            worst_sigma = worst_sigma.max((got - exact).abs() / sigma);
        }
    }
    let fid_text: Vec<String> = TABLE_GATES.iter().zip(&fids).map(|(g, f)| format!("{g} {f:.4}")).collect();
    verdict(
        exact_ok && band_ok && worst_sigma <= SIGMAS,
        format!(
            "noiseless F = 1: {exact_ok}; default F [{}]; worst deviation {worst_sigma:.2} sigma (tol {SIGMAS})",
            fid_text.join(", ")
        ),
    )
}

fn validation_set(seed: u64) -> Vec<Circuit> {
    let budget = SynthesisBudget::default();
    let mut all = Vec::new();
    for (i, k) in [2, 3].into_iter().enumerate() {
        let d = ising(k, &budget).unwrap();
        let spec = ValidatingSpec::new(d.circuit, 10, d.readout_qubit, seed.wrapping_add(i as u64)).unwrap();
        all.extend(generate_validating_set(&spec).unwrap());
    }
    all
}

fn validation_protocol() -> Verdict {
    let set = validation_set(0);
    let clean = evaluate_validating_set(&set, &NoiseModel::noiseless(0), Shots::Analytic, 1).unwrap();
    let clean_ok = clean.mean_error == 0.0;
    let calib = noise_config("calibration.cfg");
    let mut means = Vec::new();
    for seed in 0..5u64 {
        let set = validation_set(seed * 2);
        let r = evaluate_validating_set(&set, &calib.with_seed(calib.seed + seed), Shots::Finite(8192), 1).unwrap();
        means.push(r.mean_error);
    }
    let band_ok = means.iter().all(|m| (VALIDATION_BAND.0..=VALIDATION_BAND.1).contains(m));
    let text: Vec<String> = means.iter().map(|m| format!("{m:.4}")).collect();
    verdict(
        clean_ok && band_ok && set.len() == 20,
        format!(
            "noiseless mean e = {}; calibration mean e over 5 seeds [{}] (band {:?})",
            clean.mean_error,
            text.join(", "),
            VALIDATION_BAND
        ),
    )
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_compressim"))
        .args(args)
        .current_dir(workspace())
        .env_remove("COMPRESSIM_NOISE")
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn determinism() -> Verdict {
    let invocations: [&[&str]; 6] = [
        &["sweep", "--n", "4", "--L", "240", "--points", "4", "--mode", "exact-matrix"],
        &["sweep", "--n", "4", "--points", "3", "--mode", "noisy-shots", "--noise", "configs/calibration.cfg"],
        &["compile", "--builtin", "ising-j4"],
        &["compile", "--builtin", "a-gate", "--no-depth-limit"],
        &[
            "validate",
            "--builtin",
            "ising-j2",
            "--builtin",
            "ising-j3",
            "--count",
            "10",
            "--noise",
            "configs/calibration.cfg",
        ],
        &["tomo", "--all", "--noise", "configs/default.cfg", "--shots", "8192"],
    ];
    let mut mismatched = Vec::new();
    let mut failed = Vec::new();
    for args in invocations {
        let (a, ca) = run_cli(args);
        let (b, cb) = run_cli(args);
        if ca != 0 || cb != 0 || a.is_empty() {
            failed.push(args[0]);
        }
        if a != b {
            mismatched.push(args[0]);
        }
    }
    verdict(
        mismatched.is_empty() && failed.is_empty(),
        format!("{} invocations run twice; differing: {mismatched:?}; failed: {failed:?}", invocations.len()),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 8] = [
        ("compression correctness", compression_correctness),
        ("adiabatic reproduction", adiabatic_reproduction),
        ("circuit identities", circuit_identities),
        ("compiler round trip", compiler_round_trip),
        ("compiled sweep gap", compiled_sweep_gap),
        ("tomography and fidelity", tomography),
        ("validation protocol", validation_protocol),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all &= v.pass;
        println!("criterion {}: {} {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
