//! Subcommand implementations. Each one validates its whole request before
//! computing anything and writes its data output in one piece.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde_json::json;

use compressim::compile::{compile_circuit, depth, CompiledCircuit, SynthesisBudget, Topology};
use compressim::compressed::{magnetization, CompressedSpec, Schedule};
use compressim::format::{parse_circuit, write_circuit};
use compressim::noise::{run_noisy_from_zero, sample_expectation, stream_rng, NoiseModel, Shots, MAX_SHOTS};
use compressim::oracle::{exact_ground_magnetization, IsingChainSpec, Observable};
use compressim::qsim::Circuit;
use compressim::tomo::{calibrate_eta, table1, tomo_row, TomoRow, TABLE_GATES};
use compressim::validate::{evaluate_circuit, generate_validating_set, ValidatingReport, ValidatingSpec};
use compressim::Error;

use crate::builtins::{device_circuit, lookup, Builtin};

/// Environment variable naming the default noise config.
pub const NOISE_ENV: &str = "COMPRESSIM_NOISE";

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Computation(String),
    Constraint(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
            Failure::Constraint(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Computation(m) | Failure::Constraint(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::Parse { .. }
            | Error::Unsupported(_)
            | Error::QubitOutOfRange { .. }
            | Error::ControlEqualsTarget(_)
            | Error::TooManyQubits { .. } => Failure::Usage(e.to_string()),
            Error::InfeasibleBudget => Failure::Constraint(e.to_string()),
            _ => Failure::Computation(e.to_string()),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_t_count: usize,
    pub target_epsilon: f64,
    pub max_total_length: usize,
}

impl Budget {
    fn resolve(&self) -> Outcome<SynthesisBudget> {
        let b = SynthesisBudget {
            max_t_count: self.max_t_count,
            target_epsilon: self.target_epsilon,
            max_total_length: self.max_total_length,
        };
        b.validate()?;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseArg {
    /// Config path or `off`.
    pub source: Option<String>,
    pub shots: u64,
    pub analytic: bool,
}

impl NoiseArg {
    fn model(&self) -> Outcome<Option<NoiseModel>> {
        match self.source.as_deref() {
            None => Ok(None),
            Some("off") => Ok(Some(NoiseModel::noiseless(0))),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?;
                let m = text.parse::<NoiseModel>().map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
                Ok(Some(m))
            }
        }
    }

    fn shots(&self) -> Outcome<Shots> {
        if self.analytic {
            return Ok(Shots::Analytic);
        }
        if self.shots == 0 || self.shots > MAX_SHOTS {
            return Err(Failure::Usage(format!("--shots must be in 1..={MAX_SHOTS}")));
        }
        Ok(Shots::Finite(self.shots))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub timestamp: bool,
}

impl Output {
    fn emit(&self, body: &[u8]) -> Outcome {
        let mut data = Vec::new();
        if self.timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            data.extend(format!("# generated at unix time {secs}\n").bytes());
        }
        data.extend_from_slice(body);
        match &self.path {
            Some(p) => fs::write(p, &data).map_err(|e| Failure::Computation(format!("writing {}: {e}", p.display()))),
            None => std::io::stdout().write_all(&data).map_err(|e| Failure::Computation(format!("stdout: {e}"))),
        }
    }
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Outcome<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Computation(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::Computation(format!("csv: {e}")))
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    ExactMatrix,
    CompiledCircuit,
    NoisyShots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub n: usize,
    pub steps: usize,
    pub dt: f64,
    pub j_max: f64,
    pub points: usize,
    pub mode: SweepMode,
    pub budget: Budget,
    pub noise: NoiseArg,
    pub out: Output,
}

/// Magnetization per grid point, with columns added for each mode run.
pub fn sweep(req: &SweepRequest) -> Outcome {
    if req.n != 4 && req.n != 8 {
        return Err(Failure::Usage(format!("--n must be 4 or 8, got {}", req.n)));
    }
    if req.points == 0 {
        return Err(Failure::Usage("--points must be at least 1".into()));
    }
    let spec = CompressedSpec::new(req.n, Schedule::new(req.j_max, req.steps, req.dt)?)?;
    let compiled = req.mode != SweepMode::ExactMatrix;
    let noisy = req.mode == SweepMode::NoisyShots;
    if compiled && req.n != 4 {
        return Err(Failure::Usage("compiled and noisy modes need --n 4".into()));
    }
    let budget = req.budget.resolve()?;
    let (noise, shots) = if noisy {
        let m = req.noise.model()?.ok_or_else(|| {
            Failure::Usage(format!("noisy-shots mode needs --noise (or {NOISE_ENV}); use `off` for none"))
        })?;
        (m, req.noise.shots()?)
    } else {
        (NoiseModel::noiseless(0), Shots::Analytic)
    };

    let grid = spec.schedule().grid(req.points);
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &j)| -> Outcome<Vec<String>> {
            let exact = exact_ground_magnetization(&IsingChainSpec::new(req.n, j)?, Observable::SiteAveraged)?;
            let m = magnetization(&spec, j)?;
            let mut row = vec![num(j), num(exact), num(m.magnetization)];
            if compiled {
                let dc = device_circuit(&spec, j, &budget, Some(compressim::compile::DEPTH_LIMIT))?;
                row.push(num(dc.magnetization()?));
                row.push(num(dc.evolution.synthesis_error));
                if noisy {
                    let rho = run_noisy_from_zero(&dc.circuit, &noise)?;
                    let mut rng = stream_rng(noise.seed, i as u64);
                    let r = sample_expectation(&rho, &dc.readout_observable()?, shots, &noise, &mut rng)?;
                    row.push(num(-r.estimate));
                    row.push(num(r.stderr));
                }
            }
            Ok(row)
        })
        .collect::<Outcome<_>>()?;

    let mut header = vec!["J", "M_exact_oracle", "M_compressed"];
    if compiled {
        header.extend(["M_compiled", "synthesis_error"]);
    }
    if noisy {
        header.extend(["M_noisy_mean", "M_noisy_stderr"]);
    }
    req.out.emit(&csv_bytes(&header, &rows)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileRequest {
    pub builtin: Option<String>,
    pub input: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    pub depth_limit: Option<usize>,
    pub budget: Budget,
    pub out: Output,
}

fn read_circuit(path: &PathBuf) -> Outcome<Circuit> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn metadata(name: &str, c: &CompiledCircuit, full: &Circuit, limit: Option<usize>) -> serde_json::Value {
    json!({
        "target": name,
        "num_qubits": full.num_qubits(),
        "depth": depth(full),
        "gate_count": full.len(),
        "t_count": full.t_count(),
        "cnot_count": full.cnot_count(),
        "synthesis_error": c.synthesis_error,
        "routing_cnot_overhead": c.routing_cnot_overhead,
        "length_cap": c.length_cap,
        "depth_limit": limit,
        "over_budget": c.over_budget,
    })
}

/// Writes the compiled circuit and its metadata. Exceeding the depth limit
/// still writes both, then fails with a constraint violation.
pub fn compile(req: &CompileRequest) -> Outcome {
    let budget = req.budget.resolve()?;
    let (name, compiled, full, extra) = match (&req.builtin, &req.input) {
        (Some(b), _) => match lookup(b, &budget, req.depth_limit)? {
            Builtin::Device(d) => (b.clone(), d.evolution.clone(), d.circuit.clone(), Some(d.j)),
            Builtin::Circuit(c) => {
                let cc = compile_circuit(&c, &Topology::new(c.num_qubits(), 0)?, &budget, req.depth_limit)?;
                (b.clone(), cc.clone(), cc.circuit, None)
            }
        },
        (None, Some(path)) => {
            let c = read_circuit(path)?;
            let cc = compile_circuit(&c, &Topology::new(c.num_qubits(), 0)?, &budget, req.depth_limit)?;
            (path.display().to_string(), cc.clone(), cc.circuit, None)
        }
        (None, None) => return Err(Failure::Usage("one of --builtin or --input is required".into())),
    };
    let mut meta = metadata(&name, &compiled, &full, req.depth_limit);
    if let Some(j) = extra {
        meta["j"] = json!(j);
    }
    req.out.emit(write_circuit(&full).as_bytes())?;
    let meta_text = serde_json::to_string_pretty(&meta).expect("plain JSON values") + "\n";
    match &req.meta {
        Some(p) => {
            fs::write(p, meta_text).map_err(|e| Failure::Computation(format!("writing {}: {e}", p.display())))?
        }
        None => eprint!("{meta_text}"),
    }
    let d = depth(&full);
    match req.depth_limit {
        Some(lim) if compiled.over_budget || d > lim => {
            Err(Failure::Constraint(format!("depth {d} exceeds the limit of {lim}; best-effort circuit written")))
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateRequest {
    pub builtins: Vec<String>,
    pub inputs: Vec<PathBuf>,
    pub count: usize,
    pub measured_qubit: Option<usize>,
    pub seed: u64,
    pub budget: Budget,
    pub noise: NoiseArg,
    pub out: Output,
}

/// Base `i` draws its replacements with seed `seed + i`.
pub fn validate(req: &ValidateRequest) -> Outcome {
    let budget = req.budget.resolve()?;
    let noise = req.noise.model()?.unwrap_or_else(|| NoiseModel::noiseless(0));
    let shots = req.noise.shots()?;
    let mut bases: Vec<(Circuit, usize)> = Vec::new();
    for b in &req.builtins {
        match lookup(b, &budget, Some(compressim::compile::DEPTH_LIMIT))? {
            Builtin::Device(d) => bases.push((d.circuit, d.readout_qubit)),
            Builtin::Circuit(c) => bases.push((c, 0)),
        }
    }
    for p in &req.inputs {
        bases.push((read_circuit(p)?, 0));
    }
    if bases.is_empty() {
        return Err(Failure::Usage("no base circuit given".into()));
    }
    let mut jobs: Vec<(Circuit, usize)> = Vec::new();
    for (i, (base, readout)) in bases.into_iter().enumerate() {
        let q = req.measured_qubit.unwrap_or(readout);
        let spec = ValidatingSpec::new(base, req.count, q, req.seed.wrapping_add(i as u64))?;
        jobs.extend(generate_validating_set(&spec)?.into_iter().map(|c| (c, q)));
    }
    let rows = jobs
        .par_iter()
        .enumerate()
        .map(|(id, (c, q))| evaluate_circuit(id, c, &noise, shots, *q))
        .collect::<Result<Vec<_>, _>>()?;
    let report = ValidatingReport::from_rows(rows)?;
    let mut table: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![r.circuit_id.to_string(), num(r.y_ideal), num(r.y_measured), num(r.e)])
        .collect();
    table.push(vec!["mean".into(), String::new(), String::new(), num(report.mean_error)]);
    req.out.emit(&csv_bytes(&["circuit_id", "y_ideal", "y_measured", "e"], &table)?)?;
    eprintln!("{} circuits, mean e = {:.4}, max e = {:.4}", report.rows.len(), report.mean_error, report.max_error);
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomoRequest {
    /// Single gate; all table gates when absent.
    pub gate: Option<String>,
    pub rescale: bool,
    pub noise: NoiseArg,
    pub out: Output,
}

fn canonical_gate(name: &str) -> String {
    match name.to_ascii_uppercase().as_str() {
        "S†" | "SDG" => "SDG".into(),
        "I" | "ID" | "1" => "1".into(),
        "CX" => "CNOT".into(),
        other => other.into(),
    }
}

/// Rows `gate, x, y, z, F`; rows keep their random streams whether run alone
/// or as part of the full table.
pub fn tomo(req: &TomoRequest) -> Outcome {
    let noise = req.noise.model()?.unwrap_or_else(|| NoiseModel::noiseless(0));
    let shots = req.noise.shots()?;
    let rows: Vec<TomoRow> = match &req.gate {
        None => table1(&noise, shots, req.rescale)?,
        Some(g) => {
            let name = canonical_gate(g);
            let stream = TABLE_GATES.iter().position(|t| *t == name).unwrap_or(TABLE_GATES.len() + 1);
            let eta = if req.rescale {
                Some(calibrate_eta(&noise, shots, &mut stream_rng(noise.seed, TABLE_GATES.len() as u64))?)
            } else {
                None
            };
            vec![tomo_row(&name, &noise, shots, eta, &mut stream_rng(noise.seed, stream as u64))?]
        }
    };
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![r.gate.clone(), num(r.estimate.x), num(r.estimate.y), num(r.estimate.z), num(r.fidelity.fidelity)]
        })
        .collect();
    req.out.emit(&csv_bytes(&["gate", "x", "y", "z", "F"], &table)?)
}
