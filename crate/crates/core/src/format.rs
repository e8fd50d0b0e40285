//! Line-oriented text format for circuits.
//!
//! ```text
//! # comment
//! QUBITS 3
//! H 1
//! CNOT 1 0
//! PHASE 2 0.5235987755982988
//! U 0 re00 im00 re01 im01 re10 im10 re11 im11
//! ```
//!
//! `QUBITS` is optional; without it the register is sized by the highest
//! index. Numbers are written in Rust's shortest round-trip form, so
//! write-then-parse is bit-exact.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate, Mat2, SingleQubitOp};

pub fn write_circuit(c: &Circuit) -> String {
    let mut s = format!("QUBITS {}\n", c.num_qubits());
    for g in c.gates() {
        match g {
            Gate::Cnot { control, target } => writeln!(s, "CNOT {control} {target}"),
            Gate::Single { op, qubit } => match op {
                SingleQubitOp::Phase(a) | SingleQubitOp::RotY(a) => writeln!(s, "{} {qubit} {a:?}", op.name()),
                SingleQubitOp::Unitary(m) => {
                    let nums: Vec<String> = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
                        .iter()
                        .flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)])
                        .collect();
                    writeln!(s, "U {qubit} {}", nums.join(" "))
                }
                _ => writeln!(s, "{} {qubit}", op.name()),
            },
        }
        .expect("writing to a String");
    }
    s
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared: Option<usize> = None;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let mut parts = line.split_whitespace();
        let name = parts.next().expect("non-empty line").to_ascii_uppercase();
        let args: Vec<&str> = parts.collect();
        let index = |k: usize| -> Result<usize> {
            args.get(k)
                .ok_or_else(|| err(format!("{name}: missing argument {}", k + 1)))?
                .parse::<usize>()
                .map_err(|e| err(format!("{name}: {e}")))
        };
        let real = |k: usize| -> Result<f64> {
            args.get(k)
                .ok_or_else(|| err(format!("{name}: missing argument {}", k + 1)))?
                .parse::<f64>()
                .map_err(|e| err(format!("{name}: {e}")))
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(err(format!("{name} takes {n} arguments, got {}", args.len())));
            }
            Ok(())
        };
        let single = |op: SingleQubitOp| -> Result<Gate> { Ok(Gate::single(op, index(0)?)) };
        let gate = match name.as_str() {
            "QUBITS" => {
                arity(1)?;
                if declared.is_some() || !gates.is_empty() {
                    return Err(err("QUBITS must come first and only once".into()));
                }
                declared = Some(index(0)?);
                continue;
            }
            "CNOT" | "CX" => {
                arity(2)?;
                Gate::cnot(index(0)?, index(1)?)
            }
            "PHASE" | "ROTY" => {
                arity(2)?;
                let a = real(1)?;
                single(if name == "PHASE" { SingleQubitOp::Phase(a) } else { SingleQubitOp::RotY(a) })?
            }
            "U" => {
                arity(9)?;
                let z = |k: usize| -> Result<C64> { Ok(C64::new(real(1 + 2 * k)?, real(2 + 2 * k)?)) };
                let m = Mat2::new(z(0)?, z(1)?, z(2)?, z(3)?);
                Gate::unitary(index(0)?, m).map_err(|e| err(e.to_string()))?
            }
            other => {
                arity(1)?;
                let op = match other {
                    "X" => SingleQubitOp::X,
                    "Y" => SingleQubitOp::Y,
                    "Z" => SingleQubitOp::Z,
                    "H" => SingleQubitOp::H,
                    "S" => SingleQubitOp::S,
                    "SDG" => SingleQubitOp::Sdg,
                    "T" => SingleQubitOp::T,
                    "TDG" => SingleQubitOp::Tdg,
                    _ => return Err(err(format!("unknown gate {other:?}"))),
                };
                single(op)?
            }
        };
        gates.push((i + 1, gate));
    }
    let needed = gates.iter().flat_map(|(_, g)| g.qubits()).max().map_or(1, |q| q + 1);
    let n = declared.unwrap_or(needed);
    let mut c = Circuit::new(n);
    for (line, g) in gates {
        c.push(g).map_err(|e| Error::Parse { line, message: e.to_string() })?;
    }
    Ok(c)
}
