use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate};

/// Star coupling: only `cnot_target` may be the target of a CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    num_qubits: usize,
    cnot_target: usize,
}

impl Topology {
    pub fn new(num_qubits: usize, cnot_target: usize) -> Result<Self> {
        if cnot_target >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: cnot_target, num_qubits });
        }
        Ok(Topology { num_qubits, cnot_target })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn cnot_target(&self) -> usize {
        self.cnot_target
    }

    pub fn allowed_controls(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_qubits).filter(move |&q| q != self.cnot_target)
    }

    pub fn admits(&self, c: &Circuit) -> bool {
        c.gates().iter().all(|g| match g {
            Gate::Cnot { target, .. } => *target == self.cnot_target,
            Gate::Single { .. } => true,
        })
    }
}

/// `CNOT(t → c)` realised with `t` as the target via Hadamard conjugation.
fn reversed(control: usize, target: usize) -> [Gate; 5] {
    [Gate::h(control), Gate::h(target), Gate::cnot(target, control), Gate::h(control), Gate::h(target)]
}

fn swap_with_target(q: usize, hub: usize) -> Vec<Gate> {
    let mut g = vec![Gate::cnot(q, hub)];
    g.extend(reversed(hub, q));
    g.push(Gate::cnot(q, hub));
    g
}

/// Rewrites every CNOT so that its target is the hub qubit.
pub fn route(c: &Circuit, topo: &Topology) -> Result<Circuit> {
    if c.num_qubits() != topo.num_qubits {
        return Err(Error::DimensionMismatch { expected: topo.num_qubits, found: c.num_qubits() });
    }
    let hub = topo.cnot_target;
    let mut out = Circuit::new(c.num_qubits());
    for g in c.gates() {
        match *g {
            Gate::Cnot { target, .. } if target == hub => out.push(g.clone())?,
            Gate::Cnot { control, target } if control == hub => {
                for r in reversed(control, target) {
                    out.push(r)?;
                }
            }
            Gate::Cnot { control, target } => {
                let swap = swap_with_target(target, hub);
                for s in swap.iter().cloned().chain([Gate::cnot(control, hub)]).chain(swap.iter().cloned()) {
                    out.push(s)?;
                }
            }
            Gate::Single { .. } => out.push(g.clone())?,
        }
    }
    Ok(out)
}
