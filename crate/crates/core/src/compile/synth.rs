//! Search-based Clifford+T approximation of single-qubit unitaries.
//!
//! The table holds one representative sequence per distinct unitary (up to
//! global phase), ordered by T-count, then length, then lexicographically by
//! gate alphabet index. The representative of each unitary is the smallest
//! sequence in that order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::qsim::{distance_up_to_phase_2x2, Gate, Mat2, SingleQubitOp};

/// Search alphabet, in tie-break order.
pub const ALPHABET: [SingleQubitOp; 8] = [
    SingleQubitOp::X,
    SingleQubitOp::Y,
    SingleQubitOp::Z,
    SingleQubitOp::H,
    SingleQubitOp::S,
    SingleQubitOp::Sdg,
    SingleQubitOp::T,
    SingleQubitOp::Tdg,
];

const KEY_SCALE: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisBudget {
    pub max_t_count: usize,
    /// A candidate at or below this error ends the search early.
    pub target_epsilon: f64,
    pub max_total_length: usize,
}

impl Default for SynthesisBudget {
    fn default() -> Self {
        SynthesisBudget { max_t_count: 10, target_epsilon: 1e-9, max_total_length: 40 }
    }
}

impl SynthesisBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_total_length == 0 || self.target_epsilon.is_nan() || self.target_epsilon <= 0.0 {
            return Err(Error::InvalidParameter("synthesis budget needs positive length and epsilon".into()));
        }
        Ok(())
    }
}

/// One table row: a gate sequence (in application order) and its product.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub sequence: Vec<u8>,
    pub t_count: usize,
    pub matrix: Mat2,
}

impl Candidate {
    pub fn ops(&self) -> Vec<SingleQubitOp> {
        self.sequence.iter().map(|&i| ALPHABET[i as usize].clone()).collect()
    }
}

fn phase_key(m: &Mat2) -> [i64; 8] {
    let pivot = if m[(0, 0)].norm() > 1e-6 { m[(0, 0)] } else { m[(0, 1)] };
    let n = m * (pivot.conj() / pivot.norm());
    let mut key = [0i64; 8];
    for (k, z) in n.iter().enumerate() {
        key[2 * k] = (z.re * KEY_SCALE).round() as i64;
        key[2 * k + 1] = (z.im * KEY_SCALE).round() as i64;
    }
    key
}

/// Enumerates every distinct Clifford+T unitary reachable within the budget.
pub fn enumerate(max_t_count: usize, max_total_length: usize) -> Vec<Candidate> {
    let mats: Vec<Mat2> = ALPHABET.iter().map(|g| g.matrix()).collect();
    let mut seen: HashSet<[i64; 8]> = HashSet::new();
    let mut table = Vec::new();
    let identity = Candidate { sequence: vec![], t_count: 0, matrix: Mat2::identity() };
    // Candidates of the current T level, bucketed by length; ties within a
    // bucket are resolved lexicographically.
    let mut next_level: Vec<Candidate> = vec![identity];
    for t in 0..=max_t_count {
        let mut buckets: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
        for c in next_level.drain(..) {
            buckets.entry(c.sequence.len()).or_default().push(c);
        }
        let mut accepted_this_level = Vec::new();
        while let Some((&len, _)) = buckets.iter().next() {
            let mut bucket = buckets.remove(&len).unwrap();
            bucket.sort_by(|a, b| a.sequence.cmp(&b.sequence));
            for cand in bucket {
                if !seen.insert(phase_key(&cand.matrix)) {
                    continue;
                }
                if len < max_total_length {
                    for (gi, g) in mats.iter().enumerate() {
                        let mut seq = cand.sequence.clone();
                        seq.push(gi as u8);
                        let child = Candidate { sequence: seq, t_count: t, matrix: g * cand.matrix };
                        if ALPHABET[gi].is_t_like() {
                            if t < max_t_count {
                                next_level.push(Candidate { t_count: t + 1, ..child });
                            }
                        } else {
                            buckets.entry(len + 1).or_default().push(child);
                        }
                    }
                }
                accepted_this_level.push(cand);
            }
        }
        table.extend(accepted_this_level);
        if next_level.is_empty() {
            break;
        }
    }
    table
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<Vec<Candidate>>>>;

fn cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared table for a budget.
pub fn table(max_t_count: usize, max_total_length: usize) -> Arc<Vec<Candidate>> {
    let key = (max_t_count, max_total_length);
    if let Some(t) = cache().lock().unwrap().get(&key) {
        return t.clone();
    }
    let t = Arc::new(enumerate(max_t_count, max_total_length));
    cache().lock().unwrap().insert(key, t.clone());
    t
}

/// Result of approximating one single-qubit unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesized {
    pub ops: Vec<SingleQubitOp>,
    pub error: f64,
}

impl Synthesized {
    pub fn gates(&self, qubit: usize) -> Vec<Gate> {
        self.ops.iter().map(|op| Gate::single(op.clone(), qubit)).collect()
    }

    pub fn t_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_t_like()).count()
    }
}

/// Picks the table entry closest to `u`; with `length_cap`, only entries no
/// longer than the cap qualify.
pub fn best_in_table(table: &[Candidate], u: &Mat2, target_epsilon: f64, length_cap: usize) -> Option<Synthesized> {
    let mut best: Option<(f64, &Candidate)> = None;
    for cand in table.iter().filter(|c| c.sequence.len() <= length_cap) {
        let err = distance_up_to_phase_2x2(u, &cand.matrix);
        if best.is_none_or(|(e, _)| err < e) {
            best = Some((err, cand));
            if err <= target_epsilon {
                break;
            }
        }
    }
    best.map(|(error, c)| Synthesized { ops: c.ops(), error })
}

/// Approximates `u` over {X, Y, Z, H, S, S†, T, T†}.
///
/// Fails with `InfeasibleBudget` only when the budget admits no sequence at all.
pub fn synthesize_single_qubit(u: &Mat2, budget: &SynthesisBudget) -> Result<Synthesized> {
    budget.validate()?;
    let dev = (u.adjoint() * u - Mat2::identity()).norm();
    if dev > crate::tolerance::ALGEBRAIC {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let t = table(budget.max_t_count, budget.max_total_length);
    best_in_table(&t, u, budget.target_epsilon, budget.max_total_length).ok_or(Error::InfeasibleBudget)
}

/// Product of a sequence given in application order.
pub fn sequence_matrix(ops: &[SingleQubitOp]) -> Mat2 {
    ops.iter().fold(Mat2::identity(), |acc, op| op.matrix() * acc)
}
