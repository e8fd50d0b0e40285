//! Two-qubit decomposition through the magic (Bell) basis.
//!
//! In the magic basis local gates `SU(2)⊗SU(2)` become `SO(4)` and the
//! nonlocal part `N(a,b,c) = exp(i(aXX + bYY + cZZ))` becomes diagonal, so
//! `U_B = O₁ · D · Pᵀ` with `O₁, P ∈ SO(4)`. Matching this form against the
//! same form of a fixed CNOT template yields the local corrections.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qsim::{circuit_unitary, Circuit, Gate, Mat2, UnitaryMatrix};
use crate::tolerance;

const COORD_TOL: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-6;
const RECONSTRUCTION_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn magic() -> DMatrix<C64> {
    let h = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, h),
        c(0.0, 0.0), c(0.0, h), c(h, 0.0), c(0.0, 0.0),
        c(0.0, 0.0), c(0.0, h), c(-h, 0.0), c(0.0, 0.0),
        c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -h),
    ]);
    m
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| c(x, 0.0))
}

/// `U / det(U)^{1/4}`.
fn special(u: &DMatrix<C64>) -> DMatrix<C64> {
    let det = u.determinant();
    u * C64::from_polar(1.0, -det.arg() / 4.0)
}

/// `U_B = O₁ · diag(d) · Pᵀ` with `O₁`, `P` real orthogonal of determinant +1.
struct MagicForm {
    o1: DMatrix<f64>,
    d: Vec<C64>,
    p: DMatrix<f64>,
}

fn magic_form(u: &DMatrix<C64>) -> Result<MagicForm> {
    let b = magic();
    let ub = b.adjoint() * special(u) * &b;
    let m = ub.transpose() * &ub;
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    // Re M and Im M commute; a generic combination shares their eigenbasis.
    for r in [0.577_350_269_189_625_8, 1.324_717_957_244_746, 0.271_828_182_845_904_5, 2.236_067_977_5] {
        let Some(eig) = SymmetricEigen::try_new(&re + &im * r, f64::EPSILON, 10_000) else { continue };
        let mut p = eig.eigenvectors;
        if p.determinant() < 0.0 {
            p.column_mut(0).neg_mut();
        }
        let pc = to_complex(&p);
        let diag = pc.transpose() * &m * &pc;
        let off = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|(i, j)| i != j);
        if off.map(|(i, j)| diag[(i, j)].norm()).fold(0.0, f64::max) > 1e-9 {
            continue;
        }
        let mut d: Vec<C64> = (0..4).map(|i| diag[(i, i)].sqrt()).collect();
        let dinv = DMatrix::from_diagonal(&DVector::from_iterator(4, d.iter().map(|z| z.inv())));
        let o1c = &ub * &pc * dinv;
        let mut o1 = o1c.map(|z| z.re);
        if o1c.map(|z| z.im).norm() > 1e-7 {
            continue;
        }
        if o1.determinant() < 0.0 {
            o1.column_mut(0).neg_mut();
            d[0] = -d[0];
        }
        return Ok(MagicForm { o1, d, p });
    }
    Err(Error::Diagonalization("no real orthogonal eigenbasis for the magic-basis form".into()))
}

/// Canonical coordinates `(a, b, c)` of `N(a,b,c)`, defined up to the Weyl group.
fn coordinates(form: &MagicForm) -> [f64; 3] {
    let t: Vec<f64> = form.d.iter().map(|z| z.arg()).collect();
    [(t[0] - t[1] + t[2] - t[3]) / 4.0, (-t[0] + t[1] + t[2] - t[3]) / 4.0, (t[0] + t[1] - t[2] - t[3]) / 4.0]
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Factors `K ≈ A ⊗ C` for `K` a tensor product of two 2×2 unitaries.
pub(crate) fn kron_factor(k: &DMatrix<C64>) -> (Mat2, Mat2) {
    let block = |i: usize, j: usize| {
        Mat2::new(k[(2 * i, 2 * j)], k[(2 * i, 2 * j + 1)], k[(2 * i + 1, 2 * j)], k[(2 * i + 1, 2 * j + 1)])
    };
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..2 {
        for j in 0..2 {
            let n = block(i, j).norm();
            if n > best {
                (bi, bj, best) = (i, j, n);
            }
        }
    }
    let pivot = block(bi, bj);
    let scale = pivot.determinant().sqrt();
    let cmat = pivot / scale;
    let mut a = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            a[(i, j)] = (cmat.adjoint() * block(i, j)).trace() / 2.0;
        }
    }
    (a, cmat)
}

fn ry(t: f64) -> Mat2 {
    let (s, co) = (t / 2.0).sin_cos();
    Mat2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

fn rx(t: f64) -> Mat2 {
    let (s, co) = (t / 2.0).sin_cos();
    Mat2::new(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
}

fn rz(t: f64) -> Mat2 {
    Mat2::new(C64::from_polar(1.0, -t / 2.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, t / 2.0))
}

fn local(q: usize, m: Mat2) -> Gate {
    Gate::single(crate::qsim::SingleQubitOp::Unitary(m), q)
}

/// Nonlocal cores by CNOT count.
fn template(cnots: usize, [a, b, cc]: [f64; 3]) -> Circuit {
    let gates = match cnots {
        0 => vec![],
        1 => vec![Gate::cnot(0, 1)],
        // exp(i a XX) · exp(i c ZZ)
        2 => vec![Gate::cnot(0, 1), local(0, rx(-2.0 * a)), local(1, rz(-2.0 * cc)), Gate::cnot(0, 1)],
        _ => vec![
            Gate::cnot(1, 0),
            local(0, ry(2.0 * a + FRAC_PI_2)),
            local(1, rx(2.0 * b + FRAC_PI_2)),
            Gate::cnot(0, 1),
            local(0, ry(2.0 * cc + FRAC_PI_2)),
            Gate::cnot(1, 0),
        ],
    };
    Circuit::from_gates(2, gates).expect("static two-qubit layout")
}

/// Local corrections `K₁`, `K₂` with `U ≅ K₁ · T · K₂`, if the spectra match.
fn match_template(uf: &MagicForm, t: &DMatrix<C64>) -> Result<Option<(DMatrix<C64>, DMatrix<C64>)>> {
    let tf = magic_form(t)?;
    let mut best: Option<(f64, [usize; 4], [f64; 4])> = None;
    for omega in [c(1.0, 0.0), c(0.0, 1.0)] {
        for perm in permutations4() {
            let mut signs = [1.0; 4];
            let mut err: f64 = 0.0;
            for j in 0..4 {
                let target = omega * uf.d[perm[j]];
                let (ep, em) = ((tf.d[j] - target).norm(), (tf.d[j] + target).norm());
                if em < ep {
                    signs[j] = -1.0;
                }
                err = err.max(ep.min(em));
            }
            if signs.iter().product::<f64>() < 0.0 {
                continue;
            }
            if best.as_ref().is_none_or(|(e, _, _)| err < *e) {
                best = Some((err, perm, signs));
            }
        }
    }
    let Some((err, perm, signs)) = best else { return Ok(None) };
    if err > MATCH_TOL {
        return Ok(None);
    }
    let mut pi = DMatrix::<f64>::zeros(4, 4);
    for j in 0..4 {
        pi[(j, perm[j])] = 1.0;
    }
    let mut s1 = DMatrix::<f64>::identity(4, 4);
    if pi.determinant() < 0.0 {
        s1[(0, 0)] = -1.0;
    }
    let s2 = &s1 * DMatrix::from_diagonal(&DVector::from_row_slice(&signs));
    let left = &uf.o1 * pi.transpose() * s1 * tf.o1.transpose();
    let right = &tf.p * s2 * pi * uf.p.transpose();
    let b = magic();
    Ok(Some((&b * to_complex(&left) * b.adjoint(), &b * to_complex(&right) * b.adjoint())))
}

fn near_multiple(x: f64, of: f64) -> bool {
    (x - (x / of).round() * of).abs() < COORD_TOL
}

/// Smallest template class the coordinates admit, with the coordinates it needs.
fn classify(coords: [f64; 3]) -> (usize, [f64; 3]) {
    let nonzero: Vec<f64> = coords.iter().copied().filter(|&x| !near_multiple(x, FRAC_PI_2)).collect();
    match nonzero.len() {
        0 => (0, [0.0; 3]),
        1 if near_multiple(nonzero[0] - FRAC_PI_4, FRAC_PI_2) => (1, [0.0; 3]),
        1 => (2, [nonzero[0], 0.0, 0.0]),
        2 => (2, [nonzero[0], 0.0, nonzero[1]]),
        _ => (3, coords),
    }
}

/// Decomposes a two-qubit unitary into at most three CNOTs and at most eight
/// single-qubit unitaries, equal to `U` up to global phase.
pub fn kak_decompose(u: &UnitaryMatrix) -> Result<Circuit> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: u.dim() });
    }
    let dev = u.unitarity_deviation();
    if dev > tolerance::ALGEBRAIC {
        return Err(Error::NotUnitary { deviation: dev });
    }
    for bare in [vec![], vec![Gate::cnot(0, 1)], vec![Gate::cnot(1, 0)]] {
        let c = Circuit::from_gates(2, bare)?;
        if circuit_unitary(&c)?.distance_up_to_phase(u)? < 1e-12 {
            return Ok(c);
        }
    }
    let form = magic_form(u.matrix())?;
    let coords = coordinates(&form);
    let (cnots, tc) = classify(coords);
    let mut attempts = vec![(cnots, tc)];
    if cnots < 3 {
        attempts.push((3, coords));
    }
    for (k, tc) in attempts {
        let core = template(k, tc);
        let Some((k1, k2)) = match_template(&form, circuit_unitary(&core)?.matrix())? else { continue };
        let (a2, c2) = kron_factor(&k2);
        let (a1, c1) = kron_factor(&k1);
        let mut circ = Circuit::from_gates(2, vec![local(0, a2), local(1, c2)])?;
        circ.extend(&core)?;
        circ.push(local(0, a1))?;
        circ.push(local(1, c1))?;
        if circuit_unitary(&circ)?.distance_up_to_phase(u)? < RECONSTRUCTION_TOL {
            return Ok(circ);
        }
    }
    Err(Error::Diagonalization("two-qubit decomposition did not reconstruct the target".into()))
}
