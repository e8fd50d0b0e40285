//! Exact references for the open chain `H(J) = Σ Z_k + J Σ X_k X_{k+1}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::compressed::Schedule;
use crate::error::{Error, Result};
use crate::tolerance;

/// Largest chain for the Trotter reference.
pub const MAX_TROTTER_SITES: usize = 10;

/// Gap below which the tie-break field is switched on.
const DEGENERACY_GAP: f64 = 1e-8;
const TIE_BREAK_FIELD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingChainSpec {
    n: usize,
    j: f64,
}

impl IsingChainSpec {
    pub fn new(n: usize, j: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("chain needs at least 2 sites, got {n}")));
        }
        if n > tolerance::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { requested: n, max: tolerance::MAX_DENSE_QUBITS });
        }
        if !j.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling {j} is not finite")));
        }
        Ok(IsingChainSpec { n, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> f64 {
        self.j
    }
}

/// Which transverse magnetization the references report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Observable {
    /// `(1/n) Σ ⟨Z_k⟩`.
    #[default]
    SiteAveraged,
    /// `⟨Z_k⟩` for a 0-based site.
    Site(usize),
}

impl Observable {
    fn check(self, n: usize) -> Result<()> {
        match self {
            Observable::Site(k) if k >= n => Err(Error::QubitOutOfRange { qubit: k, num_qubits: n }),
            _ => Ok(()),
        }
    }

    /// Value on a computational basis index, weighted by probabilities.
    fn diagonal(self, n: usize) -> impl Fn(usize) -> f64 {
        move |idx: usize| {
            let z = |k: usize| if (idx >> (n - 1 - k)) & 1 == 0 { 1.0 } else { -1.0 };
            match self {
                Observable::SiteAveraged => (0..n).map(z).sum::<f64>() / n as f64,
                Observable::Site(k) => z(k),
            }
        }
    }
}

fn z_total(idx: usize, n: usize) -> f64 {
    n as f64 - 2.0 * idx.count_ones() as f64
}

/// Dense `H(J)`; site `k` is qubit `k` (most significant first).
pub fn hamiltonian(spec: &IsingChainSpec) -> DMatrix<f64> {
    let n = spec.n;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        h[(idx, idx)] = z_total(idx, n);
        for k in 0..n - 1 {
            let flip = idx ^ (0b11 << (n - 2 - k));
            h[(flip, idx)] += spec.j;
        }
    }
    h
}

/// Ground energy and state of `H(J)`.
pub fn ground_state(spec: &IsingChainSpec) -> Result<(f64, DVector<f64>)> {
    let h = hamiltonian(spec);
    let (e, v, gap) = lowest(&h)?;
    if gap >= DEGENERACY_GAP {
        return Ok((e, v));
    }
    let mut broken = h;
    let n = spec.n;
    for idx in 0..broken.nrows() {
        broken[(idx, idx)] += TIE_BREAK_FIELD * z_total(idx, n);
    }
    let (e, v, _) = lowest(&broken)?;
    Ok((e, v))
}

fn lowest(h: &DMatrix<f64>) -> Result<(f64, DVector<f64>, f64)> {
    let eig = nalgebra::linalg::SymmetricEigen::try_new(h.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Diagonalization("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let gap = order.get(1).map_or(f64::INFINITY, |&i| eig.eigenvalues[i] - e0);
    Ok((e0, eig.eigenvectors.column(order[0]).into_owned(), gap))
}

/// Transverse magnetization of the ground state of `H(J)`.
pub fn exact_ground_magnetization(spec: &IsingChainSpec, observable: Observable) -> Result<f64> {
    observable.check(spec.n)?;
    let (_, v) = ground_state(spec)?;
    let f = observable.diagonal(spec.n);
    Ok(v.iter().enumerate().map(|(i, a)| a * a * f(i)).sum())
}

/// Digitized adiabatic evolution of the full chain from `|1…1⟩`, the ground
/// state of `H(0)`, through `L(J)` symmetric Trotter steps
/// `e^{−iΔt/2·H_Z} e^{−iΔt·J_l·H_XX} e^{−iΔt/2·H_Z}`.
pub fn full_chain_trotter(n: usize, schedule: &Schedule, j: f64, observable: Observable) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain needs at least 2 sites, got {n}")));
    }
    if n > MAX_TROTTER_SITES {
        return Err(Error::TooManyQubits { requested: n, max: MAX_TROTTER_SITES });
    }
    observable.check(n)?;
    let steps = schedule.steps_for(j)?;
    let dim = 1usize << n;
    let dt = schedule.dt();
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[dim - 1] = C64::new(1.0, 0.0);
    let half_z: Vec<C64> = (0..dim).map(|i| C64::from_polar(1.0, -0.5 * dt * z_total(i, n))).collect();
    let mut scratch = psi.clone();
    for l in 1..=steps {
        for (a, p) in psi.iter_mut().zip(&half_z) {
            *a *= p;
        }
        let (s, c) = (dt * schedule.coupling(l)).sin_cos();
        let mis = C64::new(0.0, -s);
        for k in 0..n - 1 {
            let mask = 0b11 << (n - 2 - k);
            for i in 0..dim {
                scratch[i] = psi[i] * c + psi[i ^ mask] * mis;
            }
            std::mem::swap(&mut psi, &mut scratch);
        }
        for (a, p) in psi.iter_mut().zip(&half_z) {
            *a *= p;
        }
    }
    let f = observable.diagonal(n);
    Ok(psi.iter().enumerate().map(|(i, a)| a.norm_sqr() * f(i)).sum())
}
