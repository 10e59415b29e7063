//! Exact evolution under `H = g(S₊a + S₋a†)` by per-block spectral
//! decomposition, plus the closed-form two-atom propagator used as an oracle.
//!
//! Times are the dimensionless product `gt`. Amplitudes are those of the
//! interaction picture; the free phases `e^{-iω(m+n)t}` are never stored.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use num_traits::Zero;

use crate::basis::{build_basis, Basis, ExcitationBlock, JointState};
use crate::eigen::{symmetric_tridiagonal_eigen, TridiagonalEigen};
use crate::error::{Error, Result};
use crate::field::FieldStateSpec;
use crate::scalar::{phase, Real};

/// Tridiagonal interaction Hamiltonian of one excitation block, in units of `g`.
///
/// The diagonal is identically zero; `offdiag[i]` couples `(j, M-j)` and
/// `(j+1, M-j-1)` with `j = j_min + i` and equals `√((N-j)(j+1)(M-j))`.
#[derive(Debug)]
pub struct BlockHamiltonian<T> {
    excitation: usize,
    j_min: usize,
    offdiag: Vec<T>,
    spectrum: OnceLock<TridiagonalEigen<T>>,
}

pub fn build_block_hamiltonian<T: Real>(block: &ExcitationBlock, n_atoms: usize) -> BlockHamiltonian<T> {
    let m = block.excitation();
    let offdiag = (block.j_min()..block.j_max())
        .map(|j| T::from_usize_lossy((n_atoms - j) * (j + 1) * (m - j)).sqrt())
        .collect();
    BlockHamiltonian {
        excitation: m,
        j_min: block.j_min(),
        offdiag,
        spectrum: OnceLock::new(),
    }
}

impl<T: Real> BlockHamiltonian<T> {
    pub fn excitation(&self) -> usize {
        self.excitation
    }

    pub fn j_min(&self) -> usize {
        self.j_min
    }

    pub fn dim(&self) -> usize {
        self.offdiag.len() + 1
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// Eigen-decomposition, computed on first use.
    pub fn spectrum(&self) -> &TridiagonalEigen<T> {
        self.spectrum.get_or_init(|| {
            let diag = vec![T::zero(); self.dim()];
            symmetric_tridiagonal_eigen(&diag, &self.offdiag)
        })
    }

    /// Eigenbasis components `Vᵀa`.
    fn project(&self, amps: &[Complex<T>]) -> Vec<Complex<T>> {
        let eig = self.spectrum();
        let n = eig.dim;
        (0..n)
            .map(|i| (0..n).fold(Complex::zero(), |acc, r| acc + amps[r] * eig.vector_component(r, i)))
            .collect()
    }

    /// `V e^{-iΛ gt} p` written into `out`.
    fn reconstruct(&self, projections: &[Complex<T>], gt: T, out: &mut [Complex<T>]) {
        let eig = self.spectrum();
        let n = eig.dim;
        let rotated: Vec<Complex<T>> = projections
            .iter()
            .zip(&eig.values)
            .map(|(&p, &lambda)| p * phase(lambda * gt))
            .collect();
        for (r, o) in out.iter_mut().enumerate().take(n) {
            let row = &eig.vectors[r * n..(r + 1) * n];
            *o = row
                .iter()
                .zip(&rotated)
                .fold(Complex::zero(), |acc, (&v, &q)| acc + q * v);
        }
    }
}

/// Spectral propagator for every block of an `(N, n_max)` basis.
#[derive(Debug)]
pub struct Propagator<T> {
    basis: Basis,
    blocks: Vec<BlockHamiltonian<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(n_atoms: usize, n_max: usize) -> Result<Self> {
        let basis = build_basis(n_atoms, n_max)?;
        let blocks = basis
            .blocks()
            .iter()
            .map(|b| build_block_hamiltonian(b, n_atoms))
            .collect();
        Ok(Self { basis, blocks })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn block_hamiltonians(&self) -> &[BlockHamiltonian<T>] {
        &self.blocks
    }

    /// `e^{-iH gt}|state⟩`. Blocks that are identically zero stay zero.
    pub fn evolve(&self, state: &JointState<T>, gt: T) -> Result<JointState<T>> {
        state.check_shape(self.basis.n_atoms(), self.basis.n_max())?;
        let mut out = JointState::zeros(&self.basis);
        for (m, h) in self.blocks.iter().enumerate() {
            if state.is_block_zero(m) {
                continue;
            }
            let p = h.project(state.block(m));
            h.reconstruct(&p, gt, out.block_mut(m));
        }
        Ok(out)
    }
}

/// A state decomposed once in the eigenbases, ready for evaluation at many times.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    propagator: Arc<Propagator<T>>,
    projections: Vec<Option<Vec<Complex<T>>>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(propagator: Arc<Propagator<T>>, initial: &JointState<T>) -> Result<Self> {
        initial.check_shape(propagator.basis.n_atoms(), propagator.basis.n_max())?;
        let projections = propagator
            .blocks
            .iter()
            .enumerate()
            .map(|(m, h)| (!initial.is_block_zero(m)).then(|| h.project(initial.block(m))))
            .collect();
        Ok(Self {
            propagator,
            projections,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.propagator.basis.n_atoms()
    }

    pub fn propagator(&self) -> &Arc<Propagator<T>> {
        &self.propagator
    }

    /// The evolved state at `gt`.
    pub fn at(&self, gt: T) -> JointState<T> {
        let mut out = JointState::zeros(&self.propagator.basis);
        for ((m, h), p) in self.propagator.blocks.iter().enumerate().zip(&self.projections) {
            if let Some(p) = p {
                h.reconstruct(p, gt, out.block_mut(m));
            }
        }
        out
    }
}

type PropagatorMap<T> = HashMap<(usize, usize), Arc<Propagator<T>>>;

/// Propagators shared per `(N, n_max)`; safe to use from many threads.
#[derive(Debug, Default)]
pub struct SpectralCache<T> {
    entries: Mutex<PropagatorMap<T>>,
}

impl<T: Real> SpectralCache<T> {
    pub fn new() -> Self {
        Self {
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, n_atoms: usize, n_max: usize) -> Result<Arc<Propagator<T>>> {
        let mut entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(p) = entries.get(&(n_atoms, n_max)) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(Propagator::new(n_atoms, n_max)?);
        entries.insert((n_atoms, n_max), Arc::clone(&p));
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().map(|e| e.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One-shot evolution; builds a fresh propagator for the state's basis.
pub fn evolve<T: Real>(state: &JointState<T>, gt: T) -> Result<JointState<T>> {
    Propagator::new(state.n_atoms(), state.n_max())?.evolve(state, gt)
}

/// Two-atom state at `gt` assembled from the closed-form block solutions.
///
/// For initial photon number `M ≥ 1` the block `{(0,M), (1,M-1), (2,M-2)}`
/// has frequencies `0, ±ω` with `ω = √(4M-2)`:
///
/// * `c_{0,M}   = [M-1 + M cos ωt] / (2M-1) · c_M`
/// * `c_{1,M-1} = -i √(M/(2M-1)) sin ωt · c_M`
/// * `c_{2,M-2} = √(M(M-1)) / (2M-1) · [cos ωt - 1] · c_M`
pub fn evolve_n2_closed_form<T: Real>(field: &FieldStateSpec<T>, gt: T) -> Result<JointState<T>> {
    let basis = build_basis(2, field.n_max())?;
    let mut state = JointState::zeros(&basis);
    let one = T::one();
    for (m, &cm) in field.coefficients().iter().enumerate() {
        if m == 0 {
            if let Some(a) = state.amplitude_mut(0, 0) {
                *a = cm;
            }
            continue;
        }
        let mf = T::from_usize_lossy(m);
        let denom = T::lit(2.0) * mf - one;
        let omega = (T::lit(4.0) * mf - T::lit(2.0)).sqrt();
        let (s, co) = (omega * gt).sin_cos();
        if let Some(a) = state.amplitude_mut(0, m) {
            *a = cm * ((mf - one + mf * co) / denom);
        }
        if let Some(a) = state.amplitude_mut(1, m - 1) {
            *a = cm * Complex::new(T::zero(), -(mf / denom).sqrt() * s);
        }
        if m >= 2 {
            if let Some(a) = state.amplitude_mut(2, m - 2) {
                *a = cm * ((mf * (mf - one)).sqrt() / denom * (co - one));
            }
        }
    }
    Ok(state)
}

/// Rejects anything but two atoms before calling [`evolve_n2_closed_form`].
pub fn evolve_n2_closed_form_checked<T: Real>(
    n_atoms: usize,
    field: &FieldStateSpec<T>,
    gt: T,
) -> Result<JointState<T>> {
    if n_atoms != 2 {
        return Err(Error::NotTwoAtoms(n_atoms));
    }
    evolve_n2_closed_form(field, gt)
}
