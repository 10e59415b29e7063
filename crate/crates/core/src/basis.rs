//! Truncated joint Hilbert space of the collective spin `S = N/2` and one
//! cavity mode, split into blocks of conserved excitation `M = j + n`.
//!
//! A basis state is labelled by the excitation index `j = m + N/2` of the
//! collective spin (`j = 0` is all atoms in the ground state) and the photon
//! number `n`. The interaction `S₊a + S₋a†` conserves `j + n`, so every block
//! evolves independently.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::FieldStateSpec;
use crate::scalar::Real;

/// The symmetric (Dicke) manifold of `N` spins-1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinManifold {
    n_atoms: usize,
}

impl SpinManifold {
    pub fn new(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::NoAtoms);
        }
        Ok(Self { n_atoms })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// `S = N/2`.
    pub fn total_spin<T: Real>(&self) -> T {
        T::from_usize_lossy(self.n_atoms) / T::lit(2.0)
    }

    /// Spin projection `m = j - N/2` of excitation index `j`.
    pub fn projection<T: Real>(&self, j: usize) -> T {
        T::from_usize_lossy(j) - self.total_spin::<T>()
    }

    /// Number of projections, `N + 1`.
    pub fn len(&self) -> usize {
        self.n_atoms + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Photon-number cutoff together with the initial-state probability it discards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockTruncation<T> {
    pub n_max: usize,
    /// Upper bound on `Σ_{n > n_max} |c_n|²` of the untruncated field state.
    pub tail_mass_bound: T,
}

/// One invariant subspace of fixed total excitation `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitationBlock {
    excitation: usize,
    j_min: usize,
    j_max: usize,
}

impl ExcitationBlock {
    fn new(excitation: usize, n_atoms: usize, n_max: usize) -> Self {
        let j_min = excitation.saturating_sub(n_max);
        let j_max = excitation.min(n_atoms);
        debug_assert!(j_min <= j_max);
        Self {
            excitation,
            j_min,
            j_max,
        }
    }

    /// Total excitation `M`.
    pub fn excitation(&self) -> usize {
        self.excitation
    }

    pub fn dim(&self) -> usize {
        self.j_max - self.j_min + 1
    }

    pub fn j_min(&self) -> usize {
        self.j_min
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// States `(j, n)` in ascending `j`.
    pub fn states(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.j_min..=self.j_max).map(move |j| (j, self.excitation - j))
    }

    /// Position of spin excitation `j` within the block.
    pub fn index_of(&self, j: usize) -> Option<usize> {
        (self.j_min..=self.j_max).contains(&j).then(|| j - self.j_min)
    }
}

/// All excitation blocks for `(N, n_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    spin: SpinManifold,
    n_max: usize,
    blocks: Vec<ExcitationBlock>,
}

/// Builds the blocks `M = 0 ..= N + n_max`.
pub fn build_basis(n_atoms: usize, n_max: usize) -> Result<Basis> {
    let spin = SpinManifold::new(n_atoms)?;
    let blocks = (0..=n_atoms + n_max)
        .map(|m| ExcitationBlock::new(m, n_atoms, n_max))
        .collect();
    Ok(Basis { spin, n_max, blocks })
}

impl Basis {
    pub fn n_atoms(&self) -> usize {
        self.spin.n_atoms()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn spin(&self) -> SpinManifold {
        self.spin
    }

    pub fn blocks(&self) -> &[ExcitationBlock] {
        &self.blocks
    }

    pub fn block(&self, excitation: usize) -> Option<&ExcitationBlock> {
        self.blocks.get(excitation)
    }

    /// Total number of `(j, n)` states.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(ExcitationBlock::dim).sum()
    }
}

/// Pure state of spins and field, stored block by block.
///
/// Block `M` holds the amplitudes `c_{j, M-j}` for `j` ascending from
/// `max(0, M - n_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T> {
    n_atoms: usize,
    n_max: usize,
    blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> JointState<T> {
    pub fn zeros(basis: &Basis) -> Self {
        Self {
            n_atoms: basis.n_atoms(),
            n_max: basis.n_max(),
            blocks: basis.blocks().iter().map(|b| vec![Complex::zero(); b.dim()]).collect(),
        }
    }

    /// Zero vector on the same basis.
    pub fn zeros_like(&self) -> Self {
        Self {
            n_atoms: self.n_atoms,
            n_max: self.n_max,
            blocks: self.blocks.iter().map(|b| vec![Complex::zero(); b.len()]).collect(),
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    fn locate(&self, j: usize, n: usize) -> Option<(usize, usize)> {
        if j > self.n_atoms || n > self.n_max {
            return None;
        }
        let m = j + n;
        Some((m, j - m.saturating_sub(self.n_max)))
    }

    /// `c_{j,n}`, zero outside the truncated basis.
    #[inline]
    pub fn amplitude(&self, j: usize, n: usize) -> Complex<T> {
        self.locate(j, n)
            .map(|(m, i)| self.blocks[m][i])
            .unwrap_or_else(Complex::zero)
    }

    /// Mutable `c_{j,n}`; `None` outside the truncated basis.
    #[inline]
    pub fn amplitude_mut(&mut self, j: usize, n: usize) -> Option<&mut Complex<T>> {
        let (m, i) = self.locate(j, n)?;
        Some(&mut self.blocks[m][i])
    }

    pub fn block(&self, excitation: usize) -> &[Complex<T>] {
        &self.blocks[excitation]
    }

    pub fn block_mut(&mut self, excitation: usize) -> &mut [Complex<T>] {
        &mut self.blocks[excitation]
    }

    pub fn blocks(&self) -> &[Vec<Complex<T>>] {
        &self.blocks
    }

    /// Lowest spin excitation index stored in block `M`.
    #[inline]
    pub fn block_j_min(&self, excitation: usize) -> usize {
        excitation.saturating_sub(self.n_max)
    }

    /// Iterates `(j, n, c_{j,n})` over every stored amplitude.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        self.blocks.iter().enumerate().flat_map(move |(m, amps)| {
            let j0 = self.block_j_min(m);
            amps.iter().enumerate().map(move |(i, &a)| (j0 + i, m - j0 - i, a))
        })
    }

    /// `Σ |c_{j,n}|²`.
    pub fn norm(&self) -> T {
        self.blocks.iter().flat_map(|b| b.iter()).map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: T) {
        for a in self.blocks.iter_mut().flat_map(|b| b.iter_mut()) {
            *a = *a * factor;
        }
    }

    pub fn scaled(mut self, factor: T) -> Self {
        self.scale(factor);
        self
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        debug_assert_eq!((self.n_atoms, self.n_max), (other.n_atoms, other.n_max));
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
    }

    pub fn is_block_zero(&self, excitation: usize) -> bool {
        self.blocks[excitation].iter().all(|a| a.is_zero())
    }

    pub(crate) fn check_shape(&self, n_atoms: usize, n_max: usize) -> Result<()> {
        if self.n_atoms != n_atoms || self.n_max != n_max {
            return Err(Error::BasisMismatch {
                expected_atoms: n_atoms,
                expected_n_max: n_max,
                atoms: self.n_atoms,
                n_max: self.n_max,
            });
        }
        Ok(())
    }
}

/// All atoms in the ground state, field in `field`: `c_{0,n} = c_n`.
pub fn initial_joint_state<T: Real>(n_atoms: usize, field: &FieldStateSpec<T>) -> Result<JointState<T>> {
    let basis = build_basis(n_atoms, field.n_max())?;
    let mut state = JointState::zeros(&basis);
    for (n, &cn) in field.coefficients().iter().enumerate() {
        // block M = n, position 0 since j_min(M) = 0 for M <= n_max
        state.blocks[n][0] = cn;
    }
    Ok(state)
}
