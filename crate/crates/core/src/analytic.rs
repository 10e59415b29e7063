//! Closed-form squeezing approximations, in `gt` units with `g = 1`.
//!
//! None of these clamp to their validity regime. The Holstein-Primakoff
//! forms report validity through [`HpEstimate`] flags instead.

use crate::scalar::Real;

fn sqrt_n<T: Real>(n_atoms: usize) -> T {
    T::from_usize_lossy(n_atoms).sqrt()
}

/// Two atoms, weak coherent field: `(ξ_x, ξ_y′)`.
pub fn xi_n2_small_alpha<T: Real>(alpha: T, gt: T) -> (T, T) {
    let a2 = alpha * alpha;
    let slow = (T::lit(2.0).sqrt() * gt).sin().powi(2) / T::lit(2.0);
    let fast = T::lit(2.0) / T::lit(3.0) * (T::lit(6.0).sqrt() * gt / T::lit(2.0)).sin().powi(2);
    let d = a2 * (slow - fast);
    (T::one() + d, T::one() - d)
}

/// Best two-atom squeezing reachable at small `α`: `1 - 2α²/3`.
pub fn xi_min_n2_small_alpha<T: Real>(alpha: T) -> T {
    T::one() - T::lit(2.0) / T::lit(3.0) * alpha * alpha
}

/// Two atoms, weak coherent field: field `(ξ_Q, ξ_P)`.
pub fn field_xi_n2_small_alpha<T: Real>(alpha: T, gt: T) -> (T, T) {
    let d = alpha
        * alpha
        * ((T::lit(2.0).sqrt() * gt).cos().powi(2)
            - (T::one() + T::lit(2.0) * (T::lit(6.0).sqrt() * gt).cos()) / T::lit(3.0));
    (T::one() - d, T::one() + d)
}

/// Two atoms, weakly squeezed vacuum: `(ξ_x, ξ_y)`.
pub fn xi_n2_squeezed_vacuum_small_r<T: Real>(r: T, gt: T) -> (T, T) {
    let d = T::lit(4.0) / T::lit(3.0) * r * ((T::lit(1.5)).sqrt() * gt).sin().powi(2);
    (T::one() + d, T::one() - d)
}

/// `N` atoms, weak coherent field: `ξ_x`.
pub fn xi_n_small_alpha<T: Real>(n_atoms: usize, alpha: T, gt: T) -> T {
    let n = T::from_usize_lossy(n_atoms);
    let one = T::one();
    let two = T::lit(2.0);
    let first = (n - one) / n * (n.sqrt() * gt).sin().powi(2);
    let second = two * (n - one) / (two * n - one) * (((two * n - one) / two).sqrt() * gt).sin().powi(2);
    one + alpha * alpha * (first - second)
}

/// Large-`N` reduction of [`xi_n_small_alpha`].
pub fn xi_n_large_limit<T: Real>(n_atoms: usize, alpha: T, gt: T) -> T {
    let s = sqrt_n::<T>(n_atoms);
    let quarter = T::one() / (T::lit(4.0) * s);
    T::one() + alpha * alpha * ((T::lit(2.0) * s - quarter) * gt).sin() * (gt * quarter).sin()
}

/// `N` atoms, weak coherent field: field `(ξ_Q, ξ_P)`.
pub fn field_xi_n_small_alpha<T: Real>(n_atoms: usize, alpha: T, gt: T) -> (T, T) {
    let n = T::from_usize_lossy(n_atoms);
    let one = T::one();
    let two = T::lit(2.0);
    let a2 = alpha * alpha;
    let d = -a2 * (n.sqrt() * gt).cos().powi(2)
        + a2 / (two * n - one) * (n - one + n * ((T::lit(4.0) * n - two).sqrt() * gt).cos());
    (one + d, one - d)
}

/// Minimum of the `N`-atom field `ξ_Q`: `1 - 2Nα²/(2N - 1)`.
pub fn field_xi_q_min_n<T: Real>(n_atoms: usize, alpha: T) -> T {
    let n = T::from_usize_lossy(n_atoms);
    T::one() - T::lit(2.0) * n * alpha * alpha / (T::lit(2.0) * n - T::one())
}

/// Minimum of the field `ξ_P` at any `N`: `1 - α²`.
pub fn field_xi_p_min_n<T: Real>(alpha: T) -> T {
    T::one() - alpha * alpha
}

/// Constants of the bosonized large-`N` model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPParameters<T> {
    pub n_atoms: usize,
    pub alpha: T,
    pub lambda1: T,
    pub lambda2: T,
    pub alpha_tilde: T,
    pub sigma: T,
}

impl<T: Real> HPParameters<T> {
    pub fn new(n_atoms: usize, alpha: T) -> Self {
        let s = sqrt_n::<T>(n_atoms);
        let lambda2 = T::one() / (T::lit(2.0) * s);
        Self {
            n_atoms,
            alpha,
            lambda1: s + lambda2,
            lambda2,
            alpha_tilde: alpha / T::lit(2.0).sqrt(),
            sigma: T::lit(4.0) * T::from_usize_lossy(n_atoms) / (alpha * alpha),
        }
    }

    /// Few spin excitations relative to `N`: `α²/N < 0.1`.
    pub fn li_ok(&self) -> bool {
        self.alpha * self.alpha / T::from_usize_lossy(self.n_atoms) < T::lit(0.1)
    }

    /// Neglected higher-order phases stay small: `gt / (2N^{3/2}) < 0.1`.
    pub fn phase_ok(&self, gt: T) -> bool {
        let n = T::from_usize_lossy(self.n_atoms);
        gt / (T::lit(2.0) * n * n.sqrt()) < T::lit(0.1)
    }
}

/// A Holstein-Primakoff value and whether its assumptions hold at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpEstimate<T> {
    pub xi: T,
    pub li_ok: bool,
    pub phase_ok: bool,
}

/// Large-`N` bosonized `ξ_x`, valid for `N ≫ α²`.
///
/// `ξ² = 1 + α²[e^{-α²sin²λ₂t} cos((2√N - λ₂)t - (α²/2)sin 2λ₂t) - e^{-2α²sin²(λ₂t/2)}
///        + 1 - e^{-2α²sin²(λ₂t/2)} cos(2√N t - α² sin λ₂t)]`
pub fn xi_hp<T: Real>(n_atoms: usize, alpha: T, gt: T) -> HpEstimate<T> {
    let p = HPParameters::new(n_atoms, alpha);
    let two = T::lit(2.0);
    let s = sqrt_n::<T>(n_atoms);
    let a2 = alpha * alpha;
    let l2t = p.lambda2 * gt;
    let env_full = (-a2 * l2t.sin().powi(2)).exp();
    let env_half = (-two * a2 * (l2t / two).sin().powi(2)).exp();
    let first = env_full * ((two * s - p.lambda2) * gt - a2 / two * (two * l2t).sin()).cos();
    let second = env_half * (two * s * gt - a2 * l2t.sin()).cos();
    let sq = T::one() + a2 * (first - env_half + T::one() - second);
    HpEstimate {
        xi: sq.max(T::zero()).sqrt(),
        li_ok: p.li_ok(),
        phase_ok: p.phase_ok(gt),
    }
}

/// `z = α² gt / (2√N)`, the natural time variable of the strong-field form.
pub fn large_alpha_z<T: Real>(n_atoms: usize, alpha: T, gt: T) -> T {
    alpha * alpha * gt / (T::lit(2.0) * sqrt_n::<T>(n_atoms))
}

/// Strong-field reduction of [`xi_hp`], valid for `α ≫ 1` and `z ≪ √α`.
pub fn xi_hp_large_alpha<T: Real>(n_atoms: usize, alpha: T, gt: T) -> HpEstimate<T> {
    let p = HPParameters::new(n_atoms, alpha);
    let z = large_alpha_z(n_atoms, alpha, gt);
    let phase = p.sigma * z - z;
    let sq = T::one() + z * phase.sin() + z * z * (phase / T::lit(2.0)).sin().powi(2);
    HpEstimate {
        xi: sq.max(T::zero()).sqrt(),
        li_ok: p.li_ok(),
        phase_ok: p.phase_ok(gt),
    }
}

/// Closed forms selectable by name for exact-vs-approximate comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticModel {
    /// Two-atom weak-field `ξ_x`.
    SmallAlpha,
    /// `N`-atom weak-field `ξ_x`.
    NSmallAlpha,
    /// Large-`N` weak-field `ξ_x`.
    LargeN,
    /// Holstein-Primakoff `ξ_x`.
    HolsteinPrimakoff,
    /// Strong-field reduction of the Holstein-Primakoff form.
    LargeAlpha,
    /// Two-atom weakly squeezed vacuum `ξ_y`.
    SmallR,
    /// `N`-atom weak-field quadrature `ξ_Q`.
    FieldQ,
    /// `N`-atom weak-field quadrature `ξ_P`.
    FieldP,
}

/// Which field parameter a model is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelInput {
    CoherentAlpha,
    SqueezedR,
}

/// Which exact observable a model approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelObservable {
    XiX,
    XiY,
    XiQ,
    XiP,
}

impl AnalyticModel {
    pub const ALL: [AnalyticModel; 8] = [
        Self::SmallAlpha,
        Self::NSmallAlpha,
        Self::LargeN,
        Self::HolsteinPrimakoff,
        Self::LargeAlpha,
        Self::SmallR,
        Self::FieldQ,
        Self::FieldP,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SmallAlpha => "small-alpha",
            Self::NSmallAlpha => "n-small-alpha",
            Self::LargeN => "large-n",
            Self::HolsteinPrimakoff => "hp",
            Self::LargeAlpha => "large-alpha",
            Self::SmallR => "small-r",
            Self::FieldQ => "field-q",
            Self::FieldP => "field-p",
        }
    }

    /// Accepts the canonical id and a few spelled-out aliases.
    pub fn from_id(id: &str) -> Option<Self> {
        let id = id.trim().to_ascii_lowercase();
        let alias = match id.as_str() {
            "holstein-primakoff" => "hp",
            "n2-small-alpha" => "small-alpha",
            "squeezed-small-r" => "small-r",
            other => other,
        };
        Self::ALL.into_iter().find(|m| m.id() == alias)
    }

    pub fn input(self) -> ModelInput {
        match self {
            Self::SmallR => ModelInput::SqueezedR,
            _ => ModelInput::CoherentAlpha,
        }
    }

    pub fn observable(self) -> ModelObservable {
        match self {
            Self::SmallR => ModelObservable::XiY,
            Self::FieldQ => ModelObservable::XiQ,
            Self::FieldP => ModelObservable::XiP,
            _ => ModelObservable::XiX,
        }
    }

    /// Only meaningful for two atoms.
    pub fn two_atoms_only(self) -> bool {
        matches!(self, Self::SmallAlpha | Self::SmallR)
    }

    /// Evaluates the model. Validity flags are reported only by the
    /// Holstein-Primakoff forms; the others return `None`.
    pub fn evaluate<T: Real>(self, n_atoms: usize, param: T, gt: T) -> (T, Option<HpEstimate<T>>) {
        match self {
            Self::SmallAlpha => (xi_n2_small_alpha(param, gt).0, None),
            Self::NSmallAlpha => (xi_n_small_alpha(n_atoms, param, gt), None),
            Self::LargeN => (xi_n_large_limit(n_atoms, param, gt), None),
            Self::HolsteinPrimakoff => {
                let e = xi_hp(n_atoms, param, gt);
                (e.xi, Some(e))
            }
            Self::LargeAlpha => {
                let e = xi_hp_large_alpha(n_atoms, param, gt);
                (e.xi, Some(e))
            }
            Self::SmallR => (xi_n2_squeezed_vacuum_small_r(param, gt).1, None),
            Self::FieldQ => (field_xi_n_small_alpha(n_atoms, param, gt).0, None),
            Self::FieldP => (field_xi_n_small_alpha(n_atoms, param, gt).1, None),
        }
    }
}

impl std::fmt::Display for AnalyticModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}
