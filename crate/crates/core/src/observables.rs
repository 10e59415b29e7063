//! Spin moments, the Wineland squeezing parameter, and field quadratures.
//!
//! Second moments come from operator-applied vectors: with `|v_a⟩ = S_a|ψ⟩`
//! the symmetrized moment `⟨(S_aS_b + S_bS_a)/2⟩` is `Re⟨v_a|v_b⟩`.

use num_complex::Complex;
use num_traits::Zero;

use crate::basis::JointState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative threshold on `|⟨S⟩| / N` below which no perpendicular plane is defined.
pub const DEGENERATE_SPIN_THRESHOLD: f64 = 1e-9;

/// Mean collective spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVector<T> {
    pub sx: T,
    pub sy: T,
    pub sz: T,
}

impl<T: Real> SpinVector<T> {
    pub fn as_array(&self) -> [T; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn magnitude(&self) -> T {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

/// Symmetric 3×3 spin covariance, indexed by (x, y, z).
pub type SpinCovariance<T> = [[T; 3]; 3];

/// Which perpendicular direction the smallest variance was found along.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezingAxis<T> {
    X,
    YPrime,
    /// Angle from `e₁` towards `e₂`, in `[0, π)`.
    Angle(T),
}

impl<T: Real> std::fmt::Display for SqueezingAxis<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::X => f.write_str("x"),
            Self::YPrime => f.write_str("yprime"),
            Self::Angle(phi) => write!(f, "phi={:.6}", phi.to_f64_lossy()),
        }
    }
}

/// Everything measured on the state at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingReport<T> {
    pub gt: T,
    pub spin: SpinVector<T>,
    pub cov: SpinCovariance<T>,
    /// `e₁` (x̂ when `⟨S_x⟩ = 0`) and `e₂ = e₁ × ⟨Ŝ⟩`.
    pub frame: [[T; 3]; 2],
    pub xi_x: T,
    pub xi_yprime: T,
    pub xi_min_plane: T,
    /// Direction of `xi_min_plane`, measured from `e₁`.
    pub phi: T,
    pub q_mean: T,
    pub p_mean: T,
    pub var_q: T,
    pub var_p: T,
    pub xi_q: T,
    pub xi_p: T,
}

impl<T: Real> SqueezingReport<T> {
    /// Classifies `phi`: within `1e-6` rad of `e₁` or `e₂` counts as that axis.
    pub fn axis(&self) -> SqueezingAxis<T> {
        let tol = T::lit(1e-6);
        let pi = T::PI();
        let half = pi / T::lit(2.0);
        if self.phi < tol || pi - self.phi < tol {
            SqueezingAxis::X
        } else if (self.phi - half).abs() < tol {
            SqueezingAxis::YPrime
        } else {
            SqueezingAxis::Angle(self.phi)
        }
    }

    /// `ΔS_{e₁} · ΔS_{e₂}`.
    pub fn perpendicular_uncertainty_product(&self) -> T {
        let a = quadratic_form(&self.cov, &self.frame[0]);
        let b = quadratic_form(&self.cov, &self.frame[1]);
        (a.max(T::zero()) * b.max(T::zero())).sqrt()
    }
}

/// Field quadratures `Q = (a + a†)/√2`, `P = -i(a - a†)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldQuadratures<T> {
    pub q_mean: T,
    pub p_mean: T,
    pub var_q: T,
    pub var_p: T,
    pub xi_q: T,
    pub xi_p: T,
}

fn ladder<T: Real>(n_atoms: usize, j: usize) -> T {
    // ⟨j+1|S₊|j⟩ = √((N-j)(j+1))
    T::from_usize_lossy((n_atoms - j) * (j + 1)).sqrt()
}

/// `S₊|ψ⟩`.
pub fn apply_raising<T: Real>(state: &JointState<T>) -> JointState<T> {
    let n_atoms = state.n_atoms();
    let mut out = state.zeros_like();
    for (j, n, c) in state.iter() {
        if j < n_atoms && !c.is_zero() {
            if let Some(o) = out.amplitude_mut(j + 1, n) {
                *o = c * ladder::<T>(n_atoms, j);
            }
        }
    }
    out
}

/// `S₋|ψ⟩`.
pub fn apply_lowering<T: Real>(state: &JointState<T>) -> JointState<T> {
    let n_atoms = state.n_atoms();
    let mut out = state.zeros_like();
    for (j, n, c) in state.iter() {
        if j > 0 && !c.is_zero() {
            if let Some(o) = out.amplitude_mut(j - 1, n) {
                *o = c * ladder::<T>(n_atoms, j - 1);
            }
        }
    }
    out
}

/// `S_z|ψ⟩`.
pub fn apply_sz<T: Real>(state: &JointState<T>) -> JointState<T> {
    let half_n = T::from_usize_lossy(state.n_atoms()) / T::lit(2.0);
    let mut out = state.zeros_like();
    for (j, n, c) in state.iter() {
        if let Some(o) = out.amplitude_mut(j, n) {
            *o = c * (T::from_usize_lossy(j) - half_n);
        }
    }
    out
}

fn combine<T: Real>(a: &JointState<T>, b: &JointState<T>, wa: Complex<T>, wb: Complex<T>) -> JointState<T> {
    let mut out = a.zeros_like();
    for m in 0..a.blocks().len() {
        for ((o, &x), &y) in out.block_mut(m).iter_mut().zip(a.block(m)).zip(b.block(m)) {
            *o = x * wa + y * wb;
        }
    }
    out
}

/// `[S_x|ψ⟩, S_y|ψ⟩, S_z|ψ⟩]`.
fn spin_images<T: Real>(state: &JointState<T>) -> [JointState<T>; 3] {
    let raised = apply_raising(state);
    let lowered = apply_lowering(state);
    let half = T::lit(0.5);
    let sx = combine(
        &raised,
        &lowered,
        Complex::new(half, T::zero()),
        Complex::new(half, T::zero()),
    );
    // (S₊ - S₋)/2i = -i/2 S₊ + i/2 S₋
    let sy = combine(
        &raised,
        &lowered,
        Complex::new(T::zero(), -half),
        Complex::new(T::zero(), half),
    );
    [sx, sy, apply_sz(state)]
}

/// `⟨S⟩`, with `⟨S_z⟩ = Σ (j - N/2)|c|²` and `⟨S₊⟩ = Σ √((N-j)(j+1)) c*_{j+1,n} c_{j,n}`.
///
/// Like every moment here it is taken on the normalized ray, so rounding in
/// `Σ|c|²` does not leak into the squeezing parameter.
pub fn spin_expectations<T: Real>(state: &JointState<T>) -> SpinVector<T> {
    let n_atoms = state.n_atoms();
    let half_n = T::from_usize_lossy(n_atoms) / T::lit(2.0);
    let mut sz = T::zero();
    let mut s_plus = Complex::<T>::zero();
    for (j, n, c) in state.iter() {
        sz = sz + (T::from_usize_lossy(j) - half_n) * c.norm_sqr();
        if j < n_atoms {
            s_plus = s_plus + state.amplitude(j + 1, n).conj() * c * ladder::<T>(n_atoms, j);
        }
    }
    let norm = state.norm();
    SpinVector {
        sx: s_plus.re / norm,
        sy: s_plus.im / norm,
        sz: sz / norm,
    }
}

fn moments<T: Real>(state: &JointState<T>) -> (SpinVector<T>, SpinCovariance<T>) {
    let images = spin_images(state);
    let norm = state.norm();
    let mean: [T; 3] = std::array::from_fn(|a| state.inner(&images[a]).re / norm);
    let mut cov = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let v = images[a].inner(&images[b]).re / norm - mean[a] * mean[b];
            cov[a][b] = v;
            cov[b][a] = v;
        }
    }
    (
        SpinVector {
            sx: mean[0],
            sy: mean[1],
            sz: mean[2],
        },
        cov,
    )
}

/// `cov_ab = ⟨(S_aS_b + S_bS_a)/2⟩ - ⟨S_a⟩⟨S_b⟩`.
pub fn spin_covariance<T: Real>(state: &JointState<T>) -> SpinCovariance<T> {
    moments(state).1
}

fn quadratic_form<T: Real>(cov: &SpinCovariance<T>, u: &[T; 3]) -> T {
    bilinear_form(cov, u, u)
}

fn bilinear_form<T: Real>(cov: &SpinCovariance<T>, u: &[T; 3], v: &[T; 3]) -> T {
    let mut acc = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            acc = acc + u[a] * cov[a][b] * v[b];
        }
    }
    acc
}

fn cross<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalized<T: Real>(v: [T; 3]) -> [T; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Orthonormal `(e₁, e₂)` perpendicular to `direction`.
///
/// `e₁` is x̂ with its component along `direction` removed (exactly x̂ when
/// `⟨S_x⟩ = 0`), `e₂ = e₁ × direction`. At `⟨S⟩ ∥ -ẑ` this gives `(x̂, ŷ)`.
fn perpendicular_frame<T: Real>(direction: &[T; 3]) -> [[T; 3]; 2] {
    let seed = if direction[0].abs() > T::lit(0.9) {
        [T::zero(), T::one(), T::zero()]
    } else {
        [T::one(), T::zero(), T::zero()]
    };
    let dot = seed[0] * direction[0] + seed[1] * direction[1] + seed[2] * direction[2];
    let e1 = normalized([
        seed[0] - dot * direction[0],
        seed[1] - dot * direction[1],
        seed[2] - dot * direction[2],
    ]);
    let e2 = cross(&e1, direction);
    [e1, normalized(e2)]
}

/// `⟨a⟩`, `⟨a²⟩` and `⟨a†a⟩` lead to the quadrature means and variances.
pub fn field_quadratures<T: Real>(state: &JointState<T>) -> FieldQuadratures<T> {
    let mut a1 = Complex::<T>::zero();
    let mut a2 = Complex::<T>::zero();
    let mut number = T::zero();
    for (j, n, c) in state.iter() {
        if c.is_zero() {
            continue;
        }
        let nf = T::from_usize_lossy(n);
        number = number + nf * c.norm_sqr();
        if n >= 1 {
            a1 = a1 + state.amplitude(j, n - 1).conj() * c * nf.sqrt();
        }
        if n >= 2 {
            a2 = a2 + state.amplitude(j, n - 2).conj() * c * (nf * (nf - T::one())).sqrt();
        }
    }
    let norm = state.norm();
    let (a1, a2, number) = (a1 / norm, a2 / norm, number / norm);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let sqrt2 = two.sqrt();
    let q_mean = sqrt2 * a1.re;
    let p_mean = sqrt2 * a1.im;
    let var_q = half + number + a2.re - q_mean * q_mean;
    let var_p = half + number - a2.re - p_mean * p_mean;
    FieldQuadratures {
        q_mean,
        p_mean,
        var_q,
        var_p,
        xi_q: (two * var_q.max(T::zero())).sqrt(),
        xi_p: (two * var_p.max(T::zero())).sqrt(),
    }
}

/// Spin and field squeezing of `state`, labelled with time `gt`.
///
/// Along a unit direction `u ⊥ ⟨S⟩`, `ξ_u = √(2S · uᵀ cov u) / |⟨S⟩|`. The
/// plane minimum is the smaller eigenvalue of `cov` restricted to `(e₁, e₂)`.
pub fn squeezing_parameters<T: Real>(state: &JointState<T>, gt: T) -> Result<SqueezingReport<T>> {
    let (spin, cov) = moments(state);
    let n = T::from_usize_lossy(state.n_atoms());
    let magnitude = spin.magnitude();
    // NaN magnitudes count as degenerate too
    if magnitude.is_nan() || magnitude < T::lit(DEGENERATE_SPIN_THRESHOLD) * n {
        return Err(Error::DegenerateDirection {
            magnitude: magnitude.to_f64_lossy(),
        });
    }
    let s = spin.as_array();
    let direction = [s[0] / magnitude, s[1] / magnitude, s[2] / magnitude];
    let frame = perpendicular_frame(&direction);

    let a = quadratic_form(&cov, &frame[0]);
    let c = quadratic_form(&cov, &frame[1]);
    let b = bilinear_form(&cov, &frame[0], &frame[1]);
    let two = T::lit(2.0);
    let mid = (a + c) / two;
    let radius = (((a - c) / two).powi(2) + b * b).sqrt();
    let lambda_min = (mid - radius).min(a).min(c);
    // q(θ) = mid + (a-c)/2 cos 2θ + b sin 2θ is smallest at 2θ = atan2(-b, -(a-c)/2)
    let mut phi = (-b).atan2(-(a - c) / two) / two;
    if phi < T::zero() {
        phi = phi + T::PI();
    }
    if phi >= T::PI() {
        phi = phi - T::PI();
    }

    let xi = |v: T| (n * v.max(T::zero())).sqrt() / magnitude;
    let field = field_quadratures(state);
    Ok(SqueezingReport {
        gt,
        spin,
        cov,
        frame,
        xi_x: xi(a),
        xi_yprime: xi(c),
        xi_min_plane: xi(lambda_min),
        phi,
        q_mean: field.q_mean,
        p_mean: field.p_mean,
        var_q: field.var_q,
        var_p: field.var_p,
        xi_q: field.xi_q,
        xi_p: field.xi_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::initial_joint_state;
    use crate::dynamics::{Propagator, Trajectory};
    use crate::field;
    use proptest::prelude::*;
    use std::sync::Arc;

    #[test]
    fn ground_state_moments() {
        for n_atoms in [1, 2, 7, 20] {
            let f = field::coherent_coefficients(0.8, None, 1e-12).unwrap();
            let s = initial_joint_state(n_atoms, &f).unwrap();
            let spin = spin_expectations(&s);
            assert_eq!((spin.sx, spin.sy), (0.0, 0.0));
            assert!((spin.sz + n_atoms as f64 / 2.0).abs() < 1e-12);
            let cov = spin_covariance(&s);
            let q = n_atoms as f64 / 4.0;
            let want = [[q, 0.0, 0.0], [0.0, q, 0.0], [0.0, 0.0, 0.0]];
            for a in 0..3 {
                for b in 0..3 {
                    assert!((cov[a][b] - want[a][b]).abs() < 1e-12);
                }
            }
            let r = squeezing_parameters(&s, 0.0).unwrap();
            assert!((r.xi_x - 1.0).abs() < 1e-12);
            assert!((r.xi_yprime - 1.0).abs() < 1e-12);
            assert!((r.xi_min_plane - 1.0).abs() < 1e-12);
            assert_eq!(r.frame[0], [1.0, 0.0, 0.0]);
            assert_eq!(r.frame[1], [0.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn coherent_field_at_start() {
        let alpha = 1.3;
        let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
        let q = field_quadratures(&initial_joint_state(3, &f).unwrap());
        assert!((q.q_mean - 2f64.sqrt() * alpha).abs() < 1e-12);
        assert!(q.p_mean.abs() < 1e-12);
        assert!((q.var_q - 0.5).abs() < 1e-10);
        assert!((q.var_p - 0.5).abs() < 1e-10);
        assert!((q.xi_q - 1.0).abs() < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_quadrature() {
        for r in [0.3f64, 0.7, 1.1] {
            let f = field::squeezed_vacuum_coefficients(r, None, 1e-12).unwrap();
            let q = field_quadratures(&initial_joint_state(2, &f).unwrap());
            assert!((q.xi_q - (-r).exp()).abs() < 1e-10, "r={r}: {}", q.xi_q);
            assert!((q.xi_p - r.exp()).abs() < 1e-9);
        }
        let f = field::squeezed_vacuum_coefficients(0.7f64, None, 1e-12).unwrap();
        let q = field_quadratures(&initial_joint_state(2, &f).unwrap());
        assert!((q.xi_q - 0.4966).abs() < 1e-4);
    }

    #[test]
    fn degenerate_direction() {
        // equal superposition of j = 0 and j = 2 for two atoms has ⟨S⟩ = 0
        let f = field::fock_coefficients(0, 2).unwrap();
        let mut s = initial_joint_state(2, &f).unwrap();
        let amp = Complex::new(0.5f64.sqrt(), 0.0);
        *s.amplitude_mut(0, 0).unwrap() = amp;
        *s.amplitude_mut(2, 0).unwrap() = amp;
        assert!(matches!(
            squeezing_parameters(&s, 0.0),
            Err(Error::DegenerateDirection { .. })
        ));
    }

    fn trajectory(n_atoms: usize, f: &field::FieldStateSpec<f64>) -> Trajectory<f64> {
        let p = Arc::new(Propagator::new(n_atoms, f.n_max()).unwrap());
        Trajectory::new(p, &initial_joint_state(n_atoms, f).unwrap()).unwrap()
    }

    #[test]
    fn two_atom_small_alpha_spin() {
        let alpha = 0.1;
        let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
        let traj = trajectory(2, &f);
        for gt in [0.1, 0.5, 1.3, 7.0] {
            let spin = spin_expectations(&traj.at(gt));
            let w = 2f64.sqrt() * gt;
            assert!(spin.sx.abs() < 1e-14);
            assert!((spin.sy - 2f64.sqrt() * alpha * w.sin()).abs() < 3.0 * alpha.powi(3));
            assert!((spin.sz + 1.0 - alpha * alpha * w.sin().powi(2)).abs() < 3.0 * alpha.powi(4));
        }
    }

    #[test]
    fn many_atom_small_alpha_sz() {
        let (n_atoms, alpha) = (20usize, 0.1);
        let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
        let traj = trajectory(n_atoms, &f);
        for gt in [0.05, 0.3, 1.0, 4.0] {
            let spin = spin_expectations(&traj.at(gt));
            let want = -(n_atoms as f64) / 2.0 + alpha * alpha * ((n_atoms as f64).sqrt() * gt).sin().powi(2);
            assert!((spin.sz - want).abs() < 3.0 * alpha.powi(4));
        }
    }

    #[test]
    fn two_atom_variance_decomposition() {
        // (ΔS_x)² = ½ + Σ_n {½|c_{1,n}|² + Re(c*_{2,n} c_{0,n})} in excitation-index labels
        let f = field::coherent_coefficients(0.7, None, 1e-12).unwrap();
        let traj = trajectory(2, &f);
        for gt in [0.3, 2.2, 40.0] {
            let s = traj.at(gt);
            let cov = spin_covariance(&s);
            let sum: f64 = (0..=s.n_max())
                .map(|n| 0.5 * s.amplitude(1, n).norm_sqr() + (s.amplitude(2, n).conj() * s.amplitude(0, n)).re)
                .sum();
            assert!((cov[0][0] - (0.5 + sum)).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_field_variance_floor() {
        for n in 0..4 {
            let f = field::fock_coefficients(n, n).unwrap();
            let traj = trajectory(2, &f);
            let mut gt = 0.0;
            while gt < 50.0 {
                assert!(spin_covariance(&traj.at(gt))[0][0] >= 0.5 - 1e-12);
                gt += 0.13;
            }
        }
    }

    #[test]
    fn two_atom_squeezing_minimum() {
        // sin(√2 gt) = 0 and cos(√6 gt) = -1 are never met simultaneously, so
        // approach the condition through √2 gt = kπ with √6 gt ≈ π mod 2π
        let alpha = 0.1;
        let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
        let traj = trajectory(2, &f);
        let best = (1..400)
            .map(|k| k as f64 * std::f64::consts::PI / 2f64.sqrt())
            .min_by(|a, b| {
                let da = ((6f64.sqrt() * a).cos() + 1.0).abs();
                let db = ((6f64.sqrt() * b).cos() + 1.0).abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        let r = squeezing_parameters(&traj.at(best), best).unwrap();
        assert!(
            (r.xi_x - (1.0 - 2.0 / 3.0 * alpha * alpha)).abs() < 5e-5 + 1e-4,
            "{}",
            r.xi_x
        );
    }

    #[test]
    fn two_atom_axes_are_mirror_images() {
        let alpha = 0.1;
        let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
        let traj = trajectory(2, &f);
        for gt in [0.4, 1.7, 5.5, 31.0] {
            let r = squeezing_parameters(&traj.at(gt), gt).unwrap();
            assert!((r.xi_x + r.xi_yprime - 2.0).abs() < 5.0 * alpha.powi(4));
        }
    }

    #[test]
    fn minimum_uncertainty_field() {
        let f = field::coherent_coefficients(0.05, None, 1e-12).unwrap();
        let traj = trajectory(2, &f);
        let mut gt = 0.0;
        while gt <= 50.0 {
            let q = field_quadratures(&traj.at(gt));
            assert!((q.xi_q * q.xi_p - 1.0).abs() < 1e-4);
            gt += 0.05;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn uncertainty_relations(
            n_atoms in 1usize..10,
            alpha in 0.0f64..2.0,
            r in 0.0f64..0.8,
            use_squeezed in any::<bool>(),
            gt in 0.0f64..200.0,
        ) {
            let f = if use_squeezed {
                field::squeezed_vacuum_coefficients(r, None, 1e-12).unwrap()
            } else {
                field::coherent_coefficients(alpha, None, 1e-12).unwrap()
            };
            let s = trajectory(n_atoms, &f).at(gt);
            let q = field_quadratures(&s);
            prop_assert!(q.var_q * q.var_p >= 0.25 - 1e-9);
            if let Ok(rep) = squeezing_parameters(&s, gt) {
                prop_assert!(rep.spin.magnitude() <= n_atoms as f64 / 2.0 + 1e-10);
                prop_assert!(rep.perpendicular_uncertainty_product() >= rep.spin.magnitude() / 2.0 - 1e-9);
                prop_assert!(rep.xi_min_plane <= rep.xi_x.min(rep.xi_yprime) + 1e-12);
                for a in 0..3 {
                    for b in 0..3 {
                        prop_assert!((rep.cov[a][b] - rep.cov[b][a]).abs() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn fock_fields_never_squeeze(n_atoms in 1usize..=10, n in 0usize..5, gt in 0.0f64..200.0) {
            let f = field::fock_coefficients(n, n).unwrap();
            let s = trajectory(n_atoms, &f).at(gt);
            prop_assert!(spin_covariance(&s)[0][0] >= n_atoms as f64 / 4.0 - 1e-9 || n_atoms == 1);
            if let Ok(rep) = squeezing_parameters(&s, gt) {
                prop_assert!(rep.xi_min_plane >= 1.0 - 1e-9);
            }
        }

        #[test]
        fn plane_minimum_ignores_frame_labels(alpha in 0.05f64..1.5, gt in 0.0f64..60.0) {
            let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
            let rep = squeezing_parameters(&trajectory(3, &f).at(gt), gt).unwrap();
            // swap e₁ and e₂ and recompute from the covariance
            let (e1, e2) = (rep.frame[1], rep.frame[0]);
            let a = quadratic_form(&rep.cov, &e1);
            let c = quadratic_form(&rep.cov, &e2);
            let b = bilinear_form(&rep.cov, &e1, &e2);
            let lam = (a + c) / 2.0 - (((a - c) / 2.0).powi(2) + b * b).sqrt();
            let xi = (3.0 * lam.max(0.0)).sqrt() / rep.spin.magnitude();
            prop_assert!((xi - rep.xi_min_plane).abs() < 1e-10);
        }
    }
}
