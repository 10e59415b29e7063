//! Initial cavity-field states in the Fock basis.
//!
//! Coefficients are generated by ratio recurrences, never by factorials, so
//! cutoffs of several hundred photons stay finite.

use std::path::Path;

use num_complex::Complex;
use num_traits::Zero;

use crate::basis::FockTruncation;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Deviation of the input norm² from one above which a custom state is
/// reported as renormalized.
pub const RENORMALIZE_FLAG_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind<T> {
    Coherent { alpha: T },
    SqueezedVacuum { r: T },
    Fock { n: usize },
    Custom,
}

impl<T> FieldKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Coherent { .. } => "coherent",
            Self::SqueezedVacuum { .. } => "squeezed-vacuum",
            Self::Fock { .. } => "fock",
            Self::Custom => "custom",
        }
    }
}

/// Normalized field coefficients `c_0 ..= c_{n_max}` plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldStateSpec<T> {
    kind: FieldKind<T>,
    coefficients: Vec<Complex<T>>,
    truncation: FockTruncation<T>,
    input_norm_sqr: T,
    renormalized: bool,
}

impl<T: Real> FieldStateSpec<T> {
    pub fn kind(&self) -> &FieldKind<T> {
        &self.kind
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn truncation(&self) -> FockTruncation<T> {
        self.truncation
    }

    pub fn n_max(&self) -> usize {
        self.truncation.n_max
    }

    /// `Σ|c_n|²` of the supplied vector, before normalization.
    pub fn input_norm_sqr(&self) -> T {
        self.input_norm_sqr
    }

    /// True when a custom state's input norm² deviated from one by more than
    /// [`RENORMALIZE_FLAG_THRESHOLD`].
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// `⟨a†a⟩`.
    pub fn mean_photon_number(&self) -> T {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| T::from_usize_lossy(n) * c.norm_sqr())
            .sum()
    }

    /// Scalar parameter that defines the state, if any.
    pub fn parameter(&self) -> Option<T> {
        match self.kind {
            FieldKind::Coherent { alpha } => Some(alpha),
            FieldKind::SqueezedVacuum { r } => Some(r),
            FieldKind::Fock { n } => Some(T::from_usize_lossy(n)),
            FieldKind::Custom => None,
        }
    }

    /// Same state on a larger photon cutoff.
    pub fn padded_to(&self, n_max: usize) -> Self {
        let mut out = self.clone();
        if n_max > out.truncation.n_max {
            out.coefficients.resize(n_max + 1, Complex::zero());
            out.truncation.n_max = n_max;
        }
        out
    }
}

fn check_param<T: Real>(name: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value < T::zero() {
        return Err(Error::InvalidParameter {
            name,
            value: value.to_f64_lossy(),
        });
    }
    Ok(())
}

fn normalize<T: Real>(coeffs: &mut [Complex<T>]) -> T {
    let norm_sqr: T = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let inv = norm_sqr.sqrt().recip();
    for c in coeffs.iter_mut() {
        *c = *c * inv;
    }
    norm_sqr
}

/// Default cutoff `ceil(α² + 10α + 10)` for a coherent state.
pub fn default_coherent_cutoff<T: Real>(alpha: T) -> usize {
    let n = alpha * alpha + T::lit(10.0) * alpha + T::lit(10.0);
    n.ceil().to_usize().unwrap_or(usize::MAX)
}

/// Coherent state `c_k = α^k e^{-α²/2} / √k!` for real `α ≥ 0`.
///
/// With `n_max = None` the cutoff is [`default_coherent_cutoff`]. Fails when
/// the discarded Poisson tail exceeds `eps_tail`.
pub fn coherent_coefficients<T: Real>(alpha: T, n_max: Option<usize>, eps_tail: T) -> Result<FieldStateSpec<T>> {
    check_param("alpha", alpha)?;
    let n_max = n_max.unwrap_or_else(|| default_coherent_cutoff(alpha));

    // ln c_k, accumulated so that large α does not underflow c_0 before the peak
    let ln_alpha = alpha.ln();
    let half = T::lit(0.5);
    let mut ln_c = -half * alpha * alpha;
    let mut coefficients = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        if k > 0 {
            ln_c = ln_c + ln_alpha - half * T::from_usize_lossy(k).ln();
        }
        coefficients.push(Complex::new(ln_c.exp(), T::zero()));
    }

    // Poisson tail beyond n_max; once k + 1 > α² the term ratio α²/(k+1)
    // is below one and decreasing, which bounds the remainder geometrically
    let a2 = alpha * alpha;
    let mut tail = T::zero();
    let mut ln_p = T::lit(2.0) * ln_c;
    let mut k = n_max;
    loop {
        k += 1;
        ln_p = ln_p + T::lit(2.0) * ln_alpha - T::from_usize_lossy(k).ln();
        let p = ln_p.exp();
        tail = tail + p;
        let q = a2 / T::from_usize_lossy(k + 1);
        if q < T::one() {
            let rest = p * q / (T::one() - q);
            if rest <= tail * T::epsilon() || p.is_zero() {
                tail = tail + rest;
                break;
            }
        }
        if k > n_max + 100_000 {
            tail = T::infinity();
            break;
        }
    }
    if tail > eps_tail {
        return Err(Error::TruncationUnmet {
            n_max,
            tail: tail.to_f64_lossy(),
            eps_tail: eps_tail.to_f64_lossy(),
        });
    }

    let input_norm_sqr = normalize(&mut coefficients);
    Ok(FieldStateSpec {
        kind: FieldKind::Coherent { alpha },
        coefficients,
        truncation: FockTruncation {
            n_max,
            tail_mass_bound: tail,
        },
        input_norm_sqr,
        renormalized: false,
    })
}

/// Even-photon amplitudes of the squeezed vacuum, `c_0 = 1/√cosh r` and
/// `c_{k+2} = -tanh r · √((k+1)/(k+2)) · c_k`, up to and including `n_max`,
/// plus an upper bound on the discarded tail.
fn squeezed_vacuum_series<T: Real>(r: T, n_max: usize) -> (Vec<Complex<T>>, T) {
    let t = r.tanh();
    let mut coefficients = vec![Complex::zero(); n_max + 1];
    let mut ck = r.cosh().sqrt().recip();
    let mut k = 0usize;
    while k <= n_max {
        coefficients[k] = Complex::new(ck, T::zero());
        ck = ck * (-t) * (T::from_usize_lossy(k + 1) / T::from_usize_lossy(k + 2)).sqrt();
        k += 2;
    }
    // |c_{k+2}|²/|c_k|² < tanh² r, so the remaining mass is geometric-bounded
    let t2 = t * t;
    let tail = if t2 < T::one() {
        ck * ck / (T::one() - t2)
    } else {
        T::infinity()
    };
    (coefficients, tail)
}

/// Smallest even cutoff whose squeezed-vacuum tail bound is below `eps_tail`.
pub fn default_squeezed_cutoff<T: Real>(r: T, eps_tail: T) -> Option<usize> {
    let t2 = r.tanh().powi(2);
    if t2 >= T::one() {
        return None;
    }
    let mut p = r.cosh().recip();
    let mut k = 0usize;
    while k < 1_000_000 {
        // p = |c_{k+2}|²
        p = p * t2 * T::from_usize_lossy(k + 1) / T::from_usize_lossy(k + 2);
        if p / (T::one() - t2) < eps_tail {
            return Some(k);
        }
        k += 2;
    }
    None
}

/// Squeezed vacuum with real squeezing parameter `r ≥ 0`.
///
/// The truncated vector is renormalized once the tail bound is met; with
/// `n_max = None` the cutoff is [`default_squeezed_cutoff`].
pub fn squeezed_vacuum_coefficients<T: Real>(r: T, n_max: Option<usize>, eps_tail: T) -> Result<FieldStateSpec<T>> {
    check_param("r", r)?;
    let unmet = |n_max: usize, tail: T| Error::TruncationUnmet {
        n_max,
        tail: tail.to_f64_lossy(),
        eps_tail: eps_tail.to_f64_lossy(),
    };
    let n_max = match n_max {
        Some(n) => n,
        None => default_squeezed_cutoff(r, eps_tail).ok_or_else(|| unmet(0, T::infinity()))?,
    };
    let (mut coefficients, tail) = squeezed_vacuum_series(r, n_max);
    if tail > eps_tail {
        return Err(unmet(n_max, tail));
    }
    let input_norm_sqr = normalize(&mut coefficients);
    Ok(FieldStateSpec {
        kind: FieldKind::SqueezedVacuum { r },
        coefficients,
        truncation: FockTruncation {
            n_max,
            tail_mass_bound: tail,
        },
        input_norm_sqr,
        renormalized: false,
    })
}

/// Number state `|n⟩` on the cutoff `n_max`.
pub fn fock_coefficients<T: Real>(n: usize, n_max: usize) -> Result<FieldStateSpec<T>> {
    if n > n_max {
        return Err(Error::FockAboveCutoff { n, n_max });
    }
    let mut coefficients = vec![Complex::zero(); n_max + 1];
    coefficients[n] = Complex::new(T::one(), T::zero());
    Ok(FieldStateSpec {
        kind: FieldKind::Fock { n },
        coefficients,
        truncation: FockTruncation {
            n_max,
            tail_mass_bound: T::zero(),
        },
        input_norm_sqr: T::one(),
        renormalized: false,
    })
}

/// Arbitrary coefficient list, normalized on construction.
///
/// `n_max` defaults to `coeffs.len() - 1`. The result is flagged as
/// renormalized when the input norm² is off by more than
/// [`RENORMALIZE_FLAG_THRESHOLD`].
pub fn custom_coefficients<T: Real>(coeffs: &[Complex<T>], n_max: Option<usize>) -> Result<FieldStateSpec<T>> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroField);
    }
    if let Some(bad) = coeffs.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "coefficient",
            value: bad.norm().to_f64_lossy(),
        });
    }
    let n_max = n_max.unwrap_or(coeffs.len() - 1);
    if coeffs.len() > n_max + 1 {
        return Err(Error::TooManyCoefficients {
            len: coeffs.len(),
            allowed: n_max + 1,
        });
    }
    let mut coefficients = coeffs.to_vec();
    coefficients.resize(n_max + 1, Complex::zero());
    let input_norm_sqr = normalize(&mut coefficients);
    let renormalized = (input_norm_sqr - T::one()).abs() > T::lit(RENORMALIZE_FLAG_THRESHOLD);
    Ok(FieldStateSpec {
        kind: FieldKind::Custom,
        coefficients,
        truncation: FockTruncation {
            n_max,
            tail_mass_bound: T::zero(),
        },
        input_norm_sqr,
        renormalized,
    })
}

/// Parses the plain-text coefficient format: one `re im` pair per line, the
/// index being the position among non-comment lines. `#` starts a comment.
pub fn parse_coefficients<T: Real>(text: &str) -> Result<Vec<Complex<T>>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| Error::CoefficientParse {
            line: lineno + 1,
            reason,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad(format!("expected `re im`, found {} fields", fields.len())));
        }
        let parse = |s: &str| -> Result<T> {
            let v: f64 = s.parse().map_err(|_| bad(format!("`{s}` is not a number")))?;
            if !v.is_finite() {
                return Err(bad(format!("`{s}` is not finite")));
            }
            Ok(T::lit(v))
        };
        out.push(Complex::new(parse(fields[0])?, parse(fields[1])?));
    }
    Ok(out)
}

/// Reads a custom field from a coefficient file.
pub fn read_custom_file<T: Real>(path: &Path, n_max: Option<usize>) -> std::io::Result<Result<FieldStateSpec<T>>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_coefficients(&text).and_then(|c| {
        if c.is_empty() {
            Err(Error::ZeroField)
        } else {
            custom_coefficients(&c, n_max)
        }
    }))
}
