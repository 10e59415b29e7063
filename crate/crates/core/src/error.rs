use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of atoms must be at least 1")]
    NoAtoms,

    #[error("parameter `{name}` must be finite and non-negative, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("photon cutoff {n_max} leaves tail mass {tail:.3e}, above the bound {eps_tail:.3e}")]
    TruncationUnmet { n_max: usize, tail: f64, eps_tail: f64 },

    #[error("Fock state |{n}> lies above the photon cutoff {n_max}")]
    FockAboveCutoff { n: usize, n_max: usize },

    #[error("custom field has {len} coefficients but the cutoff allows {allowed}")]
    TooManyCoefficients { len: usize, allowed: usize },

    #[error("custom field coefficients are all zero")]
    ZeroField,

    #[error("field coefficients are not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("state was built for (N={expected_atoms}, n_max={expected_n_max}), got (N={atoms}, n_max={n_max})")]
    BasisMismatch {
        expected_atoms: usize,
        expected_n_max: usize,
        atoms: usize,
        n_max: usize,
    },

    #[error("closed-form propagator is only defined for two atoms, got {0}")]
    NotTwoAtoms(usize),

    #[error("mean spin |<S>| = {magnitude:.3e} is too small to define perpendicular directions")]
    DegenerateDirection { magnitude: f64 },

    #[error("time grid step {step} exceeds one twentieth of the fast period {fast_period}")]
    GridTooCoarse { step: f64, fast_period: f64 },

    #[error("time grid needs a positive finite gt_max and step")]
    InvalidGrid,

    #[error("scan needs at least one parameter value")]
    EmptyScan,

    #[error("scan axis `{axis}` is incompatible with a {field} field")]
    IncompatibleScan { axis: &'static str, field: &'static str },

    #[error("unknown analytic model `{0}`")]
    UnknownModel(String),

    #[error("analytic model `{model}` needs a {needs} field")]
    ModelFieldMismatch { model: &'static str, needs: &'static str },

    #[error("malformed coefficient file line {line}: {reason}")]
    CoefficientParse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
