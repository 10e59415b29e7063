//! Exact dynamics of `N` two-level atoms resonantly coupled to one cavity
//! mode, with spin (Wineland) and field-quadrature squeezing diagnostics.
//!
//! The Hamiltonian `g(a S₊ + a† S₋)` conserves `M = j + n`, so evolution is
//! block diagonal. Each block is a real symmetric tridiagonal matrix,
//! diagonalized once and reused at every time. Closed-form small-`α`,
//! small-`r` and Holstein-Primakoff approximations live in [`analytic`] for
//! comparison; sweeps and CSV output live in [`scan`].
//!
//! Everything is generic over [`Real`] (`f32` or `f64`). The unsuffixed
//! aliases below fix the scalar to `f64`.
//!
//! ```
//! use tc_squeeze::{coherent_coefficients, optimal_squeezing, DEFAULT_EPS_TAIL};
//!
//! let field = coherent_coefficients(0.4, None, DEFAULT_EPS_TAIL).unwrap();
//! let best = optimal_squeezing(2, &field, 30.0).unwrap();
//! assert!(best.xi_min < 0.95);
//! ```

pub mod analytic;
pub mod basis;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod field;
pub mod observables;
pub mod scalar;
pub mod scan;

pub use analytic::{AnalyticModel, HPParameters, HpEstimate};
pub use basis::{build_basis, initial_joint_state, Basis, ExcitationBlock, FockTruncation, JointState, SpinManifold};
pub use dynamics::{evolve, evolve_n2_closed_form, BlockHamiltonian, Propagator, SpectralCache, Trajectory};
pub use error::{Error, Result};
pub use field::{
    coherent_coefficients, custom_coefficients, fock_coefficients, squeezed_vacuum_coefficients, FieldKind,
    FieldStateSpec,
};
pub use observables::{
    field_quadratures, spin_covariance, spin_expectations, squeezing_parameters, FieldQuadratures, SpinVector,
    SqueezingAxis, SqueezingReport,
};
pub use scalar::{Amplitude, Real};
pub use scan::{
    analytic_series, compare_exact_analytic, envelope_minima, optimal_field_squeezing, optimal_squeezing,
    scan_parameter, time_series, Column, Comparison, FieldTemplate, Optimum, ScanAxis, ScanResult, ScanRow, ScanSpec,
    TimeGrid,
};

/// Default bound on the discarded photon-number probability.
pub const DEFAULT_EPS_TAIL: f64 = 1e-12;

pub type State = JointState<f64>;
pub type Field = FieldStateSpec<f64>;
pub type Report = SqueezingReport<f64>;
pub type Grid = TimeGrid<f64>;
pub type Series = ScanResult<f64>;

pub type StateF32 = JointState<f32>;
pub type FieldF32 = FieldStateSpec<f32>;
pub type ReportF32 = SqueezingReport<f32>;
pub type GridF32 = TimeGrid<f32>;
pub type SeriesF32 = ScanResult<f32>;
