//! Time series, optima, envelope minima and parameter sweeps.

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::analytic::{AnalyticModel, ModelInput, ModelObservable};
use crate::basis::initial_joint_state;
use crate::dynamics::{SpectralCache, Trajectory};
use crate::error::{Error, Result};
use crate::field::{self, FieldKind, FieldStateSpec};
use crate::observables::{field_quadratures, squeezing_parameters, SqueezingReport};
use crate::scalar::Real;

/// Samples per fast period on the default grid.
pub const SAMPLES_PER_FAST_PERIOD: usize = 20;

/// Golden-section refinement stops once the bracket is this narrow in `gt`.
pub const REFINE_TOLERANCE: f64 = 1e-6;

/// Number of lowest grid minima polished by golden-section search.
pub const REFINE_CANDIDATES: usize = 32;

/// `π/√N`, the period of the fastest oscillation of `ξ(gt)`.
pub fn fast_period<T: Real>(n_atoms: usize) -> T {
    T::PI() / T::from_usize_lossy(n_atoms).sqrt()
}

/// `4π√N`, one full modulation period of the large-`N` dynamics.
pub fn modulation_period<T: Real>(n_atoms: usize) -> T {
    T::lit(4.0) * T::PI() * T::from_usize_lossy(n_atoms).sqrt()
}

/// Uniform samples `0, h, 2h, … ≤ gt_max`, plus `gt_max` itself when it is
/// not already a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub gt_max: T,
    pub step: T,
    pub fast_period: T,
}

impl<T: Real> TimeGrid<T> {
    /// `step` defaults to one twentieth of the fast period and may not exceed it.
    pub fn new(n_atoms: usize, gt_max: T, step: Option<T>) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::NoAtoms);
        }
        let fast_period = fast_period::<T>(n_atoms);
        let limit = fast_period / T::from_usize_lossy(SAMPLES_PER_FAST_PERIOD);
        let step = step.unwrap_or(limit);
        if !(gt_max.is_finite() && gt_max > T::zero() && step.is_finite() && step > T::zero()) {
            return Err(Error::InvalidGrid);
        }
        if step > limit * (T::one() + T::lit(1e-9)) {
            return Err(Error::GridTooCoarse {
                step: step.to_f64_lossy(),
                fast_period: fast_period.to_f64_lossy(),
            });
        }
        Ok(Self {
            gt_max,
            step,
            fast_period,
        })
    }

    pub fn points(&self) -> Vec<T> {
        let count = (self.gt_max / self.step).floor().to_usize().unwrap_or(0);
        let mut out: Vec<T> = (0..=count).map(|i| T::from_usize_lossy(i) * self.step).collect();
        while out.last().is_some_and(|&t| t > self.gt_max) {
            out.pop();
        }
        let last = *out.last().unwrap_or(&T::zero());
        if self.gt_max - last > self.step * T::lit(1e-9) {
            out.push(self.gt_max);
        }
        out
    }

    /// Samples in one fast period, rounded.
    pub fn samples_per_fast_period(&self) -> usize {
        (self.fast_period / self.step).round().to_usize().unwrap_or(1).max(1)
    }
}

/// Observable columns a scan can be optimized or enveloped over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    XiX,
    XiYPrime,
    XiMinPlane,
    XiQ,
    XiP,
}

impl Column {
    fn is_field(self) -> bool {
        matches!(self, Self::XiQ | Self::XiP)
    }
}

/// Per-row conditions worth flagging in CSV output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowFlags {
    /// `⟨S⟩` vanished; spin columns are NaN.
    pub degenerate: bool,
    /// The custom input state had to be renormalized.
    pub renormalized: bool,
}

impl std::fmt::Display for RowFlags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.degenerate {
            parts.push("degenerate");
        }
        if self.renormalized {
            parts.push("renormalized");
        }
        f.write_str(&parts.join("|"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow<T> {
    /// Swept value, or the field's own parameter in a time series (NaN for custom states).
    pub param: T,
    pub gt: T,
    pub xi_x: T,
    pub xi_yprime: T,
    pub xi_min_plane: T,
    pub xi_q: T,
    pub xi_p: T,
    pub flags: RowFlags,
}

impl<T: Real> ScanRow<T> {
    pub fn from_report(param: T, report: &SqueezingReport<T>, flags: RowFlags) -> Self {
        Self {
            param,
            gt: report.gt,
            xi_x: report.xi_x,
            xi_yprime: report.xi_yprime,
            xi_min_plane: report.xi_min_plane,
            xi_q: report.xi_q,
            xi_p: report.xi_p,
            flags,
        }
    }

    pub fn get(&self, column: Column) -> T {
        match column {
            Column::XiX => self.xi_x,
            Column::XiYPrime => self.xi_yprime,
            Column::XiMinPlane => self.xi_min_plane,
            Column::XiQ => self.xi_q,
            Column::XiP => self.xi_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimumRow<T> {
    pub param: T,
    pub gt_at_min: T,
    pub xi_min: T,
    /// `x`, `yprime`, `phi=<rad>` for spin minima; `Q` or `P` for the field.
    pub axis: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure<T> {
    pub param: T,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult<T> {
    pub rows: Vec<ScanRow<T>>,
    pub minima: Vec<MinimumRow<T>>,
    /// Lower-envelope minima of `xi_min_plane`; filled for time series only.
    pub envelope_minima: Vec<(T, T)>,
    pub failures: Vec<ScanFailure<T>>,
    /// Grid of a time series; `None` for parameter sweeps.
    pub grid: Option<TimeGrid<T>>,
}

/// Best value of one column over a grid, polished by golden-section search.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<T> {
    pub xi_min: T,
    pub gt_at_min: T,
    pub axis: String,
    /// Full report at `gt_at_min`.
    pub report: SqueezingReport<T>,
    /// Best raw grid sample, before refinement.
    pub grid_gt: T,
    pub grid_xi: T,
}

/// Evaluates one column at `gt`; NaN when the spin direction is undefined.
fn column_value<T: Real>(traj: &Trajectory<T>, gt: T, column: Column) -> T {
    let state = traj.at(gt);
    if column.is_field() {
        let q = field_quadratures(&state);
        return if column == Column::XiQ { q.xi_q } else { q.xi_p };
    }
    match squeezing_parameters(&state, gt) {
        Ok(r) => ScanRow::from_report(T::nan(), &r, RowFlags::default()).get(column),
        Err(_) => T::nan(),
    }
}

fn nan_as_inf<T: Real>(v: T) -> T {
    if v.is_nan() {
        T::infinity()
    } else {
        v
    }
}

/// Golden-section minimization of `f` on `[lo, hi]`.
fn golden_section<T: Real>(mut lo: T, mut hi: T, tol: T, f: impl Fn(T) -> T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = nan_as_inf(f(x1));
    let mut f2 = nan_as_inf(f(x2));
    // the cap matters in single precision, where tol can sit below one ulp of gt
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = nan_as_inf(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = nan_as_inf(f(x2));
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn report_at<T: Real>(traj: &Trajectory<T>, gt: T) -> Result<SqueezingReport<T>> {
    squeezing_parameters(&traj.at(gt), gt)
}

fn axis_label<T: Real>(column: Column, report: &SqueezingReport<T>) -> String {
    match column {
        Column::XiQ => "Q".into(),
        Column::XiP => "P".into(),
        Column::XiX => "x".into(),
        Column::XiYPrime => "yprime".into(),
        Column::XiMinPlane => report.axis().to_string(),
    }
}

/// Minimum of `column` over `grid`, refined by golden-section search.
///
/// On a 20-per-period grid, sampling error near a minimum is comparable to
/// the spread between nearly degenerate dips, so the lowest sampled cell is
/// not always the lowest true minimum. The [`REFINE_CANDIDATES`] lowest grid
/// local minima are each refined within their two neighbouring cells, and a
/// refined value is kept only if it beats the best grid sample.
pub fn optimize_column<T: Real>(traj: &Trajectory<T>, grid: &TimeGrid<T>, column: Column) -> Result<Optimum<T>> {
    let points = grid.points();
    let values: Vec<T> = points.iter().map(|&t| column_value(traj, t, column)).collect();
    let by_value = |a: &usize, b: &usize| values[*a].partial_cmp(&values[*b]).unwrap_or(std::cmp::Ordering::Equal);
    let Some(best) = (0..values.len()).filter(|&i| !values[i].is_nan()).min_by(by_value) else {
        // every sample degenerate: surface the error from the first one
        return Err(report_at(traj, points[0]).err().unwrap_or(Error::InvalidGrid));
    };
    let (grid_gt, grid_xi) = (points[best], values[best]);

    let v = |i: usize| nan_as_inf(values[i]);
    let last = values.len() - 1;
    let mut candidates: Vec<usize> = (0..values.len())
        .filter(|&i| !values[i].is_nan())
        .filter(|&i| (i == 0 || v(i) <= v(i - 1)) && (i == last || v(i) <= v(i + 1)))
        .collect();
    candidates.sort_by(by_value);
    candidates.truncate(REFINE_CANDIDATES);
    if !candidates.contains(&best) {
        candidates.push(best);
    }

    let (mut gt_at_min, mut xi_min) = (grid_gt, grid_xi);
    for i in candidates {
        let lo = points[i.saturating_sub(1)];
        let hi = points[(i + 1).min(last)];
        if hi <= lo {
            continue;
        }
        let (t, val) = golden_section(lo, hi, T::lit(REFINE_TOLERANCE), |t| column_value(traj, t, column));
        if val < xi_min {
            gt_at_min = t;
            xi_min = val;
        }
    }
    let report = report_at(traj, gt_at_min)?;
    Ok(Optimum {
        xi_min,
        gt_at_min,
        axis: axis_label(column, &report),
        report,
        grid_gt,
        grid_xi,
    })
}

fn trajectory<T: Real>(cache: &SpectralCache<T>, n_atoms: usize, field: &FieldStateSpec<T>) -> Result<Trajectory<T>> {
    let propagator = cache.get(n_atoms, field.n_max())?;
    Trajectory::new(Arc::clone(&propagator), &initial_joint_state(n_atoms, field)?)
}

/// Best `xi_min_plane` over `[0, gt_max]` on the default grid.
pub fn optimal_squeezing<T: Real>(n_atoms: usize, field: &FieldStateSpec<T>, gt_max: T) -> Result<Optimum<T>> {
    let grid = TimeGrid::new(n_atoms, gt_max, None)?;
    let traj = trajectory(&SpectralCache::new(), n_atoms, field)?;
    optimize_column(&traj, &grid, Column::XiMinPlane)
}

/// Best `ξ_Q` and `ξ_P` over `[0, gt_max]` on the default grid.
pub fn optimal_field_squeezing<T: Real>(
    n_atoms: usize,
    field: &FieldStateSpec<T>,
    gt_max: T,
) -> Result<(Optimum<T>, Optimum<T>)> {
    let grid = TimeGrid::new(n_atoms, gt_max, None)?;
    let traj = trajectory(&SpectralCache::new(), n_atoms, field)?;
    Ok((
        optimize_column(&traj, &grid, Column::XiQ)?,
        optimize_column(&traj, &grid, Column::XiP)?,
    ))
}

/// Rows for one time series along an existing trajectory.
pub fn series_rows<T: Real>(traj: &Trajectory<T>, grid: &TimeGrid<T>, param: T, renormalized: bool) -> Vec<ScanRow<T>> {
    grid.points()
        .into_iter()
        .map(|gt| {
            let state = traj.at(gt);
            let flags = RowFlags {
                degenerate: false,
                renormalized,
            };
            match squeezing_parameters(&state, gt) {
                Ok(r) => ScanRow::from_report(param, &r, flags),
                Err(_) => {
                    let q = field_quadratures(&state);
                    ScanRow {
                        param,
                        gt,
                        xi_x: T::nan(),
                        xi_yprime: T::nan(),
                        xi_min_plane: T::nan(),
                        xi_q: q.xi_q,
                        xi_p: q.xi_p,
                        flags: RowFlags {
                            degenerate: true,
                            ..flags
                        },
                    }
                }
            }
        })
        .collect()
}

/// One row per grid point. The minimum is the best grid sample of
/// `xi_min_plane`, and the envelope minima are taken over the same column.
pub fn time_series<T: Real>(n_atoms: usize, field: &FieldStateSpec<T>, grid: &TimeGrid<T>) -> Result<ScanResult<T>> {
    let traj = trajectory(&SpectralCache::new(), n_atoms, field)?;
    let param = field.parameter().unwrap_or_else(T::nan);
    let rows = series_rows(&traj, grid, param, field.was_renormalized());
    let mut result = ScanResult {
        rows,
        minima: Vec::new(),
        envelope_minima: Vec::new(),
        failures: Vec::new(),
        grid: Some(*grid),
    };
    if let Some(best) = result.rows.iter().filter(|r| !r.xi_min_plane.is_nan()).min_by(|a, b| {
        a.xi_min_plane
            .partial_cmp(&b.xi_min_plane)
            .unwrap_or(std::cmp::Ordering::Equal)
    }) {
        let axis = report_at(&traj, best.gt)
            .map(|r| r.axis().to_string())
            .unwrap_or_default();
        result.minima.push(MinimumRow {
            param,
            gt_at_min: best.gt,
            xi_min: best.xi_min_plane,
            axis,
        });
    }
    result.envelope_minima = envelope_minima(&result, Column::XiMinPlane);
    Ok(result)
}

/// Local minima below one of the lower envelope of `values`.
///
/// The envelope is a centred sliding minimum over `window` samples. Each
/// flat stretch of the envelope that is lower than both neighbours marks one
/// minimum, reported at the raw sample that produced it.
pub fn lower_envelope_minima<T: Real>(gts: &[T], values: &[T], window: usize) -> Vec<(T, T)> {
    let len = values.len().min(gts.len());
    if len < 3 {
        return Vec::new();
    }
    let half = window / 2;
    let value = |i: usize| nan_as_inf(values[i]);
    let env: Vec<usize> = (0..len)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(len - 1);
            (lo..=hi).fold(lo, |best, k| if value(k) < value(best) { k } else { best })
        })
        .collect();
    let mut out: Vec<(T, T)> = Vec::new();
    let mut start = 0;
    while start < len {
        let mut end = start;
        while end + 1 < len && value(env[end + 1]) == value(env[start]) {
            end += 1;
        }
        let level = value(env[start]);
        let left_higher = start > 0 && value(env[start - 1]) > level;
        let right_higher = end + 1 < len && value(env[end + 1]) > level;
        if left_higher && right_higher && level < T::one() {
            let k = env[start];
            if out.last().is_none_or(|&(g, _)| g != gts[k]) {
                out.push((gts[k], values[k]));
            }
        }
        start = end + 1;
    }
    out
}

/// Envelope minima of `column` in a time series, windowed over one fast period.
pub fn envelope_minima<T: Real>(series: &ScanResult<T>, column: Column) -> Vec<(T, T)> {
    let Some(grid) = series.grid else {
        return Vec::new();
    };
    let gts: Vec<T> = series.rows.iter().map(|r| r.gt).collect();
    let values: Vec<T> = series.rows.iter().map(|r| r.get(column)).collect();
    lower_envelope_minima(&gts, &values, grid.samples_per_fast_period() + 1)
}

/// How to build the field at each scan point.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldTemplate<T> {
    Coherent { alpha: T },
    SqueezedVacuum { r: T },
    Fock { n: usize },
    Custom(FieldStateSpec<T>),
}

impl<T: Real> FieldTemplate<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Coherent { .. } => "coherent",
            Self::SqueezedVacuum { .. } => "squeezed-vacuum",
            Self::Fock { .. } => "fock",
            Self::Custom(_) => "custom",
        }
    }

    pub fn build(&self, eps_tail: T) -> Result<FieldStateSpec<T>> {
        match self {
            Self::Coherent { alpha } => field::coherent_coefficients(*alpha, None, eps_tail),
            Self::SqueezedVacuum { r } => field::squeezed_vacuum_coefficients(*r, None, eps_tail),
            Self::Fock { n } => field::fock_coefficients(*n, *n),
            Self::Custom(spec) => Ok(spec.clone()),
        }
    }
}

impl<T: Real> From<&FieldStateSpec<T>> for FieldTemplate<T> {
    fn from(spec: &FieldStateSpec<T>) -> Self {
        match spec.kind() {
            FieldKind::Coherent { alpha } => Self::Coherent { alpha: *alpha },
            FieldKind::SqueezedVacuum { r } => Self::SqueezedVacuum { r: *r },
            FieldKind::Fock { n } => Self::Fock { n: *n },
            FieldKind::Custom => Self::Custom(spec.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    Alpha,
    Atoms,
    R,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Atoms => "atoms",
            Self::R => "r",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" => Some(Self::Alpha),
            "atoms" | "n" | "n_atoms" | "n-atoms" => Some(Self::Atoms),
            "r" => Some(Self::R),
            _ => None,
        }
    }
}

/// A sweep of one parameter with the others held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec<T> {
    pub axis: ScanAxis,
    pub values: Vec<T>,
    pub n_atoms: usize,
    /// Field at fixed parameters; the swept parameter replaces its own slot.
    pub field: FieldTemplate<T>,
    /// `None` uses one modulation period `4π√N` at each point.
    pub gt_max: Option<T>,
    pub step: Option<T>,
    pub eps_tail: T,
    /// Also record the best `ξ_Q` and `ξ_P` at each point.
    pub include_field: bool,
}

fn point_setup<T: Real>(spec: &ScanSpec<T>, value: T) -> Result<(usize, FieldStateSpec<T>)> {
    let mut n_atoms = spec.n_atoms;
    let template = match (spec.axis, &spec.field) {
        (ScanAxis::Alpha, FieldTemplate::Coherent { .. }) => FieldTemplate::Coherent { alpha: value },
        (ScanAxis::R, FieldTemplate::SqueezedVacuum { .. }) => FieldTemplate::SqueezedVacuum { r: value },
        (ScanAxis::Atoms, f) => {
            let rounded = value.round();
            if !(value.is_finite() && rounded >= T::one() && (value - rounded).abs() < T::lit(1e-9)) {
                return Err(Error::InvalidParameter {
                    name: "atoms",
                    value: value.to_f64_lossy(),
                });
            }
            n_atoms = rounded.to_usize().ok_or(Error::NoAtoms)?;
            f.clone()
        }
        (axis, f) => {
            return Err(Error::IncompatibleScan {
                axis: axis.name(),
                field: f.name(),
            })
        }
    };
    Ok((n_atoms, template.build(spec.eps_tail)?))
}

fn scan_point<T: Real>(
    spec: &ScanSpec<T>,
    cache: &SpectralCache<T>,
    value: T,
) -> Result<(ScanRow<T>, Vec<MinimumRow<T>>)> {
    let (n_atoms, field) = point_setup(spec, value)?;
    let gt_max = spec.gt_max.unwrap_or_else(|| modulation_period(n_atoms));
    let grid = TimeGrid::new(n_atoms, gt_max, spec.step)?;
    let traj = trajectory(cache, n_atoms, &field)?;
    let best = optimize_column(&traj, &grid, Column::XiMinPlane)?;
    let flags = RowFlags {
        degenerate: false,
        renormalized: field.was_renormalized(),
    };
    let row = ScanRow::from_report(value, &best.report, flags);
    let mut minima = vec![MinimumRow {
        param: value,
        gt_at_min: best.gt_at_min,
        xi_min: best.xi_min,
        axis: best.axis,
    }];
    if spec.include_field {
        for column in [Column::XiQ, Column::XiP] {
            let o = optimize_column(&traj, &grid, column)?;
            minima.push(MinimumRow {
                param: value,
                gt_at_min: o.gt_at_min,
                xi_min: o.xi_min,
                axis: o.axis,
            });
        }
    }
    Ok((row, minima))
}

/// Runs [`optimize_column`] at every value in parallel. Results keep input
/// order; a failing point is recorded and does not stop the sweep.
pub fn scan_parameter<T: Real>(spec: &ScanSpec<T>) -> Result<ScanResult<T>> {
    if spec.values.is_empty() {
        return Err(Error::EmptyScan);
    }
    match (spec.axis, &spec.field) {
        (ScanAxis::Alpha, FieldTemplate::Coherent { .. })
        | (ScanAxis::R, FieldTemplate::SqueezedVacuum { .. })
        | (ScanAxis::Atoms, _) => {}
        (axis, f) => {
            return Err(Error::IncompatibleScan {
                axis: axis.name(),
                field: f.name(),
            })
        }
    }
    let cache = SpectralCache::new();
    let outcomes: Vec<_> = spec
        .values
        .par_iter()
        .map(|&v| (v, scan_point(spec, &cache, v)))
        .collect();
    let mut result = ScanResult {
        rows: Vec::new(),
        minima: Vec::new(),
        envelope_minima: Vec::new(),
        failures: Vec::new(),
        grid: None,
    };
    for (param, outcome) in outcomes {
        match outcome {
            Ok((row, minima)) => {
                result.rows.push(row);
                result.minima.extend(minima);
            }
            Err(error) => result.failures.push(ScanFailure { param, error }),
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow<T> {
    pub gt: T,
    pub exact: T,
    pub analytic: T,
    /// `|exact - analytic|`; NaN where the exact value is undefined.
    pub diff: T,
    pub li_ok: Option<bool>,
    pub phase_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<T> {
    pub model: AnalyticModel,
    pub n_atoms: usize,
    pub param: T,
    pub rows: Vec<ComparisonRow<T>>,
    pub max_diff: T,
    pub gt_at_max: T,
}

fn exact_value<T: Real>(traj: &Trajectory<T>, gt: T, observable: ModelObservable) -> T {
    let column = match observable {
        ModelObservable::XiX => Column::XiX,
        ModelObservable::XiY => Column::XiYPrime,
        ModelObservable::XiQ => Column::XiQ,
        ModelObservable::XiP => Column::XiP,
    };
    column_value(traj, gt, column)
}

/// The model's own parameter read off `field`, after checking the field kind
/// and atom count suit the model.
fn model_param<T: Real>(model: AnalyticModel, n_atoms: usize, field: &FieldStateSpec<T>) -> Result<T> {
    let param = match (model.input(), field.kind()) {
        (ModelInput::CoherentAlpha, FieldKind::Coherent { alpha }) => *alpha,
        (ModelInput::SqueezedR, FieldKind::SqueezedVacuum { r }) => *r,
        (ModelInput::CoherentAlpha, _) => {
            return Err(Error::ModelFieldMismatch {
                model: model.id(),
                needs: "coherent",
            })
        }
        (ModelInput::SqueezedR, _) => {
            return Err(Error::ModelFieldMismatch {
                model: model.id(),
                needs: "squeezed-vacuum",
            })
        }
    };
    if model.two_atoms_only() && n_atoms != 2 {
        return Err(Error::NotTwoAtoms(n_atoms));
    }
    Ok(param)
}

fn comparison_row<T: Real>(model: AnalyticModel, n_atoms: usize, param: T, gt: T, exact: T) -> ComparisonRow<T> {
    let (analytic, hp) = model.evaluate(n_atoms, param, gt);
    ComparisonRow {
        gt,
        exact,
        analytic,
        diff: (exact - analytic).abs(),
        li_ok: hp.map(|e| e.li_ok),
        phase_ok: hp.map(|e| e.phase_ok),
    }
}

/// The closed form alone on every grid point, without running the exact
/// dynamics. `exact`, `diff`, `max_diff` and `gt_at_max` are NaN.
pub fn analytic_series<T: Real>(
    model: AnalyticModel,
    n_atoms: usize,
    field: &FieldStateSpec<T>,
    grid: &TimeGrid<T>,
) -> Result<Comparison<T>> {
    let param = model_param(model, n_atoms, field)?;
    let rows = grid
        .points()
        .into_iter()
        .map(|gt| comparison_row(model, n_atoms, param, gt, T::nan()))
        .collect();
    Ok(Comparison {
        model,
        n_atoms,
        param,
        rows,
        max_diff: T::nan(),
        gt_at_max: T::nan(),
    })
}

/// Exact simulation against a closed form on every grid point.
pub fn compare_exact_analytic<T: Real>(
    model: AnalyticModel,
    n_atoms: usize,
    field: &FieldStateSpec<T>,
    grid: &TimeGrid<T>,
) -> Result<Comparison<T>> {
    let param = model_param(model, n_atoms, field)?;
    let traj = trajectory(&SpectralCache::new(), n_atoms, field)?;
    let rows: Vec<ComparisonRow<T>> = grid
        .points()
        .into_iter()
        .map(|gt| comparison_row(model, n_atoms, param, gt, exact_value(&traj, gt, model.observable())))
        .collect();
    let (gt_at_max, max_diff) = rows
        .iter()
        .filter(|r| !r.diff.is_nan())
        .fold((T::zero(), T::zero()), |acc, r| {
            if r.diff > acc.1 {
                (r.gt, r.diff)
            } else {
                acc
            }
        });
    Ok(Comparison {
        model,
        n_atoms,
        param,
        rows,
        max_diff,
        gt_at_max,
    })
}

/// `%.12g`-style formatting.
pub fn format_g<T: Real>(value: T) -> String {
    let x = value.to_f64_lossy();
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const SIG: usize = 12;
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const ROWS_HEADER: &str = "param,gt,xi_x,xi_yprime,xi_min_plane,xi_q,xi_p,flags";
pub const MINIMA_HEADER: &str = "param,gt_at_min,xi_min,axis";
pub const COMPARISON_HEADER: &str = "gt,exact,analytic,abs_diff,li_ok,phase_ok";

pub fn write_rows_csv<T: Real, W: Write>(mut out: W, rows: &[ScanRow<T>]) -> io::Result<()> {
    writeln!(out, "{ROWS_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_g(r.param),
            format_g(r.gt),
            format_g(r.xi_x),
            format_g(r.xi_yprime),
            format_g(r.xi_min_plane),
            format_g(r.xi_q),
            format_g(r.xi_p),
            r.flags
        )?;
    }
    Ok(())
}

/// Minima, then one `nan` row per failed point with the error as its axis.
pub fn write_minima_csv<T: Real, W: Write>(mut out: W, result: &ScanResult<T>) -> io::Result<()> {
    writeln!(out, "{MINIMA_HEADER}")?;
    for m in &result.minima {
        writeln!(
            out,
            "{},{},{},{}",
            format_g(m.param),
            format_g(m.gt_at_min),
            format_g(m.xi_min),
            m.axis
        )?;
    }
    for f in &result.failures {
        let reason = f.error.to_string().replace(',', ";");
        writeln!(out, "{},nan,nan,failed: {reason}", format_g(f.param))?;
    }
    Ok(())
}

pub fn write_comparison_csv<T: Real, W: Write>(mut out: W, cmp: &Comparison<T>) -> io::Result<()> {
    writeln!(out, "{COMPARISON_HEADER}")?;
    let flag = |f: Option<bool>| f.map_or(String::new(), |b| b.to_string());
    for r in &cmp.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_g(r.gt),
            format_g(r.exact),
            format_g(r.analytic),
            format_g(r.diff),
            flag(r.li_ok),
            flag(r.phase_ok)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_points_and_endpoint() {
        let g = TimeGrid::new(2, 1.0, Some(0.1)).unwrap();
        let p = g.points();
        assert_eq!(p.first(), Some(&0.0));
        assert_eq!(p.last(), Some(&1.0));
        assert_eq!(p.len(), 11);
        let g = TimeGrid::new(2, 1.05f64, Some(0.1)).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 12);
        assert_eq!(p[11], 1.05);
        assert!((p[10] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_defaults_and_limits() {
        let g = TimeGrid::new(20, 10.0, None).unwrap();
        assert!((g.step - PI / (20.0 * 20f64.sqrt())).abs() < 1e-15);
        assert_eq!(g.samples_per_fast_period(), 20);
        assert!(matches!(
            TimeGrid::new(2, 10.0, Some(0.2)),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(matches!(TimeGrid::new(2, 0.0, None), Err(Error::InvalidGrid)));
        assert!(matches!(TimeGrid::new(2, f64::NAN, None), Err(Error::InvalidGrid)));
        assert!(matches!(TimeGrid::new(0, 1.0, None), Err(Error::NoAtoms)));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section(0.0, 3.0, 1e-9, |t: f64| (t - 1.234).powi(2) + 0.5);
        assert!((x - 1.234).abs() < 1e-8);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn envelope_of_modulated_oscillation() {
        // fast cos(40t) under a slow envelope with dips at t = π/2 and 3π/2
        let step = 2.0 * PI / 40.0 / 20.0;
        let gts: Vec<f64> = (0..(2.0 * PI / step) as usize).map(|i| i as f64 * step).collect();
        let values: Vec<f64> = gts
            .iter()
            .map(|t| 1.0 - 0.1 * t.sin().powi(2) * (0.5 + 0.5 * (40.0 * t).cos()))
            .collect();
        let mins = lower_envelope_minima(&gts, &values, 21);
        assert_eq!(mins.len(), 2, "{mins:?}");
        assert!((mins[0].0 - PI / 2.0).abs() < 0.1);
        assert!((mins[1].0 - 1.5 * PI).abs() < 0.1);
        assert!((mins[0].1 - 0.9).abs() < 1e-3);
    }

    #[test]
    fn envelope_of_monotone_series_is_empty() {
        let gts: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let down: Vec<f64> = gts.iter().map(|t| 1.0 - t / 1000.0).collect();
        let up: Vec<f64> = gts.iter().map(|t| 1.0 + t / 1000.0).collect();
        assert!(lower_envelope_minima(&gts, &down, 21).is_empty());
        assert!(lower_envelope_minima(&gts, &up, 21).is_empty());
    }

    #[test]
    fn format_g_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.25, "-2.25"),
            (1.0 / 3.0, "0.333333333333"),
            (2439.123456789012, "2439.12345679"),
            (1e-5, "1e-05"),
            (1.5e-7, "1.5e-07"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g(x), want, "{x}");
        }
    }

    #[test]
    fn flags_display() {
        assert_eq!(RowFlags::default().to_string(), "");
        let f = RowFlags {
            degenerate: true,
            renormalized: true,
        };
        assert_eq!(f.to_string(), "degenerate|renormalized");
    }

    #[test]
    fn scan_axis_names() {
        for a in [ScanAxis::Alpha, ScanAxis::Atoms, ScanAxis::R] {
            assert_eq!(ScanAxis::from_name(a.name()), Some(a));
        }
        assert_eq!(ScanAxis::from_name("N"), Some(ScanAxis::Atoms));
        assert_eq!(ScanAxis::from_name("beta"), None);
    }

    #[test]
    fn incompatible_and_empty_scans() {
        let base = ScanSpec {
            axis: ScanAxis::R,
            values: vec![0.1],
            n_atoms: 2,
            field: FieldTemplate::Coherent { alpha: 0.1 },
            gt_max: Some(5.0),
            step: None,
            eps_tail: 1e-12,
            include_field: false,
        };
        assert!(matches!(scan_parameter(&base), Err(Error::IncompatibleScan { .. })));
        let empty = ScanSpec {
            values: vec![],
            ..base.clone()
        };
        assert_eq!(scan_parameter(&empty), Err(Error::EmptyScan));
        let bad_atoms = ScanSpec {
            axis: ScanAxis::Atoms,
            values: vec![2.0, 2.5, 3.0],
            ..base
        };
        let r = scan_parameter(&bad_atoms).unwrap();
        assert_eq!(r.minima.len(), 2);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].param, 2.5);
    }

    #[test]
    fn optimum_refines_grid_value() {
        let f = field::coherent_coefficients(0.3f64, None, 1e-12).unwrap();
        let o = optimal_squeezing(2, &f, 40.0).unwrap();
        assert!(o.xi_min <= o.grid_xi);
        assert!((o.gt_at_min - o.grid_gt).abs() <= TimeGrid::new(2, 40.0, None).unwrap().step);
        assert!((o.report.xi_min_plane - o.xi_min).abs() < 1e-14);
    }

    #[test]
    fn analytic_series_matches_comparison_column() {
        let f = field::coherent_coefficients(0.2f64, None, 1e-12).unwrap();
        let grid = TimeGrid::new(2, 10.0, None).unwrap();
        let full = compare_exact_analytic(AnalyticModel::SmallAlpha, 2, &f, &grid).unwrap();
        let only = analytic_series(AnalyticModel::SmallAlpha, 2, &f, &grid).unwrap();
        assert_eq!(full.rows.len(), only.rows.len());
        for (a, b) in full.rows.iter().zip(&only.rows) {
            assert_eq!(a.analytic, b.analytic);
            assert!(b.exact.is_nan() && b.diff.is_nan());
        }
        assert!(only.max_diff.is_nan());
        assert_eq!(
            analytic_series(AnalyticModel::SmallAlpha, 3, &f, &grid).unwrap_err(),
            Error::NotTwoAtoms(3)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn optimum_monotone_in_window(alpha in 0.05f64..1.0, t1 in 1.0f64..40.0, extra in 0.0f64..40.0) {
            let f = field::coherent_coefficients(alpha, None, 1e-12).unwrap();
            let a = optimal_squeezing(2, &f, t1).unwrap();
            let b = optimal_squeezing(2, &f, t1 + extra).unwrap();
            prop_assert!(b.xi_min <= a.xi_min + 1e-10, "{} > {}", b.xi_min, a.xi_min);
        }

        #[test]
        fn format_g_round_trips(x in -1e6f64..1e6) {
            let back: f64 = format_g(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }
    }
}
