//! Executes a validated [`RunConfig`].

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use tc_squeeze::field::read_custom_file;
use tc_squeeze::scan::{
    self, format_g, Column, FieldTemplate, MinimumRow, RowFlags, ScanResult, ScanRow, ScanSpec, TimeGrid,
};
use tc_squeeze::{initial_joint_state, Field, Propagator, Trajectory};

use crate::config::{CommandKind, FieldChoice, RunConfig};
use crate::CliError;

/// Sorts core errors into bad input (exit 2) and numerical failure (exit 3).
pub fn classify(e: tc_squeeze::Error) -> CliError {
    use tc_squeeze::Error as E;
    match e {
        E::TruncationUnmet { .. } | E::DegenerateDirection { .. } | E::BasisMismatch { .. } => {
            CliError::Numerical(e.into())
        }
        _ => CliError::Config(e.into()),
    }
}

/// `<dir>/<stem>.minima.csv` next to the main output.
pub fn minima_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.minima.csv"))
}

fn build_field(choice: &FieldChoice, cfg: &RunConfig) -> Result<Field, CliError> {
    if let Some(t) = choice.template() {
        return t.build(cfg.eps_tail).map_err(classify);
    }
    let FieldChoice::Custom(path) = choice else {
        unreachable!()
    };
    let field = read_custom_file::<f64>(path, None)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(CliError::Config)?
        .map_err(classify)?;
    if field.was_renormalized() && !cfg.normalize {
        return Err(CliError::Config(anyhow::anyhow!(
            "custom field norm^2 is {} rather than 1; pass --normalize to rescale it",
            format_g(field.input_norm_sqr())
        )));
    }
    Ok(field)
}

fn trajectory(n_atoms: usize, field: &Field) -> Result<Trajectory<f64>, CliError> {
    let propagator = Arc::new(Propagator::new(n_atoms, field.n_max()).map_err(classify)?);
    Trajectory::new(propagator, &initial_joint_state(n_atoms, field).map_err(classify)?).map_err(classify)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(CliError::Config)
}

fn io_err(e: io::Error) -> CliError {
    CliError::Config(anyhow::Error::new(e).context("writing output"))
}

/// Writes rows to `--out` (or stdout) and minima next to `--out`.
fn emit(cfg: &RunConfig, result: &ScanResult<f64>) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            scan::write_rows_csv(&mut w, &result.rows).map_err(io_err)?;
            w.flush().map_err(io_err)?;
            let mut m = create(&minima_path(path))?;
            scan::write_minima_csv(&mut m, result).map_err(io_err)?;
            m.flush().map_err(io_err)
        }
        None => scan::write_rows_csv(io::stdout().lock(), &result.rows).map_err(io_err),
    }
}

/// The summary goes to stdout unless stdout already carries the CSV.
fn summary(cfg: &RunConfig, line: &str) {
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let line = match cfg.command {
        CommandKind::Evolve => evolve(cfg)?,
        CommandKind::Optimal => optimal(cfg)?,
        CommandKind::Scan => sweep(cfg)?,
        CommandKind::Compare => compare(cfg)?,
    };
    summary(cfg, &format!("{line} wall={:.3}s", start.elapsed().as_secs_f64()));
    Ok(())
}

fn grid(cfg: &RunConfig, n_atoms: usize) -> Result<TimeGrid<f64>, CliError> {
    let gt_max = cfg.gt_max.expect("validated");
    TimeGrid::new(n_atoms, gt_max, cfg.step).map_err(classify)
}

fn evolve(cfg: &RunConfig) -> Result<String, CliError> {
    let field = build_field(cfg.field.as_ref().expect("validated"), cfg)?;
    let grid = grid(cfg, cfg.n_atoms)?;
    let mut result = scan::time_series(cfg.n_atoms, &field, &grid).map_err(classify)?;
    let param = field.parameter().unwrap_or(f64::NAN);
    let mut envelope = Vec::new();
    for (column, label) in [
        (Column::XiX, "envelope-x"),
        (Column::XiYPrime, "envelope-yprime"),
        (Column::XiMinPlane, "envelope-plane"),
    ] {
        envelope.extend(
            scan::envelope_minima(&result, column)
                .into_iter()
                .map(|(gt, xi)| MinimumRow {
                    param,
                    gt_at_min: gt,
                    xi_min: xi,
                    axis: label.into(),
                }),
        );
    }
    let best = result.minima.first().cloned();
    result.minima.extend(envelope);
    emit(cfg, &result)?;
    Ok(match best {
        Some(m) => format!(
            "min xi={} at gt={} axis={}",
            format_g(m.xi_min),
            format_g(m.gt_at_min),
            m.axis
        ),
        None => "min xi undefined: the mean spin vanishes on the whole grid".into(),
    })
}

fn optimal(cfg: &RunConfig) -> Result<String, CliError> {
    let field = build_field(cfg.field.as_ref().expect("validated"), cfg)?;
    let grid = grid(cfg, cfg.n_atoms)?;
    let traj = trajectory(cfg.n_atoms, &field)?;
    let spin = scan::optimize_column(&traj, &grid, Column::XiMinPlane).map_err(classify)?;
    let q = scan::optimize_column(&traj, &grid, Column::XiQ).map_err(classify)?;
    let p = scan::optimize_column(&traj, &grid, Column::XiP).map_err(classify)?;
    let param = field.parameter().unwrap_or(f64::NAN);
    let flags = RowFlags {
        degenerate: false,
        renormalized: field.was_renormalized(),
    };
    let minima = [&spin, &q, &p]
        .into_iter()
        .map(|o| MinimumRow {
            param,
            gt_at_min: o.gt_at_min,
            xi_min: o.xi_min,
            axis: o.axis.clone(),
        })
        .collect();
    let result = ScanResult {
        rows: vec![ScanRow::from_report(param, &spin.report, flags)],
        minima,
        envelope_minima: Vec::new(),
        failures: Vec::new(),
        grid: Some(grid),
    };
    emit(cfg, &result)?;
    Ok(format!(
        "min xi={} at gt={} axis={} xi_Q={} at gt={} xi_P={} at gt={}",
        format_g(spin.xi_min),
        format_g(spin.gt_at_min),
        spin.axis,
        format_g(q.xi_min),
        format_g(q.gt_at_min),
        format_g(p.xi_min),
        format_g(p.gt_at_min)
    ))
}

fn sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let req = cfg.scan.as_ref().expect("validated");
    let choice = cfg.field.as_ref().expect("validated");
    let field = match choice.template() {
        Some(t) => t,
        None => FieldTemplate::Custom(build_field(choice, cfg)?),
    };
    let spec = ScanSpec {
        axis: req.axis,
        values: req.values.clone(),
        n_atoms: cfg.n_atoms,
        field,
        gt_max: cfg.gt_max,
        step: cfg.step,
        eps_tail: cfg.eps_tail,
        include_field: true,
    };
    let result = scan::scan_parameter(&spec).map_err(classify)?;
    for f in &result.failures {
        eprintln!("warning: {}={} failed: {}", req.axis.name(), format_g(f.param), f.error);
    }
    if result.rows.is_empty() {
        let first = result
            .failures
            .first()
            .map(|f| f.error.clone())
            .expect("no rows implies failures");
        return Err(match classify(first) {
            CliError::Config(e) => CliError::Config(e.context("every scan point failed")),
            CliError::Numerical(e) => CliError::Numerical(e.context("every scan point failed")),
        });
    }
    emit(cfg, &result)?;
    let best = result
        .minima
        .iter()
        .filter(|m| m.axis != "Q" && m.axis != "P")
        .min_by(|a, b| a.xi_min.total_cmp(&b.xi_min))
        .expect("at least one row");
    Ok(format!(
        "min xi={} at gt={} {}={} ({} of {} points ok)",
        format_g(best.xi_min),
        format_g(best.gt_at_min),
        req.axis.name(),
        format_g(best.param),
        result.rows.len(),
        req.values.len()
    ))
}

fn compare(cfg: &RunConfig) -> Result<String, CliError> {
    let model = cfg.model.expect("validated");
    let field = build_field(cfg.field.as_ref().expect("validated"), cfg)?;
    let grid = grid(cfg, cfg.n_atoms)?;
    let cmp = if cfg.analytic_only {
        scan::analytic_series(model, cfg.n_atoms, &field, &grid)
    } else {
        scan::compare_exact_analytic(model, cfg.n_atoms, &field, &grid)
    }
    .map_err(classify)?;
    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            scan::write_comparison_csv(&mut w, &cmp).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => scan::write_comparison_csv(io::stdout().lock(), &cmp).map_err(io_err)?,
    }
    let lowest = |pick: fn(&scan::ComparisonRow<f64>) -> f64| {
        cmp.rows
            .iter()
            .map(|r| (r.gt, pick(r)))
            .filter(|(_, v)| !v.is_nan())
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((f64::NAN, f64::NAN))
    };
    if cfg.analytic_only {
        let (gt, xi) = lowest(|r| r.analytic);
        return Ok(format!("model={model} min xi={} at gt={}", format_g(xi), format_g(gt)));
    }
    let (gt_min, xi_min) = lowest(|r| r.exact);
    Ok(format!(
        "model={model} max |exact-analytic|={} at gt={} min xi={} at gt={}",
        format_g(cmp.max_diff),
        format_g(cmp.gt_at_max),
        format_g(xi_min),
        format_g(gt_min)
    ))
}
