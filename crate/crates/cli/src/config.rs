//! Command-line parsing and validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tc_squeeze::scan::{FieldTemplate, ScanAxis};
use tc_squeeze::{AnalyticModel, DEFAULT_EPS_TAIL};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "tc-squeeze",
    version,
    about = "Exact Tavis-Cummings spin and field squeezing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of every squeezing parameter on a uniform grid.
    Evolve(Options),
    /// Best spin squeezing (and field squeezing) over [0, gtmax].
    Optimal(Options),
    /// Optimal squeezing as one parameter is swept.
    Scan(Options),
    /// Exact dynamics against a closed-form approximation.
    Compare(Options),
}

#[derive(Debug, Args)]
pub struct Options {
    /// Number of atoms N.
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Coherent field amplitude α (real).
    #[arg(long, value_name = "ALPHA", allow_negative_numbers = true)]
    pub coherent: Option<f64>,
    /// Squeezed vacuum with squeezing parameter r.
    #[arg(long, value_name = "R", allow_negative_numbers = true)]
    pub squeezed: Option<f64>,
    /// Fock state |n>.
    #[arg(long, value_name = "N")]
    pub fock: Option<usize>,
    /// File of "re im" coefficient lines c_0, c_1, ...; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    pub custom: Option<PathBuf>,
    /// End of the time window, in units of 1/g.
    #[arg(long, value_name = "GT", allow_negative_numbers = true)]
    pub gtmax: Option<f64>,
    /// Grid step; at most one twentieth of π/√N.
    #[arg(long, allow_negative_numbers = true)]
    pub step: Option<f64>,
    /// Sweep, as `axis:v1,v2,...` with axis alpha, atoms or r. `a,b,...,c` expands to a range.
    #[arg(long, value_name = "AXIS:VALUES")]
    pub scan: Option<String>,
    /// Closed form to compare against (small-alpha, n-small-alpha, large-n, hp, large-alpha, small-r, field-q, field-p).
    #[arg(long)]
    pub model: Option<String>,
    /// CSV output path. A minima CSV is written next to it as `<stem>.minima.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest photon-number probability the cutoff may discard.
    #[arg(long, default_value_t = DEFAULT_EPS_TAIL)]
    pub eps_tail: f64,
    /// Rescale a custom state whose norm is off by more than 1e-6 instead of rejecting it.
    #[arg(long)]
    pub normalize: bool,
    /// With compare: evaluate only the closed form, skipping the exact dynamics.
    #[arg(long)]
    pub analytic_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Evolve,
    Optimal,
    Scan,
    Compare,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldChoice {
    Coherent(f64),
    Squeezed(f64),
    Fock(usize),
    Custom(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub axis: ScanAxis,
    pub values: Vec<f64>,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_atoms: usize,
    pub field: Option<FieldChoice>,
    pub gt_max: Option<f64>,
    pub step: Option<f64>,
    pub scan: Option<ScanRequest>,
    pub model: Option<AnalyticModel>,
    pub out: Option<PathBuf>,
    pub eps_tail: f64,
    pub normalize: bool,
    pub analytic_only: bool,
}

fn config(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(anyhow::anyhow!("{msg}"))
}

fn finite_nonneg(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(config(format!("--{name} must be finite and non-negative, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(config(format!("--{name} must be finite and positive, got {v}")))
    }
}

/// Parses `v1,v2,...`; an item `...` between `a,b` and `c` expands to `a, b, a+2(b-a), … ≤ c`.
pub fn parse_values(list: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(config("scan value list is empty"));
    }
    let parse = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| config(format!("bad scan value `{s}`")))
    };
    let mut out: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        if items[i] == "..." {
            if out.len() < 2 || i + 1 >= items.len() {
                return Err(config("a range needs two values before `...` and one after"));
            }
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            let end = parse(items[i + 1])?;
            let step: f64 = b - a;
            if step == 0.0 || (end - b) * step < 0.0 {
                return Err(config(format!(
                    "range {a},{b},...,{end} does not progress towards its end"
                )));
            }
            let count = ((end - a) / step + 1e-9).floor() as usize;
            for k in 2..=count {
                out.push(snap(a + k as f64 * step));
            }
            if (out[out.len() - 1] - end).abs() > 1e-9 * step.abs() {
                out.push(end);
            }
            i += 2;
            continue;
        }
        out.push(parse(items[i])?);
        i += 1;
    }
    Ok(out)
}

/// Rounds to 12 significant digits so `0.1 + 6·0.1` prints as `0.7`.
fn snap(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn parse_scan(spec: &str) -> Result<ScanRequest, CliError> {
    let (axis, values) = spec
        .split_once(':')
        .ok_or_else(|| config(format!("--scan expects axis:values, got `{spec}`")))?;
    let axis = ScanAxis::from_name(axis).ok_or_else(|| config(format!("unknown scan axis `{axis}`")))?;
    let values = parse_values(values)?;
    for &v in &values {
        match axis {
            ScanAxis::Atoms if v < 1.0 || v.fract() != 0.0 => {
                return Err(config(format!("atom counts must be positive integers, got {v}")))
            }
            _ => {
                finite_nonneg(axis.name(), v)?;
            }
        }
    }
    Ok(ScanRequest { axis, values })
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, o) = match cli.command {
            Command::Evolve(o) => (CommandKind::Evolve, o),
            Command::Optimal(o) => (CommandKind::Optimal, o),
            Command::Scan(o) => (CommandKind::Scan, o),
            Command::Compare(o) => (CommandKind::Compare, o),
        };

        let mut fields = Vec::new();
        if let Some(a) = o.coherent {
            fields.push(FieldChoice::Coherent(finite_nonneg("coherent", a)?));
        }
        if let Some(r) = o.squeezed {
            fields.push(FieldChoice::Squeezed(finite_nonneg("squeezed", r)?));
        }
        if let Some(n) = o.fock {
            fields.push(FieldChoice::Fock(n));
        }
        if let Some(p) = &o.custom {
            fields.push(FieldChoice::Custom(p.clone()));
        }
        if fields.len() > 1 {
            return Err(config(
                "conflicting field kinds: give exactly one of --coherent, --squeezed, --fock, --custom",
            ));
        }
        let mut field = fields.pop();

        let eps_tail = o.eps_tail;
        if !(eps_tail.is_finite() && eps_tail > 0.0 && eps_tail < 1.0) {
            return Err(config(format!("--eps-tail must lie in (0, 1), got {eps_tail}")));
        }
        let gt_max = o.gtmax.map(|v| positive("gtmax", v)).transpose()?;
        let step = o.step.map(|v| positive("step", v)).transpose()?;
        if o.atoms == Some(0) {
            return Err(config("--atoms must be at least 1"));
        }

        let scan = match (command, &o.scan) {
            (CommandKind::Scan, Some(s)) => Some(parse_scan(s)?),
            (CommandKind::Scan, None) => return Err(config("scan needs --scan axis:values")),
            (_, Some(_)) => return Err(config("--scan is only valid with the scan command")),
            _ => None,
        };
        let model = match (command, &o.model) {
            (CommandKind::Compare, Some(id)) => {
                Some(AnalyticModel::from_id(id).ok_or_else(|| config(format!("unknown analytic model `{id}`")))?)
            }
            (CommandKind::Compare, None) => return Err(config("compare needs --model")),
            (_, Some(_)) => return Err(config("--model is only valid with the compare command")),
            _ => None,
        };

        if o.analytic_only && command != CommandKind::Compare {
            return Err(config("--analytic-only is only valid with the compare command"));
        }

        let n_atoms = match (&scan, o.atoms) {
            (
                Some(ScanRequest {
                    axis: ScanAxis::Atoms, ..
                }),
                atoms,
            ) => atoms.unwrap_or(1),
            (_, Some(n)) => n,
            (_, None) => return Err(config("--atoms is required")),
        };

        if let Some(req) = &scan {
            // the swept parameter may stand in for the field flag
            match (req.axis, &field) {
                (ScanAxis::Alpha, None) => field = Some(FieldChoice::Coherent(req.values[0])),
                (ScanAxis::R, None) => field = Some(FieldChoice::Squeezed(req.values[0])),
                (ScanAxis::Alpha, Some(FieldChoice::Coherent(_)))
                | (ScanAxis::R, Some(FieldChoice::Squeezed(_)))
                | (ScanAxis::Atoms, Some(_)) => {}
                (ScanAxis::Atoms, None) => return Err(config("an atoms scan needs a field flag")),
                (axis, Some(_)) => {
                    return Err(config(format!(
                        "scan axis `{}` is incompatible with the given field",
                        axis.name()
                    )))
                }
            }
        } else if field.is_none() {
            return Err(config(
                "a field is required: one of --coherent, --squeezed, --fock, --custom",
            ));
        }

        if matches!(
            command,
            CommandKind::Evolve | CommandKind::Optimal | CommandKind::Compare
        ) && gt_max.is_none()
        {
            return Err(config("--gtmax is required"));
        }

        Ok(Self {
            command,
            n_atoms,
            field,
            gt_max,
            step,
            scan,
            model,
            out: o.out,
            eps_tail,
            normalize: o.normalize,
            analytic_only: o.analytic_only,
        })
    }
}

impl FieldChoice {
    pub fn template(&self) -> Option<FieldTemplate<f64>> {
        match *self {
            Self::Coherent(alpha) => Some(FieldTemplate::Coherent { alpha }),
            Self::Squeezed(r) => Some(FieldTemplate::SqueezedVacuum { r }),
            Self::Fock(n) => Some(FieldTemplate::Fock { n }),
            Self::Custom(_) => None,
        }
    }
}
