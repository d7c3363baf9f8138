//! Command-line front end: JSON config plus flag overrides, one subcommand
//! per experiment, CSV for sweeps and point clouds, JSON for summaries.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accel::{fit_quantized, le_profile, LEProfile, PiecewiseLinear, Side, DEFAULT_SLOPE_TOL};
use crate::cocycle::{converged_le, ldt_deviation_fraction, CocycleParams, LeConfig, NORM_NAME};
use crate::dos::{accden_check, empirical_dos, probe_circle, thouless_report, AccdenConfig, DEFAULT_GUARD};
use crate::error::{Error, Result};
use crate::model::{amo_potential, parse_complex, parse_frequency, FourierPotential, PotentialFile};
use crate::verify::{run_all, VerifyConfig};
use crate::winding::{winding_limit, winding_n, LimitConfig};
use crate::zeros::zero_circle_report;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status when the acceptance suite runs but a criterion fails.
pub const EXIT_VERIFY_FAILED: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "quasilab", version, about = "Quasi-periodic Schrödinger cocycles at complexified phase")]
pub struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true, env = "QUASILAB_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lyapunov exponent over a y range: CSV (y, L, est_error).
    Le(Opts),
    /// Quantized fit of y -> L(E, iy): JSON {breakpoints, slopes, fit_residual}.
    Accel {
        #[command(flatten)]
        opts: Opts,
        /// Fit an existing profile CSV (columns y, L, est_error) instead.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Winding numbers over a y range: CSV (y, nu_n, W, n, stabilized).
    Winding(Opts),
    /// Zeros of f_n in z: CSV (re, im, -log|z|, assigned turning point) and a JSON circle report.
    Zeros(Opts),
    /// Pooled truncated spectra: CSV (re, im).
    Dos(Opts),
    /// Log-potential of the pooled spectrum against the Lyapunov exponent: CSV per probe.
    Thouless(Opts),
    /// Integrated acceleration against the log-potential.
    Accden(Opts),
    /// Fraction of phases deviating from the average by more than epsilon.
    Ldt(Opts),
    /// Runs the acceptance suite.
    Verify(Opts),
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Default, Clone, Args)]
pub struct Opts {
    /// JSON run configuration.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// `amo:<lambda>` or a path to a JSON potential file.
    #[arg(long)]
    pub potential: Option<String>,
    /// Frequency as a fraction of 2π: `golden`, a decimal or `p/q`.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Energy, e.g. `3.5` or `2+2i`.
    #[arg(long, short = 'E', allow_hyphen_values = true)]
    pub energy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub y_points: Option<usize>,
    /// Truncation length; a comma list for `ldt`.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Phase grid size.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Phase samples for pooled spectra.
    #[arg(long)]
    pub phases: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub slope_tol: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Winding at fixed n instead of the one-sided limit.
    #[arg(long)]
    pub fixed_n: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Multiplies every acceptance tolerance.
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
    /// Acceptance criteria to run (comma list of 1 to 11).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<u8>>,
    /// Main output (default stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON summary (default stderr).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    Amo(f64),
    Coeffs(Vec<(i32, f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub center: String,
    pub radius: f64,
    pub count: usize,
}

/// On-disk run configuration; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub potential: Option<PotentialSpec>,
    pub alpha: Option<String>,
    pub energy: Option<String>,
    pub y: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub y_points: Option<usize>,
    pub n: Option<Vec<usize>>,
    pub grid: Option<usize>,
    pub phases: Option<usize>,
    pub tol: Option<f64>,
    pub slope_tol: Option<f64>,
    pub epsilon: Option<f64>,
    pub guard: Option<f64>,
    pub probes: Option<ProbeSpec>,
    pub fixed_n: Option<bool>,
    pub seed: Option<u64>,
    pub tolerance_scale: Option<f64>,
    pub criteria: Option<Vec<u8>>,
    pub cases_per_property: Option<usize>,
    pub check_runtime: Option<bool>,
    pub output: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn overlay(mut self, o: &Opts) -> Result<Self> {
        if let Some(p) = &o.potential {
            self.potential = Some(parse_potential_flag(p)?);
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f.clone(); } )* };
        }
        take!(alpha, energy, y, y_min, y_max, y_points, n, grid, phases, tol, slope_tol, epsilon, seed);
        take!(tolerance_scale, criteria, output, summary);
        if o.fixed_n {
            self.fixed_n = Some(true);
        }
        Ok(self)
    }
}

fn parse_potential_flag(text: &str) -> Result<PotentialSpec> {
    if let Some(l) = text.strip_prefix("amo:") {
        let lambda = l
            .parse()
            .map_err(|_| Error::Config(format!("bad coupling in --potential {text:?}")))?;
        return Ok(PotentialSpec::Amo(lambda));
    }
    let pot = PotentialFile::load(Path::new(text)).map_err(|e| Error::Config(format!("{text}: {e}")))?;
    Ok(PotentialSpec::Coeffs(PotentialFile::from_potential(&pot).coeffs))
}

/// Config with defaults filled in and every value checked.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub raw: RunConfig,
    pub potential: FourierPotential,
    pub potential_label: String,
    pub alpha: f64,
    pub alpha_label: String,
    pub energy: Complex64,
}

impl Resolved {
    pub fn new(raw: RunConfig) -> Result<Self> {
        let (potential, potential_label) = match raw.potential.clone().unwrap_or(PotentialSpec::Amo(0.5)) {
            PotentialSpec::Amo(l) => (amo_potential(l)?, format!("amo:{l}")),
            PotentialSpec::Coeffs(c) => {
                let label = format!("coeffs:{}", serde_json::to_string(&c)?);
                (PotentialFile { coeffs: c }.to_potential()?, label)
            }
        };
        let alpha_label = raw.alpha.clone().unwrap_or_else(|| "golden".into());
        let alpha = parse_frequency(&alpha_label)?;
        let energy = parse_complex(raw.energy.as_deref().unwrap_or("0"))?;
        let r = Self {
            raw,
            potential,
            potential_label,
            alpha,
            alpha_label,
            energy,
        };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let c = &self.raw;
        let finite = [c.y, c.y_min, c.y_max, c.tol, c.slope_tol, c.epsilon, c.guard, c.tolerance_scale];
        if finite.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("numeric fields must be finite".into()));
        }
        let positive = [("tol", c.tol), ("slope_tol", c.slope_tol), ("epsilon", c.epsilon), ("guard", c.guard)];
        for (name, v) in positive {
            if v.is_some_and(|v| v <= 0.0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if let (Some(a), Some(b)) = (c.y_min, c.y_max) {
            if !(a < b) {
                return Err(Error::Config(format!("empty y range [{a}, {b}]")));
            }
        }
        if c.y_points == Some(0) || c.n.as_ref().is_some_and(|n| n.is_empty() || n.contains(&0)) {
            return Err(Error::Config("y_points and n must be positive".into()));
        }
        Ok(())
    }

    fn tol(&self) -> f64 {
        self.raw.tol.unwrap_or(1e-3)
    }

    fn n(&self, default: usize) -> usize {
        self.raw.n.as_ref().map_or(default, |v| v[0])
    }

    fn y(&self) -> f64 {
        self.raw.y.unwrap_or(0.0)
    }

    /// Sample points of the configured y range (or the single `y`).
    fn y_grid(&self, default_max: f64, default_points: usize) -> Vec<f64> {
        match (self.raw.y_min, self.raw.y_max, self.raw.y) {
            (None, None, Some(y)) => vec![y],
            (lo, hi, _) => {
                let lo = lo.unwrap_or(0.0);
                let hi = hi.unwrap_or(default_max.max(lo + 1.0));
                let m = self.raw.y_points.unwrap_or(default_points);
                if m == 1 {
                    return vec![lo];
                }
                (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
            }
        }
    }

    fn profile(&self, default_points: usize) -> Result<LEProfile> {
        let lo = self.raw.y_min.unwrap_or(0.0);
        let hi = self.raw.y_max.unwrap_or(3.0);
        let m = self.raw.y_points.unwrap_or(default_points);
        le_profile(&self.potential, self.alpha, self.energy, lo, hi, m, self.tol(), &LeConfig::default())
    }

    fn metadata(&self, extra: &[(&str, String)]) -> String {
        let mut parts = vec![
            format!("potential={}", self.potential_label),
            format!("alpha={}", self.alpha_label),
            format!("energy={}", fmt_complex(self.energy)),
            format!("norm={NORM_NAME}"),
            format!("tol={}", self.tol()),
        ];
        parts.extend(extra.iter().map(|(k, v)| format!("{k}={v}")));
        parts.push(format!("version={VERSION}"));
        format!("# {}", parts.join(" "))
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Seventeen significant digits; `-0` is written as `0`.
fn num(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

/// A CSV table written with a `# key=value` metadata line.
struct Table {
    meta: String,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(meta: String, header: &[&'static str]) -> Self {
        Self {
            meta,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn render(&self) -> Result<Vec<u8>> {
        let mut out = format!("{}\n", self.meta).into_bytes();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        drop(w);
        Ok(out)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// Reads a profile CSV with columns `y, L, est_error`; `#` lines are skipped.
pub fn read_profile_csv(path: &Path, energy: Complex64) -> Result<LEProfile> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let (mut ys, mut ls, mut es) = (Vec::new(), Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("{}: bad value in record {}, column {}", path.display(), i + 1, j + 1)))
        };
        ys.push(field(0)?);
        ls.push(field(1)?);
        es.push(if rec.len() > 2 { field(2)? } else { 0.0 });
    }
    LEProfile::from_samples(energy, ys, ls, es)
}

/// Where a command's main output and summary go.
struct Sinks {
    output: Option<PathBuf>,
    summary: Option<PathBuf>,
}

impl Sinks {
    fn main(&self, bytes: &[u8]) -> Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, bytes)?,
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }

    fn summary<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        match &self.summary {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stderr().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn json_main<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.main(text.as_bytes())
    }
}

#[derive(Serialize)]
struct FitSummary<'a> {
    energy: String,
    breakpoints: &'a [f64],
    slopes: &'a [i64],
    intercepts: &'a [f64],
    brackets: &'a [(f64, f64)],
    fit_residual: f64,
    y_min: f64,
    y_max: f64,
}

fn fit_summary(r: &Resolved, pl: &PiecewiseLinear) -> serde_json::Value {
    serde_json::to_value(FitSummary {
        energy: fmt_complex(r.energy),
        breakpoints: &pl.breakpoints,
        slopes: &pl.slopes,
        intercepts: &pl.intercepts,
        brackets: &pl.brackets,
        fit_residual: pl.fit_residual,
        y_min: pl.y_min,
        y_max: pl.y_max,
    })
    .unwrap_or_default()
}

fn cmd_le(r: &Resolved, s: &Sinks) -> Result<()> {
    let ys = r.y_grid(2.0, 21);
    let rows: Vec<Vec<String>> = ys
        .par_iter()
        .map(|&y| {
            converged_le(&r.potential, r.alpha, r.energy, y, r.tol(), &LeConfig::default())
                .map(|v| vec![num(y), num(v.value), num(v.est_error)])
                .map_err(|e| Error::ProfilePoint { y, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(r.metadata(&[]), &["y", "L", "est_error"]);
    t.rows = rows;
    s.main(&t.render()?)
}

fn cmd_accel(r: &Resolved, s: &Sinks, profile: Option<&Path>) -> Result<()> {
    let prof = match profile {
        Some(p) => read_profile_csv(p, r.energy)?,
        None => r.profile(61)?,
    };
    let pl = fit_quantized(&prof, r.raw.slope_tol.unwrap_or(DEFAULT_SLOPE_TOL))?;
    s.json_main(&fit_summary(r, &pl))
}

fn cmd_winding(r: &Resolved, s: &Sinks) -> Result<()> {
    let ys = r.y_grid(3.0, 7);
    let fixed = r.raw.fixed_n.unwrap_or(false);
    let mut t = Table::new(
        r.metadata(&[("mode", if fixed { "fixed_n".into() } else { "limit_plus".into() })]),
        &["y", "nu_n", "W", "n", "stabilized"],
    );
    for &y in &ys {
        if fixed {
            let n = r.n(1000);
            let params = CocycleParams::new(r.alpha, r.energy, y, n)?;
            let grid = r.raw.grid.unwrap_or((4 * n * r.potential.degree().max(1) as usize).next_power_of_two().max(64));
            let w = winding_n(&r.potential, &params, grid)?;
            t.rows.push(vec![num(y), num(w.nu_n), w.total_winding.to_string(), n.to_string(), "true".into()]);
            continue;
        }
        let cfg = LimitConfig {
            n_start: r.n(LimitConfig::default().n_start),
            ..LimitConfig::default()
        };
        let (table, stabilized) = match winding_limit(&r.potential, r.alpha, r.energy, y, Side::Plus, &cfg) {
            Ok(res) => (res.table, true),
            Err(Error::LimitNotStabilized { table }) => (table, false),
            Err(e) => return Err(e),
        };
        let last = table.last().ok_or_else(|| Error::InvalidInput("empty winding table".into()))?;
        let w = -(last.nu_n * last.n as f64).round() as i64;
        t.rows.push(vec![num(y), num(last.nu_n), w.to_string(), last.n.to_string(), stabilized.to_string()]);
    }
    s.main(&t.render()?)
}

fn cmd_zeros(r: &Resolved, s: &Sinks) -> Result<()> {
    let n = r.n(100);
    let pl = fit_quantized(&r.profile(61)?, r.raw.slope_tol.unwrap_or(DEFAULT_SLOPE_TOL))?;
    let rep = zero_circle_report(&r.potential, r.alpha, r.energy, n, &pl, r.raw.epsilon.unwrap_or(0.05))?;
    let mut t = Table::new(
        r.metadata(&[("n", n.to_string()), ("epsilon", rep.epsilon.to_string())]),
        &["re", "im", "neg_log_abs", "assigned_gamma"],
    );
    for ((z, rl), a) in rep.roots.iter().zip(&rep.radii_log).zip(&rep.assigned) {
        let gamma = a.map_or(String::new(), |j| num(rep.turning_points[j]));
        t.rows.push(vec![num(z.re), num(z.im), num(*rl), gamma]);
    }
    s.main(&t.render()?)?;
    s.summary(&serde_json::json!({ "fit": fit_summary(r, &pl), "report": rep }))
}

fn cmd_dos(r: &Resolved, s: &Sinks) -> Result<()> {
    let n = r.n(128);
    let mu = empirical_dos(&r.potential, r.alpha, r.y(), n, r.raw.phases.unwrap_or(64))?;
    let meta = r.metadata(&[
        ("y", r.y().to_string()),
        ("n", n.to_string()),
        ("phases", mu.phase_count.to_string()),
        ("weight", num(mu.weight)),
    ]);
    let mut t = Table::new(meta, &["re", "im"]);
    for p in &mu.points {
        t.rows.push(vec![num(p.re), num(p.im)]);
    }
    s.main(&t.render()?)
}

fn cmd_thouless(r: &Resolved, s: &Sinks) -> Result<()> {
    let probes = match &r.raw.probes {
        Some(p) => probe_circle(parse_complex(&p.center)?, p.radius, p.count),
        None => probe_circle(r.energy, 3.0, 16),
    };
    let rep = thouless_report(
        &r.potential,
        r.alpha,
        r.y(),
        r.n(128),
        r.raw.phases.unwrap_or(64),
        &probes,
        r.raw.guard.unwrap_or(DEFAULT_GUARD),
        r.tol(),
    )?;
    let meta = r.metadata(&[
        ("y", rep.y.to_string()),
        ("n", rep.n.to_string()),
        ("phases", rep.phase_count.to_string()),
        ("guard", rep.guard.to_string()),
    ]);
    let mut t = Table::new(meta, &["re", "im", "potential", "L", "residual", "excluded"]);
    let opt = |v: Option<f64>| v.map_or(String::new(), num);
    for p in &rep.probes {
        t.rows.push(vec![num(p.re), num(p.im), num(p.potential), opt(p.lyapunov), opt(p.residual), p.excluded.to_string()]);
    }
    s.main(&t.render()?)?;
    s.summary(&serde_json::json!({
        "y": rep.y,
        "n": rep.n,
        "phase_count": rep.phase_count,
        "max_residual": rep.max_residual,
        "assumption": rep.assumption,
    }))
}

fn cmd_accden(r: &Resolved, s: &Sinks) -> Result<()> {
    let cfg = AccdenConfig {
        le_tol: r.tol(),
        slope_tol: r.raw.slope_tol.unwrap_or(DEFAULT_SLOPE_TOL),
        profile_points: r.raw.y_points.unwrap_or(AccdenConfig::default().profile_points),
    };
    let rep = accden_check(&r.potential, r.alpha, r.energy, r.y(), r.n(128), r.raw.phases.unwrap_or(64), &cfg)?;
    s.json_main(&rep)
}

fn cmd_ldt(r: &Resolved, s: &Sinks) -> Result<()> {
    let ns = r.raw.n.clone().unwrap_or_else(|| vec![500, 1000, 2000, 4000]);
    let eps = r.raw.epsilon.unwrap_or(0.1);
    let grid = r.raw.grid.unwrap_or(1024);
    let meta = r.metadata(&[("y", r.y().to_string()), ("epsilon", eps.to_string()), ("grid", grid.to_string())]);
    let mut t = Table::new(meta, &["n", "fraction"]);
    for n in ns {
        let params = CocycleParams::new(r.alpha, r.energy, r.y(), n)?;
        let f = ldt_deviation_fraction(&r.potential, &params, eps, grid)?;
        t.rows.push(vec![n.to_string(), num(f)]);
    }
    s.main(&t.render()?)
}

fn cmd_verify(raw: &RunConfig, s: &Sinks) -> Result<bool> {
    let d = VerifyConfig::default();
    let cfg = VerifyConfig {
        tolerance_scale: raw.tolerance_scale.unwrap_or(d.tolerance_scale),
        seed: raw.seed.unwrap_or(d.seed),
        cases_per_property: raw.cases_per_property.unwrap_or(d.cases_per_property),
        criteria: raw.criteria.clone().unwrap_or_default(),
        check_runtime: raw.check_runtime.unwrap_or(d.check_runtime),
    };
    if !(cfg.tolerance_scale > 0.0 && cfg.tolerance_scale.is_finite()) {
        return Err(Error::Config("tolerance_scale must be positive".into()));
    }
    if let Some(bad) = cfg.criteria.iter().find(|c| !(1..=11).contains(*c)) {
        return Err(Error::Config(format!("no criterion {bad}")));
    }
    let outcomes = run_all(&cfg, |o| println!("{o}"));
    let passed = outcomes.iter().all(|o| o.passed);
    s.summary(&serde_json::json!({ "passed": passed, "config": cfg, "criteria": outcomes }))?;
    Ok(passed)
}

fn init_workers(workers: Option<usize>) -> Result<()> {
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    init_workers(cli.workers)?;
    let (opts, profile) = match &cli.command {
        Command::Accel { opts, profile } => (opts, profile.as_deref()),
        Command::Le(o)
        | Command::Winding(o)
        | Command::Zeros(o)
        | Command::Dos(o)
        | Command::Thouless(o)
        | Command::Accden(o)
        | Command::Ldt(o)
        | Command::Verify(o) => (o, None),
    };
    let base = match &opts.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let raw = base.overlay(opts)?;
    let sinks = Sinks {
        output: raw.output.clone(),
        summary: raw.summary.clone(),
    };
    if let Command::Verify(_) = cli.command {
        return Ok(if cmd_verify(&raw, &sinks)? { 0 } else { EXIT_VERIFY_FAILED });
    }
    let r = Resolved::new(raw)?;
    match cli.command {
        Command::Le(_) => cmd_le(&r, &sinks)?,
        Command::Accel { .. } => cmd_accel(&r, &sinks, profile)?,
        Command::Winding(_) => cmd_winding(&r, &sinks)?,
        Command::Zeros(_) => cmd_zeros(&r, &sinks)?,
        Command::Dos(_) => cmd_dos(&r, &sinks)?,
        Command::Thouless(_) => cmd_thouless(&r, &sinks)?,
        Command::Accden(_) => cmd_accden(&r, &sinks)?,
        Command::Ldt(_) => cmd_ldt(&r, &sinks)?,
        Command::Verify(_) => unreachable!("handled above"),
    }
    Ok(0)
}

/// Entry point for the binary: usage errors exit with status 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_fields_with_position() {
        let err = RunConfig::parse("{\n  \"alpha\": \"golden\",\n  \"nn\": 3\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nn") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn flags_override_config() {
        let base = RunConfig::parse(r#"{"potential": {"amo": 0.5}, "energy": "1", "n": [10]}"#).unwrap();
        let opts = Opts {
            energy: Some("2+2i".into()),
            ..Opts::default()
        };
        let r = Resolved::new(base.overlay(&opts).unwrap()).unwrap();
        assert_eq!(r.energy, Complex64::new(2.0, 2.0));
        assert_eq!(r.n(0), 10);
        assert_eq!(r.potential_label, "amo:0.5");
    }

    #[test]
    fn empty_range_is_a_config_error() {
        let raw = RunConfig {
            y_min: Some(1.0),
            y_max: Some(0.5),
            ..RunConfig::default()
        };
        let e = Resolved::new(raw).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        assert_eq!(num(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn coefficient_potentials_resolve() {
        let raw = RunConfig::parse(r#"{"potential": {"coeffs": [[1, 0.5, 0], [-1, 0.5, 0]]}, "alpha": "1/3"}"#).unwrap();
        let r = Resolved::new(raw).unwrap();
        assert!(r.potential.is_real());
        assert!((r.alpha - std::f64::consts::TAU / 3.0).abs() < 1e-15);
    }
}
