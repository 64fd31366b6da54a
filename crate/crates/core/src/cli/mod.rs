//! Configuration parsing and the `diracdet` command.
//!
//! A run is described by a key-value file (`key = value`, `#` comments)
//! whose entries may be overridden on the command line. Flags win over the
//! file.

mod verify;

use crate::calderon::{
    check_agmon_cone, check_ellipticity, chiral_obstruction_witness, chiral_symbol, disk_q_lambda, AgmonGrid,
    AgmonReport, BoundaryCondition, EllipticityReport, Sector,
};
use crate::determinant::{ln_det_ratio, DeterminantResult};
use crate::error::Error;
use crate::greens::DiskProblem;
use crate::seeley::{GaugeField, GaugeProfile};
use clap::Parser;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

pub use verify::{run_verify_suite, CheckOutcome, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

pub const SWEEP_HEADER: [&str; 7] = ["x", "bulk", "boundary_re", "boundary_im", "total_re", "total_im", "flux"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Poly2,
    Gaussian,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Determinant,
    Verify,
    Ellipticity,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    W,
    WIm,
    Phi0,
    Radius,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
}

/// Errors of the command front end, each mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(m) => CliError::Usage(m),
            e => CliError::Compute(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Compute(Error::Domain(_) | Error::NonElliptic(_) | Error::Degenerate(_)) => EXIT_DOMAIN,
            CliError::Compute(_) => EXIT_TOLERANCE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(m: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(m.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub radius: f64,
    pub w_re: f64,
    pub w_im: f64,
    pub profile: ProfileKind,
    pub profile_params: Vec<f64>,
    pub alpha: f64,
    pub mode: Mode,
    pub sweep: Option<SweepSpec>,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            radius: 1.0,
            w_re: 1.0,
            w_im: 0.0,
            profile: ProfileKind::Poly2,
            profile_params: vec![1.0],
            alpha: 1.0,
            mode: Mode::Determinant,
            sweep: None,
            tolerances: BTreeMap::new(),
            output_path: None,
            format: Format::Json,
            seed: 7,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.trim().parse::<f64>().or_else(|_| usage(format!("{key}: cannot parse '{v}' as a number")))
}

fn parse_list(key: &str, v: &str) -> CliResult<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(vec![]);
    }
    v.split(',').map(|s| parse_f64(key, s)).collect()
}

/// `re` or `re,im`.
fn parse_w(v: &str) -> CliResult<(f64, f64)> {
    let parts = parse_list("w", v)?;
    match parts.as_slice() {
        [re] => Ok((*re, 0.0)),
        [re, im] => Ok((*re, *im)),
        _ => usage(format!("w: expected 're' or 're,im', got '{v}'")),
    }
}

fn parse_profile(v: &str) -> CliResult<ProfileKind> {
    match v.trim().to_ascii_lowercase().as_str() {
        "poly2" => Ok(ProfileKind::Poly2),
        "gaussian" => Ok(ProfileKind::Gaussian),
        "polynomial" | "custom" | "custom-polynomial" => Ok(ProfileKind::Polynomial),
        other => usage(format!("unknown profile '{other}'")),
    }
}

fn parse_mode(v: &str) -> CliResult<Mode> {
    match v.trim().to_ascii_lowercase().as_str() {
        "determinant" => Ok(Mode::Determinant),
        "verify" => Ok(Mode::Verify),
        "ellipticity" => Ok(Mode::Ellipticity),
        "sweep" => Ok(Mode::Sweep),
        other => usage(format!("unknown mode '{other}'")),
    }
}

fn parse_format(v: &str) -> CliResult<Format> {
    match v.trim().to_ascii_lowercase().as_str() {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        other => usage(format!("unknown format '{other}'")),
    }
}

/// `name:v1,v2,...` or `name:start..end/n` (n equispaced points).
pub fn parse_sweep(v: &str) -> CliResult<SweepSpec> {
    let Some((name, grid)) = v.split_once(':') else {
        return usage(format!("sweep: expected 'name:grid', got '{v}'"));
    };
    let param = match name.trim() {
        "w" | "w_re" => SweepParam::W,
        "w_im" => SweepParam::WIm,
        "phi0" => SweepParam::Phi0,
        "radius" => SweepParam::Radius,
        other => return usage(format!("sweep: unknown parameter '{other}'")),
    };
    let grid = if let Some((range, n)) = grid.split_once('/') {
        let Some((a, b)) = range.split_once("..") else {
            return usage("sweep: range must read 'start..end/n'");
        };
        let (a, b) = (parse_f64("sweep", a)?, parse_f64("sweep", b)?);
        let n: usize = n.trim().parse().or_else(|_| usage("sweep: point count must be an integer"))?;
        match n {
            0 => vec![],
            1 => vec![a],
            _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
        }
    } else {
        parse_list("sweep", grid)?
    };
    if grid.is_empty() {
        return usage("sweep: empty grid");
    }
    Ok(SweepSpec { param, grid })
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key.trim() {
            "radius" => self.radius = parse_f64(key, value)?,
            "w" => (self.w_re, self.w_im) = parse_w(value)?,
            "w_re" => self.w_re = parse_f64(key, value)?,
            "w_im" => self.w_im = parse_f64(key, value)?,
            "profile" => self.profile = parse_profile(value)?,
            "params" | "profile_params" => self.profile_params = parse_list(key, value)?,
            "alpha" => self.alpha = parse_f64(key, value)?,
            "mode" => self.mode = parse_mode(value)?,
            "sweep" => self.sweep = Some(parse_sweep(value)?),
            "out" | "output" => self.output_path = Some(PathBuf::from(value)),
            "format" => self.format = parse_format(value)?,
            "seed" => self.seed = value.parse().or_else(|_| usage(format!("seed: cannot parse '{value}'")))?,
            k if k.starts_with("tol.") => {
                let name = &k[4..];
                if !known_tolerance(name) {
                    return usage(format!("unknown tolerance '{name}'"));
                }
                let t = parse_f64(k, value)?;
                if !(t >= 0.0) {
                    return usage(format!("tolerance {name} must be non-negative"));
                }
                self.tolerances.insert(name.to_string(), t);
            }
            other => return usage(format!("unknown configuration key '{other}'")),
        }
        Ok(())
    }

    /// Parses key-value text on top of the defaults.
    pub fn from_kv_str(text: &str) -> CliResult<Self> {
        let mut c = RunConfig::default();
        c.apply_kv(text)?;
        Ok(c)
    }

    fn apply_kv(&mut self, text: &str) -> CliResult<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("line {}: expected 'key = value'", n + 1));
            };
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.w_re, self.w_im)
    }

    /// Checks the invariants; `w = 0` is a domain error, the rest usage errors.
    pub fn validate(&self) -> CliResult<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return usage(format!("radius must be positive, got {}", self.radius));
        }
        if !self.profile_params.iter().all(|p| p.is_finite()) {
            return usage("profile parameters must be finite");
        }
        if !(self.w_re.is_finite() && self.w_im.is_finite()) {
            return usage("w must be finite");
        }
        if self.w().norm() == 0.0 {
            return Err(CliError::Compute(Error::Domain("w = 0: the boundary condition is not elliptic".into())));
        }
        if self.mode == Mode::Sweep && self.sweep.is_none() {
            return usage("mode = sweep needs a sweep specification");
        }
        self.gauge()?;
        Ok(())
    }

    pub fn gauge(&self) -> CliResult<GaugeField> {
        let p = &self.profile_params;
        let profile = match self.profile {
            ProfileKind::Poly2 => match p.as_slice() {
                [phi0] => GaugeProfile::Poly2 { phi0: *phi0 },
                _ => return usage("poly2 takes one parameter: phi0"),
            },
            ProfileKind::Gaussian => match p.as_slice() {
                [phi0, width] => GaugeProfile::Gaussian { phi0: *phi0, width: *width },
                _ => return usage("gaussian takes two parameters: phi0, width"),
            },
            ProfileKind::Polynomial => GaugeProfile::Polynomial { coeffs: p.clone() },
        };
        Ok(GaugeField::new(profile, self.radius)?)
    }

    pub fn problem(&self) -> CliResult<DiskProblem> {
        Ok(DiskProblem::new(self.gauge()?, self.w(), self.alpha)?)
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| default_tolerance(name))
    }
}

/// Default tolerance of each named residual.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("alpha_quadrature", 1e-8),
    ("bulk_log", 1e-6),
    ("bulk_bessel", 1e-6),
    ("boundary_contour", 1e-6),
    ("flux_quadrature", 1e-10),
    ("singularity", 1e-4),
    ("clifford", 1e-13),
    ("calderon_projector", 1e-12),
    ("calderon_lambda", 1e-8),
    ("ellipticity", 0.0),
    ("agmon", 0.0),
    ("obstruction", 1e-12),
    ("green_boundary", 1e-10),
    ("green_dirac", 1e-6),
    ("green_singularity", 1e-4),
    ("zero_modes", 0.0),
    ("k_nu", 1e-6),
    ("d_tilde", 1e-8),
    ("residue", 1e-8),
];

fn known_tolerance(name: &str) -> bool {
    DEFAULT_TOLERANCES.iter().any(|(n, _)| *n == name)
}

fn default_tolerance(name: &str) -> f64 {
    DEFAULT_TOLERANCES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).unwrap_or(0.0)
}

#[derive(Parser, Debug, Default)]
#[command(name = "diracdet", about = "ln Det of the disk Dirac operator under bag-type boundary conditions")]
pub struct CliArgs {
    /// Key-value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// poly2, gaussian or polynomial.
    #[arg(long)]
    pub profile: Option<String>,
    /// Comma-separated profile parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// determinant, verify, ellipticity or sweep.
    #[arg(long)]
    pub mode: Option<String>,
    /// `name:v1,v2,...` or `name:start..end/n`.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Splits `--tol.<name>=v` and `--tol.<name> v` out of the argument list.
pub fn extract_tolerances(args: &[String]) -> CliResult<(Vec<String>, Vec<(String, String)>)> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(spec) = a.strip_prefix("--tol.") {
            let (name, value) = match spec.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => match it.next() {
                    Some(v) => (spec.to_string(), v.clone()),
                    None => return usage(format!("--tol.{spec} needs a value")),
                },
            };
            tols.push((name, value));
        } else {
            rest.push(a.clone());
        }
    }
    Ok((rest, tols))
}

/// Builds the configuration from `argv` (program name first): defaults,
/// then the config file, then flags.
pub fn config_from_args(argv: &[String]) -> CliResult<RunConfig> {
    let (rest, tols) = extract_tolerances(argv)?;
    let args = CliArgs::try_parse_from(&rest).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut c = RunConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        c.apply_kv(&text)?;
    }
    let flags: [(&str, Option<String>); 10] = [
        ("radius", args.radius.map(|v| v.to_string())),
        ("w", args.w.clone()),
        ("profile", args.profile.clone()),
        ("params", args.params.clone()),
        ("alpha", args.alpha.map(|v| v.to_string())),
        ("mode", args.mode.clone()),
        ("sweep", args.sweep.clone()),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
        ("format", args.format.clone()),
        ("seed", args.seed.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            c.set(k, &v)?;
        }
    }
    for (name, v) in tols {
        c.set(&format!("tol.{name}"), &v)?;
    }
    Ok(c)
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Rendered output (JSON or CSV text).
    pub output: String,
    /// All requested computations met their tolerances.
    pub within_tolerance: bool,
    pub failures: Vec<String>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.within_tolerance {
            EXIT_OK
        } else {
            EXIT_TOLERANCE
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Diagnostics above their tolerance. NaN marks an oracle that does not
/// apply to these parameters and is not counted.
fn failing_diagnostics(c: &RunConfig, r: &DeterminantResult) -> Vec<String> {
    r.diagnostics
        .iter()
        .filter(|(k, v)| !v.is_nan() && **v > c.tolerance(k))
        .map(|(k, v)| format!("{k}: residual {v:e} exceeds {:e}", c.tolerance(k)))
        .collect()
}

fn run_determinant(c: &RunConfig) -> CliResult<RunOutcome> {
    let r = ln_det_ratio(&c.problem()?)?;
    let failures = failing_diagnostics(c, &r);
    let output = match c.format {
        Format::Json => to_json(&r)?,
        Format::Csv => csv_text(&r.csv_header(), &[r.csv_record()])?,
    };
    Ok(RunOutcome { output, within_tolerance: failures.is_empty(), failures })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub result: DeterminantResult,
}

fn sweep_config(c: &RunConfig, param: SweepParam, x: f64) -> CliResult<RunConfig> {
    let mut s = c.clone();
    match param {
        SweepParam::W => s.w_re = x,
        SweepParam::WIm => s.w_im = x,
        SweepParam::Radius => s.radius = x,
        SweepParam::Phi0 => match s.profile_params.first_mut() {
            Some(p) => *p = x,
            None => return usage("phi0 sweep needs a profile with parameters"),
        },
    }
    s.validate()?;
    Ok(s)
}

/// Runs `ln_det_ratio` over the sweep grid.
pub fn sweep_rows(c: &RunConfig) -> CliResult<Vec<SweepRow>> {
    let spec = c.sweep.as_ref().ok_or_else(|| CliError::Usage("no sweep specification".into()))?;
    spec.grid
        .iter()
        .map(|&x| {
            let s = sweep_config(c, spec.param, x)?;
            Ok(SweepRow { x, result: ln_det_ratio(&s.problem()?)? })
        })
        .collect()
}

fn run_sweep(c: &RunConfig) -> CliResult<RunOutcome> {
    let rows = sweep_rows(c)?;
    let mut failures = Vec::new();
    for row in &rows {
        failures.extend(failing_diagnostics(c, &row.result).into_iter().map(|f| format!("x = {}: {f}", row.x)));
    }
    let output = match c.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let header: Vec<String> = SWEEP_HEADER.iter().map(|s| s.to_string()).collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let d = &r.result;
                    [r.x, d.bulk_term, d.boundary_term.re, d.boundary_term.im, d.total.re, d.total.im, d.flux]
                        .iter()
                        .map(|v| v.to_string())
                        .collect()
                })
                .collect();
            csv_text(&header, &body)?
        }
    };
    Ok(RunOutcome { output, within_tolerance: failures.is_empty(), failures })
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionDemo {
    pub beta: [f64; 2],
    pub witness: [f64; 3],
    pub norm_bq: f64,
    pub rank_bq: usize,
    pub rank_q: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticityOutput {
    pub bag: EllipticityReport,
    pub agmon: AgmonReport,
    pub obstruction: ObstructionDemo,
}

/// Lopatinsky–Shapiro report for the configured `w`, the Agmon cone around
/// the positive imaginary axis, and the four-dimensional chiral obstruction
/// for `b = (1, 1)`.
pub fn ellipticity_report(c: &RunConfig) -> CliResult<EllipticityOutput> {
    let bc = BoundaryCondition::disk_bag(c.w());
    let samples: Vec<(f64, Vec<f64>)> = (0..24)
        .flat_map(|k| {
            let th = 2.0 * PI * k as f64 / 24.0;
            [(th, vec![1.0]), (th, vec![-1.0]), (th, vec![3.5])]
        })
        .collect();
    let bag = check_ellipticity(&bc, |x, xi| disk_q_lambda(x, xi[0], Complex64::new(0.0, 0.0)), &samples)?;
    let agmon = check_agmon_cone(&bc, Sector { center: PI / 2.0, half_width: PI / 4.0 }, &AgmonGrid::default())?;
    let beta = [1.0, 1.0];
    let witness = chiral_obstruction_witness(Complex64::new(beta[0], 0.0), Complex64::new(beta[1], 0.0))?;
    let q = chiral_symbol(witness)?;
    let b = crate::clifford::ComplexMatrix::from_rows(&[&[Complex64::new(beta[0], 0.0), Complex64::new(beta[1], 0.0)]]);
    let bq = &b * &q;
    let obstruction = ObstructionDemo { beta, witness, norm_bq: bq.norm(), rank_bq: bq.rank(), rank_q: q.rank() };
    Ok(EllipticityOutput { bag, agmon, obstruction })
}

fn run_ellipticity(c: &RunConfig) -> CliResult<RunOutcome> {
    let rep = ellipticity_report(c)?;
    let mut failures = Vec::new();
    if !rep.bag.pass {
        failures.push("ellipticity: rank(b·q) ≠ rank(q) at some sample".to_string());
    }
    if !rep.agmon.pass {
        failures.push("agmon: cone conditions violated".to_string());
    }
    if rep.obstruction.norm_bq > c.tolerance("obstruction") {
        failures.push("obstruction: witness does not annihilate b·q".to_string());
    }
    let output = match c.format {
        Format::Json => to_json(&rep)?,
        Format::Csv => {
            let header: Vec<String> = ["theta", "xi", "rank_bq", "rank_q"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = rep
                .bag
                .samples
                .iter()
                .map(|s| vec![s.x.to_string(), s.xi[0].to_string(), s.rank_bq.to_string(), s.rank_q.to_string()])
                .collect();
            csv_text(&header, &rows)?
        }
    };
    Ok(RunOutcome { output, within_tolerance: failures.is_empty(), failures })
}

fn run_verify(c: &RunConfig) -> CliResult<RunOutcome> {
    let rep = run_verify_suite(c)?;
    let failures: Vec<String> = rep
        .checks
        .iter()
        .filter(|k| !k.pass)
        .map(|k| format!("{}: residual {:e} exceeds {:e}", k.name, k.residual, k.tol))
        .collect();
    let output = match c.format {
        Format::Json => to_json(&rep)?,
        Format::Csv => {
            let header: Vec<String> = ["name", "residual", "tol", "pass"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = rep
                .checks
                .iter()
                .map(|k| vec![k.name.clone(), k.residual.to_string(), k.tol.to_string(), k.pass.to_string()])
                .collect();
            csv_text(&header, &rows)?
        }
    };
    Ok(RunOutcome { output, within_tolerance: failures.is_empty(), failures })
}

/// Runs the configured mode and returns its rendered output.
pub fn run(c: &RunConfig) -> CliResult<RunOutcome> {
    c.validate()?;
    match c.mode {
        Mode::Determinant => run_determinant(c),
        Mode::Verify => run_verify(c),
        Mode::Ellipticity => run_ellipticity(c),
        Mode::Sweep => run_sweep(c),
    }
}

fn write_output(c: &RunConfig, text: &str) -> CliResult<()> {
    match &c.output_path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.write_all(b"\n")).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Entry point shared by the binary and the tests: parses `argv`, runs,
/// writes the result and returns the exit status.
pub fn main_with_args(argv: &[String]) -> i32 {
    let outcome = config_from_args(argv).and_then(|c| {
        let o = run(&c)?;
        write_output(&c, &o.output)?;
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            for f in &o.failures {
                eprintln!("tolerance failure: {f}");
            }
            o.exit_code()
        }
        Err(CliError::Usage(m)) if m.contains("Usage:") || m.starts_with("error:") => {
            eprintln!("{m}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("diracdet: {e}");
            e.exit_code()
        }
    }
}
