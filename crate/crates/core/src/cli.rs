//! `kg-spectra` command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eigenfunctions::{count_sign_changes, Branch, EigenError, Eigenfunction};
use crate::fields::{em_fields, CaseId, PhysicalParams};
use crate::grid::GridSpec;
use crate::spectrum::{energy_levels, EnergyResult, QUANTIZATION_TOL};
use crate::verify::{
    closed_form_bracket, default_grid, ode_residual, ode_residual_at, shoot_eigenvalue, symmetry_check,
    ODE_RESIDUAL_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kg-spectra", version, about = "Klein-Gordon bound states in orthogonal electromagnetic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Eigenfunction,
    Verify,
    Fields,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels n_min..=n_max with validity flags
    Spectrum(CommonArgs),
    /// Sampled φ(x2) for one level
    Eigenfunction(CommonArgs),
    /// Run the numerical oracles against the closed forms
    Verify(CommonArgs),
    /// Sampled fields and potentials
    Fields(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's case
    #[arg(long, value_parser = parse_case)]
    pub case: Option<CaseId>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub normalize: bool,
    /// Level for `eigenfunction`; defaults to n_min
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the effective config (after overrides) as JSON
    #[arg(long)]
    pub dump_config: Option<PathBuf>,
    /// Drop spectrum rows without a valid branch
    #[arg(long)]
    pub valid_only: bool,
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse::<CaseId>().map_err(|e| e.to_string())
}

/// Optional tolerance overrides for `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantization: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shooting_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: CaseId,
    pub q: f64,
    pub m: f64,
    pub p1: f64,
    pub p3: f64,
    pub alpha: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            q: self.q,
            m: self.m,
            p1: self.p1,
            p3: self.p3,
            alpha: self.alpha,
            beta0: self.beta0,
            beta1: self.beta1,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::config(format!("config: {e} (line {}, column {})", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params()
            .validate()
            .map_err(|e| CliError::config(format!("config: {e}")))?;
        if self.n_min > self.n_max {
            return Err(CliError::config(format!(
                "config field n_min: {} exceeds n_max = {}",
                self.n_min, self.n_max
            )));
        }
        if self.n_min < self.case.min_n() {
            return Err(CliError::config(format!(
                "config field n_min: case {} starts at n = {}",
                self.case,
                self.case.min_n()
            )));
        }
        self.grid
            .validate(self.case)
            .map_err(|e| CliError::config(format!("config field grid: {e}")))
    }

    fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }
}

/// One table cell in its CSV spelling.
fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn json_num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn write_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::numeric(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::numeric(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::numeric(e.to_string()))
}

/// Result of one command: the text to emit, warnings for stderr and the
/// exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub warnings: Vec<String>,
    pub code: i32,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        Self {
            body,
            warnings: Vec::new(),
            code: EXIT_OK,
        }
    }
}

pub const SPECTRUM_HEADER: [&str; 9] = [
    "n",
    "e_plus",
    "e_minus",
    "valid_plus",
    "valid_minus",
    "gamma0",
    "gamma1",
    "gamma2",
    "diagnostics",
];
pub const EIGENFUNCTION_HEADER: [&str; 3] = ["x2", "phi", "diagnostics"];
pub const FIELDS_HEADER: [&str; 5] = ["x2", "E", "B", "A0", "A1"];

/// Exponents reported for a level: the first valid branch, else whatever the
/// plus branch produced.
fn reported_gammas(level: &EnergyResult) -> Option<[f64; 3]> {
    level
        .valid_branches()
        .first()
        .map(|(_, g)| g.columns())
        .or_else(|| level.gammas_plus.map(|g| g.columns()))
}

pub fn cmd_spectrum(cfg: &RunConfig, format: Format, valid_only: bool) -> Result<CommandOutput, CliError> {
    let params = cfg.params();
    let mut levels = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let level = energy_levels(cfg.case, &params, n).map_err(|e| CliError::numeric(format!("n = {n}: {e}")))?;
        if !valid_only || level.any_valid() {
            levels.push(level);
        }
    }
    let mut warnings = Vec::new();
    if levels.is_empty() {
        warnings.push("no levels left after validity filtering".to_string());
    }
    let body = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = levels
                .iter()
                .map(|l| {
                    let g = reported_gammas(l);
                    let gcol = |i: usize| g.map(|g| num(g[i])).unwrap_or_default();
                    vec![
                        l.n.to_string(),
                        num(l.e_plus),
                        opt_num(l.e_minus),
                        l.valid_plus.to_string(),
                        l.valid_minus.to_string(),
                        gcol(0),
                        gcol(1),
                        gcol(2),
                        l.diagnostics.join("; "),
                    ]
                })
                .collect();
            write_csv(&SPECTRUM_HEADER, &rows)?
        }
        Format::Json => {
            let rows: Vec<Value> = levels
                .iter()
                .map(|l| {
                    let g = reported_gammas(l);
                    let gcol = |i: usize| g.map(|g| json_num(g[i])).unwrap_or(Value::Null);
                    json!({
                        "n": l.n,
                        "e_plus": json_num(l.e_plus),
                        "e_minus": l.e_minus.map(json_num).unwrap_or(Value::Null),
                        "valid_plus": l.valid_plus,
                        "valid_minus": l.valid_minus,
                        "gamma0": gcol(0),
                        "gamma1": gcol(1),
                        "gamma2": gcol(2),
                        "diagnostics": l.diagnostics,
                    })
                })
                .collect();
            json_text(&json!({ "case": cfg.case, "levels": rows, "warnings": warnings }))?
        }
    };
    Ok(CommandOutput {
        body,
        warnings,
        code: EXIT_OK,
    })
}

fn json_text(v: &Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::numeric(e.to_string()))
}

pub fn cmd_eigenfunction(cfg: &RunConfig, n: u32, normalize: bool, format: Format) -> Result<CommandOutput, CliError> {
    let params = cfg.params();
    let mut ef = Eigenfunction::first_valid(cfg.case, &params, n).map_err(|e| CliError::numeric(e.to_string()))?;
    let mut diagnostics = Vec::new();
    let mut normalized = false;
    if normalize {
        match ef.normalize() {
            Ok(e) => {
                ef = e;
                normalized = true;
            }
            Err(EigenError::NonNormalizable { .. }) => {
                diagnostics.push("non-normalizable; data left unnormalized".to_string())
            }
            Err(e) => return Err(CliError::numeric(e.to_string())),
        }
    }
    let xs = cfg.grid.samples();
    let phi = ef.sample(&xs).map_err(|e| CliError::numeric(e.to_string()))?;
    let diag = diagnostics.join("; ");
    let body = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = xs
                .iter()
                .zip(&phi)
                .map(|(x, p)| vec![num(*x), num(*p), diag.clone()])
                .collect();
            write_csv(&EIGENFUNCTION_HEADER, &rows)?
        }
        Format::Json => {
            let samples: Vec<Value> = xs
                .iter()
                .zip(&phi)
                .map(|(x, p)| json!({ "x2": json_num(*x), "phi": json_num(*p) }))
                .collect();
            json_text(&json!({
                "case": cfg.case,
                "n": n,
                "energy": json_num(ef.energy),
                "normalized": normalized,
                "sign_changes": count_sign_changes(&phi),
                "diagnostics": diagnostics,
                "samples": samples,
            }))?
        }
    };
    Ok(CommandOutput {
        body,
        warnings: diagnostics,
        code: EXIT_OK,
    })
}

pub fn cmd_fields(cfg: &RunConfig, format: Format) -> Result<CommandOutput, CliError> {
    let params = cfg.params();
    let samples = cfg
        .grid
        .samples()
        .into_iter()
        .map(|x| em_fields(cfg.case, &params, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::config(e.to_string()))?;
    let body = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| vec![num(s.x2), num(s.e_mag), num(s.b_mag), num(s.a0), num(s.a1)])
                .collect();
            write_csv(&FIELDS_HEADER, &rows)?
        }
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    json!({
                        "x2": json_num(s.x2),
                        "E": json_num(s.e_mag),
                        "B": json_num(s.b_mag),
                        "A0": json_num(s.a0),
                        "A1": json_num(s.a1),
                    })
                })
                .collect();
            json_text(&json!({ "case": cfg.case, "samples": rows }))?
        }
    };
    Ok(CommandOutput::ok(body))
}

/// Oracle results for one branch of one level.
fn verify_branch(cfg: &RunConfig, n: u32, branch: Branch, energy: f64, residual: f64, tol: &Tolerances) -> (Value, bool) {
    let params = cfg.params();
    let quant_tol = tol.quantization.unwrap_or(QUANTIZATION_TOL);
    let ode_tol = tol.ode_residual.unwrap_or(ODE_RESIDUAL_TOL);
    let shoot_tol = tol.shooting_rel.unwrap_or(1e-6);
    let perturb_min = tol.perturbation_min.unwrap_or(1e-3);
    let mut pass = residual.abs() <= quant_tol;
    let mut entry = serde_json::Map::new();
    entry.insert("energy".into(), json_num(energy));
    entry.insert("quantization_residual".into(), json_num(residual));

    let ode = Eigenfunction::new(cfg.case, &params, n, branch).map_err(|e| e.to_string()).and_then(|ef| {
        let grid = default_grid(&ef, 400).map_err(|e| e.to_string())?;
        let rep = ode_residual(&ef, &grid).map_err(|e| e.to_string())?;
        let perturbed = if energy != 0.0 {
            Some(ode_residual_at(&ef, 1.01 * energy, &grid).map_err(|e| e.to_string())?.rel_norm)
        } else {
            None
        };
        Ok((rep, perturbed))
    });
    match ode {
        Ok((rep, perturbed)) => {
            let ok = !rep.degenerate && rep.rel_norm <= ode_tol;
            let selective = perturbed.map(|p| p >= perturb_min);
            pass &= ok && selective.unwrap_or(true);
            entry.insert(
                "ode_residual".into(),
                json!({
                    "rel_norm": json_num(rep.rel_norm),
                    "degenerate": rep.degenerate,
                    "pass": ok,
                    "perturbed_rel_norm": perturbed.map(json_num).unwrap_or(Value::Null),
                    "selective": selective,
                }),
            );
        }
        Err(e) => {
            pass = false;
            entry.insert("ode_residual".into(), json!({ "error": e }));
        }
    }

    if cfg.case.is_kummer() {
        let bracket = closed_form_bracket(cfg.case, &params, n, energy);
        match shoot_eigenvalue(cfg.case, &params, n, bracket) {
            Ok(shot) => {
                let delta = (shot - energy).abs() / energy.abs().max(f64::MIN_POSITIVE);
                let ok = delta <= shoot_tol;
                pass &= ok;
                entry.insert(
                    "shooting".into(),
                    json!({
                        "energy": json_num(shot),
                        "bracket": [json_num(bracket.0), json_num(bracket.1)],
                        "rel_delta": json_num(delta),
                        "pass": ok,
                    }),
                );
            }
            Err(e) => {
                pass = false;
                entry.insert("shooting".into(), json!({ "error": e.to_string() }));
            }
        }
    }
    entry.insert("pass".into(), json!(pass));
    (Value::Object(entry), pass)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.params();
    let tol = cfg.tolerances();
    let mut levels = Vec::new();
    let mut all_pass = true;
    for n in cfg.n_min..=cfg.n_max {
        let level = match energy_levels(cfg.case, &params, n) {
            Ok(l) => l,
            Err(e) => {
                all_pass = false;
                levels.push(json!({ "n": n, "error": e.to_string(), "pass": false }));
                continue;
            }
        };
        let mut branches = Vec::new();
        let mut level_pass = level.any_valid();
        let mut candidates = vec![(Branch::Plus, level.e_plus, level.valid_plus, level.residual_plus)];
        if let (Some(e), Some(r)) = (level.e_minus, level.residual_minus) {
            candidates.push((Branch::Minus, e, level.valid_minus, r));
        }
        for (branch, energy, valid, residual) in candidates {
            let tag = if branch == Branch::Plus { "+" } else { "-" };
            if !valid {
                branches.push(json!({ "branch": tag, "energy": json_num(energy), "valid": false }));
                continue;
            }
            let (mut entry, ok) = verify_branch(cfg, n, branch, energy, residual, &tol);
            entry["branch"] = json!(tag);
            entry["valid"] = json!(true);
            level_pass &= ok;
            branches.push(entry);
        }
        all_pass &= level_pass;
        levels.push(json!({
            "n": n,
            "branches": branches,
            "diagnostics": level.diagnostics,
            "pass": level_pass,
        }));
    }
    let symmetry = symmetry_check();
    all_pass &= symmetry;
    let report = json!({
        "case": cfg.case,
        "levels": levels,
        "symmetry_check": symmetry,
        "pass": all_pass,
    });
    Ok(CommandOutput {
        body: json_text(&report)?,
        warnings: Vec::new(),
        code: if all_pass { EXIT_OK } else { EXIT_VERIFY },
    })
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
        CliError::config(format!(
            "{}: {e} (line {}, column {})",
            args.config.display(),
            e.line(),
            e.column()
        ))
    })?;
    if let Some(case) = args.case {
        cfg.case = case;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

/// Runs one invocation and returns the result without touching the process
/// streams.
pub fn execute(cli: &Cli) -> Result<CommandOutput, CliError> {
    let (kind, args) = match &cli.command {
        Command::Spectrum(a) => (CommandKind::Spectrum, a),
        Command::Eigenfunction(a) => (CommandKind::Eigenfunction, a),
        Command::Verify(a) => (CommandKind::Verify, a),
        Command::Fields(a) => (CommandKind::Fields, a),
    };
    let cfg = load_config(args)?;
    if let Some(path) = &args.dump_config {
        let text = serde_json::to_string_pretty(&cfg).map_err(|e| CliError::numeric(e.to_string()))?;
        write_text(path, &(text + "\n"))?;
    }
    match kind {
        CommandKind::Spectrum => cmd_spectrum(&cfg, args.format, args.valid_only),
        CommandKind::Eigenfunction => cmd_eigenfunction(&cfg, args.n.unwrap_or(cfg.n_min), args.normalize, args.format),
        CommandKind::Verify => cmd_verify(&cfg),
        CommandKind::Fields => cmd_fields(&cfg, args.format),
    }
}

/// Entry point behind `main`; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let out_path = match &cli.command {
        Command::Spectrum(a) | Command::Eigenfunction(a) | Command::Verify(a) | Command::Fields(a) => a.out.clone(),
    };
    match execute(&cli) {
        Ok(out) => {
            let mut warn = String::new();
            for w in &out.warnings {
                let _ = writeln!(warn, "warning: {w}");
            }
            eprint!("{warn}");
            match out_path {
                Some(p) => {
                    if let Err(e) = write_text(&p, &out.body) {
                        eprintln!("error: {}", e.message);
                        return e.code;
                    }
                }
                None => print!("{}", out.body),
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
