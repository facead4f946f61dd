//! The `ckrige` command-line front end.
//!
//! Input is a two-column CSV of `(x, v)` pairs with an optional header row.
//! Every command produces a [`ResultDocument`], printed either as JSON
//! (`--json`) or as an aligned table. Exit codes: 0 success, 2 input or flag
//! errors, 3 degenerate mathematics.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex_moments::{complex_variance, index_moments, zero_variance_points};
use crate::error::Error;
use crate::kriging::{
    build_design, feature_vector, gls_beta, gram_condition, krige, predict,
    prediction_error_variance, trend_variance, CorrelationMatrix, Sample, TrendBasis,
    CONDITION_WARNING,
};
use crate::numerics::{ComplexScalar, ConjugatePair, Matrix};
use crate::validation::{monte_carlo_mse, NoiseKind, SimulationConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// A CSV cell or row that could not be read. Rows and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at row {row}, column {column}: {message}")]
pub struct ParseError {
    pub row: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error(transparent)]
    Math(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(e) if e.is_degenerate() => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        }
    }
}

/// Parsed two-column input.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSample {
    pub header: Option<Vec<String>>,
    pub rows: Vec<(f64, f64)>,
}

impl CsvSample {
    pub fn covariates(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.0).collect()
    }

    pub fn observations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.1).collect()
    }

    pub fn to_sample(&self) -> Result<Sample, Error> {
        Sample::new(self.covariates(), self.observations())
    }
}

fn parse_number(cell: &str) -> Option<f64> {
    // `f64::from_str` also accepts "inf" and "NaN"; only finite decimals count
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `x,v` rows. A first row containing a non-numeric cell is taken as
/// the header.
pub fn parse_csv(text: &str) -> Result<CsvSample, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut header = None;
    let mut rows = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ParseError {
            row: e.position().map_or(index + 1, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let row = record.position().map_or(index + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(ParseError {
                row,
                column: record.len().min(2) + 1,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let cells: Vec<Option<f64>> = record.iter().map(parse_number).collect();
        if index == 0 && cells.iter().any(Option::is_none) {
            header = Some(record.iter().map(str::to_owned).collect());
            continue;
        }
        let mut values = [0.0; 2];
        for (column, (cell, raw)) in cells.iter().zip(record.iter()).enumerate() {
            values[column] = cell.ok_or_else(|| ParseError {
                row,
                column: column + 1,
                message: if raw.is_empty() {
                    "missing value".to_owned()
                } else {
                    format!("{raw:?} is not a finite decimal number")
                },
            })?;
        }
        rows.push((values[0], values[1]));
    }
    if rows.is_empty() {
        return Err(ParseError {
            row: header.as_ref().map_or(1, |_| 2),
            column: 1,
            message: "no data rows".to_owned(),
        });
    }
    Ok(CsvSample { header, rows })
}

/// One decimal, ties to even on the exact binary value.
pub fn render_one_decimal(x: f64) -> String {
    let s = format!("{x:.1}");
    if s == "-0.0" {
        "0.0".to_owned()
    } else {
        s
    }
}

/// Shortest round-trip representation, in exponent form for very small or
/// very large magnitudes.
fn full_precision(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRendering {
    pub re: String,
    pub im: String,
}

/// An output value: full precision plus its one-decimal rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Count(u64),
    Real {
        value: f64,
        rendered: String,
    },
    Complex {
        re: f64,
        im: f64,
        rendered: ComplexRendering,
    },
}

impl Quantity {
    pub fn real(value: f64) -> Self {
        Quantity::Real {
            value,
            rendered: render_one_decimal(value),
        }
    }

    pub fn complex(z: ComplexScalar) -> Self {
        Quantity::Complex {
            re: z.re,
            im: z.im,
            rendered: ComplexRendering {
                re: render_one_decimal(z.re),
                im: render_one_decimal(z.im),
            },
        }
    }

    fn full(&self) -> String {
        match self {
            Quantity::Count(c) => c.to_string(),
            Quantity::Real { value, .. } => full_precision(*value),
            Quantity::Complex { re, im, .. } => {
                let sign = if im.is_sign_negative() { '-' } else { '+' };
                format!(
                    "{} {sign} {}i",
                    full_precision(*re),
                    full_precision(im.abs())
                )
            }
        }
    }

    fn rendered(&self) -> String {
        match self {
            Quantity::Count(_) => String::new(),
            Quantity::Real { rendered, .. } => rendered.clone(),
            Quantity::Complex { rendered, .. } => {
                let (sign, im) = match rendered.im.strip_prefix('-') {
                    Some(rest) => ('-', rest),
                    None => ('+', rendered.im.as_str()),
                };
                format!("{} {sign} {im}i", rendered.re)
            }
        }
    }
}

/// Echo of the inputs a command ran with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch: Option<String>,
    #[serde(flatten)]
    pub extra: IndexMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub inputs: Inputs,
    pub outputs: IndexMap<String, Quantity>,
    pub warnings: Vec<String>,
}

impl ResultDocument {
    fn new(command: &str, inputs: Inputs) -> Self {
        Self {
            command: command.to_owned(),
            inputs,
            outputs: IndexMap::new(),
            warnings: Vec::new(),
        }
    }

    fn put(&mut self, name: impl Into<String>, q: Quantity) {
        self.outputs.insert(name.into(), q);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Aligned `name  full  rendered` table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let width = self.outputs.keys().map(String::len).max().unwrap_or(0);
        let cells: Vec<(String, String)> = self
            .outputs
            .values()
            .map(|q| (q.full(), q.rendered()))
            .collect();
        let full_width = cells.iter().map(|c| c.0.len()).max().unwrap_or(0);
        for (name, (full, rendered)) in self.outputs.keys().zip(&cells) {
            let line = format!("  {name:<width$}  {full:<full_width$}  {rendered}");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Constant,
    Linear,
}

impl BasisArg {
    fn basis(self) -> TrendBasis {
        match self {
            BasisArg::Constant => TrendBasis::Constant,
            BasisArg::Linear => TrendBasis::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
    Both,
}

impl BranchArg {
    fn name(self) -> &'static str {
        match self {
            BranchArg::Plus => "plus",
            BranchArg::Minus => "minus",
            BranchArg::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Gaussian,
    Uniform,
}

#[derive(Debug, Parser)]
#[command(
    name = "ckrige",
    version,
    about = "Kriging with a linear trend at real and complex points"
)]
pub struct Cli {
    /// Emit a single JSON document on standard output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Least-squares trend coefficients and kriging variance at a real point.
    Fit {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "linear")]
        basis: BasisArg,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        sigma2: f64,
        /// `identity`, or a file holding a whitespace-separated n×n matrix.
        #[arg(long, default_value = "identity")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
    },
    /// Complex mean and variance at the zero-variance points.
    ComplexMean {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        branch: BranchArg,
    },
    /// Index moments and the zero-variance points m ± iσ.
    ZeroPoints { file: PathBuf },
    /// Monte-Carlo check of the prediction error moments.
    Simulate {
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta2: f64,
        #[arg(long, value_enum, default_value = "linear")]
        basis: BasisArg,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, default_value_t = 100_000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "gaussian")]
        noise: NoiseArg,
        /// A real number, `zero-variance` (m + iσ) or `zero-variance-minus`.
        #[arg(long, default_value = "zero-variance", allow_hyphen_values = true)]
        at: String,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_sample(path: &Path) -> Result<Sample, CliError> {
    Ok(parse_csv(&read_file(path)?)?.to_sample()?)
}

fn load_lambda(spec: &str, n: usize) -> Result<CorrelationMatrix, CliError> {
    if spec == "identity" {
        return Ok(CorrelationMatrix::Identity);
    }
    let text = read_file(Path::new(spec))?;
    let values = text
        .split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            parse_number(tok).ok_or_else(|| ParseError {
                row: i / n.max(1) + 1,
                column: i % n.max(1) + 1,
                message: format!("{tok:?} is not a finite decimal number"),
            })
        })
        .collect::<Result<Vec<f64>, ParseError>>()?;
    if values.len() != n * n {
        return Err(CliError::InvalidFlag(format!(
            "--lambda: expected {} entries for a {n}x{n} matrix, found {}",
            n * n,
            values.len()
        )));
    }
    let matrix = Matrix::new(n, n, values)?;
    Ok(CorrelationMatrix::dense(matrix)?)
}

pub fn cmd_fit(
    file: &Path,
    basis: BasisArg,
    sigma2: f64,
    lambda: &str,
    at: Option<f64>,
) -> Result<ResultDocument, CliError> {
    if !(sigma2.is_finite() && sigma2 >= 0.0) {
        return Err(CliError::InvalidFlag(format!(
            "--sigma2 must be non-negative, got {sigma2}"
        )));
    }
    let sample = load_sample(file)?;
    let corr = load_lambda(lambda, sample.len())?;
    let design = build_design(basis.basis(), sample.covariates())?;
    let mut doc = ResultDocument::new(
        "fit",
        Inputs {
            n: Some(sample.len()),
            basis: Some(design.basis().name().to_owned()),
            sigma2: Some(sigma2),
            ..Inputs::default()
        },
    );
    doc.inputs.extra.insert("lambda".into(), lambda.into());
    if let Some(j) = at {
        doc.inputs.extra.insert("at".into(), j.into());
    }

    let condition = gram_condition(&design, &corr)?;
    let beta = gls_beta(&design, &corr, sample.observations())?;
    for (i, b) in beta.iter().enumerate() {
        doc.put(format!("beta_{}", i + 1), Quantity::real(*b));
    }
    doc.put("gram_condition", Quantity::real(condition));
    if let Some(j) = at {
        let feature = feature_vector(design.basis(), ComplexScalar::new(j, 0.0))?;
        let solution = krige(&design, &corr, &feature, sample.observations())?;
        doc.put(
            "variance_factor",
            Quantity::real(solution.variance_factor.re),
        );
        doc.put(
            "trend_variance",
            Quantity::real(trend_variance(&solution, sigma2)?.re),
        );
        doc.put(
            "prediction_error_variance",
            Quantity::real(prediction_error_variance(&solution, &corr, sigma2)?.re),
        );
        doc.put(
            "prediction",
            Quantity::real(predict(&solution, sample.observations())?.re),
        );
    }
    if condition > CONDITION_WARNING {
        doc.warnings.push(format!(
            "Gram matrix is ill-conditioned (condition estimate {condition:.3e})"
        ));
    }
    Ok(doc)
}

pub fn cmd_complex_mean(file: &Path, branch: BranchArg) -> Result<ResultDocument, CliError> {
    let sample = load_sample(file)?;
    let cm = complex_variance(&sample)?;
    let mut doc = ResultDocument::new(
        "complex-mean",
        Inputs {
            n: Some(sample.len()),
            basis: Some("linear".into()),
            branch: Some(branch.name().into()),
            ..Inputs::default()
        },
    );
    type Pick = fn(&ConjugatePair) -> ComplexScalar;
    let branches: &[(&str, Pick)] = match branch {
        BranchArg::Plus => &[("plus", |p| p.plus)],
        BranchArg::Minus => &[("minus", |p| p.minus)],
        BranchArg::Both => &[("plus", |p| p.plus), ("minus", |p| p.minus)],
    };
    for (name, pick) in branches {
        doc.put(format!("mean_{name}"), Quantity::complex(pick(&cm.mean)));
    }
    doc.put("real_standard_error", Quantity::real(cm.real_se));
    doc.put("imaginary_standard_error", Quantity::real(cm.imag_se));
    doc.put("slope", Quantity::real(cm.slope));
    for (name, pick) in branches {
        doc.put(
            format!("variance_{name}"),
            Quantity::complex(pick(&cm.variance)),
        );
    }
    for (name, pick) in branches {
        doc.put(
            format!("weighted_square_{name}"),
            Quantity::complex(pick(&cm.weighted_square)),
        );
    }
    for (name, pick) in branches {
        doc.put(
            format!("zero_point_{name}"),
            Quantity::complex(pick(&cm.zero_points)),
        );
    }
    Ok(doc)
}

pub fn cmd_zero_points(file: &Path) -> Result<ResultDocument, CliError> {
    let sample = load_sample(file)?;
    let moments = index_moments(sample.covariates())?;
    let points = zero_variance_points(sample.covariates())?;
    let mut doc = ResultDocument::new(
        "zero-points",
        Inputs {
            n: Some(sample.len()),
            ..Inputs::default()
        },
    );
    doc.put("m_n", Quantity::real(moments.m_n));
    doc.put("m_sn", Quantity::real(moments.m_sn));
    doc.put("sigma_n", Quantity::real(moments.sigma_n));
    doc.put("zero_point_plus", Quantity::complex(points.plus));
    doc.put("zero_point_minus", Quantity::complex(points.minus));
    Ok(doc)
}

/// Flags of the `simulate` command.
#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub n: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub basis: BasisArg,
    pub sigma: f64,
    pub replicates: usize,
    pub seed: u64,
    pub noise: NoiseArg,
    pub at: String,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<ResultDocument, CliError> {
    if args.n == 0 {
        return Err(CliError::InvalidFlag("--n must be at least 1".into()));
    }
    if !(args.sigma.is_finite() && args.sigma >= 0.0) {
        return Err(CliError::InvalidFlag(format!(
            "--sigma must be non-negative, got {}",
            args.sigma
        )));
    }
    if args.replicates == 0 {
        return Err(CliError::InvalidFlag(
            "--replicates must be at least 1".into(),
        ));
    }
    let covariates: Vec<f64> = (1..=args.n).map(|i| i as f64).collect();
    let point = match args.at.as_str() {
        "zero-variance" | "zero-variance-plus" => zero_variance_points(&covariates)?.plus,
        "zero-variance-minus" => zero_variance_points(&covariates)?.minus,
        other => ComplexScalar::new(
            parse_number(other)
                .ok_or_else(|| CliError::InvalidFlag(format!("--at: {other:?} is not a number")))?,
            0.0,
        ),
    };
    let beta = match args.basis {
        BasisArg::Constant => vec![args.beta1],
        BasisArg::Linear => vec![args.beta1, args.beta2],
    };
    let config = SimulationConfig {
        covariates,
        beta,
        sigma: args.sigma,
        replicates: args.replicates,
        seed: args.seed,
        noise_kind: match args.noise {
            NoiseArg::Gaussian => NoiseKind::Gaussian,
            NoiseArg::Uniform => NoiseKind::Uniform,
        },
    };
    let report = monte_carlo_mse(&config, point).map_err(|e| match e {
        Error::InvalidConfig(msg) => CliError::InvalidFlag(msg),
        other => CliError::Math(other),
    })?;

    let design = build_design(config.basis(), &config.covariates)?;
    let feature = feature_vector(design.basis(), point)?;
    let expected =
        crate::kriging::kriging_weights(&design, &CorrelationMatrix::Identity, &feature)?
            .variance_factor
            * (args.sigma * args.sigma);

    let mut doc = ResultDocument::new(
        "simulate",
        Inputs {
            n: Some(args.n),
            basis: Some(design.basis().name().into()),
            sigma2: Some(args.sigma * args.sigma),
            ..Inputs::default()
        },
    );
    let extra = &mut doc.inputs.extra;
    extra.insert("beta1".into(), args.beta1.into());
    if args.basis == BasisArg::Linear {
        extra.insert("beta2".into(), args.beta2.into());
    }
    extra.insert("sigma".into(), args.sigma.into());
    extra.insert("replicates".into(), args.replicates.into());
    extra.insert("seed".into(), args.seed.into());
    extra.insert(
        "noise".into(),
        match args.noise {
            NoiseArg::Gaussian => "gaussian",
            NoiseArg::Uniform => "uniform",
        }
        .into(),
    );
    extra.insert("at".into(), args.at.clone().into());

    doc.put("evaluation_point", Quantity::complex(point));
    doc.put("mean_error_re", Quantity::real(report.mean_error_re));
    doc.put("mean_error_im", Quantity::real(report.mean_error_im));
    doc.put("var_re", Quantity::real(report.var_re));
    doc.put("var_im", Quantity::real(report.var_im));
    doc.put("cov_re_im", Quantity::real(report.cov_re_im));
    doc.put("bilinear_mse", Quantity::complex(report.bilinear_mse));
    doc.put("expected_bilinear_mse", Quantity::complex(expected));
    doc.put(
        "replicates_used",
        Quantity::Count(report.replicates_used as u64),
    );
    Ok(doc)
}

pub fn execute(command: &Command) -> Result<ResultDocument, CliError> {
    match command {
        Command::Fit {
            file,
            basis,
            sigma2,
            lambda,
            at,
        } => cmd_fit(file, *basis, *sigma2, lambda, *at),
        Command::ComplexMean { file, branch } => cmd_complex_mean(file, *branch),
        Command::ZeroPoints { file } => cmd_zero_points(file),
        Command::Simulate {
            n,
            beta1,
            beta2,
            basis,
            sigma,
            replicates,
            seed,
            noise,
            at,
        } => cmd_simulate(&SimulateArgs {
            n: *n,
            beta1: *beta1,
            beta2: *beta2,
            basis: *basis,
            sigma: *sigma,
            replicates: *replicates,
            seed: *seed,
            noise: *noise,
            at: at.clone(),
        }),
    }
}

/// Parses `args`, runs the command and writes the result. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            let _ = if code == EXIT_OK {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return if code == EXIT_OK { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(&cli.command) {
        Ok(doc) => {
            for w in &doc.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let text = if cli.json {
                doc.to_json()
            } else {
                doc.to_table()
            };
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
