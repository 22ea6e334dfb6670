//! Batch front end: argument parsing, report assembly and exit codes.
//!
//! Every run produces one report document
//! `{ "schema": 1, "config": {...}, "result": {...}, "mismatches": [...] }`
//! (or a CSV table for integer-valued results). Rationals are written as
//! `"p/q"` strings and integers as bare decimal strings.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::Error;
use crate::invariants::{conjectural_j, divisors, hilb_euler, HilbTable};
use crate::lattice::{mukai_pairing, HodgeIsometry, MukaiVector};
use crate::modular::inv_delta;
use crate::ptseries::{
    bps_extract, gv_extract, ky_identity_check, negative_shift_bound, pt_borcherds, pt_main,
    pt_main_padded, pt_main_squared, pt_xbar, BPSTable, PTParams,
};
use crate::series::{format_rational, MultiSeries, Rational};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IsometryKind {
    Swap,
    SignH2,
    NegateRn,
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Hilb,
    Jinv,
    Pt,
    XbarVerify,
    KyVerify,
    Bps,
    Isometry,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Hilb => "hilb",
            Subcommand::Jinv => "jinv",
            Subcommand::Pt => "pt",
            Subcommand::XbarVerify => "xbar-verify",
            Subcommand::KyVerify => "ky-verify",
            Subcommand::Bps => "bps",
            Subcommand::Isometry => "isometry",
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub hilb_max: i64,
    pub y_max: i64,
    pub z_max: i64,
    pub q_max: i64,
    pub z_window: i64,
    pub signed: bool,
    pub vector: Option<MukaiVector>,
    pub kind: Option<IsometryKind>,
    pub reflect_by: Option<MukaiVector>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            hilb_max: 10,
            y_max: 3,
            z_max: 4,
            q_max: 4,
            z_window: 8,
            signed: false,
            vector: None,
            kind: None,
            reflect_by: None,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }

    /// Rejects out-of-range parameters before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        match self.subcommand {
            Subcommand::Hilb if self.hilb_max < 0 => return usage(format!("--max must be >= 0, got {}", self.hilb_max)),
            Subcommand::Pt | Subcommand::XbarVerify | Subcommand::Bps => {
                if self.y_max < 0 {
                    return usage(format!("--y-max must be >= 0, got {}", self.y_max));
                }
                if self.z_max < 1 {
                    return usage(format!("--z-max must be >= 1, got {}", self.z_max));
                }
            }
            _ => {}
        }
        match self.subcommand {
            Subcommand::XbarVerify if self.signed => {
                return usage("xbar-verify is only defined for the unsigned series".into())
            }
            Subcommand::KyVerify | Subcommand::Bps if self.q_max < -1 => {
                return usage(format!("--q-max must be >= -1, got {}", self.q_max))
            }
            Subcommand::KyVerify if self.z_window < 1 => {
                return usage(format!("--z-window must be >= 1, got {}", self.z_window))
            }
            Subcommand::Bps => {
                // every class of weight ≤ y_max has genus ≤ B + 1
                let need = negative_shift_bound(self.y_max) + 2;
                if self.y_max > 0 && self.z_max < need {
                    return usage(format!("bps at --y-max {} needs --z-max >= {need}", self.y_max));
                }
            }
            Subcommand::Jinv | Subcommand::Isometry if self.vector.is_none() => {
                return usage(format!("{} requires --vector \"r;a,b;n\"", self.subcommand.name()))
            }
            Subcommand::Jinv | Subcommand::Isometry if self.vector.is_some_and(|v| v.is_zero()) => {
                return usage("J is undefined on the zero vector".into())
            }
            Subcommand::Isometry if self.kind == Some(IsometryKind::Reflect) && self.reflect_by.is_none() => {
                return usage("--kind reflect requires --reflect-by \"r;a,b;n\"".into())
            }
            _ => {}
        }
        let csv_ok = matches!(self.subcommand, Subcommand::Hilb | Subcommand::Pt);
        if self.output_format == OutputFormat::Csv && !csv_ok {
            return usage(format!(
                "CSV output is limited to integer tables (hilb, pt); use --format json for {}",
                self.subcommand.name()
            ));
        }
        Ok(())
    }

    fn echo(&self) -> Value {
        json!({
            "subcommand": self.subcommand.name(),
            "max": self.hilb_max,
            "y_max": self.y_max,
            "z_max": self.z_max,
            "q_max": self.q_max,
            "z_window": self.z_window,
            "signed": self.signed,
            "vector": self.vector.map(|v| v.to_string()),
            "kind": self.kind.and_then(|k| k.to_possible_value()).map(|p| p.get_name().to_string()),
            "reflect_by": self.reflect_by.map(|v| v.to_string()),
            "format": match self.output_format { OutputFormat::Json => "json", OutputFormat::Csv => "csv" },
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(m) => CliError::Usage(m),
            other => CliError::Internal(other),
        }
    }
}

/// The outcome of one run: exit status and the rendered document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub document: String,
}

fn bigint_str(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn rational_str(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

/// Integer-valued coefficient as a bare decimal string.
fn integral_str(x: &Rational) -> Value {
    assert!(x.is_integer(), "integer table holds {x}");
    Value::String(x.to_integer().to_string())
}

struct Computed {
    result: Value,
    mismatches: Vec<Value>,
    csv: Option<Vec<Vec<String>>>,
}

/// Executes a validated configuration and renders its report.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    let computed = match compute(config) {
        Ok(c) => c,
        Err(CliError::Internal(Error::Consistency { message, offending })) => Computed {
            result: json!({ "error": message }),
            mismatches: offending.into_iter().map(Value::String).collect(),
            csv: None,
        },
        Err(e) => return Err(e),
    };
    let exit_code = if computed.mismatches.is_empty() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    let document = match (config.output_format, computed.csv) {
        (OutputFormat::Csv, Some(rows)) => render_csv(&rows)?,
        _ => render_json(&json!({
            "schema": SCHEMA_VERSION,
            "config": config.echo(),
            "result": computed.result,
            "mismatches": computed.mismatches,
        })),
    };
    if let Some(path) = &config.output_path {
        std::fs::write(path, &document)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(RunOutcome { exit_code, document })
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_csv(rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn compute(config: &RunConfig) -> Result<Computed, CliError> {
    match config.subcommand {
        Subcommand::Hilb => Ok(hilb(config)),
        Subcommand::Jinv => jinv(config),
        Subcommand::Pt => pt(config),
        Subcommand::XbarVerify => xbar_verify(config),
        Subcommand::KyVerify => ky_verify(config),
        Subcommand::Bps => bps(config),
        Subcommand::Isometry => isometry(config),
    }
}

fn hilb(config: &RunConfig) -> Computed {
    let table = HilbTable::new(config.hilb_max as usize);
    let values: Vec<Value> = table.values().iter().map(bigint_str).collect();
    let mut rows = vec![vec!["n".to_string(), "euler_characteristic".to_string()]];
    rows.extend(table.values().iter().enumerate().map(|(n, v)| vec![n.to_string(), v.to_string()]));
    Computed {
        result: json!({ "max": config.hilb_max, "values": values }),
        mismatches: vec![],
        csv: Some(rows),
    }
}

fn jinv(config: &RunConfig) -> Result<Computed, CliError> {
    let v = config.vector.expect("validated");
    let j = conjectural_j(v)?;
    let d = v.divisibility()?;
    let square = v.square();
    let terms: Vec<Value> = divisors(d)
        .into_iter()
        .map(|k| {
            let index = square / (2 * k * k) + 1;
            json!({ "k": k, "hilb_index": index, "euler_characteristic": bigint_str(&hilb_euler(index)) })
        })
        .collect();
    Ok(Computed {
        result: json!({
            "vector": v.to_string(),
            "mukai_square": square,
            "divisibility": d,
            "J": rational_str(&j),
            "divisor_terms": terms,
        }),
        mismatches: vec![],
        csv: None,
    })
}

fn pt_params(config: &RunConfig) -> Result<PTParams, CliError> {
    Ok(PTParams::new(config.y_max, config.z_max, config.signed)?)
}

fn coefficient_rows(s: &MultiSeries) -> (Vec<Value>, Vec<Vec<String>>) {
    let mut json_rows = Vec::new();
    let mut csv_rows = vec![vec!["a".into(), "b".into(), "z".into(), "coefficient".into()]];
    for (c, z, v) in s.terms() {
        json_rows.push(json!({ "class": c.to_string(), "z": z, "coefficient": integral_str(v) }));
        csv_rows.push(vec![c.a.to_string(), c.b.to_string(), z.to_string(), v.to_integer().to_string()]);
    }
    (json_rows, csv_rows)
}

fn series_mismatches(lhs: &MultiSeries, rhs: &MultiSeries, lhs_name: &str, rhs_name: &str) -> Vec<Value> {
    lhs.differences(rhs)
        .into_iter()
        .map(|(c, z, a, b)| {
            json!({ "class": c.to_string(), "z": z, lhs_name: rational_str(&a), rhs_name: rational_str(&b) })
        })
        .collect()
}

fn conditional_note(signed: bool) -> Value {
    if signed {
        Value::String(
            "signed series: conditional on the conjectured product formula for reduced stable pair invariants".into(),
        )
    } else {
        Value::Null
    }
}

fn pt(config: &RunConfig) -> Result<Computed, CliError> {
    let params = pt_params(config)?;
    let main = pt_main(&params)?;
    let borcherds = pt_borcherds(&params)?;
    let (coefficients, csv) = coefficient_rows(&main);
    Ok(Computed {
        result: json!({
            "coefficients": coefficients,
            "signed": params.signed,
            "note": conditional_note(params.signed),
        }),
        mismatches: series_mismatches(&main, &borcherds, "exp_form", "product_form"),
        csv: Some(csv),
    })
}

fn xbar_verify(config: &RunConfig) -> Result<Computed, CliError> {
    let params = pt_params(config)?;
    let xbar = pt_xbar(&params)?;
    let squared = pt_main_squared(&params)?;
    let mismatches = series_mismatches(&xbar, &squared, "xbar", "main_squared");
    Ok(Computed {
        result: json!({ "nonzero_coefficients": xbar.len(), "identity_holds": mismatches.is_empty() }),
        mismatches,
        csv: None,
    })
}

fn ky_verify(config: &RunConfig) -> Result<Computed, CliError> {
    let mismatches = ky_identity_check(config.q_max, config.z_window)?;
    let compared = (config.q_max + 2) * (2 * config.z_window - 1);
    Ok(Computed {
        result: json!({ "compared_coefficients": compared, "identity_holds": mismatches.is_empty() }),
        mismatches: mismatches
            .into_iter()
            .map(|m| json!({
                "q": m.q_exp,
                "z": m.z_exp,
                "inverse_delta": rational_str(&m.expected),
                "kernel_times_pairs": rational_str(&m.found),
            }))
            .collect(),
        csv: None,
    })
}

fn bps_rows(t: &BPSTable) -> Vec<Value> {
    t.entries()
        .iter()
        .map(|(&(g, h), v)| json!({ "g": g, "h": h, "value": rational_str(v) }))
        .collect()
}

fn bps(config: &RunConfig) -> Result<Computed, CliError> {
    let delta_table = bps_extract(inv_delta(config.q_max)?.series(), config.q_max)?;
    let params = pt_params(config)?;
    let gv_table = gv_extract(&pt_main_padded(&params)?, params.signed)?;
    let mismatches: Vec<Value> = gv_table
        .compare_on_overlap(&delta_table)
        .into_iter()
        .map(|(g, h, a, b)| json!({ "g": g, "h": h, "pairs": rational_str(&a), "inverse_delta": rational_str(&b) }))
        .collect();
    Ok(Computed {
        result: json!({
            "inverse_delta": bps_rows(&delta_table),
            "pairs": bps_rows(&gv_table),
            "signed": params.signed,
            "note": conditional_note(params.signed),
        }),
        mismatches,
        csv: None,
    })
}

fn isometry(config: &RunConfig) -> Result<Computed, CliError> {
    let v = config.vector.expect("validated");
    let maps: Vec<(String, HodgeIsometry)> = match config.kind {
        Some(IsometryKind::Swap) => vec![("swap".into(), HodgeIsometry::Swap)],
        Some(IsometryKind::SignH2) => vec![("sign-h2".into(), HodgeIsometry::SignH2)],
        Some(IsometryKind::NegateRn) => vec![("negate-rn".into(), HodgeIsometry::NegateRn)],
        Some(IsometryKind::Reflect) => {
            let w = config.reflect_by.expect("validated");
            vec![(format!("reflect:{w}"), HodgeIsometry::Reflection(w))]
        }
        None => HodgeIsometry::generators()
            .into_iter()
            .map(|g| (isometry_label(&g), g))
            .collect(),
    };
    let j = conjectural_j(v)?;
    let d = v.divisibility()?;
    let mut images = Vec::new();
    let mut mismatches = Vec::new();
    for (label, g) in maps {
        let image = g.apply(v).map_err(|e| CliError::Usage(e.to_string()))?;
        let j_image = conjectural_j(image)?;
        let d_image = image.divisibility()?;
        let pairing = mukai_pairing(image, image);
        if j_image != j || d_image != d || pairing != v.square() {
            mismatches.push(json!({ "isometry": label.clone(), "image": image.to_string() }));
        }
        images.push(json!({
            "isometry": label,
            "image": image.to_string(),
            "mukai_square": pairing,
            "divisibility": d_image,
            "J": rational_str(&j_image),
        }));
    }
    Ok(Computed {
        result: json!({
            "vector": v.to_string(),
            "mukai_square": v.square(),
            "divisibility": d,
            "J": rational_str(&j),
            "images": images,
        }),
        mismatches,
        csv: None,
    })
}

fn isometry_label(g: &HodgeIsometry) -> String {
    match g {
        HodgeIsometry::Swap => "swap".into(),
        HodgeIsometry::SignH2 => "sign-h2".into(),
        HodgeIsometry::NegateRn => "negate-rn".into(),
        HodgeIsometry::Reflection(w) => format!("reflect:{w}"),
        HodgeIsometry::Composition(gs) => gs.iter().map(isometry_label).collect::<Vec<_>>().join("|"),
    }
}

fn parse_vector(s: &str) -> Result<MukaiVector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "k3pairs", version, about = "Stable pair and sheaf counting series on local K3 surfaces")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PtArgs {
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    y_max: i64,
    #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
    z_max: i64,
    #[arg(long)]
    signed: bool,
}

#[derive(Debug, ClapSubcommand)]
enum Command {
    /// Euler characteristics of Hilbert schemes of points
    Hilb {
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        max: i64,
    },
    /// Sheaf-counting invariant J(v) of a Mukai vector
    Jinv {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        vector: MukaiVector,
    },
    /// Stable pair series, cross-checked between the two product forms
    Pt(PtArgs),
    /// Check PT(S x P1) = PT(X)^2
    XbarVerify(PtArgs),
    /// Check the Kawai-Yoshioka identity against 1/Delta
    KyVerify {
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        q_max: i64,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        z_window: i64,
    },
    /// BPS numbers from 1/Delta and from the stable pair series
    Bps {
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        q_max: i64,
        #[command(flatten)]
        pt: PtArgs,
    },
    /// Apply Hodge isometries and compare J
    Isometry {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        vector: MukaiVector,
        #[arg(long, value_enum)]
        kind: Option<IsometryKind>,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        reflect_by: Option<MukaiVector>,
    },
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let mut config = match self.command {
            Command::Hilb { max } => RunConfig { hilb_max: max, ..RunConfig::new(Subcommand::Hilb) },
            Command::Jinv { vector } => RunConfig { vector: Some(vector), ..RunConfig::new(Subcommand::Jinv) },
            Command::Pt(a) => with_pt(RunConfig::new(Subcommand::Pt), &a),
            Command::XbarVerify(a) => with_pt(RunConfig::new(Subcommand::XbarVerify), &a),
            Command::KyVerify { q_max, z_window } => {
                RunConfig { q_max, z_window, ..RunConfig::new(Subcommand::KyVerify) }
            }
            Command::Bps { q_max, pt } => RunConfig { q_max, ..with_pt(RunConfig::new(Subcommand::Bps), &pt) },
            Command::Isometry { vector, kind, reflect_by } => RunConfig {
                vector: Some(vector),
                kind,
                reflect_by,
                ..RunConfig::new(Subcommand::Isometry)
            },
        };
        config.output_format = self.format;
        config.output_path = self.out;
        config
    }
}

fn with_pt(config: RunConfig, a: &PtArgs) -> RunConfig {
    RunConfig { y_max: a.y_max, z_max: a.z_max, signed: a.signed, ..config }
}

/// Parses arguments, runs, prints the document, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = cli.into_config();
    match run(&config) {
        Ok(outcome) => {
            if config.output_path.is_none() {
                print!("{}", outcome.document);
            }
            outcome.exit_code
        }
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            EXIT_USAGE
        }
        Err(e @ CliError::Internal(_)) => {
            eprintln!("{e}");
            EXIT_INTERNAL
        }
    }
}
