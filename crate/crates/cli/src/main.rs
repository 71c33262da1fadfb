use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use hodgekit::elliptic::{
    reduce_to_fundamental_domain, EllipticError, EllipticRecord, TauPoint, WeierstrassCurve, DEFAULT_PRECISION,
    DEFAULT_TERMS,
};
use hodgekit::hodge::{Face, GeneralHodgeStructure, HodgeDocument, HodgeError};
use hodgekit::linalg::parse_rational;
use hodgekit::nc_hodge::{nc_hodge_check, Purity, SL2Rep, TorusEmbedding};
use hodgekit::polarization::{check_polarization, z2_grading, PolarizationError, PolarizationForm};

/// Hodge structures, polarizations, nc-Hodge checks and elliptic periods.
///
/// Exit codes: 0 success, 1 predicate false, 2 malformed input, 3 numerical
/// failure. Stdout carries a single JSON document; diagnostics go to stderr.
#[derive(Parser)]
#[command(name = "hodge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure document.
    Validate { file: PathBuf },
    /// Convert a structure document to another face.
    Convert {
        #[arg(long, value_parser = parse_face)]
        to: Face,
        file: PathBuf,
    },
    /// Direct sum, tensor product, dual or exterior power.
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Split a structure into its even- and odd-weight parts.
    Grade { file: PathBuf },
    /// Check the Hodge–Riemann relations for a structure and a form.
    Polcheck { structure: PathBuf, form: PathBuf },
    /// Check whether an SL(2, C) representation is an nc-Hodge structure.
    NcCheck {
        #[arg(long)]
        rep: String,
        #[arg(long, default_value = "diagonal")]
        embedding: String,
    },
    /// Periods and invariants of y² = 4x³ − t2·x + t3.
    Ell(EllArgs),
}

#[derive(Subcommand)]
enum Op {
    Sum { a: PathBuf, b: PathBuf },
    Tensor { a: PathBuf, b: PathBuf },
    Dual { a: PathBuf },
    Extpow { k: usize, a: PathBuf },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct EllArgs {
    #[command(subcommand)]
    reduce: Option<EllCommand>,
    /// Rational ("a/b") or decimal.
    #[arg(long, required = true, allow_hyphen_values = true)]
    t2: Option<String>,
    #[arg(long, required = true, allow_hyphen_values = true)]
    t3: Option<String>,
    /// Target relative precision.
    #[arg(long, env = "HODGEKIT_PREC")]
    prec: Option<String>,
    /// Number of q-series terms.
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    terms: usize,
}

#[derive(Subcommand)]
enum EllCommand {
    /// Reduce τ to the standard fundamental domain.
    #[command(allow_negative_numbers = true)]
    Reduce {
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], required = true)]
        tau: Vec<f64>,
    },
}

fn parse_face(s: &str) -> Result<Face, String> {
    s.parse()
}

/// A finished command: what goes to stdout, stderr, and the exit code.
struct Outcome {
    code: u8,
    stdout: Value,
    stderr: String,
}

impl Outcome {
    fn new(code: u8, stdout: impl Serialize, stderr: impl Into<String>) -> Self {
        Self {
            code,
            stdout: serde_json::to_value(stdout).expect("outputs serialize"),
            stderr: stderr.into(),
        }
    }

    fn verdict(ok: bool, stdout: impl Serialize, stderr: impl Into<String>) -> Self {
        Self::new(if ok { 0 } else { 1 }, stdout, stderr)
    }

    fn malformed(message: impl Into<String>, pointer: Option<&str>) -> Self {
        let message = message.into();
        let mut body = json!({"error": "malformed_input", "message": message});
        if let Some(p) = pointer {
            body["pointer"] = json!(p);
        }
        Self::new(2, body, format!("error: {message}"))
    }
}

type Step<T> = Result<T, Outcome>;

fn read(path: &Path) -> Step<String> {
    fs::read_to_string(path).map_err(|e| Outcome::malformed(format!("cannot read {}: {e}", path.display()), None))
}

fn load(path: &Path) -> Step<HodgeDocument> {
    let text = read(path)?;
    HodgeDocument::parse(&text).map_err(|e| {
        let message = format!("{}: {}", path.display(), e);
        Outcome::malformed(message, Some(&e.pointer))
    })
}

fn hodge_failure(e: HodgeError) -> Outcome {
    let body = match &e {
        HodgeError::Invalid(report) => json!({"error": "invalid_structure", "report": report}),
        HodgeError::NotOpposed { p } => json!({"error": "not_opposed", "p": p}),
        HodgeError::WeightMismatch(a, b) => json!({"error": "weight_mismatch", "weights": [a, b]}),
        HodgeError::NotPure => json!({"error": "not_pure"}),
        HodgeError::Linalg(_) => return Outcome::malformed(e.to_string(), None),
    };
    Outcome::new(1, body, format!("error: {e}"))
}

fn general(path: &Path) -> Step<GeneralHodgeStructure> {
    load(path)?.to_general().map_err(hodge_failure)
}

fn ok_doc(doc: &HodgeDocument) -> Outcome {
    Outcome::new(0, doc, format!("{} of rank {}", doc.face(), doc.rank()))
}

fn run(cli: Cli) -> Step<Outcome> {
    match cli.command {
        Command::Validate { file } => {
            let report = load(&file)?.validate();
            let prose = report.to_string();
            Ok(Outcome::verdict(report.valid, &report, prose))
        }
        Command::Convert { to, file } => {
            let doc = load(&file)?;
            let out = doc.convert(to).map_err(hodge_failure)?;
            Ok(ok_doc(&out))
        }
        Command::Op { op } => {
            let result = match op {
                Op::Sum { a, b } => general(&a)?.direct_sum(&general(&b)?),
                Op::Tensor { a, b } => general(&a)?.tensor(&general(&b)?),
                Op::Dual { a } => general(&a)?.dual(),
                Op::Extpow { k, a } => general(&a)?.exterior_power(k),
            };
            let g = result.map_err(hodge_failure)?;
            Ok(ok_doc(&HodgeDocument::from_general(&g)))
        }
        Command::Grade { file } => {
            let (even, odd) = z2_grading(&general(&file)?);
            let body = json!({
                "even": HodgeDocument::from_general(&even),
                "odd": HodgeDocument::from_general(&odd),
            });
            Ok(Outcome::new(0, body, format!("even rank {}, odd rank {}", even.rank(), odd.rank())))
        }
        Command::Polcheck { structure, form } => {
            let doc = load(&structure)?;
            let form: PolarizationForm = serde_json::from_str(&read(&form)?)
                .map_err(|e| Outcome::malformed(format!("{}: {e}", form.display()), None))?;
            let d = match doc.convert(Face::Decomposition).map_err(hodge_failure)? {
                HodgeDocument::Decomposition(d) => d,
                _ => return Err(hodge_failure(HodgeError::NotPure)),
            };
            let report = check_polarization(&d, &form).map_err(|e| match e {
                PolarizationError::Hodge(h) => hodge_failure(h),
                other => Outcome::malformed(other.to_string(), None),
            })?;
            let mut prose = format!(
                "orthogonality {}, positivity {}",
                if report.orthogonality_ok { "holds" } else { "fails" },
                if report.positivity_ok { "holds" } else { "fails" },
            );
            for w in &report.warnings {
                prose.push_str(&format!("\nwarning: {w}"));
            }
            Ok(Outcome::verdict(report.overall, &report, prose))
        }
        Command::NcCheck { rep, embedding } => {
            let embedding: TorusEmbedding = embedding.parse().map_err(|e: String| Outcome::malformed(e, None))?;
            let rep: SL2Rep = rep.parse().map_err(|e| Outcome::malformed(format!("{e}"), None))?;
            let report = nc_hodge_check(&rep, embedding);
            let prose = match &report.purity {
                Purity::Pure { weight } => format!("nc-Hodge structure of weight {weight}"),
                Purity::Impure { degrees, .. } => {
                    format!("not nc-Hodge: total degrees {} and {} both occur", degrees[0], degrees[1])
                }
                Purity::Empty => "not nc-Hodge: zero representation".to_string(),
            };
            Ok(Outcome::verdict(report.is_nc_hodge, &report, prose))
        }
        Command::Ell(args) => ell(args),
    }
}

fn numerical_failure(e: EllipticError) -> Outcome {
    match e {
        EllipticError::NotInUpperHalfPlane { .. } | EllipticError::InvalidPrecision(_) => {
            Outcome::malformed(e.to_string(), None)
        }
        _ => Outcome::new(3, json!({"error": "numerical_failure", "message": e.to_string()}), format!("error: {e}")),
    }
}

fn ell(args: EllArgs) -> Step<Outcome> {
    if let Some(EllCommand::Reduce { tau }) = args.reduce {
        let t = TauPoint::new(Complex64::new(tau[0], tau[1])).map_err(numerical_failure)?;
        let r = reduce_to_fundamental_domain(&t).map_err(numerical_failure)?;
        let body = json!({
            "tau": {"re": format!("{:?}", tau[0]), "im": format!("{:?}", tau[1])},
            "tau_reduced": {"re": format!("{:?}", r.tau.re), "im": format!("{:?}", r.tau.im)},
            "reducing_word": r.reducing_word,
        });
        return Ok(Outcome::new(0, body, format!("reduced by {}", r.reducing_word)));
    }
    let coefficient = |name: &str, v: Option<String>| {
        let v = v.ok_or_else(|| Outcome::malformed(format!("--{name} is required"), None))?;
        parse_rational(&v).map_err(|e| Outcome::malformed(format!("--{name}: {e}"), None))
    };
    let t2 = coefficient("t2", args.t2)?;
    let t3 = coefficient("t3", args.t3)?;
    let precision = match args.prec {
        None => DEFAULT_PRECISION,
        Some(p) => p
            .parse::<f64>()
            .map_err(|e| Outcome::malformed(format!("precision {p:?}: {e}"), None))?,
    };
    let curve = WeierstrassCurve::from_rationals(t2, t3);
    let record = EllipticRecord::compute(&curve, precision, args.terms).map_err(numerical_failure)?;
    let prose = format!(
        "tau = {} + {}i, j = {}",
        record.tau_reduced.re.0, record.tau_reduced.im.0, record.j_algebraic.0
    );
    Ok(Outcome::new(0, &record, prose))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli).unwrap_or_else(|o| o);
    let text = serde_json::to_string_pretty(&outcome.stdout).expect("JSON values print");
    // A closed pipe is not worth a panic.
    let _ = writeln!(io::stdout().lock(), "{text}");
    if !outcome.stderr.is_empty() {
        let _ = writeln!(io::stderr().lock(), "{}", outcome.stderr);
    }
    ExitCode::from(outcome.code)
}
