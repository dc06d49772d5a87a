//! `frenet4`: Frenet apparatus, curve classification and derived curves
//! for parametric curves in E4.
//!
//! Exit codes: 0 success or PASS, 1 usage or spec error, 2 degeneracy or
//! singularity, 3 verification FAIL, 4 inconclusive.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frenet4_core::pipeline::{self, default_involute_c};
use frenet4_core::report::to_json;
use frenet4_core::{classify, verify, CurveSpecFile, Error, Status, DEFAULT_ORDER};
use log::{debug, info};
use serde_json::{json, Map, Value};

const SCHEMAS: [(&str, &str); 7] = [
    ("spec", include_str!("../schemas/curve_spec.schema.json")),
    ("analyze", include_str!("../schemas/analysis.schema.json")),
    ("classify", include_str!("../schemas/classification.schema.json")),
    ("bertrand", include_str!("../schemas/bertrand.schema.json")),
    ("involute", include_str!("../schemas/involute.schema.json")),
    ("verify", include_str!("../schemas/theorems.schema.json")),
    ("error", include_str!("../schemas/error.schema.json")),
];

#[derive(Parser, Debug)]
#[command(name = "frenet4", version, about = "Frenet apparatus and special curves in E4")]
#[command(subcommand_required = false, arg_required_else_help = true)]
struct Cli {
    /// Print a JSON schema (spec, analyze, classify, bertrand, involute,
    /// verify, error) or all of them, then exit.
    #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "all")]
    schema: Option<String>,

    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    error_json: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-sample frame, curvatures and harmonic curvatures.
    Analyze(Common),
    /// Helix, ccr, generalized-helix, slant and sphere checks.
    Classify(Common),
    /// Bertrand mate ξ = δ + λN of a helix, cross-checked.
    Bertrand {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = frenet4_core::theorems::DEFAULT_LAMBDA, allow_hyphen_values = true)]
        lambda: f64,
        /// Write the mate as a curve spec.
        #[arg(long, value_name = "PATH")]
        emit_spec: Option<PathBuf>,
    },
    /// Involute ξ = δ + (c − s)T of a helix, cross-checked.
    Involute {
        #[command(flatten)]
        common: Common,
        /// Defaults to twice the arc length of the domain.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        /// Write the involute as a curve spec.
        #[arg(long, value_name = "PATH")]
        emit_spec: Option<PathBuf>,
    },
    /// Theorem suite for a helix: PASS, FAIL or INCONCLUSIVE per item.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Curve spec (JSON).
    spec: PathBuf,
    /// Override the sample count of the curve file.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_degeneracy() => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        let e = match self {
            Failure::Usage(_) => return "usage",
            Failure::Io(..) => return "io",
            Failure::Core(e) => e.root(),
        };
        match e {
            Error::Parse { .. } => "parse",
            Error::Eval(_) => "eval",
            Error::Jet(_) => "jet",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::NotRegular { .. } => "not_regular",
            Error::DegenerateCurvature { .. } => "degenerate_curvature",
            Error::VanishingDenominator { .. } => "vanishing_denominator",
            Error::NotAHelix(_) => "not_a_helix",
            Error::SingularMate { .. } => "singular_mate",
            Error::SingularPoint { .. } => "singular_point",
            Error::AtSample { .. } => unreachable!("root strips sample context"),
        }
    }

    fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind()));
        obj.insert("message".into(), json!(self.to_string()));
        obj.insert("exit_code".into(), json!(self.exit_code()));
        if let Failure::Core(e) = self {
            if let Error::AtSample { index, t, .. } = e {
                obj.insert("sample".into(), json!(index));
                obj.insert("t".into(), json!(t));
            }
            match e.root() {
                Error::SingularPoint { s } => {
                    obj.insert("s".into(), json!(s));
                }
                Error::Parse { component, source } => {
                    obj.insert("component".into(), json!(component));
                    obj.insert("offset".into(), json!(source.offset()));
                }
                _ => {}
            }
        }
        json!({ "error": obj })
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRENET4_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let error_json = cli.error_json;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if error_json {
                eprint!("{}", to_json(&f.to_json()));
            } else {
                eprintln!("error: {f}");
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(name) = &cli.schema {
        emit(None, &schema(name)?)?;
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(Failure::Usage("no command given; see --help".into()));
    };
    match command {
        Command::Analyze(c) => {
            let spec = load(&c)?;
            let report = pipeline::analyze(&spec)?;
            let text = match c.format.unwrap_or(Format::Csv) {
                Format::Csv => report.to_csv(),
                Format::Json => to_json(&report),
            };
            emit(c.out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Classify(c) => {
            json_only(&c, "classify")?;
            let spec = load(&c)?;
            let curve = spec.curve()?;
            let sampled = pipeline::sample_spec(&spec, &curve)?;
            let report = classify(&sampled.samples, &spec.tolerances)?;
            emit(c.out.as_deref(), &to_json(&report))?;
            Ok(0)
        }
        Command::Bertrand {
            common: c,
            lambda,
            emit_spec,
        } => {
            let spec = load(&c)?;
            let run = pipeline::bertrand(&spec, lambda)?;
            let text = match c.format.unwrap_or(Format::Json) {
                Format::Csv => run.report.to_csv(),
                Format::Json => to_json(&run.report),
            };
            emit(c.out.as_deref(), &text)?;
            write_spec(emit_spec.as_deref(), run.report.curve.as_ref())?;
            Ok(0)
        }
        Command::Involute {
            common: c,
            c: offset,
            emit_spec,
        } => {
            let spec = load(&c)?;
            let offset = match offset {
                Some(x) => x,
                None => default_involute_c(&spec)?,
            };
            let run = pipeline::involute(&spec, offset)?;
            let text = match c.format.unwrap_or(Format::Json) {
                Format::Csv => run.report.to_csv(),
                Format::Json => to_json(&run.report),
            };
            emit(c.out.as_deref(), &text)?;
            write_spec(emit_spec.as_deref(), run.report.curve.as_ref())?;
            Ok(0)
        }
        Command::Verify {
            common: c,
            lambda,
            c: offset,
        } => {
            json_only(&c, "verify")?;
            let spec = load(&c)?;
            let report = verify(&spec, lambda, offset)?;
            emit(c.out.as_deref(), &to_json(&report))?;
            info!("theorem suite: {}", report.status);
            Ok(match report.status {
                Status::Pass => 0,
                Status::Fail => 3,
                Status::Inconclusive => 4,
            })
        }
    }
}

fn schema(name: &str) -> Result<String, Failure> {
    if name == "all" {
        let mut all = Map::new();
        for (n, text) in SCHEMAS {
            let v: Value = serde_json::from_str(text).expect("bundled schemas are valid JSON");
            all.insert(n.into(), v);
        }
        return Ok(to_json(&Value::Object(all)));
    }
    SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| {
            let names: Vec<&str> = SCHEMAS.iter().map(|(n, _)| *n).collect();
            Failure::Usage(format!("unknown schema {name:?}; expected one of {}", names.join(", ")))
        })
}

fn json_only(c: &Common, command: &str) -> Result<(), Failure> {
    if c.format == Some(Format::Csv) {
        return Err(Failure::Usage(format!("{command} writes JSON only")));
    }
    Ok(())
}

fn load(c: &Common) -> Result<CurveSpecFile, Failure> {
    let text = fs::read_to_string(&c.spec).map_err(|e| Failure::Io(c.spec.clone(), e))?;
    let mut spec = CurveSpecFile::from_json(&text)?;
    if let Some(n) = c.samples {
        spec.samples = n;
        spec.validate()?;
    }
    debug!(
        "spec {}: {} samples on [{}, {}], jet order {} (default {DEFAULT_ORDER})",
        c.spec.display(),
        spec.samples,
        spec.domain.t_min,
        spec.domain.t_max,
        spec.jet_order
    );
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                // A closed pipe (e.g. `| head`) is not an error for us.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io("<stdout>".into(), e)),
                _ => Ok(()),
            }
        }
    }
}

fn write_spec(path: Option<&Path>, curve: Option<&CurveSpecFile>) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let Some(curve) = curve else {
        return Err(Failure::Usage(
            "the constructed curve has no closed-form spec (see warnings in the report)".into(),
        ));
    };
    fs::write(path, curve.to_json()).map_err(|e| Failure::Io(path.to_path_buf(), e))
}
