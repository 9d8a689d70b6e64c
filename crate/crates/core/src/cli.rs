//! Command-line front end.
//!
//! Settings resolve as flags, then the config file, then environment, then
//! built-in defaults. The config file is plain `key = value` text:
//!
//! ```text
//! # godeaux.conf
//! suite = section2, section4
//! format = markdown
//! real_digits = 30
//! verbose = true
//! output_dir = reports
//! ```

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use thiserror::Error;

use crate::divcalc::dsl::Declarations;
use crate::germlab::{self, Germ};
use crate::quintic::SurfaceBundle;
use crate::scenarios::{self, VerificationReport, FIBRES_LAT, SUITES, VARIANT_SUITES};
use crate::text::parse_poly;

/// Directory reports are written to when neither a flag nor the config names one.
pub const OUTPUT_DIR_ENV: &str = "GODEAUX_OUTPUT_DIR";
/// Config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "GODEAUX_CONFIG";
pub const MAX_REAL_DIGITS: u32 = 1000;
pub const DEFAULT_REAL_DIGITS: u32 = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "godeaux",
    version,
    about = "Exact checks for a sigma-invariant quintic and its double plane"
)]
struct Cli {
    /// Key-value config file (overrides $GODEAUX_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify(VerifyArgs),
    /// Print the quintic with exact or interval coefficients.
    DumpQuintic {
        /// Print interval approximations with N fractional digits.
        #[arg(long, value_name = "N", num_args = 0..=1, default_missing_value = "")]
        real: Option<String>,
    },
    /// Run the simple elliptic certificate on a germ.
    CertifyGerm(CertifyArgs),
    /// Evaluate expressions against lattice declarations.
    Lattice {
        #[command(subcommand)]
        action: LatticeCommand,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite to run; repeat or separate with commas. Defaults to all.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Also write the report into this directory.
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Include witnesses in text output.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CertifyArgs {
    /// One of the reference points a1..a4 of the quintic.
    #[arg(long)]
    point: Option<String>,
    /// File holding a polynomial in x, y, z with a singular point at the origin.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum LatticeCommand {
    /// Evaluate EXPR: a pairing `A.B`, a square `A^2`, `genus(A)`, `A == B` or a class.
    Eval {
        expr: String,
        /// Declarations file; the shipped surface lattice when absent.
        #[arg(long, value_name = "FILE")]
        decls: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Markdown,
    Text,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "md",
            OutputFormat::Text => "txt",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub suites: Vec<String>,
    pub output_format: OutputFormat,
    pub real_digits: u32,
    pub verbose: bool,
    pub output_dir: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            output_format: OutputFormat::Text,
            real_digits: DEFAULT_REAL_DIGITS,
            verbose: false,
            output_dir: None,
        }
    }
}

pub fn parse_config_file(src: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", n + 1)))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Result<bool, CliError> {
    match s {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(usage(format!("expected a boolean, got `{s}`"))),
    }
}

fn parse_digits(s: &str) -> Result<u32, CliError> {
    let s = s.strip_prefix("digits=").unwrap_or(s);
    match s.parse::<u32>() {
        Ok(n) if (1..=MAX_REAL_DIGITS).contains(&n) => Ok(n),
        _ => Err(usage(format!(
            "digit count must be an integer in 1..={MAX_REAL_DIGITS}, got `{s}`"
        ))),
    }
}

fn split_suites(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

impl CliConfig {
    /// Layers a parsed config file and the environment over the defaults.
    pub fn resolve(
        file: &BTreeMap<String, String>,
        env_output_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let mut c = CliConfig {
            output_dir: env_output_dir,
            ..CliConfig::default()
        };
        for (k, v) in file {
            match k.as_str() {
                "suite" | "suites" => c.suites = split_suites(v),
                "format" => {
                    c.output_format = OutputFormat::from_str(v, true)
                        .map_err(|_| usage(format!("config: unknown format `{v}`")))?
                }
                "real_digits" => c.real_digits = parse_digits(v)?,
                "verbose" => c.verbose = parse_bool(v)?,
                "output_dir" => c.output_dir = Some(PathBuf::from(v)),
                other => return Err(usage(format!("config: unknown key `{other}`"))),
            }
        }
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(usage("no suite selected"));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) && !VARIANT_SUITES.contains(&s.as_str()) {
                let known: Vec<&str> = SUITES
                    .iter()
                    .chain(VARIANT_SUITES.iter())
                    .copied()
                    .collect();
                return Err(usage(format!(
                    "unknown suite `{s}`; expected one of {}",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(flag: Option<&Path>) -> Result<CliConfig, CliError> {
    let path = flag
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = match path {
        Some(p) => parse_config_file(&read(&p)?)?,
        None => BTreeMap::new(),
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|s| !s.is_empty())
        .map(PathBuf::from);
    CliConfig::resolve(&file, env_dir)
}

/// Runs the command line in `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mut config = load_config(cli.config.as_deref())?;
    let io = |e: std::io::Error| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match cli.command {
        Command::Verify(args) => {
            if !args.suites.is_empty() {
                config.suites = args.suites;
            }
            if let Some(f) = args.format {
                config.output_format = f;
            }
            if args.output_dir.is_some() {
                config.output_dir = args.output_dir;
            }
            config.verbose |= args.verbose;
            config.validate()?;
            let reports = run_suites(&config.suites);
            let rendered = render(&reports, config.output_format, config.verbose);
            out.write_all(rendered.as_bytes()).map_err(io)?;
            if let Some(dir) = &config.output_dir {
                let path = dir.join(format!(
                    "godeaux-report.{}",
                    config.output_format.extension()
                ));
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(&path, &rendered))
                    .map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                let _ = writeln!(err, "report written to {}", path.display());
            }
            Ok(if reports.iter().all(VerificationReport::passed) {
                EXIT_OK
            } else {
                EXIT_FAIL
            })
        }
        Command::DumpQuintic { real } => {
            let digits = match real.as_deref() {
                None => None,
                Some("") => Some(config.real_digits),
                Some(s) => Some(parse_digits(s)?),
            };
            let bundle = SurfaceBundle::standard().map_err(|e| usage(e.to_string()))?;
            out.write_all(dump_quintic(&bundle, digits).as_bytes())
                .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::CertifyGerm(args) => {
            let (germ, label) = if let Some(p) = args.point {
                let i = parse_point(&p)?;
                let g = SurfaceBundle::standard()
                    .map_err(|e| usage(e.to_string()))
                    .and_then(|b| germlab::localize(&b, i).map_err(|e| usage(e.to_string())))?;
                (g, format!("point a{i}"))
            } else {
                let path = args.input.expect("clap enforces one source");
                let src = read(&path)?;
                let poly = parse_poly(src.trim(), &["x", "y", "z"])
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                (
                    Germ::new(poly, germlab::TRUNCATION),
                    path.display().to_string(),
                )
            };
            certify(&germ, &label, out).map_err(io)
        }
        Command::Lattice {
            action: LatticeCommand::Eval { expr, decls },
        } => {
            let declarations = match decls {
                None => Declarations::godeaux(),
                Some(path) => load_declarations(&path, err)?,
            };
            let value = declarations.eval(&expr).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "{value}").map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the suites concurrently, keeping the requested order.
pub fn run_suites(names: &[String]) -> Vec<VerificationReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || scenarios::run_suite(n).expect("suite names are validated")))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

/// One report renders as an object; several as an array.
pub fn render(reports: &[VerificationReport], format: OutputFormat, verbose: bool) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            }
            .expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Markdown => reports
            .iter()
            .map(|r| r.to_markdown())
            .collect::<Vec<_>>()
            .join("\n"),
        OutputFormat::Text => reports.iter().map(|r| r.to_text(verbose)).collect(),
    }
}

fn parse_point(s: &str) -> Result<usize, CliError> {
    match s.strip_prefix('a').and_then(|d| d.parse::<usize>().ok()) {
        Some(i @ 1..=4) => Ok(i),
        _ => Err(usage(format!(
            "--point expects a1, a2, a3 or a4, got `{s}`"
        ))),
    }
}

fn load_declarations(path: &Path, err: &mut dyn Write) -> Result<Declarations, CliError> {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        // bare names of the shipped files resolve to the embedded copies
        Err(e) if e.kind() == std::io::ErrorKind::NotFound && path.components().count() == 1 => {
            let builtin = match path.to_str() {
                Some("godeaux.lat") => scenarios::godeaux_declarations_text(),
                Some("fibres.lat") => FIBRES_LAT,
                _ => {
                    return Err(CliError::Io {
                        path: path.to_path_buf(),
                        source: e,
                    })
                }
            };
            let _ = writeln!(err, "note: using the built-in {}", path.display());
            builtin.to_string()
        }
        Err(source) => {
            return Err(CliError::Io {
                path: path.to_path_buf(),
                source,
            })
        }
    };
    Declarations::parse(&src).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Exact rendering, or one interval per monomial when `digits` is given.
pub fn dump_quintic(bundle: &SurfaceBundle, digits: Option<u32>) -> String {
    let f = &bundle.f5;
    let Some(digits) = digits else {
        return format!("{f}\n");
    };
    let vars = f.vars();
    let mut out = String::new();
    for (exps, c) in f.terms().rev() {
        if c.is_zero() {
            continue;
        }
        let mono: Vec<String> = exps
            .iter()
            .zip(&vars)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, v)| {
                if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        out.push_str(&format!(
            "{}\t{}\n",
            mono.join("*"),
            c.embed_real(digits).to_decimal(digits)
        ));
    }
    out
}

fn certify(germ: &Germ<crate::Nf>, label: &str, out: &mut dyn Write) -> std::io::Result<i32> {
    let vars = germ.vars();
    writeln!(out, "germ at {label}")?;
    match germlab::tilde_e8_certificate(germ) {
        Ok(cert) => {
            for (stage, text) in cert.describe(&vars) {
                writeln!(out, "{stage}: {text}")?;
            }
            Ok(if cert.passes() { EXIT_OK } else { EXIT_FAIL })
        }
        Err(e) => {
            writeln!(out, "{}: {e}", e.stage())?;
            writeln!(out, "verdict: FAIL")?;
            Ok(EXIT_FAIL)
        }
    }
}
