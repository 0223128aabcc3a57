//! Command-line front end for `symfix`. [`run_command`] does all the work and
//! returns the exit code with the text destined for stdout and stderr, so the
//! binary is a thin wrapper and tests can call it in-process.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use symfix::characters::character_table;
use symfix::embeddings::verify::ValidationReportWire;
use symfix::embeddings::{
    construct_corollary_embedding, construct_mp_embedding, embed_sum_into_matrix, verify_certificate, CertificateWire,
    EmbeddingCertificate, LemmaOptions, Mode, DEFAULT_GAP_TOLERANCE, DEFAULT_TOLERANCE, MAX_RETRIES,
};
use symfix::linalg::parse_rational;
use symfix::partitions::represent_as_ap_bq;
use symfix::schur_weyl::{check_lemma, isotropy_type, multiplicities, sweep_lemma};
use symfix::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED_CHECK: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "symfix",
    version,
    about = "Fixed points of S_n acting on tensor powers of matrix algebras"
)]
pub struct Cli {
    /// Emit JSON (the default for everything except chartable).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (chartable and sweep only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character table of S_n.
    Chartable { n: usize },
    /// Multiplicities of the irreducibles in (C^m)^{⊗n}.
    Decompose { m: usize, n: usize },
    /// Check p | μ(λ) for all λ ⊢ n, with the hypotheses p^k | m, p^k ∤ n!.
    CheckLemma { m: usize, n: usize, p: u64, k: u32 },
    /// check-lemma over a box of parameters.
    Sweep(SweepConfig),
    /// Unital embedding of M_p into (M_m^{⊗n})^{S_n}.
    EmbedMp {
        m: usize,
        n: usize,
        p: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_GAP_TOLERANCE)]
        gap_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "numeric", value_parser = ["exact", "numeric"])]
        mode: String,
    },
    /// Unital embedding of M_p ⊕ M_q into M_k.
    EmbedSum { p: u64, q: u64, k: u64 },
    /// The embedding of M_p ⊕ M_q into ((M_p ⊕ M_q)^{⊗n})^{S_n}.
    Cor34 { p: usize, q: usize, n: usize },
    /// Isotropy group and fiber shape at a point of the simplex.
    Isotropy {
        /// Coordinates as rationals, e.g. 0 1/2 1/2 1.
        #[arg(required = true, allow_hyphen_values = true)]
        t: Vec<String>,
    },
    /// Recompute the residuals of a certificate (a file path, or - for stdin).
    Verify { certificate: String },
}

#[derive(Debug, Clone, clap::Args)]
pub struct SweepConfig {
    #[arg(long, default_value_t = 12)]
    pub max_m: usize,
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    pub max_k: u32,
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: String) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// JSON output of `cor34`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CorollaryOutput {
    pub checks: symfix::embeddings::corollary::CorollaryChecks,
    pub valid: bool,
    pub verification: ValidationReportWire,
    pub certificate: CertificateWire,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::SplittingDegenerate { .. } => EXIT_FAILED_CHECK,
        _ => EXIT_USAGE,
    }
}

fn read_certificate(source: &str) -> Result<EmbeddingCertificate, String> {
    let text = if source == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("reading stdin: {e}"))?
    } else {
        std::fs::read_to_string(source).map_err(|e| format!("reading {source}: {e}"))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("parsing {source}: {e}"))?;
    let inner = value.get("certificate").cloned().unwrap_or(value);
    let wire: CertificateWire = serde_json::from_value(inner).map_err(|e| format!("parsing {source}: {e}"))?;
    EmbeddingCertificate::try_from(wire).map_err(|e| e.to_string())
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let mut outcome = execute(&cli);
    if let (Some(path), EXIT_OK | EXIT_FAILED_CHECK) = (&cli.output, outcome.code) {
        if !outcome.stdout.is_empty() {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                return Outcome::usage(format!("error: writing {}: {e}\n", path.display()));
            }
            outcome.stdout.clear();
        }
    }
    outcome
}

fn execute(cli: &Cli) -> Outcome {
    let tabular = matches!(cli.command, Command::Chartable { .. } | Command::Sweep(_));
    let format = if cli.csv {
        if !tabular {
            return Outcome::usage("error: --csv is only available for chartable and sweep\n".into());
        }
        Format::Csv
    } else if cli.json || !matches!(cli.command, Command::Chartable { .. }) {
        Format::Json
    } else {
        Format::Text
    };
    match dispatch(&cli.command, format) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: error_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(command: &Command, format: Format) -> symfix::Result<Outcome> {
    Ok(match command {
        Command::Chartable { n } => {
            let table = character_table(*n)?;
            Outcome::ok(match format {
                Format::Text => table.to_text(),
                Format::Csv => table.to_csv(),
                Format::Json => json(&table),
            })
        }
        Command::Decompose { m, n } => Outcome::ok(json(&multiplicities(*m, *n)?)),
        Command::CheckLemma { m, n, p, k } => {
            let verdict = check_lemma(*m, *n, *p, *k)?;
            let code = if verdict.is_violation() {
                EXIT_FAILED_CHECK
            } else {
                EXIT_OK
            };
            Outcome {
                code,
                stdout: json(&verdict),
                stderr: String::new(),
            }
        }
        Command::Sweep(cfg) => {
            let report = sweep_lemma(cfg.max_m, cfg.max_n, &cfg.primes, cfg.max_k, cfg.parallelism)?;
            let code = if report.has_violation() {
                EXIT_FAILED_CHECK
            } else {
                EXIT_OK
            };
            let stdout = if format == Format::Csv {
                report.to_csv()
            } else {
                json(&report)
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Command::EmbedMp {
            m,
            n,
            p,
            tol,
            gap_tol,
            seed,
            mode,
        } => {
            let options = LemmaOptions {
                mode: mode.parse::<Mode>()?,
                seed: *seed,
                tolerance: *tol,
                gap_tolerance: *gap_tol,
                max_retries: MAX_RETRIES,
            };
            certificate_outcome(&construct_mp_embedding(*m, *n, *p, &options)?)
        }
        Command::EmbedSum { p, q, k } => {
            let witness = represent_as_ap_bq(*p, *q, *k)?;
            certificate_outcome(&embed_sum_into_matrix(*p, *q, *k, &witness)?)
        }
        Command::Cor34 { p, q, n } => {
            let cor = construct_corollary_embedding(*p, *q, *n)?;
            let report = verify_certificate(&cor.certificate);
            let valid = cor.is_valid() && report.valid;
            Outcome {
                code: if valid { EXIT_OK } else { EXIT_FAILED_CHECK },
                stdout: json(&CorollaryOutput {
                    checks: cor.checks.clone(),
                    valid,
                    verification: ValidationReportWire::from(&report),
                    certificate: CertificateWire::from(&cor.certificate),
                }),
                stderr: String::new(),
            }
        }
        Command::Isotropy { t } => {
            let values = t
                .iter()
                .flat_map(|s| s.split(','))
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_rational(s.trim()))
                .collect::<symfix::Result<Vec<_>>>()?;
            Outcome::ok(json(&isotropy_type(&values)?))
        }
        Command::Verify { certificate } => match read_certificate(certificate) {
            Ok(cert) => {
                let report = verify_certificate(&cert);
                Outcome {
                    code: if report.valid { EXIT_OK } else { EXIT_FAILED_CHECK },
                    stdout: json(&ValidationReportWire::from(&report)),
                    stderr: String::new(),
                }
            }
            Err(message) => Outcome::usage(format!("error: {message}\n")),
        },
    })
}

fn certificate_outcome(cert: &EmbeddingCertificate) -> Outcome {
    let report = verify_certificate(cert);
    let valid = cert.is_valid() && report.valid;
    Outcome {
        code: if valid { EXIT_OK } else { EXIT_FAILED_CHECK },
        stdout: json(&CertificateWire::from(cert)),
        stderr: if valid {
            String::new()
        } else {
            format!("certificate failed verification: {}\n", report.failures.join("; "))
        },
    }
}
