//! Command-line driver. [`run`] is the whole program minus process plumbing.
//!
//! Exit codes: 0 success, 1 verification or internal failure, 2 parse or
//! usage error, 3 precondition violation.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use specball_core::checks::{
    commutant_sweep, group_law_sweep, spectrum_sweep, COMMUTANT_TOL, GROUP_LAW_TOL,
};
use specball_core::decompose::{decompose_with_cap, DecomposeError};
use specball_core::flow::{convergence_study, probe_set, FlowError, PROBE_RADIUS, REFERENCE_STEPS_PER_UNIT};
use specball_core::identities::{verify_bracket_identities, verify_conjugation_expansions};
use specball_core::specball::{fiber_sample, in_ball, spectral_radius, SpecballError, SPECTRUM_TOL};

use crate::report::{fenced, to_json, CertificateJson, EvalJson, FlowJson, SampleJson, SweepJson, VerifyJson};
use crate::text::{
    parse_certificate, parse_certificate_for, parse_complex, parse_field, parse_matrix, parse_word,
    print_certificate, print_matrix, CertificateError, ParseError, WordError,
};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DEGREE_CAP: i32 = 12;

#[derive(Debug, Parser)]
#[command(name = "specball", version, about = "Spectral ball automorphisms: identities, decompositions and flows")]
pub struct Cli {
    /// Seed for every random choice (probes, samples, sweeps).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance override; the default depends on the subcommand.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Largest polynomial degree allowed during decomposition.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: i32,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable text followed by a fenced json block.
    Text,
    /// The json block alone.
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity suite, the conjugation expansions and the numeric sweeps.
    Verify(VerifyArgs),
    /// Decompose an orthogonal field into a certificate.
    Decompose {
        /// Field text, a path to it, or `-` for stdin.
        input: String,
    },
    /// Convergence study of the split flow of a certificate.
    Flow(FlowArgs),
    /// Seeded matrices with the given eigenvalues.
    Sample {
        #[arg(allow_hyphen_values = true)]
        l1: String,
        #[arg(allow_hyphen_values = true)]
        l2: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Apply a composition word to a matrix.
    Eval {
        /// Word text, a path to it, or `-` for stdin.
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Matrix `[[a, b], [c, d]]` or a path to it.
        matrix: String,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Degree bound of the monomial payload bases.
    #[arg(long, default_value_t = 4)]
    pub max_degree: i32,
    /// Samples per group-law family.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Samples for the spectrum and commutant sweeps.
    #[arg(long, default_value_t = 1000)]
    pub sweep_samples: usize,
    /// Maps per random word in the spectrum sweeps.
    #[arg(long, default_value_t = 20)]
    pub word_len: usize,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Certificate text, a path to it, or `-` for stdin.
    pub certificate: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256, 1024])]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub probes: usize,
    /// RK4 steps for the reference flow; defaults to 4096 per unit time.
    #[arg(long)]
    pub reference_steps: Option<usize>,
    /// Field the certificate must refer to.
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Debug)]
enum Failure {
    /// Exit 1.
    Internal(String),
    /// Exit 2.
    Parse(String),
    /// Exit 3.
    Precondition(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Internal(m) | Failure::Parse(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(format!("parse error: {e}"))
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        Failure::Parse(format!("parse error: {e}"))
    }
}

impl From<CertificateError> for Failure {
    fn from(e: CertificateError) -> Self {
        match e {
            CertificateError::Parse(p) => p.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<DecomposeError> for Failure {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::InternalResidual { .. } => Failure::Internal(e.to_string()),
            DecomposeError::ConstraintViolation(_) | DecomposeError::DegreeCap { .. } => {
                Failure::Precondition(e.to_string())
            }
        }
    }
}

impl From<SpecballError> for Failure {
    fn from(e: SpecballError) -> Self {
        Failure::Precondition(e.to_string())
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        Failure::Precondition(e.to_string())
    }
}

/// Inline text, a file path, or `-` for stdin.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Internal(format!("stdin: {e}")))?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if !arg.is_empty() && path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Internal(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// Body text and whether the run counts as a success.
struct Output {
    text: String,
    json: String,
    ok: bool,
}

impl Output {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Machine => format!("{}\n", self.json),
        }
    }
}

fn with_block<T: serde::Serialize>(mut text: String, value: &T, ok: bool) -> Output {
    text.push('\n');
    text.push_str(&fenced(value));
    Output { text, json: to_json(value), ok }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Output, Failure> {
    let identities = verify_bracket_identities(args.max_degree);
    let conjugation = verify_conjugation_expansions();
    let tol = cli.tol.unwrap_or(GROUP_LAW_TOL);
    let mut sweeps: Vec<SweepJson> =
        group_law_sweep(cli.seed, args.samples).iter().map(|r| SweepJson::group_law(r, tol)).collect();
    for (k, mobius) in [false, true].into_iter().enumerate() {
        let r = spectrum_sweep(cli.seed.wrapping_add(1 + k as u64), args.sweep_samples, args.word_len, mobius);
        sweeps.push(SweepJson::spectrum(&r, tol));
    }
    let c = commutant_sweep(cli.seed.wrapping_add(3), args.sweep_samples);
    sweeps.push(SweepJson::commutant(&c, cli.tol.unwrap_or(COMMUTANT_TOL)));

    let report = VerifyJson::new(cli.seed, args.max_degree, &identities, &conjugation, sweeps);
    let mut text = String::new();
    let _ = writeln!(text, "bracket identities (payload degree <= {})", args.max_degree);
    let _ = write!(text, "{identities}");
    let _ = writeln!(text, "\nconjugation expansions (det p = 1)");
    let _ = write!(text, "{conjugation}");
    let _ = writeln!(text, "\nnumeric sweeps (seed {})", cli.seed);
    for s in &report.sweeps {
        let _ = writeln!(
            text,
            "{} {:<34} samples={:<5} max error {:.3e} (tol {:.0e}){}",
            if s.passed { "ok  " } else { "FAIL" },
            s.name,
            s.samples,
            s.max_error,
            s.tol,
            s.failures.map(|f| format!(", failures {f}")).unwrap_or_default()
        );
    }
    let undocumented = identities.undocumented().chain(conjugation.undocumented()).count();
    let _ = writeln!(text, "\nundocumented mismatches: {undocumented}");
    let _ = writeln!(text, "result: {}", if report.passed { "PASS" } else { "FAIL" });
    let ok = report.passed;
    Ok(with_block(text, &report, ok))
}

fn decompose(cli: &Cli, input: &str) -> Result<Output, Failure> {
    let field = parse_field(&read_input(input)?)?;
    let d = decompose_with_cap(&field, cli.degree_cap)?;
    if !d.certificate.verify() {
        return Err(Failure::Internal("certificate does not reconstruct the input".into()));
    }
    let text = print_certificate(&d.certificate);
    // the text form stays a plain certificate file so it can be fed back to `flow`
    Ok(Output { text, json: to_json(&CertificateJson::from(&d)), ok: true })
}

fn flow(cli: &Cli, args: &FlowArgs) -> Result<Output, Failure> {
    let text = read_input(&args.certificate)?;
    let cert = match &args.input {
        Some(f) => parse_certificate_for(&text, &parse_field(&read_input(f)?)?)?,
        None => parse_certificate(&text)?,
    };
    if args.ns.is_empty() || args.ns.contains(&0) {
        return Err(Failure::Parse("--ns needs positive step counts".into()));
    }
    if !args.t.is_finite() {
        return Err(Failure::Parse("--t must be finite".into()));
    }
    let steps = args
        .reference_steps
        .unwrap_or_else(|| ((args.t.abs() * REFERENCE_STEPS_PER_UNIT as f64).ceil() as usize).max(1));
    let probes = probe_set(cli.seed, args.probes, PROBE_RADIUS);
    let report = convergence_study(&cert.terms, args.t, &args.ns, &probes, cli.seed, steps)?;
    let tol = cli.tol.unwrap_or(SPECTRUM_TOL);
    let json = FlowJson::new(&report, steps, tol);
    let mut body = format!("certificate input={} terms={}\n{report}\n", cert.input_hash, cert.terms.len());
    let _ = writeln!(body, "max drift {:.3e} (tol {:.0e}): {}", json.max_drift, tol, if json.passed { "ok" } else { "FAIL" });
    let ok = json.passed;
    Ok(with_block(body, &json, ok))
}

fn sample(cli: &Cli, l1: &str, l2: &str, count: usize) -> Result<Output, Failure> {
    let (a, b) = (parse_complex(l1)?, parse_complex(l2)?);
    let ms = fiber_sample(a, b, count, cli.seed)?;
    let mut text = String::new();
    for m in &ms {
        let _ = writeln!(text, "{}", print_matrix(m));
    }
    Ok(with_block(text, &SampleJson::new(a, b, cli.seed, &ms), true))
}

fn eval(word: &str, matrix: &str) -> Result<Output, Failure> {
    let w = parse_word(&read_input(word)?)?;
    let m = parse_matrix(read_input(matrix)?.trim())?;
    if !m.is_finite() || !in_ball(&m) {
        return Err(Failure::Precondition(format!(
            "matrix is outside the spectral ball (spectral radius {})",
            spectral_radius(&m)
        )));
    }
    let out = w.apply(&m)?;
    let json = EvalJson {
        input: print_matrix(&m),
        output: print_matrix(&out),
        word_len: w.len(),
        spectral_radius: spectral_radius(&out),
    };
    Ok(with_block(format!("{}\n", json.output), &json, true))
}

fn emit(cli: &Cli, body: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Failure::Internal(format!("stdout: {e}"))),
    }
}

/// Run with `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                2
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => verify(&cli, a),
        Command::Decompose { input } => decompose(&cli, input),
        Command::Flow(a) => flow(&cli, a),
        Command::Sample { l1, l2, count } => sample(&cli, l1, l2, *count),
        Command::Eval { word, matrix } => eval(word, matrix),
    };
    let result = result.and_then(|o| {
        emit(&cli, &o.render(cli.format), stdout)?;
        Ok(o.ok)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}
