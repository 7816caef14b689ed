//! Machine-readable report blocks. Each report is a serde struct; the text
//! output embeds it as a fenced `json` section.

use serde::Serialize;
use specball_core::checks::{CommutantSweep, GroupLawResult, SpectrumSweep};
use specball_core::decompose::{Certificate, Decomposition};
use specball_core::flow::ConvergenceReport;
use specball_core::identities::{Check, Expected, Report, Status};
use specball_core::specball::Matrix2;

use crate::text::{format_complex, print_matrix};

/// Pretty JSON wrapped in a fenced block.
pub fn fenced<T: Serialize>(value: &T) -> String {
    format!("```json\n{}\n```\n", to_json(value))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub formula: String,
    pub status: &'static str,
    pub expected: &'static str,
    pub documented: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

impl From<&Check> for CheckJson {
    fn from(c: &Check) -> Self {
        CheckJson {
            name: c.name.to_string(),
            formula: c.formula.to_string(),
            status: match c.status {
                Status::Exact => "exact",
                Status::GlobalSign => "global-sign",
                Status::Mismatch { .. } => "mismatch",
            },
            expected: match c.expected {
                Expected::Exact => "exact",
                Expected::GlobalSign => "global-sign",
                Expected::Typo => "typo",
            },
            documented: c.documented(),
            cases: c.cases,
            diff: match &c.status {
                Status::Mismatch { diff } => Some(diff.clone()),
                _ => None,
            },
        }
    }
}

fn checks(r: &Report) -> Vec<CheckJson> {
    r.checks.iter().map(CheckJson::from).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepJson {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_entry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
}

impl SweepJson {
    pub fn group_law(r: &GroupLawResult, tol: f64) -> Self {
        SweepJson {
            name: format!("group law {}", r.family),
            samples: r.samples,
            max_error: r.max_error,
            tol,
            passed: r.max_error <= tol,
            max_entry: None,
            failures: None,
        }
    }

    pub fn spectrum(r: &SpectrumSweep, tol: f64) -> Self {
        SweepJson {
            name: if r.with_mobius { "spectrum with Mobius" } else { "spectrum" }.to_string(),
            samples: r.samples,
            max_error: r.max_drift,
            tol,
            passed: r.max_drift <= tol,
            max_entry: Some(r.max_entry),
            failures: None,
        }
    }

    pub fn commutant(r: &CommutantSweep, tol: f64) -> Self {
        let failures = r.failures + r.rank_failures;
        SweepJson {
            name: "commutant".to_string(),
            samples: r.samples,
            max_error: r.max_error,
            tol,
            passed: failures == 0 && r.max_error <= tol,
            max_entry: None,
            failures: Some(failures),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyJson {
    pub passed: bool,
    pub seed: u64,
    pub max_degree: i32,
    pub identities: Vec<CheckJson>,
    pub conjugation: Vec<CheckJson>,
    pub sweeps: Vec<SweepJson>,
}

impl VerifyJson {
    pub fn new(seed: u64, max_degree: i32, identities: &Report, conjugation: &Report, sweeps: Vec<SweepJson>) -> Self {
        let passed = identities.passed() && conjugation.passed() && sweeps.iter().all(|s| s.passed);
        VerifyJson {
            passed,
            seed,
            max_degree,
            identities: checks(identities),
            conjugation: checks(conjugation),
            sweeps,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub kind: &'static str,
    pub a: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub input_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<i32>,
    pub terms: Vec<TermJson>,
    pub residual: u8,
}

impl CertificateJson {
    pub fn new(c: &Certificate, max_degree: Option<i32>) -> Self {
        CertificateJson {
            input_hash: c.input_hash.clone(),
            max_degree,
            terms: c
                .terms
                .iter()
                .map(|t| TermJson {
                    kind: t.kind.name(),
                    a: t.a.to_string(),
                    b: t.kind.has_b().then(|| t.b.to_string()),
                })
                .collect(),
            residual: 0,
        }
    }
}

impl From<&Decomposition> for CertificateJson {
    fn from(d: &Decomposition) -> Self {
        CertificateJson::new(&d.certificate, Some(d.max_degree))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowRowJson {
    pub n: usize,
    pub error: f64,
    pub drift: f64,
    pub word_len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowJson {
    pub t: f64,
    pub probe_seed: u64,
    pub reference_steps: usize,
    pub probes: Vec<String>,
    pub rows: Vec<FlowRowJson>,
    pub slope: Option<f64>,
    pub exact: bool,
    pub max_drift: f64,
    pub drift_tol: f64,
    pub passed: bool,
}

impl FlowJson {
    pub fn new(r: &ConvergenceReport, reference_steps: usize, drift_tol: f64) -> Self {
        FlowJson {
            t: r.t,
            probe_seed: r.probe_seed,
            reference_steps,
            probes: r.probes.iter().map(print_matrix).collect(),
            rows: r
                .rows
                .iter()
                .map(|row| FlowRowJson { n: row.n, error: row.error, drift: row.drift, word_len: row.word_len })
                .collect(),
            slope: r.slope,
            exact: r.exact,
            max_drift: r.max_drift(),
            drift_tol,
            passed: r.max_drift() <= drift_tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleJson {
    pub l1: String,
    pub l2: String,
    pub seed: u64,
    pub matrices: Vec<String>,
}

impl SampleJson {
    pub fn new(l1: num_complex::Complex64, l2: num_complex::Complex64, seed: u64, ms: &[Matrix2]) -> Self {
        SampleJson {
            l1: format_complex(l1),
            l2: format_complex(l2),
            seed,
            matrices: ms.iter().map(print_matrix).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalJson {
    pub input: String,
    pub output: String,
    pub word_len: usize,
    pub spectral_radius: f64,
}
