use std::fmt::Write as _;

use serde::Serialize;
use spectral_lab::NumerologyReport;

use crate::checks::{CheckKind, Outcome};
use crate::config::{Format, SuiteConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureNote {
    pub trial: u64,
    pub message: String,
}

/// Aggregate of one check over all trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest residual seen; boolean checks report 0.
    pub worst_residual: f64,
    pub threshold: f64,
    /// Fraction of passing trials, for rate checks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rate: Option<f64>,
    pub passed: bool,
    /// Lowest-index failing trial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FailureNote>,
}

impl CheckRecord {
    /// Folds `(trial index, outcome)` pairs; order does not matter.
    pub fn from_outcomes<'a>(
        kind: CheckKind,
        threshold: f64,
        outcomes: impl IntoIterator<Item = (u64, &'a Outcome)>,
    ) -> Self {
        let mut trials = 0;
        let mut failures = 0;
        let mut worst: f64 = 0.0;
        let mut first: Option<FailureNote> = None;
        for (trial, o) in outcomes {
            debug_assert_eq!(o.kind, kind);
            trials += 1;
            worst = worst.max(o.residual);
            if !o.passed {
                failures += 1;
                if first.as_ref().is_none_or(|f| trial < f.trial) {
                    let message = o.note.clone().unwrap_or_else(|| "failed".into());
                    first = Some(FailureNote { trial, message });
                }
            }
        }
        let min_rate = kind.min_rate();
        let rate = (min_rate.is_some() && trials > 0).then(|| (trials - failures) as f64 / trials as f64);
        let passed = match (rate, min_rate) {
            (Some(r), Some(min)) => r >= min,
            _ => failures == 0,
        };
        CheckRecord {
            name: kind.name().into(),
            anchor: kind.anchor().into(),
            trials,
            failures,
            worst_residual: worst,
            threshold,
            rate,
            min_rate,
            passed,
            first_failure: first,
        }
    }
}

/// Exhaustive integer checks over a grid of `(group, m, g)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub m_max: u64,
    pub g_min: u64,
    pub g_max: u64,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub anchor: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumerologyBlock {
    /// Counts for the configured `(group, m, genus)`.
    pub report: NumerologyReport,
    pub sweep: SweepSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    /// Failing checks first, then in suite order.
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerology: Option<NumerologyBlock>,
    /// 0 when every check passed, 1 otherwise.
    pub exit_status: i32,
}

impl Report {
    pub fn new(config: SuiteConfig, mut checks: Vec<CheckRecord>, numerology: Option<NumerologyBlock>) -> Self {
        checks.sort_by_key(|c| c.passed);
        let passed = checks.iter().all(|c| c.passed) && numerology.as_ref().is_none_or(|n| n.sweep.passed);
        Report { config, checks, numerology, exit_status: if passed { 0 } else { 1 } }
    }

    pub fn passed(&self) -> bool {
        self.exit_status == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Renders the report. JSON objects have their keys in sorted order.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            // `Value` keeps object keys in a `BTreeMap`, which fixes the order.
            let value = serde_json::to_value(report).expect("report is serializable");
            let mut s = serde_json::to_string_pretty(&value).expect("value is serializable");
            s.push('\n');
            s
        }
        Format::Text => text_table(report),
    }
}

fn text_table(report: &Report) -> String {
    let c = &report.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "spectral-lab {}  group={} m={} genus={} seed={} trials={} tol={:e} backend={}",
        c.suite, c.group, c.m, c.genus, c.seed, c.trials, c.tolerance, c.backend
    );
    if !report.checks.is_empty() {
        let width = report.checks.iter().map(|r| r.name.len()).max().unwrap_or(0).max(5);
        let _ = writeln!(
            s,
            "{:<6}  {:<width$}  {:>6}  {:>8}  {:>14}  anchor",
            "status", "check", "trials", "failures", "worst residual"
        );
        for r in &report.checks {
            let status = if r.passed { "ok" } else { "FAIL" };
            let residual = match r.rate {
                Some(rate) => format!("rate {:.3}", rate),
                None => format!("{:.3e}", r.worst_residual),
            };
            let _ = writeln!(
                s,
                "{status:<6}  {:<width$}  {:>6}  {:>8}  {residual:>14}  {}",
                r.name, r.trials, r.failures, r.anchor
            );
            if let Some(f) = &r.first_failure {
                let _ = writeln!(s, "        first failure: trial {}: {}", f.trial, f.message);
            }
        }
    }
    if let Some(n) = &report.numerology {
        let r = &n.report;
        let _ = writeln!(
            s,
            "numerology {} m={} g={}: base {} + fiber {} + parabolic {} = {} ; (g-1)·dim G^c = {} ({})",
            r.group,
            r.m,
            r.g,
            r.base_dim,
            r.fiber_dim,
            r.parabolic_dim,
            r.total_dim,
            &r.complex_group_dim * (r.g as i64 - 1),
            if r.dimension_identity { "ok" } else { "MISMATCH" }
        );
        let _ = writeln!(
            s,
            "sweep m ≤ {}, {} ≤ g ≤ {}: {} cases, {} failures  [{}]",
            n.sweep.m_max, n.sweep.g_min, n.sweep.g_max, n.sweep.cases, n.sweep.failures, n.sweep.anchor
        );
        if let Some(f) = &n.sweep.first_failure {
            let _ = writeln!(s, "        first failure: {f}");
        }
    }
    let _ = writeln!(s, "exit status: {}", report.exit_status);
    s
}
