use std::collections::BTreeMap;

use rayon::prelude::*;
use spectral_lab::numerology::{lefschetz_degree, milnor_wood, moduli_dimensions};
use spectral_lab::{Backend, Exact, Float, Group, Scalar};

use crate::checks::{self, CheckKind, Outcome};
use crate::config::{ConfigError, SuiteConfig};
use crate::report::{CheckRecord, NumerologyBlock, Report, SweepSummary};

/// Caps the worker threads used for trials.
pub const THREADS_ENV: &str = "SPECTRAL_LAB_THREADS";

pub const SWEEP_M_MAX: u64 = 20;
pub const SWEEP_G_MIN: u64 = 2;
pub const SWEEP_G_MAX: u64 = 20;
const SWEEP_DEG_L: [i64; 3] = [-50, 0, 50];

/// Runs the checks selected by `config.suite`. The report depends only on
/// the configuration, never on thread count or scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let checks = with_thread_cap(|| match config.backend {
        Backend::Exact => trial_checks::<Exact>(config),
        Backend::Floating => trial_checks::<Float>(config),
    });
    let numerology = config.suite.numerology().then(|| numerology_block(config));
    Ok(Report::new(config.clone(), checks, numerology))
}

fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn trial_checks<T: Scalar>(config: &SuiteConfig) -> Vec<CheckRecord> {
    let suite = config.suite;
    let mut runners: Vec<fn(&SuiteConfig, u64) -> Vec<Outcome>> = Vec::new();
    if suite.matrices() {
        runners.push(checks::matrix_trial::<T>);
    }
    if suite.curves() {
        runners.push(checks::curve_trial::<T>);
    }
    if suite.fibers() {
        runners.push(checks::fiber_trial::<T>);
    }
    if runners.is_empty() {
        return Vec::new();
    }
    // Results come back indexed by trial, whatever order they finish in.
    let per_trial: Vec<(u64, Vec<Outcome>)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| (i, runners.iter().flat_map(|run| run(config, i)).collect()))
        .collect();

    let mut grouped: BTreeMap<CheckKind, Vec<(u64, &Outcome)>> = BTreeMap::new();
    for (i, outcomes) in &per_trial {
        for o in outcomes {
            grouped.entry(o.kind).or_default().push((*i, o));
        }
    }
    let tol = checks::tolerance(config);
    grouped
        .into_iter()
        .map(|(kind, outcomes)| CheckRecord::from_outcomes(kind, kind.threshold(&tol), outcomes))
        .collect()
}

fn numerology_block(config: &SuiteConfig) -> NumerologyBlock {
    NumerologyBlock {
        report: moduli_dimensions(config.group, config.m as u64, config.genus),
        sweep: numerology_sweep(),
    }
}

/// Checks over every group, `1 ≤ m ≤ 20` and `2 ≤ g ≤ 20`:
/// the dimension count, and for the involution groups that
/// `deg W = 2M − 4m(g−1)` for every `M` and several `deg L`, with the
/// extremes of `M` saturating the Milnor–Wood bound.
pub fn numerology_sweep() -> SweepSummary {
    let mut cases = 0;
    let mut failures = 0;
    let mut first_failure = None;
    let mut fail = |msg: String, failures: &mut usize| {
        *failures += 1;
        first_failure.get_or_insert(msg);
    };
    for group in Group::ALL {
        for m in 1..=SWEEP_M_MAX {
            for g in SWEEP_G_MIN..=SWEEP_G_MAX {
                cases += 1;
                let report = moduli_dimensions(group, m, g);
                if !report.dimension_identity {
                    fail(format!("{group} m={m} g={g}: total {} ≠ (g-1)·dim G^c", report.total_dim), &mut failures);
                }
                if !group.has_involution() {
                    continue;
                }
                let max = 4 * m as i64 * (g as i64 - 1);
                let bound = milnor_wood(m, g, 0).bound;
                for big_m in 0..=max {
                    let expected = 2 * big_m - max;
                    for deg_l in SWEEP_DEG_L {
                        match lefschetz_degree(m, g, big_m, deg_l) {
                            Ok(l) if l.deg_w == expected.into() => {}
                            Ok(l) => fail(
                                format!("{group} m={m} g={g} M={big_m} deg L={deg_l}: deg W {} ≠ {expected}", l.deg_w),
                                &mut failures,
                            ),
                            Err(e) => fail(format!("{group} m={m} g={g} M={big_m}: {e}"), &mut failures),
                        }
                    }
                }
                if bound != max.into() {
                    fail(format!("{group} m={m} g={g}: Milnor–Wood bound {bound} ≠ {max}"), &mut failures);
                }
            }
        }
    }
    SweepSummary {
        m_max: SWEEP_M_MAX,
        g_min: SWEEP_G_MIN,
        g_max: SWEEP_G_MAX,
        cases,
        failures,
        first_failure,
        anchor: "total dim = (g-1)·dim G^c ; deg W = 2M - 4m(g-1)".into(),
        passed: failures == 0,
    }
}
