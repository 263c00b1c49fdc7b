//! Seeded verification suite over random Higgs models, spectral curves and
//! fibers, with JSON and text reports.
//!
//! Trial `i` of a run with seed `s` uses random streams derived from
//! [`spectral_lab::rng::mix_seed`]`(s, i)`, so any single trial can be
//! replayed in isolation.

pub mod checks;
pub mod config;
pub mod report;
pub mod suite;

pub use checks::CheckKind;
pub use config::{ConfigError, Format, Suite, SuiteConfig};
pub use report::{emit_report, CheckRecord, NumerologyBlock, Report, SweepSummary};
pub use suite::{numerology_sweep, run_suite, THREADS_ENV};
