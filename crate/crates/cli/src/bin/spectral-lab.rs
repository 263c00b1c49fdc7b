use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_lab::{Backend, Group};
use spectral_lab_cli::{emit_report, run_suite, Format, Suite, SuiteConfig};

/// Seeded verification of Pfaffian spectral data for SL(m,H), SO(2m,H) and Sp(m,m).
///
/// Exit status: 0 when every check passed, 1 when a check failed,
/// 2 on a configuration or I/O error.
#[derive(Parser, Debug)]
#[command(name = "spectral-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pfaffian identities, eigenvalue pairing and fixed-point signs on random models.
    VerifyMatrix(Options),
    /// Smoothness rate and fixed-point counts on random spectral curves.
    VerifyCurve(Options),
    /// Residue pairing, direct-image round trip and equivariant splits on fibers.
    VerifyFiber(Options),
    /// Dimension counts for one configuration plus the full identity sweep.
    Numerology(Options),
    /// Everything above.
    FullSuite(Options),
}

#[derive(clap::Args, Debug)]
struct Options {
    /// SL_H, SO_STAR or SP_MM.
    #[arg(long, default_value = "SL_H")]
    group: Group,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    genus: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
    tol: f64,
    /// Degree in z of the random curve coefficients.
    #[arg(long, default_value_t = 4)]
    coeff_degree: usize,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    disc_radius: f64,
    /// exact or floating.
    #[arg(long, default_value = "floating")]
    backend: Backend,
    /// json or text.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (suite, opts) = match cli.command {
        Command::VerifyMatrix(o) => (Suite::VerifyMatrix, o),
        Command::VerifyCurve(o) => (Suite::VerifyCurve, o),
        Command::VerifyFiber(o) => (Suite::VerifyFiber, o),
        Command::Numerology(o) => (Suite::Numerology, o),
        Command::FullSuite(o) => (Suite::FullSuite, o),
    };
    let config = SuiteConfig {
        suite,
        group: opts.group,
        m: opts.m,
        genus: opts.genus,
        seed: opts.seed,
        trials: opts.trials,
        tolerance: opts.tol,
        coeff_degree: opts.coeff_degree,
        disc_radius: opts.disc_radius,
        backend: opts.backend,
        format: opts.format,
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = emit_report(&report, config.format);
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_status as u8)
}
