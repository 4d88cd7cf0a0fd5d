use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depfid::audit::{exit_code_policy, run_audit, AuditOptions, SubsetOptions};
use depfid::commands::{cmd_sweep, cmd_synth, cmd_tail, Grid};
use depfid::csv_io::{ingest_csv, write_text, HeaderMode};
use depfid::report::{emit_report, ReportFormat};
use depfid::{DepfidError, Result};
use depfid_core::scenarios::{ScenarioKind, ScenarioSpec};
use depfid_core::CovarianceMode;

#[derive(Parser)]
#[command(name = "depfid", version, about = "Audit covariance-level dependence fidelity of synthetic data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare a reference and a synthetic CSV sample.
    Audit(AuditArgs),
    /// Write a closed-form scenario pair as two CSV files.
    Synth(SynthArgs),
    /// Tabulate the eigengap scenario over a grid of perturbations.
    Sweep(SweepArgs),
    /// Tabulate joint exceedance probabilities of Gaussian and t copulas.
    Tail(TailArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CovModeArg {
    Empirical,
    LedoitWolf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeaderArg {
    Auto,
    Present,
    Absent,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    SignFlip,
    Eigengap,
    GaussianCopula,
    TCopula,
    DiagonalCollapse,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepScenarioArg {
    Eigengap,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    real: PathBuf,
    #[arg(long)]
    syn: PathBuf,
    /// Project both samples on the reference's top principal components first.
    #[arg(long)]
    pca_dims: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,5,10")]
    subspace_dims: Vec<usize>,
    /// Bootstrap resamples for the D_Σ interval; 0 disables.
    #[arg(long, default_value_t = 500)]
    bootstrap: usize,
    #[arg(long, requires = "subset_size")]
    subsets: Option<usize>,
    #[arg(long, requires = "subsets")]
    subset_size: Option<usize>,
    #[arg(long)]
    mmd: bool,
    #[arg(long)]
    copula_mmd: bool,
    #[arg(long, default_value_t = 0)]
    slope_target: usize,
    #[arg(long, value_delimiter = ',')]
    slope_predictors: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "empirical")]
    cov_mode: CovModeArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 2 when the regime is unstable.
    #[arg(long)]
    fail_on_unstable: bool,
    /// Whether the CSV files start with a header row.
    #[arg(long, value_enum, default_value = "auto")]
    header: HeaderArg,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 3.0)]
    nu: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dimension; columns past the second are independent N(0, 1) padding.
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    out_ref: PathBuf,
    #[arg(long)]
    out_syn: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "eigengap")]
    scenario: SweepScenarioArg,
    /// START:STOP:STEP
    #[arg(long, default_value = "0:1.7:0.05")]
    eps: Grid,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TailArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, default_value_t = 3.0)]
    nu: f64,
    /// START:STOP:STEP
    #[arg(long, default_value = "0:3:0.25", allow_hyphen_values = true)]
    u: Grid,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn audit(args: AuditArgs) -> Result<u8> {
    let header = match args.header {
        HeaderArg::Auto => HeaderMode::Auto,
        HeaderArg::Present => HeaderMode::Present,
        HeaderArg::Absent => HeaderMode::Absent,
    };
    let reference = ingest_csv(&args.real, header)?;
    let synthetic = ingest_csv(&args.syn, header)?;
    let options = AuditOptions {
        pca_dims: args.pca_dims,
        subspace_dims: args.subspace_dims,
        bootstrap: Some(args.bootstrap),
        subsets: args.subsets.zip(args.subset_size).map(|(count, size)| SubsetOptions { count, size }),
        mmd: args.mmd,
        copula_mmd: args.copula_mmd,
        slope_target: args.slope_target,
        slope_predictors: args.slope_predictors,
        seed: args.seed,
        cov_mode: match args.cov_mode {
            CovModeArg::Empirical => CovarianceMode::Empirical,
            CovModeArg::LedoitWolf => CovarianceMode::LedoitWolf,
        },
    };
    let outcome = run_audit(&reference, &synthetic, &options);
    let code = exit_code_policy(&outcome, args.fail_on_unstable);
    let report = outcome?;
    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Md => ReportFormat::Markdown,
    };
    let text = emit_report(&report, format);
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn synth(args: SynthArgs) -> Result<u8> {
    let kind = match args.scenario {
        ScenarioArg::SignFlip => ScenarioKind::SignFlip,
        ScenarioArg::Eigengap => ScenarioKind::Eigengap,
        ScenarioArg::GaussianCopula => ScenarioKind::GaussianCopula,
        ScenarioArg::TCopula => ScenarioKind::TCopula,
        ScenarioArg::DiagonalCollapse => ScenarioKind::DiagonalCollapse,
    };
    let spec = ScenarioSpec {
        kind,
        rho: args.rho,
        sigma2: args.sigma2,
        epsilon: args.eps,
        nu: args.nu,
        n: args.n,
        seed: args.seed,
        d: args.d,
    };
    print!("{}", cmd_synth(&spec, &args.out_ref, &args.out_syn)?);
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Audit(a) => audit(a),
        Command::Synth(a) => synth(a),
        Command::Sweep(a) => {
            let SweepScenarioArg::Eigengap = a.scenario;
            cmd_sweep(&a.eps, a.n, a.seed, &a.out).map(|_| 0)
        }
        Command::Tail(a) => cmd_tail(a.rho, a.nu, &a.u, a.n, a.seed, &a.out).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}

fn report_error(e: &DepfidError) {
    eprintln!("error: {e}");
}
