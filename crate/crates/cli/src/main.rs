use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liedefine_cli::{run, CliError, Format, RunConfig, Settings};

#[derive(Parser)]
#[command(
    name = "liedefine",
    version,
    about = "Exact verification of relations and homology for Lie algebras of polynomial vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Algebra such as vect:3, svect:3, h:4, po:4, k:5, witt, sl:4, sp:6.
    #[arg(long)]
    algebra: Option<String>,
    /// Comma list of relations, serre, witt-dirty, generation, defining, homology, tables; or all.
    #[arg(long)]
    suites: Option<String>,
    #[arg(long)]
    maxdeg: Option<i32>,
    #[arg(long)]
    maxlen: Option<usize>,
    /// json or text.
    #[arg(long)]
    output: Option<String>,
    /// Report path (written atomically); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit nonzero when a relation only holds after sign repair.
    #[arg(long)]
    strict: bool,
    /// Lift the default maxdeg and maxlen cutoffs.
    #[arg(long)]
    override_cutoffs: bool,
    #[arg(long, env = "LIEDEFINE_JOBS")]
    jobs: Option<usize>,
    /// Flat key = value file mirroring the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn settings(a: VerifyArgs) -> Result<RunConfig, CliError> {
    let flags = Settings {
        algebra: a.algebra,
        suites: a.suites,
        maxdeg: a.maxdeg,
        maxlen: a.maxlen,
        output: a.output.map(|o| o.parse::<Format>()).transpose()?,
        out: a.out,
        strict: a.strict.then_some(true),
        override_cutoffs: a.override_cutoffs.then_some(true),
        jobs: a.jobs,
    };
    let file = match &a.config {
        Some(p) => Settings::load_config(p)?,
        None => Settings::default(),
    };
    RunConfig::from_settings(flags.or(file))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 7 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Command::Verify(args) = cli.command;
    let outcome = settings(args).and_then(|cfg| {
        let o = run(&cfg)?;
        if cfg.out.is_none() {
            print!("{}", o.rendered);
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => ExitCode::from(o.exit_code as u8),
        Err(e) => {
            eprintln!("liedefine: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
