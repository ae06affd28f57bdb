//! `omegalab`: one subcommand per workbench operation.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 internal invariant
//! failure. `OMEGALAB_THREADS` caps the worker pool; output never depends on
//! it.

mod commands;

use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("OMEGALAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow::anyhow!("OMEGALAB_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
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
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match panic::catch_unwind(|| commands::execute(cli)) {
        Ok(Ok(out)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("error: internal invariant failure");
            ExitCode::from(2)
        }
    }
}
