mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Output;

/// Exit status for failed acceptance criteria.
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn dispatch(cli: &Cli) -> Result<(Output, bool), patstat_core::Error> {
    let ok = |o: Output| Ok((o, true));
    match &cli.command {
        Command::Count(a) => ok(commands::count(a)?),
        Command::Delta(a) => ok(commands::delta(a)?),
        Command::Profile(a) => ok(commands::profile(a)?),
        Command::Sample(a) => ok(commands::sample(a, cli.seed)?),
        Command::Layered(c) => ok(commands::layered(c, cli.seed)?),
        Command::Moments(c) => ok(commands::moments_cmd(c)?),
        Command::Verify(a) => Ok(commands::verify(a)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let (out, all_passed) = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_budget() { EXIT_BUDGET } else { EXIT_USAGE });
        }
    };
    let rendered = out.render(cli.format());
    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("--out {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(rendered.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}
