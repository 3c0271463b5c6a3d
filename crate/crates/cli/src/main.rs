use std::process::ExitCode;

use clap::Parser;

mod cli;
mod commands;
mod error;
mod manifest;

use cli::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::param("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
    }
    let (mut manifest, out, name) = match &cli.command {
        Command::Generate(a) => (commands::generate(a)?, &a.out, "generate.manifest.json".to_string()),
        Command::Plan(a) => (commands::plan(a)?, &a.out, format!("plan_h{}.manifest.json", a.heuristic)),
        Command::Evaluate(a) => (commands::evaluate(a)?, &a.out, "evaluate.manifest.json".to_string()),
        Command::Render(a) => (commands::render(a)?, &a.out, "render.manifest.json".to_string()),
        Command::Reproduce(a) => (commands::reproduce(a)?, &a.out, "manifest.json".to_string()),
    };
    if let Some(threads) = cli.threads {
        manifest.set("threads", threads);
    }
    manifest.write(out, &name)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::usage(first).line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.code)
        }
    }
}
