use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ordrep_cli::{run, Cli};

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli, &echo) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.render();
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if !cli.quiet {
        print!("{text}");
        eprintln!("{} failures, {:.3} s", report.failures.len(), start.elapsed().as_secs_f64());
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
