use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use projgraft_cli::{render, run_cli, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run_cli(&cli);
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(render(&report, cli.format).as_bytes());
    ExitCode::from(report.exit_code())
}
