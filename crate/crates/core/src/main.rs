use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use fano_mutations::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli, &mut io::stdin().lock()).and_then(|out| match &cli.output {
        Some(path) => fs::write(path, &out).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(out.as_bytes()).context("writing standard output"),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
