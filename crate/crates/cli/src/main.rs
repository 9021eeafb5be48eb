//! `koranyi`: batch driver for the koranyi-core sweeps and verifications.
//!
//! Exit status is 0 on success, 1 when a check or computation fails and 2
//! on usage errors. `KORANYI_THREADS` sets the worker count.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use commands::RunError;
use config::{Cli, RunConfig};

const THREADS_VAR: &str = "KORANYI_THREADS";

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        return usage(&e);
    }
    let config = match RunConfig::resolve(cli.command, &cli.common) {
        Ok(c) => c,
        Err(e) => return usage(&e),
    };
    // Fail on an unwritable path before spending time on the run.
    let mut file = match &config.out {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Some(f),
            Err(e) => return usage(&format!("cannot write {}: {e}", p.display())),
        },
        None => None,
    };
    let report = match commands::run(&config) {
        Ok(r) => r,
        Err(RunError::Usage(msg)) => return usage(&msg),
        Err(RunError::Compute(msg)) => {
            let record = json!({
                "status": "error",
                "subcommand": config.subcommand.name(),
                "message": msg,
            });
            eprintln!("{record}");
            return ExitCode::from(1);
        }
    };
    let text = output::render(&config, &report);
    let written = match file.as_mut() {
        Some(f) => f.write_all(text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        return usage(&format!("write failed: {e}"));
    }
    if config.plot {
        if let (Some(out), Some(spec)) = (&config.out, &report.plot) {
            let mut gp = out.clone().into_os_string();
            gp.push(".gp");
            if let Err(e) = std::fs::write(&gp, output::plot_script(out, &report, spec)) {
                return usage(&format!("cannot write {}: {e}", gp.to_string_lossy()));
            }
        }
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        let record = json!({
            "status": "verification_failed",
            "subcommand": config.subcommand.name(),
            "failures": report.failures(),
        });
        eprintln!("{record}");
        ExitCode::from(1)
    }
}
