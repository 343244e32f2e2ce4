//! Command-line front end for the torspec library.
//!
//! Exit codes: 0 on success, 2 for rejected input (bad arguments, domain,
//! pole, branch, cap exceeded), 3 when a numerical method fails. Failures are
//! still reported in the selected format, with a machine-readable `code`.

pub mod commands;
pub mod config;
pub mod render;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{execute, Failure, Report};
use config::RunConfig;

/// What a run produced: the exit code, the formatted report and any diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Executes a parsed configuration, honouring `--threads`.
pub fn execute_config(cfg: &RunConfig) -> Result<Report, Failure> {
    match cfg.threads {
        None => execute(cfg),
        Some(0) => Err(Failure::invalid("--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::invalid(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| execute(cfg))
        }
    }
}

/// Parses `args` (program name first), runs the command and formats the result.
pub fn run_captured<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run_config(&cfg)
}

/// Runs an already parsed configuration.
pub fn run_config(cfg: &RunConfig) -> Outcome {
    let name = cfg.command.name();
    let (code, text, stderr) = match execute_config(cfg) {
        Ok(r) => (0, render::render_report(name, &r, cfg.format), String::new()),
        Err(f) => (f.exit_code(), render::render_failure(name, &f, cfg.format), format!("error: {}\n", f.message)),
    };
    match &cfg.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr },
            Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) },
        },
        None => Outcome { code, stdout: text, stderr },
    }
}

/// Entry point used by the binary; prints and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let o = run_captured(args);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}
