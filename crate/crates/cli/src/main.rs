mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{apply_config, config_path, Cli};
use commands::{load_manifest, run, RunContext};

const USAGE_ERROR: u8 = 1;
const DATA_ERROR: u8 = 2;

fn expand_argv() -> Result<Vec<String>, String> {
    let argv: Vec<String> = std::env::args().collect();
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("reading config {}: {e}", path.display()))?;
    apply_config(&argv, &text).map_err(|e| format!("{}:{}: {}", path.display(), e.line, e.reason))
}

fn main() -> ExitCode {
    let argv = match expand_argv() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = load_manifest(cli.manifest.as_deref())
        .and_then(|manifest| run(cli.command, &RunContext { seed: cli.seed, manifest }));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(DATA_ERROR)
        }
    }
}
