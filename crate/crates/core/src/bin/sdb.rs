use std::process::ExitCode;

use clap::Parser;
use density_bounds::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(outcome) if outcome.passed() => ExitCode::SUCCESS,
        Ok(outcome) => {
            let failure = outcome.failure.unwrap_or_default();
            eprintln!("{}", serde_json::to_string_pretty(&failure).unwrap_or_default());
            ExitCode::from(1)
        }
        Err(e) => {
            let failure = serde_json::json!({ "error": e.to_string() });
            eprintln!("{failure}");
            ExitCode::from(3)
        }
    }
}
