//! Four-panel dataset: bounds for C = 1 and the simulated densities of the
//! drifts -sgn(x - 1) (touches beta at 1) and sgn(x - 0.25) (touches alpha
//! at 0.25), started at 0.
//!
//! cargo run --release --example figure1 -- [out_dir] [n_paths]

use std::path::PathBuf;

use density_bounds::cli::{run, Cli, Command, Figure1Args, DEFAULT_SEED};

fn main() -> density_bounds::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "figure1".into()));
    let n_paths = args.next().map_or(50_000, |s| s.parse().expect("n_paths"));
    let cli = Cli {
        threads: None,
        command: Command::Figure1(Figure1Args {
            out: out.clone(),
            n_paths,
            dt: 1e-3,
            bin_width: 0.05,
            seed: DEFAULT_SEED,
        }),
    };
    let outcome = run(cli)?;
    for f in &outcome.manifest.outputs {
        println!("{}", out.join(f).display());
    }
    println!("checks passed: {}", outcome.passed());
    Ok(())
}
