//! Runs both robustness presets over a directory of PGM covers and prints
//! mean BER per attack and image.
//!
//!     cargo run --release --example robustness_tables -- [covers_dir] [seeds]

use std::env;
use std::path::PathBuf;

use wavemark::bench::{load_covers, run_bench, BenchConfig, Preset};

fn main() -> wavemark::Result<()> {
    let mut args = env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers"));
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);

    let covers = load_covers(&dir)?;
    for preset in [Preset::Table1, Preset::Table2] {
        let config = BenchConfig::preset(preset, (0..seeds).collect());
        let report = run_bench(&covers, &config)?;
        println!("{}", report.to_text());
    }
    Ok(())
}
