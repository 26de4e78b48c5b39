//! Robustness and imperceptibility across the strength exponent at a
//! fixed global multiplier of one.
//!
//!     cargo run --release --example gamma_sweep -- [cover.pgm] [seeds]

use std::env;
use std::path::PathBuf;

use wavemark::attacks::table1_suite;
use wavemark::bench::run_gamma_sweep;
use wavemark::image_io::read_pgm;

fn main() -> wavemark::Result<()> {
    let mut args = env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")
    });
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    let cover = read_pgm(&path)?;
    let gammas: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
    let seeds: Vec<u64> = (0..seeds).collect();
    let sweep = run_gamma_sweep(&cover, &gammas, &table1_suite(), 128, &seeds)?;

    println!("{:>6} {:>10} {:>12}", "gamma", "PSNR", "mean BER %");
    for row in &sweep.rows {
        println!(
            "{:>6.1} {:>10.3} {:>12.3}",
            row.gamma, row.psnr, row.mean_ber
        );
    }
    Ok(())
}
