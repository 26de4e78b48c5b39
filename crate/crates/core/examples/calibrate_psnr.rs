//! Shows how PSNR responds to the global strength multiplier and where
//! calibration lands for a few targets.
//!
//!     cargo run --release --example calibrate_psnr -- [cover.pgm]

use std::env;
use std::path::PathBuf;

use wavemark::codec::{EmbedParams, Embedder, Watermark};
use wavemark::image_io::read_pgm;

fn main() -> wavemark::Result<()> {
    let path = env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")
    });
    let cover = read_pgm(&path)?;
    let embedder = Embedder::from_params(&cover, &EmbedParams::default())?;
    let wm = Watermark::random(128, 1)?;

    println!("{:>8} {:>10}", "beta", "PSNR");
    for beta in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("{beta:>8.2} {:>10.3}", embedder.psnr_at(&wm, beta)?);
    }

    for target in [40.0, 45.0, 50.0] {
        let beta = embedder.calibrate_beta(&wm, target)?;
        println!(
            "target {target:.1} dB -> beta {beta:.4}, PSNR {:.3} dB",
            embedder.psnr_at(&wm, beta)?
        );
    }
    Ok(())
}
