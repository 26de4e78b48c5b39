//! Applies every supported attack to one watermarked image and reports
//! image damage next to message damage.
//!
//!     cargo run --release --example attack_suite -- [cover.pgm] [seed]

use std::env;
use std::path::PathBuf;

use wavemark::attacks::Attack;
use wavemark::codec::{embed, extract, EmbedParams, Watermark};
use wavemark::image_io::read_pgm;
use wavemark::metrics::{ber, psnr};

const ATTACKS: &[&str] = &[
    "median3",
    "median5",
    "gauss:0.5",
    "gauss:1.5",
    "awgn:5",
    "awgn:15",
    "sp:0.01",
    "sp:0.03",
    "sp:0.05",
    "jpeg:80",
    "jpeg:40",
    "jpeg:30",
    "jpeg:20",
];

fn main() -> wavemark::Result<()> {
    let mut args = env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")
    });
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let cover = read_pgm(&path)?;
    let wm = Watermark::random(128, seed)?;
    let marked = embed(&cover, &wm, &EmbedParams::default())?;
    println!("watermarked at {:.2} dB", psnr(&cover, &marked.image)?);
    println!("{:<10} {:>12} {:>8}", "attack", "PSNR (dB)", "BER %");
    for spec in ATTACKS {
        let attack: Attack = spec.parse()?;
        let attacked = attack.apply(&marked.image, seed)?;
        let bits = extract(&attacked, &marked.side_info)?;
        println!(
            "{:<10} {:>12.2} {:>8.2}",
            attack.to_string(),
            psnr(&marked.image, &attacked)?,
            ber(wm.bits(), &bits)?
        );
    }
    Ok(())
}
