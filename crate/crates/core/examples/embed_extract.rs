//! Embed a random message, write the watermarked image and side
//! information, then read both back and recover the message.
//!
//!     cargo run --release --example embed_extract -- [cover.pgm] [bits] [seed]

use std::env;
use std::path::PathBuf;

use wavemark::codec::{embed, extract, read_side_info, EmbedParams, Watermark};
use wavemark::image_io::{read_pgm, write_pgm};
use wavemark::metrics::{ber, psnr};

fn main() -> wavemark::Result<()> {
    let mut args = env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")
    });
    let bits: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(128);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let cover = read_pgm(&path)?;
    let wm = Watermark::random(bits, seed)?;
    let marked = embed(&cover, &wm, &EmbedParams::default())?;
    println!(
        "embedded {bits} bits, beta {:.4}, PSNR {:.3} dB",
        marked.side_info.beta,
        psnr(&cover, &marked.image)?
    );

    let dir = env::temp_dir().join(format!("wavemark-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let image_path = dir.join("watermarked.pgm");
    let side_path = dir.join("side.wmsi");
    write_pgm(&marked.image, &image_path)?;
    marked.side_info.write(&side_path)?;
    println!(
        "side information: {} bytes",
        std::fs::metadata(&side_path)?.len()
    );

    let received = extract(&read_pgm(&image_path)?, &read_side_info(&side_path)?)?;
    println!("recovered BER {:.3}%", ber(wm.bits(), &received)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
