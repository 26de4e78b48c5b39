//! Canny edge density and per-block strength factors for a cover image.
//! Prints an ASCII map of the grid: `#` for edge-rich blocks, `.` otherwise.
//!
//!     cargo run --release --example complexity_map -- [cover.pgm] [gamma]

use std::env;
use std::path::PathBuf;

use wavemark::blocks::BlockGrid;
use wavemark::complexity::{analyze_blocks, canny, CannyParams};
use wavemark::image_io::read_pgm;

fn main() -> wavemark::Result<()> {
    let mut args = env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")
    });
    let gamma: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.4);

    let img = read_pgm(&path)?;
    let params = CannyParams::default();
    let edges = canny(&img, &params)?;
    println!(
        "{}: {}x{}, {} edge pixels ({:.2}%)",
        path.display(),
        img.width(),
        img.height(),
        edges.count(),
        100.0 * edges.count() as f64 / img.pixels().len() as f64
    );

    let blocks = analyze_blocks(&img, &params, gamma, 0.5)?;
    let grid = BlockGrid::for_image(&img)?;
    let complex = blocks.iter().filter(|b| b.is_complex).count();
    println!("{complex} of {} blocks above mean edge count", blocks.len());

    let alphas: Vec<f64> = blocks.iter().map(|b| b.alpha).collect();
    let min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    let max = alphas.iter().copied().fold(0.0, f64::max);
    let floor = blocks.iter().filter(|b| b.alpha == 0.5).count();
    println!("alpha range {min:.3}..{max:.3} at gamma {gamma}, {floor} blocks at the floor");

    // One character per 2x2 blocks keeps a 512-wide image within 32 columns.
    for r in (0..grid.rows).step_by(2) {
        let line: String = (0..grid.cols)
            .step_by(2)
            .map(|c| {
                if blocks[r * grid.cols + c].is_complex {
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{line}");
    }
    Ok(())
}
