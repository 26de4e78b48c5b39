//! Three-level Haar decomposition of a single 8×8 block.
//!
//!     cargo run --example haar_pyramid

use wavemark::haar::{level3_footprints, pyramid_forward, pyramid_inverse, Square, BLOCK};

fn main() -> wavemark::Result<()> {
    let block = Square::from_fn(BLOCK, |r, c| ((r * 16 + c * 9) % 256) as f64);
    let pyramid = pyramid_forward(&block)?;

    for (i, level) in pyramid.levels().iter().enumerate() {
        println!(
            "level {}: {}x{} subbands, energy {:.3}",
            i + 1,
            level.side(),
            level.side(),
            level.energy()
        );
    }
    let top = pyramid.top();
    println!(
        "top cA={:.4} cH={:.4} cV={:.4} cD={:.4}",
        top.ca, top.ch, top.cv, top.cd
    );
    println!(
        "block energy {:.3}, approximation + details {:.3}",
        block.energy(),
        pyramid.energy()
    );

    let back = pyramid_inverse(&pyramid)?;
    let err = block
        .as_slice()
        .iter()
        .zip(back.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("round-trip max error {err:.3e}");

    // A unit change of a top coefficient moves every pixel by 1/8.
    for (name, fp) in ["cA", "cH", "cV"].iter().zip(level3_footprints()) {
        println!("{name} footprint, first row: {:?}", &fp.as_slice()[..BLOCK]);
    }
    Ok(())
}
