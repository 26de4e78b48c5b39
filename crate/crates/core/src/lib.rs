//! Adaptive Haar-wavelet watermarking for 8-bit grayscale images.
//!
//! The image is tiled into 8×8 blocks. Each block gets a three-level Haar
//! decomposition and carries one message bit (round-robin) in its level-3
//! approximation, horizontal and vertical coefficients. The embedding
//! strength adapts to the block: `alpha = beta * max(sigma^gamma, alpha_min)`
//! where `sigma` is the standard deviation of the block's level-1
//! approximation band. Extraction compares the received coefficients with
//! the originals kept in [`codec::SideInfo`] and takes a majority vote over
//! every copy of each bit.
//!
//! Alongside the codec the crate ships the attacks and metrics used to
//! measure robustness, and a benchmark driver in [`bench`].
//!
//! ```no_run
//! use wavemark::{attacks::Attack, codec, image_io, metrics};
//!
//! # fn main() -> wavemark::Result<()> {
//! let cover = image_io::read_pgm("cover.pgm")?;
//! let wm = codec::Watermark::random(128, 42)?;
//! let marked = codec::embed(&cover, &wm, &codec::EmbedParams::default())?;
//! let attacked = "jpeg:30".parse::<Attack>()?.apply(&marked.image, 0)?;
//! let bits = codec::extract(&attacked, &marked.side_info)?;
//! println!("BER {:.2}%", metrics::ber(wm.bits(), &bits)?);
//! # Ok(())
//! # }
//! ```

pub mod attacks;
pub mod bench;
pub mod blocks;
pub mod codec;
pub mod complexity;
mod error;
mod filter;
pub mod haar;
pub mod image_io;
pub mod metrics;

pub use error::{Error, Result};
pub use image_io::{Image, RealImage};
