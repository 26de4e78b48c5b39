//! JPEG-style lossy round trip: 8×8 DCT, quantise with the baseline
//! luminance table scaled by quality, dequantise, inverse DCT.
//!
//! Entropy coding is lossless and is not simulated.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::blocks::BlockGrid;
use crate::error::{Error, Result};
use crate::haar::BLOCK;
use crate::image_io::{quantize, Image};

/// Baseline luminance quantisation table (ITU-T T.81 Annex K), row-major.
pub const LUMA_TABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quality-scaled luminance table (IJG convention).
pub fn scaled_table(quality: u8) -> Result<[u16; 64]> {
    if !(1..=100).contains(&quality) {
        return Err(Error::InvalidParameter(format!(
            "JPEG quality must be in 1..=100, got {quality}"
        )));
    }
    let q = u32::from(quality);
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut out = [0u16; 64];
    for (o, &e) in out.iter_mut().zip(&LUMA_TABLE) {
        *o = ((u32::from(e) * scale + 50) / 100).clamp(1, 255) as u16;
    }
    Ok(out)
}

/// `cos[(2x+1) u pi / 16] * c(u)` with orthonormal scaling, indexed `[u][x]`.
fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for (u, row) in b.iter_mut().enumerate() {
            let cu = if u == 0 {
                (1.0f64 / 8.0).sqrt()
            } else {
                0.25f64.sqrt()
            };
            for (x, v) in row.iter_mut().enumerate() {
                *v = cu * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos();
            }
        }
        b
    })
}

/// Orthonormal 2-D type-II DCT of an 8×8 block.
pub fn dct8x8(block: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut tmp = [0.0; 64];
    for y in 0..8 {
        for u in 0..8 {
            tmp[y * 8 + u] = (0..8).map(|x| b[u][x] * block[y * 8 + x]).sum();
        }
    }
    let mut out = [0.0; 64];
    for v in 0..8 {
        for u in 0..8 {
            out[v * 8 + u] = (0..8).map(|y| b[v][y] * tmp[y * 8 + u]).sum();
        }
    }
    out
}

pub fn idct8x8(coeffs: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut tmp = [0.0; 64];
    for v in 0..8 {
        for x in 0..8 {
            tmp[v * 8 + x] = (0..8).map(|u| b[u][x] * coeffs[v * 8 + u]).sum();
        }
    }
    let mut out = [0.0; 64];
    for y in 0..8 {
        for x in 0..8 {
            out[y * 8 + x] = (0..8).map(|v| b[v][y] * tmp[v * 8 + x]).sum();
        }
    }
    out
}

pub fn jpeg_sim(img: &Image, quality: u8) -> Result<Image> {
    let table = scaled_table(quality)?;
    let grid = BlockGrid::for_image(img)?;
    let mut out = img.clone();
    for index in 0..grid.len() {
        let (r0, c0) = grid.origin(index);
        let mut block = [0.0; 64];
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                block[r * 8 + c] = f64::from(img.get(r0 + r, c0 + c)) - 128.0;
            }
        }
        let mut coeffs = dct8x8(&block);
        for (c, &q) in coeffs.iter_mut().zip(&table) {
            let q = f64::from(q);
            *c = (*c / q).round() * q;
        }
        let back = idct8x8(&coeffs);
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                out.set(r0 + r, c0 + c, quantize(back[r * 8 + c] + 128.0));
            }
        }
    }
    Ok(out)
}
