//! Seedable image attacks: median and Gaussian filtering, salt & pepper,
//! additive white Gaussian noise and a simulated JPEG round trip.
//!
//! Noise attacks draw from a ChaCha8 stream seeded by the caller, consumed
//! in row-major pixel order, so results never depend on thread count.

mod jpeg;

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub use jpeg::{dct8x8, idct8x8, jpeg_sim, scaled_table, LUMA_TABLE};

use crate::error::{Error, Result};
use crate::filter::{convolve_separable, gaussian_kernel};
use crate::image_io::{quantize, Image};

pub fn median_filter(img: &Image, side: usize) -> Result<Image> {
    if side == 0 || side.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "median window must be odd and positive, got {side}"
        )));
    }
    let (w, h) = (img.width() as isize, img.height() as isize);
    let r = (side / 2) as isize;
    let mut window = Vec::with_capacity(side * side);
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            window.clear();
            for dy in -r..=r {
                let yy = (y + dy).clamp(0, h - 1) as usize;
                for dx in -r..=r {
                    let xx = (x + dx).clamp(0, w - 1) as usize;
                    window.push(img.get(yy, xx));
                }
            }
            let mid = window.len() / 2;
            let (_, m, _) = window.select_nth_unstable(mid);
            out.set(y as usize, x as usize, *m);
        }
    }
    Ok(out)
}

/// Gaussian blur with kernel variance `variance` (pixels²).
pub fn gaussian_filter(img: &Image, variance: f64) -> Result<Image> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "filter variance must be positive, got {variance}"
        )));
    }
    let real: Vec<f64> = img.pixels().iter().map(|&p| f64::from(p)).collect();
    let blurred = convolve_separable(
        &real,
        img.width(),
        img.height(),
        &gaussian_kernel(variance.sqrt()),
    );
    Image::new(
        img.width(),
        img.height(),
        blurred.into_iter().map(quantize).collect(),
    )
}

/// Replaces exactly `round(density * N)` distinct pixels: the first half
/// (rounded up) with 255, the rest with 0.
pub fn salt_pepper(img: &Image, density: f64, seed: u64) -> Result<Image> {
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "salt & pepper density must be in (0, 1), got {density}"
        )));
    }
    let n = img.pixels().len();
    let count = (density * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = index::sample(&mut rng, n, count);
    let salt = count.div_ceil(2);
    let mut out = img.clone();
    let px = out.pixels_mut();
    for (k, pos) in positions.into_iter().enumerate() {
        px[pos] = if k < salt { 255 } else { 0 };
    }
    Ok(out)
}

/// Zero-mean Gaussian noise samples, one per pixel in row-major order.
pub fn awgn_noise(len: usize, variance: f64, seed: u64) -> Result<Vec<f64>> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be positive, got {variance}"
        )));
    }
    let normal =
        Normal::new(0.0, variance.sqrt()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len).map(|_| normal.sample(&mut rng)).collect())
}

pub fn awgn(img: &Image, variance: f64, seed: u64) -> Result<Image> {
    let noise = awgn_noise(img.pixels().len(), variance, seed)?;
    Image::new(
        img.width(),
        img.height(),
        img.pixels()
            .iter()
            .zip(&noise)
            .map(|(&p, &n)| quantize(f64::from(p) + n))
            .collect(),
    )
}

/// One attack with its parameter. Noise seeds are supplied at application.
///
/// The textual form is `median3`, `median5`, `gauss:<variance>`,
/// `sp:<density>`, `awgn:<variance>` or `jpeg:<quality>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attack {
    Median { side: usize },
    GaussianFilter { variance: f64 },
    SaltPepper { density: f64 },
    Awgn { variance: f64 },
    Jpeg { quality: u8 },
}

impl Attack {
    pub fn apply(&self, img: &Image, seed: u64) -> Result<Image> {
        match *self {
            Attack::Median { side } => median_filter(img, side),
            Attack::GaussianFilter { variance } => gaussian_filter(img, variance),
            Attack::SaltPepper { density } => salt_pepper(img, density, seed),
            Attack::Awgn { variance } => awgn(img, variance, seed),
            Attack::Jpeg { quality } => jpeg_sim(img, quality),
        }
    }

    pub fn is_seeded(&self) -> bool {
        matches!(self, Attack::SaltPepper { .. } | Attack::Awgn { .. })
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            Attack::Median { side } => side == 3 || side == 5,
            Attack::GaussianFilter { variance } | Attack::Awgn { variance } => {
                variance > 0.0 && variance.is_finite()
            }
            Attack::SaltPepper { density } => density > 0.0 && density < 1.0,
            Attack::Jpeg { quality } => (1..=100).contains(&quality),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(format!(
                "attack parameter out of range: {self}"
            )))
        }
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attack::Median { side } => write!(f, "median{side}"),
            Attack::GaussianFilter { variance } => write!(f, "gauss:{variance}"),
            Attack::SaltPepper { density } => write!(f, "sp:{density}"),
            Attack::Awgn { variance } => write!(f, "awgn:{variance}"),
            Attack::Jpeg { quality } => write!(f, "jpeg:{quality}"),
        }
    }
}

impl FromStr for Attack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(side) = s.strip_prefix("median") {
            let side = side
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad median window in `{s}`")))?;
            return Attack::Median { side }.validate();
        }
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::UnknownAttack(s.to_string()))?;
        let real = || {
            param
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad parameter in `{s}`")))
        };
        let attack = match kind {
            "gauss" => Attack::GaussianFilter { variance: real()? },
            "sp" => Attack::SaltPepper { density: real()? },
            "awgn" => Attack::Awgn { variance: real()? },
            "jpeg" => {
                let quality: u32 = param
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad quality in `{s}`")))?;
                if !(1..=100).contains(&quality) {
                    return Err(Error::InvalidParameter(format!(
                        "JPEG quality must be in 1..=100, got {quality}"
                    )));
                }
                Attack::Jpeg {
                    quality: quality as u8,
                }
            }
            _ => return Err(Error::UnknownAttack(s.to_string())),
        };
        attack.validate()
    }
}

/// Attacks of the 128-bit robustness table.
pub fn table1_suite() -> Vec<Attack> {
    [
        "median3",
        "awgn:15",
        "sp:0.03",
        "sp:0.04",
        "sp:0.05",
        "gauss:1.5",
    ]
    .iter()
    .map(|s| s.parse().expect("static attack spec"))
    .collect()
}

/// Attacks of the 256-bit robustness table.
pub fn table2_suite() -> Vec<Attack> {
    ["median3", "median5", "jpeg:20", "jpeg:30", "jpeg:40"]
        .iter()
        .map(|s| s.parse().expect("static attack spec"))
        .collect()
}
