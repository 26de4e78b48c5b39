//! Adaptive embedding into level-3 Haar coefficients and semi-blind
//! extraction by comparison with the stored originals.
//!
//! Block `i` carries bit `i mod n`. Its level-3 `cA`, `cH` and `cV` each
//! move by `+alpha` for a 1 and `-alpha` for a 0, where
//! `alpha = beta * max(sigma_A^gamma, alpha_min)`. On extraction each of
//! the three coefficients votes 1 if it rose above its original value and
//! 0 if it fell; a bit decodes to 1 only on a strict majority of 1-votes.

mod message;
mod side_info;

use rayon::prelude::*;

pub use message::{bits_to_text, parse_bits, Watermark};
pub use side_info::{read_side_info, write_side_info, SideBlock, SideInfo};

use crate::blocks::{read_block, BlockGrid};
use crate::complexity::{analyze_blocks, BlockComplexity, CannyParams};
use crate::error::{Error, Result};
use crate::haar::{level3_footprints, pyramid_forward, BlockPyramid, TopCoefficients, BLOCK};
use crate::image_io::{quantize, Image};
use crate::metrics::psnr;

/// Embedding settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedParams {
    pub gamma: f64,
    pub alpha_min: f64,
    /// Global strength multiplier. Ignored when `target_psnr` is set.
    pub beta: f64,
    /// Calibrate `beta` so the watermarked image lands on this PSNR (dB).
    pub target_psnr: Option<f64>,
    pub canny: CannyParams,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self {
            gamma: 0.4,
            alpha_min: 0.5,
            beta: 1.0,
            target_psnr: Some(45.0),
            canny: CannyParams::default(),
        }
    }
}

impl EmbedParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha_min must be positive, got {}",
                self.alpha_min
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        self.canny.validate()
    }
}

/// Round-robin assignment of blocks to message bits.
#[inline]
pub fn bit_for_block(block_index: usize, message_length: usize) -> usize {
    block_index % message_length
}

/// Shifts level-3 `cA`, `cH`, `cV` by `+alpha` (bit set) or `-alpha`.
pub fn embed_block(pyramid: &BlockPyramid, bit: bool, alpha: f64) -> Result<BlockPyramid> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "embedding strength must be positive, got {alpha}"
        )));
    }
    let delta = if bit { alpha } else { -alpha };
    let mut out = pyramid.clone();
    let mut top = out.top();
    top.ca += delta;
    top.ch += delta;
    top.cv += delta;
    out.set_top(top);
    Ok(out)
}

/// Watermarked image plus the side information needed to read it back.
#[derive(Debug, Clone)]
pub struct Embedded {
    pub image: Image,
    pub side_info: SideInfo,
}

/// A cover image with its per-block analysis done once, ready for any
/// number of embeddings at different strengths.
///
/// Embedding only moves three level-3 coefficients, so the marked block is
/// the cover block plus `±alpha` times the summed synthesis footprints of
/// those coefficients (see [`level3_footprints`]).
#[derive(Debug, Clone)]
pub struct Embedder {
    cover: Image,
    grid: BlockGrid,
    gamma: f64,
    tops: Vec<TopCoefficients>,
    complexity: Vec<BlockComplexity>,
    footprint: [f64; BLOCK * BLOCK],
}

impl Embedder {
    pub fn new(cover: &Image, gamma: f64, alpha_min: f64, canny: &CannyParams) -> Result<Self> {
        let grid = BlockGrid::for_image(cover)?;
        let complexity = analyze_blocks(cover, canny, gamma, alpha_min)?;
        let tops = (0..grid.len())
            .into_par_iter()
            .map(|i| Ok(pyramid_forward(&read_block(cover, &grid, i))?.top()))
            .collect::<Result<Vec<_>>>()?;
        let [a, h, v] = level3_footprints();
        let footprint =
            std::array::from_fn(|k| a.as_slice()[k] + h.as_slice()[k] + v.as_slice()[k]);
        Ok(Self {
            cover: cover.clone(),
            grid,
            gamma,
            tops,
            complexity,
            footprint,
        })
    }

    pub fn from_params(cover: &Image, params: &EmbedParams) -> Result<Self> {
        params.validate()?;
        Self::new(cover, params.gamma, params.alpha_min, &params.canny)
    }

    pub fn cover(&self) -> &Image {
        &self.cover
    }

    pub fn block_count(&self) -> usize {
        self.grid.len()
    }

    pub fn complexity(&self) -> &[BlockComplexity] {
        &self.complexity
    }

    fn check_message(&self, wm: &Watermark) -> Result<()> {
        if wm.len() > self.grid.len() {
            return Err(Error::InvalidParameter(format!(
                "message of {} bits exceeds the {} available blocks",
                wm.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }

    /// Embeds `wm` with global multiplier `beta`.
    pub fn embed_with_beta(&self, wm: &Watermark, beta: f64) -> Result<Embedded> {
        self.check_message(wm)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        let n = wm.len();
        let marked: Vec<[u8; BLOCK * BLOCK]> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let bit = wm.bits()[bit_for_block(i, n)];
                let values = self.marked_block(i, bit, beta * self.complexity[i].alpha);
                values.map(quantize)
            })
            .collect();

        let mut image = self.cover.clone();
        for (i, px) in marked.iter().enumerate() {
            let (r0, c0) = self.grid.origin(i);
            for r in 0..BLOCK {
                for c in 0..BLOCK {
                    image.set(r0 + r, c0 + c, px[r * BLOCK + c]);
                }
            }
        }

        let blocks = self
            .tops
            .iter()
            .zip(&self.complexity)
            .map(|(top, cx)| SideBlock {
                is_complex: cx.is_complex,
                alpha: beta * cx.alpha,
                ca: top.ca,
                ch: top.ch,
                cv: top.cv,
            })
            .collect();
        let side_info = SideInfo {
            width: self.cover.width() as u32,
            height: self.cover.height() as u32,
            message_length: n as u32,
            gamma: self.gamma,
            beta,
            blocks,
        };
        Ok(Embedded { image, side_info })
    }

    /// Real-valued marked block before pixel quantisation.
    fn marked_block(&self, index: usize, bit: bool, alpha: f64) -> [f64; BLOCK * BLOCK] {
        let delta = if bit { alpha } else { -alpha };
        let (r0, c0) = self.grid.origin(index);
        std::array::from_fn(|k| {
            f64::from(self.cover.get(r0 + k / BLOCK, c0 + k % BLOCK)) + delta * self.footprint[k]
        })
    }

    pub fn psnr_at(&self, wm: &Watermark, beta: f64) -> Result<f64> {
        psnr(&self.cover, &self.embed_with_beta(wm, beta)?.image)
    }

    /// Finds `beta` such that the watermarked PSNR is within
    /// [`CALIBRATION_TOLERANCE_DB`] of `target_psnr`.
    ///
    /// Bisects geometrically over `[1e-3, 1e3]` for at most
    /// [`CALIBRATION_MAX_ITERS`] steps; PSNR falls as `beta` grows.
    pub fn calibrate_beta(&self, wm: &Watermark, target_psnr: f64) -> Result<f64> {
        if !(target_psnr.is_finite() && target_psnr > 25.0) {
            return Err(Error::InvalidParameter(format!(
                "target PSNR must be finite and above 25 dB, got {target_psnr}"
            )));
        }
        let (mut lo, mut hi) = BETA_RANGE;
        let within = |p: f64| (p - target_psnr).abs() <= CALIBRATION_TOLERANCE_DB;

        let p_hi = self.psnr_at(wm, hi)?;
        if within(p_hi) {
            return Ok(hi);
        }
        if p_hi > target_psnr {
            return Err(Error::Calibration(format!(
                "{target_psnr} dB unattainable: beta {hi} still gives {p_hi:.3} dB"
            )));
        }
        let p_lo = self.psnr_at(wm, lo)?;
        if within(p_lo) {
            return Ok(lo);
        }
        if p_lo < target_psnr {
            return Err(Error::Calibration(format!(
                "{target_psnr} dB unattainable: beta {lo} already gives {p_lo:.3} dB"
            )));
        }

        let mut closest = f64::INFINITY;
        for _ in 0..CALIBRATION_MAX_ITERS {
            let mid = (lo * hi).sqrt();
            let p = self.psnr_at(wm, mid)?;
            if within(p) {
                return Ok(mid);
            }
            if (p - target_psnr).abs() < (closest - target_psnr).abs() {
                closest = p;
            }
            if p > target_psnr {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Calibration(format!(
            "{target_psnr} dB unattainable: closest PSNR reached was {closest:.3} dB"
        )))
    }

    /// Embeds using `params.beta`, or a calibrated beta when
    /// `params.target_psnr` is set.
    pub fn embed(&self, wm: &Watermark, params: &EmbedParams) -> Result<Embedded> {
        let beta = match params.target_psnr {
            Some(t) => self.calibrate_beta(wm, t)?,
            None => params.beta,
        };
        self.embed_with_beta(wm, beta)
    }
}

pub const BETA_RANGE: (f64, f64) = (1e-3, 1e3);
pub const CALIBRATION_TOLERANCE_DB: f64 = 0.1;
pub const CALIBRATION_MAX_ITERS: usize = 60;

pub fn embed(img: &Image, wm: &Watermark, params: &EmbedParams) -> Result<Embedded> {
    Embedder::from_params(img, params)?.embed(wm, params)
}

pub fn calibrate_beta(
    img: &Image,
    wm: &Watermark,
    gamma: f64,
    alpha_min: f64,
    target_psnr: f64,
) -> Result<f64> {
    Embedder::new(img, gamma, alpha_min, &CannyParams::default())?.calibrate_beta(wm, target_psnr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Zero,
    One,
    Abstain,
}

impl Vote {
    fn compare(received: f64, original: f64) -> Self {
        if received > original {
            Vote::One
        } else if received < original {
            Vote::Zero
        } else {
            Vote::Abstain
        }
    }
}

/// Votes of the level-3 `cA`, `cH`, `cV` coefficients, in that order.
pub fn extract_block_votes(pyramid: &BlockPyramid, original: &SideBlock) -> [Vote; 3] {
    let top = pyramid.top();
    [
        Vote::compare(top.ca, original.ca),
        Vote::compare(top.ch, original.ch),
        Vote::compare(top.cv, original.cv),
    ]
}

/// Which coefficient votes count towards a bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decoder {
    /// All three level-3 coefficients of every carrying block.
    #[default]
    Majority,
    /// Only the approximation coefficient.
    ApproximationOnly,
}

/// Vote counts for one message bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub ones: u32,
    pub zeros: u32,
    pub abstain: u32,
}

impl Tally {
    fn add(&mut self, v: Vote) {
        match v {
            Vote::One => self.ones += 1,
            Vote::Zero => self.zeros += 1,
            Vote::Abstain => self.abstain += 1,
        }
    }

    /// 1 only on a strict majority; ties and empty tallies give 0.
    pub fn decide(&self) -> bool {
        self.ones > self.zeros
    }
}

pub fn majority(votes: &[Vote]) -> bool {
    let mut t = Tally::default();
    votes.iter().for_each(|&v| t.add(v));
    t.decide()
}

pub fn tally_votes(img: &Image, side: &SideInfo, decoder: Decoder) -> Result<Vec<Tally>> {
    side.validate()?;
    let grid = side.grid()?;
    if img.width() != side.width as usize || img.height() != side.height as usize {
        return Err(Error::Dimensions(format!(
            "image is {}x{} but side info describes {}x{}",
            img.width(),
            img.height(),
            side.width,
            side.height
        )));
    }
    let votes = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = pyramid_forward(&read_block(img, &grid, i))?;
            Ok(extract_block_votes(&p, &side.blocks[i]))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = side.message_length as usize;
    let mut tallies = vec![Tally::default(); n];
    for (i, v) in votes.iter().enumerate() {
        let t = &mut tallies[bit_for_block(i, n)];
        match decoder {
            Decoder::Majority => v.iter().for_each(|&x| t.add(x)),
            Decoder::ApproximationOnly => t.add(v[0]),
        }
    }
    Ok(tallies)
}

pub fn extract_with(img: &Image, side: &SideInfo, decoder: Decoder) -> Result<Vec<bool>> {
    Ok(tally_votes(img, side, decoder)?
        .iter()
        .map(Tally::decide)
        .collect())
}

pub fn extract(img: &Image, side: &SideInfo) -> Result<Vec<bool>> {
    extract_with(img, side, Decoder::Majority)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::Square;

    fn textured(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |r, c| {
            let x = (r as f64 * 0.21).sin() * 50.0 + (c as f64 * 0.13).cos() * 40.0;
            (120.0 + x + ((r * 7 + c * 3) % 19) as f64) as u8
        })
        .unwrap()
    }

    fn unit_pyramid() -> BlockPyramid {
        let mut p = pyramid_forward(&Square::zeros(8)).unwrap();
        let mut top = p.top();
        top.ca = 10.0;
        top.ch = -2.0;
        top.cv = 7.0;
        p.set_top(top);
        p
    }

    #[test]
    fn round_robin_mapping() {
        assert_eq!(bit_for_block(0, 128), 0);
        assert_eq!(bit_for_block(129, 128), 1);
        let mut hits = vec![0; 128];
        (0..4096).for_each(|b| hits[bit_for_block(b, 128)] += 1);
        assert!(hits.iter().all(|&h| h == 32));
    }

    #[test]
    fn block_shift_direction() {
        let p = unit_pyramid();
        let one = embed_block(&p, true, 4.0).unwrap().top();
        assert_eq!((one.ca, one.ch, one.cv, one.cd), (14.0, 2.0, 11.0, 0.0));
        let zero = embed_block(&p, false, 4.0).unwrap().top();
        assert_eq!((zero.ca, zero.ch, zero.cv, zero.cd), (6.0, -6.0, 3.0, 0.0));
        assert!(embed_block(&p, true, 0.0).is_err());
    }

    #[test]
    fn lower_levels_untouched() {
        let p = pyramid_forward(&Square::from_fn(8, |r, c| (r * 8 + c) as f64)).unwrap();
        let q = embed_block(&p, true, 3.0).unwrap();
        assert_eq!(p.level1(), q.level1());
        assert_eq!(p.level2(), q.level2());
        assert_eq!(p.level3().cd, q.level3().cd);
    }

    // Full synthesis route: shift the pyramid, invert it.
    #[test]
    fn footprint_matches_pyramid_inverse() {
        use crate::haar::pyramid_inverse;
        let img = textured(64, 64);
        let e = Embedder::new(&img, 0.4, 0.5, &CannyParams::default()).unwrap();
        let grid = BlockGrid::for_image(&img).unwrap();
        for i in 0..grid.len() {
            for (bit, alpha) in [(true, 3.7), (false, 0.9)] {
                let p = pyramid_forward(&read_block(&img, &grid, i)).unwrap();
                let full = pyramid_inverse(&embed_block(&p, bit, alpha).unwrap()).unwrap();
                let fast = e.marked_block(i, bit, alpha);
                for (a, b) in full.as_slice().iter().zip(&fast) {
                    assert!((a - b).abs() < 1e-9);
                }
                // each pixel moves by at most 3 * alpha / 8
                let orig = read_block(&img, &grid, i);
                for (o, b) in orig.as_slice().iter().zip(&fast) {
                    assert!((b - o).abs() <= 3.0 * alpha / 8.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn comparison_votes() {
        let side = |ca| SideBlock {
            is_complex: false,
            alpha: 1.0,
            ca,
            ch: -2.0,
            cv: 7.0,
        };
        let p = unit_pyramid();
        assert_eq!(extract_block_votes(&p, &side(6.0))[0], Vote::One);
        assert_eq!(extract_block_votes(&p, &side(14.0))[0], Vote::Zero);
        assert_eq!(
            extract_block_votes(&p, &side(10.0)),
            [Vote::Abstain, Vote::Abstain, Vote::Abstain]
        );
    }

    #[test]
    fn majority_rules() {
        use Vote::*;
        assert!(majority(&[One, One, Zero]));
        assert!(!majority(&[One, Zero]));
        assert!(!majority(&[Abstain, Abstain]));
        assert!(!majority(&[]));
        assert!(majority(&[One, Abstain, Abstain]));
    }

    #[test]
    fn unattacked_round_trip() {
        let img = textured(128, 128);
        let params = EmbedParams {
            target_psnr: None,
            ..Default::default()
        };
        for seed in 0..4 {
            let wm = Watermark::random(64, seed).unwrap();
            let out = embed(&img, &wm, &params).unwrap();
            assert_eq!(extract(&out.image, &out.side_info).unwrap(), wm.bits());
        }
    }

    #[test]
    fn constant_cover_uses_floor() {
        let img = Image::filled(64, 64, 100).unwrap();
        let wm = Watermark::random(8, 5).unwrap();
        // alpha = 4 * 0.5 = 2; the quadrant where all three basis images
        // agree moves by 3 * 2 / 8 = 0.75 and survives rounding
        let params = EmbedParams {
            target_psnr: None,
            beta: 4.0,
            ..Default::default()
        };
        let out = embed(&img, &wm, &params).unwrap();
        assert!(out
            .side_info
            .blocks
            .iter()
            .all(|b| b.alpha == 2.0 && !b.is_complex));
        assert_eq!(extract(&out.image, &out.side_info).unwrap(), wm.bits());
    }

    #[test]
    fn side_info_holds_originals() {
        let img = textured(64, 64);
        let wm = Watermark::random(16, 1).unwrap();
        let out = Embedder::new(&img, 0.4, 0.5, &CannyParams::default())
            .unwrap()
            .embed_with_beta(&wm, 1.0)
            .unwrap();
        let grid = BlockGrid::for_image(&img).unwrap();
        for (i, b) in out.side_info.blocks.iter().enumerate() {
            let top = pyramid_forward(&read_block(&img, &grid, i)).unwrap().top();
            assert_eq!((b.ca, b.ch, b.cv), (top.ca, top.ch, top.cv));
        }
        assert_eq!(out.side_info.message_length, 16);
        assert_eq!(out.side_info.beta, 1.0);
    }

    #[test]
    fn embed_input_errors() {
        let wm = Watermark::random(4, 0).unwrap();
        let params = EmbedParams {
            target_psnr: None,
            ..Default::default()
        };
        let odd = Image::filled(100, 100, 0).unwrap();
        assert!(matches!(
            embed(&odd, &wm, &params),
            Err(Error::Dimensions(_))
        ));
        let tiny = Image::filled(8, 8, 0).unwrap();
        assert!(embed(&tiny, &wm, &params).is_err());
        let small = textured(32, 32);
        let long = Watermark::random(17, 0).unwrap();
        assert!(matches!(
            embed(&small, &long, &params),
            Err(Error::InvalidParameter(_))
        ));
        let bad_gamma = EmbedParams {
            gamma: 1.5,
            ..params
        };
        assert!(embed(&small, &wm, &bad_gamma).is_err());
    }

    #[test]
    fn extract_dimension_mismatch() {
        let img = textured(64, 64);
        let wm = Watermark::random(8, 0).unwrap();
        let params = EmbedParams {
            target_psnr: None,
            ..Default::default()
        };
        let out = embed(&img, &wm, &params).unwrap();
        let other = textured(64, 72);
        assert!(matches!(
            extract(&other, &out.side_info),
            Err(Error::Dimensions(_))
        ));
        let mut broken = out.side_info.clone();
        broken.blocks.pop();
        assert!(matches!(
            extract(&out.image, &broken),
            Err(Error::CorruptSideInfo(_))
        ));
    }

    #[test]
    fn calibration_hits_target() {
        let img = textured(128, 128);
        let wm = Watermark::random(32, 9).unwrap();
        let e = Embedder::new(&img, 0.4, 0.5, &CannyParams::default()).unwrap();
        let beta = e.calibrate_beta(&wm, 42.0).unwrap();
        let p = e.psnr_at(&wm, beta).unwrap();
        assert!((p - 42.0).abs() <= 0.1, "psnr {p}");
        assert!(e.psnr_at(&wm, 2.0 * beta).unwrap() < p);
    }

    #[test]
    fn calibration_rejects_unreachable() {
        let img = textured(128, 128);
        let wm = Watermark::random(32, 9).unwrap();
        let e = Embedder::new(&img, 0.4, 0.5, &CannyParams::default()).unwrap();
        assert!(matches!(
            e.calibrate_beta(&wm, 100.0),
            Err(Error::Calibration(_))
        ));
        assert!(matches!(
            e.calibrate_beta(&wm, 20.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(e.calibrate_beta(&wm, f64::INFINITY).is_err());
    }
}
