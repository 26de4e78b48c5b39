//! Block complexity: Canny edge density for the complex/smooth split, and
//! the spread of the first-level approximation band that drives the
//! per-block strength factor `alpha = max(sigma^gamma, alpha_min)`.

use std::collections::VecDeque;

use crate::blocks::{read_block, BlockGrid};
use crate::error::{Error, Result};
use crate::filter::{convolve_separable, gaussian_kernel};
use crate::haar::{dwt2_level, Square, BLOCK};
use crate::image_io::Image;

/// Canny detector settings. Thresholds are fractions of the image's
/// maximum gradient magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    pub gaussian_sigma: f64,
    pub high_fraction: f64,
    pub low_fraction: f64,
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            gaussian_sigma: 1.4,
            high_fraction: 0.2,
            low_fraction: 0.08,
        }
    }
}

impl CannyParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.gaussian_sigma > 0.0
            && self.gaussian_sigma.is_finite()
            && 0.0 < self.low_fraction
            && self.low_fraction < self.high_fraction
            && self.high_fraction < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "canny needs sigma > 0 and 0 < low < high < 1, got {self:?}"
            )))
        }
    }

    pub fn kernel_side(&self) -> usize {
        2 * (3.0 * self.gaussian_sigma).ceil() as usize + 1
    }
}

/// Binary edge map, row-major, same shape as its source image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    edges: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, edges: Vec<bool>) -> Result<Self> {
        if edges.len() != width * height {
            return Err(Error::Dimensions(format!(
                "{width}x{height} edge map needs {} flags, got {}",
                width * height,
                edges.len()
            )));
        }
        Ok(Self {
            width,
            height,
            edges,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn edges(&self) -> &[bool] {
        &self.edges
    }

    pub fn is_edge(&self, row: usize, col: usize) -> bool {
        self.edges[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }
}

/// Smoothed-image Sobel gradients `(gx, gy)`, row-major.
pub fn sobel_gradients(img: &Image, sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (img.width(), img.height());
    let real: Vec<f64> = img.pixels().iter().map(|&p| f64::from(p)).collect();
    let s = convolve_separable(&real, w, h, &gaussian_kernel(sigma));
    let at = |r: isize, c: isize| {
        let r = r.clamp(0, h as isize - 1) as usize;
        let c = c.clamp(0, w as isize - 1) as usize;
        s[r * w + c]
    };
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for r in 0..h as isize {
        for c in 0..w as isize {
            let i = r as usize * w + c as usize;
            gx[i] = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
            gy[i] = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
        }
    }
    (gx, gy)
}

/// Canny edge detection: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression over four direction bins, double threshold and 8-connected
/// hysteresis. The one-pixel image border is never marked.
pub fn canny(img: &Image, params: &CannyParams) -> Result<EdgeMap> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let side = params.kernel_side();
    if w < side || h < side {
        return Err(Error::Dimensions(format!(
            "{w}x{h} image is smaller than the {side}x{side} smoothing kernel"
        )));
    }

    let (gx, gy) = sobel_gradients(img, params.gaussian_sigma);
    let mag: Vec<f64> = gx.iter().zip(&gy).map(|(x, y)| x.hypot(*y)).collect();
    let max = mag.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return EdgeMap::new(w, h, vec![false; w * h]);
    }

    let mut thin = vec![0.0; w * h];
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let i = r * w + c;
            let m = mag[i];
            if m <= 0.0 {
                continue;
            }
            let mut angle = gy[i].atan2(gx[i]).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            // neighbour offsets along the gradient (rows grow downwards)
            let (a, b) = if !(22.5..157.5).contains(&angle) {
                (i - 1, i + 1)
            } else if angle < 67.5 {
                (i - w - 1, i + w + 1)
            } else if angle < 112.5 {
                (i - w, i + w)
            } else {
                (i - w + 1, i + w - 1)
            };
            if m >= mag[a] && m >= mag[b] {
                thin[i] = m;
            }
        }
    }

    let high = params.high_fraction * max;
    let low = params.low_fraction * max;
    let mut edges = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m >= high {
            edges[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / w, i % w);
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                let (rr, cc) = (r as isize + dr, c as isize + dc);
                if rr < 0 || cc < 0 || rr >= h as isize || cc >= w as isize {
                    continue;
                }
                let j = rr as usize * w + cc as usize;
                if !edges[j] && thin[j] >= low && thin[j] > 0.0 {
                    edges[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    EdgeMap::new(w, h, edges)
}

/// Edge pixels per 8×8 block, row-major block order.
pub fn block_edge_counts(edges: &EdgeMap) -> Result<Vec<u32>> {
    let grid = BlockGrid::new(edges.width, edges.height)?;
    let mut counts = vec![0u32; grid.len()];
    for r in 0..edges.height {
        for c in 0..edges.width {
            if edges.is_edge(r, c) {
                counts[(r / BLOCK) * grid.cols + c / BLOCK] += 1;
            }
        }
    }
    Ok(counts)
}

/// A block is complex when its edge count is strictly above the mean.
pub fn classify_complex(counts: &[u32]) -> Result<Vec<bool>> {
    if counts.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot classify an empty block list".into(),
        ));
    }
    // count > sum/n  <=>  count*n > sum, kept in integers so ties are exact
    let n = counts.len() as u64;
    let sum: u64 = counts.iter().map(|&c| u64::from(c)).sum();
    Ok(counts.iter().map(|&c| u64::from(c) * n > sum).collect())
}

/// Population standard deviation of the 16 level-1 approximation
/// coefficients of an 8×8 block.
pub fn sigma_a(block: &Square) -> Result<f64> {
    if block.side() != BLOCK {
        return Err(Error::Dimensions(format!(
            "expected an {BLOCK}x{BLOCK} block, got side {}",
            block.side()
        )));
    }
    let ca = dwt2_level(block)?.ca;
    let vals = ca.as_slice();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

pub fn strength_factor(sigma: f64, gamma: f64, alpha_min: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    if !(alpha_min > 0.0 && alpha_min.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha_min must be positive, got {alpha_min}"
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be finite and non-negative, got {sigma}"
        )));
    }
    Ok(sigma.powf(gamma).max(alpha_min))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockComplexity {
    pub block_index: usize,
    pub edge_count: u32,
    pub is_complex: bool,
    pub sigma_a: f64,
    /// Strength before any global multiplier.
    pub alpha: f64,
}

/// Runs both complexity measures over every block of `img`.
pub fn analyze_blocks(
    img: &Image,
    canny_params: &CannyParams,
    gamma: f64,
    alpha_min: f64,
) -> Result<Vec<BlockComplexity>> {
    let grid = BlockGrid::for_image(img)?;
    let counts = block_edge_counts(&canny(img, canny_params)?)?;
    let complex = classify_complex(&counts)?;
    (0..grid.len())
        .map(|i| {
            let sigma = sigma_a(&read_block(img, &grid, i))?;
            Ok(BlockComplexity {
                block_index: i,
                edge_count: counts[i],
                is_complex: complex[i],
                sigma_a: sigma,
                alpha: strength_factor(sigma, gamma, alpha_min)?,
            })
        })
        .collect()
}
