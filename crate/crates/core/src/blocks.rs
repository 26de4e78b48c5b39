//! Row-major tiling of an image into non-overlapping 8×8 blocks.

use crate::error::{Error, Result};
use crate::haar::{Square, BLOCK};
use crate::image_io::Image;

/// Grid of 8×8 blocks covering an image exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGrid {
    pub cols: usize,
    pub rows: usize,
}

impl BlockGrid {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0
            || height == 0
            || !width.is_multiple_of(BLOCK)
            || !height.is_multiple_of(BLOCK)
        {
            return Err(Error::Dimensions(format!(
                "dimensions must be multiples of {BLOCK}, got {width}x{height}"
            )));
        }
        Ok(Self {
            cols: width / BLOCK,
            rows: height / BLOCK,
        })
    }

    pub fn for_image(img: &Image) -> Result<Self> {
        Self::new(img.width(), img.height())
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Top-left pixel `(row, col)` of block `index`.
    pub fn origin(&self, index: usize) -> (usize, usize) {
        ((index / self.cols) * BLOCK, (index % self.cols) * BLOCK)
    }
}

pub fn read_block(img: &Image, grid: &BlockGrid, index: usize) -> Square {
    let (r0, c0) = grid.origin(index);
    Square::from_fn(BLOCK, |r, c| f64::from(img.get(r0 + r, c0 + c)))
}
