//! Side information for semi-blind extraction and its `WMSI` file format.
//!
//! Layout, little-endian:
//!
//! ```text
//! "WMSI"  u32 version=1  u32 width  u32 height  u32 message_length
//! f64 gamma  f64 beta
//! per block, row-major: u8 is_complex, f64 alpha, f64 CA*, f64 CH*, f64 CV*
//! ```

use std::fs;
use std::path::Path;

use crate::blocks::BlockGrid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"WMSI";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 36;
pub const RECORD_LEN: usize = 33;

/// Pre-embedding level-3 coefficients and strength of one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideBlock {
    pub is_complex: bool,
    /// Effective strength used for this block (global multiplier applied).
    pub alpha: f64,
    pub ca: f64,
    pub ch: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideInfo {
    pub width: u32,
    pub height: u32,
    pub message_length: u32,
    pub gamma: f64,
    pub beta: f64,
    pub blocks: Vec<SideBlock>,
}

impl SideInfo {
    pub fn grid(&self) -> Result<BlockGrid> {
        BlockGrid::new(self.width as usize, self.height as usize)
            .map_err(|e| Error::CorruptSideInfo(e.to_string()))
    }

    /// Checks internal consistency: block count against dimensions and a
    /// usable message length.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        if self.blocks.len() != grid.len() {
            return Err(Error::CorruptSideInfo(format!(
                "{}x{} image has {} blocks but side info holds {}",
                self.width,
                self.height,
                grid.len(),
                self.blocks.len()
            )));
        }
        if self.message_length == 0 || self.message_length as usize > grid.len() {
            return Err(Error::CorruptSideInfo(format!(
                "message length {} does not fit {} blocks",
                self.message_length,
                grid.len()
            )));
        }
        Ok(())
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.blocks.len() * RECORD_LEN
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        out.extend_from_slice(&self.message_length.to_le_bytes());
        out.extend_from_slice(&self.gamma.to_le_bytes());
        out.extend_from_slice(&self.beta.to_le_bytes());
        for b in &self.blocks {
            out.push(u8::from(b.is_complex));
            for v in [b.alpha, b.ca, b.ch, b.cv] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        if data.len() < 4 || &data[..4] != MAGIC {
            return Err(Error::BadMagic { expected: "WMSI" });
        }
        if data.len() < HEADER_LEN {
            return Err(Error::Truncated {
                expected: HEADER_LEN,
                found: data.len(),
            });
        }
        let mut r = Reader { data, pos: 4 };
        let version = r.u32();
        if version != VERSION {
            return Err(Error::VersionMismatch(version));
        }
        let width = r.u32();
        let height = r.u32();
        let message_length = r.u32();
        let gamma = r.f64();
        let beta = r.f64();

        let grid = BlockGrid::new(width as usize, height as usize)
            .map_err(|e| Error::CorruptSideInfo(e.to_string()))?;
        let expected = HEADER_LEN + grid.len() * RECORD_LEN;
        if data.len() < expected {
            return Err(Error::Truncated {
                expected,
                found: data.len(),
            });
        }
        if data.len() > expected {
            return Err(Error::CorruptSideInfo(format!(
                "{} trailing bytes after {} block records",
                data.len() - expected,
                grid.len()
            )));
        }

        let mut blocks = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let flag = r.u8();
            if flag > 1 {
                return Err(Error::CorruptSideInfo(format!(
                    "bad complexity flag {flag}"
                )));
            }
            blocks.push(SideBlock {
                is_complex: flag == 1,
                alpha: r.f64(),
                ca: r.f64(),
                ch: r.f64(),
                cv: r.f64(),
            });
        }
        let side = SideInfo {
            width,
            height,
            message_length,
            gamma,
            beta,
            blocks,
        };
        side.validate()?;
        Ok(side)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

pub fn write_side_info(side: &SideInfo, path: impl AsRef<Path>) -> Result<()> {
    side.write(path)
}

pub fn read_side_info(path: impl AsRef<Path>) -> Result<SideInfo> {
    SideInfo::read(path)
}

// Bounds are checked by the caller before any read.
struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.data[self.pos..self.pos + N].try_into().unwrap();
        self.pos += N;
        out
    }

    fn u8(&mut self) -> u8 {
        self.take::<1>()[0]
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}
