use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Ordered watermark bits, optionally tagged with the seed that produced
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Watermark {
    bits: Vec<bool>,
    seed: Option<u64>,
}

impl Watermark {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter(
                "watermark needs at least one bit".into(),
            ));
        }
        Ok(Self { bits, seed: None })
    }

    /// Uniform random message drawn from a ChaCha8 stream.
    pub fn random(len: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut wm = Self::from_bits((0..len).map(|_| rng.random::<bool>()).collect())?;
        wm.seed = Some(seed);
        Ok(wm)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// One `0`/`1` per line.
    pub fn to_text(&self) -> String {
        bits_to_text(&self.bits)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        Self::from_bits(parse_bits(text)?)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_text(&fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub fn bits_to_text(bits: &[bool]) -> String {
    let mut s = String::with_capacity(bits.len() * 2);
    for &b in bits {
        s.push(if b { '1' } else { '0' });
        s.push('\n');
    }
    s
}

pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| match l {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Error::InvalidParameter(format!(
                "message line {}: expected 0 or 1, got `{other}`",
                i + 1
            ))),
        })
        .collect()
}
