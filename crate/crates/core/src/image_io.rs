//! 8-bit grayscale images and binary PGM (P5) I/O.
//!
//! Only `maxval = 255` files are accepted. Written files always carry the
//! header `P5\n<width> <height>\n255\n` so repeated writes are byte-identical.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major 8-bit grayscale pixel grid.
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image where every pixel has the same value.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn to_real(&self) -> RealImage {
        to_real(self)
    }
}

/// Row-major real-valued intensities. Values are not range-limited.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl RealImage {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_dims(width, height, values.len())?;
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn to_image(&self) -> Image {
        from_real(self)
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Dimensions(format!(
            "image must be non-empty, got {width}x{height}"
        )));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::Dimensions(format!(
            "{width}x{height} image needs {} samples, got {len}",
            width.saturating_mul(height)
        )));
    }
    Ok(())
}

pub fn to_real(img: &Image) -> RealImage {
    RealImage {
        width: img.width,
        height: img.height,
        values: img.pixels.iter().map(|&p| f64::from(p)).collect(),
    }
}

/// Rounds half away from zero, then clamps to `[0, 255]`. NaN maps to 0.
#[inline]
pub fn quantize(value: f64) -> u8 {
    let v = value.round();
    if v.is_nan() {
        0
    } else {
        v.clamp(0.0, 255.0) as u8
    }
}

pub fn from_real(real: &RealImage) -> Image {
    Image {
        width: real.width,
        height: real.height,
        pixels: real.values.iter().map(|&v| quantize(v)).collect(),
    }
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&fs::read(path)?)
}

pub fn write_pgm(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

/// Parses a binary PGM. Comments (`#` to end of line) may appear between
/// header fields.
pub fn decode_pgm(data: &[u8]) -> Result<Image> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(Error::BadMagic { expected: "P5" });
    }
    let mut cursor = HeaderCursor { data, pos: 2 };
    let width = cursor.next_number("width")?;
    let height = cursor.next_number("height")?;
    let maxval = cursor.next_number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates maxval from the raster
    match data.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    let (width, height) = (width as usize, height as usize);
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    let expected = width * height;
    let raster = &data[cursor.pos..];
    if raster.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: raster.len(),
        });
    }
    Image::new(width, height, raster[..expected].to_vec())
}

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_number(&mut self, field: &str) -> Result<u32> {
        let before = self.pos;
        self.skip_whitespace_and_comments();
        if self.pos == before {
            return Err(Error::MalformedHeader(format!(
                "expected whitespace before {field}"
            )));
        }
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("missing {field}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("{field} out of range")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decodes_tiny_file() {
        let bytes = b"P5\n2 2\n255\n\x00\xff\x80\x40";
        let img = decode_pgm(bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0, 255, 128, 64]);
    }

    #[test]
    fn comments_between_fields() {
        let plain = decode_pgm(b"P5\n2 2\n255\n\x00\xff\x80\x40").unwrap();
        let commented =
            decode_pgm(b"P5\n# a comment\n2 # trailing\n2\n# another\n255\n\x00\xff\x80\x40")
                .unwrap();
        assert_eq!(plain, commented);
    }

    #[test]
    fn rejects_wide_maxval() {
        let err = decode_pgm(b"P5\n1 1\n65535\n\x00\x00").unwrap_err();
        assert!(matches!(err, Error::UnsupportedMaxval(65535)));
        assert!(err.to_string().contains("unsupported maxval"));
    }

    #[test]
    fn distinct_parse_errors() {
        assert!(matches!(
            decode_pgm(b"P2\n1 1\n255\n0").unwrap_err(),
            Error::BadMagic { .. }
        ));
        assert!(matches!(
            decode_pgm(b"P5\n1 x\n255\n\x00").unwrap_err(),
            Error::MalformedHeader(_)
        ));
        assert!(matches!(
            decode_pgm(b"P5\n2 2\n255\n\x00\x01\x02").unwrap_err(),
            Error::Truncated {
                expected: 4,
                found: 3
            }
        ));
    }

    #[test]
    fn header_format_and_size() {
        let img = Image::filled(512, 512, 0).unwrap();
        let bytes = encode_pgm(&img);
        assert!(bytes.starts_with(b"P5\n512 512\n255\n"));
        assert_eq!(bytes.len(), "P5\n512 512\n255\n".len() + 262_144);
        assert!(bytes[15..].iter().all(|&b| b == 0));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.pgm");
        let img = Image::from_fn(24, 16, |r, c| (r * 7 + c * 13) as u8).unwrap();
        write_pgm(&img, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), img);
    }

    #[test]
    fn real_conversion_rules() {
        let img = Image::new(1, 1, vec![200]).unwrap();
        let real = to_real(&img);
        assert_eq!(real.values(), &[200.0]);
        assert_eq!(from_real(&real).pixels(), &[200]);

        let real = RealImage::new(5, 1, vec![255.7, 10.5, -3.0, 9.49, 0.5]).unwrap();
        assert_eq!(from_real(&real).pixels(), &[255, 11, 0, 9, 1]);
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(Image::new(0, 4, vec![]).is_err());
        assert!(Image::new(2, 2, vec![0; 3]).is_err());
    }

    fn arb_image() -> impl Strategy<Value = Image> {
        (1usize..40, 1usize..40).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| Image::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn pgm_round_trip_is_bit_exact(img in arb_image()) {
            prop_assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img);
        }

        #[test]
        fn real_round_trip_is_identity(img in arb_image()) {
            prop_assert_eq!(from_real(&to_real(&img)), img);
        }

        #[test]
        fn from_real_stays_in_range(vals in proptest::collection::vec(-1e4f64..1e4, 1..64)) {
            let n = vals.len();
            let img = from_real(&RealImage::new(n, 1, vals.clone()).unwrap());
            for (p, v) in img.pixels().iter().zip(&vals) {
                prop_assert_eq!(*p, v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
}
