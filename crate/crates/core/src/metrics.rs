//! PSNR between images and BER between bit streams.

use crate::error::{Error, Result};
use crate::image_io::Image;

pub const PEAK: f64 = 255.0;

pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::Dimensions(format!(
            "cannot compare {}x{} with {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = f64::from(i32::from(x) - i32::from(y));
            d * d
        })
        .sum();
    Ok(sum / a.pixels().len() as f64)
}

/// Peak signal-to-noise ratio in dB. Identical images give
/// `f64::INFINITY`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

pub fn bit_errors(sent: &[bool], received: &[bool]) -> Result<usize> {
    if sent.len() != received.len() {
        return Err(Error::LengthMismatch {
            left: sent.len(),
            right: received.len(),
        });
    }
    Ok(sent.iter().zip(received).filter(|(a, b)| a != b).count())
}

/// Bit-error rate in percent.
pub fn ber(sent: &[bool], received: &[bool]) -> Result<f64> {
    let wrong = bit_errors(sent, received)?;
    if sent.is_empty() {
        return Err(Error::InvalidParameter("BER of an empty stream".into()));
    }
    Ok(100.0 * wrong as f64 / sent.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub psnr: f64,
    pub mse: f64,
    pub ber_percent: f64,
    pub bits_total: usize,
    pub bits_wrong: usize,
}

impl QualityReport {
    pub fn new(
        reference: &Image,
        distorted: &Image,
        sent: &[bool],
        received: &[bool],
    ) -> Result<Self> {
        let mse = mse(reference, distorted)?;
        Ok(Self {
            psnr: psnr_from_mse(mse),
            mse,
            ber_percent: ber(sent, received)?,
            bits_total: sent.len(),
            bits_wrong: bit_errors(sent, received)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psnr_closed_forms() {
        let a = Image::filled(16, 16, 100).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);

        let b = Image::filled(16, 16, 101).unwrap();
        assert!((psnr(&a, &b).unwrap() - 48.1308).abs() < 1e-3);

        let black = Image::filled(4, 4, 0).unwrap();
        let white = Image::filled(4, 4, 255).unwrap();
        assert_eq!(psnr(&black, &white).unwrap(), 0.0);
    }

    #[test]
    fn psnr_dimension_mismatch() {
        let a = Image::filled(8, 8, 0).unwrap();
        let b = Image::filled(8, 16, 0).unwrap();
        assert!(psnr(&a, &b).is_err());
    }

    #[test]
    fn ber_cases() {
        let x: Vec<bool> = (0..128).map(|i| i % 3 == 0).collect();
        assert_eq!(ber(&x, &x).unwrap(), 0.0);

        let sent = vec![false; 256];
        let mut got = sent.clone();
        got[5] = true;
        got[200] = true;
        assert_eq!(ber(&sent, &got).unwrap(), 0.78125);

        let flipped: Vec<bool> = x.iter().map(|b| !b).collect();
        assert_eq!(ber(&x, &flipped).unwrap(), 100.0);
        assert!(ber(&x, &x[1..]).is_err());
    }

    #[test]
    fn report_fields_agree() {
        let a = Image::filled(8, 8, 10).unwrap();
        let b = Image::filled(8, 8, 12).unwrap();
        let r = QualityReport::new(&a, &b, &[true, false], &[true, true]).unwrap();
        assert_eq!(r.mse, 4.0);
        assert_eq!(r.bits_wrong, 1);
        assert_eq!(r.ber_percent, 50.0);
    }
}
