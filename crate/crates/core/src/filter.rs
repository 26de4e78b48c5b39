//! Separable convolution with replicate (edge-clamp) padding.

/// Normalised 1-D Gaussian of side `2 * ceil(3 * sigma) + 1`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as usize;
    let two_var = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let x = i as f64 - radius as f64;
            (-x * x / two_var).exp()
        })
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Convolves row-major `values` with `kernel` horizontally then vertically.
pub fn convolve_separable(values: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let radius = kernel.len() / 2;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut tmp = vec![0.0; values.len()];
    for r in 0..height {
        let row = &values[r * width..(r + 1) * width];
        for c in 0..width {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                acc += w * row[clamp(c as isize + k as isize - radius as isize, width)];
            }
            tmp[r * width + c] = acc;
        }
    }

    let mut out = vec![0.0; values.len()];
    for r in 0..height {
        for c in 0..width {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                let rr = clamp(r as isize + k as isize - radius as isize, height);
                acc += w * tmp[rr * width + c];
            }
            out[r * width + c] = acc;
        }
    }
    out
}
