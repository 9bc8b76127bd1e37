//! Discrete Fourier analysis on the unit circle.
//!
//! Conventions, fixed once and consumed everywhere:
//!
//! * grids are uniform, `theta_j = 2*pi*j/m`, `m` a power of two;
//! * `analysis` returns `c_k = (1/m) * sum_j s_j exp(-i k theta_j)`, so for
//!   samples of an analytic function the bin `k` approximates the Taylor
//!   coefficient of `z^k` (up to aliasing of the coefficient tail);
//! * `synthesis` is the exact inverse, `s_j = sum_k c_k exp(+i k theta_j)`.

use crate::C64;
use rustfft::FftPlanner;

/// Returns true if `m` is a power of two (and at least 1).
pub fn is_power_of_two(m: usize) -> bool {
    m != 0 && (m & (m - 1)) == 0
}

/// Grid angle `theta_j = 2*pi*j/m`.
pub fn grid_angle(j: usize, m: usize) -> f64 {
    2.0 * std::f64::consts::PI * (j as f64) / (m as f64)
}

/// Forward transform with 1/m normalization: bin k holds the k-th Fourier
/// coefficient of the sampled function.
pub fn analysis(samples: &[C64]) -> Vec<C64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Inverse transform without normalization: evaluates the trigonometric
/// polynomial with the given bin coefficients on the grid.
pub fn synthesis(bins: &[C64]) -> Vec<C64> {
    let m = bins.len();
    let mut buf = bins.to_vec();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf
}

/// Evaluates the truncated power series with the given coefficients on the
/// m-point grid. Coefficients beyond m are an error in the caller.
pub fn evaluate_on_grid(coeffs: &[C64], m: usize) -> Vec<C64> {
    assert!(coeffs.len() <= m, "coefficient count exceeds grid size");
    let mut bins = vec![C64::new(0.0, 0.0); m];
    bins[..coeffs.len()].copy_from_slice(coeffs);
    synthesis(&bins)
}
