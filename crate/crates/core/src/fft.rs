//! Thin wrappers around a thread-local `rustfft` planner. All transforms are
//! unnormalized; callers apply the scaling appropriate to their convention.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT, kernel e^{-2πi jk/n}.
pub(crate) fn forward(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// In-place inverse DFT without the 1/n factor.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Signed integer frequency of FFT slot `j` on a length-`n` lattice.
#[inline]
pub(crate) fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// FFT slot for signed frequency `k`, if it is on the lattice {-n/2, ..., n/2-1}.
#[inline]
pub(crate) fn slot(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k < -half || k >= half {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((k + n as i64) as usize)
    }
}

/// Forward transforms along both axes of a row-major `rows × cols` array.
pub(crate) fn forward_2d(data: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(data, rows, cols, true);
}

pub(crate) fn inverse_2d(data: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(data, rows, cols, false);
}

fn transform_2d(data: &mut [Complex64], rows: usize, cols: usize, fwd: bool) {
    debug_assert_eq!(data.len(), rows * cols);
    for row in data.chunks_mut(cols) {
        if fwd {
            forward(row);
        } else {
            inverse(row);
        }
    }
    let mut col = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = data[r * cols + c];
        }
        if fwd {
            forward(&mut col);
        } else {
            inverse(&mut col);
        }
        for r in 0..rows {
            data[r * cols + c] = col[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_roundtrip() {
        for n in [8usize, 16, 64] {
            for j in 0..n {
                assert_eq!(slot(signed_index(j, n), n), Some(j));
            }
            assert_eq!(slot(n as i64 / 2, n), None);
        }
    }

    #[test]
    fn forward_inverse_identity() {
        let mut v: Vec<Complex64> = (0..32).map(|j| Complex64::new(j as f64, -(j as f64).sin())).collect();
        let orig = v.clone();
        forward(&mut v);
        inverse(&mut v);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a / 32.0 - b).norm() < 1e-12);
        }
    }
}
