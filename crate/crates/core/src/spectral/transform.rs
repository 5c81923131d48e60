//! Discrete sine transform (type I) on tensor grids.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};

/// Unnormalized DST-I, `S_k = sum_{j=1}^{M} x_j sin(pi j k / (M+1))`,
/// applied along one axis of a row-major cube with side `len()`.
///
/// DST-I is its own inverse up to the factor `2 / (M+1)`.
pub trait SineTransform<T>: Send + Sync {
    fn len(&self) -> usize;

    /// Transforms every line of `data` along `axis`. `data` holds
    /// `len()^rank` values.
    fn apply_axis(&self, data: &mut [T], rank: usize, axis: usize);

    fn apply_all(&self, data: &mut [T], rank: usize) {
        for axis in 0..rank {
            self.apply_axis(data, rank, axis);
        }
    }
}

/// DST-I through a complex FFT of length `2(M+1)` on the odd extension.
pub struct RustFftSine<T: FftNum> {
    len: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: FftNum> RustFftSine<T> {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(2 * (len + 1));
        Self { len, fft }
    }
}

impl<T: FftNum + num_traits::Float> SineTransform<T> for RustFftSine<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn apply_axis(&self, data: &mut [T], rank: usize, axis: usize) {
        let m = self.len;
        assert!(axis < rank, "axis {axis} out of range for rank {rank}");
        assert_eq!(data.len(), m.pow(rank as u32), "data is not a cube of side {m}");
        let stride = m.pow((rank - 1 - axis) as u32);
        let block = stride * m;
        let ext = 2 * (m + 1);
        let zero = Complex::new(T::zero(), T::zero());
        let mut buf = vec![zero; ext];
        let mut scratch = vec![zero; self.fft.get_inplace_scratch_len()];
        let half = T::from_f64(-0.5).unwrap();

        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                buf[0] = zero;
                buf[m + 1] = zero;
                for j in 0..m {
                    let x = data[base + j * stride];
                    buf[j + 1] = Complex::new(x, T::zero());
                    buf[ext - 1 - j] = Complex::new(-x, T::zero());
                }
                self.fft.process_with_scratch(&mut buf, &mut scratch);
                for k in 0..m {
                    data[base + k * stride] = buf[k + 1].im * half;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[f64]) -> Vec<f64> {
        let m = x.len();
        (1..=m)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v * (std::f64::consts::PI * ((j + 1) * k) as f64 / (m + 1) as f64).sin()
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let x: Vec<f64> = (0..13).map(|i| ((i * 7 % 5) as f64) - 1.3).collect();
        let mut y = x.clone();
        RustFftSine::<f64>::new(13).apply_axis(&mut y, 1, 0);
        for (a, b) in y.iter().zip(naive(&x)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn involution_up_to_scale() {
        let m = 10;
        let x: Vec<f64> = (0..m * m).map(|i| (i as f64 * 0.37).sin()).collect();
        let t = RustFftSine::<f64>::new(m);
        let mut y = x.clone();
        t.apply_all(&mut y, 2);
        t.apply_all(&mut y, 2);
        let scale = (2.0 / (m as f64 + 1.0)).powi(2);
        for (a, b) in y.iter().zip(&x) {
            assert!((a * scale - b).abs() < 1e-13);
        }
    }

    #[test]
    fn second_axis_only_touches_rows() {
        let m = 4;
        let mut data = vec![0.0f64; m * m];
        // a single row (first index fixed at 2)
        for j in 0..m {
            data[2 * m + j] = (j + 1) as f64;
        }
        RustFftSine::<f64>::new(m).apply_axis(&mut data, 2, 1);
        let expect = naive(&[1.0, 2.0, 3.0, 4.0]);
        for j in 0..m {
            assert!((data[2 * m + j] - expect[j]).abs() < 1e-12);
            assert_eq!(data[j], 0.0);
        }
    }
}
