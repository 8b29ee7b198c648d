//! Band-limited sub-sample translation of sampled envelopes.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::{Real, C};

/// Shifts sequences of a fixed length by arbitrary (fractional) numbers of
/// samples through a zero-padded FFT. The padding keeps content that moves
/// towards one edge of the window from wrapping around to the other.
pub struct Shifter<T: Real> {
    len: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    buffer: Vec<C<T>>,
    scratch: Vec<C<T>>,
}

impl<T: Real> Shifter<T> {
    pub fn new(len: usize) -> Self {
        let fft_len = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            len,
            fft_len,
            forward,
            inverse,
            buffer: vec![Complex::default(); fft_len],
            scratch: vec![Complex::default(); scratch_len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Replaces `data[n]` by the band-limited interpolant evaluated at
    /// `n + advance`. A negative `advance` delays the content.
    pub fn advance(&mut self, data: &mut [C<T>], advance: T) {
        assert_eq!(data.len(), self.len, "shifter built for a different length");
        if advance == T::zero() {
            return;
        }
        let zero = Complex::default();
        self.buffer[..self.len].copy_from_slice(data);
        self.buffer[self.len..].fill(zero);
        self.forward
            .process_with_scratch(&mut self.buffer, &mut self.scratch);

        let n = self.fft_len;
        let two_pi_over_n = T::lit(2.0) * T::PI() / T::from_usize_lossy(n);
        for (k, bin) in self.buffer.iter_mut().enumerate() {
            if 2 * k == n {
                *bin = bin.scale((T::PI() * advance).cos());
                continue;
            }
            let signed = if 2 * k < n {
                T::from_usize_lossy(k)
            } else {
                -T::from_usize_lossy(n - k)
            };
            *bin = *bin * Complex::from_polar(T::one(), two_pi_over_n * signed * advance);
        }

        self.inverse
            .process_with_scratch(&mut self.buffer, &mut self.scratch);
        let norm = T::one() / T::from_usize_lossy(n);
        for (out, value) in data.iter_mut().zip(&self.buffer[..self.len]) {
            *out = value.scale(norm);
        }
    }
}
