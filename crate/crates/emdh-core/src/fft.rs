//! Discrete Fourier transforms for internal use.
//!
//! Iterative radix-2 Cooley-Tukey for power-of-two lengths, Bluestein's
//! chirp transform for arbitrary lengths (so the Hilbert transform works on
//! real-world series lengths). Forward transforms are unnormalized; the
//! inverse divides by the length.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

pub fn fft(input: &[Complex64]) -> Vec<Complex64> {
    transform(input, false)
}

pub fn ifft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    let mut out = transform(input, true);
    if n > 0 {
        let scale = 1.0 / n as f64;
        for v in &mut out {
            *v *= scale;
        }
    }
    out
}

fn transform(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    if n.is_power_of_two() {
        let mut buf = input.to_vec();
        fft_pow2_in_place(&mut buf, inverse);
        buf
    } else {
        bluestein(input, inverse)
    }
}

fn fft_pow2_in_place(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two() && n >= 2);

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }

    // One twiddle table at full resolution; each stage strides into it.
    let sign = if inverse { 1.0 } else { -1.0 };
    let half = n / 2;
    let mut table = Vec::with_capacity(half);
    for k in 0..half {
        let angle = sign * 2.0 * PI * k as f64 / n as f64;
        table.push(Complex64::new(angle.cos(), angle.sin()));
    }

    let mut len = 2usize;
    while len <= n {
        let stride = n / len;
        let half_len = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half_len {
                let w = table[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + half_len] * w;
                buf[start + k] = a + b;
                buf[start + k + half_len] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Chirp of Bluestein's algorithm: exp(sign * i * pi * j^2 / n), with the
/// quadratic phase reduced mod 2n to keep the trig argument small.
fn chirp(j: usize, n: usize, sign: f64) -> Complex64 {
    let q = ((j as u64) * (j as u64)) % (2 * n as u64);
    let angle = sign * PI * q as f64 / n as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn bluestein(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let m = (2 * n - 1).next_power_of_two();

    // a_j = x_j * c_j, padded to m; b holds the conjugate chirp wrapped for
    // circular convolution.
    let mut a = vec![Complex64::ZERO; m];
    let mut b = vec![Complex64::ZERO; m];
    for j in 0..n {
        let c = chirp(j, n, sign);
        a[j] = input[j] * c;
        let bc = c.conj();
        b[j] = bc;
        if j > 0 {
            b[m - j] = bc;
        }
    }

    fft_pow2_in_place(&mut a, false);
    fft_pow2_in_place(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    fft_pow2_in_place(&mut a, true);
    let scale = 1.0 / m as f64;

    (0..n).map(|k| a[k] * scale * chirp(k, n, sign)).collect()
}
