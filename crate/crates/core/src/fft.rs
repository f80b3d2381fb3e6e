//! Minimal complex DFT for real signals: radix-2 when the length is a power
//! of two, table-driven direct transform otherwise. Sizes here are a few
//! thousand at most, so the quadratic fallback is acceptable.

use alloc::vec::Vec;

use crate::scalar;

/// Forward DFT of a real signal, no normalization:
/// `X_k = sum_j f_j exp(-2 pi i j k / M)`. Returns `(re, im)` pairs.
pub(crate) fn dft_real(signal: &[f64]) -> Vec<(f64, f64)> {
    let m = signal.len();
    if m == 0 {
        return Vec::new();
    }
    if m & (m - 1) == 0 {
        radix2(signal)
    } else {
        direct(signal)
    }
}

fn radix2(signal: &[f64]) -> Vec<(f64, f64)> {
    let m = signal.len();
    let mut re: Vec<f64> = Vec::with_capacity(m);
    let mut im = alloc::vec![0.0f64; m];
    // bit-reversal permutation
    let bits = m.trailing_zeros();
    for j in 0..m {
        let r = (j as u64).reverse_bits() >> (64 - bits);
        re.push(signal[r as usize]);
    }
    let mut len = 2usize;
    while len <= m {
        let ang = -2.0 * core::f64::consts::PI / len as f64;
        let (wr, wi) = (scalar::cos(ang), scalar::sin(ang));
        let mut start = 0;
        while start < m {
            let (mut cr, mut ci) = (1.0f64, 0.0f64);
            for j in 0..len / 2 {
                let a = start + j;
                let b = a + len / 2;
                let tr = re[b] * cr - im[b] * ci;
                let ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                let nr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = nr;
            }
            start += len;
        }
        len <<= 1;
    }
    re.into_iter().zip(im).collect()
}

fn direct(signal: &[f64]) -> Vec<(f64, f64)> {
    let m = signal.len();
    let mut cos_t = Vec::with_capacity(m);
    let mut sin_t = Vec::with_capacity(m);
    for j in 0..m {
        let ang = -2.0 * core::f64::consts::PI * j as f64 / m as f64;
        cos_t.push(scalar::cos(ang));
        sin_t.push(scalar::sin(ang));
    }
    (0..m)
        .map(|k| {
            let mut acc = (0.0, 0.0);
            for (j, &f) in signal.iter().enumerate() {
                let idx = (j * k) % m;
                acc.0 += f * cos_t[idx];
                acc.1 += f * sin_t[idx];
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::dft_real;

    fn reference(signal: &[f64]) -> Vec<(f64, f64)> {
        let m = signal.len();
        (0..m)
            .map(|k| {
                let mut acc = (0.0, 0.0);
                for (j, &f) in signal.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64;
                    acc.0 += f * ang.cos();
                    acc.1 += f * ang.sin();
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_reference() {
        for m in [8usize, 64, 27, 100] {
            let signal: Vec<f64> =
                (0..m).map(|j| (0.3 + j as f64).sin() + 0.1 * (j as f64).cos()).collect();
            let got = dft_real(&signal);
            let want = reference(&signal);
            let scale = (m as f64).sqrt();
            for (g, w) in got.iter().zip(&want) {
                assert!((g.0 - w.0).abs() <= 1e-10 * scale, "m={m}");
                assert!((g.1 - w.1).abs() <= 1e-10 * scale, "m={m}");
            }
        }
    }

    #[test]
    fn parseval() {
        let m = 256usize;
        let signal: Vec<f64> = (0..m).map(|j| ((j * j) as f64 * 0.01).sin()).collect();
        let spec = dft_real(&signal);
        let time: f64 = signal.iter().map(|x| x * x).sum();
        let freq: f64 = spec.iter().map(|(r, i)| r * r + i * i).sum::<f64>() / m as f64;
        assert!((time - freq).abs() <= 1e-9 * time);
    }
}
