//! Uniform-grid finite differences and interpolation shared by the contour
//! and analysis modules. Signals are zero-extended past the window, which is
//! consistent with the compact-support setting.

use alloc::vec::Vec;

#[inline(always)]
fn at(f: &[f64], i: isize) -> f64 {
    if i < 0 || i as usize >= f.len() {
        0.0
    } else {
        f[i as usize]
    }
}

/// Fourth-order central first derivative.
pub(crate) fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let inv = 1.0 / (12.0 * h);
    (0..f.len() as isize)
        .map(|i| (-at(f, i + 2) + 8.0 * at(f, i + 1) - 8.0 * at(f, i - 1) + at(f, i - 2)) * inv)
        .collect()
}

/// Fourth-order central second derivative.
pub(crate) fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let inv = 1.0 / (12.0 * h * h);
    (0..f.len() as isize)
        .map(|i| {
            (-at(f, i + 2) + 16.0 * at(f, i + 1) - 30.0 * at(f, i)
                + 16.0 * at(f, i - 1)
                - at(f, i - 2))
                * inv
        })
        .collect()
}

/// Fourth derivative as the second difference applied twice, matching the
/// contour discretization so the energy identities stay internally
/// consistent.
pub(crate) fn d4(f: &[f64], h: f64) -> Vec<f64> {
    d2(&d2(f, h), h)
}

/// Cubic Lagrange interpolation on the uniform grid starting at `x0` with
/// spacing `h`; zero-extends outside.
pub(crate) fn cubic_interp(x0: f64, h: f64, f: &[f64], x: f64) -> f64 {
    let n = f.len();
    if n < 4 {
        return 0.0;
    }
    let s = (x - x0) / h;
    if s < -1.0 || s > n as f64 {
        return 0.0;
    }
    let j = (s.floor() as isize).clamp(1, n as isize - 3);
    let t = s - j as f64;
    let fm1 = at(f, j - 1);
    let f0 = at(f, j);
    let f1 = at(f, j + 1);
    let f2 = at(f, j + 2);
    -t * (t - 1.0) * (t - 2.0) / 6.0 * fm1 + (t * t - 1.0) * (t - 2.0) / 2.0 * f0
        - t * (t + 1.0) * (t - 2.0) / 2.0 * f1
        + t * (t * t - 1.0) / 6.0 * f2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_orders_on_gaussian() {
        // interior accuracy is 4th order; check against exact derivatives
        let n = 512usize;
        let l = 8.0;
        let h = 2.0 * l / n as f64;
        let f: Vec<f64> = (0..=n).map(|i| (-(-l + i as f64 * h).powi(2)).exp()).collect();
        let d1_num = d1(&f, h);
        let d2_num = d2(&f, h);
        let mut worst1 = 0.0f64;
        let mut worst2 = 0.0f64;
        for i in 8..=n - 8 {
            let x: f64 = -l + i as f64 * h;
            let e = (-x * x).exp();
            worst1 = worst1.max((d1_num[i] - (-2.0 * x * e)).abs());
            worst2 = worst2.max((d2_num[i] - ((4.0 * x * x - 2.0) * e)).abs());
        }
        assert!(worst1 < 1e-5, "{worst1}");
        assert!(worst2 < 1e-4, "{worst2}");
    }

    #[test]
    fn fourth_derivative_consistency() {
        let n = 1024usize;
        let l = 8.0;
        let h = 2.0 * l / n as f64;
        let f: Vec<f64> = (0..=n).map(|i| (-(-l + i as f64 * h).powi(2)).exp()).collect();
        let d4_num = d4(&f, h);
        let mut worst = 0.0f64;
        for i in 16..=n - 16 {
            let x: f64 = -l + i as f64 * h;
            let e = (-x * x).exp();
            let exact = (16.0 * x.powi(4) - 48.0 * x * x + 12.0) * e;
            worst = worst.max((d4_num[i] - exact).abs());
        }
        assert!(worst < 2e-3, "{worst}");
    }

    #[test]
    fn cubic_interp_reproduces_cubics() {
        let h = 0.25;
        let x0 = -2.0;
        let poly = |x: f64| 1.0 + 2.0 * x - 0.5 * x * x + 0.125 * x * x * x;
        let f: Vec<f64> = (0..32).map(|i| poly(x0 + i as f64 * h)).collect();
        for i in 0..200 {
            let x = -1.2 + i as f64 * 0.017;
            let got = cubic_interp(x0, h, &f, x);
            assert!((got - poly(x)).abs() < 1e-12, "x={x}: {got} vs {}", poly(x));
        }
    }
}
