//! f64 math that resolves to host intrinsics under `std` and to `libm`
//! otherwise. Hot loops in the contour quadrature go through these, so the
//! `std` build keeps hardware sqrt.

#![allow(dead_code)]

macro_rules! unary {
    ($($name:ident => $libm:ident),* $(,)?) => {
        $(
            #[inline(always)]
            pub(crate) fn $name(x: f64) -> f64 {
                #[cfg(any(test, feature = "std"))]
                {
                    x.$name()
                }
                #[cfg(not(any(test, feature = "std")))]
                {
                    libm::$libm(x)
                }
            }
        )*
    };
}

unary! {
    sqrt => sqrt,
    exp => exp,
    ln => log,
    sin => sin,
    cos => cos,
}

#[inline(always)]
pub(crate) fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

#[inline(always)]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    #[cfg(any(test, feature = "std"))]
    {
        x.powf(y)
    }
    #[cfg(not(any(test, feature = "std")))]
    {
        libm::pow(x, y)
    }
}

#[inline(always)]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    sqrt(x * x + y * y)
}

/// `t^(-(2+beta)/2)` for `t > 0`, the kernel power of the contour integrand.
///
/// For the dyadic exponents used throughout (`beta` a multiple of 1/4) this
/// is a square-root chain, which is substantially faster than `powf` on the
/// quadratic-cost inner loop.
#[inline(always)]
pub(crate) fn kernel_pow(t: f64, beta: f64) -> f64 {
    // t^(-1 - beta/2)
    if beta == 0.5 {
        // t^(1/4)
        1.0 / (t * sqrt(sqrt(t)))
    } else if beta == 0.25 {
        1.0 / (t * sqrt(sqrt(sqrt(t))))
    } else if beta == 0.75 {
        let q = sqrt(sqrt(t));
        1.0 / (t * q * sqrt(q))
    } else if beta == 1.0 {
        1.0 / (t * sqrt(t))
    } else if beta == 0.125 {
        1.0 / (t * sqrt(sqrt(sqrt(sqrt(t)))))
    } else {
        powf(t, -1.0 - 0.5 * beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_pow_matches_powf() {
        for &beta in &[0.125, 0.25, 0.5, 0.75, 1.0, 0.3, 0.61] {
            for &t in &[1e-8, 0.37, 1.0, 42.0, 9.1e6] {
                let got = kernel_pow(t, beta);
                let want = powf(t, -1.0 - 0.5 * beta);
                assert!(
                    (got - want).abs() <= 1e-13 * want.abs(),
                    "beta={beta} t={t}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn abs_via_bits() {
        assert_eq!(abs(-3.5), 3.5);
        assert_eq!(abs(3.5), 3.5);
        assert_eq!(abs(-0.0), 0.0);
        assert!(abs(f64::NEG_INFINITY).is_infinite());
    }
}
