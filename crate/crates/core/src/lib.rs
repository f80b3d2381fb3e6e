//! Spectral instability and contour dynamics for singular active scalar
//! equations.
//!
//! The crate has two halves. The spectral half builds unstable eigenpairs of
//! the operator obtained by linearizing an active scalar equation with an
//! even, unbounded constitutive law around the steady state `sin(a x2)`:
//! the eigenvalue is the positive root of a characteristic continued
//! fraction driven by a weight sequence `p_n`, and the eigenfunction is a
//! sine series whose coefficients satisfy a three-term recursion. The
//! contour half integrates the interface equation for a two-density patch
//! whose velocity costs `beta` derivatives, `0 < beta < 1`, together with
//! the norm and dissipation functionals used to monitor its energy
//! estimates.
//!
//! The crate is `no_std`-compatible (requires `alloc`). The `std` feature
//! switches scalar math to the host intrinsics, and `parallel` distributes
//! the contour quadrature over threads.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod analysis;
pub mod contfrac;
pub mod multiplier;
pub mod patch;
pub mod spectral;

mod fft;
mod grid;
mod scalar;
mod special;
