//! Diffraction spectrum of the Thue-Morse quasicrystal.
//!
//! The crate computes the pieces needed to locate and classify the spectrum
//! of the weighted Dirac comb `Σ_{n≥1} δ_{f(n)}` supported on the vertices
//! `f(n)` of the two-tile Thue-Morse tiling with tile lengths `a > b > 0`:
//!
//! * [`tmcore`]: the ±1 Thue-Morse sequence, the vertex positions and the
//!   canonical averaging sequence, all in exact rational arithmetic.
//! * [`diffract`]: finite-size diffraction intensities, Riesz products,
//!   the `c_m`/`κ`/`κ_η` Fourier coefficients and empirical scaling
//!   exponents.
//! * [`rareclass`]: `p`-rarefied Thue-Morse sums, the transfer matrix
//!   `M = (S_{p,i-j}(2^s))`, its spectrum and the fractal profiles.
//! * [`quadfield`]: classification of odd primes by the order of 2 and
//!   the real-quadratic-field invariants that drive the exponents.
//! * [`spectrum`]: Bragg / singular-continuous verdicts, rarefaction
//!   domains, growth regimes and Marcinkiewicz classes.
//!
//! The crate is `no_std` (with `alloc`) when built without the default
//! `std` feature. Transcendental functions go through `libm` so results are
//! identical with and without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod diffract;
pub mod error;
pub mod math;
pub mod poly;
pub mod quadfield;
pub mod rareclass;
pub mod spectrum;
pub mod tmcore;

pub use error::{Error, Result};
pub use math::Turns;
pub use num_complex::Complex64;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
