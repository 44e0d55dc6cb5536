//! Approximant diffraction intensities, Riesz products, the Fourier
//! coefficients `c_m(k)`, `κ(k)`, `κ_η(k)` and scaling exponents.
//!
//! Wave vectors are carried in the normalized form `q = k(a+b)/(4π)`, so
//! that the phase of the vertex `f(n)` is `q·n` turns for even `n` and
//! `q·n + q·δ·η_{n-1}` turns for odd `n`, with `δ = (a-b)/(a+b)`. Rational
//! `q` then gives exact phases.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math::{cis, line_fit, ComplexSum, Turns};
use crate::tmcore::{tm_sign, to_f64, QuasicrystalParams, Weights};
use crate::Rational;

/// A wave vector, stored as `q = k(a+b)/(4π)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Wave {
    Exact(Rational),
    Approx(f64),
}

impl Wave {
    /// The wave vector with physical value `k`.
    pub fn from_k(k: f64, params: &QuasicrystalParams) -> Wave {
        Wave::Approx(k * params.sum_f64() / (4.0 * PI))
    }

    pub fn q_f64(&self) -> f64 {
        match self {
            Wave::Exact(q) => to_f64(q),
            Wave::Approx(q) => *q,
        }
    }

    /// `k = 4πq/(a+b)`.
    pub fn k(&self, params: &QuasicrystalParams) -> f64 {
        match self {
            Wave::Exact(q) => 4.0 * PI * to_f64(&(q / (params.a() + params.b()))),
            Wave::Approx(q) => 4.0 * PI * q / params.sum_f64(),
        }
    }

    /// `q` mod 1.
    pub fn turns(&self) -> Turns {
        match self {
            Wave::Exact(q) => rational_turns(q),
            Wave::Approx(q) => Turns::approx(*q),
        }
    }

    /// `q·δ` mod 1, the phase shift carried by odd vertices.
    pub fn offset_turns(&self, params: &QuasicrystalParams) -> Turns {
        match self {
            Wave::Exact(q) => rational_turns(&(q * params.delta())),
            Wave::Approx(q) => Turns::approx(q * to_f64(&params.delta())),
        }
    }
}

pub(crate) fn rational_turns(q: &Rational) -> Turns {
    match q.denom().to_u64() {
        Some(den) => {
            let num = q.numer() % q.denom();
            Turns::exact(num.to_i128().unwrap_or(0), den)
        }
        None => Turns::approx(to_f64(q)),
    }
}

/// Phase of `e^{-ik f(n)}` in turns.
pub(crate) fn vertex_turns(n: u64, q: Turns, offset: Turns) -> Turns {
    let base = q.times(n);
    if n.is_multiple_of(2) {
        base
    } else if tm_sign(n - 1) > 0 {
        base + offset
    } else {
        base + -offset
    }
}

/// `Σ_{n=1}^{l} ω(n) e^{-ik f(n)}` by direct compensated summation.
pub fn fourier_sum<W: Weights + ?Sized>(
    weights: &W,
    l: u64,
    wave: &Wave,
    params: &QuasicrystalParams,
) -> Complex64 {
    let q = wave.turns();
    let offset = wave.offset_turns(params);
    let mut acc = ComplexSum::new();
    for n in 1..=l {
        let w = weights.weight(n);
        if w.is_zero() {
            continue;
        }
        acc.add(w * vertex_turns(n, q, offset).unit());
    }
    acc.value()
}

/// `ν_{U,l}(k) = (1/l)|Σ_{n=1}^{l} ω(n) e^{-ik f(n)}|²`, by direct summation.
pub fn approximant_density<W: Weights + ?Sized>(
    l: u64,
    wave: &Wave,
    params: &QuasicrystalParams,
    weights: &W,
) -> f64 {
    fourier_sum(weights, l, wave, params).norm_sqr() / l as f64
}

/// `Σ_{j<l} e^{-2πijx}` in `O(log l)`.
pub fn geometric_sum(l: u64, x: Turns) -> Complex64 {
    if l == 0 {
        return Complex64::zero();
    }
    let mut s = (Complex64::new(1.0, 0.0) + x.unit()) * geometric_sum(l / 2, x.times(2));
    if l % 2 == 1 {
        s += x.times(l - 1).unit();
    }
    s
}

/// `Σ_{j<l} η_j e^{-2πijx}` in `O(log l)`, using `η_{2m} = η_m`,
/// `η_{2m+1} = -η_m`.
pub fn eta_sum(l: u64, x: Turns) -> Complex64 {
    if l == 0 {
        return Complex64::zero();
    }
    let mut s = (Complex64::new(1.0, 0.0) - x.unit()) * eta_sum(l / 2, x.times(2));
    if l % 2 == 1 {
        s += f64::from(tm_sign(l - 1)) * x.times(l - 1).unit();
    }
    s
}

/// `Σ_{n=1}^{l} e^{-ik f(n)}` for the unit comb, in `O(log l)`.
///
/// Even vertices contribute a geometric series; odd vertices `2m+1` carry
/// the extra phase `e^{-2πi qδ η_m}`, which splits into a geometric part
/// and a Thue-Morse part.
pub fn approximant_sum_fast(l: u64, wave: &Wave, params: &QuasicrystalParams) -> Complex64 {
    let q = wave.turns();
    let q2 = q.times(2);
    let u = wave.offset_turns(params).unit();
    let (cos_phi, sin_phi) = (u.re, -u.im);
    let evens = geometric_sum(l / 2 + 1, q2) - 1.0;
    let odd_count = l.div_ceil(2);
    let odds = q.unit()
        * (cos_phi * geometric_sum(odd_count, q2)
            - Complex64::new(0.0, sin_phi) * eta_sum(odd_count, q2));
    evens + odds
}

/// `ν_{U,l}(k)` for the unit comb, in `O(log l)`.
pub fn approximant_density_fast(l: u64, wave: &Wave, params: &QuasicrystalParams) -> f64 {
    approximant_sum_fast(l, wave, params).norm_sqr() / l as f64
}

/// `2^{2n} ∏_{j<n} sin²(π 2^j k)`, equal to `|Σ_{j<2^n} η_j e^{-2πijk}|²`.
pub fn riesz_product(n: u32, k: f64) -> f64 {
    let mut x = Turns::approx(k);
    let mut acc = 1.0;
    for _ in 0..n {
        let s = libm::sin(PI * x.to_f64());
        acc *= 4.0 * s * s;
        x = x.times(2);
    }
    acc
}

/// `c_m(k) = (-1)^m e^{-ikα₂/2} sinc(α₂k/2 + mπ)`, the Fourier coefficients
/// of `x ↦ e^{-ikα₂{x}}`.
pub fn coefficient_cm(m: i64, k: f64, params: &QuasicrystalParams) -> Complex64 {
    coefficient_from_theta(m, k * params.alpha2_f64())
}

fn coefficient_from_theta(m: i64, theta: f64) -> Complex64 {
    let x = theta / 2.0 + m as f64 * PI;
    let phase = cis(-theta / 2.0);
    if libm::fabs(x) < 1e-3 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return phase * sign * crate::math::sinc(x);
    }
    // (-1)^m sin(θ/2 + mπ) = sin(θ/2)
    phase * (libm::sin(theta / 2.0) / x)
}

/// Closed forms `κ(k) = ((1+e^{-iθ})/2 + e^{-iθ/2})/2` and
/// `κ_η(k) = ((1+e^{-iθ})/2 - e^{-iθ/2})/2`, `θ = kα₂`, written as
/// `(1 ± e^{-iθ/2})²/4`.
pub fn kappa_closed(k: f64, params: &QuasicrystalParams) -> (Complex64, Complex64) {
    let h = cis(-k * params.alpha2_f64() / 2.0);
    let one = Complex64::new(1.0, 0.0);
    ((one + h) * (one + h) / 4.0, (one - h) * (one - h) / 4.0)
}

/// Closed-form `κ_η` for an exact wave vector. Here `θ/2` is `2qδ` turns,
/// so the zero locus `2qδ ∈ ℤ` (that is `k(a-b) ∈ 2πℤ`) gives an exact zero.
pub fn kappa_eta_exact(wave: &Wave, params: &QuasicrystalParams) -> Complex64 {
    let h = wave.offset_turns(params).times(2).unit();
    let one = Complex64::new(1.0, 0.0);
    (one - h) * (one - h) / 4.0
}

/// Tolerance for agreement of the partial sums at `M` and `2M`.
pub const KAPPA_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaPair {
    /// `Σ_{m even, |m| ≤ M} c_m(k)`.
    pub kappa_partial: Complex64,
    /// `Σ_{m odd, |m| ≤ M} c_m(k)`.
    pub kappa_eta_partial: Complex64,
    pub kappa_closed: Complex64,
    pub kappa_eta_closed: Complex64,
    /// Partial sums at `M` and `2M` agree within [`KAPPA_TOLERANCE`].
    pub converged: bool,
}

fn partial_sums(theta: f64, m_max: u64) -> (Complex64, Complex64) {
    let mut even = ComplexSum::new();
    let mut odd = ComplexSum::new();
    for m in (1..=m_max as i64).rev() {
        let pair = coefficient_from_theta(m, theta) + coefficient_from_theta(-m, theta);
        if m % 2 == 0 {
            even.add(pair);
        } else {
            odd.add(pair);
        }
    }
    even.add(coefficient_from_theta(0, theta));
    (even.value(), odd.value())
}

/// Symmetric partial sums of `κ` and `κ_η` over `|m| ≤ m_max`, with the
/// closed forms alongside.
pub fn kappa_pair(k: f64, params: &QuasicrystalParams, m_max: u64) -> Result<KappaPair> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be positive"));
    }
    let theta = k * params.alpha2_f64();
    let (ke, ko) = partial_sums(theta, m_max);
    let (ke2, ko2) = partial_sums(theta, 2 * m_max);
    let (kc, kec) = kappa_closed(k, params);
    let drift = (ke2 - ke).norm().max((ko2 - ko).norm());
    Ok(KappaPair {
        kappa_partial: ke,
        kappa_eta_partial: ko,
        kappa_closed: kc,
        kappa_eta_closed: kec,
        converged: drift <= KAPPA_TOLERANCE,
    })
}

/// `q = t/d` in lowest terms is a Bragg position iff `d` is a power of two.
pub fn is_bragg(q: &Rational) -> bool {
    let d = q.denom();
    let bits = d.bits();
    bits > 0 && d.trailing_zeros() == Some(bits - 1)
}

/// The exponent `α_l(k)` defined by `l^{α_l} = (1/l)|Σ_{j<l} η_j e^{-2πijk}|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaValue {
    Finite(f64),
    /// The sum vanishes and the exponent would be `-∞`.
    Extinct,
}

impl AlphaValue {
    pub fn value(self) -> Option<f64> {
        match self {
            AlphaValue::Finite(a) => Some(a),
            AlphaValue::Extinct => None,
        }
    }
}

/// Sums with modulus below this are treated as exact zeros.
pub const EXTINCTION_THRESHOLD: f64 = 1e-9;

pub fn scaling_exponent_alpha(l: u64, k: Turns) -> Result<AlphaValue> {
    if l < 2 {
        return Err(Error::InvalidArgument("l must be at least 2"));
    }
    let s = eta_sum(l, k).norm();
    if s < EXTINCTION_THRESHOLD {
        return Ok(AlphaValue::Extinct);
    }
    let lf = l as f64;
    Ok(AlphaValue::Finite(libm::log(s * s / lf) / libm::log(lf)))
}

/// Least-squares slope of `log ν_{U,l}` against `log l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub alpha: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub sizes: Vec<u64>,
}

pub fn fitted_alpha(wave: &Wave, params: &QuasicrystalParams, sizes: &[u64]) -> Result<ExponentFit> {
    if sizes.len() < 4 {
        return Err(Error::TooFewSizes {
            needed: 4,
            got: sizes.len(),
        });
    }
    let mut xs = Vec::with_capacity(sizes.len());
    let mut ys = Vec::with_capacity(sizes.len());
    for &l in sizes {
        if l == 0 {
            return Err(Error::InvalidArgument("sizes must be positive"));
        }
        let s = approximant_sum_fast(l, wave, params).norm();
        if s < EXTINCTION_THRESHOLD {
            return Err(Error::Extinct(l));
        }
        let lf = l as f64;
        xs.push(libm::log(lf));
        ys.push(libm::log(s * s / lf));
    }
    let fit = line_fit(&xs, &ys).ok_or(Error::InvalidArgument("sizes must not all be equal"))?;
    Ok(ExponentFit {
        alpha: fit.slope,
        intercept: fit.intercept,
        residual_rms: fit.rms,
        sizes: sizes.to_vec(),
    })
}

/// Sizes `l = p·N + 1` with `N` running over a quarter-octave geometric
/// grid from `2^min_exp` up to `p·N + 1 ≤ 2^max_exp`.
pub fn rarefied_sizes(p: u64, min_exp: u32, max_exp: u32) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let limit = 1u128 << max_exp.min(63);
    let mut e = 4 * min_exp;
    loop {
        let n = libm::floor(libm::exp2(e as f64 / 4.0)) as u128;
        let l = p as u128 * n + 1;
        if l > limit {
            break;
        }
        if out.last() != Some(&(l as u64)) {
            out.push(l as u64);
        }
        e += 1;
    }
    out
}

/// Sizes `l = 2^j` for `min_exp ≤ j ≤ max_exp`.
pub fn dyadic_sizes(min_exp: u32, max_exp: u32) -> Vec<u64> {
    (min_exp..=max_exp.min(63)).map(|j| 1u64 << j).collect()
}

/// `ν_{U,2^n}(k)/2^n`, the Bragg intensity proxy along `l = 2^n`.
pub fn bragg_ratio(n: u32, wave: &Wave, params: &QuasicrystalParams) -> f64 {
    let l = 1u64 << n.min(63);
    approximant_density_fast(l, wave, params) / l as f64
}
