//! The Thue-Morse sequence, the point set `Λ_{a,b}` and averaging sequences.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::Rational;

/// Number of ones in the binary expansion of `n`.
pub fn digit_sum(n: u64) -> u32 {
    n.count_ones()
}

/// `η_n = (-1)^{s(n)}`.
pub fn tm_sign(n: u64) -> i8 {
    if n.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A prefix `η_0, …, η_{len-1}` of the Thue-Morse sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPrefix {
    values: Vec<i8>,
}

impl SignedPrefix {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }
}

/// Builds the prefix by iterating the substitution `1 → 1 1̄`, i.e. by
/// repeatedly appending the negation of what is already there.
pub fn tm_prefix(length: usize) -> SignedPrefix {
    let mut values = Vec::with_capacity(length.next_power_of_two());
    if length > 0 {
        values.push(1i8);
    }
    while values.len() < length {
        let neg: Vec<i8> = values.iter().map(|v| -v).collect();
        values.extend(neg);
    }
    values.truncate(length);
    SignedPrefix { values }
}

/// Parses `"num/den"` or an integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `"num/den"` (or just `"num"` for integers).
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Tile lengths `a > b > 0` of the Thue-Morse quasicrystal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasicrystalParams {
    a: Rational,
    b: Rational,
}

impl QuasicrystalParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !(b.is_positive() && b < a) {
            return Err(Error::InvalidTiles {
                a: format_rational(&a),
                b: format_rational(&b),
            });
        }
        Ok(Self { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(parse_rational(a)?, parse_rational(b)?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `α₁ = (a+b)/2`.
    pub fn alpha1(&self) -> Rational {
        (&self.a + &self.b) / Rational::from_integer(2.into())
    }

    /// `α₀ = -(a-b)/2`.
    pub fn alpha0(&self) -> Rational {
        (&self.b - &self.a) / Rational::from_integer(2.into())
    }

    /// `α₂ = 2(a-b)`.
    pub fn alpha2(&self) -> Rational {
        (&self.a - &self.b) * Rational::from_integer(2.into())
    }

    /// `δ = (a-b)/(a+b)`, the relative tile asymmetry.
    pub fn delta(&self) -> Rational {
        (&self.a - &self.b) / (&self.a + &self.b)
    }

    pub fn sum_f64(&self) -> f64 {
        to_f64(&(&self.a + &self.b))
    }

    pub fn alpha2_f64(&self) -> f64 {
        to_f64(&self.alpha2())
    }

    /// The coprime integers `(A, B)` proportional to `(a, b)`.
    pub fn integer_tiles(&self) -> (BigInt, BigInt) {
        let l = self.a.denom().lcm(self.b.denom());
        let a = self.a.numer() * (&l / self.a.denom());
        let b = self.b.numer() * (&l / self.b.denom());
        let g = a.gcd(&b);
        (a / &g, b / &g)
    }

    /// `g_{a,b}` of the integer tiles obtained by clearing denominators.
    pub fn gab(&self) -> Result<u64> {
        let (a, b) = self.integer_tiles();
        let a = a.to_u64().ok_or(Error::Overflow("tile numerator"))?;
        let b = b.to_u64().ok_or(Error::Overflow("tile numerator"))?;
        gab(a, b)
    }
}

impl fmt::Display for QuasicrystalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", format_rational(&self.a), format_rational(&self.b))
    }
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `gcd(a-b, a+b)` for coprime `0 < b < a`.
pub fn gab(a: u64, b: u64) -> Result<u64> {
    if b == 0 || b >= a {
        return Err(Error::InvalidTiles {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime { a, b });
    }
    let sum = a.checked_add(b).ok_or(Error::Overflow("a + b"))?;
    Ok(gcd(a - b, sum))
}

/// The vertex `f(n)`.
pub fn point(n: i64, params: &QuasicrystalParams) -> Rational {
    if n < 0 {
        return -point_unsigned(n.unsigned_abs(), params);
    }
    point_unsigned(n as u64, params)
}

fn point_unsigned(n: u64, params: &QuasicrystalParams) -> Rational {
    let base = params.alpha1() * Rational::from_integer(n.into());
    if n.is_multiple_of(2) {
        base
    } else if tm_sign(n - 1) > 0 {
        base - params.alpha0()
    } else {
        base + params.alpha0()
    }
}

/// The vertices `f(n)` for `n` in `n_min..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub params: QuasicrystalParams,
    pub n_min: i64,
    pub n_max: i64,
    pub coordinates: Vec<Rational>,
}

impl PointSet {
    pub fn new(params: &QuasicrystalParams, n_min: i64, n_max: i64) -> Self {
        let coordinates = if n_min <= n_max {
            (n_min..=n_max).map(|n| point(n, params)).collect()
        } else {
            Vec::new()
        };
        Self {
            params: params.clone(),
            n_min,
            n_max,
            coordinates,
        }
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }
}

/// `U_l = [0, f(l)] ∩ (Λ ∖ {0})`, i.e. the points `f(1), …, f(l)`.
pub fn canonical_approximant(l: u64, params: &QuasicrystalParams) -> Result<PointSet> {
    if l == 0 {
        return Err(Error::InvalidArgument("approximant size must be positive"));
    }
    let l = i64::try_from(l).map_err(|_| Error::Overflow("approximant size"))?;
    Ok(PointSet::new(params, 1, l))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AveragingKind {
    Canonical,
    PowerOfTwo,
    Custom,
}

/// An increasing family of sizes `l` selecting the subsequence `U_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingSequence {
    kind: AveragingKind,
    lengths: Vec<u64>,
}

impl AveragingSequence {
    /// `l = 1, 2, …, n`.
    pub fn canonical(n: u64) -> Self {
        Self {
            kind: AveragingKind::Canonical,
            lengths: (1..=n).collect(),
        }
    }

    /// `l = 2^j` for `j ≤ max_exp`.
    pub fn power_of_two(max_exp: u32) -> Self {
        Self {
            kind: AveragingKind::PowerOfTwo,
            lengths: (0..=max_exp.min(63)).map(|j| 1u64 << j).collect(),
        }
    }

    pub fn custom(lengths: Vec<u64>) -> Result<Self> {
        if lengths.first() == Some(&0) || lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("lengths must be positive and strictly increasing"));
        }
        Ok(Self {
            kind: AveragingKind::Custom,
            lengths,
        })
    }

    pub fn kind(&self) -> AveragingKind {
        self.kind
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// Weights are supported on `n ≥ 1`, the canonical comb.
    pub fn weight_support(&self) -> &'static str {
        "n >= 1"
    }
}

/// Bounded complex weights `ω(n)` attached to the vertices `f(n)`.
pub trait Weights {
    fn weight(&self, n: u64) -> Complex64;
}

/// `ω(n) = 1` for `n ≥ 1`, `0` otherwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitWeights;

impl Weights for UnitWeights {
    fn weight(&self, n: u64) -> Complex64 {
        if n >= 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Weights `ω(n) = values[n-1]` for `1 ≤ n ≤ values.len()`, zero elsewhere.
#[derive(Clone, Copy, Debug)]
pub struct SliceWeights<'a>(pub &'a [Complex64]);

impl Weights for SliceWeights<'_> {
    fn weight(&self, n: u64) -> Complex64 {
        match n.checked_sub(1).and_then(|i| self.0.get(i as usize)) {
            Some(&w) => w,
            None => Complex64::new(0.0, 0.0),
        }
    }
}

/// Weights given by a closure.
pub struct FnWeights<F>(pub F);

impl<F: Fn(u64) -> Complex64> Weights for FnWeights<F> {
    fn weight(&self, n: u64) -> Complex64 {
        (self.0)(n)
    }
}

/// The rational `num/den`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
