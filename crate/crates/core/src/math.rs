//! Floating-point helpers: phases measured in turns, compensated complex
//! summation and least-squares line fits.

use core::f64::consts::PI;
use num_complex::Complex64;

use crate::arith::gcd;

/// A phase measured in full turns, reduced to `[0, 1)`.
///
/// Exact phases keep a reduced fraction `num/den` so that integer multiples
/// never accumulate rounding error, and so that quarter turns evaluate to
/// exact `±1`, `±i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Turns {
    Exact { num: u64, den: u64 },
    Approx(f64),
}

impl Turns {
    pub const ZERO: Turns = Turns::Exact { num: 0, den: 1 };

    /// The phase `num/den` reduced mod 1. Panics if `den == 0`.
    pub fn exact(num: i128, den: u64) -> Turns {
        assert!(den > 0, "zero denominator");
        let d = den as i128;
        let r = num.rem_euclid(d) as u64;
        let g = gcd(r, den);
        Turns::Exact { num: r / g, den: den / g }
    }

    pub fn approx(x: f64) -> Turns {
        Turns::Approx(frac(x))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Turns::Exact { num, den } => num as f64 / den as f64,
            Turns::Approx(x) => x,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Turns::Exact { num, .. } => num == 0,
            Turns::Approx(x) => x == 0.0,
        }
    }

    /// `n` times the phase.
    pub fn times(self, n: u64) -> Turns {
        match self {
            Turns::Exact { num, den } => {
                let r = (num as u128 * (n % den) as u128) % den as u128;
                Turns::exact(r as i128, den)
            }
            Turns::Approx(x) => {
                // split n to keep the product accurate before reduction
                let hi = (n >> 26) as f64;
                let lo = (n & ((1 << 26) - 1)) as f64;
                Turns::approx(frac(frac(hi * x) * 67_108_864.0) + frac(lo * x))
            }
        }
    }

    /// `e^{-2πi x}` for the phase `x`. Multiples of a quarter turn are exact.
    pub fn unit(self) -> Complex64 {
        if let Turns::Exact { num, den } = self {
            if num == 0 {
                return Complex64::new(1.0, 0.0);
            }
            if 4 * num as u128 == den as u128 {
                return Complex64::new(0.0, -1.0);
            }
            if 2 * num as u128 == den as u128 {
                return Complex64::new(-1.0, 0.0);
            }
            if 4 * num as u128 == 3 * den as u128 {
                return Complex64::new(0.0, 1.0);
            }
        }
        let t = self.to_f64();
        Complex64::new(libm::cos(2.0 * PI * t), -libm::sin(2.0 * PI * t))
    }
}

impl core::ops::Neg for Turns {
    type Output = Turns;

    fn neg(self) -> Turns {
        match self {
            Turns::Exact { num, den } => Turns::exact(-(num as i128), den),
            Turns::Approx(x) => Turns::approx(-x),
        }
    }
}

impl core::ops::Add for Turns {
    type Output = Turns;

    fn add(self, other: Turns) -> Turns {
        match (self, other) {
            (Turns::Exact { num: a, den: b }, Turns::Exact { num: c, den: d }) => {
                let g = gcd(b, d);
                let l = (b / g) as u128 * d as u128;
                if l <= u64::MAX as u128 {
                    let n = a as u128 * (l / b as u128) + c as u128 * (l / d as u128);
                    let n = (n % l) as i128;
                    return Turns::exact(n, l as u64);
                }
                Turns::approx(self.to_f64() + other.to_f64())
            }
            _ => Turns::approx(self.to_f64() + other.to_f64()),
        }
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if libm::fabs(x) < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        libm::sin(x) / x
    }
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Kahan-Babuska compensated summation of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    sum: Complex64,
    comp: Complex64,
}

fn neumaier(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if libm::fabs(sum) >= libm::fabs(x) {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, comp + c)
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        let (re, cre) = neumaier(self.sum.re, self.comp.re, z.re);
        let (im, cim) = neumaier(self.sum.im, self.comp.im, z.im);
        self.sum = Complex64::new(re, im);
        self.comp = Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square of the residuals.
    pub rms: f64,
}

/// Ordinary least squares. `None` with fewer than two points or constant `x`.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        rms: libm::sqrt(ss / n as f64),
    })
}
