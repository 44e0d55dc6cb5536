//! Exact characteristic polynomials and root moduli.
//!
//! Polynomials are coefficient vectors in ascending degree order.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// `det(xI - A)` for a square integer matrix given row-major, by the
/// Faddeev-LeVerrier recursion. Every division is exact and is checked.
pub fn charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (quot, rem) = (-trace).div_rem(&BigInt::from(k));
        assert!(rem.is_zero(), "inexact Faddeev-LeVerrier step");
        coeffs[n - k] = quot;
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

type QPoly = Vec<Rational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> QPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn divrem(num: &[Rational], den: &[Rational]) -> (QPoly, QPoly) {
    let den = trim(den.to_vec());
    let mut rem = trim(num.to_vec());
    assert!(!den.is_empty(), "division by zero polynomial");
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead = den.last().unwrap().clone();
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let c = rem.last().unwrap() / &lead;
        for (i, d) in den.iter().enumerate() {
            rem[i + shift] -= &c * d;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn monic(p: QPoly) -> QPoly {
    match p.last().cloned() {
        Some(lead) => p.into_iter().map(|c| c / &lead).collect(),
        None => p,
    }
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> QPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = monic(r);
    }
    monic(a)
}

fn sub(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect(),
    )
}

/// Yun's square-free decomposition over ℚ: pairs `(factor, multiplicity)`
/// with monic square-free factors whose product (with multiplicities)
/// is the monic version of `f`.
pub fn squarefree_decomposition(f: &[BigInt]) -> Vec<(Vec<Rational>, u32)> {
    let f: QPoly = monic(trim(f.iter().cloned().map(Rational::from_integer).collect()));
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = derivative(&f);
    let a0 = poly_gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = poly_gcd(&b, &d);
        let b_next = divrem(&b, &a).0;
        let c_next = divrem(&d, &a).0;
        if a.len() > 1 {
            out.push((a, i));
        }
        d = sub(&c_next, &derivative(&b_next));
        b = b_next;
        i += 1;
    }
    out
}

/// All complex roots of a polynomial with `f64` coefficients, by the
/// Aberth-Ehrlich iteration.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<f64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    // Fujiwara bound
    let bound = (1..=n)
        .map(|k| libm::pow(libm::fabs(c[n - k]), 1.0 / k as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let radius = (bound / 2.0).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(radius * libm::cos(t), radius * libm::sin(t))
        })
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::zero();
        for i in (0..n).rev() {
            dp = dp * x + p;
            p = p * x + c[i];
        }
        (p, dp)
    };
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                worst = worst.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

/// Moduli of the roots of an integer polynomial, repeated by multiplicity
/// and sorted in decreasing order. Multiple roots are separated exactly
/// before any floating-point work.
pub fn root_moduli(f: &[BigInt]) -> Vec<f64> {
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(f) {
        let c: Vec<f64> = factor.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
        for r in roots(&c) {
            for _ in 0..mult {
                out.push(r.norm());
            }
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `true` if the polynomial has integer coefficients with a negative
/// leading coefficient.
pub fn is_negative_leading(f: &[BigInt]) -> bool {
    f.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charpoly_of_small_matrix() {
        // [[2, 1], [1, 2]]: x² - 4x + 3
        let a = vec![ints(&[2, 1]), ints(&[1, 2])];
        assert_eq!(charpoly(&a), ints(&[3, -4, 1]));
        let id = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        assert_eq!(charpoly(&id), ints(&[-1, 3, -3, 1]));
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // x·(x-3)²·(x²+7)³
        let mut f = ints(&[1]);
        let mul = |a: &[BigInt], b: &[i64]| {
            let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        f = mul(&f, &[0, 1]);
        for _ in 0..2 {
            f = mul(&f, &[-3, 1]);
        }
        for _ in 0..3 {
            f = mul(&f, &[7, 0, 1]);
        }
        let dec = squarefree_decomposition(&f);
        let degs: Vec<(usize, u32)> = dec.iter().map(|(p, m)| (p.len() - 1, *m)).collect();
        assert_eq!(degs, [(1, 1), (1, 2), (2, 3)]);
        let m = root_moduli(&f);
        assert_eq!(m.len(), 9);
        let s7 = libm::sqrt(7.0);
        let expect = [3.0, 3.0, s7, s7, s7, s7, s7, s7, 0.0];
        for (a, b) in m.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{m:?}");
        }
    }

    #[test]
    fn aberth_finds_roots_of_unity() {
        let mut c = vec![0.0; 8];
        c[0] = -1.0;
        c[7] = 1.0;
        let r = roots(&c);
        assert_eq!(r.len(), 7);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(7) - 1.0).norm() < 1e-10);
        }
    }
}
