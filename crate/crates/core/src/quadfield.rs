//! Odd primes classified by the order of 2, and the invariants of the real
//! quadratic field `ℚ(√p)` that fix the exponent `β` of each class.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, isqrt, legendre, multiplicative_order, odd_primes_up_to};
use crate::error::{Error, Result};
use crate::rareclass::scaling_exponents;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeClass {
    /// `s = p - 1`.
    P1,
    /// `s = (p-1)/2`, `p ≡ 1 mod 4`.
    P21,
    /// `s = (p-1)/2`, `p ≡ 3 mod 4`.
    P23,
    Other,
}

impl PrimeClass {
    pub fn name(self) -> &'static str {
        match self {
            PrimeClass::P1 => "P1",
            PrimeClass::P21 => "P21",
            PrimeClass::P23 => "P23",
            PrimeClass::Other => "Other",
        }
    }
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn check_one_mod_four(p: u64) -> Result<()> {
    check_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::NotOneModFour(p));
    }
    Ok(())
}

/// The order `s` of 2 in `(ℤ/pℤ)*`.
pub fn order_of_two(p: u64) -> Result<u64> {
    check_prime(p)?;
    multiplicative_order(2, p).ok_or(Error::NotOddPrime(p))
}

pub fn classify_prime(p: u64) -> Result<PrimeClass> {
    let s = order_of_two(p)?;
    Ok(if s == p - 1 {
        PrimeClass::P1
    } else if 2 * s == p - 1 {
        if p % 4 == 1 {
            PrimeClass::P21
        } else {
            PrimeClass::P23
        }
    } else {
        PrimeClass::Other
    })
}

/// A unit `u + vω` of the ring of integers of `ℚ(√p)`, `ω = (1+√p)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub p: u64,
    pub u: BigInt,
    pub v: BigInt,
    /// `N(u + vω) = u² + uv - v²(p-1)/4`, either `1` or `-1`.
    pub norm: i8,
}

/// `log x` for a positive big integer.
fn log_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::NAN));
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    libm::log(top.to_f64().unwrap_or(f64::NAN)) + shift as f64 * LN_2
}

impl FundamentalUnit {
    /// `log ε`, the regulator.
    pub fn log(&self) -> f64 {
        // ε = u + v(1 + √p)/2 = v·(u/v + (1 + √p)/2)
        let ratio = if self.v.is_zero() {
            return log_big(&self.u);
        } else {
            let shift = self.u.bits().max(self.v.bits()).saturating_sub(60);
            let u: BigInt = &self.u >> shift;
            let v: BigInt = &self.v >> shift;
            u.to_f64().unwrap_or(f64::NAN) / v.to_f64().unwrap_or(f64::NAN)
        };
        log_big(&self.v) + libm::log(ratio + (1.0 + libm::sqrt(self.p as f64)) / 2.0)
    }

    pub fn value(&self) -> f64 {
        libm::exp(self.log())
    }

    pub fn norm_exact(&self) -> BigInt {
        let q = BigInt::from((self.p - 1) / 4);
        &self.u * &self.u + &self.u * &self.v - &self.v * &self.v * q
    }
}

impl fmt::Display for FundamentalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_negative() {
            write!(f, "{}-{}ω", self.u, -&self.v)
        } else {
            write!(f, "{}+{}ω", self.u, self.v)
        }
    }
}

/// The fundamental unit `ε > 1` of `ℚ(√p)` for a prime `p ≡ 1 mod 4`.
///
/// Runs the continued fraction of `ω` on the exact surd state
/// `(P + √p)/Q` and stops at the first convergent `h/k` with
/// `|h² - hk - k²(p-1)/4| = 1`; then `ε = (h - k) + kω`.
pub fn fundamental_unit(p: u64) -> Result<FundamentalUnit> {
    check_one_mod_four(p)?;
    let root = BigInt::from(isqrt(p));
    let d = BigInt::from(p);
    let quarter = BigInt::from((p - 1) / 4);
    let (mut big_p, mut big_q) = (BigInt::one(), BigInt::from(2));
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    loop {
        let a = (&big_p + &root) / &big_q;
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        let norm = &h * &h - &h * &k - &k * &k * &quarter;
        if norm.abs().is_one() {
            return Ok(FundamentalUnit {
                p,
                u: &h - &k,
                v: k,
                norm: if norm.is_positive() { 1 } else { -1 },
            });
        }
        h2 = core::mem::replace(&mut h1, h);
        k2 = core::mem::replace(&mut k1, k);
        big_p = &a * &big_q - &big_p;
        big_q = (&d - &big_p * &big_p) / &big_q;
    }
}

/// `L(1, χ_p) = -(1/√p) Σ_{a=1}^{p-1} χ_p(a) log sin(πa/p)` for the
/// quadratic character of a prime `p ≡ 1 mod 4`.
pub fn dirichlet_l1(p: u64) -> Result<f64> {
    check_one_mod_four(p)?;
    let mut acc = 0.0;
    for a in 1..p {
        acc += f64::from(legendre(a, p)) * libm::log(libm::sin(PI * a as f64 / p as f64));
    }
    Ok(-acc / libm::sqrt(p as f64))
}

/// Admissible distance of `√p L/(2 log ε)` from an integer.
pub const CLASS_NUMBER_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassNumber {
    pub h: u64,
    /// `√p L(1, χ_p)/(2 log ε)` before rounding.
    pub raw: f64,
    pub l_value: f64,
    pub unit: FundamentalUnit,
}

pub fn class_number_detail(p: u64) -> Result<ClassNumber> {
    let unit = fundamental_unit(p)?;
    let l_value = dirichlet_l1(p)?;
    let raw = libm::sqrt(p as f64) * l_value / (2.0 * unit.log());
    let h = libm::round(raw);
    if libm::fabs(raw - h) > CLASS_NUMBER_TOLERANCE || h < 1.0 {
        return Err(Error::NonIntegralClassNumber {
            p,
            raw,
            tol: CLASS_NUMBER_TOLERANCE,
        });
    }
    Ok(ClassNumber {
        h: h as u64,
        raw,
        l_value,
        unit,
    })
}

/// The class number `h` of `ℚ(√p)` from `2h log ε = √p L(1, χ_p)`.
pub fn class_number(p: u64) -> Result<u64> {
    class_number_detail(p).map(|c| c.h)
}

/// `L(1, χ_p) < log(p)/2 + 1`.
pub fn hua_bound_holds(p: u64, l_value: f64) -> bool {
    l_value < libm::log(p as f64) / 2.0 + 1.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeClassRecord {
    pub p: u64,
    pub s: u64,
    pub class: PrimeClass,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: Option<f64>,
    pub h: Option<u64>,
    pub epsilon: Option<FundamentalUnit>,
    pub regulator: Option<f64>,
}

/// Full record for an odd prime. The exponent of the class `Other` comes
/// from the explicit transfer-matrix eigenvalues.
pub fn prime_record(p: u64) -> Result<PrimeClassRecord> {
    let s = order_of_two(p)?;
    let class = classify_prime(p)?;
    let pf = p as f64;
    let sl2 = s as f64 * LN_2;
    let mut rec = PrimeClassRecord {
        p,
        s,
        class,
        beta: 0.0,
        lambda1: 0.0,
        lambda2: None,
        h: None,
        epsilon: None,
        regulator: None,
    };
    match class {
        PrimeClass::P1 => {
            rec.lambda1 = pf;
            rec.lambda2 = Some(0.0);
        }
        PrimeClass::P21 => {
            let c = class_number_detail(p)?;
            if !hua_bound_holds(p, c.l_value) {
                return Err(Error::HuaBound { p, l_value: c.l_value });
            }
            let reg = c.unit.log();
            let hf = c.h as f64;
            rec.lambda1 = libm::exp(hf * reg) * libm::sqrt(pf);
            rec.lambda2 = Some(libm::exp(-hf * reg) * libm::sqrt(pf));
            rec.h = Some(c.h);
            rec.regulator = Some(reg);
            rec.epsilon = Some(c.unit);
        }
        PrimeClass::P23 => {
            rec.lambda1 = libm::sqrt(pf);
        }
        PrimeClass::Other => {
            let e = scaling_exponents(p)?;
            rec.lambda1 = e.lambda1;
            rec.lambda2 = Some(e.lambda2);
            rec.beta = e.beta;
            return Ok(rec);
        }
    }
    rec.beta = beta_for_class(&rec)?;
    debug_assert!((rec.beta - libm::log(rec.lambda1) / sl2).abs() < 1e-9);
    Ok(rec)
}

/// `β` from the closed form of the class:
/// `log p/((p-1) log 2)` for `P1` and `P23`,
/// `(log p + 2h log ε)/((p-1) log 2)` for `P21`.
pub fn beta_for_class(rec: &PrimeClassRecord) -> Result<f64> {
    let pf = rec.p as f64;
    let denom = (pf - 1.0) * LN_2;
    match rec.class {
        PrimeClass::P1 | PrimeClass::P23 => Ok(libm::log(pf) / denom),
        PrimeClass::P21 => {
            let (h, reg) = match (rec.h, rec.regulator) {
                (Some(h), Some(r)) => (h, r),
                _ => {
                    let c = class_number_detail(rec.p)?;
                    let r = c.unit.log();
                    (c.h, r)
                }
            };
            let l_value = dirichlet_l1(rec.p)?;
            if !hua_bound_holds(rec.p, l_value) {
                return Err(Error::HuaBound { p: rec.p, l_value });
            }
            Ok((libm::log(pf) + 2.0 * h as f64 * reg) / denom)
        }
        PrimeClass::Other => Err(Error::UnsupportedClass(rec.p)),
    }
}

/// Primes with `β > 1/2`, per class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SizeIncreasingScan {
    pub limit: u64,
    pub p1: Vec<u64>,
    pub p21: Vec<u64>,
    pub p23: Vec<u64>,
    pub other: Vec<u64>,
}

/// Scans the odd primes `p ≤ limit` for `β > 1/2`.
pub fn scan_size_increasing(limit: u64) -> Result<SizeIncreasingScan> {
    if limit < 3 {
        return Err(Error::InvalidArgument("limit must be at least 3"));
    }
    let mut scan = SizeIncreasingScan {
        limit,
        ..Default::default()
    };
    for p in odd_primes_up_to(limit) {
        let rec = prime_record(p)?;
        if rec.beta > 0.5 {
            match rec.class {
                PrimeClass::P1 => scan.p1.push(p),
                PrimeClass::P21 => scan.p21.push(p),
                PrimeClass::P23 => scan.p23.push(p),
                PrimeClass::Other => scan.other.push(p),
            }
        }
    }
    Ok(scan)
}

/// Primes `p ≤ limit` of the given class.
pub fn primes_in_class(class: PrimeClass, limit: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in odd_primes_up_to(limit) {
        if classify_prime(p)? == class {
            out.push(p);
        }
    }
    Ok(out)
}

/// `"u+vω"` for a unit, used in tables.
pub fn format_unit(unit: &FundamentalUnit) -> alloc::string::String {
    format!("{unit}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(p: u64) -> u64 {
        let mut x = 2 % p;
        let mut s = 1;
        while x != 1 {
            x = x * 2 % p;
            s += 1;
        }
        s
    }

    #[test]
    fn orders() {
        assert_eq!(order_of_two(3), Ok(2));
        assert_eq!(order_of_two(7), Ok(3));
        assert_eq!(order_of_two(17), Ok(8));
        assert_eq!(order_of_two(15), Err(Error::NotOddPrime(15)));
        for p in odd_primes_up_to(2000) {
            assert_eq!(order_of_two(p).unwrap(), brute_order(p));
        }
    }

    #[test]
    fn class_lists() {
        assert_eq!(&primes_in_class(PrimeClass::P1, 40).unwrap(), &[3, 5, 11, 13, 19, 29, 37]);
        assert_eq!(&primes_in_class(PrimeClass::P21, 200).unwrap(), &[17, 41, 97, 137, 193]);
        assert_eq!(&primes_in_class(PrimeClass::P23, 105).unwrap(), &[7, 23, 47, 71, 79, 103]);
    }

    #[test]
    fn units() {
        let show = |p| format!("{}", fundamental_unit(p).unwrap());
        assert_eq!(show(17), "3+2ω");
        assert_eq!(show(41), "27+10ω");
        assert_eq!(show(97), "5035+1138ω");
        assert_eq!(show(137), "1595+298ω");
        let u5 = fundamental_unit(5).unwrap();
        assert_eq!(format!("{u5}"), "0+1ω");
        assert_eq!(u5.norm, -1);
        assert!((fundamental_unit(17).unwrap().value() - (4.0 + libm::sqrt(17.0))).abs() < 1e-12);
        assert_eq!(fundamental_unit(7), Err(Error::NotOneModFour(7)));
    }

    #[test]
    fn unit_norms_exact() {
        for p in odd_primes_up_to(1000).into_iter().filter(|p| p % 4 == 1) {
            let u = fundamental_unit(p).unwrap();
            assert_eq!(u.norm_exact(), BigInt::from(u.norm));
            assert!(u.value() > 1.0);
        }
    }

    #[test]
    fn class_numbers() {
        for p in [5u64, 13, 17, 41, 137] {
            assert_eq!(class_number(p), Ok(1));
        }
        // ℚ(√229) has class number 3
        assert_eq!(class_number(229), Ok(3));
    }

    #[test]
    fn betas() {
        let b = |p| prime_record(p).unwrap().beta;
        assert!((b(17) - 0.6332).abs() < 1e-3);
        assert!((b(97) - 0.3490).abs() < 1e-3);
        assert!((b(7) - libm::log(7.0) / (6.0 * LN_2)).abs() < 1e-12);
        let other = prime_record(31).unwrap();
        assert_eq!(other.class, PrimeClass::Other);
        assert_eq!(beta_for_class(&other), Err(Error::UnsupportedClass(31)));
    }

    #[test]
    fn scan_matches_propositions() {
        let s = scan_size_increasing(1000).unwrap();
        assert_eq!(s.p1, [3, 5]);
        assert_eq!(s.p21, [17]);
        assert!(s.p23.is_empty());
        assert_eq!(scan_size_increasing(200).unwrap().p21, [17]);
    }
}
