//! `p`-rarefied Thue-Morse sums `S_{p,i}(n) = Σ_{j<n, j≡i (p)} η_j`, the
//! transfer matrix `M` with `S(2^s n) = M S(n)`, its spectrum, and the
//! fractal profiles `ψ_{p,j}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::arith::{gcd, is_prime, multiplicative_order};
use crate::error::{Error, Result};
use crate::math::{frac, line_fit, Turns};
use crate::poly;
use crate::tmcore::tm_sign;

fn check_modulus(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidModulus(p));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `Σ_{m<n} η_m`, which is `η_{n-1}` for odd `n` and `0` for even `n`.
pub fn prefix_sum(n: u64) -> i64 {
    if n % 2 == 1 {
        i64::from(tm_sign(n - 1))
    } else {
        0
    }
}

/// The vector `S(n) = (S_{p,0}(n), …, S_{p,p-1}(n))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RarefiedVector {
    p: u64,
    n: u64,
    entries: Vec<i64>,
}

impl RarefiedVector {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: u64) -> i64 {
        self.entries[i as usize]
    }

    pub fn column_sum(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.entries.iter().map(|&x| BigInt::from(x)).collect()
    }
}

/// Digit recursion on the polynomial `P_n(x) = Σ_{j<n} η_j x^{j mod p}`:
/// `P_{2m} = (1-x)P_m(x²)` and `P_{2m+1} = P_{2m} + η_m x^{2m mod p}`,
/// driven by the bits of `n` from the top, followed by `shift` zero bits.
fn digit_recursion<T>(p: u64, n: u64, shift: u32) -> Vec<T>
where
    T: Clone + Zero + core::ops::AddAssign + core::ops::SubAssign + From<i64>,
{
    let pu = p as usize;
    let mut v: Vec<T> = vec![T::zero(); pu];
    let mut scratch: Vec<T> = vec![T::zero(); pu];
    let mut m: u64 = 0;
    let mut pos: u64 = 0; // m mod p
    let bits = 64 - n.leading_zeros();
    let total = bits + shift;
    for step in 0..total {
        let bit = if step < bits {
            (n >> (bits - 1 - step)) & 1
        } else {
            0
        };
        for x in scratch.iter_mut() {
            *x = T::zero();
        }
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let j = (2 * i) % pu;
            scratch[j] += x.clone();
            scratch[(j + 1) % pu] -= x.clone();
        }
        core::mem::swap(&mut v, &mut scratch);
        let sign = if step < bits { tm_sign(m) } else { 1 };
        pos = (2 * pos) % p;
        if bit == 1 {
            v[pos as usize] += T::from(i64::from(sign));
            pos = (pos + 1) % p;
        }
        if step < bits {
            m = 2 * m + bit;
        }
    }
    v
}

/// `S(n)` in `O(p log n)` operations.
pub fn rarefied_vector(p: u64, n: u64) -> Result<RarefiedVector> {
    check_modulus(p)?;
    Ok(RarefiedVector {
        p,
        n,
        entries: digit_recursion::<i64>(p, n, 0),
    })
}

/// `S(n·2^shift)` with arbitrary-precision entries.
pub fn rarefied_vector_shifted(p: u64, n: u64, shift: u32) -> Result<Vec<BigInt>> {
    check_modulus(p)?;
    Ok(digit_recursion::<BigInt>(p, n, shift))
}

/// `S_{p,i}(n)` by digit recursion.
pub fn rarefied_sum(p: u64, i: u64, n: u64) -> Result<i64> {
    check_modulus(p)?;
    if i >= p {
        return Err(Error::ResidueOutOfRange { p, i });
    }
    Ok(rarefied_vector(p, n)?.get(i))
}

/// `S_{p,i}(n)` by direct summation over `j ≡ i (mod p)`, `j < n`.
pub fn rarefied_sum_direct(p: u64, i: u64, n: u64) -> Result<i64> {
    check_modulus(p)?;
    if i >= p {
        return Err(Error::ResidueOutOfRange { p, i });
    }
    let mut s = 0i64;
    let mut j = i;
    while j < n {
        s += i64::from(tm_sign(j));
        j += p;
    }
    Ok(s)
}

/// The order of 2 modulo an odd `p`.
pub fn order_of_two_mod(p: u64) -> Result<u32> {
    check_modulus(p)?;
    multiplicative_order(2, p)
        .map(|s| s as u32)
        .ok_or(Error::InvalidModulus(p))
}

/// The circulant matrix `M_{ij} = S_{p,(i-j) mod p}(2^s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    p: u64,
    s: u32,
    column: Vec<BigInt>,
}

impl TransferMatrix {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// First column `S(2^s)`.
    pub fn column(&self) -> &[BigInt] {
        &self.column
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        let p = self.p as usize;
        &self.column[(i + p - j % p) % p]
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let p = self.p as usize;
        (0..p)
            .map(|i| (0..p).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let p = self.p as usize;
        let mut out = vec![BigInt::zero(); p];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in self.column.iter().enumerate() {
                if !c.is_zero() {
                    out[(j + k) % p] += c * x;
                }
            }
        }
        out
    }

    /// Checks `S(2^s n) = M S(n)` exactly for every `n` in `ns`.
    pub fn verify<I: IntoIterator<Item = u64>>(&self, ns: I) -> Result<()> {
        for n in ns {
            let lhs = rarefied_vector_shifted(self.p, n, self.s)?;
            let rhs = self.apply(&rarefied_vector(self.p, n)?.to_big());
            if lhs != rhs {
                return Err(Error::TransferMismatch { p: self.p, n });
            }
        }
        Ok(())
    }

    /// `det(xI - M)` with exact integer coefficients, ascending.
    pub fn charpoly(&self) -> Vec<BigInt> {
        poly::charpoly(&self.to_dense())
    }
}

/// Builds `M` for an odd prime `p` from `S(2^s) = ∏_{i<s} (1 - x^{2^i})`
/// mod `x^p - 1`, then checks the transfer recursion for `n ≤ 50`.
pub fn transfer_matrix(p: u64) -> Result<TransferMatrix> {
    check_prime(p)?;
    let s = order_of_two_mod(p)?;
    let pu = p as usize;
    let mut c = vec![BigInt::zero(); pu];
    c[0] = BigInt::from(1);
    let mut shift = 1usize;
    for _ in 0..s {
        let mut next = c.clone();
        for (j, x) in c.iter().enumerate() {
            next[(j + shift) % pu] -= x;
        }
        c = next;
        shift = 2 * shift % pu;
    }
    let m = TransferMatrix { p, s, column: c };
    m.verify(1..=50)?;
    Ok(m)
}

/// Cosets of the subgroup `⟨2⟩` in `(ℤ/pℤ)*`, each listed from its least
/// element by repeated doubling.
pub fn cosets_of_two(p: u64) -> Result<Vec<Vec<u64>>> {
    check_modulus(p)?;
    let mut seen = vec![false; p as usize];
    let mut out = Vec::new();
    for a in 1..p {
        if seen[a as usize] || gcd(a, p) != 1 {
            continue;
        }
        let mut coset = Vec::new();
        let mut j = a;
        while !seen[j as usize] {
            seen[j as usize] = true;
            coset.push(j);
            j = 2 * j % p;
        }
        out.push(coset);
    }
    Ok(out)
}

/// An eigenvalue `ξ_a = (-2i)^s ∏_{j∈a⟨2⟩} sin(2πj/p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetEigenvalue {
    pub representative: u64,
    pub coset: Vec<u64>,
    /// `log |ξ_a|`.
    pub log_modulus: f64,
    /// `ξ_a/|ξ_a|`, one of `±1`, `±i`.
    pub phase: Complex64,
}

impl CosetEigenvalue {
    pub fn modulus(&self) -> f64 {
        libm::exp(self.log_modulus)
    }

    pub fn value(&self) -> Complex64 {
        self.phase * self.modulus()
    }
}

/// One `ξ_a` per coset of `⟨2⟩`, sorted by decreasing modulus.
pub fn eigenvalues_explicit(p: u64) -> Result<Vec<CosetEigenvalue>> {
    check_prime(p)?;
    let s = order_of_two_mod(p)?;
    let mut out: Vec<CosetEigenvalue> = cosets_of_two(p)?
        .into_iter()
        .map(|coset| {
            let mut log_modulus = f64::from(s) * LN_2;
            let mut negative = false;
            for &j in &coset {
                let x = libm::sin(2.0 * PI * j as f64 / p as f64);
                log_modulus += libm::log(libm::fabs(x));
                negative ^= x < 0.0;
            }
            // (-i)^s
            let mut phase = match s % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
            if negative {
                phase = -phase;
            }
            CosetEigenvalue {
                representative: coset[0],
                coset,
                log_modulus,
                phase,
            }
        })
        .collect();
    out.sort_by(|a, b| b.log_modulus.total_cmp(&a.log_modulus));
    Ok(out)
}

/// `∏_a ξ_a`.
pub fn eigenvalue_product(eigs: &[CosetEigenvalue]) -> Complex64 {
    let log: f64 = eigs.iter().map(|e| e.log_modulus).sum();
    let phase: Complex64 = eigs.iter().map(|e| e.phase).product();
    phase * libm::exp(log)
}

/// Moduli of the eigenvalues of `M` predicted by the coset formula,
/// with multiplicities: `|ξ_a|` once per element of each coset, and `0`
/// for the constant vector.
pub fn explicit_moduli(p: u64) -> Result<Vec<f64>> {
    let mut out = vec![0.0];
    for e in eigenvalues_explicit(p)? {
        out.extend(core::iter::repeat_n(e.modulus(), e.coset.len()));
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Moduli of the roots of `det(xI - M)`, with multiplicities.
pub fn matrix_moduli(p: u64) -> Result<Vec<f64>> {
    Ok(poly::root_moduli(&transfer_matrix(p)?.charpoly()))
}

/// The eigenvalue of `M` on the Fourier mode `e^{2πijm/p}`:
/// `∏_{i<s} (1 - ω^{-m 2^i})`. Its argument is
/// `π(s/2 - R/p)` with `R` the sum of the residues `m 2^i mod p`, which
/// is kept as the exact pair `(s, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeEigenvalue {
    pub m: u64,
    pub log_modulus: f64,
    residue_sum: u64,
}

impl ModeEigenvalue {
    /// The argument in turns, `(s p - 2R)/(4p)` mod 1.
    pub fn arg_turns(&self, p: u64, s: u32) -> Turns {
        Turns::exact(i128::from(s) * p as i128 - 2 * self.residue_sum as i128, 4 * p)
    }

    pub fn value(&self, p: u64, s: u32) -> Complex64 {
        // unit() measures e^{-2πi x}
        (-self.arg_turns(p, s)).unit() * libm::exp(self.log_modulus)
    }
}

/// Eigenvalues of `M` for every mode `m = 1, …, p-1`, for odd `p`.
pub fn mode_eigenvalues(p: u64) -> Result<Vec<ModeEigenvalue>> {
    let s = order_of_two_mod(p)?;
    Ok((1..p)
        .map(|m| {
            let mut log_modulus = 0.0;
            let mut residue_sum = 0u64;
            let mut r = m;
            for _ in 0..s {
                log_modulus += libm::log(2.0 * libm::sin(PI * r as f64 / p as f64));
                residue_sum += r;
                r = 2 * r % p;
            }
            ModeEigenvalue {
                m,
                log_modulus,
                residue_sum,
            }
        })
        .collect())
}

/// `β₁` per the rule `log λ₂/(s log 2)` for `λ₂ > 1`, `0` for `λ₂ < 1`,
/// with the boundary `λ₂ = 1` kept separate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta1 {
    Above(f64),
    Below,
    Boundary,
}

impl Beta1 {
    /// The exponent used for error bounds; `0` below or at the boundary.
    pub fn value(self) -> f64 {
        match self {
            Beta1::Above(b) => b,
            Beta1::Below | Beta1::Boundary => 0.0,
        }
    }
}

const LOG_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingExponents {
    pub p: u64,
    pub s: u32,
    pub lambda1: f64,
    /// Largest eigenvalue modulus strictly below `λ₁` (`0` if none).
    pub lambda2: f64,
    pub beta: f64,
    pub beta1: Beta1,
    /// Smallest `r` with `(ξ/λ₁)^r = 1` for every dominant eigenvalue.
    pub r: u32,
    /// Modes `m` whose eigenvalue has modulus `λ₁`.
    pub dominant_modes: Vec<u64>,
}

impl ScalingExponents {
    /// Period of the profiles in `log₂ n`: `r·s`.
    pub fn period(&self) -> f64 {
        f64::from(self.r) * f64::from(self.s)
    }
}

/// `β = log λ₁/(s log 2)` and `β₁` for odd `p`. For composite `p` the
/// same spectral data are computed from the circulant structure.
pub fn scaling_exponents(p: u64) -> Result<ScalingExponents> {
    let s = order_of_two_mod(p)?;
    let modes = mode_eigenvalues(p)?;
    let top = modes.iter().map(|e| e.log_modulus).fold(f64::NEG_INFINITY, f64::max);
    let dominant: Vec<&ModeEigenvalue> = modes
        .iter()
        .filter(|e| e.log_modulus >= top - LOG_TOLERANCE)
        .collect();
    let second = modes
        .iter()
        .map(|e| e.log_modulus)
        .filter(|&l| l < top - LOG_TOLERANCE)
        .fold(f64::NEG_INFINITY, f64::max);
    let sl2 = f64::from(s) * LN_2;
    let beta1 = if second > LOG_TOLERANCE {
        Beta1::Above(second / sl2)
    } else if second < -LOG_TOLERANCE {
        Beta1::Below
    } else {
        Beta1::Boundary
    };
    let mut r = 1u32;
    for e in &dominant {
        if let Turns::Exact { den, .. } = e.arg_turns(p, s) {
            let den = den as u32;
            r = r / gcd(u64::from(r), u64::from(den)) as u32 * den;
        }
    }
    Ok(ScalingExponents {
        p,
        s,
        lambda1: libm::exp(top),
        lambda2: libm::exp(second),
        beta: top / sl2,
        beta1,
        r,
        dominant_modes: dominant.iter().map(|e| e.m).collect(),
    })
}

/// Growth exponent of `Σ_j S_{p,j}(n) e^{-2πijt/p}`: the eigenvalue on
/// the mode `t` governs it, so it is `log|λ_t|/(s log 2)`, which equals `β`
/// only when `t` lies in a dominant coset.
pub fn coset_exponent(p: u64, t: i64) -> Result<f64> {
    let s = order_of_two_mod(p)?;
    let m = t.rem_euclid(p as i64) as u64;
    if m == 0 {
        return Err(Error::InvalidArgument("t must not be divisible by p"));
    }
    let e = &mode_eigenvalues(p)?[(m - 1) as usize];
    Ok(e.log_modulus / (f64::from(s) * LN_2))
}

/// `(ΠS)_j` for every `j`, where `Π` projects onto the dominant modes.
pub fn dominant_projection(v: &RarefiedVector, modes: &[u64]) -> Vec<f64> {
    let p = v.p();
    let mut out = vec![0.0; p as usize];
    for &m in modes {
        // Ŝ_m = Σ_i S_i ω^{-im}
        let mut hat = Complex64::zero();
        for (i, &x) in v.entries().iter().enumerate() {
            if x != 0 {
                hat += Turns::exact((i as u64 * m % p) as i128, p).unit() * x as f64;
            }
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += ((-Turns::exact((j as u64 * m % p) as i128, p)).unit() * hat).re;
        }
    }
    for o in out.iter_mut() {
        *o /= p as f64;
    }
    out
}

/// Largest supported horizon exponent for profile sampling.
pub const MAX_HORIZON: u32 = 62;

/// Default number of sample points per period.
pub const DEFAULT_RESOLUTION: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSample {
    pub n: u64,
    /// `frac(log₂ n/(r s))`.
    pub x: f64,
    /// `S_{p,j}(n)/n^β`.
    pub raw: f64,
    /// `(ΠS(n))_j/n^β`, the sampled value of `ψ_{p,j}`.
    pub psi: f64,
}

/// Samples of `ψ_{p,j}` over one period with empirical bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct FractalProfile {
    pub p: u64,
    pub j: u64,
    pub exponents: ScalingExponents,
    pub samples: Vec<ProfileSample>,
    /// Empirical `(inf ψ̂, sup ψ̂)`.
    pub bounds: (f64, f64),
    /// Empirical `(inf, sup)` of `S_{p,j}(n)/n^β`.
    pub raw_bounds: (f64, f64),
    /// Fitted `C` in `|E_{p,j}(n)| ≤ C n^{β₁}`.
    pub error_constant: f64,
}

/// Sample sizes `n = ⌊2^{(m + x₀)·rs}⌋` with `x₀ = i/resolution` and the
/// largest `m` keeping `n ≤ 2^horizon`.
pub fn profile_grid(period: f64, horizon: u32, resolution: usize) -> Result<Vec<u64>> {
    if horizon > MAX_HORIZON {
        return Err(Error::Budget(horizon));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive"));
    }
    let h = f64::from(horizon);
    let mut out = Vec::with_capacity(resolution);
    for i in 0..resolution {
        let x0 = i as f64 / resolution as f64;
        let m = libm::floor(h / period - x0);
        if m < 0.0 {
            continue;
        }
        let n = libm::floor(libm::exp2((m + x0) * period)) as u64;
        if n >= 1 {
            out.push(n.min(1u64 << horizon));
        }
    }
    if out.len() * 2 < resolution {
        return Err(Error::Budget(horizon));
    }
    Ok(out)
}

/// All profiles `ψ_{p,0..p}` on a shared grid: `(n, raw, psi)` per sample.
pub(crate) fn profile_table(
    exps: &ScalingExponents,
    horizon: u32,
    resolution: usize,
) -> Result<Vec<(u64, RarefiedVector, Vec<f64>)>> {
    let grid = profile_grid(exps.period(), horizon, resolution)?;
    grid.into_iter()
        .map(|n| {
            let v = rarefied_vector(exps.p, n)?;
            let proj = dominant_projection(&v, &exps.dominant_modes);
            Ok((n, v, proj))
        })
        .collect()
}

pub fn fractal_profile(p: u64, j: u64, horizon: u32) -> Result<FractalProfile> {
    fractal_profile_with(p, j, horizon, DEFAULT_RESOLUTION)
}

pub fn fractal_profile_with(p: u64, j: u64, horizon: u32, resolution: usize) -> Result<FractalProfile> {
    check_modulus(p)?;
    if j >= p {
        return Err(Error::ResidueOutOfRange { p, i: j });
    }
    let exps = scaling_exponents(p)?;
    let table = profile_table(&exps, horizon, resolution)?;
    let b1 = exps.beta1.value().max(0.0);
    let mut samples = Vec::with_capacity(table.len());
    let mut bounds = (f64::INFINITY, f64::NEG_INFINITY);
    let mut raw_bounds = bounds;
    let mut error_constant: f64 = 0.0;
    for (n, v, proj) in &table {
        let nf = *n as f64;
        let scale = libm::pow(nf, exps.beta);
        let sj = v.get(j) as f64;
        let psi = proj[j as usize] / scale;
        let raw = sj / scale;
        for (x, pr) in v.entries().iter().zip(proj) {
            let e = libm::fabs(*x as f64 - pr) / libm::pow(nf, b1);
            error_constant = error_constant.max(e);
        }
        bounds = (bounds.0.min(psi), bounds.1.max(psi));
        raw_bounds = (raw_bounds.0.min(raw), raw_bounds.1.max(raw));
        samples.push(ProfileSample {
            n: *n,
            x: frac(libm::log2(nf) / exps.period()),
            raw,
            psi,
        });
    }
    Ok(FractalProfile {
        p,
        j,
        exponents: exps,
        samples,
        bounds,
        raw_bounds,
        error_constant,
    })
}

/// `S_{3,0}(n) = n^β ψ_{3,0}(log n/log 4) + ε(n)/3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoquetTerm {
    pub n: u64,
    pub s: i64,
    /// `x = frac(log₄ n)`.
    pub x: f64,
    pub psi: f64,
    pub eps: i64,
}

fn newman_beta() -> f64 {
    libm::log(3.0) / libm::log(4.0)
}

/// Splits `S_{3,0}(n)` into its profile value and the remainder `ε/3`.
/// `ψ̂` comes from projecting `S(n)` onto the dominant modes; `ε` is
/// recovered as `round(3(S - n^β ψ̂))` and must reconstruct `S` exactly.
pub fn coquet_decompose(n: u64) -> Result<CoquetTerm> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    let v = rarefied_vector(3, n)?;
    let proj = dominant_projection(&v, &[1, 2]);
    let s = v.get(0);
    let nb = libm::pow(n as f64, newman_beta());
    let psi = proj[0] / nb;
    let raw = 3.0 * (s as f64 - nb * psi);
    let eps = libm::round(raw) as i64;
    let rebuilt = libm::round(nb * psi + eps as f64 / 3.0) as i64;
    if !(-1..=1).contains(&eps) || libm::fabs(raw - eps as f64) > 1e-6 || rebuilt != s {
        return Err(Error::CoquetRemainder { n, eps });
    }
    Ok(CoquetTerm {
        n,
        s,
        x: frac(libm::log(n as f64) / libm::log(4.0)),
        psi,
        eps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewmanReport {
    pub n_max: u64,
    pub violations: u64,
    pub first_violation: Option<u64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `3^{-β}/20`.
    pub lower: f64,
    /// `5·3^{-β}`.
    pub upper: f64,
}

/// Relative margin below which a ratio counts as touching a bound.
const BOUND_MARGIN: f64 = 1e-12;

/// Checks `3^{-β}/20 < S_{3,0}(n)/n^β < 5·3^{-β}` and `S_{3,0}(n) > 0`
/// for every `1 ≤ n ≤ n_max`. Ratios within a relative `1e-12` of a
/// bound count as violations.
pub fn newman_check(n_max: u64) -> NewmanReport {
    let beta = newman_beta();
    let c = libm::pow(3.0, -beta);
    let (lower, upper) = (c / 20.0, 5.0 * c);
    let mut s = 0i64;
    let mut report = NewmanReport {
        n_max,
        violations: 0,
        first_violation: None,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        lower,
        upper,
    };
    for n in 1..=n_max {
        let j = n - 1;
        if j % 3 == 0 {
            s += i64::from(tm_sign(j));
        }
        let ratio = s as f64 / libm::pow(n as f64, beta);
        report.min_ratio = report.min_ratio.min(ratio);
        report.max_ratio = report.max_ratio.max(ratio);
        let ok = s > 0 && ratio > lower * (1.0 + BOUND_MARGIN) && ratio < upper * (1.0 - BOUND_MARGIN);
        if !ok {
            report.violations += 1;
            report.first_violation.get_or_insert(n);
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub p: u64,
    pub n_max: u64,
    /// Number of `n ≤ n_max` with `S_{p,0}(n) ≤ 0`.
    pub violations: u64,
    pub largest_violation: Option<u64>,
    /// Violations with `n > n_max/10`.
    pub violations_last_decade: u64,
}

impl PositivityReport {
    /// No violation in the last decade of the horizon.
    pub fn stabilized(&self) -> bool {
        self.violations_last_decade == 0
    }
}

pub fn positivity_scan(p: u64, n_max: u64) -> Result<PositivityReport> {
    check_modulus(p)?;
    let mut s = 0i64;
    let mut report = PositivityReport {
        p,
        n_max,
        violations: 0,
        largest_violation: None,
        violations_last_decade: 0,
    };
    for n in 1..=n_max {
        let j = n - 1;
        if j % p == 0 {
            s += i64::from(tm_sign(j));
        }
        if s <= 0 {
            report.violations += 1;
            report.largest_violation = Some(n);
            if n > n_max / 10 {
                report.violations_last_decade += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrabnerReport {
    pub p: u64,
    pub n_max: u64,
    /// `R(N) = S_{p,0}(pN) - S_{3^{r1},0}(pN)/5^{r2} - S_{5^{r2},0}(pN)/3^{r1}`.
    pub residual_min: f64,
    pub residual_max: f64,
    /// `max_{2≤N≤N_max} |R(N)|/log N`.
    pub c_fit: f64,
    /// The same maximum over `N ≤ N_max/10`.
    pub c_head: f64,
    /// `R(1)` from direct sums.
    pub residual_at_one: f64,
    /// The running and direct computations of `R(1)` agree exactly.
    pub identity_at_one: bool,
    /// Least-squares exponent of `S_{p,0}(pN)` against `pN` along
    /// `N = 2^{s m}`, `s` the order of 2 mod `p`.
    pub dominant_exponent: f64,
    pub exponent_sizes: Vec<u64>,
}

/// Default horizon, as `log₂` of the largest argument, for the exponent fit.
pub const GRABNER_EXPONENT_HORIZON: u32 = 60;

pub fn grabner_composite(r1: u32, r2: u32, n_max: u64) -> Result<GrabnerReport> {
    grabner_composite_with(r1, r2, n_max, GRABNER_EXPONENT_HORIZON)
}

pub fn grabner_composite_with(r1: u32, r2: u32, n_max: u64, exponent_horizon: u32) -> Result<GrabnerReport> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::InvalidArgument("r1 and r2 must be positive"));
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument("N_max must be at least 2"));
    }
    let p3 = 3u64.checked_pow(r1).ok_or(Error::Overflow("3^r1"))?;
    let p5 = 5u64.checked_pow(r2).ok_or(Error::Overflow("5^r2"))?;
    let p = p3.checked_mul(p5).ok_or(Error::Overflow("p"))?;
    let top = p.checked_mul(n_max).ok_or(Error::Overflow("p N_max"))?;
    let (mut sp, mut s3, mut s5) = (0i64, 0i64, 0i64);
    let mut report = GrabnerReport {
        p,
        n_max,
        residual_min: f64::INFINITY,
        residual_max: f64::NEG_INFINITY,
        c_fit: 0.0,
        c_head: 0.0,
        residual_at_one: 0.0,
        identity_at_one: false,
        dominant_exponent: f64::NAN,
        exponent_sizes: Vec::new(),
    };
    for j in 0..top {
        let eta = i64::from(tm_sign(j));
        if j % p == 0 {
            sp += eta;
        }
        if j % p3 == 0 {
            s3 += eta;
        }
        if j % p5 == 0 {
            s5 += eta;
        }
        let n = j + 1;
        if n % p != 0 {
            continue;
        }
        let big_n = n / p;
        // p·R is an integer
        let scaled = p as i64 * sp - p3 as i64 * s3 - p5 as i64 * s5;
        let r = scaled as f64 / p as f64;
        report.residual_min = report.residual_min.min(r);
        report.residual_max = report.residual_max.max(r);
        if big_n == 1 {
            let direct = p as i64 * rarefied_sum_direct(p, 0, p)?
                - p3 as i64 * rarefied_sum_direct(p3, 0, p)?
                - p5 as i64 * rarefied_sum_direct(p5, 0, p)?;
            report.residual_at_one = direct as f64 / p as f64;
            report.identity_at_one = direct == scaled;
        }
        if big_n >= 2 {
            let c = libm::fabs(r) / libm::log(big_n as f64);
            report.c_fit = report.c_fit.max(c);
            if big_n <= n_max / 10 {
                report.c_head = report.c_head.max(c);
            }
        }
    }
    let s = order_of_two_mod(p)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut m = 1u32;
    while let Some(n) = (s * m < 64).then(|| 1u64 << (s * m)).and_then(|big| big.checked_mul(p)) {
        if 64 - n.leading_zeros() > exponent_horizon {
            break;
        }
        let v = rarefied_sum(p, 0, n)?;
        if v > 0 {
            xs.push(libm::log(n as f64));
            ys.push(libm::log(v as f64));
            report.exponent_sizes.push(n);
        }
        m += 1;
    }
    if let Some(fit) = line_fit(&xs, &ys) {
        report.dominant_exponent = fit.slope;
    }
    Ok(report)
}
