//! Spectral verdicts for wave vectors, rarefaction domains, growth regimes
//! and Marcinkiewicz classes of weights.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{factorize, gcd, is_prime};
use crate::diffract::{
    approximant_sum_fast, bragg_ratio, eta_sum, vertex_turns, fitted_alpha, ExponentFit, kappa_closed, kappa_eta_exact,
    rarefied_sizes, Wave,
};
use crate::error::{Error, Result};
use crate::math::{line_fit, ComplexSum, Turns};
use crate::quadfield::prime_record;
use crate::rareclass::{coset_exponent, profile_table, rarefied_vector, scaling_exponents, DEFAULT_RESOLUTION};
use crate::tmcore::{to_f64, QuasicrystalParams, Weights};
use crate::Rational;

/// `q = t/(2^h p)` in lowest terms with `p` odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedWaveVector {
    pub t: i64,
    pub h: u32,
    pub p: u64,
    pub q: Rational,
}

impl NormalizedWaveVector {
    /// `k = 4πq/(a+b)`.
    pub fn k(&self, params: &QuasicrystalParams) -> f64 {
        Wave::Exact(self.q.clone()).k(params)
    }
}

pub fn normalize_wavevector(q: &Rational) -> Result<NormalizedWaveVector> {
    let den = q.denom();
    let h = den.trailing_zeros().unwrap_or(0);
    let odd: BigInt = den >> h;
    let p = odd.to_u64().ok_or(Error::Overflow("odd part of the denominator"))?;
    let t = q.numer().to_i64().ok_or(Error::Overflow("numerator"))?;
    let h = u32::try_from(h).map_err(|_| Error::Overflow("power of two"))?;
    Ok(NormalizedWaveVector {
        t,
        h,
        p,
        q: q.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Bragg,
    SingularContinuous,
    Excluded,
    AlmostSureNull,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Bragg => "Bragg",
            VerdictKind::SingularContinuous => "SingularContinuous",
            VerdictKind::Excluded => "Excluded",
            VerdictKind::AlmostSureNull => "AlmostSureNull",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerdictFlags {
    /// The exponent is a fit, not a proven value.
    pub exponent_unproven: bool,
    /// Composite `p` outside `3^{r1} 5^{r2}`: dominance by one prime
    /// factor is only conjectured.
    pub conjectural: bool,
    /// `|κ_η|` is close to the exclusion threshold.
    pub kappa_boundary: bool,
    /// `t` lies in a coset of `⟨2⟩` whose eigenvalue is not dominant, so
    /// the growth exponent is `β_t < β(p)`.
    pub subdominant_coset: bool,
    /// Bragg position with vanishing intensity along `l = 2^n`.
    pub extinct_bragg: bool,
}

impl VerdictFlags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.exponent_unproven {
            out.push("exponent-unproven");
        }
        if self.conjectural {
            out.push("conjectural");
        }
        if self.kappa_boundary {
            out.push("kappa-boundary");
        }
        if self.subdominant_coset {
            out.push("subdominant-coset");
        }
        if self.extinct_bragg {
            out.push("extinct-bragg");
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `β(p)` from the prime class or the transfer matrix.
    pub beta: Option<f64>,
    /// Growth exponent of the mode `t`.
    pub beta_t: Option<f64>,
    pub fitted_alpha: Option<f64>,
    pub fit_residual: Option<f64>,
    pub subsequence: Option<String>,
    /// `ν_{U,2^n}/2^n` at the fit horizon, for Bragg positions.
    pub bragg_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVerdict {
    pub kind: VerdictKind,
    pub alpha: Option<f64>,
    pub kappa_eta: Complex64,
    pub wave: Option<NormalizedWaveVector>,
    pub flags: VerdictFlags,
    pub diagnostics: Diagnostics,
}

/// `|κ_η|` below this declares the wave vector excluded.
pub const KAPPA_ETA_ZERO: f64 = 1e-10;
/// `|κ_η|` below this (and above [`KAPPA_ETA_ZERO`]) is flagged.
pub const KAPPA_ETA_BOUNDARY: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// `log₂` of the largest size used in the diagnostic fit; `None`
    /// skips the fit.
    pub fit_horizon: Option<u32>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { fit_horizon: Some(24) }
    }
}

fn is_three_five(p: u64) -> bool {
    let f = factorize(p);
    f.len() == 2 && f[0].0 == 3 && f[1].0 == 5
}

/// Classifies a rational `q`, the wave vector `k = 4πq/(a+b)`.
pub fn classify(q: &Rational, params: &QuasicrystalParams, opts: &ClassifyOptions) -> Result<SpectralVerdict> {
    let nw = normalize_wavevector(q)?;
    let wave = Wave::Exact(q.clone());
    let kappa_eta = kappa_eta_exact(&wave, params);
    let mut verdict = SpectralVerdict {
        kind: VerdictKind::Bragg,
        alpha: None,
        kappa_eta,
        wave: Some(nw.clone()),
        flags: VerdictFlags::default(),
        diagnostics: Diagnostics::default(),
    };
    if nw.p == 1 {
        let n = opts.fit_horizon.unwrap_or(24);
        let ratio = bragg_ratio(n, &wave, params);
        verdict.diagnostics.bragg_ratio = Some(ratio);
        verdict.diagnostics.subsequence = Some(alloc::format!("2^{n}"));
        verdict.flags.extinct_bragg = ratio < 1e-12;
        return Ok(verdict);
    }
    let kabs = kappa_eta.norm();
    if kabs < KAPPA_ETA_ZERO {
        verdict.kind = VerdictKind::Excluded;
        return Ok(verdict);
    }
    verdict.kind = VerdictKind::SingularContinuous;
    verdict.flags.kappa_boundary = kabs < KAPPA_ETA_BOUNDARY;

    let beta_t = coset_exponent(nw.p, nw.t)?;
    verdict.diagnostics.beta_t = Some(beta_t);
    if let Some(horizon) = opts.fit_horizon {
        // sizes below 2^{horizon/2} are still dominated by the bounded lattice terms
        let start = horizon / 2;
        let (fit, label) = if nw.h == 0 {
            let sizes = rarefied_sizes(nw.p, start, horizon);
            (fitted_alpha(&wave, params, &sizes), alloc::format!("{}N+1", nw.p))
        } else {
            let start = start.max(nw.h + 1);
            (halving_fit(nw.t, nw.h, nw.p, start, horizon), String::from("2^j"))
        };
        if let Ok(fit) = fit {
            verdict.diagnostics.fitted_alpha = Some(fit.alpha);
            verdict.diagnostics.fit_residual = Some(fit.residual_rms);
        }
        verdict.diagnostics.subsequence = Some(label);
    }
    let in_range = |a: f64| (a > -1.0 && a < 1.0).then_some(a);
    if is_prime(nw.p) {
        let beta = prime_record(nw.p)?.beta;
        verdict.diagnostics.beta = Some(beta);
        if (beta_t - beta).abs() < 1e-9 {
            verdict.alpha = in_range(2.0 * beta - 1.0);
        } else {
            verdict.flags.subdominant_coset = true;
            verdict.alpha = if beta_t > 0.0 { in_range(2.0 * beta_t - 1.0) } else { None };
        }
    } else {
        verdict.diagnostics.beta = Some(scaling_exponents(nw.p)?.beta);
        verdict.flags.exponent_unproven = true;
        verdict.flags.conjectural = !is_three_five(nw.p);
        verdict.alpha = verdict.diagnostics.fitted_alpha.and_then(in_range);
    }
    Ok(verdict)
}

/// Irrational wave vectors are classified only almost surely.
pub fn classify_irrational(k: f64, params: &QuasicrystalParams) -> SpectralVerdict {
    SpectralVerdict {
        kind: VerdictKind::AlmostSureNull,
        alpha: None,
        kappa_eta: kappa_closed(k, params).1,
        wave: None,
        flags: VerdictFlags::default(),
        diagnostics: Diagnostics::default(),
    }
}

/// `α = 2β(p) - 1`, independent of `h`.
pub fn alpha_exact(p: u64, h: u32) -> Result<f64> {
    let _ = h;
    let beta = prime_record(p)?.beta;
    let alpha = 2.0 * beta - 1.0;
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::ExponentOutOfRange(alpha));
    }
    Ok(alpha)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalvingReduction {
    /// `2^h ∏_{j<h} sin²(π 2^j t/(2^h p))`.
    pub prefactor: f64,
    /// `(1/2^{n-h})|Σ_{j=1}^{2^{n-h}} η_{j-1} e^{-2πijt/p}|²`.
    pub reduced_density: f64,
    /// `(1/2^n)|Σ_{j=1}^{2^n} η_{j-1} e^{-2πijt/(2^h p)}|²`, computed
    /// independently.
    pub full_density: f64,
}

pub fn halving_reduction(t: i64, h: u32, p: u64, n: u32) -> Result<HalvingReduction> {
    if n <= h || n > 63 {
        return Err(Error::InvalidArgument("need h < n <= 63"));
    }
    if p == 0 || p.is_multiple_of(2) {
        return Err(Error::InvalidModulus(p));
    }
    let den = (p as u128) << h;
    if den > u64::MAX as u128 {
        return Err(Error::Overflow("2^h p"));
    }
    let den = den as u64;
    let x = Turns::exact(i128::from(t), den);
    let mut prefactor = 1.0;
    let mut y = x;
    for _ in 0..h {
        let s = libm::sin(PI * y.to_f64());
        prefactor *= 2.0 * s * s;
        y = y.times(2);
    }
    let reduced_len = 1u64 << (n - h);
    let reduced_density = eta_sum(reduced_len, Turns::exact(i128::from(t), p)).norm_sqr() / reduced_len as f64;
    let full_len = 1u64 << n;
    let full_density = eta_sum(full_len, x).norm_sqr() / full_len as f64;
    Ok(HalvingReduction {
        prefactor,
        reduced_density,
        full_density,
    })
}

/// Slope of `log` of the `η`-density at `t/(2^h p)` against `log 2^n` for
/// `min_exp ≤ n ≤ max_exp`, each density taken from [`halving_reduction`].
pub fn halving_fit(t: i64, h: u32, p: u64, min_exp: u32, max_exp: u32) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut sizes = Vec::new();
    for n in min_exp.max(h + 1)..=max_exp {
        let r = halving_reduction(t, h, p, n)?;
        if r.full_density <= 0.0 {
            return Err(Error::Extinct(1 << n));
        }
        xs.push(f64::from(n) * core::f64::consts::LN_2);
        ys.push(libm::log(r.full_density));
        sizes.push(1u64 << n);
    }
    if xs.len() < 4 {
        return Err(Error::TooFewSizes {
            needed: 4,
            got: xs.len(),
        });
    }
    let fit = line_fit(&xs, &ys).ok_or(Error::InvalidArgument("degenerate sizes"))?;
    Ok(ExponentFit {
        alpha: fit.slope,
        intercept: fit.intercept,
        residual_rms: fit.rms,
        sizes,
    })
}

/// Both sides of the reduction of the `η`-sum at `t/p` to rarefied sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RarefiedReduction {
    /// `(1/(Np+1))|Σ_{n=1}^{Np+1} η_{n-1} e^{-2πint/p}|²`, summed directly.
    pub direct: f64,
    /// `(1/(Np+1))|Σ_j S_{p,j}(Np) e^{-2πijt/p}|²`.
    pub rarefied_np: f64,
    /// `(1/(Np+1))|Σ_j S_{p,j}(Np+1) e^{-2πijt/p}|²`, which covers the
    /// same indices as the direct sum.
    pub rarefied_np1: f64,
}

pub fn rarefied_reduction(p: u64, t: i64, big_n: u64) -> Result<RarefiedReduction> {
    let np = p.checked_mul(big_n).ok_or(Error::Overflow("Np"))?;
    let l = np + 1;
    let x = Turns::exact(i128::from(t), p);
    let mut direct = ComplexSum::new();
    for n in 1..=l {
        let eta = f64::from(crate::tmcore::tm_sign(n - 1));
        direct.add(x.times(n).unit() * eta);
    }
    let fold = |n: u64| -> Result<Complex64> {
        let v = rarefied_vector(p, n)?;
        let mut acc = ComplexSum::new();
        for (j, &s) in v.entries().iter().enumerate() {
            acc.add(x.times(j as u64).unit() * s as f64);
        }
        Ok(acc.value())
    };
    let lf = l as f64;
    Ok(RarefiedReduction {
        direct: direct.value().norm_sqr() / lf,
        rarefied_np: fold(np)?.norm_sqr() / lf,
        rarefied_np1: fold(l)?.norm_sqr() / lf,
    })
}

/// Image of the box `∏_j [inf ψ̂_{p,j}, sup ψ̂_{p,j}]` under
/// `y ↦ Σ_j y_j ξ^j`, `ξ = e^{-2πit/p}`.
///
/// The box bounds are empirical: they come from sampled profiles, and the
/// true extrema of `ψ_{p,j}` are unknown in general.
#[derive(Clone, Debug, PartialEq)]
pub struct RarefactionDomain {
    pub p: u64,
    pub t: i64,
    pub xi: Complex64,
    pub box_bounds: Vec<(f64, f64)>,
    /// Vertices of the image polygon, counter-clockwise.
    pub vertices: Vec<Complex64>,
    pub min_mod: f64,
    pub max_mod: f64,
    pub contains_zero: bool,
    /// Extremes of `|Σ_j ψ̂_{p,j}(x) ξ^j|` along the sampled curve.
    pub curve_min_mod: f64,
    pub curve_max_mod: f64,
    pub horizon: u32,
}

/// Relative tolerance for deciding `0 ∈ R(k)`.
pub const DOMAIN_TOLERANCE: f64 = 1e-9;

/// Convex polygon `c + Σ_j [0,1] g_j`, the zonotope generated by segments.
fn zonotope(base: Complex64, generators: &[Complex64]) -> Vec<Complex64> {
    let mut start = base;
    let mut gens: Vec<Complex64> = Vec::new();
    for &g in generators {
        if g.norm() == 0.0 {
            continue;
        }
        // orient every generator into the upper half-plane
        if g.im < 0.0 || (g.im == 0.0 && g.re < 0.0) {
            start += g;
            gens.push(-g);
        } else {
            gens.push(g);
        }
    }
    if gens.is_empty() {
        return alloc::vec![start];
    }
    gens.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let mut out = Vec::with_capacity(2 * gens.len());
    let mut v = start;
    for g in &gens {
        out.push(v);
        v += g;
    }
    for g in &gens {
        out.push(v);
        v -= g;
    }
    out
}

fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let s = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * s).norm()
}

fn polygon_contains_origin(vertices: &[Complex64], tol: f64) -> bool {
    let n = vertices.len();
    if n < 3 {
        return vertices.iter().any(|v| v.norm() <= tol)
            || (n == 2 && segment_distance(vertices[0], vertices[1]) <= tol);
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if segment_distance(a, b) <= tol {
            return true;
        }
        let cross = a.re * b.im - a.im * b.re;
        if cross.abs() <= tol * (b - a).norm() {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    true
}

pub fn rarefaction_domain(t: i64, p: u64, horizon: u32) -> Result<RarefactionDomain> {
    rarefaction_domain_with(t, p, horizon, DEFAULT_RESOLUTION)
}

pub fn rarefaction_domain_with(t: i64, p: u64, horizon: u32, resolution: usize) -> Result<RarefactionDomain> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if gcd(t.unsigned_abs() % p, p) != 1 {
        return Err(Error::InvalidArgument("t must be coprime to p"));
    }
    let exps = scaling_exponents(p)?;
    let table = profile_table(&exps, horizon, resolution)?;
    let x = Turns::exact(i128::from(t), p);
    let powers: Vec<Complex64> = (0..p).map(|j| x.times(j).unit()).collect();
    let mut box_bounds = alloc::vec![(f64::INFINITY, f64::NEG_INFINITY); p as usize];
    let mut curve = (f64::INFINITY, 0.0f64);
    for (n, _, proj) in &table {
        let scale = libm::pow(*n as f64, exps.beta);
        let mut z = Complex64::zero();
        for (j, pr) in proj.iter().enumerate() {
            let psi = pr / scale;
            let b = &mut box_bounds[j];
            *b = (b.0.min(psi), b.1.max(psi));
            z += powers[j] * psi;
        }
        curve = (curve.0.min(z.norm()), curve.1.max(z.norm()));
    }
    let base: Complex64 = box_bounds.iter().zip(&powers).map(|(b, w)| w * b.0).sum();
    let gens: Vec<Complex64> = box_bounds.iter().zip(&powers).map(|(b, w)| w * (b.1 - b.0)).collect();
    let vertices = zonotope(base, &gens);
    let max_mod = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = DOMAIN_TOLERANCE * max_mod.max(1.0);
    let contains_zero = polygon_contains_origin(&vertices, tol);
    let min_mod = if contains_zero {
        0.0
    } else {
        let n = vertices.len();
        (0..n)
            .map(|i| segment_distance(vertices[i], vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    };
    Ok(RarefactionDomain {
        p,
        t,
        xi: x.unit(),
        box_bounds,
        vertices,
        min_mod,
        max_mod,
        contains_zero,
        curve_min_mod: curve.0,
        curve_max_mod: curve.1,
        horizon,
    })
}

/// Whether an extinction subsequence is not excluded, i.e. `0 ∈ R(k)`.
pub fn extinction_possible(domain: &RarefactionDomain) -> bool {
    domain.contains_zero
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthRegime {
    SizeIncreasing,
    Etale,
    SizeDecreasing,
}

impl GrowthRegime {
    pub fn name(self) -> &'static str {
        match self {
            GrowthRegime::SizeIncreasing => "size-increasing",
            GrowthRegime::Etale => "etale",
            GrowthRegime::SizeDecreasing => "size-decreasing",
        }
    }
}

/// Half-width of the band around `0` classified as étale.
pub const ETALE_TOLERANCE: f64 = 1e-12;

pub fn growth_regime(alpha: f64) -> Result<GrowthRegime> {
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::ExponentOutOfRange(alpha));
    }
    Ok(if alpha > ETALE_TOLERANCE {
        GrowthRegime::SizeIncreasing
    } else if alpha < -ETALE_TOLERANCE {
        GrowthRegime::SizeDecreasing
    } else {
        GrowthRegime::Etale
    })
}

/// Truncated Marcinkiewicz pseudo-norm `max_{L/2 ≤ l ≤ L} (1/l)Σ_{n≤l}|w(n)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarcinkiewiczEstimate {
    pub horizon: u64,
    pub value: f64,
    /// The same window maximum at every dyadic horizon `2^m ≤ L`.
    pub dyadic: Vec<(u64, f64)>,
}

fn window_start(h: u64) -> u64 {
    h.div_ceil(2).max(1)
}

pub fn marcinkiewicz_norm<W: Weights + ?Sized>(weights: &W, horizon: u64) -> Result<MarcinkiewiczEstimate> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive"));
    }
    let mut total = 0.0;
    let mut value: f64 = 0.0;
    let mut dyadic = Vec::new();
    let mut next = 1u64;
    let mut window: f64 = 0.0;
    for l in 1..=horizon {
        total += weights.weight(l).norm();
        let avg = total / l as f64;
        if l >= window_start(horizon) {
            value = value.max(avg);
        }
        if l >= window_start(next) {
            window = window.max(avg);
        }
        if l == next {
            dyadic.push((next, window));
            window = 0.0;
            next = next.saturating_mul(2);
        }
    }
    Ok(MarcinkiewiczEstimate { horizon, value, dyadic })
}

/// Intensities of two weight sequences at one horizon `H`: maxima over
/// `l ∈ [H/2, H]` of `|(1/l)Σ_{n≤l} w(n) e^{-ik f(n)}|²`, with the
/// matching norm estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvarianceRow {
    pub horizon: u64,
    pub intensity1: f64,
    pub intensity2: f64,
    pub norm1: f64,
    pub norm2: f64,
    /// Norm estimate of `w1 - w2`.
    pub norm_diff: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub rows: Vec<InvarianceRow>,
    /// `I_w ≤ ‖w‖² + tol` for both sequences at every horizon.
    pub bound_holds: bool,
    /// `|I_1 - I_2| ≤ (‖w1‖ + ‖w2‖)‖w1 - w2‖ + tol` at every horizon.
    pub gap_bound_holds: bool,
}

impl InvarianceReport {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.gap)
    }
}

/// Absolute slack in the intensity bounds.
pub const INTENSITY_TOLERANCE: f64 = 1e-9;

pub fn class_invariance_check<W1, W2>(
    w1: &W1,
    w2: &W2,
    wave: &Wave,
    params: &QuasicrystalParams,
    horizon: u64,
) -> Result<InvarianceReport>
where
    W1: Weights + ?Sized,
    W2: Weights + ?Sized,
{
    if horizon < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2"));
    }
    let q = wave.turns();
    let offset = wave.offset_turns(params);
    let mut horizons: Vec<u64> = (1..64).map(|m| 1u64 << m).take_while(|&h| h <= horizon).collect();
    if horizons.last() != Some(&horizon) {
        horizons.push(horizon);
    }
    let mut sums = [ComplexSum::new(), ComplexSum::new()];
    let (mut abs1, mut abs2, mut absd) = (0.0, 0.0, 0.0);
    let mut rows = Vec::with_capacity(horizons.len());
    let mut hi = 0;
    let mut row = InvarianceRow {
        horizon: horizons[0],
        intensity1: 0.0,
        intensity2: 0.0,
        norm1: 0.0,
        norm2: 0.0,
        norm_diff: 0.0,
        gap: 0.0,
    };
    for n in 1..=horizon {
        let a = w1.weight(n);
        let b = w2.weight(n);
        let ph = vertex_turns(n, q, offset).unit();
        sums[0].add(a * ph);
        sums[1].add(b * ph);
        abs1 += a.norm();
        abs2 += b.norm();
        absd += (a - b).norm();
        let h = horizons[hi];
        if n >= window_start(h) {
            let l = n as f64;
            let i1 = (sums[0].value() / l).norm_sqr();
            let i2 = (sums[1].value() / l).norm_sqr();
            row.intensity1 = row.intensity1.max(i1);
            row.intensity2 = row.intensity2.max(i2);
            row.norm1 = row.norm1.max(abs1 / l);
            row.norm2 = row.norm2.max(abs2 / l);
            row.norm_diff = row.norm_diff.max(absd / l);
        }
        if n == h {
            row.gap = (row.intensity1 - row.intensity2).abs();
            rows.push(row);
            hi += 1;
            if hi == horizons.len() {
                break;
            }
            row = InvarianceRow {
                horizon: horizons[hi],
                intensity1: 0.0,
                intensity2: 0.0,
                norm1: 0.0,
                norm2: 0.0,
                norm_diff: 0.0,
                gap: 0.0,
            };
        }
    }
    let tol = INTENSITY_TOLERANCE;
    let bound_holds = rows
        .iter()
        .all(|r| r.intensity1 <= r.norm1 * r.norm1 + tol && r.intensity2 <= r.norm2 * r.norm2 + tol);
    let gap_bound_holds = rows.iter().all(|r| r.gap <= (r.norm1 + r.norm2) * r.norm_diff + tol);
    Ok(InvarianceReport {
        rows,
        bound_holds,
        gap_bound_holds,
    })
}


/// `ν_{U,l}(k)/l^α` for the unit comb.
pub fn normalized_density(l: u64, wave: &Wave, params: &QuasicrystalParams, alpha: f64) -> f64 {
    approximant_sum_fast(l, wave, params).norm_sqr() / l as f64 / libm::pow(l as f64, alpha)
}

/// `|κ_η|` for a rational `q`, using the exact phase.
pub fn kappa_eta_modulus(q: &Rational, params: &QuasicrystalParams) -> f64 {
    kappa_eta_exact(&Wave::Exact(q.clone()), params).norm()
}

/// `true` when `k(a-b) ∈ 2πℤ` for the rational `q`, i.e. `2qδ ∈ ℤ`.
pub fn on_exclusion_locus(q: &Rational, params: &QuasicrystalParams) -> bool {
    let x = q * params.delta() * Rational::from_integer(2.into());
    x.is_integer()
}

pub fn q_as_f64(q: &Rational) -> f64 {
    to_f64(q)
}
