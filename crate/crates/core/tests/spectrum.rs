use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tmq_core::diffract::{approximant_sum_fast, fitted_alpha, kappa_eta_exact, rarefied_sizes, Wave};
use tmq_core::spectrum::{alpha_exact, classify, halving_fit, rarefaction_domain, ClassifyOptions, VerdictKind};
use tmq_core::tmcore::{rational, QuasicrystalParams};

fn ab(a: i64, b: i64) -> QuasicrystalParams {
    QuasicrystalParams::from_ints(a, b).unwrap()
}

#[test]
fn fitted_alpha_agrees_with_exact() {
    let params = ab(2, 1);
    // t = 3 sits in the dominant coset for p = 17
    for (p, t) in [(3u64, 1i64), (5, 1), (7, 1), (17, 3)] {
        let exact = alpha_exact(p, 0).unwrap();
        for h in 0..3u32 {
            let q = rational(t, (p << h) as i64);
            let fit = if h == 0 {
                fitted_alpha(&Wave::Exact(q), &params, &rarefied_sizes(p, 12, 24)).unwrap()
            } else {
                halving_fit(t, h, p, 12, 24).unwrap()
            };
            assert!(
                (fit.alpha - exact).abs() < 0.05,
                "p={p} h={h}: fitted {} vs {exact}",
                fit.alpha
            );
        }
    }
}

#[test]
fn classify_reports_exact_alpha() {
    let params = ab(5, 3);
    let v = classify(&rational(1, 3), &params, &ClassifyOptions::default()).unwrap();
    assert_eq!(v.kind, VerdictKind::SingularContinuous);
    let fitted = v.diagnostics.fitted_alpha.unwrap();
    assert!((fitted - v.alpha.unwrap()).abs() < 0.05);
}

/// `sup ν_{U,Np+1}/(Np+1)^α` over the last two octaves below `2^24`.
fn limsup_ratio(t: i64, p: u64, params: &QuasicrystalParams) -> f64 {
    let alpha = alpha_exact(p, 0).unwrap();
    let w = Wave::Exact(rational(t, p as i64));
    let top = (1u64 << 24) / p;
    let mut best: f64 = 0.0;
    for i in 0..4096 {
        let n = (top as f64 * (2.0f64).powf(-2.0 * i as f64 / 4096.0)) as u64;
        let l = n * p + 1;
        let nu = approximant_sum_fast(l, &w, params).norm_sqr() / l as f64;
        best = best.max(nu / (l as f64).powf(alpha));
    }
    best
}

#[test]
fn limsup_constant_matches_profile_curve() {
    let params = ab(2, 1);
    let (t, p) = (1i64, 3u64);
    let d = rarefaction_domain(t, p, 24).unwrap();
    let ke = kappa_eta_exact(&Wave::Exact(rational(t, p as i64)), &params).norm();
    let s = (PI * t as f64 / p as f64).sin();
    let predicted = ke * d.curve_max_mod.powi(2) / (4.0 * s * s);
    let measured = limsup_ratio(t, p, &params);
    assert!(
        (measured / predicted - 1.0).abs() < 0.2,
        "measured {measured} predicted {predicted}"
    );
    // the product |κ_η|²·max|z|² over the box differs from the measured limsup
    let paper = ke * ke * d.max_mod.powi(2);
    assert!((measured / paper - 1.0).abs() > 0.2, "measured {measured} vs {paper}");
}

#[test]
fn domain_away_from_zero_prevents_extinction() {
    let params = ab(2, 1);
    for (t, p) in [(1i64, 3u64), (1, 5)] {
        let d = rarefaction_domain(t, p, 22).unwrap();
        assert!(d.min_mod <= d.curve_min_mod + 1e-12 && d.curve_max_mod <= d.max_mod + 1e-12);
        if d.contains_zero {
            continue;
        }
        let alpha = alpha_exact(p, 0).unwrap();
        let w = Wave::Exact(rational(t, p as i64));
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..20 {
            let mut lows = Vec::new();
            let mut n: u64 = rng.gen_range(1..64);
            while n * p < 1 << 22 {
                let l = n * p + 1;
                let nu = approximant_sum_fast(l, &w, &params).norm_sqr() / l as f64;
                lows.push(nu / (l as f64).powf(alpha));
                n = n * 2 + rng.gen_range(0..2);
            }
            let tail = &lows[lows.len() / 2..];
            let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min > 1e-3, "t={t} p={p}: {min}");
        }
    }
}
