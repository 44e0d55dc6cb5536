use num_complex::Complex64;
use proptest::prelude::*;

use tmq_core::arith::{gcd, is_prime, multiplicative_order};
use tmq_core::diffract::{
    approximant_sum_fast, fourier_sum, geometric_sum, is_bragg, riesz_product, eta_sum, Wave,
};
use tmq_core::math::{ComplexSum, Turns};
use tmq_core::quadfield::{class_number_detail, classify_prime, dirichlet_l1, fundamental_unit, hua_bound_holds, PrimeClass};
use tmq_core::rareclass::{rarefied_sum_direct, rarefied_vector, rarefied_vector_shifted, transfer_matrix};
use tmq_core::spectrum::{
    class_invariance_check, classify, growth_regime, halving_reduction, normalize_wavevector, rarefied_reduction,
    ClassifyOptions, GrowthRegime, VerdictKind,
};
use tmq_core::tmcore::{digit_sum, point, rational, tm_prefix, tm_sign, QuasicrystalParams, SliceWeights, UnitWeights};
use tmq_core::Rational;

fn params() -> impl Strategy<Value = QuasicrystalParams> {
    (1i64..40, 1i64..40, 1i64..12).prop_filter_map("need b < a", |(x, y, d)| {
        let (a, b) = if x > y { (x, y) } else { (y, x) };
        (a != b).then(|| QuasicrystalParams::new(rational(a, d), rational(b, d)).unwrap())
    })
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefix_matches_sign(len in 1usize..(1 << 20)) {
        let pre = tm_prefix(len);
        for n in [0, len / 3, len / 2, len - 1] {
            prop_assert_eq!(pre.values()[n], tm_sign(n as u64));
        }
    }

    #[test]
    fn sign_is_parity_of_digit_sum(n in any::<u64>()) {
        prop_assert_eq!(tm_sign(n) == 1, digit_sum(n).is_multiple_of(2));
        prop_assert_eq!(tm_sign(2 * (n >> 1)), tm_sign(n >> 1));
    }

    #[test]
    fn gaps_are_tiles(p in params(), n in -500i64..500) {
        let gap = point(n + 1, &p) - point(n, &p);
        prop_assert!(&gap == p.a() || &gap == p.b());
    }

    #[test]
    fn even_points_are_lattice(p in params(), n in -500i64..500) {
        let sum = p.a() + p.b();
        prop_assert_eq!(point(2 * n, &p), sum * Rational::from_integer(n.into()));
    }

    #[test]
    fn riesz_identity(n in 1u32..14, k in 0.0f64..1.0) {
        let direct = eta_sum(1 << n, Turns::approx(k)).norm_sqr();
        let prod = riesz_product(n, k);
        prop_assert!((direct - prod).abs() <= 1e-9 * prod.max(1.0));
    }

    #[test]
    fn geometric_sum_matches_direct(l in 0u64..400, num in -50i128..50, den in 1u64..64) {
        let x = Turns::exact(num, den);
        let mut acc = ComplexSum::new();
        for j in 0..l {
            acc.add(x.times(j).unit());
        }
        prop_assert!((geometric_sum(l, x) - acc.value()).norm() <= 1e-9 * (l as f64).max(1.0));
    }

    #[test]
    fn fast_sum_matches_direct(p in params(), l in 1u64..600, num in 0i64..40, den in 1i64..40) {
        let w = Wave::Exact(rational(num, den));
        let fast = approximant_sum_fast(l, &w, &p);
        let direct = fourier_sum(&UnitWeights, l, &w, &p);
        prop_assert!((fast - direct).norm() <= 1e-9 * l as f64);
    }

    #[test]
    fn rarefied_recursion(p in odd_prime(), n in 0u64..5000) {
        let v = rarefied_vector(p, n).unwrap();
        for i in [0, 1 % p, p - 1] {
            prop_assert_eq!(v.get(i), rarefied_sum_direct(p, i, n).unwrap());
        }
        let total: i64 = (0..n).map(|j| i64::from(tm_sign(j))).sum();
        prop_assert_eq!(v.column_sum(), total);
    }

    #[test]
    fn transfer_recursion(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), n in 1u64..3000) {
        let m = transfer_matrix(p).unwrap();
        let v = rarefied_vector(p, n).unwrap().to_big();
        let shifted = rarefied_vector_shifted(p, n, m.s()).unwrap();
        prop_assert_eq!(m.apply(&v), shifted);
    }

    #[test]
    fn order_divides_totient(p in odd_prime()) {
        let s = multiplicative_order(2, p).unwrap();
        prop_assert_eq!((p - 1) % s, 0);
    }

    #[test]
    fn classes_partition(p in odd_prime()) {
        let s = multiplicative_order(2, p).unwrap();
        let class = classify_prime(p).unwrap();
        let expected = if s == p - 1 {
            PrimeClass::P1
        } else if 2 * s == p - 1 {
            if p % 4 == 1 { PrimeClass::P21 } else { PrimeClass::P23 }
        } else {
            PrimeClass::Other
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn verdict_partition(num in -200i64..200, den in 1i64..200) {
        let q = rational(num, den);
        let p = QuasicrystalParams::from_ints(2, 1).unwrap();
        let v = classify(&q, &p, &ClassifyOptions { fit_horizon: None }).unwrap();
        prop_assert_eq!(v.kind == VerdictKind::Bragg, is_bragg(&q));
        prop_assert!(v.kind != VerdictKind::AlmostSureNull);
        if v.kind == VerdictKind::SingularContinuous {
            let nw = normalize_wavevector(&q).unwrap();
            prop_assert!(nw.p > 1);
        }
    }

    #[test]
    fn regimes_split_at_zero(alpha in -0.999f64..0.999) {
        let r = growth_regime(alpha).unwrap();
        if alpha > 1e-12 {
            prop_assert_eq!(r, GrowthRegime::SizeIncreasing);
        } else if alpha < -1e-12 {
            prop_assert_eq!(r, GrowthRegime::SizeDecreasing);
        }
    }

    #[test]
    fn rarefied_reduction_identity(p in prop::sample::select(vec![3u64, 5, 7]), t in 1i64..7, n in 1u64..100) {
        prop_assume!(t % p as i64 != 0);
        let r = rarefied_reduction(p, t, n).unwrap();
        prop_assert!((r.direct - r.rarefied_np1).abs() <= 1e-9 * r.direct.max(1.0));
    }

    #[test]
    fn halving_identity(p in prop::sample::select(vec![3u64, 5, 7, 11]), h in 0u32..5, extra in 1u32..14, t in 1i64..200) {
        let t = 2 * t - 1;
        prop_assume!(t % p as i64 != 0);
        let r = halving_reduction(t, h, p, h + extra).unwrap();
        let rhs = r.prefactor * r.reduced_density;
        prop_assert!((r.full_density - rhs).abs() <= 1e-9 * r.full_density.max(1e-12));
    }

    #[test]
    fn marcinkiewicz_bound(seed in any::<u64>(), q in 0.0f64..1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w1: Vec<Complex64> = (0..4096).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let w2: Vec<Complex64> = w1.iter().map(|w| w * rng.gen_range(0.5..1.0)).collect();
        let p = QuasicrystalParams::from_ints(3, 2).unwrap();
        let rep = class_invariance_check(&SliceWeights(&w1), &SliceWeights(&w2), &Wave::Approx(q), &p, 4096).unwrap();
        prop_assert!(rep.bound_holds);
        prop_assert!(rep.gap_bound_holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bragg_ratio_drift(q in prop::sample::select(vec![(0i64, 1i64), (1, 2)]), p in params()) {
        let w = Wave::Exact(rational(q.0, q.1));
        let ratio = |n: u32| {
            let l = 1u64 << n;
            approximant_sum_fast(l, &w, &p).norm_sqr() / (l as f64 * l as f64)
        };
        for n in 16..24 {
            let (a, b) = (ratio(n), ratio(n + 1));
            prop_assert!((a - b).abs() <= 1e-6 * a.max(1e-300) || (a < 1e-300 && b < 1e-300));
        }
    }
}

#[test]
fn unit_norms_and_class_numbers() {
    for p in (5u64..400).filter(|&p| is_prime(p) && p % 4 == 1) {
        let u = fundamental_unit(p).unwrap();
        let n = u.norm_exact();
        assert!(n == 1.into() || n == (-1).into(), "p={p}");
        let c = class_number_detail(p).unwrap();
        assert!(c.h >= 1 && (c.raw - c.h as f64).abs() < 1e-6, "p={p}");
        assert!(hua_bound_holds(p, dirichlet_l1(p).unwrap()));
        assert!(gcd(p, 2) == 1);
    }
}
