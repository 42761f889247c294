use std::sync::OnceLock;

use euclid_companion::analysis::{egyptian_poly_check, euclid_values, linear_fit, series_probe, IdentityOutcome, SeriesClass};
use euclid_companion::companion::{
    build_companion, build_tilde, det_charpoly_at, euclid_companion, CompanionMatrix, E2Seed, VariantConfig,
};
use euclid_companion::exact_poly::{
    euclid_poly, euclid_recurrence, shifted_euclid_poly, BigIntPoly, Basis, EvalPrecision,
};
use euclid_companion::fields::{pseudospectrum_field, pseudozero_field, sigma_min, GridSpec, ScalarField};
use num_complex::Complex64;
use proptest::prelude::*;
use rug::{Integer, Rational};

fn e6() -> &'static CompanionMatrix {
    static M: OnceLock<CompanionMatrix> = OnceLock::new();
    M.get_or_init(|| euclid_companion(6).unwrap())
}

fn e6_field() -> &'static ScalarField {
    static F: OnceLock<ScalarField> = OnceLock::new();
    F.get_or_init(|| {
        let g = GridSpec::figure_default().with_resolution(150, 150).unwrap();
        pseudospectrum_field(e6(), &g, g.len()).unwrap()
    })
}

fn polys() -> &'static Vec<BigIntPoly> {
    static P: OnceLock<Vec<BigIntPoly>> = OnceLock::new();
    P.get_or_init(|| (1..=9).map(|k| euclid_poly(k).unwrap()).collect())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=50).prop_map(|(p, q)| Rational::from((p, q)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_matches_recurrence_at_rationals(k in 1u32..=7, x in rational()) {
        let p = &polys()[k as usize - 1];
        prop_assert_eq!(p.eval_rational(&x), euclid_values(k, &x).pop().unwrap());
    }

    #[test]
    fn shifted_basis_recovers_the_polynomial(k in 1u32..=7, x in rational()) {
        let u = &x + Rational::from((1, 2));
        prop_assert_eq!(shifted_euclid_poly(k).unwrap().eval_rational(&u), polys()[k as usize - 1].eval_rational(&x));
    }

    #[test]
    fn tilde_charpoly_is_e_k_minus_one(k in 2u32..=9, x in -40i64..=40) {
        let x = Integer::from(x);
        let want = polys()[k as usize - 1].eval_integer(&x) - 1u32;
        prop_assert_eq!(det_charpoly_at(&build_tilde(k).unwrap(), &x), want);
    }

    #[test]
    fn variants_share_the_charpoly(seed in 0usize..4, order in permutation(5), x in -30i64..=30) {
        let cfg = VariantConfig { e2_seed: E2Seed::ALL[seed], block_order: Some(order) };
        let m = build_companion(6, &cfg).unwrap();
        let x = Integer::from(x);
        prop_assert_eq!(det_charpoly_at(&m, &x), polys()[5].eval_integer(&x));
    }

    #[test]
    fn sigma_min_is_one_lipschitz(re in -1.8f64..0.8, im in -1.3f64..1.3, dr in -0.05f64..0.05, di in -0.05f64..0.05) {
        let z = Complex64::new(re, im);
        let w = z + Complex64::new(dr, di);
        let (a, b) = (sigma_min(e6(), z), sigma_min(e6(), w));
        prop_assert!((a - b).abs() <= (z - w).norm() * (1.0 + 1e-8) + 1e-12, "{} {} {}", a, b, (z - w).norm());
    }

    #[test]
    fn sigma_min_is_conjugation_symmetric(re in -1.8f64..0.8, im in -1.3f64..1.3) {
        let z = Complex64::new(re, im);
        let (a, b) = (sigma_min(e6(), z), sigma_min(e6(), z.conj()));
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-3), "{} {}", a, b);
    }

    #[test]
    fn sigma_min_bounds_the_scaled_polynomial(re in -1.8f64..0.8, im in -1.3f64..1.3) {
        // |det(zI - A)| = |E_6(z)| is the product of the singular values,
        // each at most ||zI - A||_2 <= |z| + ||A||_2 with ||A||_2 <= 3
        let z = Complex64::new(re, im);
        let s = sigma_min(e6(), z);
        let (e, _) = euclid_recurrence(6, z);
        let top = z.norm() + 3.0;
        prop_assert!(e.norm().ln() <= s.ln() + 31.0 * top.ln() + 1e-9);
    }

    #[test]
    fn pseudozero_rows_mirror(x in -1.5f64..0.5, y in 0.01f64..1.2, basis in prop_oneof![Just(Basis::Monomial), Just(Basis::Shifted)]) {
        let g = GridSpec::new((x, x + 0.01), (-y, y), 2, 2).unwrap();
        let f = pseudozero_field(6, basis, &g, EvalPrecision::Binary64, 4).unwrap();
        prop_assert_eq!(f.value(0, 0), f.value(0, 1));
        prop_assert_eq!(f.value(1, 0), f.value(1, 1));
        prop_assert!(f.value(0, 0) >= 0.0);
    }

    #[test]
    fn egyptian_identity_for_rationals(p in 1u32..=300, q in 1u32..=100, n in 1u32..=5) {
        let lambda = Rational::from((p, q));
        prop_assert_ne!(egyptian_poly_check(n, &lambda).unwrap(), IdentityOutcome::Fails);
    }

    #[test]
    fn positive_reals_converge(x in 0.1f64..3.0) {
        let r = series_probe(Complex64::new(x, 0.0), 60).unwrap();
        prop_assert_eq!(r.classification, SeriesClass::Converging);
        let s = r.partial_sums.last().unwrap();
        prop_assert!((s.re - 1.0 / x).abs() < 1e-9 / x.min(1.0), "{} vs {}", s.re, 1.0 / x);
    }

    #[test]
    fn linear_fit_recovers_lines(a in -3.0f64..3.0, b in -5.0f64..5.0, n in 3usize..20) {
        let f = linear_fit((0..n).map(|i| (i as f64, a * i as f64 + b)).collect()).unwrap();
        prop_assert!((f.slope - a).abs() < 1e-9 && (f.intercept - b).abs() < 1e-9);
    }
}

#[test]
fn field_is_lipschitz_on_ten_thousand_adjacent_pairs() {
    use rand::{Rng, SeedableRng};
    let f = e6_field();
    let g = f.spec;
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..10_000 {
        let (ix, iy) = (rng.gen_range(0..g.nx - 1), rng.gen_range(0..g.ny - 1));
        let (jx, jy, h) = if rng.gen_bool(0.5) { (ix + 1, iy, g.dx()) } else { (ix, iy + 1, g.dy()) };
        let d = (f.value(ix, iy) - f.value(jx, jy)).abs();
        assert!(d <= h * (1.0 + 1e-9) + 1e-12, "({ix},{iy})-({jx},{jy}): {d} > {h}");
    }
}

#[test]
fn sigma_min_vanishes_only_at_eigenvalues() {
    use rand::{Rng, SeedableRng};
    let m = e6();
    let roots = euclid_companion::spectra::eigenvalues(m).unwrap();
    for &z in &roots {
        assert!(sigma_min(m, z) < 1e-12);
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(-1.8..0.8), rng.gen_range(-1.3..1.3));
        let gap = roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
        // resolvent norms stay modest: condition numbers are below 2 at k = 6
        let s = sigma_min(m, z);
        assert!(s > 0.0 && s >= gap * 1e-3, "z = {z}, sigma = {s}, gap = {gap}");
    }
}
