use euclid_companion::companion::euclid_companion;
use euclid_companion::spectra::{compute_spectrum, eigenvalues, sigma_min, HessenbergRows};
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

fn shifted_dense(a: &[f64], n: usize, z: Complex64) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { Complex::new(z.re, z.im) } else { Complex::new(0.0, 0.0) };
        d - Complex::new(a[i * n + j], 0.0)
    })
}

fn svd_sigma_min(a: &[f64], n: usize, z: Complex64) -> f64 {
    shifted_dense(a, n, z).singular_values().min()
}

#[test]
fn eigenvalues_match_nalgebra_schur() {
    let m = euclid_companion(6).unwrap();
    let n = m.n();
    let a = DMatrix::from_row_slice(n, n, &m.to_dense());
    let mut oracle: Vec<Complex64> = a
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    oracle.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let ours = eigenvalues(&m).unwrap();
    for z in &ours {
        let nearest = oracle.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-10, "{z}");
    }
}

#[test]
fn condition_numbers_match_the_resolvent_slope() {
    // near a simple eigenvalue, sigma_min(zI - A) ~ |z - lambda| / K_e
    for k in [5, 7] {
        let s = compute_spectrum(k).unwrap();
        let m = euclid_companion(k).unwrap();
        let a = m.to_dense();
        let n = m.n();
        for (i, &lambda) in s.eigenvalues.iter().enumerate() {
            let delta = 1e-6;
            let z = lambda + Complex64::new(delta, 0.0);
            let estimate = delta / svd_sigma_min(&a, n, z);
            let rel = (estimate - s.cond[i]).abs() / s.cond[i];
            assert!(rel < 1e-4, "k={k} {lambda}: {estimate} vs {}", s.cond[i]);
        }
    }
}

#[test]
fn sigma_min_matches_svd() {
    let m = euclid_companion(6).unwrap();
    let a = m.to_dense();
    for z in [Complex64::new(10.0, 0.0), Complex64::new(0.1, 0.7), Complex64::new(-1.2, -0.3)] {
        let ours = sigma_min(&HessenbergRows::from_companion(&m), z, 1e-13, 500);
        let svd = svd_sigma_min(&a, m.n(), z);
        assert!((ours - svd).abs() <= 1e-8 * svd, "{z}: {ours} vs {svd}");
    }
}
