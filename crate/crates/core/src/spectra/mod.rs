//! Eigenvalues of the companion matrices, their condition numbers, and
//! residual diagnostics.

mod hessenberg_lu;
mod qr;

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use hessenberg_lu::{eigenvectors, sigma_min, HessenbergLu, HessenbergRows};
pub use qr::{balance, hessenberg_eigenvalues, QrOptions};

use crate::companion::{build_companion, CompanionMatrix, VariantConfig};
use crate::exact_poly::{euclid_poly, euclid_recurrence, recurrence_relative_residual, Binary64Evaluator};
use crate::{Error, Result};

/// Largest generation the dense eigensolver accepts without an override.
pub const MAX_EIGS_K: u32 = 12;

/// Relative stopping tolerance for `sigma_min` in diagnostics.
const SIGMA_REL_TOL: f64 = 1e-10;
const SIGMA_MAX_ITER: usize = 50;

/// Sort by real part then imaginary part, and make every non-real value the
/// exact conjugate of a partner.
fn pair_and_sort(mut ev: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let mut upper: Vec<Complex64> = ev.iter().copied().filter(|z| z.im > 0.0).collect();
    let lower = ev.iter().filter(|z| z.im < 0.0).count();
    if upper.len() != lower {
        return Err(Error::Precondition(format!(
            "{} eigenvalues in the upper half-plane but {lower} in the lower",
            upper.len()
        )));
    }
    let mut real: Vec<Complex64> = ev.drain(..).filter(|z| z.im == 0.0).collect();
    upper.extend(upper.clone().into_iter().map(|z| z.conj()).collect::<Vec<_>>());
    real.extend(upper);
    real.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(real)
}

/// All eigenvalues of `m`, sorted by real part and then imaginary part.
pub fn eigenvalues(m: &CompanionMatrix) -> Result<Vec<Complex64>> {
    eigenvalues_with(m, QrOptions::default())
}

pub fn eigenvalues_with(m: &CompanionMatrix, opts: QrOptions) -> Result<Vec<Complex64>> {
    let mut a = m.to_dense();
    pair_and_sort(hessenberg_eigenvalues(&mut a, m.n(), opts)?)
}

/// `1 / |y^H x|` for unit right and left eigenvectors at `lambda`.
pub fn eig_condition(m: &CompanionMatrix, lambda: Complex64) -> Result<f64> {
    eig_condition_rows(&HessenbergRows::from_companion(m), lambda)
}

fn eig_condition_rows(a: &HessenbergRows, lambda: Complex64) -> Result<f64> {
    let (x, y) = eigenvectors(a, lambda)?;
    let dot: Complex64 = y.iter().zip(&x).map(|(yi, xi)| yi.conj() * xi).sum();
    let cond = 1.0 / dot.norm();
    if cond.is_finite() {
        // rounding can put a perfectly conditioned value a hair under 1
        Ok(cond.max(1.0))
    } else {
        Err(Error::InverseIteration(format!("left and right eigenvectors orthogonal at {lambda}")))
    }
}

/// Newton's method on `E_k` with value and derivative from the recurrence.
pub fn newton_refine(k: u32, lambda0: Complex64) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut z = lambda0;
    let mut last_step = f64::INFINITY;
    let mut growing = 0;
    for _ in 0..10 {
        let (e, de) = euclid_recurrence(k, z);
        if e == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let step = e / de;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(Error::NewtonDivergence(format!("non-finite step from {z}")));
        }
        z -= step;
        let size = step.norm();
        if size < 1e-14 * z.norm() {
            return Ok(z);
        }
        if size > last_step {
            growing += 1;
            if growing >= 3 {
                return Err(Error::NewtonDivergence(format!(
                    "step grew three times in a row starting from {lambda0}"
                )));
            }
        } else {
            growing = 0;
        }
        last_step = size;
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSummary {
    pub count: usize,
    /// `max |lambda + 1/2|`
    pub max_shifted_modulus: f64,
    pub max_modulus: f64,
    pub left_half_plane: usize,
    pub right_half_plane: usize,
    pub imaginary_axis: usize,
}

pub fn summarize_roots(ev: &[Complex64]) -> RootSummary {
    let shift = Complex64::new(0.5, 0.0);
    RootSummary {
        count: ev.len(),
        max_shifted_modulus: ev.iter().map(|z| (z + shift).norm()).fold(0.0, f64::max),
        max_modulus: ev.iter().map(|z| z.norm()).fold(0.0, f64::max),
        left_half_plane: ev.iter().filter(|z| z.re < 0.0).count(),
        right_half_plane: ev.iter().filter(|z| z.re > 0.0).count(),
        imaginary_axis: ev.iter().filter(|z| z.re == 0.0).count(),
    }
}

/// Summary of the roots of `E_k`, from the default companion matrix.
pub fn root_summary(k: u32) -> Result<RootSummary> {
    let m = build_companion(k, &VariantConfig::default())?;
    Ok(summarize_roots(&eigenvalues(&m)?))
}

/// Eigenvalues of one companion matrix with per-eigenvalue diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub k: u32,
    pub eigenvalues: Vec<Complex64>,
    /// Eigenvalue condition number `1 / |y^H x|`.
    pub cond: Vec<f64>,
    /// `|E_k(lambda)| / B_k(|lambda|)` from the coefficient-free recurrence.
    pub residual: Vec<f64>,
    /// `sigma_min(lambda I - E_k)`.
    pub sigma_resid: Vec<f64>,
    /// The same relative residual from binary64 monomial coefficients, where
    /// they are representable.
    pub monomial_residual: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_cond(&self) -> f64 {
        self.cond.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }

    /// Columns `re, im, cond, resid_recurrence, resid_sigma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,cond,resid_recurrence,resid_sigma\n");
        for i in 0..self.len() {
            let z = self.eigenvalues[i];
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e}",
                z.re, z.im, self.cond[i], self.residual[i], self.sigma_resid[i]
            );
        }
        out
    }
}

/// Eigenvalues and diagnostics of an arbitrary companion matrix whose
/// characteristic polynomial is `E_k`.
pub fn spectrum_of(m: &CompanionMatrix, k: u32, opts: QrOptions) -> Result<Spectrum> {
    let eigenvalues = eigenvalues_with(m, opts)?;
    let a = HessenbergRows::from_companion(m);
    // conjugates share both diagnostics, so only the closed upper half-plane is solved
    let upper: Vec<usize> = (0..eigenvalues.len()).filter(|&i| eigenvalues[i].im >= 0.0).collect();
    let solved: Vec<(f64, f64)> = upper
        .par_iter()
        .map(|&i| {
            let z = eigenvalues[i];
            let cond = eig_condition_rows(&a, z)?;
            Ok((cond, sigma_min(&a, z, SIGMA_REL_TOL, SIGMA_MAX_ITER)))
        })
        .collect::<Result<_>>()?;
    let mut cond = vec![0.0; eigenvalues.len()];
    let mut sigma_resid = vec![0.0; eigenvalues.len()];
    for (&i, &(c, s)) in upper.iter().zip(&solved) {
        cond[i] = c;
        sigma_resid[i] = s;
        if eigenvalues[i].im > 0.0 {
            // partner sits at the mirrored position among equal real parts
            let j = eigenvalues
                .iter()
                .position(|w| *w == eigenvalues[i].conj())
                .expect("eigenvalues are paired");
            cond[j] = c;
            sigma_resid[j] = s;
        }
    }
    let residual = eigenvalues
        .iter()
        .map(|&z| recurrence_relative_residual(k, z))
        .collect::<Result<Vec<_>>>()?;
    let monomial_residual = euclid_poly(k)
        .ok()
        .and_then(|p| Binary64Evaluator::new(&p).ok())
        .and_then(|ev| {
            eigenvalues
                .iter()
                .map(|&z| ev.relative_residual(z).ok())
                .collect::<Option<Vec<_>>>()
        });
    Ok(Spectrum {
        k,
        eigenvalues,
        cond,
        residual,
        sigma_resid,
        monomial_residual,
    })
}

/// Spectrum of the default `E_k` companion matrix.
pub fn compute_spectrum(k: u32) -> Result<Spectrum> {
    compute_spectrum_with(k, &VariantConfig::default(), QrOptions::default())
}

pub fn compute_spectrum_with(k: u32, cfg: &VariantConfig, opts: QrOptions) -> Result<Spectrum> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let m = build_companion(k, cfg)?;
    spectrum_of(&m, k, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::companion::{euclid_companion, E2Seed};

    #[test]
    fn first_generations() {
        let e1 = eigenvalues(&euclid_companion(1).unwrap()).unwrap();
        assert_eq!(e1, [Complex64::new(-1.0, 0.0)]);
        let e2 = eigenvalues(&euclid_companion(2).unwrap()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((e2[0] - Complex64::new(-0.5, -h)).norm() < 1e-15);
        assert!((e2[1] - Complex64::new(-0.5, h)).norm() < 1e-15);
        assert_eq!(eig_condition(&euclid_companion(1).unwrap(), e1[0]).unwrap(), 1.0);
        for z in e2 {
            let c = eig_condition(&euclid_companion(2).unwrap(), z).unwrap();
            assert!(c >= 1.0 && c.is_finite());
        }
    }

    #[test]
    fn e4_residuals_from_exact_coefficients() {
        let s = compute_spectrum(4).unwrap();
        assert_eq!(s.len(), 8);
        let p = euclid_poly(4).unwrap();
        let ev = Binary64Evaluator::new(&p).unwrap();
        for &z in &s.eigenvalues {
            assert!(ev.relative_residual(z).unwrap() < 1e-13, "{z}");
        }
    }

    #[test]
    fn invariants_through_k10() {
        for k in 1..=10 {
            let s = compute_spectrum(k).unwrap();
            assert_eq!(s.len(), 1 << (k - 1));
            for &z in &s.eigenvalues {
                if z.im != 0.0 {
                    assert!(s.eigenvalues.contains(&z.conj()), "k={k} {z}");
                }
            }
            assert!(s.cond.iter().all(|&c| c >= 1.0), "k={k}");
            assert!(s.max_residual() <= 1e-10, "k={k} {}", s.max_residual());
        }
    }

    #[test]
    fn e6_is_well_conditioned() {
        let s = compute_spectrum(6).unwrap();
        assert!(s.max_cond() < 10.0, "{}", s.max_cond());
    }

    #[test]
    fn variants_agree() {
        let base = eigenvalues(&euclid_companion(5).unwrap()).unwrap();
        for seed in E2Seed::ALL {
            let m = build_companion(5, &VariantConfig::with_seed(seed)).unwrap();
            let ev = eigenvalues(&m).unwrap();
            for (a, b) in base.iter().zip(&ev) {
                assert!((a - b).norm() < 1e-8, "{seed:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_refine(1, Complex64::new(-0.9, 0.0)).unwrap(), Complex64::new(-1.0, 0.0));
        let w = newton_refine(2, Complex64::new(-0.5, 0.8)).unwrap();
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-14);
        for k in 1..=8 {
            for z in eigenvalues(&euclid_companion(k).unwrap()).unwrap() {
                let r = newton_refine(k, z).unwrap();
                assert!((r - z).norm() < if k <= 6 { 1e-8 } else { 1e-6 }, "k={k} {z}");
            }
        }
    }

    #[test]
    fn root_summaries() {
        assert_eq!(root_summary(1).unwrap().max_shifted_modulus, 0.5);
        let s = root_summary(2).unwrap();
        assert!((s.max_shifted_modulus - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(s.left_half_plane, 2);
    }

    #[test]
    fn sigma_resid_is_small_and_csv_has_rows() {
        let s = compute_spectrum(5).unwrap();
        assert!(s.sigma_resid.iter().all(|&v| v < 1e-12), "{:?}", s.sigma_resid);
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.starts_with("re,im,cond,resid_recurrence,resid_sigma\n"));
    }
}
