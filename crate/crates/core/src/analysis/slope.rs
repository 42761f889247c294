use serde::Serialize;

use crate::spectra::{compute_spectrum, MAX_EIGS_K};
use crate::{Error, Result};

/// Least-squares line through `(log degree, log value)` points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fit `y = slope x + intercept`; needs three points with increasing `x`.
pub fn linear_fit(points: Vec<(f64, f64)>) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!("a fit needs at least 3 points, got {}", points.len())));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Precondition("abscissae must be strictly increasing".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit {
        points,
        slope,
        intercept,
        r2,
    })
}

/// Fit of `log value` against `log degree`.
pub fn loglog_fit(degrees: &[f64], values: &[f64]) -> Result<SlopeFit> {
    if degrees.len() != values.len() {
        return Err(Error::InvalidArgument("degrees and values differ in length".into()));
    }
    if degrees.iter().chain(values).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("log-log fit needs positive data".into()));
    }
    linear_fit(degrees.iter().zip(values).map(|(d, v)| (d.ln(), v.ln())).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSample {
    pub k: u32,
    pub degree: usize,
    pub max_cond: f64,
    pub elapsed_ms: u128,
}

/// Largest eigenvalue condition number of `E_k` for each `k`, in order. On an
/// eigensolver failure the samples gathered so far are returned with the
/// error.
pub fn max_conditions(k_min: u32, k_max: u32) -> (Vec<ConditionSample>, Option<Error>) {
    let mut out = Vec::new();
    for k in k_min..=k_max {
        let start = std::time::Instant::now();
        match compute_spectrum(k) {
            Ok(s) => out.push(ConditionSample {
                k,
                degree: s.len(),
                max_cond: s.max_cond(),
                elapsed_ms: start.elapsed().as_millis(),
            }),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

pub fn fit_samples(samples: &[ConditionSample]) -> Result<SlopeFit> {
    let degrees: Vec<f64> = samples.iter().map(|s| s.degree as f64).collect();
    let values: Vec<f64> = samples.iter().map(|s| s.max_cond).collect();
    loglog_fit(&degrees, &values)
}

fn check_range(k_min: u32, k_max: u32) -> Result<()> {
    if k_min < 2 || k_max > MAX_EIGS_K || k_max < k_min + 2 {
        return Err(Error::Precondition(format!(
            "need 2 <= k_min, k_min + 2 <= k_max <= {MAX_EIGS_K} for at least 3 fit points; got {k_min}..={k_max}"
        )));
    }
    Ok(())
}

/// Growth exponent of the largest eigenvalue condition number with degree.
pub fn condition_slope_fit(k_min: u32, k_max: u32) -> Result<SlopeFit> {
    check_range(k_min, k_max)?;
    let (samples, err) = max_conditions(k_min, k_max);
    if let Some(e) = err {
        return Err(e);
    }
    fit_samples(&samples)
}
