//! Runs the independent checks, possibly in parallel, and collects the
//! results by name.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    conditioning_comparison, egyptian_number_check, egyptian_poly_check, euclid_constant, fit_samples,
    max_conditions, series_probe, IdentityOutcome, SeriesClass,
};
use crate::companion::{euclid_companion, verify_charpoly, E2Seed, VariantConfig};
use crate::exact_poly::{euclid_numbers, euclid_poly, unimodality_check};
use crate::fields::GridSpec;
use crate::spectra::{compute_spectrum, newton_refine, MAX_EIGS_K};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Report-only: never a failure.
    Report,
    /// The computation itself failed.
    Error,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Report => "report",
            CheckStatus::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    pub data: Value,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub checks: BTreeMap<String, CheckResult>,
}

impl SuiteReport {
    pub fn hard_failure(&self) -> bool {
        self.checks
            .values()
            .any(|c| matches!(c.status, CheckStatus::Fail | CheckStatus::Error))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_table(&self) -> String {
        let width = self.checks.keys().map(String::len).max().unwrap_or(5).max(5);
        let mut s = format!("{:<width$}  status  elapsed_ms\n", "check");
        for (name, c) in &self.checks {
            let _ = writeln!(s, "{name:<width$}  {:<6}  {}", c.status.as_str(), c.elapsed_ms);
        }
        s
    }
}

/// Exact verification of the characteristic polynomial is limited to this `k`
/// unless forced.
pub const VERIFY_MAX_K: u32 = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub k_max: u32,
    /// Only checks whose name starts with this.
    pub filter: Option<String>,
    pub egyptian_n: usize,
    pub random_lambdas: usize,
    pub seed: u64,
    pub precision_bits: u32,
    /// Lift the exact-verification cap to `k = 10`.
    pub force: bool,
    /// Adds the condition slope fit over `2..=k`.
    pub slope_k_max: Option<u32>,
    /// Adds merge-band rows at these `k` on a `n x n` grid.
    pub table_ks: Vec<u32>,
    pub table_grid: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            k_max: 8,
            filter: None,
            egyptian_n: 10,
            random_lambdas: 20,
            seed: 0x5EED,
            precision_bits: 2048,
            force: false,
            slope_k_max: None,
            table_ks: Vec::new(),
            table_grid: 400,
        }
    }
}

type Check = Box<dyn Fn() -> Result<(CheckStatus, Value)> + Send + Sync>;

/// Random rationals `p/q` in `(0, 3]` with `q <= 64`.
pub fn random_rationals(n: usize, seed: u64) -> Vec<Rational> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q: u32 = rng.gen_range(1..=64);
            let p: u32 = rng.gen_range(1..=3 * q);
            Rational::from((p, q))
        })
        .collect()
}

fn euclid_numbers_check(k_max: u32) -> Result<(CheckStatus, Value)> {
    let e = euclid_numbers(k_max.max(5) as usize);
    let first_ok = e[..5] == [2, 3, 7, 43, 1807].map(Integer::from);
    let mut mismatches = Vec::new();
    for k in 1..=k_max.max(1) {
        if euclid_poly(k)?.eval_integer(&Integer::from(1)) != e[k as usize - 1] {
            mismatches.push(k);
        }
    }
    Ok((
        CheckStatus::from_bool(first_ok && mismatches.is_empty()),
        json!({"first": e[..5].iter().map(Integer::to_string).collect::<Vec<_>>(), "k_max": k_max.max(1), "poly_at_one_mismatches": mismatches}),
    ))
}

fn egyptian_numbers(n_max: usize) -> Result<(CheckStatus, Value)> {
    let mut failed = Vec::new();
    for n in 1..=n_max {
        if !egyptian_number_check(n)? {
            failed.push(n);
        }
    }
    Ok((CheckStatus::from_bool(failed.is_empty()), json!({"n_max": n_max, "failed": failed})))
}

fn egyptian_polys(count: usize, seed: u64) -> Result<(CheckStatus, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for lambda in random_rationals(count, seed) {
        let outcome = egyptian_poly_check(5, &lambda)?;
        ok &= outcome != IdentityOutcome::Fails;
        rows.push(json!({"lambda": lambda.to_string(), "result": outcome}));
    }
    Ok((CheckStatus::from_bool(ok), json!({"n": 5, "seed": seed, "cases": rows})))
}

fn structure(k_max: u32) -> Result<(CheckStatus, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..=k_max.min(14) {
        let m = euclid_companion(k)?;
        let dim_ok = m.n() == 1 << (k - 1);
        let height_ok = m.height() == 1;
        let sub_ok = m.subdiagonal().iter().all(|&s| s == -1);
        let corner_ok = k < 2 || m.corner() == 1;
        ok &= dim_ok && height_ok && sub_ok && corner_ok;
        rows.push(json!({"k": k, "n": m.n(), "nnz": m.nnz(), "height": m.height(), "subdiagonal_ok": sub_ok, "corner": m.corner()}));
    }
    Ok((CheckStatus::from_bool(ok), Value::Array(rows)))
}

fn charpoly(k_max: u32, cap: u32, seed: u64) -> Result<(CheckStatus, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for k in 1..=k_max.min(cap) {
        let v = verify_charpoly(k, &VariantConfig::default())?;
        ok &= v.verified;
        rows.push(json!({"k": k, "verified": v.verified, "points": v.points_checked}));
    }
    let mut variants = Vec::new();
    if k_max >= 5 {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut cfgs: Vec<VariantConfig> = E2Seed::ALL.iter().map(|&s| VariantConfig::with_seed(s)).collect();
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..4).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
            cfgs.push(VariantConfig {
                e2_seed: E2Seed::ALL[rng.gen_range(0..4)],
                block_order: Some(order),
            });
        }
        for cfg in cfgs {
            let v = verify_charpoly(5, &cfg)?;
            ok &= v.verified;
            variants.push(json!({"e2_seed": cfg.e2_seed, "block_order": cfg.block_order, "verified": v.verified}));
        }
    }
    Ok((CheckStatus::from_bool(ok), json!({"default": rows, "k5_variants": variants})))
}

fn eigen_accuracy(k_max: u32) -> Result<(CheckStatus, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for k in 1..=k_max.min(10) {
        let s = compute_spectrum(k)?;
        let ev = &s.eigenvalues;
        let paired = ev.iter().all(|z| z.im == 0.0 || ev.contains(&z.conj()));
        let mut worst = 0.0f64;
        for &z in ev {
            let refined = newton_refine(k, z)?;
            worst = worst.max((refined - z).norm());
        }
        let good = paired && worst < 1e-8 && ev.len() == 1 << (k - 1);
        ok &= good;
        rows.push(json!({"k": k, "count": ev.len(), "max_newton_correction": worst, "conjugates_paired": paired, "max_cond": s.max_cond()}));
    }
    Ok((CheckStatus::from_bool(ok), Value::Array(rows)))
}

fn constant(bits: u32) -> Result<(CheckStatus, Value)> {
    let c = euclid_constant(10, bits)?;
    let ok = c.floor_check && c.estimate.starts_with("1.264");
    Ok((CheckStatus::from_bool(ok), serde_json::to_value(&c)?))
}

fn series() -> Result<(CheckStatus, Value)> {
    let expected = [
        (1.0, SeriesClass::Converging),
        (0.5, SeriesClass::Converging),
        (2.0, SeriesClass::Converging),
        (-0.5, SeriesClass::Diverging),
    ];
    let mut rows = Vec::new();
    for (x, want) in expected {
        let r = series_probe(Complex64::new(x, 0.0), 25)?;
        rows.push(json!({
            "lambda": x,
            "classification": r.classification,
            "expected": want,
            "matches": r.classification == want,
            "reason": r.reason,
            "last_partial_sum": r.partial_sums.last().map(|s| [s.re, s.im]),
        }));
    }
    Ok((CheckStatus::Report, Value::Array(rows)))
}

fn unimodality(k_max: u32) -> Result<(CheckStatus, Value)> {
    let mut rows = Vec::new();
    for k in 1..=k_max.min(10) {
        let u = unimodality_check(&euclid_poly(k)?)?;
        rows.push(json!({"k": k, "unimodal": u.unimodal, "peak": [u.peak.start(), u.peak.end()]}));
    }
    Ok((CheckStatus::Report, Value::Array(rows)))
}

/// Slope below 2 with `r^2 > 0.9` is the hard check; the distance to 0.618 is
/// reported.
fn slope(k_max: u32) -> Result<(CheckStatus, Value)> {
    if !(4..=MAX_EIGS_K).contains(&k_max) {
        return Err(Error::Precondition(format!("slope fit needs 4 <= k_max <= {MAX_EIGS_K}")));
    }
    let (samples, err) = max_conditions(2, k_max);
    if let Some(e) = err {
        return Ok((CheckStatus::Error, json!({"error": e.to_string(), "partial": samples})));
    }
    let fit = fit_samples(&samples)?;
    let ok = fit.slope < 2.0 && fit.r2 > 0.9;
    Ok((
        CheckStatus::from_bool(ok),
        json!({"fit": fit, "samples": samples, "within_0_618_pm_0_15": (fit.slope - 0.618).abs() <= 0.15}),
    ))
}

fn table_row(k: u32, n: usize) -> Result<(CheckStatus, Value)> {
    let g = GridSpec::figure_default().with_resolution(n, n)?;
    let row = conditioning_comparison(k, &g)?;
    let mut data = json!({
        "k": k,
        "grid": n,
        "monomial": row.monomial,
        "shifted": row.shifted,
        "matrix": row.matrix,
        "polynomial_precision": row.polynomial_precision,
        "matrix_over_monomial": row.matrix_over_monomial,
        "strictly_ordered": row.strictly_ordered(),
    });
    let status = if k == 6 {
        let ok = row.strictly_ordered()
            && row.matrix.within_exponents(-3.0, 0.0)
            && row.shifted.within_exponents(-4.0, -1.0)
            && row.monomial.within_exponents(-10.5, -7.5);
        CheckStatus::from_bool(ok)
    } else {
        CheckStatus::Report
    };
    data["checked_against_reference"] = json!(k == 6);
    Ok((status, data))
}

fn checks(cfg: &SuiteConfig) -> Vec<(String, Check)> {
    let k = cfg.k_max;
    let (seed, n, count, bits) = (cfg.seed, cfg.egyptian_n, cfg.random_lambdas, cfg.precision_bits);
    let cap = if cfg.force { 10 } else { VERIFY_MAX_K };
    let mut out: Vec<(String, Check)> = vec![
        ("euclid_numbers".into(), Box::new(move || euclid_numbers_check(k))),
        ("egyptian_numbers".into(), Box::new(move || egyptian_numbers(n))),
        ("egyptian_polys".into(), Box::new(move || egyptian_polys(count, seed))),
        ("companion_structure".into(), Box::new(move || structure(k))),
        ("companion_charpoly".into(), Box::new(move || charpoly(k, cap, seed))),
        ("eigen_accuracy".into(), Box::new(move || eigen_accuracy(k))),
        ("euclid_constant".into(), Box::new(move || constant(bits))),
        ("series_probe".into(), Box::new(series)),
        ("unimodality".into(), Box::new(move || unimodality(k))),
    ];
    if let Some(km) = cfg.slope_k_max {
        out.push(("slope_fit".into(), Box::new(move || slope(km))));
    }
    for &tk in &cfg.table_ks {
        let grid = cfg.table_grid;
        out.push((format!("table_k{tk}"), Box::new(move || table_row(tk, grid))));
    }
    out
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.k_max == 0 {
        return Err(Error::Precondition("k_max must be at least 1".into()));
    }
    if cfg.egyptian_n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut all = checks(cfg);
    if let Some(f) = &cfg.filter {
        all.retain(|(name, _)| name.starts_with(f.as_str()));
        if all.is_empty() {
            return Err(Error::InvalidArgument(format!("no check matches `{f}`")));
        }
    }
    let results: Vec<(String, CheckResult)> = all
        .into_par_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (status, data) = match check() {
                Ok(r) => r,
                Err(e) => (CheckStatus::Error, json!({"error": e.to_string()})),
            };
            let elapsed_ms = start.elapsed().as_millis();
            (name, CheckResult { status, data, elapsed_ms })
        })
        .collect();
    Ok(SuiteReport {
        checks: results.into_iter().collect(),
    })
}
