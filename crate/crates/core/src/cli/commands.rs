use std::time::Instant;

use num_complex::Complex64;
use rug::Integer;
use serde_json::json;

use super::plot::{log_curves_svg, roots_svg};
use super::{parse_eps, parse_range, BasisArg, Command, FamilyArg, KindArg, Outcome, Output, RunConfig, VariantArgs};
use crate::analysis::{
    conditioning_comparison, fit_samples, max_conditions, merge_band, merge_profile, run_suite, similarity_criteria,
    SuiteConfig,
};
use crate::companion::{
    build_companion, build_mandelbrot_companion, build_tilde_with, export_matrix, verify_charpoly_matrix,
    verify_mandelbrot_charpoly, CompanionMatrix, E2Seed, MatrixFormat, VariantConfig,
};
use crate::exact_poly::{
    euclid_numbers, euclid_poly, shifted_condition_b, shifted_euclid_poly, unimodality_check, Basis, EvalPrecision,
    PolyRecord,
};
use crate::fields::{
    contour_extract, contours_to_csv, field_to_csv, log_levels, pseudospectrum_field, pseudozero_field, render_svg,
    FieldMetadata, GridSpec, ScalarField, SvgOptions, DEFAULT_NODE_BUDGET,
};
use crate::spectra::{compute_spectrum_with, eigenvalues, summarize_roots, QrOptions};
use crate::{Error, Result};

/// Upper end of the `u` range for the majorant curves: about the largest
/// `|lambda + 1/2|` over the roots.
const MAJORANT_U_MAX: f64 = 1.118;

pub(crate) fn variant_config(v: &VariantArgs, blocks: u32) -> Result<VariantConfig> {
    let e2_seed = match &v.e2 {
        Some(s) => s.parse::<E2Seed>()?,
        None => E2Seed::default(),
    };
    let block_order = match &v.block_order {
        None => None,
        Some(s) => {
            let order = s
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidArgument(format!("--block-order expects comma separated indices, got `{s}`")))?;
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..blocks as usize).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument(format!(
                    "--block-order must be a permutation of 0..{blocks}, got `{s}`"
                )));
            }
            Some(order)
        }
    };
    Ok(VariantConfig { e2_seed, block_order })
}

pub(crate) fn window(re: Option<&str>, im: Option<&str>) -> Result<((f64, f64), (f64, f64))> {
    let d = GridSpec::figure_default();
    let re = match re {
        Some(s) => parse_range(s, "re")?,
        None => (d.re_min, d.re_max),
    };
    let im = match im {
        Some(s) => parse_range(s, "im")?,
        None => (d.im_min, d.im_max),
    };
    Ok((re, im))
}

pub fn cmd_poly(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Poly { k, basis } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let k = *k;
    let stem = cfg.stem();
    let e_k = euclid_numbers(k as usize).pop().expect("k >= 1");
    let (record, report) = match basis {
        BasisArg::Monomial => {
            let p = euclid_poly(k)?;
            let max = p.max_coeff().cloned().unwrap_or_default();
            let at_one = p.eval_integer(&Integer::from(1));
            let uni = unimodality_check(&p)?;
            let report = json!({
                "k": k,
                "basis": Basis::Monomial,
                "degree": p.degree(),
                "max_coeff": max.to_string(),
                "max_coeff_digits": max.to_string().len(),
                "all_nonnegative": p.all_nonnegative(),
                "unimodal": uni.unimodal,
                "peak": [uni.peak.start(), uni.peak.end()],
                "value_at_one": at_one.to_string(),
                "value_at_one_is_e_k": at_one == e_k,
            });
            (PolyRecord::monomial(k, &p), report)
        }
        BasisArg::Shifted => {
            let q = shifted_euclid_poly(k)?;
            let coeffs = q.coeffs();
            let max = coeffs
                .iter()
                .max_by(|a, b| a.to_rational().cmp(&b.to_rational()))
                .map(|c| c.to_string())
                .unwrap_or_default();
            // lambda = 1 is u = 3/2
            let at_one = q.eval_rational(&rug::Rational::from((3, 2)));
            let report = json!({
                "k": k,
                "basis": Basis::Shifted,
                "variable": "u = lambda + 1/2",
                "degree": q.degree(),
                "max_coeff": max,
                "all_nonnegative": coeffs.iter().all(|c| c.to_rational() >= 0),
                "odd_coefficients_zero": k < 2 || coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()),
                "value_at_one": at_one.to_string(),
                "value_at_one_is_e_k": at_one == e_k,
            });
            (PolyRecord::shifted(k, &q), report)
        }
    };
    let path = out.write_json(&format!("{stem}.json"), &record)?;
    out.write_json(&format!("{stem}_report.json"), &report)?;
    let mut o = Outcome::default();
    if record.coeffs.len() <= 17 {
        o.line(format!("E_{k} coefficients (ascending): [{}]", record.coeffs.join(", ")));
    } else {
        o.line(format!("E_{k}: degree {}", record.coeffs.len() - 1));
    }
    o.line(format!("wrote {}", path.display()));
    Ok(o)
}

fn matrix_format(cfg: &RunConfig) -> Result<MatrixFormat> {
    cfg.global.format.as_deref().unwrap_or("mtx").parse()
}

pub fn cmd_companion(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Companion { k, family, verify, variant } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let k = *k;
    let format = matrix_format(cfg)?;
    let stem = cfg.stem();
    let (m, vcfg): (CompanionMatrix, Option<VariantConfig>) = match family {
        FamilyArg::Euclid => {
            let v = variant_config(variant, k.saturating_sub(1))?;
            (build_companion(k, &v)?, Some(v))
        }
        FamilyArg::EuclidTilde => {
            let v = variant_config(variant, k)?;
            (build_tilde_with(k, &v)?, Some(v))
        }
        FamilyArg::Mandelbrot => (build_mandelbrot_companion(k)?, None),
    };
    let path = out.write(&format!("{stem}.{}", format.extension()), export_matrix(&m, format))?;

    let mut o = Outcome::default();
    let verification = if *verify || k <= crate::analysis::VERIFY_MAX_K {
        let v = match family {
            FamilyArg::Euclid => verify_charpoly_matrix(&m, &euclid_poly(k)?)?,
            FamilyArg::EuclidTilde => verify_charpoly_matrix(&m, &euclid_poly(k)?.add_constant(-1))?,
            FamilyArg::Mandelbrot => verify_mandelbrot_charpoly(k)?,
        };
        o.failed = !v.verified;
        o.line(format!("verified={}", v.verified));
        Some(v)
    } else {
        None
    };
    let sub = m.subdiagonal();
    let report = json!({
        "family": super::family_name(*family),
        "k": k,
        "dimension": m.n(),
        "nnz": m.nnz(),
        "height": m.height(),
        "corner": m.corner(),
        "subdiagonal_all_minus_one": sub.iter().all(|&s| s == -1),
        "variant": vcfg,
        "verify_charpoly": verification,
    });
    out.write_json(&format!("{stem}_report.json"), &report)?;
    o.line(format!("{} k={k}: {}x{}, nnz {}", super::family_name(*family), m.n(), m.n(), m.nnz()));
    o.line(format!("wrote {}", path.display()));
    Ok(o)
}

pub fn cmd_eigs(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Eigs { k, plot, variant } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let k = *k;
    let stem = cfg.stem();
    let vcfg = variant_config(variant, k.saturating_sub(1))?;
    let start = Instant::now();
    let spectrum = match compute_spectrum_with(k, &vcfg, QrOptions::default()) {
        Ok(s) => s,
        Err(e) => {
            out.write(&format!("{stem}.csv"), "re,im,cond,resid_recurrence,resid_sigma\n")?;
            out.write_json(
                &format!("{stem}_diagnostics.json"),
                &json!({"k": k, "error": e.to_string(), "elapsed_ms": start.elapsed().as_millis()}),
            )?;
            return Err(e);
        }
    };
    let path = out.write(&format!("{stem}.csv"), spectrum.to_csv())?;
    let summary = summarize_roots(&spectrum.eigenvalues);
    let max_sigma = spectrum.sigma_resid.iter().copied().fold(0.0, f64::max);
    out.write_json(
        &format!("{stem}_summary.json"),
        &json!({
            "k": k,
            "variant": vcfg,
            "root_summary": summary,
            "max_cond": spectrum.max_cond(),
            "max_residual": spectrum.max_residual(),
            "max_sigma_resid": max_sigma,
        }),
    )?;
    if *plot {
        let circle = (Complex64::new(-0.5, 0.0), summary.max_shifted_modulus);
        let title = format!(
            "All {} roots of E_{k}; circle |z + 1/2| = {:.4}",
            spectrum.len(),
            summary.max_shifted_modulus
        );
        out.write(&format!("{stem}.svg"), roots_svg(&spectrum.eigenvalues, Some(circle), &title))?;
    }
    let mut o = Outcome::default();
    o.line(format!(
        "E_{k}: {} eigenvalues, max cond {:.4}, max residual {:.2e}, max |lambda + 1/2| {:.5}",
        spectrum.len(),
        spectrum.max_cond(),
        spectrum.max_residual(),
        summary.max_shifted_modulus
    ));
    o.line(format!("wrote {}", path.display()));
    Ok(o)
}

fn majorant_curves(cfg: &RunConfig, out: &mut Output, k: u32, samples: usize) -> Result<Outcome> {
    let stem = cfg.stem();
    let us: Vec<f64> = (0..samples)
        .map(|i| MAJORANT_U_MAX * i as f64 / (samples - 1) as f64)
        .collect();
    let mut csv = String::from("u");
    for j in 2..=k {
        csv.push_str(&format!(",k{j}"));
    }
    csv.push('\n');
    let mut series: Vec<(String, Vec<(f64, f64)>)> = (2..=k).map(|j| (format!("k = {j}"), Vec::new())).collect();
    for &u in &us {
        csv.push_str(&format!("{u:e}"));
        for (j, s) in (2..=k).zip(series.iter_mut()) {
            let b = shifted_condition_b(j, u)?;
            csv.push_str(&format!(",{b:e}"));
            s.1.push((u, b));
        }
        csv.push('\n');
    }
    let path = out.write(&format!("{stem}.csv"), csv)?;
    out.write(
        &format!("{stem}.svg"),
        log_curves_svg(&series, &format!("Shifted-basis condition numbers on 0 <= u <= {MAJORANT_U_MAX}")),
    )?;
    let mut o = Outcome::default();
    o.line(format!("wrote {}", path.display()));
    Ok(o)
}

fn default_levels(f: &ScalarField, roots: Option<&[Complex64]>) -> Vec<f64> {
    if let Some(roots) = roots {
        let p = merge_profile(f, roots);
        if let Some(b) = merge_band(&p) {
            return log_levels(b.log10_lo - 0.5, b.log10_hi + 0.5, 10);
        }
    }
    log_levels(-3.0, -1.0, 10)
}

pub fn cmd_fields(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Fields { k, kind, eps, nx, ny, re, im } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let k = *k;
    if *kind == KindArg::ShiftedMajorant {
        return majorant_curves(cfg, out, k, *nx);
    }
    let stem = cfg.stem();
    let (re, im) = window(re.as_deref(), im.as_deref())?;
    let g = GridSpec::new(re, im, *nx, ny.unwrap_or(*nx))?;
    let m = build_companion(k, &VariantConfig::default())?;
    let roots = if k <= super::EIGS_MAX_K { Some(eigenvalues(&m)?) } else { None };
    let (field, precision) = match kind {
        KindArg::Pseudospectrum => (pseudospectrum_field(&m, &g, DEFAULT_NODE_BUDGET)?, "binary64".to_string()),
        KindArg::PseudozeroMonomial | KindArg::PseudozeroShifted => {
            let basis = if *kind == KindArg::PseudozeroMonomial { Basis::Monomial } else { Basis::Shifted };
            let p = match cfg.global.precision_bits {
                Some(bits) => EvalPrecision::Extended(bits),
                None => EvalPrecision::auto(k),
            };
            (
                pseudozero_field(k, basis, &g, p, DEFAULT_NODE_BUDGET)?,
                crate::analysis::precision_label(p),
            )
        }
        KindArg::ShiftedMajorant => unreachable!("handled above"),
    };
    let levels = match eps {
        Some(s) => {
            let (lo, hi, count) = parse_eps(s)?;
            log_levels(lo.log10(), hi.log10(), count)
        }
        None => default_levels(&field, roots.as_deref()),
    };
    let contours = contour_extract(&field, &levels);
    let path = out.write(&format!("{stem}.csv"), field_to_csv(&field))?;
    out.write(&format!("{stem}_contours.csv"), contours_to_csv(&contours))?;
    let opts = SvgOptions {
        title: format!("{} of E_{k}", kind_title(*kind)),
        markers: roots.clone().unwrap_or_default(),
        ..SvgOptions::default()
    };
    out.write(&format!("{stem}.svg"), render_svg(&field, &contours, &opts))?;

    let invalid: Vec<[usize; 2]> = field.invalid.iter().map(|&i| [i % g.nx, i / g.nx]).collect();
    let (band, similarity) = match &roots {
        Some(r) => (
            merge_band(&merge_profile(&field, r)),
            Some(similarity_criteria(&field, r, &levels)),
        ),
        None => (None, None),
    };
    out.write_json(
        &format!("{stem}.json"),
        &json!({
            "metadata": FieldMetadata::new(&field, &levels, precision),
            "invalid_nodes": invalid,
            "merge_band": band,
            "similarity": similarity,
        }),
    )?;
    let mut o = Outcome::default();
    if let Some(min) = field.min() {
        o.line(format!("{} nodes, min {:.3e}, {} invalid", g.len(), min.1, invalid.len()));
    }
    if let Some(b) = band {
        o.line(format!("merge band 1e{:.2} .. 1e{:.2}", b.log10_lo, b.log10_hi));
    }
    o.line(format!("wrote {}", path.display()));
    Ok(o)
}

fn kind_title(k: KindArg) -> &'static str {
    match k {
        KindArg::Pseudospectrum => "Pseudospectra",
        KindArg::PseudozeroMonomial => "Pseudozeros (monomial basis)",
        KindArg::PseudozeroShifted => "Pseudozeros (basis in u = z + 1/2)",
        KindArg::ShiftedMajorant => "Shifted-basis condition numbers",
    }
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Verify { kmax, check, n } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let suite = SuiteConfig {
        k_max: *kmax,
        filter: check.clone(),
        egyptian_n: *n,
        seed: cfg.global.seed,
        precision_bits: cfg.global.precision_bits.unwrap_or(SuiteConfig::default().precision_bits),
        force: cfg.global.force,
        ..SuiteConfig::default()
    };
    let report = run_suite(&suite)?;
    out.write("verify_report.json", report.to_json() + "\n")?;
    let table = report.summary_table();
    out.write("verify_summary.txt", &table)?;
    let mut o = Outcome {
        failed: report.hard_failure(),
        lines: table.lines().map(str::to_string).collect(),
    };
    o.line(if o.failed { "some checks failed" } else { "all checks passed" });
    Ok(o)
}

pub fn cmd_report(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    let Command::Report { slope, kmin, kmax, table1, k, grid } = &cfg.command else {
        unreachable!("dispatched on the command")
    };
    let mut o = Outcome::default();
    if *slope {
        let (samples, err) = max_conditions(*kmin, *kmax);
        let mut csv = String::from("k,degree,max_cond,log_degree,log_max_cond,elapsed_ms\n");
        for s in &samples {
            csv.push_str(&format!(
                "{},{},{:e},{:e},{:e},{}\n",
                s.k,
                s.degree,
                s.max_cond,
                (s.degree as f64).ln(),
                s.max_cond.ln(),
                s.elapsed_ms
            ));
        }
        out.write("slope_loglog.csv", csv)?;
        if let Some(e) = err {
            return Err(e);
        }
        let fit = fit_samples(&samples)?;
        out.write_json(
            "slope_fit.json",
            &json!({
                "k_min": kmin,
                "k_max": kmax,
                "fit": fit,
                "below_quadratic": fit.slope < 2.0,
                "reference_slope": 0.618,
                "within_reference_tolerance": (fit.slope - 0.618).abs() <= 0.15,
            }),
        )?;
        o.line(format!("slope {:.4}, intercept {:.4}, r2 {:.4}", fit.slope, fit.intercept, fit.r2));
    }
    if *table1 {
        let g = GridSpec::figure_default().with_resolution(*grid, *grid)?;
        let mut rows = Vec::new();
        let mut csv = String::from("k,representation,eps_lo,eps_hi,log10_lo,log10_hi,precision\n");
        for &kk in k {
            let row = conditioning_comparison(kk, &g)?;
            for (name, b, prec) in [
                ("monomial", row.monomial, row.polynomial_precision.as_str()),
                ("shifted", row.shifted, row.polynomial_precision.as_str()),
                ("matrix", row.matrix, "binary64"),
            ] {
                csv.push_str(&format!(
                    "{kk},{name},{:e},{:e},{:.3},{:.3},{prec}\n",
                    b.lo, b.hi, b.log10_lo, b.log10_hi
                ));
            }
            o.line(format!(
                "k={kk}: monomial 1e{:.2}..1e{:.2}, shifted 1e{:.2}..1e{:.2}, matrix 1e{:.2}..1e{:.2}",
                row.monomial.log10_lo,
                row.monomial.log10_hi,
                row.shifted.log10_lo,
                row.shifted.log10_hi,
                row.matrix.log10_lo,
                row.matrix.log10_hi
            ));
            rows.push(json!({
                "k": kk,
                "monomial": row.monomial,
                "shifted": row.shifted,
                "matrix": row.matrix,
                "polynomial_precision": row.polynomial_precision,
                "matrix_over_monomial": row.matrix_over_monomial,
                "strictly_ordered": row.strictly_ordered(),
            }));
        }
        out.write("table1.csv", csv)?;
        out.write_json("table1.json", &json!({"grid": g, "rows": rows}))?;
    }
    Ok(o)
}
