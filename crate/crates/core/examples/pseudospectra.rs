//! Pseudospectra of the companion matrix next to the pseudozero sets of the
//! two polynomial representations, with contour plots.
//!
//! cargo run --release --example pseudospectra -- [k] [out_dir]

use euclid_companion::analysis::{merge_band, merge_profile, similarity_criteria};
use euclid_companion::companion::euclid_companion;
use euclid_companion::exact_poly::{Basis, EvalPrecision};
use euclid_companion::fields::{
    contour_extract, log_levels, pseudospectrum_field, pseudozero_field, render_svg, GridSpec, SvgOptions,
    DEFAULT_NODE_BUDGET,
};
use euclid_companion::spectra::eigenvalues;

fn main() -> euclid_companion::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let dir = args.next();

    let g = GridSpec::figure_default().with_resolution(300, 300)?;
    let m = euclid_companion(k)?;
    let roots = eigenvalues(&m)?;
    let precision = EvalPrecision::auto(k);
    let fields = [
        ("monomial", pseudozero_field(k, Basis::Monomial, &g, precision, DEFAULT_NODE_BUDGET)?),
        ("shifted", pseudozero_field(k, Basis::Shifted, &g, precision, DEFAULT_NODE_BUDGET)?),
        ("matrix", pseudospectrum_field(&m, &g, DEFAULT_NODE_BUDGET)?),
    ];
    for (name, f) in &fields {
        let Some(band) = merge_band(&merge_profile(f, &roots)) else {
            println!("{name:>8}: regions never merge on this window");
            continue;
        };
        let levels = log_levels(band.log10_lo - 0.5, band.log10_hi + 0.5, 10);
        let sim = similarity_criteria(f, &roots, &levels);
        println!(
            "{name:>8}: merge band 1e{:.2} .. 1e{:.2}; {} single-root loops, {} merged regions, spacing {:.4}",
            band.log10_lo,
            band.log10_hi,
            sim.single_root_loops,
            sim.merged_regions,
            sim.spacing_fraction.unwrap_or(f64::NAN)
        );
        if let Some(dir) = &dir {
            let opts = SvgOptions {
                title: format!("{name} representation of E_{k}"),
                markers: roots.clone(),
                ..SvgOptions::default()
            };
            let path = std::path::Path::new(dir).join(format!("{name}_k{k}.svg"));
            std::fs::create_dir_all(dir)?;
            std::fs::write(&path, render_svg(f, &contour_extract(f, &levels), &opts))?;
            println!("          wrote {}", path.display());
        }
    }
    Ok(())
}
