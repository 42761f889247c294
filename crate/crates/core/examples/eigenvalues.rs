//! Eigenvalues of the companion matrix with condition numbers, residuals and
//! Newton refinement on the recurrence; writes a root scatter as SVG.
//!
//! cargo run --release --example eigenvalues -- [k] [out.svg]

use euclid_companion::cli::roots_svg;
use euclid_companion::spectra::{compute_spectrum, newton_refine, summarize_roots};
use num_complex::Complex64;

fn main() -> euclid_companion::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let svg = args.next();

    let s = compute_spectrum(k)?;
    let summary = summarize_roots(&s.eigenvalues);
    println!("E_{k}: {} eigenvalues", s.len());
    println!("  max condition number   {:.4}", s.max_cond());
    println!("  max relative residual  {:.2e}", s.max_residual());
    println!("  max |lambda + 1/2|     {:.5}", summary.max_shifted_modulus);
    println!(
        "  left / right half plane  {} / {}",
        summary.left_half_plane, summary.right_half_plane
    );

    let worst = s
        .eigenvalues
        .iter()
        .map(|&z| newton_refine(k, z).map(|r| (r - z).norm()))
        .collect::<euclid_companion::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("  largest Newton correction {worst:.2e}");

    if let Some(path) = svg {
        let circle = (Complex64::new(-0.5, 0.0), summary.max_shifted_modulus);
        let title = format!("Roots of E_{k}");
        std::fs::write(&path, roots_svg(&s.eigenvalues, Some(circle), &title))?;
        println!("wrote {path}");
    }
    Ok(())
}
