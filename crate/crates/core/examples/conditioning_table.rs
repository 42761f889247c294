//! Merge bands of the monomial, shifted and matrix representations.
//!
//! cargo run --release --example conditioning_table -- [k ...]

use euclid_companion::analysis::conditioning_comparison;
use euclid_companion::fields::GridSpec;

fn main() -> euclid_companion::Result<()> {
    let mut ks: Vec<u32> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if ks.is_empty() {
        ks = vec![4, 5, 6];
    }
    let g = GridSpec::figure_default();
    println!("{:>3}  {:>17}  {:>17}  {:>17}  precision", "k", "monomial", "shifted", "matrix");
    for k in ks {
        let row = conditioning_comparison(k, &g)?;
        let fmt = |b: euclid_companion::analysis::Band| format!("1e{:.2}..1e{:.2}", b.log10_lo, b.log10_hi);
        println!(
            "{k:>3}  {:>17}  {:>17}  {:>17}  {}",
            fmt(row.monomial),
            fmt(row.shifted),
            fmt(row.matrix),
            row.polynomial_precision
        );
    }
    Ok(())
}
