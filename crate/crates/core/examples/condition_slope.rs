//! Growth of the largest eigenvalue condition number with the degree, fitted
//! on a log-log scale.
//!
//! cargo run --release --example condition_slope -- [k_max]

use euclid_companion::analysis::{fit_samples, max_conditions};

fn main() -> euclid_companion::Result<()> {
    let k_max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let (samples, err) = max_conditions(2, k_max);
    println!("{:>3} {:>6} {:>10} {:>9}", "k", "degree", "max cond", "ms");
    for s in &samples {
        println!("{:>3} {:>6} {:>10.4} {:>9}", s.k, s.degree, s.max_cond, s.elapsed_ms);
    }
    if let Some(e) = err {
        return Err(e);
    }
    let fit = fit_samples(&samples)?;
    println!("slope {:.4}, intercept {:.4}, r2 {:.4}", fit.slope, fit.intercept, fit.r2);
    Ok(())
}
