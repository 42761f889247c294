//! Partial sums of `sum 1/E_k(lambda)` at a few points, from the recurrence.

use euclid_companion::analysis::series_probe;
use num_complex::Complex64;

fn main() -> euclid_companion::Result<()> {
    let points = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(-0.2, 0.5),
        Complex64::new(0.3, 1.2),
    ];
    for lambda in points {
        let r = series_probe(lambda, 25)?;
        let s = r.partial_sums.last().copied().unwrap_or_default();
        let inv = lambda.inv();
        println!(
            "lambda = {:>5} {:+.2}i: {:<13} sum = {:.6} {:+.6}i  (1/lambda = {:.6} {:+.6}i)  {}",
            lambda.re,
            lambda.im,
            format!("{:?}", r.classification),
            s.re,
            s.im,
            inv.re,
            inv.im,
            r.reason
        );
    }
    Ok(())
}
