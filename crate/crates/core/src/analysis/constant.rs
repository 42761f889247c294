//! The constant `E` with `e_n = floor(E^(2^n) + 1/2)`.
//!
//! From `e_{n+1} - 1/2 = (e_n - 1/2)^2 + 1/4`, the values `(e_n - 1/2)^(2^-n)`
//! increase to `E`, and they settle to about twice as many bits at each step.

use rug::float::Round;
use rug::{Float, Integer};
use serde::Serialize;

use crate::exact_poly::euclid_numbers;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct EuclidConstantEstimate {
    pub n_terms: usize,
    pub precision_bits: u32,
    /// Decimal expansion of the estimate from `e_{n_terms + 1}`. One term
    /// beyond the checked range keeps `E^(2^n)` safely above `e_n - 1/2`.
    pub estimate: String,
    pub estimate_f64: f64,
    #[serde(skip)]
    pub value: Float,
    /// Decimal digits on which the last two estimates agree.
    pub digits_stable: u32,
    /// `digits_stable` after each `n`, starting at `n = 2`.
    pub digits_history: Vec<u32>,
    /// `e_n = floor(E^(2^n) + 1/2)` holds for every `n <= n_terms`.
    pub floor_check: bool,
}

fn estimate_at(e: &Integer, n: usize, prec: u32) -> Float {
    let mut x = Float::with_val(prec, e);
    x -= 0.5;
    x.ln_mut();
    x >>= n as u32;
    x.exp_mut();
    x
}

fn agreeing_digits(a: &Float, b: &Float, prec: u32) -> u32 {
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return (f64::from(prec) * std::f64::consts::LOG10_2).floor() as u32;
    }
    let rel = Float::with_val(prec, &diff / a);
    let d = -rel.to_f64().log10();
    if d.is_finite() && d > 0.0 {
        d.floor() as u32
    } else {
        // below f64 range: use the binary exponent
        let exp = rel.get_exp().unwrap_or(0);
        ((-f64::from(exp)) * std::f64::consts::LOG10_2).floor().max(0.0) as u32
    }
}

/// Floor reconstruction of `e_1..e_n` from `estimate`.
pub fn floor_reconstruction(estimate: &Float, n: usize) -> Vec<Integer> {
    let prec = estimate.prec();
    let mut p = Float::with_val(prec, estimate);
    (0..n)
        .map(|_| {
            p.square_mut();
            let shifted = Float::with_val(prec, &p + 0.5);
            shifted.to_integer_round(Round::Down).expect("finite").0
        })
        .collect()
}

pub fn euclid_constant(n_terms: usize, precision_bits: u32) -> Result<EuclidConstantEstimate> {
    if n_terms < 3 {
        return Err(Error::Precondition("n_terms must be at least 3".into()));
    }
    if precision_bits < 64 {
        return Err(Error::InvalidArgument(format!("precision {precision_bits} bits is below 64")));
    }
    let mut e = euclid_numbers(n_terms + 1);
    let estimates: Vec<Float> = e
        .iter()
        .enumerate()
        .map(|(i, ei)| estimate_at(ei, i + 1, precision_bits))
        .collect();
    let digits_history: Vec<u32> = estimates
        .windows(2)
        .map(|w| agreeing_digits(&w[1], &w[0], precision_bits))
        .collect();
    let best = estimates.last().expect("n_terms >= 3");
    e.pop();
    let floor_check = floor_reconstruction(best, n_terms) == e;
    if !floor_check {
        return Err(Error::InsufficientPrecision(format!(
            "{precision_bits} bits do not reconstruct e_1..e_{n_terms}; raise the precision"
        )));
    }
    let digits = (*digits_history.last().unwrap_or(&0)).clamp(3, 200) as usize;
    Ok(EuclidConstantEstimate {
        n_terms,
        precision_bits,
        estimate: best.to_string_radix(10, Some(digits + 2)),
        estimate_f64: best.to_f64(),
        value: best.clone(),
        digits_stable: *digits_history.last().unwrap_or(&0),
        digits_history,
        floor_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn about_1_264() {
        let c = euclid_constant(10, 2048).unwrap();
        assert!((c.estimate_f64 - 1.264).abs() < 5e-4, "{}", c.estimate);
        assert!(c.estimate.starts_with("1.264"), "{}", c.estimate);
        assert!(c.floor_check);
        assert!(c.digits_history.windows(2).all(|w| w[1] >= w[0]), "{:?}", c.digits_history);
        assert!(c.digits_stable > 100);
    }

    #[test]
    fn floor_gives_the_sequence() {
        let c = euclid_constant(5, 256).unwrap();
        let seq: Vec<Integer> = floor_reconstruction(&c.value, 5);
        assert_eq!(seq, [2, 3, 7, 43, 1807].map(Integer::from));
    }

    #[test]
    fn low_precision_is_detected() {
        assert!(matches!(euclid_constant(12, 64), Err(Error::InsufficientPrecision(_))));
        assert!(euclid_constant(2, 256).is_err());
    }
}
