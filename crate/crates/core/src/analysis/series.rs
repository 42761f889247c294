//! Numerical probe of `sum_k 1/E_k(lambda)` using the coefficient-free
//! recurrence.

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

pub const MAX_SERIES_TERMS: usize = 1000;

/// Once `|E_j| > 1 + sqrt(2)`, `|E_{j+1}| >= |E_j|^2 - |E_j| - 1 > |E_j|` and the
/// orbit escapes doubly exponentially; a little margin above that.
const ESCAPE_RADIUS: f64 = 2.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesClass {
    Converging,
    Diverging,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub lambda: Complex64,
    /// `|1/E_k(lambda)|` for the terms computed.
    pub term_magnitudes: Vec<f64>,
    pub partial_sums: Vec<Complex64>,
    /// `log|t_{k+1}| / log|t_k|`; tends to 2 when terms square.
    pub squaring_exponents: Vec<f64>,
    pub classification: SeriesClass,
    /// `E_k` overflowed binary64, so the remaining terms are taken as zero.
    pub overflowed: bool,
    /// Some `E_k(lambda)` was exactly zero.
    pub pole: bool,
    pub reason: String,
}

pub fn series_probe(lambda: Complex64, n_terms: usize) -> Result<SeriesReport> {
    if n_terms == 0 || n_terms > MAX_SERIES_TERMS {
        return Err(Error::InvalidArgument(format!(
            "n_terms must be in 1..={MAX_SERIES_TERMS}, got {n_terms}"
        )));
    }
    let mut e = lambda + 1.0;
    let mut values = Vec::with_capacity(n_terms);
    let mut overflowed = false;
    let mut pole = false;
    for _ in 0..n_terms {
        if !(e.re.is_finite() && e.im.is_finite()) {
            overflowed = true;
            break;
        }
        if e == Complex64::new(0.0, 0.0) {
            pole = true;
            values.push(e);
            break;
        }
        values.push(e);
        e = e * (e - 1.0) + 1.0;
    }
    let terms: Vec<Complex64> = values.iter().map(|v| v.inv()).collect();
    let term_magnitudes: Vec<f64> = terms.iter().map(|t| t.norm()).collect();
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for t in &terms {
        acc += t;
        partial_sums.push(acc);
    }
    let squaring_exponents = term_magnitudes
        .windows(2)
        .filter(|w| w[0] < 1.0 && w[0] > 0.0 && w[1] > 0.0)
        .map(|w| w[1].ln() / w[0].ln())
        .collect();

    let moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let (classification, reason) = classify(&moduli, &term_magnitudes, overflowed, pole);
    Ok(SeriesReport {
        lambda,
        term_magnitudes,
        partial_sums,
        squaring_exponents,
        classification,
        overflowed,
        pole,
        reason,
    })
}

fn classify(moduli: &[f64], terms: &[f64], overflowed: bool, pole: bool) -> (SeriesClass, String) {
    if pole {
        return (SeriesClass::Undetermined, "some E_k vanished".into());
    }
    if overflowed {
        return (SeriesClass::Converging, "E_k overflowed, terms underflow to zero".into());
    }
    let last = match moduli.last() {
        Some(&m) => m,
        None => return (SeriesClass::Undetermined, "no terms".into()),
    };
    if last > ESCAPE_RADIUS {
        return (
            SeriesClass::Converging,
            format!("|E_k| = {last:.3e} is past the escape radius; terms square from here on"),
        );
    }
    if moduli.len() >= 5 {
        let tail = &moduli[moduli.len() - 5..];
        if tail[0] > 1.0 && tail.windows(2).all(|w| w[1] > w[0]) {
            return (SeriesClass::Converging, "|E_k| > 1 and increasing over the last 5 terms".into());
        }
        let t = &terms[terms.len() - 5..];
        if t[4] >= 0.5 * t[0] {
            return (SeriesClass::Diverging, "terms do not decay over the last 5 terms".into());
        }
    }
    (SeriesClass::Undetermined, "no decisive trend".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(re: f64, n: usize) -> SeriesClass {
        series_probe(Complex64::new(re, 0.0), n).unwrap().classification
    }

    #[test]
    fn lambda_one_sums_to_one() {
        let r = series_probe(Complex64::new(1.0, 0.0), 6).unwrap();
        let s = r.partial_sums.last().unwrap();
        // 1 - 1/(e_7 - 1) with e_7 about 1.1e13
        assert!((s.re - 1.0).abs() < 1e-12 && s.im == 0.0);
        assert!(r.squaring_exponents.iter().skip(2).all(|&p| (p - 2.0).abs() < 0.1), "{:?}", r.squaring_exponents);
        assert_eq!(r.classification, SeriesClass::Converging);
    }

    #[test]
    fn classifications() {
        assert_eq!(class(-0.5, 20), SeriesClass::Diverging);
        assert_eq!(class(0.1, 10), SeriesClass::Converging);
        for x in [1.0, 2.0, 0.5] {
            assert_eq!(class(x, 25), SeriesClass::Converging, "{x}");
        }
        let pole = series_probe(Complex64::new(-1.0, 0.0), 5).unwrap();
        assert!(pole.pole);
        assert_eq!(pole.classification, SeriesClass::Undetermined);
        assert!(series_probe(Complex64::new(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn overflow_counts_as_converging() {
        let r = series_probe(Complex64::new(3.0, 1.0), 40).unwrap();
        assert!(r.overflowed);
        assert_eq!(r.classification, SeriesClass::Converging);
    }
}
