//! Egyptian-fraction identities for the Euclid numbers and polynomials,
//! checked in exact rational arithmetic.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::exact_poly::euclid_numbers;
use crate::{Error, Result};

/// `1 = sum_{k=1}^{n} 1/e_k + 1/(e_{n+1} - 1)`.
pub fn egyptian_number_check(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let e = euclid_numbers(n + 1);
    let mut sum = Rational::new();
    for ek in &e[..n] {
        sum += Rational::from((1, ek.clone()));
    }
    sum += Rational::from((1, Integer::from(&e[n] - 1u32)));
    Ok(sum == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IdentityOutcome {
    Holds,
    Fails,
    /// A denominator vanished at this `lambda`; the identity does not apply.
    Pole { at: String },
}

/// `E_1(x), ..., E_m(x)` by the recurrence in exact rationals.
pub fn euclid_values(m: u32, x: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(m as usize);
    if m == 0 {
        return out;
    }
    let mut e = Rational::from(x + 1u32);
    for _ in 0..m {
        let next = (&e * Rational::from(&e - 1u32)) + 1u32;
        out.push(std::mem::replace(&mut e, next));
    }
    out
}

/// `1/lambda = sum_{k=1}^{n} 1/E_k(lambda) + 1/(E_{n+1}(lambda) - 1)`.
pub fn egyptian_poly_check(n: u32, lambda: &Rational) -> Result<IdentityOutcome> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if *lambda == 0 {
        return Ok(IdentityOutcome::Pole { at: "lambda = 0".into() });
    }
    let e = euclid_values(n + 1, lambda);
    let mut sum = Rational::new();
    for (k, ek) in e[..n as usize].iter().enumerate() {
        if *ek == 0 {
            return Ok(IdentityOutcome::Pole { at: format!("E_{}", k + 1) });
        }
        sum += Rational::from(ek.recip_ref());
    }
    let tail = Rational::from(&e[n as usize] - 1u32);
    if tail == 0 {
        return Ok(IdentityOutcome::Pole { at: format!("E_{} - 1", n + 1) });
    }
    sum += tail.recip();
    Ok(if sum == Rational::from(lambda.recip_ref()) {
        IdentityOutcome::Holds
    } else {
        IdentityOutcome::Fails
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::euclid_poly;

    #[test]
    fn numbers() {
        for n in 1..=10 {
            assert!(egyptian_number_check(n).unwrap(), "n={n}");
        }
        // n = 4 spelled out
        let sum = [2, 3, 7, 43, 1806].iter().map(|&d| Rational::from((1, d))).fold(Rational::new(), |a, b| a + b);
        assert_eq!(sum, 1);
        assert!(egyptian_number_check(0).is_err());
    }

    #[test]
    fn polynomials() {
        assert_eq!(egyptian_poly_check(1, &Rational::from(1)).unwrap(), IdentityOutcome::Holds);
        assert_eq!(egyptian_poly_check(2, &Rational::from(2)).unwrap(), IdentityOutcome::Holds);
        assert_eq!(egyptian_poly_check(5, &Rational::from((3, 2))).unwrap(), IdentityOutcome::Holds);
        assert!(matches!(egyptian_poly_check(3, &Rational::new()).unwrap(), IdentityOutcome::Pole { .. }));
        // E_1(-1) = 0
        assert!(matches!(egyptian_poly_check(3, &Rational::from(-1)).unwrap(), IdentityOutcome::Pole { .. }));
    }

    #[test]
    fn recurrence_values_match_coefficients() {
        let x = Rational::from((-7, 5));
        let values = euclid_values(6, &x);
        for (k, v) in values.iter().enumerate() {
            assert_eq!(*v, euclid_poly(k as u32 + 1).unwrap().eval_rational(&x));
        }
        assert_eq!(euclid_values(3, &Rational::from(2))[2], 43);
    }
}
