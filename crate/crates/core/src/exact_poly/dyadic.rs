use std::fmt;

use rug::{Integer, Rational};

use super::bigpoly::BigIntPoly;

/// `numerator / 2^log2_denominator`, kept canonical: the numerator is odd
/// whenever the denominator exceeds one, and zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DyadicRational {
    numerator: Integer,
    log2_denominator: u32,
}

impl DyadicRational {
    pub fn new(numerator: Integer, log2_denominator: u32) -> Self {
        let mut d = Self {
            numerator,
            log2_denominator,
        };
        d.canonicalize();
        d
    }

    pub fn from_integer(n: Integer) -> Self {
        Self::new(n, 0)
    }

    fn canonicalize(&mut self) {
        if self.numerator == 0 {
            self.log2_denominator = 0;
            return;
        }
        let tz = self.numerator.find_one(0).unwrap_or(0);
        let drop = tz.min(self.log2_denominator);
        self.numerator >>= drop;
        self.log2_denominator -= drop;
    }

    pub fn numerator(&self) -> &Integer {
        &self.numerator
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from((
            self.numerator.clone(),
            Integer::from(1) << self.log2_denominator,
        ))
    }

    pub fn to_f64(&self) -> f64 {
        // exact scaling by a power of two; rounding happens once
        let n = rug::Float::with_val(64, &self.numerator);
        (n >> self.log2_denominator).to_f64()
    }

    /// Numerator rescaled to denominator `2^log2`; `log2` must be at least
    /// this value's own denominator exponent.
    pub fn numerator_at(&self, log2: u32) -> Integer {
        assert!(log2 >= self.log2_denominator);
        Integer::from(&self.numerator << (log2 - self.log2_denominator))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(
                f,
                "{}/{}",
                self.numerator,
                Integer::from(1) << self.log2_denominator
            )
        }
    }
}

impl std::str::FromStr for DyadicRational {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || crate::Error::Parse(format!("not a dyadic rational: `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let numerator: Integer = num.parse().map_err(|_| bad())?;
        let den: Integer = den.parse().map_err(|_| bad())?;
        if den <= 0 || !den.is_power_of_two() {
            return Err(bad());
        }
        let log2 = den.significant_bits() - 1;
        Ok(Self::new(numerator, log2))
    }
}

/// Polynomial with dyadic-rational coefficients, stored as an integer
/// numerator polynomial over a common power-of-two denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicPoly {
    numerators: BigIntPoly,
    log2_denominator: u32,
}

impl DyadicPoly {
    pub fn from_scaled(numerators: BigIntPoly, log2_denominator: u32) -> Self {
        let mut p = Self {
            numerators,
            log2_denominator,
        };
        p.reduce();
        p
    }

    pub fn from_coeffs(coeffs: &[DyadicRational]) -> Self {
        let log2 = coeffs.iter().map(|c| c.log2_denominator).max().unwrap_or(0);
        let numerators = BigIntPoly::new(coeffs.iter().map(|c| c.numerator_at(log2)).collect());
        Self::from_scaled(numerators, log2)
    }

    fn reduce(&mut self) {
        if self.numerators.is_zero() {
            self.log2_denominator = 0;
            return;
        }
        let tz = self
            .numerators
            .coeffs()
            .iter()
            .filter(|c| **c != 0)
            .map(|c| c.find_one(0).unwrap())
            .min()
            .unwrap();
        let drop = tz.min(self.log2_denominator);
        if drop > 0 {
            self.numerators = BigIntPoly::new(
                self.numerators
                    .coeffs()
                    .iter()
                    .map(|c| Integer::from(c >> drop))
                    .collect(),
            );
            self.log2_denominator -= drop;
        }
    }

    pub fn numerators(&self) -> &BigIntPoly {
        &self.numerators
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn degree(&self) -> Option<usize> {
        self.numerators.degree()
    }

    pub fn coeff(&self, j: usize) -> DyadicRational {
        DyadicRational::new(self.numerators.coeff(j), self.log2_denominator)
    }

    pub fn coeffs(&self) -> Vec<DyadicRational> {
        (0..self.numerators.coeffs().len())
            .map(|j| self.coeff(j))
            .collect()
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let n = self.numerators.eval_rational(x);
        n / (Integer::from(1) << self.log2_denominator)
    }

    /// Substitute `u = x + 1/2` and return the result if every coefficient is an integer.
    pub fn to_monomial(&self) -> Option<BigIntPoly> {
        let Some(d) = self.degree() else {
            return Some(BigIntPoly::zero());
        };
        // p(x + 1/2) * 2^(s + d) = sum_j n_j 2^(d - j) (2x + 1)^j, by Horner in (2x + 1)
        let two_x_plus_one = BigIntPoly::from_i64s(&[1, 2]);
        let c = self.numerators.coeffs();
        let mut acc = BigIntPoly::constant(c[d].clone());
        for j in (0..d).rev() {
            acc = &acc * &two_x_plus_one;
            acc = &acc + &BigIntPoly::constant(Integer::from(&c[j] << (d - j) as u32));
        }
        let shift = self.log2_denominator + d as u32;
        let mut out = Vec::with_capacity(acc.coeffs().len());
        for c in acc.coeffs() {
            if c.find_one(0).is_some_and(|tz| tz < shift) {
                return None;
            }
            out.push(Integer::from(c >> shift));
        }
        Some(BigIntPoly::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = DyadicRational::new(Integer::from(12), 4);
        assert_eq!(d.numerator(), &3);
        assert_eq!(d.log2_denominator(), 2);
        assert_eq!(d.to_string(), "3/4");
        let z = DyadicRational::new(Integer::new(), 9);
        assert_eq!(z.log2_denominator(), 0);
        assert_eq!(DyadicRational::new(Integer::from(8), 2).to_string(), "2");
    }

    #[test]
    fn parses_and_rejects() {
        let d: DyadicRational = "13/16".parse().unwrap();
        assert_eq!(d.to_f64(), 13.0 / 16.0);
        assert!("1/3".parse::<DyadicRational>().is_err());
        assert!("x".parse::<DyadicRational>().is_err());
        assert_eq!("-6/4".parse::<DyadicRational>().unwrap().to_string(), "-3/2");
    }

    #[test]
    fn shift_back_to_monomial() {
        // u^2 + 3/4 with u = x + 1/2 is x^2 + x + 1
        let p = DyadicPoly::from_coeffs(&[
            "3/4".parse().unwrap(),
            "0".parse().unwrap(),
            "1".parse().unwrap(),
        ]);
        assert_eq!(p.to_monomial().unwrap(), BigIntPoly::from_i64s(&[1, 1, 1]));
        // u alone is x + 1/2, not integral
        let u = DyadicPoly::from_coeffs(&["0".parse().unwrap(), "1".parse().unwrap()]);
        assert!(u.to_monomial().is_none());
    }
}
