//! Exact Euclid numbers and Euclid polynomials in the monomial basis and in the
//! shifted basis `u = x + 1/2`.
//!
//! Everything in this module is exact big-integer or dyadic arithmetic, apart
//! from the floating-point evaluators in [`eval`].

mod bigpoly;
mod dyadic;
pub mod eval;

use std::ops::RangeInclusive;

use rug::Integer;
use serde::{Deserialize, Serialize};

pub use bigpoly::BigIntPoly;
pub use dyadic::{DyadicPoly, DyadicRational};
pub use eval::{
    eval_complex, eval_exact, euclid_recurrence, poly_condition_b, recurrence_relative_residual,
    shifted_condition_b, Binary64Evaluator, EvalPrecision, ExactPolynomial, ExtendedEvaluator,
};

use crate::{Error, Result};

/// `[e_1, ..., e_{n_max}]` with `e_1 = 2` and `e_{n+1} = e_n (e_n - 1) + 1`.
///
/// The numbers roughly square at every step: `e_20` already has about
/// 10^5 decimal digits, and memory is the only practical limit.
pub fn euclid_numbers(n_max: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n_max);
    let mut e = Integer::from(2);
    for _ in 0..n_max {
        let next = (&e * Integer::from(&e - 1u32)) + 1u32;
        out.push(std::mem::replace(&mut e, next));
    }
    out
}

/// `E_1, ..., E_{k_max}` in the monomial basis via `E_{k+1} = E_k (E_k - 1) + 1`.
pub fn euclid_polys(k_max: u32) -> Vec<BigIntPoly> {
    let mut out: Vec<BigIntPoly> = Vec::with_capacity(k_max as usize);
    if k_max == 0 {
        return out;
    }
    out.push(BigIntPoly::linear(1));
    for _ in 1..k_max {
        let e = out.last().unwrap();
        let next = (e * &e.add_constant(-1)).add_constant(1);
        out.push(next);
    }
    out
}

/// The Euclid polynomial `E_k`, of degree `2^(k-1)`.
pub fn euclid_poly(k: u32) -> Result<BigIntPoly> {
    if k == 0 {
        return Err(Error::Precondition("Euclid polynomials start at k = 1".into()));
    }
    let mut e = BigIntPoly::linear(1);
    for _ in 1..k {
        e = (&e * &e.add_constant(-1)).add_constant(1);
    }
    Ok(e)
}

/// Mandelbrot polynomial `p_n` with `p_1 = 1` and `p_{n+1} = x p_n^2 + 1`.
pub fn mandelbrot_poly(n: u32) -> Result<BigIntPoly> {
    if n == 0 {
        return Err(Error::Precondition("Mandelbrot polynomials start at n = 1".into()));
    }
    let mut p = BigIntPoly::one();
    for _ in 1..n {
        p = p.square().shift_up(1).add_constant(1);
    }
    Ok(p)
}

/// `E_k` in powers of `u = x + 1/2`, from `f_1 = u`, `f_{n+1} = f_n^2 + 1/4`
/// and `E_k = f_k + 1/2`. For `k >= 2` only even powers of `u` occur.
pub fn shifted_euclid_poly(k: u32) -> Result<DyadicPoly> {
    if k == 0 {
        return Err(Error::Precondition("Euclid polynomials start at k = 1".into()));
    }
    // f = numerators / 2^s
    let mut numerators = BigIntPoly::from_i64s(&[0, 1]);
    let mut s: u32 = 0;
    for _ in 1..k {
        let s_next = (2 * s).max(2);
        let sq = numerators.square();
        let scaled = sq.scale(&(Integer::from(1) << (s_next - 2 * s)));
        numerators = &scaled + &BigIntPoly::constant(Integer::from(1) << (s_next - 2));
        s = s_next;
    }
    let half = if s == 0 {
        // f_1 = u, so E_1 = u + 1/2 = (2u + 1) / 2
        numerators = numerators.scale(&Integer::from(2));
        s = 1;
        Integer::from(1)
    } else {
        Integer::from(1) << (s - 1)
    };
    let numerators = &numerators + &BigIntPoly::constant(half);
    Ok(DyadicPoly::from_scaled(numerators, s))
}

pub fn derivative(p: &BigIntPoly) -> BigIntPoly {
    p.derivative()
}

/// Primitive gcd over the rationals, computed with exact pseudo-remainders.
pub fn poly_gcd(p: &BigIntPoly, q: &BigIntPoly) -> Result<BigIntPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::Precondition("gcd of two zero polynomials".into()));
    }
    Ok(p.gcd(q))
}

/// Outcome of scanning a coefficient vector for a single peak.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unimodality {
    pub unimodal: bool,
    /// Indices of the maximal coefficient plateau (first and last occurrence
    /// of the maximum when the polynomial is not unimodal).
    pub peak: RangeInclusive<usize>,
}

/// Nondecreasing up to a peak, possibly repeated at adjacent positions, then
/// nonincreasing. Equal neighbours are allowed on either side.
pub fn unimodality_check(p: &BigIntPoly) -> Result<Unimodality> {
    let c = p.coeffs();
    if c.is_empty() || c.iter().any(|x| *x <= 0) {
        return Err(Error::Precondition(
            "unimodality is defined for positive coefficient vectors".into(),
        ));
    }
    let max = c.iter().max().unwrap();
    let first = c.iter().position(|x| x == max).unwrap();
    let last = c.iter().rposition(|x| x == max).unwrap();
    let rising = c[..=first].windows(2).all(|w| w[0] <= w[1]);
    let plateau = c[first..=last].iter().all(|x| x == max);
    let falling = c[last..].windows(2).all(|w| w[0] >= w[1]);
    Ok(Unimodality {
        unimodal: rising && plateau && falling,
        peak: first..=last,
    })
}

/// `max_j E_{j,k+1} >= (max_j E_{j,k})^2`, compared exactly.
pub fn coeff_growth_check(k: u32) -> Result<bool> {
    let polys = euclid_polys(k + 1);
    if polys.len() < 2 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let m_k = polys[k as usize - 1].max_coeff().unwrap();
    let m_next = polys[k as usize].max_coeff().unwrap();
    Ok(*m_next >= Integer::from(m_k.square_ref()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Shifted,
}

/// JSON form of a Euclid polynomial. Coefficients are ascending and written as
/// decimal strings (`"13/16"` for dyadic ones); from `k = 7` on they no
/// longer fit in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub basis: Basis,
    pub k: u32,
    pub coeffs: Vec<String>,
}

impl PolyRecord {
    pub fn monomial(k: u32, p: &BigIntPoly) -> Self {
        Self {
            basis: Basis::Monomial,
            k,
            coeffs: p.coeffs().iter().map(Integer::to_string).collect(),
        }
    }

    pub fn shifted(k: u32, p: &DyadicPoly) -> Self {
        Self {
            basis: Basis::Shifted,
            k,
            coeffs: p.coeffs().iter().map(DyadicRational::to_string).collect(),
        }
    }

    pub fn to_monomial(&self) -> Result<BigIntPoly> {
        if self.basis != Basis::Monomial {
            return Err(Error::Parse("record is not in the monomial basis".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<Integer>()
                    .map_err(|_| Error::Parse(format!("bad integer coefficient `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BigIntPoly::new(coeffs))
    }

    pub fn to_shifted(&self) -> Result<DyadicPoly> {
        if self.basis != Basis::Shifted {
            return Err(Error::Parse("record is not in the shifted basis".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| s.parse::<DyadicRational>())
            .collect::<Result<Vec<_>>>()?;
        Ok(DyadicPoly::from_coeffs(&coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use rug::Rational;

    use super::*;

    fn ints(p: &BigIntPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    /// `E_{n+1} = x E_n E_{n-1} ... E_1 + 1`, the defining product form.
    fn euclid_product_form(k: u32) -> BigIntPoly {
        let mut polys = vec![BigIntPoly::linear(1)];
        for _ in 1..k {
            let mut prod = BigIntPoly::from_i64s(&[0, 1]);
            for e in &polys {
                prod = &prod * e;
            }
            polys.push(prod.add_constant(1));
        }
        polys.pop().unwrap()
    }

    #[test]
    fn euclid_number_sequence() {
        let e = euclid_numbers(5);
        assert_eq!(e, [2, 3, 7, 43, 1807].map(Integer::from));
        assert_eq!(euclid_numbers(1), vec![Integer::from(2)]);
        assert!(euclid_numbers(0).is_empty());
    }

    #[test]
    fn seventh_euclid_number_from_product_oracle() {
        let e = euclid_numbers(7);
        let mut prod = Integer::from(1);
        let mut oracle = vec![Integer::from(2)];
        for _ in 1..7 {
            prod *= oracle.last().unwrap();
            oracle.push(Integer::from(&prod + 1));
        }
        assert_eq!(e, oracle);
        assert_eq!(e[5], 3263443);
        assert_eq!(e[6], Integer::from(3263443u64 * 3263442 + 1));
    }

    #[test]
    fn first_four_euclid_polys() {
        let p = euclid_polys(4);
        assert_eq!(ints(&p[0]), [1, 1]);
        assert_eq!(ints(&p[1]), [1, 1, 1]);
        assert_eq!(ints(&p[2]), [1, 1, 2, 2, 1]);
        assert_eq!(ints(&p[3]), [1, 1, 3, 6, 9, 10, 8, 4, 1]);
        assert_eq!(euclid_poly(4).unwrap(), p[3]);
        assert!(euclid_poly(0).is_err());
    }

    #[test]
    fn squaring_form_matches_product_form() {
        let polys = euclid_polys(10);
        for k in 1..=10u32 {
            assert_eq!(polys[k as usize - 1], euclid_product_form(k), "k = {k}");
        }
    }

    #[test]
    fn degree_and_end_coefficients() {
        for (i, p) in euclid_polys(11).iter().enumerate() {
            let k = i as u32 + 1;
            assert_eq!(p.degree(), Some(1 << (k - 1)));
            assert_eq!(p.coeffs()[0], 1);
            assert_eq!(*p.leading().unwrap(), 1);
            assert!(p.coeffs().iter().all(|c| *c >= 1));
        }
    }

    #[test]
    fn value_at_one_is_euclid_number() {
        let e = euclid_numbers(12);
        for (p, e) in euclid_polys(12).iter().zip(&e) {
            assert_eq!(p.eval_integer(&Integer::from(1)), *e);
        }
    }

    #[test]
    fn mandelbrot_family() {
        assert_eq!(ints(&mandelbrot_poly(1).unwrap()), [1]);
        assert_eq!(ints(&mandelbrot_poly(2).unwrap()), [1, 1]);
        // x (x + 1)^2 + 1
        assert_eq!(ints(&mandelbrot_poly(3).unwrap()), [1, 1, 2, 1]);
        assert_eq!(mandelbrot_poly(6).unwrap().degree(), Some(31));
    }

    #[test]
    fn shifted_polys_match_listed_values() {
        let s = |k| {
            shifted_euclid_poly(k)
                .unwrap()
                .coeffs()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        };
        assert_eq!(s(1), ["1/2", "1"]);
        assert_eq!(s(2), ["3/4", "0", "1"]);
        assert_eq!(s(3), ["13/16", "0", "1/2", "0", "1"]);
        assert_eq!(s(4), ["217/256", "0", "5/16", "0", "7/8", "0", "1", "0", "1"]);
        let e5 = s(5);
        assert_eq!(e5[0], "57073/65536");
        assert_eq!(e5[14], "2");
        assert_eq!(e5[16], "1");
    }

    #[test]
    fn shifted_polys_even_and_invertible() {
        let mono = euclid_polys(10);
        for k in 1..=10u32 {
            let p = shifted_euclid_poly(k).unwrap();
            if k >= 2 {
                for (j, c) in p.coeffs().iter().enumerate() {
                    if j % 2 == 1 {
                        assert!(c.is_zero(), "k = {k}, j = {j}");
                    }
                }
            }
            assert_eq!(p.to_monomial().unwrap(), mono[k as usize - 1], "k = {k}");
        }
    }

    #[test]
    fn exact_evaluation() {
        let one = Rational::from(1);
        assert_eq!(eval_exact(&euclid_poly(3).unwrap(), &one), 7);
        assert_eq!(eval_exact(&euclid_poly(4).unwrap(), &one), 43);
        assert_eq!(eval_exact(&euclid_poly(1).unwrap(), &Rational::new()), 1);
        // shifted E_2 at u = 1/2 is E_2(0) = 1
        let half = Rational::from((1, 2));
        assert_eq!(eval_exact(&shifted_euclid_poly(2).unwrap(), &half), 1);
    }

    #[test]
    fn complex_evaluation() {
        let e2 = euclid_poly(2).unwrap();
        assert_eq!(eval_complex(&e2, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        assert!(eval_complex(&e2, omega).unwrap().norm() < 1e-14);
        let e1 = euclid_poly(1).unwrap();
        assert_eq!(eval_complex(&e1, Complex64::new(-1.0, 0.0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn complex_evaluation_reports_overflow() {
        let e12 = euclid_poly(12).unwrap();
        assert!(matches!(
            eval_complex(&e12, Complex64::new(0.1, 0.0)),
            Err(Error::Overflow(_))
        ));
        let e9 = euclid_poly(9).unwrap();
        assert!(matches!(
            eval_complex(&e9, Complex64::new(1e3, 0.0)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn extended_evaluation_agrees_with_exact() {
        let e7 = euclid_poly(7).unwrap();
        let ev = ExtendedEvaluator::new(&e7, 256);
        let z = Complex64::new(0.375, -0.25);
        let (v, _) = ev.value_and_majorant(z);
        let exact = {
            let x = Rational::from_f64(0.375).unwrap();
            let y = Rational::from_f64(-0.25).unwrap();
            // Horner with exact complex rationals
            let (mut re, mut im) = (Rational::new(), Rational::new());
            for c in e7.coeffs().iter().rev() {
                let nr = Rational::from(&re * &x) - Rational::from(&im * &y) + c;
                let ni = Rational::from(&re * &y) + Rational::from(&im * &x);
                re = nr;
                im = ni;
            }
            (re.to_f64().powi(2) + im.to_f64().powi(2)).sqrt()
        };
        assert!((v.to_f64() - exact).abs() <= 1e-14 * exact);
    }

    #[test]
    fn condition_b_values() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(poly_condition_b(2, i).unwrap(), 3.0);
        for k in 1..8 {
            assert_eq!(poly_condition_b(k, Complex64::new(0.0, 0.0)).unwrap(), 1.0);
        }
        assert_eq!(poly_condition_b(3, Complex64::new(1.0, 0.0)).unwrap(), 7.0);
        assert!(matches!(
            poly_condition_b(14, Complex64::new(2.0, 0.0)),
            Err(Error::Overflow(_))
        ));
        assert!(poly_condition_b(0, i).is_err());
    }

    #[test]
    fn shifted_condition_values() {
        assert_eq!(shifted_condition_b(2, 0.0).unwrap(), 0.75);
        assert_eq!(shifted_condition_b(2, 1.0).unwrap(), 1.75);
        assert_eq!(shifted_condition_b(1, 0.0).unwrap(), 0.5);
        assert!(shifted_condition_b(2, -0.1).is_err());
    }

    #[test]
    fn majorants_agree_with_coefficient_sums() {
        for k in 1..=8 {
            let mono = Binary64Evaluator::new(&euclid_poly(k).unwrap()).unwrap();
            let shifted = Binary64Evaluator::new(&shifted_euclid_poly(k).unwrap()).unwrap();
            for r in [0.0, 0.3, 0.9, 1.118] {
                let z = Complex64::new(0.0, r);
                let a = poly_condition_b(k, z).unwrap();
                let b = mono.majorant(r).unwrap();
                assert!((a - b).abs() <= 1e-12 * b, "k = {k}, r = {r}");
                let a = shifted_condition_b(k, r).unwrap();
                let b = shifted.majorant(r).unwrap();
                assert!((a - b).abs() <= 1e-12 * b, "k = {k}, r = {r}");
            }
        }
    }

    #[test]
    fn gcd_properties() {
        let polys = euclid_polys(8);
        let one = BigIntPoly::one();
        assert_eq!(poly_gcd(&polys[1], &polys[2]).unwrap(), one);
        assert_eq!(poly_gcd(&polys[2], &polys[2]).unwrap(), polys[2]);
        assert_eq!(poly_gcd(&polys[3], &derivative(&polys[3])).unwrap(), one);
        assert!(poly_gcd(&BigIntPoly::zero(), &BigIntPoly::zero()).is_err());
    }

    #[test]
    fn pairwise_coprime_and_squarefree() {
        let polys = euclid_polys(8);
        let one = BigIntPoly::one();
        for n in 0..8 {
            for m in 0..n {
                assert_eq!(poly_gcd(&polys[n], &polys[m]).unwrap(), one, "E_{} E_{}", n + 1, m + 1);
            }
            assert_eq!(poly_gcd(&polys[n], &derivative(&polys[n])).unwrap(), one);
        }
    }

    #[test]
    fn derivative_chain_rule() {
        let p = euclid_polys(3);
        assert_eq!(ints(&derivative(&p[0])), [1]);
        assert_eq!(ints(&derivative(&p[1])), [1, 2]);
        let rhs = &p[1].scale(&Integer::from(2)).add_constant(-1) * &derivative(&p[1]);
        assert_eq!(derivative(&p[2]), rhs);
    }

    #[test]
    fn unimodality() {
        let u = unimodality_check(&euclid_poly(4).unwrap()).unwrap();
        assert!(u.unimodal);
        assert_eq!(u.peak, 5..=5);
        let bimodal = BigIntPoly::from_i64s(&[1, 2, 1, 2, 1]);
        assert!(!unimodality_check(&bimodal).unwrap().unimodal);
        let plateau = BigIntPoly::from_i64s(&[1, 3, 3, 1]);
        assert_eq!(unimodality_check(&plateau).unwrap().peak, 1..=2);
        assert!(unimodality_check(&euclid_poly(8).unwrap()).unwrap().unimodal);
        assert!(unimodality_check(&BigIntPoly::from_i64s(&[1, 0, 1])).is_err());
        assert!(unimodality_check(&BigIntPoly::from_i64s(&[1, -1, 1])).is_err());
    }

    #[test]
    fn max_coefficient_squares() {
        assert!(coeff_growth_check(1).unwrap());
        assert!(coeff_growth_check(3).unwrap());
        assert_eq!(*euclid_poly(3).unwrap().max_coeff().unwrap(), 2);
        assert_eq!(*euclid_poly(4).unwrap().max_coeff().unwrap(), 10);
        for k in 1..=9 {
            assert!(coeff_growth_check(k).unwrap(), "k = {k}");
        }
        assert!(coeff_growth_check(0).is_err());
    }

    #[test]
    fn json_records() {
        let r = PolyRecord::monomial(4, &euclid_poly(4).unwrap());
        let json = r.to_json();
        assert_eq!(
            json,
            r#"{"basis":"monomial","k":4,"coeffs":["1","1","3","6","9","10","8","4","1"]}"#
        );
        assert_eq!(PolyRecord::from_json(&json).unwrap().to_monomial().unwrap(), euclid_poly(4).unwrap());
        let s = PolyRecord::shifted(3, &shifted_euclid_poly(3).unwrap());
        assert_eq!(s.coeffs, ["13/16", "0", "1/2", "0", "1"]);
        assert_eq!(s.to_shifted().unwrap(), shifted_euclid_poly(3).unwrap());
        assert!(s.to_monomial().is_err());
    }
}
