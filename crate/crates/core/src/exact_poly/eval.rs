//! Floating-point evaluation paths: binary64 Horner on converted coefficients,
//! a software extended-precision Horner, and the coefficient-free recurrence.

use num_complex::Complex64;
use rug::{Assign, Float, Rational};

use super::{BigIntPoly, DyadicPoly};
use crate::{Error, Result};

/// Polynomials whose coefficients are exact and can be evaluated exactly or
/// converted to floating point.
pub trait ExactPolynomial {
    fn eval_exact(&self, x: &Rational) -> Rational;

    /// Coefficients rounded to binary64; entries may be infinite.
    fn coeffs_f64(&self) -> Vec<f64>;

    /// Coefficients rounded to `prec` bits.
    fn coeffs_float(&self, prec: u32) -> Vec<Float>;
}

impl ExactPolynomial for BigIntPoly {
    fn eval_exact(&self, x: &Rational) -> Rational {
        self.eval_rational(x)
    }

    fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs()
            .iter()
            .map(|c| Float::with_val(53, c).to_f64())
            .collect()
    }

    fn coeffs_float(&self, prec: u32) -> Vec<Float> {
        self.coeffs()
            .iter()
            .map(|c| Float::with_val(prec, c))
            .collect()
    }
}

impl ExactPolynomial for DyadicPoly {
    fn eval_exact(&self, x: &Rational) -> Rational {
        self.eval_rational(x)
    }

    fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs_float(53).iter().map(Float::to_f64).collect()
    }

    fn coeffs_float(&self, prec: u32) -> Vec<Float> {
        let s = self.log2_denominator();
        self.numerators()
            .coeffs()
            .iter()
            .map(|c| Float::with_val(prec, c) >> s)
            .collect()
    }
}

pub fn eval_exact<P: ExactPolynomial + ?Sized>(p: &P, x: &Rational) -> Rational {
    p.eval_exact(x)
}

/// Horner evaluation in binary64. Coefficients are rounded at call time, so
/// beyond roughly k = 9 the monomial coefficients of a Euclid polynomial are
/// no longer exact in binary64; at k = 12 they overflow and this returns
/// [`Error::Overflow`].
pub fn eval_complex<P: ExactPolynomial + ?Sized>(p: &P, z: Complex64) -> Result<Complex64> {
    Binary64Evaluator::new(p)?.eval(z)
}

/// Which arithmetic to use for coefficient-based evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPrecision {
    Binary64,
    /// Software floating point with the given mantissa width in bits.
    Extended(u32),
}

impl EvalPrecision {
    /// Default mantissa width of the extended path.
    pub const EXTENDED_BITS: u32 = 256;

    /// Binary64 while the field values stay resolvable, extended beyond.
    pub fn auto(k: u32) -> Self {
        if k <= 6 {
            Self::Binary64
        } else {
            Self::Extended(Self::EXTENDED_BITS)
        }
    }
}

/// Evaluator with coefficients already rounded to binary64.
#[derive(Clone, Debug)]
pub struct Binary64Evaluator {
    coeffs: Vec<f64>,
}

impl Binary64Evaluator {
    pub fn new<P: ExactPolynomial + ?Sized>(p: &P) -> Result<Self> {
        let coeffs = p.coeffs_f64();
        if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Overflow(format!(
                "converting coefficient {j} to binary64"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        if acc.re.is_finite() && acc.im.is_finite() {
            Ok(acc)
        } else {
            Err(Error::Overflow(format!("evaluating at {z}")))
        }
    }

    /// `sum |c_j| r^j`
    pub fn majorant(&self, r: f64) -> Result<f64> {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c.abs();
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::Overflow(format!("evaluating the majorant at {r}")))
        }
    }

    /// `|p(z)| / sum |c_j| |z|^j`
    pub fn relative_residual(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval(z)?.norm() / self.majorant(z.norm())?)
    }
}

/// Evaluator with coefficients rounded to a software float of `prec` bits.
/// The exponent range is effectively unbounded, so this path never overflows
/// at desk scale.
#[derive(Clone, Debug)]
pub struct ExtendedEvaluator {
    coeffs: Vec<Float>,
    prec: u32,
}

impl ExtendedEvaluator {
    pub fn new<P: ExactPolynomial + ?Sized>(p: &P, prec: u32) -> Self {
        Self {
            coeffs: p.coeffs_float(prec),
            prec,
        }
    }

    /// `(|p(z)|, sum |c_j| |z|^j)` at the evaluator's precision.
    pub fn value_and_majorant(&self, z: Complex64) -> (Float, Float) {
        let prec = self.prec;
        let (x, y) = (Float::with_val(prec, z.re), Float::with_val(prec, z.im));
        let r = Float::with_val(prec, z.norm());
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let mut maj = Float::new(prec);
        let mut t1 = Float::new(prec);
        let mut t2 = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            // (re + i im)(x + i y) + c
            t1.assign(&re * &x);
            t2.assign(&im * &y);
            t1 -= &t2;
            t2.assign(&re * &y);
            im *= &x;
            im += &t2;
            re.assign(&t1 + c);
            maj *= &r;
            t1.assign(c.abs_ref());
            maj += &t1;
        }
        let modulus = Float::with_val(prec, re.hypot_ref(&im));
        (modulus, maj)
    }

    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let (v, m) = self.value_and_majorant(z);
        if m.is_zero() {
            return 0.0;
        }
        Float::with_val(self.prec, &v / &m).to_f64()
    }
}

/// `(E_k(z), E_k'(z))` from `E_1 = z + 1`, `E_{j+1} = E_j (E_j - 1) + 1`,
/// `E'_{j+1} = (2 E_j - 1) E'_j`; O(k) work and no coefficients.
pub fn euclid_recurrence(k: u32, z: Complex64) -> (Complex64, Complex64) {
    assert!(k >= 1);
    let mut e = z + 1.0;
    let mut de = Complex64::new(1.0, 0.0);
    for _ in 1..k {
        de *= 2.0 * e - 1.0;
        e = e * (e - 1.0) + 1.0;
    }
    (e, de)
}

/// `B_k(|z|) = sum_j E_{j,k} |z|^j`. All coefficients are positive, so this is
/// `E_k(|z|)`, evaluated by the recurrence without cancellation.
pub fn poly_condition_b(k: u32, z: Complex64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let r = z.norm();
    let mut e = r + 1.0;
    for _ in 1..k {
        e = e * (e - 1.0) + 1.0;
    }
    if e.is_finite() {
        Ok(e)
    } else {
        Err(Error::Overflow(format!("evaluating B_{k} at |z| = {r}")))
    }
}

/// Shifted-basis majorant `sum_j |v_j| u^j`. The shifted coefficients are all
/// nonnegative (`f_1 = u`, `f_{n+1} = f_n^2 + 1/4`, `E_k(u) = f_k + 1/2`), so the
/// majorant is the shifted polynomial itself at `|u|`.
pub fn shifted_condition_b(k: u32, u: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if !(u >= 0.0) {
        return Err(Error::Precondition(format!("u = {u} must be nonnegative")));
    }
    let mut f = u;
    for _ in 1..k {
        f = f * f + 0.25;
    }
    let b = f + 0.5;
    if b.is_finite() {
        Ok(b)
    } else {
        Err(Error::Overflow(format!("evaluating the shifted majorant at u = {u}")))
    }
}

/// `|E_k(z)| / B_k(|z|)` with both numerator and majorant from the recurrence.
/// When binary64 overflows, the same recurrence runs with a 53-bit mantissa
/// and an unbounded exponent.
pub fn recurrence_relative_residual(k: u32, z: Complex64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let (e, _) = euclid_recurrence(k, z);
    if let (true, Ok(b)) = (e.re.is_finite() && e.im.is_finite(), poly_condition_b(k, z)) {
        return Ok(e.norm() / b);
    }
    let prec = f64::MANTISSA_DIGITS;
    let mut re = Float::with_val(prec, z.re + 1.0);
    let mut im = Float::with_val(prec, z.im);
    let mut b = Float::with_val(prec, z.norm() + 1.0);
    let mut t = Float::new(prec);
    for _ in 1..k {
        // (x + iy)(x - 1 + iy) + 1 = x^2 - x - y^2 + 1 + i y (2x - 1)
        t.assign(&re * &re);
        t -= &re;
        t += 1.0;
        let y2 = Float::with_val(prec, &im * &im);
        t -= &y2;
        im *= Float::with_val(prec, &re * 2.0) - 1.0;
        std::mem::swap(&mut re, &mut t);
        let bb = Float::with_val(prec, &b - 1.0);
        b *= &bb;
        b += 1.0;
    }
    let modulus = Float::with_val(prec, re.hypot_ref(&im));
    Ok(Float::with_val(prec, &modulus / &b).to_f64())
}
