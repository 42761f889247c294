use std::fmt;
use std::ops::{Add, Mul, Sub};

use rug::integer::Order;
use rug::{Integer, Rational};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[j]` is the coefficient of `x^j`. Trailing zeros are trimmed, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BigIntPoly {
    coeffs: Vec<Integer>,
}

/// Below this many coefficients schoolbook multiplication beats packing.
const KRONECKER_THRESHOLD: usize = 24;

impl BigIntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Integer::from(1))
    }

    pub fn constant(c: Integer) -> Self {
        Self::new(vec![c])
    }

    /// `x + c`
    pub fn linear(c: i64) -> Self {
        Self::from_i64s(&[c, 1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Integer {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn max_coeff(&self) -> Option<&Integer> {
        self.coeffs.iter().max()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= 0)
    }

    pub fn add_constant(&self, c: i64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(Integer::new());
        }
        coeffs[0] += c;
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c * s)).collect())
    }

    /// Multiply by `x^shift`.
    pub fn shift_up(&self, shift: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Integer::new(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| Integer::from(c * j as u64))
                .collect(),
        )
    }

    /// Gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Content removed and leading coefficient made positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if *self.leading().unwrap() < 0 {
            g = -g;
        }
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Integer::from(c.div_exact_ref(&g)))
                .collect(),
        )
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    fn mul_schoolbook(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        let mut out = vec![Integer::new(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Kronecker substitution: pack each polynomial into a single integer with
    /// fixed-width limb slots, multiply once, and unpack. Requires nonnegative
    /// coefficients so that slots never borrow from each other.
    fn mul_kronecker(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        let bits = |v: &[Integer]| v.iter().map(|c| c.significant_bits()).max().unwrap_or(0);
        let overlap = a.len().min(b.len()) as u64;
        let slot_bits =
            u64::from(bits(a)) + u64::from(bits(b)) + (64 - overlap.leading_zeros()) as u64 + 1;
        let slot = slot_bits.div_ceil(64) as usize;

        let pack = |v: &[Integer]| {
            let mut limbs = vec![0u64; v.len() * slot];
            for (i, c) in v.iter().enumerate() {
                let digits = c.to_digits::<u64>(Order::Lsf);
                limbs[i * slot..i * slot + digits.len()].copy_from_slice(&digits);
            }
            Integer::from_digits(&limbs, Order::Lsf)
        };

        let pa = pack(a);
        let product = if std::ptr::eq(a, b) {
            pa.square()
        } else {
            pa * pack(b)
        };
        let n_out = a.len() + b.len() - 1;
        let mut digits = product.to_digits::<u64>(Order::Lsf);
        digits.resize(n_out * slot, 0);
        digits
            .chunks(slot)
            .map(|chunk| Integer::from_digits(chunk, Order::Lsf))
            .collect()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = (&self.coeffs[..], &other.coeffs[..]);
        let coeffs = if a.len().min(b.len()) >= KRONECKER_THRESHOLD
            && self.all_nonnegative()
            && other.all_nonnegative()
        {
            Self::mul_kronecker(a, b)
        } else {
            Self::mul_schoolbook(a, b)
        };
        Self::new(coeffs)
    }

    pub fn square(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let a = &self.coeffs[..];
        let coeffs = if a.len() >= KRONECKER_THRESHOLD && self.all_nonnegative() {
            Self::mul_kronecker(a, a)
        } else {
            Self::mul_schoolbook(a, a)
        };
        Self::new(coeffs)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|j| match (self.coeffs.get(j), other.coeffs.get(j)) {
                    (Some(a), Some(b)) => Integer::from(a + b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|j| match (self.coeffs.get(j), other.coeffs.get(j)) {
                    (Some(a), Some(b)) => Integer::from(a - b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => Integer::from(-b),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `divisor`, scaled by powers of the divisor's
    /// leading coefficient so that all arithmetic stays integral.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= lc;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                r[shift + j] -= Integer::from(&lr * d);
            }
            debug_assert_eq!(*r.last().unwrap(), 0);
            while r.last().is_some_and(|c| *c == 0) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Primitive gcd over the rationals: content removed, positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for BigIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = Integer::from(c.abs_ref());
            match (j, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{j}")?,
                (_, false) => write!(f, "{mag}x^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add for &BigIntPoly {
    type Output = BigIntPoly;
    fn add(self, rhs: Self) -> BigIntPoly {
        self.add_ref(rhs)
    }
}

impl Sub for &BigIntPoly {
    type Output = BigIntPoly;
    fn sub(self, rhs: Self) -> BigIntPoly {
        self.sub_ref(rhs)
    }
}

impl Mul for &BigIntPoly {
    type Output = BigIntPoly;
    fn mul(self, rhs: Self) -> BigIntPoly {
        self.mul_ref(rhs)
    }
}
