//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order; the vector is empty for
//! the zero polynomial and otherwise ends in a nonzero coefficient. This is
//! the workhorse for cyclotomic polynomial arithmetic.

use super::{Int, Rational};
use num::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// c * z^n
    pub fn monomial(c: Rational, n: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// z^n - 1
    pub fn power_minus_one(n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[0] = -Rational::one();
        coeffs[n] = Rational::one();
        Poly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        let dd = div.degree().expect("division by the zero polynomial");
        let lead_inv = div.leading().unwrap().recip();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let q = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            for (i, c) in div.coeffs.iter().enumerate() {
                let val = &rem.coeffs[shift + i] - &(c * &q);
                rem.coeffs[shift + i] = val;
            }
            rem.trim();
            quot[shift] = q;
        }
        (Poly::from_coeffs(quot), rem)
    }

    pub fn rem(&self, modulus: &Poly) -> Poly {
        self.div_rem(modulus).1
    }

    /// Substitute z -> z^k and reduce nothing; plain exponent stretch.
    pub fn compose_power(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    }

    /// Extended Euclid: returns (g, s, t) with s*self + t*other = g, g monic
    /// (or zero when both inputs are zero).
    pub fn extended_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::one();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lead) = r0.leading().cloned() {
            let inv = lead.recip();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        } else {
            (r0, s0, t0)
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 if c.is_one() => write!(f, "z")?,
                1 => write!(f, "{}*z", c)?,
                _ if c.is_one() => write!(f, "z^{}", i)?,
                _ => write!(f, "{}*z^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Convenience: build a polynomial from integer coefficients.
pub fn poly_from_ints(coeffs: &[i64]) -> Poly {
    Poly::from_coeffs(
        coeffs
            .iter()
            .map(|&c| Rational::from(Int::from(c)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_roundtrip() {
        let a = poly_from_ints(&[1, 0, -3, 2, 5]);
        let b = poly_from_ints(&[2, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn extended_gcd_bezout() {
        let a = poly_from_ints(&[-1, 0, 0, 1]); // z^3 - 1
        let b = poly_from_ints(&[-1, 1]); // z - 1
        let (g, s, t) = a.extended_gcd(&b);
        assert_eq!(g, poly_from_ints(&[-1, 1]));
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = poly_from_ints(&[1, 1, 1]); // z^2 + z + 1
        let b = poly_from_ints(&[-1, 1]); // z - 1
        let (g, s, t) = a.extended_gcd(&b);
        assert_eq!(g, Poly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), Poly::one());
    }

    #[test]
    fn display_form() {
        assert_eq!(poly_from_ints(&[-1, 0, 1]).to_string(), "z^2 + -1");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
