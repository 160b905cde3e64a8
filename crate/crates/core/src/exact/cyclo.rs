//! Arithmetic in cyclotomic fields Q(zeta_d) and exact Galois trace sums.
//!
//! Elements live modulo the d-th cyclotomic polynomial (irreducible, monic),
//! never modulo z^d - 1; sums over non-primitive roots are routed through
//! divisor levels by the caller.

use super::poly::Poly;
use super::{ArithError, Int, Rational};
use num::{One, Zero};

/// Euler totient.
pub fn phi(d: u32) -> u32 {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Positive divisors of d in increasing order.
pub fn divisors(d: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=d).filter(|e| d % e == 0).collect();
    out.sort_unstable();
    out
}

/// The d-th cyclotomic polynomial, via Phi_d = (z^d - 1) / prod_{e|d, e<d} Phi_e.
pub fn cyclotomic(d: u32) -> Poly {
    assert!(d >= 1);
    let mut num = Poly::power_minus_one(d as usize);
    for e in divisors(d) {
        if e == d {
            continue;
        }
        let (q, r) = num.div_rem(&cyclotomic(e));
        debug_assert!(r.is_zero());
        num = q;
    }
    num
}

/// An element of Q(zeta_d), stored as rational coordinates on the power basis
/// 1, zeta, ..., zeta^{phi(d)-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    level: u32,
    poly: Poly,
    modulus: Poly,
}

impl CycloElement {
    pub fn new(level: u32, poly: Poly) -> Result<Self, ArithError> {
        if level < 2 {
            return Err(ArithError::BadCyclotomicLevel(level));
        }
        let modulus = cyclotomic(level);
        Ok(CycloElement {
            level,
            poly: poly.rem(&modulus),
            modulus,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coordinates on the power basis, padded to length phi(d).
    pub fn coords(&self) -> Vec<Rational> {
        let n = phi(self.level) as usize;
        (0..n).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn add(&self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        CycloElement {
            level: self.level,
            poly: (&self.poly + &rhs.poly).rem(&self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    pub fn mul(&self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        CycloElement {
            level: self.level,
            poly: (&self.poly * &rhs.poly).rem(&self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    /// Multiplicative inverse by extended Euclid against the (irreducible)
    /// cyclotomic modulus; fails only on zero.
    pub fn inv(&self) -> Result<CycloElement, ArithError> {
        if self.poly.is_zero() {
            return Err(ArithError::CycloDivisionByZero);
        }
        let (g, s, _) = self.poly.extended_gcd(&self.modulus);
        debug_assert!(g == Poly::one(), "cyclotomic modulus must be irreducible");
        Ok(CycloElement {
            level: self.level,
            poly: s.rem(&self.modulus),
            modulus: self.modulus.clone(),
        })
    }

    /// Galois conjugate zeta -> zeta^u for u coprime to the level.
    pub fn conjugate(&self, u: u32) -> CycloElement {
        let reduced = self.poly.compose_power((u % self.level) as usize);
        CycloElement {
            level: self.level,
            poly: reduced.rem(&self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    /// Field trace over Q: the sum of all Galois conjugates. The conjugate
    /// sum is Galois-invariant, hence rational.
    pub fn trace(&self) -> Rational {
        let mut acc = CycloElement {
            level: self.level,
            poly: Poly::zero(),
            modulus: self.modulus.clone(),
        };
        for u in 1..self.level {
            if gcd_u32(u, self.level) == 1 {
                acc = acc.add(&self.conjugate(u));
            }
        }
        let coords = acc.coords();
        assert!(
            coords.iter().skip(1).all(|c| c.is_zero()),
            "trace must be rational"
        );
        coords.into_iter().next().unwrap_or_else(Rational::zero)
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// A rational function num / prod(factors), with the denominator kept in
/// factored form so that a vanishing factor can be named in errors.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub numerator: Poly,
    pub denominator_factors: Vec<Poly>,
}

impl RationalFunction {
    pub fn polynomial(numerator: Poly) -> Self {
        RationalFunction {
            numerator,
            denominator_factors: Vec::new(),
        }
    }

    pub fn new(numerator: Poly, denominator_factors: Vec<Poly>) -> Self {
        RationalFunction {
            numerator,
            denominator_factors,
        }
    }
}

/// Exact Galois-orbit sum sum_{u in (Z/d)^*} F(zeta_d^u).
///
/// Each denominator factor is inverted modulo the d-th cyclotomic polynomial;
/// a factor that vanishes at a primitive d-th root is reported by name.
pub fn cyclo_trace_sum(d: u32, f: &RationalFunction) -> Result<Rational, ArithError> {
    if d < 2 {
        return Err(ArithError::BadCyclotomicLevel(d));
    }
    let mut value = CycloElement::new(d, f.numerator.clone())?;
    for factor in &f.denominator_factors {
        let elem = CycloElement::new(d, factor.clone())?;
        if elem.is_zero() {
            return Err(ArithError::NonInvertibleFactor(factor.to_string(), d));
        }
        value = value.mul(&elem.inv()?);
    }
    Ok(value.trace())
}
