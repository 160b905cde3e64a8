//! Exact arbitrary-precision arithmetic: rationals, Bernoulli numbers,
//! p-adic valuations, prime factorization, and cyclotomic fields.
//!
//! Rationals are [`num::BigRational`], which keeps the fraction reduced with
//! a positive denominator. Their `Display` form (`p/q`, or `p` when the
//! denominator is one) is the wire format used everywhere in this workspace.

pub mod cyclo;
pub mod poly;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ArithError {
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(Int),
    #[error("cyclotomic level must be at least 2, got {0}")]
    BadCyclotomicLevel(u32),
    #[error("denominator factor `{0}` vanishes at a primitive {1}-th root of unity")]
    NonInvertibleFactor(String, u32),
    #[error("division by zero in the cyclotomic field")]
    CycloDivisionByZero,
}

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

/// The n-th Bernoulli number in the convention B_1 = -1/2.
///
/// Computed by the recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0.
pub fn bernoulli(n: u64) -> Rational {
    let mut table: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    table.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(binomial(m + 1, j as u64)) * b;
        }
        table.push(-acc / Rational::from(Int::from(m + 1)));
    }
    table.pop().unwrap()
}

/// Deterministic trial-division primality test; inputs here are desk scale.
pub fn is_prime(n: &Int) -> bool {
    let two = Int::from(2);
    if n < &two {
        return false;
    }
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let mut d = Int::from(3);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization of a positive integer into sorted
/// (prime, exponent) pairs. `factor(1)` is empty.
pub fn factor(n: &Int) -> Vec<(Int, u32)> {
    assert!(n.is_positive(), "factor expects a positive integer");
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == Int::from(2) { Int::one() } else { Int::from(2) };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(p: &Int, n: &Int) -> i64 {
    assert!(!n.is_zero(), "vp_int of zero");
    let mut n = n.clone();
    let mut v = 0i64;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational; negative when p divides the
/// denominator. Errors on q = 0 or p not prime.
pub fn vp(p: &Int, q: &Rational) -> Result<i64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p.clone()));
    }
    if q.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    Ok(vp_int(p, q.numer()) - vp_int(p, q.denom()))
}

/// Exact integer power of a rational, with negative exponents allowed.
pub fn rational_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        base.pow((-exp) as i32).recip()
    }
}

/// k^e as a rational, for nonzero integer k and any integer e.
pub fn int_pow(k: i64, e: i64) -> Rational {
    assert!(k != 0, "int_pow with zero base");
    rational_pow(&Rational::from(Int::from(k)), e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn bernoulli_base_cases() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_odd_vanishes() {
        for n in (3..=21).step_by(2) {
            assert!(bernoulli(n).is_zero(), "B_{} should vanish", n);
        }
    }

    /// Independent oracle: the Worpitzky double sum
    /// B_n = sum_{k=0}^{n} 1/(k+1) sum_{j=0}^{k} (-1)^j C(k,j) j^n.
    /// This convention yields B_1 = +1/2, so odd indices are negated.
    fn bernoulli_worpitzky(n: u64) -> Rational {
        let mut acc = Rational::zero();
        for k in 0..=n {
            let mut inner = Rational::zero();
            for j in 0..=k {
                let sign = if j % 2 == 0 { Int::one() } else { -Int::one() };
                let jn = Int::from(j).pow(n as u32);
                inner += Rational::from(sign * binomial(k, j) * jn);
            }
            acc += inner / Rational::from(Int::from(k + 1));
        }
        if n == 1 {
            -acc
        } else {
            acc
        }
    }

    #[test]
    fn bernoulli_cross_checked_by_second_recurrence() {
        for n in 0..=14 {
            assert_eq!(bernoulli(n), bernoulli_worpitzky(n), "B_{}", n);
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        // denominator of B_{2t} is the product of primes p with (p-1) | 2t
        for t in 1..=10u64 {
            let den = bernoulli(2 * t).denom().clone();
            let mut expected = Int::one();
            let mut p = Int::from(2);
            while p <= Int::from(2 * t + 1) {
                if is_prime(&p) && ((2 * t) % (&p - Int::one())).is_zero() {
                    expected *= &p;
                }
                p += 1;
            }
            assert_eq!(den, expected, "t = {}", t);
        }
    }

    #[test]
    fn vp_examples() {
        let p2 = Int::from(2);
        let p3 = Int::from(3);
        let p5 = Int::from(5);
        assert_eq!(vp(&p2, &rat(24, 1)).unwrap(), 3);
        assert_eq!(vp(&p3, &rat(8, 9)).unwrap(), -2);
        assert_eq!(vp(&p5, &rat(3, 1)).unwrap(), 0);
        assert_eq!(vp(&p2, &Rational::zero()), Err(ArithError::ZeroValuation));
        assert_eq!(
            vp(&Int::from(6), &rat(1, 1)),
            Err(ArithError::NotPrime(Int::from(6)))
        );
    }

    #[test]
    fn vp_is_additive() {
        let p = Int::from(3);
        let cases = [rat(5, 9), rat(27, 4), rat(-6, 7), rat(1, 3)];
        for a in &cases {
            for b in &cases {
                assert_eq!(
                    vp(&p, &(a * b)).unwrap(),
                    vp(&p, a).unwrap() + vp(&p, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn factor_and_primes() {
        assert!(is_prime(&Int::from(2)));
        assert!(is_prime(&Int::from(691)));
        assert!(!is_prime(&Int::from(1)));
        assert!(!is_prime(&Int::from(65521 * 3)));
        assert_eq!(
            factor(&Int::from(65520)),
            vec![
                (Int::from(2), 4),
                (Int::from(3), 2),
                (Int::from(5), 1),
                (Int::from(7), 1),
                (Int::from(13), 1)
            ]
        );
        assert_eq!(factor(&Int::one()), vec![]);
    }

    #[test]
    fn rational_display_wire_form() {
        assert_eq!(rat(-691, 2730).to_string(), "-691/2730");
        assert_eq!(rat(5, 1).to_string(), "5");
        assert_eq!(Rational::zero().to_string(), "0");
    }
}
