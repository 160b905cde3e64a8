//! The multiplicative formal group law x + y + bxy over Z[1/k][b, b^{-1}],
//! with the Bott symbol carried as a formal weight on each term.
//!
//! Series are truncated in total (x, y)-degree. The k-th power series
//! [k](x) = ((1 + bx)^k - 1)/b and the scaling morphism x -> kx, b -> b/k
//! are both available, together with the corresponding checkable predicates.

use crate::exact::{int_pow, Int, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Term key: (x-degree, y-degree, b-power).
type Key = (u32, u32, i64);

/// A truncated series in x, y with coefficients in Q[b, b^{-1}].
#[derive(Clone, Debug, PartialEq)]
pub struct FglSeries {
    truncation: u32,
    terms: BTreeMap<Key, Rational>,
}

impl FglSeries {
    pub fn zero(truncation: u32) -> Self {
        FglSeries {
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(truncation: u32, xdeg: u32, ydeg: u32, bpow: i64, coeff: Rational) -> Self {
        let mut s = FglSeries::zero(truncation);
        s.insert((xdeg, ydeg, bpow), coeff);
        s
    }

    pub fn x(truncation: u32) -> Self {
        FglSeries::term(truncation, 1, 0, 0, Rational::one())
    }

    pub fn y(truncation: u32) -> Self {
        FglSeries::term(truncation, 0, 1, 0, Rational::one())
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: Key, coeff: Rational) {
        if coeff.is_zero() || key.0 + key.1 > self.truncation {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &FglSeries) -> FglSeries {
        assert_eq!(self.truncation, rhs.truncation);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> FglSeries {
        FglSeries {
            truncation: self.truncation,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &FglSeries) -> FglSeries {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &FglSeries) -> FglSeries {
        assert_eq!(self.truncation, rhs.truncation);
        let mut out = FglSeries::zero(self.truncation);
        for ((xa, ya, ba), ca) in &self.terms {
            for ((xb, yb, bb), cb) in &rhs.terms {
                out.insert((xa + xb, ya + yb, ba + bb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> FglSeries {
        if c.is_zero() {
            return FglSeries::zero(self.truncation);
        }
        FglSeries {
            truncation: self.truncation,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Substitute x -> kx, y -> ky.
    pub fn scale_variables(&self, k: i64) -> FglSeries {
        let mut out = FglSeries::zero(self.truncation);
        for ((x, y, b), c) in &self.terms {
            out.insert((*x, *y, *b), c * int_pow(k, (x + y) as i64));
        }
        out
    }

    /// Substitute b -> b/k (the coefficient-ring half of the morphism).
    pub fn scale_bott(&self, k: i64) -> FglSeries {
        let mut out = FglSeries::zero(self.truncation);
        for ((x, y, b), c) in &self.terms {
            out.insert((*x, *y, *b), c * int_pow(k, -*b));
        }
        out
    }

    /// Compose a one-variable series f (terms in x only) with arguments
    /// without constant term: f(arg).
    pub fn compose(&self, arg: &FglSeries) -> FglSeries {
        assert!(
            self.terms.keys().all(|(_, y, _)| *y == 0),
            "compose expects a one-variable series"
        );
        assert!(
            arg.terms.keys().all(|(x, y, _)| x + y > 0),
            "argument must have no constant term"
        );
        let mut out = FglSeries::zero(self.truncation);
        let max_n = self.terms.keys().map(|(x, _, _)| *x).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_n as usize + 1);
        let mut p = FglSeries::term(self.truncation, 0, 0, 0, Rational::one());
        for _ in 0..=max_n {
            powers.push(p.clone());
            p = p.mul(arg);
        }
        for ((n, _, b), c) in &self.terms {
            let piece = powers[*n as usize]
                .scale(c)
                .mul(&FglSeries::term(self.truncation, 0, 0, *b, Rational::one()));
            out = out.add(&piece);
        }
        out
    }

    /// Swap x and y.
    pub fn swap_variables(&self) -> FglSeries {
        FglSeries {
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|((x, y, b), c)| ((*y, *x, *b), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FglSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((x, y, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if !c.is_one() || (*x == 0 && *y == 0 && *b == 0) {
                factors.push(c.to_string());
            }
            match b {
                0 => {}
                1 => factors.push("b".into()),
                _ => factors.push(format!("b^{}", b)),
            }
            match x {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{}", x)),
            }
            match y {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{}", y)),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// The formal sum F_b(x, y) = x + y + bxy.
pub fn fgl_sum(truncation: u32) -> FglSeries {
    let mut s = FglSeries::zero(truncation);
    s.insert((1, 0, 0), Rational::one());
    s.insert((0, 1, 0), Rational::one());
    s.insert((1, 1, 1), Rational::one());
    s
}

/// The k-th power series [k](x) = ((1 + bx)^k - 1)/b
/// = sum_{n >= 1} C(k, n) b^{n-1} x^n, with the generalized binomial for
/// negative k.
pub fn fgl_k_series(k: i64, truncation: u32) -> FglSeries {
    assert!(k != 0, "the zero series is excluded with k = 0 localization");
    let mut s = FglSeries::zero(truncation);
    let mut binom = Rational::one();
    for n in 1..=truncation as i64 {
        // C(k, n) = C(k, n-1) * (k - n + 1) / n
        binom = binom * Rational::from(Int::from(k - n + 1)) / Rational::from(Int::from(n));
        if binom.is_zero() {
            break;
        }
        s.insert((n as u32, 0, n - 1), binom.clone());
    }
    s
}

/// The morphism identity F_{b/k}(kx, ky) = k F_b(x, y), checked exactly at
/// the given truncation.
pub fn morphism_check(k: i64, truncation: u32) -> bool {
    let f = fgl_sum(truncation);
    let lhs = f.scale_bott(k).scale_variables(k);
    let rhs = f.scale(&Rational::from(Int::from(k)));
    lhs == rhs
}

/// The stronger series identity [k](F(x, y)) = F([k]x, [k]y), exact at the
/// given truncation; this is what makes [k] an endomorphism of the law.
pub fn k_series_endomorphism_check(k: i64, truncation: u32) -> bool {
    let f = fgl_sum(truncation);
    let kx = fgl_k_series(k, truncation);
    let ky = kx.swap_variables();
    let lhs = kx.compose(&f);
    // F(A, B) = A + B + bAB
    let b = FglSeries::term(truncation, 0, 0, 1, Rational::one());
    let rhs = kx.add(&ky).add(&b.mul(&kx).mul(&ky));
    lhs == rhs
}
