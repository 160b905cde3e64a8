//! Elements of truncated graded rings: sparse term maps in normal form.

use super::{ElementError, Monomial, Ring, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A ring element in normal form: every stored monomial has each
/// relation-bearing exponent below its relation power, total degree at most
/// the truncation, and a nonzero coefficient. Term order (lexicographic on
/// the exponent vector) is the serialization order.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement<S> {
    ring: Ring<S>,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> GradedElement<S> {
    pub fn zero(ring: &Ring<S>) -> Self {
        GradedElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring<S>, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.generator_count()], c);
        }
        GradedElement {
            ring: ring.clone(),
            terms,
        }
    }

    /// Reduce an arbitrary term list to normal form: apply relations until
    /// every leading exponent is below its relation power, drop terms above
    /// the truncation, and cancel.
    pub fn from_terms(ring: &Ring<S>, terms: Vec<(Monomial, S)>) -> Self {
        let mut out: BTreeMap<Monomial, S> = BTreeMap::new();
        let mut stack: Vec<(Monomial, S)> = terms;
        while let Some((mono, coeff)) = stack.pop() {
            assert_eq!(
                mono.len(),
                ring.generator_count(),
                "monomial width mismatch"
            );
            if coeff.is_zero() || ring.monomial_degree(&mono) > ring.truncation() {
                continue;
            }
            // reduce the highest-index violating generator first; tails only
            // involve generators of lower or equal index, so this terminates
            let violating = (0..mono.len()).rev().find(|&i| {
                ring.relation(i)
                    .is_some_and(|(power, _)| mono[i] >= *power)
            });
            match violating {
                Some(i) => {
                    let (power, tail) = ring.relation(i).unwrap();
                    let mut rest = mono;
                    rest[i] -= power;
                    for (tmono, tcoeff) in tail {
                        let combined: Monomial =
                            rest.iter().zip(tmono.iter()).map(|(a, b)| a + b).collect();
                        stack.push((combined, coeff.clone() * tcoeff.clone()));
                    }
                }
                None => {
                    let entry = out.entry(mono).or_insert_with(S::zero);
                    *entry = entry.clone() + coeff;
                    // deferred zero-removal happens below
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        GradedElement {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Fully reduced representative; elements are kept in normal form, so
    /// this re-runs the reduction and is idempotent by construction.
    pub fn normal_form(&self) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect(),
        )
    }

    pub fn ring(&self) -> &Ring<S> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degree-0 coefficient.
    pub fn augmentation(&self) -> S {
        self.terms
            .get(&vec![0; self.ring.generator_count()])
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of degree 2j.
    pub fn component(&self, j: u32) -> Self {
        let target = 2 * j;
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.monomial_degree(m) == target)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Zero out every homogeneous component of degree below `l`.
    pub fn filtration_cut(&self, l: u32) -> Self {
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.monomial_degree(m) >= l)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest 2j with a nonzero degree-2j component, or None for zero.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| self.ring.monomial_degree(m))
            .min()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GradedElement::constant(&self.ring, S::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit (nonzero degree-0 part): scale out the constant and
    /// sum the finite geometric series in the nilpotent remainder.
    pub fn invert_unit(&self) -> Result<Self, ElementError> {
        let c = self.augmentation();
        if c.is_zero() {
            return Err(ElementError::NonUnit);
        }
        let c_inv = S::one() / c.clone();
        let nilpotent = self - &Self::constant(&self.ring, c);
        let mut acc = Self::zero(&self.ring);
        let mut power = Self::constant(&self.ring, S::one());
        let mut factor = c_inv.clone();
        loop {
            acc = &acc + &power.scale(&factor);
            power = &power * &nilpotent;
            if power.is_zero() {
                break;
            }
            factor = -(factor * c_inv.clone());
        }
        Ok(acc)
    }

    /// Truncated exponential of a nilpotent (zero degree-0 part) element.
    pub fn exp_nilpotent(&self) -> Result<Self, ElementError> {
        if !self.augmentation().is_zero() {
            return Err(ElementError::NonzeroAugmentation);
        }
        let mut acc = Self::constant(&self.ring, S::one());
        let mut power = Self::constant(&self.ring, S::one());
        let mut factorial = S::one();
        let mut n: u64 = 0;
        loop {
            n += 1;
            power = &power * self;
            if power.is_zero() {
                break;
            }
            factorial = factorial * S::from_u64(n).expect("factorial fits the scalar");
            acc = &acc + &power.scale(&(S::one() / factorial.clone()));
        }
        Ok(acc)
    }

    /// Truncated logarithm of an element with degree-0 part 1; inverse to
    /// `exp_nilpotent` on its domain.
    pub fn log_unit(&self) -> Result<Self, ElementError> {
        if !self.augmentation().is_one() {
            return Err(ElementError::AugmentationNotOne);
        }
        let nilpotent = self - &Self::constant(&self.ring, S::one());
        let mut acc = Self::zero(&self.ring);
        let mut power = Self::constant(&self.ring, S::one());
        let mut k: u64 = 0;
        loop {
            k += 1;
            power = &power * &nilpotent;
            if power.is_zero() {
                break;
            }
            let coeff = S::one() / S::from_u64(k).expect("index fits the scalar");
            let signed = if k % 2 == 1 { coeff } else { -coeff };
            acc = &acc + &power.scale(&signed);
        }
        Ok(acc)
    }

    /// Evaluate the element under the ring homomorphism sending generator i
    /// to `images[i]`. The caller is responsible for the images actually
    /// satisfying the source relations; see `SpaceMap` for a checked wrapper.
    pub fn substitute(&self, target: &Ring<S>, images: &[GradedElement<S>]) -> GradedElement<S> {
        assert_eq!(
            images.len(),
            self.ring.generator_count(),
            "one image per generator"
        );
        let mut acc = GradedElement::zero(target);
        for (mono, coeff) in &self.terms {
            let mut term = GradedElement::constant(target, coeff.clone());
            for (i, &e) in mono.iter().enumerate() {
                if e > 0 {
                    term = &term * &images[i].pow(e);
                }
            }
            acc = &acc + &term;
        }
        acc
    }
}

impl<S: Scalar> Add for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn add(self, rhs: &GradedElement<S>) -> GradedElement<S> {
        assert!(self.ring == rhs.ring, "elements of different rings");
        let mut terms = self.terms.clone();
        for (mono, coeff) in &rhs.terms {
            let entry = terms.entry(mono.clone()).or_insert_with(S::zero);
            *entry = entry.clone() + coeff.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        GradedElement {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl<S: Scalar> Sub for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn sub(self, rhs: &GradedElement<S>) -> GradedElement<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn neg(self) -> GradedElement<S> {
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn mul(self, rhs: &GradedElement<S>) -> GradedElement<S> {
        assert!(self.ring == rhs.ring, "elements of different rings");
        let mut raw: Vec<(Monomial, S)> = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                raw.push((mono, ca.clone() * cb.clone()));
            }
        }
        GradedElement::from_terms(&self.ring, raw)
    }
}

impl<S: Scalar> fmt::Display for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(g, e)| {
                    if *e == 1 {
                        self.ring.generator_name(g).to_string()
                    } else {
                        format!("{}^{}", self.ring.generator_name(g), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", magnitude)?;
            } else if magnitude.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", magnitude, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Relation, RingDescriptor, RingError};
    use super::*;
    use crate::{Rational, Ring as QRing};
    use num::{One, Zero};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// CP^n model: one degree-2 generator h, h^{n+1} = 0, truncation 2n.
    fn cp(n: u32) -> QRing {
        QRing::new(RingDescriptor {
            generators: vec![("h".to_string(), 2)],
            truncation: 2 * n,
            relations: vec![Relation {
                generator: 0,
                power: n + 1,
                tail: vec![],
            }],
        })
        .unwrap()
    }

    /// P(O + O(1)) over CP^1: generators y, h of degree 2 with y^2 = 0 and
    /// h^2 = -y h, truncation 4.
    fn twisted_bundle_ring() -> QRing {
        QRing::new(RingDescriptor {
            generators: vec![("y".to_string(), 2), ("h".to_string(), 2)],
            truncation: 4,
            relations: vec![
                Relation {
                    generator: 0,
                    power: 2,
                    tail: vec![],
                },
                Relation {
                    generator: 1,
                    power: 2,
                    tail: vec![(vec![1, 1], -Rational::one())],
                },
            ],
        })
        .unwrap()
    }

    #[test]
    fn make_space_rejects_odd_degree() {
        let err = QRing::<Rational>::new(RingDescriptor {
            generators: vec![("x".to_string(), 3)],
            truncation: 6,
            relations: vec![],
        })
        .unwrap_err();
        assert_eq!(
            err,
            RingError::OddGeneratorDegree {
                name: "x".to_string(),
                degree: 3
            }
        );
    }

    #[test]
    fn make_space_rejects_degree_mismatched_tail() {
        let err = QRing::new(RingDescriptor {
            generators: vec![("y".to_string(), 2), ("h".to_string(), 2)],
            truncation: 4,
            relations: vec![Relation {
                generator: 1,
                power: 2,
                tail: vec![(vec![1, 0], Rational::one())],
            }],
        })
        .unwrap_err();
        assert_eq!(
            err,
            RingError::DegreeMismatchedTail {
                name: "h".to_string(),
                expected: 4,
                got: 2
            }
        );
    }

    #[test]
    fn normal_form_examples() {
        let cp2 = cp(2);
        let h = cp2.generator(0);
        assert!(h.pow(4).is_zero(), "h^4 = 0 in CP^2");
        assert!(h.pow(3).is_zero(), "h^3 = 0 in CP^2");

        let ring = twisted_bundle_ring();
        let y = ring.generator(0);
        let h = ring.generator(1);
        assert_eq!(h.pow(2), -&(&y * &h), "h^2 reduces to -y*h");

        let e = &(&h.pow(2) + &y) + &ring.one();
        assert_eq!(e.normal_form(), e, "normal form is idempotent");
    }

    #[test]
    fn truncation_is_ring_semantics() {
        let cp1 = cp(1);
        let h = cp1.generator(0);
        // h^2 exceeds truncation 2 even before the relation applies
        assert!((&h * &h).is_zero());
    }

    #[test]
    fn invert_unit_examples() {
        let cp2 = cp(2);
        let h = cp2.generator(0);
        let u = &cp2.one() + &h;
        let inv = u.invert_unit().unwrap();
        let expected = &(&cp2.one() - &h) + &h.pow(2);
        assert_eq!(inv, expected, "1/(1+h) = 1 - h + h^2");
        assert_eq!(&u * &inv, cp2.one());

        let two = cp2.constant(rat(2, 1));
        assert_eq!(two.invert_unit().unwrap(), cp2.constant(rat(1, 2)));

        assert_eq!(h.invert_unit(), Err(ElementError::NonUnit));
    }

    #[test]
    fn exp_log_examples() {
        let cp2 = cp(2);
        let h = cp2.generator(0);
        let exp_h = h.exp_nilpotent().unwrap();
        let expected = &(&cp2.one() + &h) + &h.pow(2).scale(&rat(1, 2));
        assert_eq!(exp_h, expected, "exp(h) = 1 + h + h^2/2");

        assert_eq!(cp2.zero().exp_nilpotent().unwrap(), cp2.one());

        let log_1h = (&cp2.one() + &h).log_unit().unwrap();
        assert_eq!(log_1h, &h - &h.pow(2).scale(&rat(1, 2)));

        assert_eq!(exp_h.log_unit().unwrap(), h, "log(exp(h)) = h");
        assert_eq!(
            log_1h.exp_nilpotent().unwrap(),
            &cp2.one() + &h,
            "exp(log(1+h)) = 1+h"
        );

        assert_eq!(h.log_unit(), Err(ElementError::AugmentationNotOne));
        assert_eq!(
            (&cp2.one() + &h).exp_nilpotent(),
            Err(ElementError::NonzeroAugmentation)
        );
    }

    #[test]
    fn component_and_filtration() {
        let cp2 = cp(2);
        let h = cp2.generator(0);
        let e = &(&cp2.one() + &h) + &h.pow(2);
        assert_eq!(e.component(1), h);
        assert_eq!(e.filtration_cut(4), h.pow(2));
        assert_eq!(cp2.zero().component(3), cp2.zero());
        // components reassemble the element
        let reassembled = (0..=2).fold(cp2.zero(), |acc, j| &acc + &e.component(j));
        assert_eq!(reassembled, e);
    }

    #[test]
    fn display_canonical() {
        let ring = twisted_bundle_ring();
        let y = ring.generator(0);
        let h = ring.generator(1);
        let e = &(&h * &y).scale(&rat(5, 3)) - &ring.one();
        assert_eq!(e.to_string(), "-1 + 5/3*y*h");
        assert_eq!(ring.zero().to_string(), "0");
        assert_eq!((-&h).to_string(), "-h");
    }

    #[test]
    fn substitution_is_a_hom() {
        // CP^2 -> CP^1 restriction, h -> h
        let cp2 = cp(2);
        let cp1 = cp(1);
        let images = vec![cp1.generator(0)];
        let a = &cp2.one() + &cp2.generator(0);
        let b = &cp2.generator(0) + &cp2.generator(0).pow(2);
        let phi = |e: &GradedElement<Rational>| e.substitute(&cp1, &images);
        assert_eq!(phi(&(&a * &b)), &phi(&a) * &phi(&b));
        assert_eq!(phi(&(&a + &b)), &phi(&a) + &phi(&b));
    }

    /// Deterministic pseudo-random elements for the ring-law checks.
    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_element(ring: &QRing, state: &mut u64) -> GradedElement<Rational> {
        let mut terms = Vec::new();
        let gens = ring.generator_count();
        for _ in 0..4 {
            let mono: Monomial = (0..gens).map(|_| (splitmix(state) % 3) as u32).collect();
            let num = (splitmix(state) % 11) as i64 - 5;
            let den = (splitmix(state) % 4) as i64 + 1;
            terms.push((mono, rat(num, den)));
        }
        ring.from_terms(terms)
    }

    #[test]
    fn ring_laws_on_random_triples() {
        let rings = [cp(2), cp(3), twisted_bundle_ring()];
        let mut state = 0xadab5u64;
        for ring in &rings {
            for _ in 0..1000 {
                let a = random_element(ring, &mut state);
                let b = random_element(ring, &mut state);
                let c = random_element(ring, &mut state);
                assert_eq!(&a * &b, &b * &a);
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            }
        }
    }

    #[test]
    fn random_units_invert() {
        let ring = twisted_bundle_ring();
        let mut state = 0x5eedu64;
        for _ in 0..200 {
            let mut e = random_element(&ring, &mut state);
            if e.augmentation().is_zero() {
                e = &e + &ring.one();
            }
            let inv = e.invert_unit().unwrap();
            assert_eq!(&e * &inv, ring.one());
        }
    }

    #[test]
    fn exp_log_inverse_on_random_inputs() {
        let ring = cp(3);
        let mut state = 0x10adu64;
        for _ in 0..200 {
            let e = random_element(&ring, &mut state);
            let n = &e - &ring.constant(e.augmentation());
            assert_eq!(n.exp_nilpotent().unwrap().log_unit().unwrap(), n);
            let u = &ring.one() + &n;
            assert_eq!(u.log_unit().unwrap().exp_nilpotent().unwrap(), u);
        }
    }

    #[test]
    fn grading_of_products() {
        let ring = twisted_bundle_ring();
        let mut state = 0x6eadu64;
        for _ in 0..200 {
            let a = random_element(&ring, &mut state);
            let b = random_element(&ring, &mut state);
            let prod = &a * &b;
            for j in 0..=3u32 {
                let mut conv = ring.zero();
                for i in 0..=j {
                    conv = &conv + &(&a.component(i) * &b.component(j - i));
                }
                assert_eq!(prod.component(j), conv);
            }
        }
    }

    #[test]
    fn zero_coefficients_never_stored() {
        let cp2 = cp(2);
        let h = cp2.generator(0);
        let e = &h - &h;
        assert!(e.is_zero());
        assert_eq!(e.term_count(), 0);
        let f = cp2.from_terms(vec![
            (vec![1], rat(1, 2)),
            (vec![1], rat(-1, 2)),
            (vec![0], Rational::zero()),
        ]);
        assert!(f.is_zero());
    }
}
