//! Periodic-cohomology classes of even total degree.
//!
//! A class of degree d is a finite list of homogeneous components h_{2j},
//! denoting sum_j b^{(d-2j)/2} h_{2j}: the Bott symbol is bookkeeping carried
//! by the degree, never a ring generator. The scaling operation multiplies
//! component j by k^{j - d/2}, which is exactly b -> k^{-1} b.

use super::{KError, Space};
use crate::exact::int_pow;
use crate::{Element, Rational};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct HPClass {
    space: Space,
    degree: i64,
    components: BTreeMap<u32, Element>,
}

impl HPClass {
    /// Split an inhomogeneous cohomology element into components.
    pub fn from_element(space: &Space, degree: i64, element: &Element) -> Self {
        assert!(degree % 2 == 0, "HP degrees are even");
        assert!(element.ring() == space.cohomology());
        let mut components = BTreeMap::new();
        for j in 0..=(space.cohomology().truncation() / 2) {
            let part = element.component(j);
            if !part.is_zero() {
                components.insert(j, part);
            }
        }
        HPClass {
            space: space.clone(),
            degree,
            components,
        }
    }

    pub fn zero(space: &Space, degree: i64) -> Self {
        HPClass {
            space: space.clone(),
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Space, degree: i64, c: Rational) -> Self {
        HPClass::from_element(space, degree, &space.cohomology().constant(c))
    }

    pub fn one(space: &Space) -> Self {
        HPClass::constant(space, 0, Rational::from(crate::Int::from(1)))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The homogeneous degree-2j component (zero if absent).
    pub fn component(&self, j: u32) -> Element {
        self.components
            .get(&j)
            .cloned()
            .unwrap_or_else(|| self.space.cohomology().zero())
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &Element)> {
        self.components.iter().map(|(j, e)| (*j, e))
    }

    /// The components reassembled into one inhomogeneous element.
    pub fn to_element(&self) -> Element {
        let mut acc = self.space.cohomology().zero();
        for e in self.components.values() {
            acc = &acc + e;
        }
        acc
    }

    pub fn add(&self, rhs: &HPClass) -> HPClass {
        assert!(self.space == rhs.space, "classes on different spaces");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in HP sum");
        HPClass::from_element(
            &self.space,
            self.degree,
            &(&self.to_element() + &rhs.to_element()),
        )
    }

    pub fn sub(&self, rhs: &HPClass) -> HPClass {
        self.add(&rhs.scale(&Rational::from(crate::Int::from(-1))))
    }

    /// Product; degrees add, components convolve through the ring product.
    pub fn mul(&self, rhs: &HPClass) -> HPClass {
        assert!(self.space == rhs.space, "classes on different spaces");
        HPClass::from_element(
            &self.space,
            self.degree + rhs.degree,
            &(&self.to_element() * &rhs.to_element()),
        )
    }

    pub fn scale(&self, c: &Rational) -> HPClass {
        let mut components = BTreeMap::new();
        if !c.is_zero() {
            for (j, e) in &self.components {
                components.insert(*j, e.scale(c));
            }
        }
        HPClass {
            space: self.space.clone(),
            degree: self.degree,
            components,
        }
    }

    /// The scaling operation on periodic cohomology: component j times
    /// k^{j - d/2}. Multiplicative, and the identity at k = 1.
    pub fn adams_h(&self, k: i64) -> Result<HPClass, KError> {
        if k == 0 {
            return Err(KError::ZeroAdamsK);
        }
        let mut components = BTreeMap::new();
        for (j, e) in &self.components {
            let factor = int_pow(k, *j as i64 - self.degree / 2);
            components.insert(*j, e.scale(&factor));
        }
        Ok(HPClass {
            space: self.space.clone(),
            degree: self.degree,
            components,
        })
    }

    /// Bott shift: degree moves by 2g, components stay.
    pub fn bott(&self, g: i64) -> HPClass {
        HPClass {
            space: self.space.clone(),
            degree: self.degree + 2 * g,
            components: self.components.clone(),
        }
    }

    /// Zero all components with 2j below `l` (the even filtration cut).
    pub fn filtration_cut(&self, l: u32) -> HPClass {
        HPClass {
            space: self.space.clone(),
            degree: self.degree,
            components: self
                .components
                .iter()
                .filter(|(j, _)| 2 * **j >= l)
                .map(|(j, e)| (*j, e.clone()))
                .collect(),
        }
    }

    /// Full wire form: degree plus the ordered component list.
    pub fn canonical_string(&self) -> String {
        if self.components.is_empty() {
            return format!("deg={}; 0", self.degree);
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(j, e)| format!("[{}] {}", j, e))
            .collect();
        format!("deg={}; {}", self.degree, parts.join("; "))
    }
}

impl fmt::Display for HPClass {
    /// Component sum with the Bott powers left implicit; the short form used
    /// in reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}
