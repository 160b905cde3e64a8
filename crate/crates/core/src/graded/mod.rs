//! Truncated graded-commutative polynomial algebras with monic relations.
//!
//! These rings model the even-degree cohomology of the model spaces (projective
//! spaces, projective bundles, products) and, with a different reading of the
//! generators, the nilpotent coordinate rings of split K-theory. Only
//! even-degree generators are supported, so the ring is honestly commutative.
//!
//! Relations are monic in a designated generator, `g^e = tail`, where the tail
//! has lower `g`-exponent and involves no generator of larger index. That
//! triangular shape gives a terminating, confluent rewriting system by
//! iterated division; Groebner machinery is out of scope. Truncation is ring
//! semantics: products silently drop terms of total degree above the cut.
//!
//! The arithmetic is generic over the coefficient scalar via `num-traits`
//! bounds; the crate root fixes the exact-rational instantiation used by the
//! rest of the workspace.

mod element;

pub use element::GradedElement;

use num::{FromPrimitive, Signed};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Coefficient scalar for graded rings: a field of characteristic zero in
/// practice. The blanket impl covers `BigRational` (the workspace default)
/// and any other `num` scalar with the same surface.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Signed + FromPrimitive {}

impl<T> Scalar for T where T: Clone + fmt::Debug + fmt::Display + PartialEq + Signed + FromPrimitive {}

/// Exponent vector, one entry per ring generator; ordered lexicographically
/// by generator index, which fixes the serialization order of terms.
pub type Monomial = Vec<u32>;

/// A monic relation `generators[generator]^power = tail`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<S> {
    pub generator: usize,
    pub power: u32,
    pub tail: Vec<(Monomial, S)>,
}

/// Free presentation of a ring: even-degree generators, an even truncation
/// degree, and at most one monic relation per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct RingDescriptor<S> {
    pub generators: Vec<(String, u32)>,
    pub truncation: u32,
    pub relations: Vec<Relation<S>>,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RingError {
    #[error("generator `{name}` has odd degree {degree}; only even degrees are supported")]
    OddGeneratorDegree { name: String, degree: u32 },
    #[error("generator `{name}` has degree 0; generators must have positive degree")]
    ZeroGeneratorDegree { name: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("truncation degree {0} is odd")]
    OddTruncation(u32),
    #[error("relation references generator index {0}, but the ring has {1} generators")]
    UnknownGenerator(usize, usize),
    #[error("relation on `{0}` is not monic: power must be at least 1")]
    NonMonicRelation(String),
    #[error("more than one relation on generator `{0}`")]
    DuplicateRelation(String),
    #[error("relation tail on `{name}` has degree {got}, expected {expected}")]
    DegreeMismatchedTail { name: String, expected: u32, got: u32 },
    #[error("relation tail on `{0}` must have lower exponent in that generator")]
    TailNotLower(String),
    #[error("relation tail on `{0}` may only involve generators of index at most its own")]
    TailNotTriangular(String),
    #[error("monomial has {got} exponents, ring has {expected} generators")]
    MonomialWidth { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ElementError {
    #[error("element is not a unit: its degree-0 part is zero")]
    NonUnit,
    #[error("exp requires a zero degree-0 part")]
    NonzeroAugmentation,
    #[error("log requires degree-0 part equal to 1")]
    AugmentationNotOne,
}

#[derive(Debug, PartialEq)]
struct RingInner<S> {
    generators: Vec<(String, u32)>,
    truncation: u32,
    // indexed by generator; None when the generator is free
    relations: Vec<Option<(u32, Vec<(Monomial, S)>)>>,
}

/// A handle to a validated truncated graded ring. Cheap to clone and share;
/// all elements keep a handle to their ring.
#[derive(Clone, Debug)]
pub struct Ring<S>(Arc<RingInner<S>>);

impl<S: Scalar> PartialEq for Ring<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl<S: Scalar> Ring<S> {
    /// Validate a descriptor and build the ring. This is the `make_space`
    /// entry point for cohomology models.
    pub fn new(descriptor: RingDescriptor<S>) -> Result<Self, RingError> {
        let RingDescriptor {
            generators,
            truncation,
            relations,
        } = descriptor;
        if truncation % 2 != 0 {
            return Err(RingError::OddTruncation(truncation));
        }
        for (i, (name, degree)) in generators.iter().enumerate() {
            if *degree == 0 {
                return Err(RingError::ZeroGeneratorDegree { name: name.clone() });
            }
            if *degree % 2 != 0 {
                return Err(RingError::OddGeneratorDegree {
                    name: name.clone(),
                    degree: *degree,
                });
            }
            if generators[..i].iter().any(|(n, _)| n == name) {
                return Err(RingError::DuplicateGenerator(name.clone()));
            }
        }
        let n = generators.len();
        let mut slots: Vec<Option<(u32, Vec<(Monomial, S)>)>> = vec![None; n];
        for rel in relations {
            let Relation {
                generator,
                power,
                tail,
            } = rel;
            if generator >= n {
                return Err(RingError::UnknownGenerator(generator, n));
            }
            let name = generators[generator].0.clone();
            if power == 0 {
                return Err(RingError::NonMonicRelation(name));
            }
            if slots[generator].is_some() {
                return Err(RingError::DuplicateRelation(name));
            }
            let expected = power * generators[generator].1;
            let mut clean = Vec::new();
            for (mono, coeff) in tail {
                if mono.len() != n {
                    return Err(RingError::MonomialWidth {
                        expected: n,
                        got: mono.len(),
                    });
                }
                if coeff.is_zero() {
                    continue;
                }
                let got: u32 = mono
                    .iter()
                    .zip(generators.iter())
                    .map(|(e, (_, d))| e * d)
                    .sum();
                if got != expected {
                    return Err(RingError::DegreeMismatchedTail {
                        name,
                        expected,
                        got,
                    });
                }
                if mono[generator] >= power {
                    return Err(RingError::TailNotLower(name));
                }
                if mono.iter().enumerate().any(|(j, e)| j > generator && *e > 0) {
                    return Err(RingError::TailNotTriangular(name));
                }
                clean.push((mono, coeff));
            }
            slots[generator] = Some((power, clean));
        }
        Ok(Ring(Arc::new(RingInner {
            generators,
            truncation,
            relations: slots,
        })))
    }

    pub fn generator_count(&self) -> usize {
        self.0.generators.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.0.generators[i].0
    }

    pub fn generator_degree(&self, i: usize) -> u32 {
        self.0.generators[i].1
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.0.generators.iter().position(|(n, _)| n == name)
    }

    pub fn truncation(&self) -> u32 {
        self.0.truncation
    }

    pub fn generators(&self) -> &[(String, u32)] {
        &self.0.generators
    }

    pub(crate) fn relation(&self, i: usize) -> Option<&(u32, Vec<(Monomial, S)>)> {
        self.0.relations[i].as_ref()
    }

    pub fn monomial_degree(&self, mono: &Monomial) -> u32 {
        mono.iter()
            .zip(self.0.generators.iter())
            .map(|(e, (_, d))| e * d)
            .sum()
    }

    pub fn zero(&self) -> GradedElement<S> {
        GradedElement::zero(self)
    }

    pub fn one(&self) -> GradedElement<S> {
        GradedElement::constant(self, S::one())
    }

    pub fn constant(&self, c: S) -> GradedElement<S> {
        GradedElement::constant(self, c)
    }

    pub fn generator(&self, i: usize) -> GradedElement<S> {
        let mut mono = vec![0u32; self.generator_count()];
        mono[i] = 1;
        GradedElement::from_terms(self, vec![(mono, S::one())])
    }

    /// Build an element from a free-presentation term list, reducing to
    /// normal form (this is `normal_form` on the free presentation).
    pub fn from_terms(&self, terms: Vec<(Monomial, S)>) -> GradedElement<S> {
        GradedElement::from_terms(self, terms)
    }
}
