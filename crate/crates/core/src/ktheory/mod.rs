//! The lambda-ring layer: K-classes on split model spaces, Adams operations,
//! Chern character, the Todd-form genus, and the cannibalistic class.
//!
//! A model space is a truncated cohomology ring generated in degree 2, with
//! one named line bundle per generator (the splitting principle presentation).
//! K-classes are polynomials in the nilpotent coordinates u_L = [L] - 1, with
//! Bott powers tracked as an even integer degree rather than a ring generator.

mod hp;
mod kclass;

pub use hp::HPClass;
pub use kclass::{acgenus, adams_preimage, rho, KClass};

use crate::graded::{ElementError, RingError};
use crate::{Element, Rational, Ring, RingDescriptor};
use num::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum KError {
    #[error("space generators must have degree 2; `{name}` has degree {degree}")]
    NonLineGenerator { name: String, degree: u32 },
    #[error("Adams operations are not defined at k = 0; use the rank map instead")]
    ZeroAdamsK,
    #[error("unknown line bundle `{0}`")]
    UnknownLine(String),
    #[error("line expression has {got} exponents, space has {expected} lines")]
    LineWidth { expected: usize, got: usize },
    #[error("bundle rank {rank} is smaller than its root count {roots}")]
    RankTooSmall { rank: usize, roots: usize },
    #[error("adams_preimage needs k >= 2, got {0}")]
    BadPreimageK(i64),
    #[error("adams_preimage target must have degree-0 part 1")]
    AugmentationNotOne,
    #[error("map does not respect the relation on generator `{0}`")]
    RelationNotRespected(String),
    #[error("map needs one line image per source line: expected {expected}, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Element(#[from] ElementError),
}

#[derive(Debug)]
struct SpaceInner {
    name: String,
    cohomology: Ring,
    uring: Ring,
    /// exp(x_i) - 1 for each generator, the Chern character of u_i
    ch_images: Vec<Element>,
}

/// A split model space: degree-2 generated truncated cohomology with one
/// named line bundle per generator. Immutable and cheap to clone.
#[derive(Clone, Debug)]
pub struct Space(Arc<SpaceInner>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name && self.0.cohomology == other.0.cohomology)
    }
}

impl Space {
    /// Wrap a validated cohomology ring as a model space. Every generator
    /// must have degree 2; generator names double as line bundle names.
    pub fn new(name: impl Into<String>, cohomology: Ring) -> Result<Self, KError> {
        for (gname, degree) in cohomology.generators() {
            if *degree != 2 {
                return Err(KError::NonLineGenerator {
                    name: gname.clone(),
                    degree: *degree,
                });
            }
        }
        let udesc = RingDescriptor {
            generators: cohomology
                .generators()
                .iter()
                .map(|(n, _)| (format!("u_{}", n), 2))
                .collect(),
            truncation: cohomology.truncation(),
            relations: vec![],
        };
        let uring = Ring::new(udesc)?;
        let ch_images = (0..cohomology.generator_count())
            .map(|i| {
                let exp = cohomology
                    .generator(i)
                    .exp_nilpotent()
                    .expect("generators are nilpotent");
                &exp - &cohomology.one()
            })
            .collect();
        Ok(Space(Arc::new(SpaceInner {
            name: name.into(),
            cohomology,
            uring,
            ch_images,
        })))
    }

    /// The one-point space: no generators, truncation 0.
    pub fn point() -> Self {
        let ring = Ring::new(RingDescriptor {
            generators: vec![],
            truncation: 0,
            relations: vec![],
        })
        .unwrap();
        Space::new("pt", ring).unwrap()
    }

    /// CP^n with its standard presentation h^{n+1} = 0, truncation 2n.
    pub fn projective(name: impl Into<String>, generator: impl Into<String>, n: u32) -> Self {
        let ring = Ring::new(RingDescriptor {
            generators: vec![(generator.into(), 2)],
            truncation: 2 * n,
            relations: vec![crate::Relation {
                generator: 0,
                power: n + 1,
                tail: vec![],
            }],
        })
        .unwrap();
        Space::new(name, ring).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn cohomology(&self) -> &Ring {
        &self.0.cohomology
    }

    pub fn uring(&self) -> &Ring {
        &self.0.uring
    }

    pub fn line_count(&self) -> usize {
        self.0.cohomology.generator_count()
    }

    pub fn line_name(&self, i: usize) -> &str {
        self.0.cohomology.generator_name(i)
    }

    pub fn line_index(&self, name: &str) -> Result<usize, KError> {
        self.0
            .cohomology
            .generator_index(name)
            .ok_or_else(|| KError::UnknownLine(name.to_string()))
    }

    /// The Chern root of the i-th named line bundle.
    pub fn root(&self, i: usize) -> Element {
        self.0.cohomology.generator(i)
    }

    pub(crate) fn ch_images(&self) -> &[Element] {
        &self.0.ch_images
    }
}

/// A formal product of named line bundles, prod L_i^{c_i}, with integer
/// exponents. Its Chern root is sum c_i x_i; inverses are allowed, which is
/// how negation-symmetric root multisets arise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineExpr {
    exponents: Vec<i64>,
}

impl LineExpr {
    pub fn from_exponents(exponents: Vec<i64>) -> Self {
        LineExpr { exponents }
    }

    /// The trivial line bundle on `space`.
    pub fn trivial(space: &Space) -> Self {
        LineExpr {
            exponents: vec![0; space.line_count()],
        }
    }

    pub fn named(space: &Space, name: &str) -> Result<Self, KError> {
        let i = space.line_index(name)?;
        let mut exponents = vec![0; space.line_count()];
        exponents[i] = 1;
        Ok(LineExpr { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }

    pub fn inverse(&self) -> Self {
        LineExpr {
            exponents: self.exponents.iter().map(|e| -e).collect(),
        }
    }

    pub fn product(&self, rhs: &Self) -> Self {
        assert_eq!(self.exponents.len(), rhs.exponents.len());
        LineExpr {
            exponents: self
                .exponents
                .iter()
                .zip(rhs.exponents.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn check_width(&self, space: &Space) -> Result<(), KError> {
        if self.exponents.len() != space.line_count() {
            return Err(KError::LineWidth {
                expected: space.line_count(),
                got: self.exponents.len(),
            });
        }
        Ok(())
    }

    /// Chern root sum c_i x_i as a cohomology element.
    pub fn root(&self, space: &Space) -> Element {
        self.check_width(space).expect("line expression width");
        let mut acc = space.cohomology().zero();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e != 0 {
                acc = &acc + &space.root(i).scale(&Rational::from(crate::Int::from(e)));
            }
        }
        acc
    }

    /// The class [prod L_i^{c_i}] as a u-polynomial, prod (1 + u_i)^{c_i}.
    pub(crate) fn upoly(&self, space: &Space) -> Element {
        self.check_width(space).expect("line expression width");
        let mut acc = space.uring().one();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let line = &space.uring().one() + &space.uring().generator(i);
            let factor = if e > 0 {
                line.pow(e as u32)
            } else {
                line.invert_unit().unwrap().pow((-e) as u32)
            };
            acc = &acc * &factor;
        }
        acc
    }

    /// Re-express over another space by substituting each line for its image.
    pub fn map(&self, images: &[LineExpr]) -> LineExpr {
        assert_eq!(self.exponents.len(), images.len());
        let width = images
            .first()
            .map(|l| l.exponents.len())
            .unwrap_or_default();
        let mut out = vec![0i64; width];
        for (e, img) in self.exponents.iter().zip(images.iter()) {
            for (slot, ie) in out.iter_mut().zip(img.exponents.iter()) {
                *slot += e * ie;
            }
        }
        LineExpr { exponents: out }
    }
}

/// A bundle presented by Chern roots via the splitting principle. The formal
/// rank may exceed the root count; the difference counts trivial summands.
#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    space: Space,
    roots: Vec<LineExpr>,
    rank: usize,
}

impl Bundle {
    pub fn new(space: &Space, roots: Vec<LineExpr>, rank: usize) -> Result<Self, KError> {
        if rank < roots.len() {
            return Err(KError::RankTooSmall {
                rank,
                roots: roots.len(),
            });
        }
        for r in &roots {
            r.check_width(space)?;
        }
        Ok(Bundle {
            space: space.clone(),
            roots,
            rank,
        })
    }

    pub fn from_roots(space: &Space, roots: Vec<LineExpr>) -> Self {
        let rank = roots.len();
        Bundle::new(space, roots, rank).unwrap()
    }

    /// The trivial bundle of the given rank.
    pub fn trivial(space: &Space, rank: usize) -> Self {
        Bundle {
            space: space.clone(),
            roots: vec![],
            rank,
        }
    }

    pub fn direct_sum(&self, other: &Bundle) -> Bundle {
        assert!(self.space == other.space, "bundles on different spaces");
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        Bundle {
            space: self.space.clone(),
            roots,
            rank: self.rank + other.rank,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn roots(&self) -> &[LineExpr] {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root_elements(&self) -> Vec<Element> {
        self.roots.iter().map(|r| r.root(&self.space)).collect()
    }

    /// Whether the root multiset is closed under negation (the rational
    /// shadow of a Spin structure).
    pub fn is_negation_symmetric(&self) -> bool {
        let mut pool: Vec<&LineExpr> = self.roots.iter().collect();
        while let Some(r) = pool.pop() {
            if r.is_trivial() {
                continue;
            }
            let inv = r.inverse();
            match pool.iter().position(|s| **s == inv) {
                Some(i) => {
                    pool.swap_remove(i);
                }
                None => return false,
            }
        }
        true
    }
}

/// A checked multiplicative map between model spaces: each source line goes
/// to a line expression on the target, and the induced ring map must kill
/// every source relation. Pullbacks along maps of spaces are instances.
#[derive(Clone, Debug)]
pub struct SpaceMap {
    source: Space,
    target: Space,
    line_images: Vec<LineExpr>,
    root_images: Vec<Element>,
}

impl SpaceMap {
    pub fn new(source: &Space, target: &Space, line_images: Vec<LineExpr>) -> Result<Self, KError> {
        if line_images.len() != source.line_count() {
            return Err(KError::ImageCountMismatch {
                expected: source.line_count(),
                got: line_images.len(),
            });
        }
        for img in &line_images {
            img.check_width(target)?;
        }
        let root_images: Vec<Element> = line_images.iter().map(|l| l.root(target)).collect();
        // the map must send every relation g^p - tail to zero
        let ring = source.cohomology();
        for i in 0..ring.generator_count() {
            if let Some((power, tail)) = ring.relation(i) {
                let lhs = root_images[i].pow(*power);
                let rhs = ring
                    .from_terms(tail.clone())
                    .substitute(target.cohomology(), &root_images);
                if lhs != rhs {
                    return Err(KError::RelationNotRespected(
                        ring.generator_name(i).to_string(),
                    ));
                }
            }
        }
        Ok(SpaceMap {
            source: source.clone(),
            target: target.clone(),
            line_images,
            root_images,
        })
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn map_element(&self, e: &Element) -> Element {
        assert!(e.ring() == self.source.cohomology());
        e.substitute(self.target.cohomology(), &self.root_images)
    }

    pub fn map_line(&self, l: &LineExpr) -> LineExpr {
        l.map(&self.line_images)
    }

    pub fn map_bundle(&self, b: &Bundle) -> Bundle {
        assert!(b.space() == &self.source);
        Bundle {
            space: self.target.clone(),
            roots: b.roots.iter().map(|r| self.map_line(r)).collect(),
            rank: b.rank,
        }
    }

    pub fn map_hp(&self, hp: &HPClass) -> HPClass {
        assert!(hp.space() == &self.source);
        HPClass::from_element(&self.target, hp.degree(), &self.map_element(&hp.to_element()))
    }

    pub fn map_kclass(&self, x: &KClass) -> KClass {
        assert!(x.space() == &self.source);
        let images: Vec<Element> = self
            .line_images
            .iter()
            .map(|l| &l.upoly(&self.target) - &self.target.uring().one())
            .collect();
        let upoly = x.upoly().substitute(self.target.uring(), &images);
        KClass::new(&self.target, upoly, x.degree())
    }
}

/// True when every coefficient denominator of the stored u-polynomial has all
/// its prime factors dividing k; for k = +-1 the coefficients must be
/// integers. This certifies membership in Z[1/k] coefficients.
pub fn zk_membership(x: &KClass, k: i64) -> bool {
    let k_abs = Int::from(k.unsigned_abs());
    x.upoly().terms().all(|(_, c)| {
        if c.denom().is_one() {
            return true;
        }
        if k.unsigned_abs() < 2 {
            return false;
        }
        crate::exact::factor(c.denom())
            .iter()
            .all(|(p, _)| (&k_abs % p).is_zero())
    })
}

use crate::Int;
