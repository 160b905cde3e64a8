//! K-theory classes on split model spaces and the operations on them.

use super::{Bundle, HPClass, KError, Space};
use crate::exact::int_pow;
use crate::{Element, Int, Rational};
use num::{One, Zero};
use std::fmt;

/// A K-theory class: a polynomial in the nilpotent coordinates u_L = [L] - 1
/// with exact rational coefficients, an even Bott degree, and the Chern
/// character image computed once at construction.
///
/// The rational model is faithful through `ch`: two classes are equal when
/// their degrees and Chern characters agree, whatever representative
/// polynomial they carry.
#[derive(Clone, Debug)]
pub struct KClass {
    space: Space,
    upoly: Element,
    degree: i64,
    ch: HPClass,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.degree == other.degree && self.ch == other.ch
    }
}

impl KClass {
    /// Build a class from a u-polynomial; the Chern character is evaluated
    /// here, by substituting u_i -> exp(x_i) - 1.
    pub fn new(space: &Space, upoly: Element, degree: i64) -> Self {
        assert!(degree % 2 == 0, "K degrees are even");
        assert!(upoly.ring() == space.uring(), "u-polynomial ring mismatch");
        let image = upoly.substitute(space.cohomology(), space.ch_images());
        let ch = HPClass::from_element(space, degree, &image);
        KClass {
            space: space.clone(),
            upoly,
            degree,
            ch,
        }
    }

    pub fn constant(space: &Space, c: Rational, degree: i64) -> Self {
        KClass::new(space, space.uring().constant(c), degree)
    }

    pub fn one(space: &Space) -> Self {
        KClass::constant(space, Rational::one(), 0)
    }

    pub fn zero(space: &Space, degree: i64) -> Self {
        KClass::new(space, space.uring().zero(), degree)
    }

    /// The class [L] of a line expression, in degree 0.
    pub fn line(space: &Space, l: &super::LineExpr) -> Self {
        KClass::new(space, l.upoly(space), 0)
    }

    /// The nilpotent coordinate u_L = [L] - 1.
    pub fn u(space: &Space, l: &super::LineExpr) -> Self {
        let upoly = &l.upoly(space) - &space.uring().one();
        KClass::new(space, upoly, 0)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn upoly(&self) -> &Element {
        &self.upoly
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// The cached Chern character image.
    pub fn ch(&self) -> &HPClass {
        &self.ch
    }

    /// The rank map (the only sensible stand-in for an Adams operation at
    /// k = 0): the degree-0 coefficient of the u-polynomial.
    pub fn augmentation(&self) -> Rational {
        self.upoly.augmentation()
    }

    pub fn add(&self, rhs: &KClass) -> KClass {
        assert!(self.space == rhs.space, "classes on different spaces");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in K sum");
        KClass::new(&self.space, &self.upoly + &rhs.upoly, self.degree)
    }

    pub fn sub(&self, rhs: &KClass) -> KClass {
        assert!(self.space == rhs.space, "classes on different spaces");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in K difference");
        KClass::new(&self.space, &self.upoly - &rhs.upoly, self.degree)
    }

    pub fn mul(&self, rhs: &KClass) -> KClass {
        assert!(self.space == rhs.space, "classes on different spaces");
        KClass::new(
            &self.space,
            &self.upoly * &rhs.upoly,
            self.degree + rhs.degree,
        )
    }

    pub fn scale(&self, c: &Rational) -> KClass {
        KClass::new(&self.space, self.upoly.scale(c), self.degree)
    }

    pub fn pow(&self, e: u32) -> KClass {
        KClass::new(&self.space, self.upoly.pow(e), self.degree * e as i64)
    }

    /// Bott shift: multiply by b^g; only the degree bookkeeping moves.
    pub fn bott(&self, g: i64) -> KClass {
        KClass {
            space: self.space.clone(),
            upoly: self.upoly.clone(),
            degree: self.degree + 2 * g,
            ch: self.ch.bott(g),
        }
    }

    /// Inverse of a unit; the degree negates along with the Bott power.
    pub fn invert_unit(&self) -> Result<KClass, KError> {
        let inv = self.upoly.invert_unit()?;
        Ok(KClass::new(&self.space, inv, -self.degree))
    }

    /// The Adams operation: u -> (1 + u)^k - 1 on each line coordinate
    /// (negative k through unit inversion), then the overall k^{-d/2} that
    /// makes the operation commute with Bott shifts. k = 0 is rejected.
    pub fn adams(&self, k: i64) -> Result<KClass, KError> {
        if k == 0 {
            return Err(KError::ZeroAdamsK);
        }
        let uring = self.space.uring();
        let images: Vec<Element> = (0..self.space.line_count())
            .map(|i| {
                let line = &uring.one() + &uring.generator(i);
                let powered = if k > 0 {
                    line.pow(k as u32)
                } else {
                    line.invert_unit().unwrap().pow((-k) as u32)
                };
                &powered - &uring.one()
            })
            .collect();
        let substituted = self.upoly.substitute(uring, &images);
        let scaled = substituted.scale(&int_pow(k, -self.degree / 2));
        Ok(KClass::new(&self.space, scaled, self.degree))
    }

    /// Solve ch(z) = target exactly, bottom-up through the degree filtration.
    /// Well-defined on split model spaces, where the Chern character of a
    /// monomial u^a is x^a plus strictly higher terms.
    pub fn from_ch(space: &Space, target: &HPClass) -> KClass {
        let goal = target.to_element();
        let uring = space.uring();
        let mut upoly = uring.zero();
        loop {
            let image = upoly.substitute(space.cohomology(), space.ch_images());
            let diff = &goal - &image;
            let Some(low) = diff.lowest_degree() else {
                return KClass::new(space, upoly, target.degree());
            };
            let lift: Vec<_> = diff
                .component(low / 2)
                .terms()
                .map(|(mono, c)| (mono.clone(), c.clone()))
                .collect();
            upoly = &upoly + &uring.from_terms(lift);
        }
    }

    /// Full wire form: the canonical u-polynomial string plus the degree.
    pub fn canonical_string(&self) -> String {
        format!("deg={}; {}", self.degree, self.upoly)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.upoly)
    }
}

/// The multiplicative genus prod_roots x / (1 - e^{-x}) of a bundle, in
/// degree 0; trivial summands contribute the empty factor.
pub fn acgenus(bundle: &Bundle) -> HPClass {
    let space = bundle.space();
    let ring = space.cohomology();
    let mut acc = ring.one();
    for root in bundle.root_elements() {
        acc = &acc * &todd_factor(&root);
    }
    HPClass::from_element(space, 0, &acc)
}

/// x/(1 - e^{-x}) for one nilpotent root: invert the unit series
/// (1 - e^{-x})/x = sum_m (-x)^m/(m+1)!.
fn todd_factor(root: &Element) -> Element {
    let ring = root.ring().clone();
    let mut series = ring.zero();
    let mut power = ring.one();
    let mut factorial = Rational::one();
    let mut m: u64 = 0;
    loop {
        factorial *= Rational::from(Int::from(m + 1));
        series = &series + &power.scale(&(Rational::one() / factorial.clone()));
        m += 1;
        power = &power * &(-root);
        if power.is_zero() {
            break;
        }
    }
    series.invert_unit().expect("the series has degree-0 part 1")
}

/// The cannibalistic class: per line factor k L^{k-1} (1 + L + ... +
/// L^{k-1})^{-1}, extended multiplicatively over roots; trivial summands
/// contribute 1. Its Chern character is the ratio of the scaled genus to the
/// genus, which is the defining property here.
pub fn rho(k: i64, bundle: &Bundle) -> Result<KClass, KError> {
    if k == 0 {
        return Err(KError::ZeroAdamsK);
    }
    let space = bundle.space();
    let uring = space.uring();
    let mut acc = uring.one();
    for root in bundle.roots() {
        let line = root.upoly(space);
        acc = &acc * &rho_line_factor(k, &line)?;
    }
    Ok(KClass::new(space, acc, 0))
}

/// rho^k of a single line class. For j = -k > 0 the closed form is
/// j L^{-1} theta_j(L)^{-1}, with theta_j(L) = 1 + L + ... + L^{j-1}; in
/// particular rho^{-1}(L) = L^{-1} and rho^1 = 1.
fn rho_line_factor(k: i64, line: &Element) -> Result<Element, KError> {
    let ring = line.ring().clone();
    if k == 1 {
        return Ok(ring.one());
    }
    let j = k.unsigned_abs() as u32;
    let mut theta = ring.zero();
    let mut power = ring.one();
    for _ in 0..j {
        theta = &theta + &power;
        power = &power * line;
    }
    let theta_inv = theta.invert_unit()?;
    let scale = Rational::from(Int::from(j));
    let factor = if k > 0 {
        // k L^{k-1} theta_k(L)^{-1}
        &line.pow(j - 1).scale(&scale) * &theta_inv
    } else {
        // j L^{-1} theta_j(L)^{-1}
        &line.invert_unit()?.scale(&scale) * &theta_inv
    };
    Ok(factor)
}

/// Invert the Adams operation on units with degree-0 part 1 by successive
/// approximation through the degree filtration: while d = psi^k(z) - target
/// is nonzero with lowest component 2n, subtract the exact k-power-scaled
/// lift of that component. Finitely many steps by truncation.
pub fn adams_preimage(k: i64, target: &KClass) -> Result<KClass, KError> {
    if k < 2 {
        return Err(KError::BadPreimageK(k));
    }
    if !target.augmentation().is_one() {
        return Err(KError::AugmentationNotOne);
    }
    let space = target.space();
    let degree = target.degree();
    let goal = target.ch().to_element();
    let mut z = KClass::constant(space, Rational::one(), degree);
    let max_steps = space.cohomology().truncation() / 2 + 2;
    for _ in 0..=max_steps {
        let diff = &z.adams(k)?.ch().to_element() - &goal;
        let Some(low) = diff.lowest_degree() else {
            return Ok(z);
        };
        let n = low / 2;
        let slice = HPClass::from_element(space, degree, &diff.component(n));
        let lift = KClass::from_ch(space, &slice);
        z = z.sub(&lift.scale(&int_pow(k, degree / 2 - n as i64)));
    }
    unreachable!("the descent clears one filtration step per pass");
}

#[cfg(test)]
mod tests {
    use super::super::{zk_membership, LineExpr, SpaceMap};
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    fn cp(n: u32) -> Space {
        Space::projective(format!("cp{}", n), "h", n)
    }

    #[test]
    fn ch_of_line_on_cp2() {
        let space = cp(2);
        let l = LineExpr::named(&space, "h").unwrap();
        let class = KClass::line(&space, &l);
        let h = space.root(0);
        let ch = class.ch();
        assert_eq!(ch.component(0), space.cohomology().one());
        assert_eq!(ch.component(1), h);
        assert_eq!(ch.component(2), h.pow(2).scale(&rat(1, 2)));

        // linearity: [L] - 1 has components (0, h, h^2/2)
        let minus_one = class.sub(&KClass::one(&space));
        assert!(minus_one.ch().component(0).is_zero());
        assert_eq!(minus_one.ch().component(1), h);
    }

    #[test]
    fn ch_of_one_is_one() {
        let space = cp(2);
        assert_eq!(KClass::one(&space).ch(), &HPClass::one(&space));
    }

    #[test]
    fn adams_squares_a_line() {
        let space = cp(2);
        let l = LineExpr::named(&space, "h").unwrap();
        let class = KClass::line(&space, &l);
        let psi2 = class.adams(2).unwrap();
        // (1+u)^2 = 1 + 2u + u^2
        let u = space.uring().generator(0);
        let expected = KClass::new(
            &space,
            &(&space.uring().one() + &u.scale(&rat(2, 1))) + &u.pow(2),
            0,
        );
        assert_eq!(psi2, expected);
        // and it is the square line bundle
        assert_eq!(psi2, KClass::line(&space, &l.product(&l)));
    }

    #[test]
    fn adams_of_constant_and_zero_k() {
        let space = cp(2);
        let one = KClass::one(&space);
        for k in [-1, 2, 3, 7] {
            assert_eq!(one.adams(k).unwrap(), one);
        }
        assert_eq!(one.adams(0), Err(KError::ZeroAdamsK));
    }

    #[test]
    fn adams_composition_and_hom_laws() {
        let space = cp(3);
        let l = LineExpr::named(&space, "h").unwrap();
        let x = KClass::line(&space, &l).add(&KClass::u(&space, &l).scale(&rat(3, 5)));
        let y = KClass::u(&space, &l).sub(&KClass::constant(&space, rat(7, 2), 0));
        for (k, l2) in [(2i64, 3i64), (-1, 2), (3, 5), (-1, -1)] {
            let lhs = x.adams(k).unwrap().adams(l2).unwrap();
            let rhs = x.adams(k * l2).unwrap();
            assert_eq!(lhs, rhs, "composition at ({}, {})", k, l2);
        }
        for k in [-1i64, 2, 3, 5] {
            let psi = |c: &KClass| c.adams(k).unwrap();
            assert_eq!(psi(&x.mul(&y)), psi(&x).mul(&psi(&y)));
            assert_eq!(psi(&x.add(&y)), psi(&x).add(&psi(&y)));
        }
    }

    #[test]
    fn adams_commutes_with_bott() {
        let space = cp(2);
        let l = LineExpr::named(&space, "h").unwrap();
        let x = KClass::line(&space, &l);
        for g in [-2i64, 1, 3] {
            for k in [2i64, -1, 5] {
                // psi^k(b^g x) = k^{-g} b^g psi^k(x)
                let lhs = x.bott(g).adams(k).unwrap();
                let rhs = x.adams(k).unwrap().bott(g).scale(&int_pow(k, -g));
                assert_eq!(lhs, rhs, "k = {}, g = {}", k, g);
            }
        }
    }

    #[test]
    fn adams_h_examples() {
        let space = cp(2);
        let h = space.root(0);
        let elem = &(&space.cohomology().one() + &h) + &h.pow(2);
        let omega = HPClass::from_element(&space, 0, &elem);
        let scaled = omega.adams_h(2).unwrap();
        assert_eq!(scaled.component(0), space.cohomology().one());
        assert_eq!(scaled.component(1), h.scale(&rat(2, 1)));
        assert_eq!(scaled.component(2), h.pow(2).scale(&rat(4, 1)));

        let degree_neg2 = HPClass::constant(&space, -2, Rational::one());
        let scaled = degree_neg2.adams_h(2).unwrap();
        assert_eq!(scaled.component(0), space.cohomology().constant(rat(2, 1)));

        assert_eq!(omega.adams_h(1).unwrap(), omega);
        assert_eq!(omega.adams_h(0), Err(KError::ZeroAdamsK));
    }

    #[test]
    fn ch_intertwines_adams() {
        let space = cp(3);
        let l = LineExpr::named(&space, "h").unwrap();
        let x = KClass::line(&space, &l)
            .mul(&KClass::line(&space, &l))
            .add(&KClass::constant(&space, rat(2, 3), 0))
            .bott(1);
        for k in [-1i64, 2, 3, 5] {
            assert_eq!(
                x.adams(k).unwrap().ch(),
                &x.ch().adams_h(k).unwrap(),
                "k = {}",
                k
            );
        }
    }

    #[test]
    fn acgenus_examples() {
        let space = cp(2);
        let h = space.root(0);

        let trivial = Bundle::trivial(&space, 3);
        assert_eq!(acgenus(&trivial), HPClass::one(&space));

        let l = LineExpr::named(&space, "h").unwrap();
        let line_bundle = Bundle::from_roots(&space, vec![l.clone()]);
        let td = acgenus(&line_bundle);
        assert_eq!(td.component(0), space.cohomology().one());
        assert_eq!(td.component(1), h.scale(&rat(1, 2)));
        assert_eq!(td.component(2), h.pow(2).scale(&rat(1, 12)));

        let double = Bundle::from_roots(&space, vec![l.clone(), l.clone()]);
        assert_eq!(acgenus(&double), td.mul(&td));
    }

    #[test]
    fn rho_trivial_bundle_is_one() {
        let space = cp(2);
        for k in [-1i64, 2, 3, 5] {
            let r = rho(k, &Bundle::trivial(&space, 4)).unwrap();
            assert_eq!(r, KClass::one(&space));
            // also via explicit trivial roots
            let b = Bundle::from_roots(&space, vec![LineExpr::trivial(&space)]);
            assert_eq!(rho(k, &b).unwrap(), KClass::one(&space));
        }
    }

    #[test]
    fn rho_two_on_cp1_line() {
        let space = cp(1);
        let l = LineExpr::named(&space, "h").unwrap();
        let b = Bundle::from_roots(&space, vec![l]);
        let r = rho(2, &b).unwrap();
        let u = space.uring().generator(0);
        let expected = KClass::new(&space, &space.uring().one() + &u.scale(&rat(1, 2)), 0);
        assert_eq!(r, expected, "rho^2(L) = 1 + u/2 on CP^1");
        let h = space.root(0);
        assert_eq!(r.ch().component(0), space.cohomology().one());
        assert_eq!(r.ch().component(1), h.scale(&rat(1, 2)));
        assert!(zk_membership(&r, 2));
    }

    #[test]
    fn rho_satisfies_property_four() {
        // ch(rho^k(V)) * genus(V) = psiH^k(genus(V)), multiplicatively stated
        let space = cp(3);
        let l = LineExpr::named(&space, "h").unwrap();
        let bundles = [
            Bundle::from_roots(&space, vec![l.clone()]),
            Bundle::from_roots(&space, vec![l.clone(), l.clone()]),
            Bundle::new(&space, vec![l.clone(), l.product(&l)], 5).unwrap(),
        ];
        for b in &bundles {
            let td = acgenus(b);
            for k in [-1i64, 2, 3, 5] {
                let lhs = rho(k, b).unwrap().ch().mul(&td);
                let rhs = td.adams_h(k).unwrap();
                assert_eq!(lhs, rhs, "k = {}", k);
            }
        }
    }

    #[test]
    fn rho_is_multiplicative_and_a_unit() {
        let space = cp(3);
        let l = LineExpr::named(&space, "h").unwrap();
        let a = Bundle::from_roots(&space, vec![l.clone()]);
        let b = Bundle::new(&space, vec![l.product(&l)], 2).unwrap();
        for k in [-1i64, 2, 3, 5] {
            let sum = rho(k, &a.direct_sum(&b)).unwrap();
            let product = rho(k, &a).unwrap().mul(&rho(k, &b).unwrap());
            assert_eq!(sum, product, "k = {}", k);
            let unit = rho(k, &sum_bundle_for_unit_test(&space)).unwrap();
            let inv = unit.invert_unit().unwrap();
            assert_eq!(unit.mul(&inv), KClass::one(&space));
            assert!(zk_membership(&unit, k), "Z[1/k] membership at k = {}", k);
        }
    }

    fn sum_bundle_for_unit_test(space: &Space) -> Bundle {
        let l = LineExpr::named(space, "h").unwrap();
        Bundle::new(space, vec![l.clone(), l.product(&l), l.inverse()], 4).unwrap()
    }

    #[test]
    fn spin_shadow_negation_symmetric_roots() {
        let space = cp(3);
        let l = LineExpr::named(&space, "h").unwrap();
        let sym = Bundle::from_roots(&space, vec![l.clone(), l.inverse()]);
        assert!(sym.is_negation_symmetric());
        let td = acgenus(&sym);
        assert_eq!(td.adams_h(-1).unwrap(), td);
        assert_eq!(rho(-1, &sym).unwrap().ch(), &HPClass::one(&space));

        let asym = Bundle::from_roots(&space, vec![l.clone()]);
        assert!(!asym.is_negation_symmetric());
    }

    #[test]
    fn zk_membership_examples() {
        let space = cp(1);
        let u = KClass::u(&space, &LineExpr::named(&space, "h").unwrap());
        let x = KClass::one(&space).add(&u.scale(&rat(1, 2)));
        assert!(zk_membership(&x, 2));
        assert!(!zk_membership(&KClass::constant(&space, rat(1, 3), 0), 2));
        assert!(zk_membership(&u.scale(&rat(7, 1)), 5));
        assert!(zk_membership(&u.scale(&rat(7, 1)), -1));
        assert!(!zk_membership(&x, -1));
        assert!(zk_membership(&x, 6));
    }

    #[test]
    fn from_ch_roundtrip() {
        let space = cp(2);
        let l = LineExpr::named(&space, "h").unwrap();
        let x = KClass::line(&space, &l)
            .mul(&KClass::line(&space, &l.inverse()))
            .add(&KClass::u(&space, &l).scale(&rat(5, 7)))
            .bott(-1);
        let rebuilt = KClass::from_ch(space_ref(&x), x.ch());
        assert_eq!(rebuilt, x);
    }

    fn space_ref(x: &KClass) -> &Space {
        x.space()
    }

    #[test]
    fn adams_preimage_examples() {
        let space = cp(2);
        let one = KClass::one(&space);
        assert_eq!(adams_preimage(2, &one).unwrap(), one);

        // target with ch = 1 + h: preimage has ch = 1 + h/2 (degree-4 part forced)
        let h = space.root(0);
        let target_hp = HPClass::from_element(&space, 0, &(&space.cohomology().one() + &h));
        let target = KClass::from_ch(&space, &target_hp);
        let z = adams_preimage(2, &target).unwrap();
        assert_eq!(z.ch().component(1), h.scale(&rat(1, 2)));
        assert!(z.ch().component(2).is_zero());
        assert_eq!(z.adams(2).unwrap(), target);

        let bad = KClass::constant(&space, rat(2, 1), 0);
        assert_eq!(adams_preimage(2, &bad), Err(KError::AugmentationNotOne));
        assert_eq!(adams_preimage(1, &one), Err(KError::BadPreimageK(1)));
    }

    #[test]
    fn pullback_naturality_for_rho_and_genus() {
        // restriction CP^2 -> CP^1, h -> h
        let cp2 = cp(2);
        let cp1 = cp(1);
        let map = SpaceMap::new(&cp2, &cp1, vec![LineExpr::named(&cp1, "h").unwrap()]).unwrap();
        let l = LineExpr::named(&cp2, "h").unwrap();
        let b = Bundle::new(&cp2, vec![l.clone(), l.product(&l)], 3).unwrap();
        for k in [-1i64, 2, 3] {
            assert_eq!(
                map.map_kclass(&rho(k, &b).unwrap()),
                rho(k, &map.map_bundle(&b)).unwrap()
            );
        }
        assert_eq!(map.map_hp(&acgenus(&b)), acgenus(&map.map_bundle(&b)));
    }

    #[test]
    fn space_map_rejects_broken_relations() {
        // CP^1 -> CP^2 along h -> h does not kill h^2
        let cp1 = cp(1);
        let cp2 = cp(2);
        let err = SpaceMap::new(&cp1, &cp2, vec![LineExpr::named(&cp2, "h").unwrap()]);
        assert_eq!(err.unwrap_err(), KError::RelationNotRespected("h".into()));
    }
}
