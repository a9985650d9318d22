//! Graded coefficient rings and their elements.
//!
//! A [`GradedRing`] is Z, Q, or a graded polynomial ring over one of them,
//! with every generator sitting in an even homotopy degree. A
//! [`RingElement`] is a normalized sum of monomials in the generators:
//! zero coefficients are never stored and monomials are kept in a fixed
//! graded-lex order, so structural equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{BaseRing, Scalar};

/// A named polynomial generator with its (even) homotopy degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// Exponent vector over the generators of a ring, ordered graded-lex:
/// lower total degree first, and within a degree the monomial with the
/// larger power of an earlier generator comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Z, Q, or a graded polynomial ring over one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    base: BaseRing,
    gens: Vec<Generator>,
}

impl GradedRing {
    pub fn integers() -> Arc<Self> {
        Arc::new(GradedRing {
            base: BaseRing::Integers,
            gens: Vec::new(),
        })
    }

    pub fn rationals() -> Arc<Self> {
        Arc::new(GradedRing {
            base: BaseRing::Rationals,
            gens: Vec::new(),
        })
    }

    /// Polynomial ring over `base` with the given (name, degree) generators.
    pub fn polynomial(base: BaseRing, gens: &[(&str, i64)]) -> Result<Arc<Self>> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, degree) in gens {
            if !seen.insert(name.to_string()) {
                return Err(Error::Invalid(format!("duplicate generator `{}`", name)));
            }
            if degree % 2 != 0 {
                return Err(Error::Invalid(format!(
                    "generator `{}` has odd degree {}",
                    name, degree
                )));
            }
            if name.is_empty() || !name.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::Invalid(format!("bad generator name `{}`", name)));
            }
        }
        Ok(Arc::new(GradedRing {
            base,
            gens: gens
                .iter()
                .map(|(name, degree)| Generator {
                    name: name.to_string(),
                    degree: *degree,
                })
                .collect(),
        }))
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_rational(&self) -> bool {
        self.base == BaseRing::Rationals
    }

    /// Extends the ring by additional generators (used to adjoin formal
    /// Chern-class symbols).
    pub fn extend(self: &Arc<Self>, extra: &[(&str, i64)]) -> Result<Arc<Self>> {
        let mut gens: Vec<(String, i64)> = self
            .gens
            .iter()
            .map(|g| (g.name.clone(), g.degree))
            .collect();
        for (name, degree) in extra {
            gens.push((name.to_string(), *degree));
        }
        let refs: Vec<(&str, i64)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        GradedRing::polynomial(self.base, &refs)
    }
}

pub fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "{} vs {}",
            ring_signature(a),
            ring_signature(b)
        )))
    }
}

fn ring_signature(r: &GradedRing) -> String {
    if r.generators().is_empty() {
        r.base().to_string()
    } else {
        format!(
            "{}[{}]",
            r.base(),
            r.generators()
                .iter()
                .map(|g| g.name.clone())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Result of a homogeneity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero element: matches every degree.
    Any,
    Degree(i64),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn matches(&self, degree: i64) -> bool {
        match self {
            Homogeneity::Any => true,
            Homogeneity::Degree(d) => *d == degree,
            Homogeneity::Inhomogeneous => false,
        }
    }
}

/// An element of a [`GradedRing`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<GradedRing>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl RingElement {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        RingElement {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::constant(ring, Scalar::one(ring.base()))
    }

    pub fn constant(ring: &Arc<GradedRing>, c: Scalar) -> Self {
        assert_eq!(c.base(), ring.base(), "scalar base mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![0; ring.generators().len()]), c);
        }
        RingElement {
            ring: Arc::clone(ring),
            terms,
        }
    }

    pub fn from_i64(ring: &Arc<GradedRing>, n: i64) -> Self {
        Self::constant(ring, Scalar::from_i64(ring.base(), n))
    }

    pub fn generator(ring: &Arc<GradedRing>, name: &str) -> Result<Self> {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0u32; ring.generators().len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), Scalar::one(ring.base()));
        Ok(RingElement {
            ring: Arc::clone(ring),
            terms,
        })
    }

    /// Builds an element from raw (exponents, scalar) pairs, normalizing.
    pub fn from_terms<I>(ring: &Arc<GradedRing>, it: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let n = ring.generators().len();
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (exps, c) in it {
            assert_eq!(exps.len(), n, "exponent arity mismatch");
            if c.is_zero() {
                continue;
            }
            let m = Monomial(exps);
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        RingElement {
            ring: Arc::clone(ring),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_constant() && c.is_one())
                .unwrap_or(false)
    }

    /// The scalar sitting on the constant monomial.
    pub fn constant_part(&self) -> Scalar {
        let key = Monomial(vec![0; self.ring.generators().len()]);
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring.base()))
    }

    /// True when the element is a constant (possibly zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        same_ring(&self.ring, &other.ring)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        Ok(RingElement {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        same_ring(&self.ring, &other.ring)?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u32> = ma
                    .0
                    .iter()
                    .zip(mb.0.iter())
                    .map(|(a, b)| a + b)
                    .collect();
                let c = ca.mul(cb);
                let m = Monomial(exps);
                match terms.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c);
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        Ok(RingElement {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn mul_scalar(&self, c: &Scalar) -> RingElement {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        RingElement {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(m, s)| (m.clone(), s.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Division by a scalar; exact over Z, total (for nonzero divisors) over Q.
    pub fn try_div_scalar(&self, c: &Scalar) -> Result<RingElement> {
        let mut terms = BTreeMap::new();
        for (m, s) in &self.terms {
            terms.insert(m.clone(), s.try_div(c)?);
        }
        Ok(RingElement {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// A unit must be a nonzero constant invertible in the base ring;
    /// polynomial rings over Z or Q have no other units.
    pub fn unit_inverse(&self) -> Option<RingElement> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !m.is_constant() {
            return None;
        }
        c.inverse().map(|i| Self::constant(&self.ring, i))
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    /// When the element is a single term with a negative scalar, returns
    /// its negation (used by series printing to fold the sign outward).
    pub fn single_negated(&self) -> Option<RingElement> {
        if self.terms.len() == 1 {
            let (_, c) = self.terms.iter().next().unwrap();
            if c.is_negative() {
                return Some(self.neg());
            }
        }
        None
    }

    /// Total generator-degree of each monomial, when they all agree.
    pub fn homogeneous_degree(&self) -> Homogeneity {
        if self.terms.is_empty() {
            return Homogeneity::Any;
        }
        let gens = self.ring.generators();
        let mut degree = None;
        for m in self.terms.keys() {
            let d: i64 = m
                .0
                .iter()
                .zip(gens.iter())
                .map(|(&e, g)| e as i64 * g.degree)
                .sum();
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return Homogeneity::Inhomogeneous,
                _ => {}
            }
        }
        Homogeneity::Degree(degree.unwrap())
    }

    /// Applies the ring map sending each generator to the given element of
    /// `target`; constants map along the identity of the base ring.
    pub fn substitute_generators(
        &self,
        target: &Arc<GradedRing>,
        images: &BTreeMap<String, RingElement>,
    ) -> Result<RingElement> {
        if target.base() != self.ring.base() {
            return Err(Error::RingMismatch(
                "generator substitution must preserve the base ring".into(),
            ));
        }
        let gens = self.ring.generators();
        let mut gen_images = Vec::with_capacity(gens.len());
        for g in gens {
            let img = images
                .get(&g.name)
                .ok_or_else(|| Error::UnknownGenerator(g.name.clone()))?;
            same_ring(img.ring(), target)?;
            gen_images.push(img.clone());
        }
        let mut acc = RingElement::zero(target);
        for (m, c) in &self.terms {
            let mut term = RingElement::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&gen_images[i].pow(e))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Re-interprets the element in a larger ring containing all of this
    /// ring's generators by name (degrees must agree).
    pub fn embed_into(&self, target: &Arc<GradedRing>) -> Result<RingElement> {
        if target.base() != self.ring.base() {
            return Err(Error::RingMismatch("embedding must preserve the base".into()));
        }
        let mut index_map = Vec::with_capacity(self.ring.generators().len());
        for g in self.ring.generators() {
            let idx = target
                .generator_index(&g.name)
                .ok_or_else(|| Error::UnknownGenerator(g.name.clone()))?;
            if target.generators()[idx].degree != g.degree {
                return Err(Error::RingMismatch(format!(
                    "generator `{}` changes degree under embedding",
                    g.name
                )));
            }
            index_map.push(idx);
        }
        let n = target.generators().len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.0.iter().enumerate() {
                exps[index_map[i]] = e;
            }
            (exps, c.clone())
        });
        Ok(RingElement::from_terms(target, terms))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let gens = self.ring.generators();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = if neg { c.neg() } else { c.clone() };
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_constant() {
                parts.push(mag.to_string());
            }
            for (j, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(gens[j].name.clone()),
                    _ => parts.push(format!("{}^{}", gens[j].name, e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zu() -> Arc<GradedRing> {
        GradedRing::polynomial(BaseRing::Integers, &[("u", 2)]).unwrap()
    }

    fn qm() -> Arc<GradedRing> {
        GradedRing::polynomial(BaseRing::Rationals, &[("m1", 2), ("m2", 4)]).unwrap()
    }

    #[test]
    fn product_of_u_plus_minus_one() {
        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let one = RingElement::one(&ring);
        let a = u.add(&one).unwrap();
        let b = u.sub(&one).unwrap();
        let p = a.mul(&b).unwrap();
        let expect = u.mul(&u).unwrap().sub(&one).unwrap();
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "-1 + u^2");
    }

    #[test]
    fn add_zero_is_identity() {
        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let z = RingElement::zero(&ring);
        assert_eq!(u.add(&z).unwrap(), u);
    }

    #[test]
    fn rational_generator_product() {
        let ring = qm();
        let m1 = RingElement::generator(&ring, "m1").unwrap();
        let m2 = RingElement::generator(&ring, "m2").unwrap();
        let two_m1 = m1.mul_scalar(&Scalar::from_i64(BaseRing::Rationals, 2));
        let three_m2 = m2.mul_scalar(&Scalar::from_i64(BaseRing::Rationals, 3));
        let p = two_m1.mul(&three_m2).unwrap();
        let expect = m1
            .mul(&m2)
            .unwrap()
            .mul_scalar(&Scalar::from_i64(BaseRing::Rationals, 6));
        assert_eq!(p, expect);
    }

    #[test]
    fn units() {
        let ring = zu();
        let minus_one = RingElement::from_i64(&ring, -1);
        assert_eq!(minus_one.unit_inverse().unwrap(), minus_one);
        let u = RingElement::generator(&ring, "u").unwrap();
        assert!(!u.is_unit());

        let q = GradedRing::rationals();
        let x = RingElement::constant(
            &q,
            Scalar::fraction(BaseRing::Rationals, 3.into(), 4.into()).unwrap(),
        );
        let inv = x.unit_inverse().unwrap();
        assert!(x.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn homogeneity() {
        let ring = qm();
        let m1 = RingElement::generator(&ring, "m1").unwrap();
        assert_eq!(m1.homogeneous_degree(), Homogeneity::Degree(2));

        let de = GradedRing::polynomial(BaseRing::Rationals, &[("d", 4), ("e", 8)]).unwrap();
        let d = RingElement::generator(&de, "d").unwrap();
        let e = RingElement::generator(&de, "e").unwrap();
        assert_eq!(
            d.mul(&e).unwrap().homogeneous_degree(),
            Homogeneity::Degree(12)
        );

        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let mixed = u.add(&RingElement::one(&ring)).unwrap();
        assert_eq!(mixed.homogeneous_degree(), Homogeneity::Inhomogeneous);
        assert_eq!(RingElement::zero(&ring).homogeneous_degree(), Homogeneity::Any);
        assert!(RingElement::zero(&ring).homogeneous_degree().matches(42));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = zu();
        let b = qm();
        let u = RingElement::generator(&a, "u").unwrap();
        let m = RingElement::generator(&b, "m1").unwrap();
        assert!(u.add(&m).is_err());
    }

    #[test]
    fn canonical_order_is_graded_lex() {
        let ring = GradedRing::polynomial(BaseRing::Integers, &[("a", 2), ("b", 2)]).unwrap();
        let a = RingElement::generator(&ring, "a").unwrap();
        let b = RingElement::generator(&ring, "b").unwrap();
        let one = RingElement::one(&ring);
        // (1 + a + b)^2 should render constants first, then degree 1, then 2.
        let s = one.add(&a).unwrap().add(&b).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.to_string(), "1 + 2*a + 2*b + a^2 + 2*a*b + b^2");
    }

    #[test]
    fn generator_substitution() {
        let src = qm();
        let dst = GradedRing::polynomial(BaseRing::Rationals, &[("u", 2)]).unwrap();
        let u = RingElement::generator(&dst, "u").unwrap();
        let mut images = BTreeMap::new();
        images.insert("m1".to_string(), u.clone());
        images.insert("m2".to_string(), u.mul(&u).unwrap());
        let m1 = RingElement::generator(&src, "m1").unwrap();
        let m2 = RingElement::generator(&src, "m2").unwrap();
        let expr = m1.mul(&m2).unwrap();
        let image = expr.substitute_generators(&dst, &images).unwrap();
        assert_eq!(image, u.pow(3));
    }
}
