//! Exponential characteristic classes and the splitting principle.
//!
//! An [`ExpClass`] is a one-variable unit series `f` with `f(0) = 1`. Its
//! value on a rank-n bundle is `prod f(x_i)` over the Chern roots; the
//! unique rewrite of that product in the elementary symmetric polynomials
//! (computed by [`symmetric_expand`]) evaluates it on Chern classes
//! instead. The module also houses orientation quotients, Hirzebruch
//! series, Euler classes of twisted bundles, and genera of projective
//! spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fgl::{FormalGroupLaw, FGL_X, FGL_Y};
use crate::ring::{GradedRing, RingElement};
use crate::scalar::Scalar;
use crate::series::TruncSeries;

/// A characteristic series: one variable, unit constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpClass {
    series: TruncSeries,
}

impl ExpClass {
    pub fn new(series: TruncSeries) -> Result<Self> {
        if series.vars().len() != 1 {
            return Err(Error::Invalid(
                "a characteristic series has exactly one variable".into(),
            ));
        }
        if !series.constant_term().is_one() {
            return Err(Error::Invalid(
                "a characteristic series has constant term 1".into(),
            ));
        }
        Ok(ExpClass { series })
    }

    pub fn one(ring: &Arc<GradedRing>, trunc: u32) -> Self {
        ExpClass {
            series: TruncSeries::one(ring, &["x"], trunc),
        }
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.series.ring()
    }

    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }

    pub fn var(&self) -> &str {
        &self.series.vars()[0]
    }

    /// Optional grading contract: the coefficient of `x^k` lives in
    /// degree 2k.
    pub fn is_homogeneous(&self) -> bool {
        self.series.terms().all(|(m, c)| {
            let k = m.0[0] as i64;
            c.homogeneous_degree().matches(2 * k)
        })
    }

    /// The Todd series `x / (1 - e^{-x})` over Q.
    pub fn todd(trunc: u32) -> Result<Self> {
        let ring = GradedRing::rationals();
        // (1 - e^{-x})/x = sum_{j>=0} (-1)^j x^j / (j+1)!
        let mut terms = Vec::new();
        let mut fact = num::BigInt::from(1);
        for j in 0..=trunc {
            fact *= num::BigInt::from(j as i64 + 1);
            let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
            let c = Scalar::fraction(ring.base(), sign.into(), fact.clone())?;
            terms.push((vec![j], RingElement::constant(&ring, c)));
        }
        let base = TruncSeries::from_terms(&ring, &["x"], trunc, terms)?;
        ExpClass::new(base.invert()?)
    }

    /// The signature series `x / tanh(x)` over Q.
    pub fn l_genus(trunc: u32) -> Result<Self> {
        let ring = GradedRing::rationals();
        let mut sinh_over_x = Vec::new();
        let mut cosh = Vec::new();
        let mut fact = num::BigInt::from(1);
        for j in 0..=(trunc + 1) {
            if j > 0 {
                fact *= num::BigInt::from(j as i64);
            }
            let c = Scalar::fraction(ring.base(), 1.into(), fact.clone())?;
            if j % 2 == 0 && j <= trunc {
                cosh.push((vec![j], RingElement::constant(&ring, c)));
            } else if j % 2 == 1 {
                // sinh(x)/x drops one power of x.
                sinh_over_x.push((vec![j - 1], RingElement::constant(&ring, c)));
            }
        }
        let sinh_over_x = TruncSeries::from_terms(&ring, &["x"], trunc, sinh_over_x)?;
        let cosh = TruncSeries::from_terms(&ring, &["x"], trunc, cosh)?;
        ExpClass::new(cosh.mul(&sinh_over_x.invert()?)?)
    }
}

/// A rank-n bundle in either the Chern-roots or the Chern-classes model.
#[derive(Debug, Clone)]
pub enum BundleData {
    /// Distinct formal variables, one per line-bundle summand.
    ChernRoots(Vec<String>),
    /// Explicit classes `c_1..c_n` (trailing zeros allowed).
    ChernClasses(Vec<RingElement>),
}

impl BundleData {
    pub fn roots(names: &[&str]) -> Self {
        BundleData::ChernRoots(names.iter().map(|s| s.to_string()).collect())
    }

    /// The default root names `x1..xn`.
    pub fn standard_roots(n: usize) -> Self {
        BundleData::ChernRoots((1..=n).map(|i| format!("x{}", i)).collect())
    }

    pub fn rank(&self) -> usize {
        match self {
            BundleData::ChernRoots(v) => v.len(),
            BundleData::ChernClasses(v) => v.len(),
        }
    }
}

/// The elementary symmetric polynomial `e_k(x_1..x_n)` as a series.
pub fn elementary_symmetric(
    ring: &Arc<GradedRing>,
    vars: &[String],
    k: usize,
    trunc: u32,
) -> Result<TruncSeries> {
    let n = vars.len();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    if k == 0 {
        return Ok(TruncSeries::one(ring, &var_refs, trunc));
    }
    if k > n {
        return Ok(TruncSeries::zero(ring, &var_refs, trunc));
    }
    let mut terms = Vec::new();
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        let mut exps = vec![0u32; n];
        for &i in &choice {
            exps[i] = 1;
        }
        terms.push((exps, RingElement::one(ring)));
        // Advance to the next k-subset in lexicographic order.
        let mut i = k;
        let mut done = true;
        while i > 0 {
            i -= 1;
            if choice[i] != i + n - k {
                choice[i] += 1;
                for j in i + 1..k {
                    choice[j] = choice[j - 1] + 1;
                }
                done = false;
                break;
            }
        }
        if done {
            return TruncSeries::from_terms(ring, &var_refs, trunc, terms);
        }
    }
}

/// Names `s1..sn` for the elementary-symmetric variables.
pub fn sigma_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("s{}", k)).collect()
}

/// Weighted degree of a sigma-monomial (`s_k` counts k).
pub fn sigma_weighted_degree(exps: &[u32]) -> u32 {
    exps.iter()
        .enumerate()
        .map(|(i, &e)| (i as u32 + 1) * e)
        .sum()
}

/// Rewrites a symmetric series in `x_1..x_n` as a series `G(s_1..s_n)` in
/// the elementary symmetric polynomials, by graded-lex leading-term
/// elimination. `G` is exact for sigma-monomials of weighted degree up to
/// the input's truncation order.
pub fn symmetric_expand(p: &TruncSeries, n: usize) -> Result<TruncSeries> {
    if p.vars().len() != n {
        return Err(Error::Invalid(format!(
            "expected a series in {} variables, found {}",
            n,
            p.vars().len()
        )));
    }
    if !p.is_symmetric() {
        return Err(Error::Invalid(
            "symmetric_expand requires a symmetric input".into(),
        ));
    }
    let ring = p.ring().clone();
    let trunc = p.trunc();
    let x_vars = p.vars().to_vec();
    let svars = sigma_vars(n);
    let svar_refs: Vec<&str> = svars.iter().map(|s| s.as_str()).collect();

    let elems: Vec<TruncSeries> = (1..=n)
        .map(|k| elementary_symmetric(&ring, &x_vars, k, trunc))
        .collect::<Result<Vec<_>>>()?;

    let mut rem = p.clone();
    let mut g_terms: Vec<(Vec<u32>, RingElement)> = Vec::new();
    while !rem.is_zero() {
        // Graded-lex leading term: maximal total degree, then the
        // lexicographically largest exponent vector.
        let top = rem.terms().map(|(m, _)| m.total()).max().unwrap();
        let (lead_m, lead_c) = rem
            .terms()
            .filter(|(m, _)| m.total() == top)
            .max_by(|(a, _), (b, _)| a.0.cmp(&b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        // A symmetric polynomial's leading exponents are weakly decreasing.
        let lambda = &lead_m.0;
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "leading term is not weakly decreasing; input is not symmetric".into(),
            ));
        }
        let mut alpha = vec![0u32; n];
        for k in 0..n {
            alpha[k] = if k + 1 < n {
                lambda[k] - lambda[k + 1]
            } else {
                lambda[n - 1]
            };
        }
        g_terms.push((alpha.clone(), lead_c.clone()));
        // Subtract lead_c * prod e_k^{alpha_k}.
        let mut prod = TruncSeries::one(&ring, &[], trunc);
        for (k, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                prod = prod.mul(&elems[k])?;
            }
        }
        rem = rem.sub(&prod.mul_element(&lead_c)?)?;
    }
    TruncSeries::from_terms(&ring, &svar_refs, trunc, g_terms)
}

/// Substitutes `s_k -> e_k(x_1..x_n)` back into a sigma-series; the
/// inverse direction of [`symmetric_expand`].
pub fn sigma_back_substitute(g: &TruncSeries, x_vars: &[String]) -> Result<TruncSeries> {
    let n = x_vars.len();
    let ring = g.ring().clone();
    let trunc = g.trunc();
    let mut bind = BTreeMap::new();
    for (k, name) in sigma_vars(n).into_iter().enumerate() {
        bind.insert(name, elementary_symmetric(&ring, x_vars, k + 1, trunc)?);
    }
    g.substitute(&bind)
}

/// Value of an exponential class on a bundle.
///
/// In the roots model this is `prod_i f(x_i)`, a series in the roots.
/// In the classes model the product is rewritten through
/// [`symmetric_expand`] and evaluated at `(c_1, .., c_n)`, giving a
/// constant series over the classes' ring.
pub fn class_on_bundle(class: &ExpClass, bundle: &BundleData) -> Result<TruncSeries> {
    match bundle {
        BundleData::ChernRoots(roots) => product_over_roots(class, roots),
        BundleData::ChernClasses(classes) => {
            let n = classes.len();
            let target = classes
                .first()
                .map(|c| c.ring().clone())
                .unwrap_or_else(|| class.ring().clone());
            for c in classes {
                crate::ring::same_ring(c.ring(), &target)?;
            }
            let x_vars: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
            let prod = product_over_roots(&class.clone(), &x_vars)?;
            let g = symmetric_expand(&prod, n)?;
            let mut acc = RingElement::zero(&target);
            for (m, c) in g.terms() {
                let mut term = if c.ring() == &target {
                    c.clone()
                } else {
                    c.embed_into(&target)?
                };
                for (k, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        term = term.mul(&classes[k].pow(e))?;
                    }
                }
                acc = acc.add(&term)?;
            }
            Ok(TruncSeries::constant(&target, &[], g.trunc(), acc))
        }
    }
}

fn product_over_roots(class: &ExpClass, roots: &[String]) -> Result<TruncSeries> {
    let ring = class.ring();
    let trunc = class.trunc();
    let mut acc = TruncSeries::one(ring, &[], trunc);
    for r in roots {
        let mut ren = BTreeMap::new();
        ren.insert(class.var().to_string(), r.clone());
        acc = acc.mul(&class.series().renamed(&ren)?)?;
    }
    Ok(acc)
}

/// The quotient class of two orientations, given the primed parameter
/// expressed in the unprimed coordinate: `g` with `g(0) = 0`, `g'(0) = 1`.
/// Its value on the tautological line bundle is `g(x)/x`.
pub fn orientation_quotient(g: &TruncSeries) -> Result<ExpClass> {
    if g.vars().len() != 1 {
        return Err(Error::Invalid(
            "orientation parameter must be a one-variable series".into(),
        ));
    }
    if !g.constant_term().is_zero() {
        return Err(Error::Invalid(
            "orientation parameter must vanish at 0".into(),
        ));
    }
    if !g.coeff1(1).is_one() {
        return Err(Error::Invalid(
            "orientation parameter must have linear coefficient 1".into(),
        ));
    }
    ExpClass::new(shift_down(g)?)
}

/// `f(x)/x` for a one-variable series with zero constant term.
fn shift_down(f: &TruncSeries) -> Result<TruncSeries> {
    let ring = f.ring().clone();
    let name = f.vars()[0].clone();
    let trunc = f.trunc().saturating_sub(1);
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        if m.0[0] == 0 {
            continue;
        }
        terms.push((vec![m.0[0] - 1], c.clone()));
    }
    TruncSeries::from_terms(&ring, &[&name], trunc, terms)
}

/// The Hirzebruch series of a law: `x / exp_F(x)`, the quotient of the
/// given orientation against the additive one over Q. This convention
/// yields the Todd-type series for the multiplicative law.
pub fn hirzebruch_series(law: &FormalGroupLaw) -> Result<ExpClass> {
    if !law.ring().is_rational() {
        return Err(Error::Invalid(
            "the Hirzebruch series needs a Q-algebra coefficient ring".into(),
        ));
    }
    let exp = law.exp()?;
    // x/exp(x) = 1 / (exp(x)/x).
    ExpClass::new(shift_down(&exp)?.invert()?)
}

/// Euler class of `V (x) L` in the roots model: `prod_i (x_i +_F t)`.
pub fn euler_of_twist(
    law: &FormalGroupLaw,
    bundle: &BundleData,
    t_var: &str,
) -> Result<TruncSeries> {
    euler_of_twist_in_box(law, bundle, t_var, u32::MAX, &BTreeMap::new())
}

/// Box-filtered variant used by Tate-window computations.
pub fn euler_of_twist_in_box(
    law: &FormalGroupLaw,
    bundle: &BundleData,
    t_var: &str,
    box_trunc: u32,
    box_caps: &BTreeMap<String, u32>,
) -> Result<TruncSeries> {
    let BundleData::ChernRoots(roots) = bundle else {
        return Err(Error::Invalid(
            "euler_of_twist needs the Chern-roots representation".into(),
        ));
    };
    let ring = law.ring();
    let trunc = law.trunc();
    // Fix the output variable order as (roots..., t).
    let mut all_vars: Vec<&str> = roots.iter().map(|s| s.as_str()).collect();
    all_vars.push(t_var);
    let mut acc = TruncSeries::one(ring, &all_vars, trunc.min(box_trunc));
    for r in roots {
        let mut ren = BTreeMap::new();
        ren.insert(FGL_X.to_string(), r.clone());
        ren.insert(FGL_Y.to_string(), t_var.to_string());
        let factor = law.series().renamed(&ren)?;
        acc = acc.mul_in_box(&factor, box_trunc, box_caps)?;
    }
    Ok(acc)
}

/// The genus of complex projective n-space under the class `Q`:
/// the coefficient of `x^n` in `Q(x)^{n+1}`.
pub fn genus_cpn(class: &ExpClass, n: u32) -> Result<RingElement> {
    if class.trunc() < n {
        return Err(Error::Precision(format!(
            "series of order {} cannot give the genus of projective {}-space",
            class.trunc(),
            n
        )));
    }
    let p = class.series().truncated(n).pow(n + 1)?;
    Ok(p.coeff(&[n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::FglKind;
    use crate::scalar::BaseRing;

    #[test]
    fn power_sums_in_two_and_three_variables() {
        let ring = GradedRing::rationals();
        // x1^2 + x2^2 = s1^2 - 2 s2
        let x1 = TruncSeries::var(&ring, "x1", 6);
        let x2 = TruncSeries::var(&ring, "x2", 6);
        let p2 = x1.pow(2).unwrap().add(&x2.pow(2).unwrap()).unwrap();
        let g = symmetric_expand(&p2, 2).unwrap();
        assert_eq!(g.coeff(&[2, 0]), RingElement::one(&ring));
        assert_eq!(g.coeff(&[0, 1]), RingElement::from_i64(&ring, -2));
        assert_eq!(g.num_terms(), 2);

        // x1^3 + x2^3 + x3^3 = s1^3 - 3 s1 s2 + 3 s3
        let x3 = TruncSeries::var(&ring, "x3", 6);
        let p3 = TruncSeries::var(&ring, "x1", 6)
            .pow(3)
            .unwrap()
            .add(&TruncSeries::var(&ring, "x2", 6).pow(3).unwrap())
            .unwrap()
            .add(&x3.pow(3).unwrap())
            .unwrap();
        let g3 = symmetric_expand(&p3, 3).unwrap();
        assert_eq!(g3.coeff(&[3, 0, 0]), RingElement::one(&ring));
        assert_eq!(g3.coeff(&[1, 1, 0]), RingElement::from_i64(&ring, -3));
        assert_eq!(g3.coeff(&[0, 0, 1]), RingElement::from_i64(&ring, 3));
        assert_eq!(g3.num_terms(), 3);

        let names: Vec<String> = vec!["x1".into(), "x2".into(), "x3".into()];
        let back = sigma_back_substitute(&g3, &names).unwrap();
        assert!(back.eq_to(&p3, 6).unwrap());
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let ring = GradedRing::rationals();
        let p = TruncSeries::var(&ring, "x1", 4)
            .pow(2)
            .unwrap()
            .add(&TruncSeries::var(&ring, "x2", 4))
            .unwrap();
        assert!(symmetric_expand(&p, 2).is_err());
    }

    #[test]
    fn total_chern_series_expands_to_sigmas() {
        // f = 1 + z x over Z[z]: prod f(x_i) = 1 + s1 z + s2 z^2.
        let ring = GradedRing::polynomial(BaseRing::Integers, &[("z", 2)]).unwrap();
        let z = RingElement::generator(&ring, "z").unwrap();
        let f = TruncSeries::one(&ring, &["x"], 6)
            .add(&TruncSeries::var(&ring, "x", 6).mul_element(&z).unwrap())
            .unwrap();
        let class = ExpClass::new(f).unwrap();
        let prod = class_on_bundle(&class, &BundleData::standard_roots(2)).unwrap();
        let g = symmetric_expand(&prod, 2).unwrap();
        assert_eq!(g.coeff(&[1, 0]), z);
        assert_eq!(g.coeff(&[0, 1]), z.mul(&z).unwrap());
        assert!(g.coeff(&[0, 0]).is_one());
    }

    #[test]
    fn class_on_chern_classes_gives_total_chern() {
        // Formal class symbols c1, c2 adjoined to Z[z].
        let ring = GradedRing::polynomial(BaseRing::Integers, &[("z", 2)]).unwrap();
        let ext = ring.extend(&[("c1", 2), ("c2", 4)]).unwrap();
        let z = RingElement::generator(&ring, "z").unwrap();
        let f = TruncSeries::one(&ring, &["x"], 6)
            .add(&TruncSeries::var(&ring, "x", 6).mul_element(&z).unwrap())
            .unwrap();
        let class = ExpClass::new(f).unwrap();
        let c1 = RingElement::generator(&ext, "c1").unwrap();
        let c2 = RingElement::generator(&ext, "c2").unwrap();
        let v = BundleData::ChernClasses(vec![c1.clone(), c2.clone()]);
        let got = class_on_bundle(&class, &v).unwrap().constant_term();
        let zc = z.embed_into(&ext).unwrap();
        let expect = RingElement::one(&ext)
            .add(&zc.mul(&c1).unwrap())
            .unwrap()
            .add(&zc.pow(2).mul(&c2).unwrap())
            .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn trivial_and_unit_classes() {
        let ring = GradedRing::rationals();
        let one_class = ExpClass::one(&ring, 5);
        let v = BundleData::standard_roots(3);
        assert!(class_on_bundle(&one_class, &v).unwrap().is_one_to(5));
        // Trivial bundle: all classes zero.
        let zero = RingElement::zero(&ring);
        let trivial = BundleData::ChernClasses(vec![zero.clone(), zero.clone(), zero]);
        let todd = ExpClass::todd(5).unwrap();
        assert!(class_on_bundle(&todd, &trivial)
            .unwrap()
            .constant_term()
            .is_one());
        // Rank zero: the empty product.
        let empty = BundleData::standard_roots(0);
        assert!(class_on_bundle(&todd, &empty).unwrap().is_one_to(5));
    }

    #[test]
    fn exponential_property_on_root_concatenation() {
        let law = FglKind::Multiplicative.build(6).unwrap();
        let q = hirzebruch_series(&law).unwrap();
        let v = BundleData::roots(&["a1", "a2"]);
        let w = BundleData::roots(&["b1"]);
        let vw = BundleData::roots(&["a1", "a2", "b1"]);
        let lhs = class_on_bundle(&q, &vw).unwrap();
        let rhs = class_on_bundle(&q, &v)
            .unwrap()
            .mul(&class_on_bundle(&q, &w).unwrap())
            .unwrap();
        assert!(lhs.eq_to(&rhs, 5).unwrap());
    }

    #[test]
    fn orientation_quotients() {
        let ring = GradedRing::rationals();
        let x = TruncSeries::var(&ring, "x", 6);
        assert!(orientation_quotient(&x).unwrap().series().is_one_to(5));

        let g = x.add(&x.pow(2).unwrap()).unwrap();
        let q = orientation_quotient(&g).unwrap();
        assert_eq!(q.series().coeff1(1), RingElement::one(&ring));
        assert_eq!(q.series().num_terms(), 2);

        // g = log of the multiplicative law: quotient is 1 - u x/2 + u^2 x^2/3 - ...
        let law = FglKind::Multiplicative.build(6).unwrap();
        let log = law.log().unwrap();
        let ql = orientation_quotient(&log).unwrap();
        let u = RingElement::generator(law.ring(), "u").unwrap();
        let expect1 =
            u.mul_scalar(&Scalar::fraction(BaseRing::Rationals, (-1).into(), 2.into()).unwrap());
        let expect2 = u
            .pow(2)
            .mul_scalar(&Scalar::fraction(BaseRing::Rationals, 1.into(), 3.into()).unwrap());
        assert_eq!(ql.series().coeff1(1), expect1);
        assert_eq!(ql.series().coeff1(2), expect2);
    }

    #[test]
    fn hirzebruch_series_of_builtins() {
        let add = FglKind::Additive.build(8).unwrap();
        assert!(hirzebruch_series(&add).unwrap().series().is_one_to(7));

        let mult = FglKind::Multiplicative.build(8).unwrap();
        let q = hirzebruch_series(&mult).unwrap();
        let u = RingElement::generator(mult.ring(), "u").unwrap();
        // u x/(e^{u x} - 1) = 1 - u x/2 + u^2 x^2/12 - ...
        assert_eq!(
            q.series().coeff1(1),
            u.mul_scalar(&Scalar::fraction(BaseRing::Rationals, (-1).into(), 2.into()).unwrap())
        );
        assert_eq!(
            q.series().coeff1(2),
            u.pow(2)
                .mul_scalar(&Scalar::fraction(BaseRing::Rationals, 1.into(), 12.into()).unwrap())
        );

        // exp = x - m1 x^2 + ..., so x/exp(x) = 1 + m1 x + ...
        let univ = FglKind::UniversalRational(3).build(6).unwrap();
        let qu = hirzebruch_series(&univ).unwrap();
        let m1 = RingElement::generator(univ.ring(), "m1").unwrap();
        assert!(qu.series().constant_term().is_one());
        assert_eq!(qu.series().coeff1(1), m1);
    }

    #[test]
    fn genus_of_projective_spaces() {
        let todd = ExpClass::todd(8).unwrap();
        for n in 0..=6u32 {
            let g = genus_cpn(&todd, n).unwrap();
            assert!(g.is_one(), "Todd genus of CP^{} = {}", n, g);
        }
        let l = ExpClass::l_genus(6).unwrap();
        assert!(genus_cpn(&l, 2).unwrap().is_one());
        // Signature of an odd projective space vanishes.
        assert!(genus_cpn(&l, 1).unwrap().is_zero());

        let one = ExpClass::one(&GradedRing::rationals(), 8);
        for n in 1..=6u32 {
            assert!(genus_cpn(&one, n).unwrap().is_zero());
        }
        assert!(genus_cpn(&one, 0).unwrap().is_one());

        // Too little precision is a loud error.
        let short = ExpClass::todd(3).unwrap();
        assert!(matches!(
            genus_cpn(&short, 5),
            Err(crate::error::Error::Precision(_))
        ));
    }

    #[test]
    fn euler_twist_examples() {
        let add = FglKind::Additive.build(6).unwrap();
        let one_root = BundleData::roots(&["x1"]);
        let e = euler_of_twist(&add, &one_root, "t").unwrap();
        assert_eq!(e.coeff(&[1, 0]), RingElement::one(add.ring()));
        assert_eq!(e.coeff(&[0, 1]), RingElement::one(add.ring()));
        assert_eq!(e.num_terms(), 2);

        let mult = FglKind::Multiplicative.build(6).unwrap();
        let two_roots = BundleData::roots(&["x1", "x2"]);
        let e2 = euler_of_twist(&mult, &two_roots, "t").unwrap();
        // (x1 + t + u x1 t)(x2 + t + u x2 t), spot-checked.
        let u = RingElement::generator(mult.ring(), "u").unwrap();
        assert_eq!(e2.coeff(&[1, 1, 0]), RingElement::one(mult.ring()));
        assert_eq!(e2.coeff(&[0, 0, 2]), RingElement::one(mult.ring()));
        assert_eq!(e2.coeff(&[1, 1, 2]), u.mul(&u).unwrap());

        let empty = BundleData::standard_roots(0);
        assert!(euler_of_twist(&add, &empty, "t").unwrap().is_one_to(6));
    }

    #[test]
    fn roots_and_classes_models_agree() {
        // Evaluate on roots, rewrite through sigmas, substitute back.
        let law = FglKind::Multiplicative.build(6).unwrap();
        let q = hirzebruch_series(&law).unwrap();
        let n = 3;
        let v = BundleData::standard_roots(n);
        let direct = class_on_bundle(&q, &v).unwrap();
        let g = symmetric_expand(&direct, n).unwrap();
        let x_vars: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        let back = sigma_back_substitute(&g, &x_vars).unwrap();
        assert!(back.eq_to(&direct, 6).unwrap());
    }
}
