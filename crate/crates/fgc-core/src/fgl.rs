//! Formal group laws as verified data.
//!
//! A [`FormalGroupLaw`] is a two-variable truncated series `F(x, y)` over
//! a graded ring together with the order to which its axioms have been
//! checked. The built-in laws are the additive and multiplicative ones,
//! the rational universal law built from a generic logarithm, and the
//! Jacobi-quartic addition law over Q[delta, eps].
//!
//! Sign convention: the multiplicative law is `F = x + y + u*x*y`, making
//! the coefficient of `x*y` equal to `+u`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{GradedRing, RingElement};
use crate::scalar::{BaseRing, Scalar};
use crate::series::TruncSeries;

pub const FGL_X: &str = "x";
pub const FGL_Y: &str = "y";

/// Default order for the (cubic-cost) associativity check at construction.
pub const DEFAULT_VERIFY_ORDER: u32 = 8;

/// Guard against runaway truncation requests.
pub const MAX_ORDER: u32 = 64;

/// Selector for the built-in laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    Multiplicative,
    /// Rational universal law with generators `m1..m<k>` in the logarithm.
    UniversalRational(u32),
    JacobiQuartic,
    /// `x + y + x^2`: deliberately fails unitality, for error-path tests.
    BrokenExample,
}

impl FglKind {
    pub fn name(&self) -> String {
        match self {
            FglKind::Additive => "additive".into(),
            FglKind::Multiplicative => "multiplicative".into(),
            FglKind::UniversalRational(k) => format!("universal_rational({})", k),
            FglKind::JacobiQuartic => "jacobi_quartic".into(),
            FglKind::BrokenExample => "broken-example".into(),
        }
    }

    /// Parses a CLI-style selector; `gens` feeds the universal law.
    pub fn from_selector(name: &str, gens: u32) -> Result<FglKind> {
        match name {
            "additive" => Ok(FglKind::Additive),
            "multiplicative" => Ok(FglKind::Multiplicative),
            "universal_rational" | "universal-rational" => {
                if gens == 0 {
                    return Err(Error::Invalid(
                        "universal_rational needs --gens >= 1".into(),
                    ));
                }
                Ok(FglKind::UniversalRational(gens))
            }
            "jacobi_quartic" | "jacobi-quartic" => Ok(FglKind::JacobiQuartic),
            "broken-example" | "broken_example" => Ok(FglKind::BrokenExample),
            other => Err(Error::Invalid(format!("unknown law `{}`", other))),
        }
    }

    /// Builds the law at truncation order `trunc` and verifies it to
    /// `min(trunc, DEFAULT_VERIFY_ORDER)`.
    pub fn build(&self, trunc: u32) -> Result<FormalGroupLaw> {
        self.build_boxed(trunc, trunc, trunc)
    }

    /// Builds the law with per-variable degree caps on (x, y). The result
    /// is exact on the box `{total <= trunc, deg_x <= x_cap, deg_y <= y_cap}`;
    /// callers that only consume such a box (Tate-window computations)
    /// avoid filling the full simplex.
    pub fn build_boxed(&self, trunc: u32, x_cap: u32, y_cap: u32) -> Result<FormalGroupLaw> {
        if trunc == 0 || trunc > MAX_ORDER {
            return Err(Error::Invalid(format!(
                "truncation order {} out of range 1..={}",
                trunc, MAX_ORDER
            )));
        }
        let series = match self {
            FglKind::Additive => {
                let ring = GradedRing::rationals();
                TruncSeries::var(&ring, FGL_X, trunc)
                    .add(&TruncSeries::var(&ring, FGL_Y, trunc))?
            }
            FglKind::Multiplicative => {
                let ring = GradedRing::polynomial(BaseRing::Rationals, &[("u", 2)])?;
                let u = RingElement::generator(&ring, "u")?;
                let x = TruncSeries::var(&ring, FGL_X, trunc);
                let y = TruncSeries::var(&ring, FGL_Y, trunc);
                x.add(&y)?.add(&x.mul(&y)?.mul_element(&u)?)?
            }
            FglKind::BrokenExample => {
                let ring = GradedRing::rationals();
                let x = TruncSeries::var(&ring, FGL_X, trunc);
                let y = TruncSeries::var(&ring, FGL_Y, trunc);
                x.add(&y)?.add(&x.mul(&x)?)?
            }
            FglKind::UniversalRational(k) => {
                let gens: Vec<(String, i64)> = (1..=*k)
                    .map(|j| (format!("m{}", j), 2 * j as i64))
                    .collect();
                let gen_refs: Vec<(&str, i64)> =
                    gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
                let ring = GradedRing::polynomial(BaseRing::Rationals, &gen_refs)?;
                let log = Self::generic_log(&ring, *k, trunc)?;
                let exp = log.reversion()?;
                Self::law_from_log_exp(&log, &exp, trunc, x_cap, y_cap)?
            }
            FglKind::JacobiQuartic => {
                let ring =
                    GradedRing::polynomial(BaseRing::Rationals, &[("delta", 4), ("eps", 8)])?;
                Self::jacobi_quartic_series(&ring, trunc, x_cap, y_cap)?
            }
        };
        let mut law = FormalGroupLaw {
            kind: Some(*self),
            name: self.name(),
            series,
            verified_to: 0,
        };
        if *self != FglKind::BrokenExample {
            let order = law.max_verifiable().min(DEFAULT_VERIFY_ORDER);
            let report = law.verify(order)?;
            if !report.passed() {
                return Err(Error::Invalid(format!(
                    "construction of `{}` failed verification: {:?}",
                    law.name, report.failures
                )));
            }
        }
        Ok(law)
    }

    /// The generic logarithm `x + m_1 x^2 + ... + m_k x^{k+1}`.
    fn generic_log(ring: &Arc<GradedRing>, k: u32, trunc: u32) -> Result<TruncSeries> {
        let mut terms = vec![(vec![1u32], RingElement::one(ring))];
        for j in 1..=k {
            if j + 1 > trunc {
                break;
            }
            let m = RingElement::generator(ring, &format!("m{}", j))?;
            terms.push((vec![j + 1], m));
        }
        TruncSeries::from_terms(ring, &[FGL_X], trunc, terms)
    }

    fn law_from_log_exp(
        log: &TruncSeries,
        exp: &TruncSeries,
        trunc: u32,
        x_cap: u32,
        y_cap: u32,
    ) -> Result<TruncSeries> {
        let log_x = log.clone();
        let mut ren = BTreeMap::new();
        ren.insert(FGL_X.to_string(), FGL_Y.to_string());
        let log_y = log.renamed(&ren)?;
        let sum = log_x.add(&log_y)?;
        let mut bind = BTreeMap::new();
        bind.insert(FGL_X.to_string(), sum);
        let mut caps = BTreeMap::new();
        caps.insert(FGL_X.to_string(), x_cap);
        caps.insert(FGL_Y.to_string(), y_cap);
        exp.substitute_in_box(&bind, trunc, &caps)
    }

    fn jacobi_quartic_series(
        ring: &Arc<GradedRing>,
        trunc: u32,
        x_cap: u32,
        y_cap: u32,
    ) -> Result<TruncSeries> {
        let delta = RingElement::generator(ring, "delta")?;
        let eps = RingElement::generator(ring, "eps")?;
        // R(v) = sqrt(1 - 2 delta v^2 + eps v^4)
        let radicand = |v: &str| -> Result<TruncSeries> {
            let one = TruncSeries::one(ring, &[v], trunc);
            let v2 = TruncSeries::var(ring, v, trunc).pow(2)?;
            let v4 = v2.mul(&v2)?;
            one.sub(
                &v2.mul_element(&delta)?
                    .mul_scalar(&Scalar::from_i64(BaseRing::Rationals, 2)),
            )?
            .add(&v4.mul_element(&eps)?)
        };
        let rx = radicand(FGL_X)?.sqrt()?;
        let ry = radicand(FGL_Y)?.sqrt()?;
        let x = TruncSeries::var(ring, FGL_X, trunc);
        let y = TruncSeries::var(ring, FGL_Y, trunc);
        let mut caps = BTreeMap::new();
        caps.insert(FGL_X.to_string(), x_cap);
        caps.insert(FGL_Y.to_string(), y_cap);
        let numerator = x
            .mul_in_box(&ry, trunc, &caps)?
            .add(&y.mul_in_box(&rx, trunc, &caps)?)?;
        // 1 - eps x^2 y^2 has constant term 1.
        let x2y2 = x.pow(2)?.mul_in_box(&y.pow(2)?, trunc, &caps)?;
        let denom = TruncSeries::one(ring, &[FGL_X, FGL_Y], trunc)
            .sub(&x2y2.mul_element(&eps)?)?;
        numerator.mul_in_box(&denom.invert()?, trunc, &caps)
    }
}

/// A formal group law with its verification state.
#[derive(Debug, Clone)]
pub struct FormalGroupLaw {
    kind: Option<FglKind>,
    name: String,
    series: TruncSeries,
    verified_to: u32,
}

/// Outcome of a verification pass; failures carry the first offending
/// coefficient in printable form.
#[derive(Debug, Clone)]
pub struct FglReport {
    pub order: u32,
    pub unital: bool,
    pub commutative: bool,
    /// Order up to which associativity held (equals `order` on success).
    pub associative_to: u32,
    pub homogeneous: bool,
    pub failures: Vec<String>,
}

impl FglReport {
    pub fn passed(&self) -> bool {
        self.unital && self.commutative && self.associative_to >= self.order && self.homogeneous
    }
}

impl FormalGroupLaw {
    /// Wraps an arbitrary two-variable series, unverified.
    pub fn from_series(name: &str, series: TruncSeries) -> Result<Self> {
        if series.vars() != [FGL_X.to_string(), FGL_Y.to_string()] {
            return Err(Error::Invalid(format!(
                "a formal group law uses variables ({}, {})",
                FGL_X, FGL_Y
            )));
        }
        Ok(FormalGroupLaw {
            kind: None,
            name: name.to_string(),
            series,
            verified_to: 0,
        })
    }

    pub fn kind(&self) -> Option<FglKind> {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn verified_to(&self) -> u32 {
        self.verified_to
    }

    /// Coefficient `a_{ij}` of `x^i y^j`.
    pub fn coefficient(&self, i: u32, j: u32) -> RingElement {
        self.series.coeff(&[i, j])
    }

    /// Largest order verification can reach given truncation and caps.
    pub fn max_verifiable(&self) -> u32 {
        match self.series.caps() {
            None => self.series.trunc(),
            Some(caps) => caps.iter().fold(self.series.trunc(), |acc, &c| acc.min(c)),
        }
    }

    /// `F(f, g)`: the group-law sum of two series with zero constant term.
    pub fn apply(&self, f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
        let mut bind = BTreeMap::new();
        bind.insert(FGL_X.to_string(), f.clone());
        bind.insert(FGL_Y.to_string(), g.clone());
        self.series.substitute(&bind)
    }

    /// `F(f, g)` filtered to a requested box (performance variant).
    pub fn apply_in_box(
        &self,
        f: &TruncSeries,
        g: &TruncSeries,
        trunc: u32,
        caps: &BTreeMap<String, u32>,
    ) -> Result<TruncSeries> {
        let mut bind = BTreeMap::new();
        bind.insert(FGL_X.to_string(), f.clone());
        bind.insert(FGL_Y.to_string(), g.clone());
        self.series.substitute_in_box(&bind, trunc, caps)
    }

    /// The formal inverse `i(x)` with `F(x, i(x)) = 0`; starts at `-x`.
    pub fn formal_inverse(&self) -> Result<TruncSeries> {
        let trunc = self.max_verifiable();
        let f = self.series.uncapped_to(trunc)?;
        let ring = self.ring();
        let x = TruncSeries::var(ring, FGL_X, trunc);
        let mut inv = x.neg();
        for d in 2..=trunc {
            let mut bind = BTreeMap::new();
            bind.insert(FGL_Y.to_string(), inv.clone());
            let r = f.substitute(&bind)?;
            // r = F(x, i(x)) so far; kill the lowest surviving term.
            let c = r.coeff(&[d]);
            if c.is_zero() {
                continue;
            }
            let corr = TruncSeries::from_terms(ring, &[FGL_X], trunc, [(vec![d], c.neg())])?;
            inv = inv.add(&corr)?;
        }
        Ok(inv)
    }

    /// The n-series `[n](x)`.
    pub fn n_series(&self, n: i64) -> Result<TruncSeries> {
        let trunc = self.max_verifiable();
        let ring = self.ring();
        let x = TruncSeries::var(ring, FGL_X, trunc);
        if n == 0 {
            return Ok(TruncSeries::zero(ring, &[FGL_X], trunc));
        }
        let mut acc = x.clone();
        for _ in 1..n.unsigned_abs() {
            acc = self.apply(&acc, &x)?;
        }
        if n < 0 {
            let inv = self.formal_inverse()?;
            let mut bind = BTreeMap::new();
            bind.insert(FGL_X.to_string(), inv);
            acc = acc.substitute(&bind)?;
        }
        Ok(acc)
    }

    /// The formal logarithm, via the invariant differential:
    /// `log'(x) = (dF/dy (x, 0))^{-1}`, integrated termwise.
    pub fn log(&self) -> Result<TruncSeries> {
        if !self.ring().is_rational() {
            return Err(Error::Invalid(
                "the formal logarithm needs a Q-algebra coefficient ring".into(),
            ));
        }
        let omega_inv = self
            .series
            .derivative(FGL_Y)?
            .var_to_zero(FGL_Y)
            .drop_var(FGL_Y)?;
        let omega = omega_inv.invert()?;
        omega.integral(FGL_X)
    }

    /// The formal exponential (compositional inverse of the logarithm).
    pub fn exp(&self) -> Result<TruncSeries> {
        self.log()?.reversion()
    }

    /// The same law over a larger coefficient ring (containing this
    /// ring's generators by name). Verification state carries over:
    /// embeddings preserve all coefficient identities.
    pub fn over_ring(&self, target: &Arc<GradedRing>) -> Result<FormalGroupLaw> {
        Ok(FormalGroupLaw {
            kind: self.kind,
            name: self.name.clone(),
            series: self.series.embed_into_ring(target)?,
            verified_to: self.verified_to,
        })
    }

    /// Checks unitality, commutativity, associativity and homogeneity up
    /// to `order`; on success raises `verified_to`.
    pub fn verify(&mut self, order: u32) -> Result<FglReport> {
        let report = self.verify_readonly(order)?;
        if report.passed() {
            self.verified_to = self.verified_to.max(order);
        }
        Ok(report)
    }

    /// Verification without the metadata update.
    pub fn verify_readonly(&self, order: u32) -> Result<FglReport> {
        if order > self.series.trunc() {
            return Err(Error::Precision(format!(
                "cannot verify to order {}: the law is only known to order {}",
                order,
                self.series.trunc()
            )));
        }
        let f = self.series.uncapped_to(order)?;
        let ring = self.ring();
        let mut failures = Vec::new();

        // Unitality: F(x, 0) = x and F(0, y) = y.
        let x = TruncSeries::var(ring, FGL_X, order);
        let y = TruncSeries::var(ring, FGL_Y, order);
        let fx0 = f.var_to_zero(FGL_Y).drop_var(FGL_Y)?;
        let f0y = f.var_to_zero(FGL_X).drop_var(FGL_X)?;
        let mut unital = true;
        if let Some((m, got, want)) = fx0.first_difference(&x, order)? {
            unital = false;
            failures.push(format!(
                "unitality: F(x,0) has coefficient {} at {} (expected {})",
                got,
                fx0.monomial_string(&m),
                want
            ));
        }
        if let Some((m, got, want)) = f0y.first_difference(&y, order)? {
            unital = false;
            failures.push(format!(
                "unitality: F(0,y) has coefficient {} at {} (expected {})",
                got,
                f0y.monomial_string(&m),
                want
            ));
        }

        // Commutativity: F(x, y) = F(y, x).
        let swapped = f.permuted(&[1, 0]);
        let mut commutative = true;
        if let Some((m, got, want)) = f.first_difference(&swapped, order)? {
            commutative = false;
            failures.push(format!(
                "commutativity: coefficient {} at {} vs {}",
                got,
                f.monomial_string(&m),
                want
            ));
        }

        // Associativity: F(F(x,y), z) = F(x, F(y,z)), coefficientwise.
        let z = TruncSeries::var(ring, "z", order);
        let mut ren = BTreeMap::new();
        ren.insert(FGL_X.to_string(), FGL_Y.to_string());
        ren.insert(FGL_Y.to_string(), "z".to_string());
        let f_yz = f.renamed(&ren)?;
        let mut bind_l = BTreeMap::new();
        bind_l.insert(FGL_X.to_string(), f.clone());
        bind_l.insert(FGL_Y.to_string(), z.clone());
        let lhs = f.substitute(&bind_l)?;
        let mut bind_r = BTreeMap::new();
        bind_r.insert(FGL_X.to_string(), x.clone());
        bind_r.insert(FGL_Y.to_string(), f_yz);
        let rhs = f.substitute(&bind_r)?;
        let mut associative_to = order;
        if let Some((m, got, want)) = lhs.first_difference(&rhs, order)? {
            let total: u32 = m.iter().sum();
            associative_to = total.saturating_sub(1);
            failures.push(format!(
                "associativity: coefficient {} at {} vs {}",
                got,
                lhs.monomial_string(&m),
                want
            ));
        }

        // Homogeneity: a_ij sits in degree 2(i + j - 1).
        let mut homogeneous = true;
        for (m, c) in f.terms() {
            let (i, j) = (m.0[0], m.0[1]);
            let expected = 2 * (i as i64 + j as i64 - 1);
            if !c.homogeneous_degree().matches(expected) {
                homogeneous = false;
                failures.push(format!(
                    "homogeneity: a_({},{}) = {} is not of degree {}",
                    i, j, c, expected
                ));
                break;
            }
        }

        Ok(FglReport {
            order,
            unital,
            commutative,
            associative_to,
            homogeneous,
            failures,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_is_x_plus_y() {
        let law = FglKind::Additive.build(10).unwrap();
        assert!(law.coefficient(1, 0).is_one());
        assert!(law.coefficient(0, 1).is_one());
        assert!(law.coefficient(1, 1).is_zero());
        assert_eq!(law.verified_to(), 8);
    }

    #[test]
    fn multiplicative_coefficients() {
        let law = FglKind::Multiplicative.build(8).unwrap();
        let u = RingElement::generator(law.ring(), "u").unwrap();
        assert_eq!(law.coefficient(1, 1), u);
        for j in 2..=6 {
            assert!(law.coefficient(1, j).is_zero(), "a_1{} should vanish", j);
        }
    }

    #[test]
    fn universal_rational_low_order() {
        let law = FglKind::UniversalRational(2).build(3).unwrap();
        let ring = law.ring();
        let m1 = RingElement::generator(ring, "m1").unwrap();
        let minus_2m1 = m1.mul_scalar(&Scalar::from_i64(BaseRing::Rationals, -2));
        assert_eq!(law.coefficient(1, 1), minus_2m1);
        assert!(law.coefficient(2, 0).is_zero());
    }

    #[test]
    fn multiplicative_log_is_alternating() {
        let law = FglKind::Multiplicative.build(6).unwrap();
        let log = law.log().unwrap();
        let ring = law.ring();
        let u = RingElement::generator(ring, "u").unwrap();
        // log = x - u x^2/2 + u^2 x^3/3 - ...
        for k in 2..=5u32 {
            let sign: i64 = if k % 2 == 0 { -1 } else { 1 };
            let expect = u.pow(k - 1).mul_scalar(
                &Scalar::fraction(BaseRing::Rationals, sign.into(), (k as i64).into()).unwrap(),
            );
            assert_eq!(log.coeff1(k), expect, "log coefficient at x^{}", k);
        }
        // log(F(x,y)) = log(x) + log(y)
        let x = TruncSeries::var(ring, FGL_X, 6);
        let y = TruncSeries::var(ring, FGL_Y, 6);
        let fxy = law.apply(&x, &y).unwrap();
        let mut bind = BTreeMap::new();
        bind.insert(FGL_X.to_string(), fxy);
        let lhs = log.substitute(&bind).unwrap();
        let mut ren = BTreeMap::new();
        ren.insert(FGL_X.to_string(), FGL_Y.to_string());
        let rhs = log.add(&log.renamed(&ren).unwrap()).unwrap();
        assert!(lhs.eq_to(&rhs, 6).unwrap());
    }

    #[test]
    fn exp_log_round_trip() {
        for kind in [FglKind::Multiplicative, FglKind::UniversalRational(3)] {
            let law = kind.build(7).unwrap();
            let log = law.log().unwrap();
            let exp = law.exp().unwrap();
            let mut bind = BTreeMap::new();
            bind.insert(FGL_X.to_string(), exp.clone());
            let x = TruncSeries::var(law.ring(), FGL_X, 7);
            assert!(log.substitute(&bind).unwrap().eq_to(&x, 7).unwrap());
        }
    }

    #[test]
    fn universal_log_is_the_generic_one() {
        let law = FglKind::UniversalRational(3).build(6).unwrap();
        let log = law.log().unwrap();
        let ring = law.ring();
        for j in 1..=3u32 {
            let m = RingElement::generator(ring, &format!("m{}", j)).unwrap();
            assert_eq!(log.coeff1(j + 1), m, "log coefficient at x^{}", j + 1);
        }
    }

    #[test]
    fn formal_inverse_of_multiplicative() {
        let law = FglKind::Multiplicative.build(6).unwrap();
        let inv = law.formal_inverse().unwrap();
        let ring = law.ring();
        let u = RingElement::generator(ring, "u").unwrap();
        // i(x) = -x + u x^2 - u^2 x^3 + ...
        assert_eq!(inv.coeff1(1), RingElement::from_i64(ring, -1));
        assert_eq!(inv.coeff1(2), u);
        assert_eq!(inv.coeff1(3), u.mul(&u).unwrap().neg());
        // F(x, i(x)) = 0
        let x = TruncSeries::var(ring, FGL_X, 6);
        let r = law.apply(&x, &inv).unwrap();
        assert!(r.is_zero_to(6));
    }

    #[test]
    fn n_series_values() {
        let law = FglKind::Multiplicative.build(6).unwrap();
        let ring = law.ring();
        let u = RingElement::generator(ring, "u").unwrap();
        let two = law.n_series(2).unwrap();
        assert_eq!(two.coeff1(1), RingElement::from_i64(ring, 2));
        assert_eq!(two.coeff1(2), u);
        assert!(law.n_series(0).unwrap().is_zero());
        let minus_one = law.n_series(-1).unwrap();
        assert!(minus_one.eq_to(&law.formal_inverse().unwrap(), 6).unwrap());
        // [m+n] = F([m], [n])
        let m3 = law.n_series(3).unwrap();
        let m5 = law.n_series(5).unwrap();
        let sum = law.apply(&m3, &law.n_series(2).unwrap()).unwrap();
        assert!(sum.eq_to(&m5, 6).unwrap());
    }

    #[test]
    fn broken_law_fails_unitality_with_located_coefficient() {
        let mut law = FglKind::BrokenExample.build(4).unwrap();
        let report = law.verify(4).unwrap();
        assert!(!report.unital);
        assert!(!report.passed());
        assert!(
            report.failures.iter().any(|f| f.contains("x^2")),
            "failure should locate x^2: {:?}",
            report.failures
        );
        assert_eq!(law.verified_to(), 0);
    }

    #[test]
    fn jacobi_quartic_verifies() {
        let mut law = FglKind::JacobiQuartic.build(7).unwrap();
        let report = law.verify(7).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(law.coefficient(1, 1).is_zero());
        let delta = RingElement::generator(law.ring(), "delta").unwrap();
        assert_eq!(law.coefficient(2, 1), delta.neg());
        assert_eq!(law.coefficient(1, 2), delta.neg());
        assert!(law.coefficient(3, 1).is_zero());
    }

    #[test]
    fn universal_specializes_to_multiplicative() {
        // m_k |-> (-u)^k / (k+1) turns the generic logarithm into
        // log(1 + u x)/u, so the universal law specializes to the
        // multiplicative one. Both sides computed independently.
        // The law built from a k-term generic logarithm only agrees with
        // the full universal one through degree k + 1, so pick k = D - 1.
        let trunc = 6u32;
        let k = trunc - 1;
        let univ = FglKind::UniversalRational(k).build(trunc).unwrap();
        let mult = FglKind::Multiplicative.build(trunc).unwrap();
        let target = mult.ring();
        let u = RingElement::generator(target, "u").unwrap();
        let mut images = BTreeMap::new();
        for j in 1..=k {
            let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
            let c = Scalar::fraction(BaseRing::Rationals, sign.into(), ((j + 1) as i64).into())
                .unwrap();
            images.insert(format!("m{}", j), u.pow(j).mul_scalar(&c));
        }
        for (m, c) in univ.series().terms() {
            let image = c.substitute_generators(target, &images).unwrap();
            assert_eq!(
                image,
                mult.series().coeff(&m.0),
                "specialized a_({},{})",
                m.0[0],
                m.0[1]
            );
        }
    }

    #[test]
    fn homogeneity_of_builtins() {
        for kind in [
            FglKind::Multiplicative,
            FglKind::UniversalRational(3),
            FglKind::JacobiQuartic,
        ] {
            let law = kind.build(6).unwrap();
            let report = law.verify_readonly(6).unwrap();
            assert!(report.homogeneous, "{} homogeneity", law.name());
        }
    }
}
