//! Laurent objects in a distinguished degree-2 variable `t`.
//!
//! A [`TateSeries`] models an element of `R_*((t))[[x_1,...,x_n]]` by a
//! window `[low, high]` of t-exponents and, for each exponent in the
//! window, a truncated power series body in the x-variables. Coefficients
//! strictly below `low` are exactly zero (every construction path
//! establishes a valuation floor), while exponents above `high` are
//! unknown: `high` is a precision horizon, and operations shrink it the
//! same way truncation orders shrink for [`TruncSeries`].
//!
//! Objects that are exact polynomials in `t` (the variable `t` itself,
//! a constant, an explicitly constructed finite sum) carry an unbounded
//! horizon, so precision is only lost where it genuinely is limited.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{same_ring, GradedRing, RingElement};
use crate::series::TruncSeries;

/// Sentinel for "exact to every t-order".
pub const T_INF: i64 = i64::MAX / 4;

/// A located coefficient mismatch: (t-exponent, x-monomial, lhs, rhs).
pub type TateDifference = (i64, Vec<u32>, RingElement, RingElement);

fn wadd(a: i64, b: i64) -> i64 {
    if a >= T_INF || b >= T_INF {
        T_INF
    } else if a <= -T_INF || b <= -T_INF {
        -T_INF
    } else {
        a + b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateSeries {
    ring: Arc<GradedRing>,
    x_vars: Vec<String>,
    t_var: String,
    low: i64,
    high: i64,
    x_trunc: u32,
    bodies: BTreeMap<i64, TruncSeries>,
}

impl TateSeries {
    /// Builds a Tate series from explicit bodies. Bodies are aligned to
    /// `x_vars`, truncated to `x_trunc`, and zero bottom bodies are
    /// trimmed away (raising `low`).
    pub fn new(
        ring: &Arc<GradedRing>,
        x_vars: &[&str],
        t_var: &str,
        low: i64,
        high: i64,
        x_trunc: u32,
        bodies: BTreeMap<i64, TruncSeries>,
    ) -> Result<Self> {
        if low > high {
            return Err(Error::Invalid(format!(
                "empty t-window [{}, {}]",
                low, high
            )));
        }
        let vars: Vec<String> = x_vars.iter().map(|s| s.to_string()).collect();
        if vars.iter().any(|v| v == t_var) {
            return Err(Error::Invalid(format!(
                "`{}` cannot be both the Tate variable and an x-variable",
                t_var
            )));
        }
        let mut out = TateSeries {
            ring: Arc::clone(ring),
            x_vars: vars,
            t_var: t_var.to_string(),
            low,
            high,
            x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, body) in bodies {
            if e < low || e > high {
                return Err(Error::Invalid(format!(
                    "body at t^{} lies outside the window [{}, {}]",
                    e, low, high
                )));
            }
            same_ring(body.ring(), ring)?;
            out.insert_body(e, body)?;
        }
        out.normalize();
        Ok(out)
    }

    fn insert_body(&mut self, e: i64, body: TruncSeries) -> Result<()> {
        let aligned = body.truncated(self.x_trunc).aligned_to(&self.x_vars);
        if aligned.caps().is_some() {
            return Err(Error::Precision(format!(
                "body at t^{} is not exact on the full x-box of order {}",
                e, self.x_trunc
            )));
        }
        if !aligned.is_zero() {
            self.bodies.insert(e, aligned);
        }
        Ok(())
    }

    fn normalize(&mut self) {
        match self.bodies.keys().next() {
            Some(&first) => {
                if self.low < first {
                    self.low = first;
                }
            }
            None => {
                // Known-zero object within the horizon.
                self.low = wadd(self.high, 1).max(self.low);
            }
        }
    }

    pub fn zero(ring: &Arc<GradedRing>, x_vars: &[&str], t_var: &str, x_trunc: u32) -> Self {
        TateSeries {
            ring: Arc::clone(ring),
            x_vars: x_vars.iter().map(|s| s.to_string()).collect(),
            t_var: t_var.to_string(),
            low: T_INF,
            high: T_INF,
            x_trunc,
            bodies: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<GradedRing>, x_vars: &[&str], t_var: &str, x_trunc: u32) -> Self {
        let mut s = Self::zero(ring, x_vars, t_var, x_trunc);
        let vars: Vec<&str> = s.x_vars.iter().map(|v| v.as_str()).collect();
        s.bodies.insert(0, TruncSeries::one(ring, &vars, x_trunc));
        s.low = 0;
        s.high = T_INF;
        s
    }

    /// The exact monomial `t^k`.
    pub fn t_power(
        ring: &Arc<GradedRing>,
        x_vars: &[&str],
        t_var: &str,
        k: i64,
        x_trunc: u32,
    ) -> Self {
        let mut s = Self::zero(ring, x_vars, t_var, x_trunc);
        let vars: Vec<&str> = s.x_vars.iter().map(|v| v.as_str()).collect();
        s.bodies.insert(k, TruncSeries::one(ring, &vars, x_trunc));
        s.low = k;
        s.high = T_INF;
        s
    }

    /// Reads a power series in the x-variables and `t` as a Tate object
    /// with window `[0, high]` (or exact in t when the caller knows the
    /// source is a complete polynomial). Fails when the source is not
    /// exact on the requested `(x_trunc, high)` box.
    pub fn from_poly(
        f: &TruncSeries,
        t_var: &str,
        x_trunc: u32,
        high: i64,
        exact_in_t: bool,
    ) -> Result<Self> {
        if high < 0 {
            return Err(Error::Invalid("negative window top".into()));
        }
        let x_vars: Vec<String> = f
            .vars()
            .iter()
            .filter(|v| v.as_str() != t_var)
            .cloned()
            .collect();
        let t_idx = f.vars().iter().position(|v| v == t_var);
        // Capacity: every (x-total <= x_trunc, t-exponent <= high) monomial
        // must lie inside f's sound box.
        if (f.trunc() as i64) < x_trunc as i64 + high {
            return Err(Error::Precision(format!(
                "series of order {} cannot provide x-order {} together with t-exponent {}",
                f.trunc(),
                x_trunc,
                high
            )));
        }
        if let Some(caps) = f.caps() {
            for (i, v) in f.vars().iter().enumerate() {
                let cap = caps[i] as i64;
                let need = if v == t_var { high } else { x_trunc as i64 };
                if cap < need {
                    return Err(Error::Precision(format!(
                        "variable `{}` capped at {} but order {} is required",
                        v, cap, need
                    )));
                }
            }
        }
        let mut split: BTreeMap<i64, Vec<(Vec<u32>, RingElement)>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let (e, xexps) = match t_idx {
                Some(ti) => {
                    let e = m.0[ti] as i64;
                    let mut xe = Vec::with_capacity(m.0.len() - 1);
                    for (j, &v) in m.0.iter().enumerate() {
                        if j != ti {
                            xe.push(v);
                        }
                    }
                    (e, xe)
                }
                None => (0, m.0.clone()),
            };
            if e > high || xexps.iter().sum::<u32>() > x_trunc {
                continue;
            }
            split.entry(e).or_default().push((xexps, c.clone()));
        }
        let ring = f.ring().clone();
        let var_refs: Vec<&str> = x_vars.iter().map(|s| s.as_str()).collect();
        let mut out = TateSeries {
            ring: ring.clone(),
            x_vars: x_vars.clone(),
            t_var: t_var.to_string(),
            low: 0,
            high: if exact_in_t { T_INF } else { high },
            x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, terms) in split {
            let body = TruncSeries::from_terms(&ring, &var_refs, x_trunc, terms)?;
            out.insert_body(e, body)?;
        }
        out.normalize();
        Ok(out)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    pub fn t_var(&self) -> &str {
        &self.t_var
    }

    /// Valuation floor: coefficients below this t-exponent are exact zeros.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Precision horizon; `T_INF` when the object is exact in t.
    pub fn high(&self) -> i64 {
        self.high
    }

    pub fn x_trunc(&self) -> u32 {
        self.x_trunc
    }

    pub fn bodies(&self) -> impl DoubleEndedIterator<Item = (&i64, &TruncSeries)> {
        self.bodies.iter()
    }

    pub fn body(&self, e: i64) -> TruncSeries {
        let vars: Vec<&str> = self.x_vars.iter().map(|v| v.as_str()).collect();
        self.bodies
            .get(&e)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero(&self.ring, &vars, self.x_trunc))
    }

    pub fn is_zero_known(&self) -> bool {
        self.bodies.is_empty()
    }

    fn merge_x_vars(&self, other: &TateSeries) -> Vec<String> {
        let mut vars = self.x_vars.clone();
        for v in &other.x_vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn check_compat(&self, other: &TateSeries) -> Result<()> {
        same_ring(&self.ring, &other.ring)?;
        if self.t_var != other.t_var {
            return Err(Error::Invalid(format!(
                "mismatched Tate variables `{}` and `{}`",
                self.t_var, other.t_var
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TateSeries) -> Result<TateSeries> {
        self.check_compat(other)?;
        let x_vars = self.merge_x_vars(other);
        let x_trunc = self.x_trunc.min(other.x_trunc);
        let low = self.low.min(other.low);
        let high = self.high.min(other.high);
        let var_refs: Vec<&str> = x_vars.iter().map(|s| s.as_str()).collect();
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: x_vars.clone(),
            t_var: self.t_var.clone(),
            low,
            high,
            x_trunc,
            bodies: BTreeMap::new(),
        };
        let mut exps: Vec<i64> = self
            .bodies
            .keys()
            .chain(other.bodies.keys())
            .cloned()
            .collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            if e > high {
                continue;
            }
            let a = self
                .bodies
                .get(&e)
                .cloned()
                .unwrap_or_else(|| TruncSeries::zero(&self.ring, &var_refs, x_trunc));
            let b = other
                .bodies
                .get(&e)
                .cloned()
                .unwrap_or_else(|| TruncSeries::zero(&self.ring, &var_refs, x_trunc));
            out.insert_body(e, a.add(&b)?)?;
        }
        out.normalize();
        Ok(out)
    }

    pub fn neg(&self) -> TateSeries {
        TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: self.x_vars.clone(),
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: self.bodies.iter().map(|(e, b)| (*e, b.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &TateSeries) -> Result<TateSeries> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TateSeries) -> Result<TateSeries> {
        self.check_compat(other)?;
        let x_vars = self.merge_x_vars(other);
        let x_trunc = self.x_trunc.min(other.x_trunc);
        if self.is_zero_known() || other.is_zero_known() {
            let refs: Vec<&str> = x_vars.iter().map(|s| s.as_str()).collect();
            let mut z = TateSeries::zero(&self.ring, &refs, &self.t_var, x_trunc);
            z.high = self.high.min(other.high);
            z.low = wadd(z.high, 1);
            return Ok(z);
        }
        // Valuations add; each horizon combines with the other operand's
        // valuation floor.
        let low = wadd(self.low, other.low);
        let high = wadd(self.high, other.low).min(wadd(self.low, other.high));
        let mut acc: BTreeMap<i64, TruncSeries> = BTreeMap::new();
        for (ea, ba) in &self.bodies {
            for (eb, bb) in &other.bodies {
                let e = wadd(*ea, *eb);
                if e > high {
                    continue;
                }
                let p = ba.mul(bb)?;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        let s = slot.get().add(&p)?;
                        *slot.get_mut() = s;
                    }
                }
            }
        }
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars,
            t_var: self.t_var.clone(),
            low,
            high,
            x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in acc {
            out.insert_body(e, b)?;
        }
        out.normalize();
        Ok(out)
    }

    /// Treats the stored bodies as complete polynomial data in t. Only
    /// for internal computations whose final window is re-derived from a
    /// finer (graded) dependence argument than the scalar horizon can
    /// express; the caller must truncate the result back to the
    /// justified region.
    pub(crate) fn as_exact_in_t(mut self) -> TateSeries {
        self.high = T_INF;
        self
    }

    /// Drops bodies above `high` and lowers the horizon to it.
    pub fn truncated_high(mut self, high: i64) -> TateSeries {
        self.bodies.retain(|e, _| *e <= high);
        self.high = self.high.min(high);
        self.normalize();
        self
    }

    /// Multiplies by `t^k` (shifts the window).
    pub fn shift_t(&self, k: i64) -> TateSeries {
        TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: self.x_vars.clone(),
            t_var: self.t_var.clone(),
            low: wadd(self.low, k),
            high: wadd(self.high, k),
            x_trunc: self.x_trunc,
            bodies: self
                .bodies
                .iter()
                .map(|(e, b)| (wadd(*e, k), b.clone()))
                .collect(),
        }
    }

    pub fn mul_element(&self, c: &RingElement) -> Result<TateSeries> {
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: self.x_vars.clone(),
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in &self.bodies {
            out.insert_body(*e, b.mul_element(c)?)?;
        }
        out.normalize();
        Ok(out)
    }

    /// The x-constant part as a Laurent series (no x-variables).
    pub fn x_constant_part(&self) -> TateSeries {
        self.x_coefficient(&vec![0; self.x_vars.len()])
    }

    /// Coefficient of a single x-monomial, as a Laurent series in t alone.
    pub fn x_coefficient(&self, exps: &[u32]) -> TateSeries {
        assert_eq!(exps.len(), self.x_vars.len());
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: Vec::new(),
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in &self.bodies {
            let c = b.coeff(exps);
            if !c.is_zero() {
                out.bodies
                    .insert(*e, TruncSeries::constant(&self.ring, &[], self.x_trunc, c));
            }
        }
        out.normalize();
        out
    }

    /// Leading (lowest t-exponent) constant coefficient, when any body is
    /// known nonzero.
    pub fn leading(&self) -> Option<(i64, RingElement)> {
        self.bodies
            .iter()
            .next()
            .map(|(e, b)| (*e, b.constant_term()))
    }

    /// Multiplicative inverse in `R((t))[[x_1,...,x_n]]`. The x-constant
    /// part must be a Laurent unit, i.e. its lowest known coefficient
    /// must be invertible in the coefficient ring. The horizon follows
    /// the sound scalar window arithmetic.
    pub fn invert(&self) -> Result<TateSeries> {
        self.invert_impl(false)
    }

    /// Inverse computed with horizon filtering suspended: every
    /// intermediate treats the stored data as complete, so no body that
    /// the input can justify is dropped mid-computation. The result
    /// claims completeness in t; callers must truncate it back to a
    /// window they can justify from the input's actual exactness (the
    /// scalar window model cannot express graded dependence).
    pub(crate) fn invert_complete(&self) -> Result<TateSeries> {
        self.invert_impl(true)
    }

    fn invert_impl(&self, suspend: bool) -> Result<TateSeries> {
        let c0 = self.x_constant_part();
        let v = match c0.bodies.keys().next() {
            Some(&v) => v,
            None => {
                return Err(Error::NotAUnit(
                    "x-constant part vanishes to the known t-precision".into(),
                ))
            }
        };
        let lead = c0.body(v).constant_term();
        let lead_inv = lead.unit_inverse().ok_or_else(|| {
            Error::NotAUnit(format!(
                "leading Laurent coefficient {} at t^{} is not a unit",
                lead, v
            ))
        })?;
        // Invert the Laurent scalar c0 = t^v (u_0 + u_1 t + ...) by the
        // standard recurrence, out to a span generous enough for every
        // downstream product.
        let span = if c0.high >= T_INF || suspend {
            let top = self.bodies.keys().next_back().cloned().unwrap_or(v);
            let stored = c0.bodies.keys().next_back().cloned().unwrap_or(v) - v;
            stored.max(top - v) + (self.x_trunc as i64 + 2) * v.abs().max(1) + 8
        } else {
            c0.high - v
        };
        let mut inv_coeffs: BTreeMap<i64, RingElement> = BTreeMap::new();
        inv_coeffs.insert(0, lead_inv.clone());
        for k in 1..=span {
            let mut s = RingElement::zero(&self.ring);
            for (j, w) in inv_coeffs.range(0..k) {
                let u = c0.body(v + (k - j)).constant_term();
                if u.is_zero() {
                    continue;
                }
                s = s.add(&w.mul(&u)?)?;
            }
            if !s.is_zero() {
                inv_coeffs.insert(k, s.mul(&lead_inv)?.neg());
            }
        }
        let mut c0_inv = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: Vec::new(),
            t_var: self.t_var.clone(),
            low: -v,
            high: if suspend || c0.high >= T_INF {
                T_INF
            } else {
                wadd(-v, span)
            },
            x_trunc: self.x_trunc,
            bodies: BTreeMap::new(),
        };
        for (k, c) in inv_coeffs {
            c0_inv
                .bodies
                .insert(-v + k, TruncSeries::constant(&self.ring, &[], self.x_trunc, c));
        }
        c0_inv.normalize();

        if self.x_vars.is_empty() {
            return Ok(c0_inv);
        }

        let base = if suspend {
            self.clone().as_exact_in_t()
        } else {
            self.clone()
        };

        // f * c0inv = 1 - h with h of positive x-valuation; expand the
        // geometric series in h.
        let fn_ = base.mul(&c0_inv)?;
        let refs: Vec<&str> = self.x_vars.iter().map(|s| s.as_str()).collect();
        let one = TateSeries::one(&self.ring, &refs, &self.t_var, self.x_trunc);
        let h = one.sub(&fn_)?;
        let mut acc = one.clone();
        let mut p = one;
        for _ in 1..=self.x_trunc {
            p = p.mul(&h)?;
            if p.is_zero_known() {
                break;
            }
            acc = acc.add(&p)?;
        }
        acc.mul(&c0_inv)
    }

    /// Substitutes truncated series (zero constant term, not involving
    /// `t`) for the x-variables, body by body.
    pub fn substitute_x(&self, bindings: &BTreeMap<String, TruncSeries>) -> Result<TateSeries> {
        for (v, b) in bindings {
            if b.vars().iter().any(|w| w == &self.t_var) {
                return Err(Error::Invalid(format!(
                    "substitution for `{}` may not involve the Tate variable",
                    v
                )));
            }
        }
        let mut x_trunc = self.x_trunc;
        let mut new_bodies: BTreeMap<i64, TruncSeries> = BTreeMap::new();
        for (e, b) in &self.bodies {
            let nb = b.substitute(bindings)?;
            x_trunc = x_trunc.min(nb.trunc());
            new_bodies.insert(*e, nb);
        }
        let x_vars: Vec<String> = match new_bodies.values().next() {
            Some(b) => b.vars().to_vec(),
            None => self
                .x_vars
                .iter()
                .map(|v| {
                    bindings
                        .get(v)
                        .and_then(|b| b.vars().first().cloned())
                        .unwrap_or_else(|| v.clone())
                })
                .collect(),
        };
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars,
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in new_bodies {
            out.insert_body(e, b)?;
        }
        out.normalize();
        Ok(out)
    }

    /// Renames x-variables (injectively).
    pub fn renamed_x(&self, mapping: &BTreeMap<String, String>) -> Result<TateSeries> {
        let x_vars: Vec<String> = self
            .x_vars
            .iter()
            .map(|v| mapping.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars,
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in &self.bodies {
            out.bodies.insert(*e, b.renamed(mapping)?);
        }
        Ok(out)
    }

    /// Sets one x-variable to zero in every body.
    pub fn x_var_to_zero(&self, name: &str) -> TateSeries {
        let mut out = TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: self.x_vars.clone(),
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: BTreeMap::new(),
        };
        for (e, b) in &self.bodies {
            let nb = b.var_to_zero(name);
            if !nb.is_zero() {
                out.bodies.insert(*e, nb);
            }
        }
        out.normalize();
        out
    }

    /// Applies a permutation of the x-variables (same convention as
    /// [`TruncSeries::permuted`]).
    pub fn permuted_x(&self, perm: &[usize]) -> TateSeries {
        TateSeries {
            ring: Arc::clone(&self.ring),
            x_vars: self.x_vars.clone(),
            t_var: self.t_var.clone(),
            low: self.low,
            high: self.high,
            x_trunc: self.x_trunc,
            bodies: self
                .bodies
                .iter()
                .map(|(e, b)| (*e, b.permuted(perm)))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.bodies.values().all(|b| b.is_symmetric())
    }

    /// Coefficient comparison within the requested window, clipped to both
    /// operands' known regions. Below either valuation floor the missing
    /// coefficients count as exact zeros.
    pub fn eq_to_precision(
        &self,
        other: &TateSeries,
        window: (i64, i64),
        order: u32,
    ) -> Result<bool> {
        Ok(self.first_difference(other, window, order)?.is_none())
    }

    /// First differing coefficient within the comparable region, reported
    /// as (t-exponent, x-monomial exponents, lhs, rhs).
    pub fn first_difference(
        &self,
        other: &TateSeries,
        window: (i64, i64),
        order: u32,
    ) -> Result<Option<TateDifference>> {
        self.check_compat(other)?;
        let lo = window.0.max(self.low.min(other.low));
        let hi = window.1.min(self.high).min(other.high);
        let order = order.min(self.x_trunc).min(other.x_trunc);
        let x_vars = self.merge_x_vars(other);
        let mut e = lo;
        while e <= hi {
            let a = self.body(e).aligned_to(&x_vars);
            let b = other.body(e).aligned_to(&x_vars);
            if let Some((m, ca, cb)) = a.first_difference(&b, order)? {
                return Ok(Some((e, m, ca, cb)));
            }
            // Beyond both stored spans everything compares as zero.
            let top_a = self.bodies.keys().next_back().cloned().unwrap_or(lo);
            let top_b = other.bodies.keys().next_back().cloned().unwrap_or(lo);
            if e > top_a.max(top_b) {
                break;
            }
            e += 1;
        }
        Ok(None)
    }

    pub fn is_one_to_precision(&self, window: (i64, i64), order: u32) -> bool {
        let refs: Vec<&str> = self.x_vars.iter().map(|s| s.as_str()).collect();
        let one = TateSeries::one(&self.ring, &refs, &self.t_var, self.x_trunc);
        self.eq_to_precision(&one, window, order).unwrap_or(false)
    }
}

impl fmt::Display for TateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bodies.is_empty() {
            if self.high >= T_INF {
                return write!(f, "0");
            }
            return write!(f, "0 + O({}^{})", self.t_var, self.high + 1);
        }
        for (i, (e, b)) in self.bodies.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "({})", b)?,
                1 => write!(f, "({})*{}", b, self.t_var)?,
                k => write!(f, "({})*{}^{}", b, self.t_var, k)?,
            }
        }
        if self.high < T_INF {
            write!(f, " + O({}^{})", self.t_var, self.high + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<GradedRing> {
        GradedRing::rationals()
    }

    fn x_plus_t(ring: &Arc<GradedRing>, x_trunc: u32) -> TateSeries {
        let f = TruncSeries::var(ring, "x", x_trunc + 2)
            .add(&TruncSeries::var(ring, "t", x_trunc + 2))
            .unwrap();
        TateSeries::from_poly(&f, "t", x_trunc, 1, true).unwrap()
    }

    #[test]
    fn invert_t_is_t_inverse() {
        let ring = q();
        let t = TateSeries::t_power(&ring, &["x"], "t", 1, 4);
        let inv = t.invert().unwrap();
        assert_eq!(inv.low(), -1);
        assert!(inv.body(-1).is_one_to(4));
        assert!(t.mul(&inv).unwrap().is_one_to_precision((-8, 8), 4));
    }

    #[test]
    fn invert_x_plus_t_is_geometric() {
        let ring = q();
        let f = x_plus_t(&ring, 8);
        let inv = f.invert().unwrap();
        // t^{-1} - t^{-2} x + t^{-3} x^2 - ...
        for k in 0..4u32 {
            let body = inv.body(-(k as i64) - 1);
            let expect = RingElement::from_i64(&ring, if k % 2 == 0 { 1 } else { -1 });
            assert_eq!(
                body.coeff(&[k]),
                expect,
                "coefficient at t^{} x^{}",
                -(k as i64) - 1,
                k
            );
        }
        let prod = f.mul(&inv).unwrap();
        assert!(prod.is_one_to_precision((-6, 6), 6));
    }

    #[test]
    fn laurent_product_of_shifted_factors() {
        let ring = q();
        // (1 + t^{-1} x)(1 + t^{-1} y) = 1 + t^{-1}(x+y) + t^{-2} xy
        let mk = |v: &str| {
            let mut bodies = BTreeMap::new();
            bodies.insert(-1, TruncSeries::var(&ring, v, 6));
            bodies.insert(0, TruncSeries::one(&ring, &[v], 6));
            TateSeries::new(&ring, &[v], "t", -1, T_INF, 6, bodies).unwrap()
        };
        let p = mk("x").mul(&mk("y")).unwrap();
        assert_eq!(p.low(), -2);
        assert_eq!(p.body(-2).coeff(&[1, 1]), RingElement::one(&ring));
        let b1 = p.body(-1);
        assert_eq!(b1.coeff(&[1, 0]), RingElement::one(&ring));
        assert_eq!(b1.coeff(&[0, 1]), RingElement::one(&ring));
        assert!(p.body(0).is_one_to(6));
    }

    #[test]
    fn window_shrinks_under_multiplication() {
        let ring = q();
        let mut bodies = BTreeMap::new();
        bodies.insert(0, TruncSeries::one(&ring, &[], 4));
        let a = TateSeries::new(&ring, &[], "t", 0, 5, 4, bodies.clone()).unwrap();
        let b = TateSeries::new(&ring, &[], "t", 0, 3, 4, bodies).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.high(), 3);
        assert_eq!(p.low(), 0);
    }

    #[test]
    fn zero_bottom_bodies_are_trimmed() {
        let ring = q();
        let mut bodies = BTreeMap::new();
        bodies.insert(1, TruncSeries::one(&ring, &[], 4));
        let a = TateSeries::new(&ring, &[], "t", -3, 4, 4, bodies).unwrap();
        assert_eq!(a.low(), 1);
    }

    #[test]
    fn from_poly_rejects_insufficient_order() {
        let ring = q();
        let f = TruncSeries::var(&ring, "x", 4)
            .add(&TruncSeries::var(&ring, "t", 4))
            .unwrap();
        assert!(TateSeries::from_poly(&f, "t", 4, 4, false).is_err());
        assert!(TateSeries::from_poly(&f, "t", 2, 2, false).is_ok());
    }

    #[test]
    fn invert_unit_with_higher_body() {
        let ring = q();
        // 1 + t x: inverse is 1 - t x + t^2 x^2 - ...
        let f = TruncSeries::one(&ring, &["x", "t"], 8)
            .add(
                &TruncSeries::var(&ring, "x", 8)
                    .mul(&TruncSeries::var(&ring, "t", 8))
                    .unwrap(),
            )
            .unwrap();
        let ts = TateSeries::from_poly(&f, "t", 4, 4, false).unwrap();
        let inv = ts.invert().unwrap();
        let prod = ts.mul(&inv).unwrap();
        assert!(prod.is_one_to_precision((-4, 4), 4));
        assert_eq!(inv.body(1).coeff(&[1]), RingElement::from_i64(&ring, -1));
    }
}
