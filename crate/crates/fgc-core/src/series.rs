//! Truncated multivariate power series over a graded ring.
//!
//! Truncation is by total degree: a [`TruncSeries`] with truncation order
//! `D` carries exact coefficients for every monomial of total degree at
//! most `D`. Binary operations never extend precision — the result order
//! is the minimum of the operand orders.
//!
//! In addition to the total-degree order, a series may carry per-variable
//! degree caps. Caps shrink the region of known coefficients to a box and
//! propagate through arithmetic exactly like the truncation order
//! (componentwise minimum). They exist so that computations which only
//! need, say, x-degree <= 6 and t-degree <= 10 can avoid filling in the
//! full degree-16 simplex.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{same_ring, GradedRing, Monomial, RingElement};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    ring: Arc<GradedRing>,
    vars: Vec<String>,
    trunc: u32,
    /// Per-variable degree caps (parallel to `vars`); `u32::MAX` means
    /// uncapped. Kept normalized: if every cap is >= `trunc` the vector
    /// is dropped entirely.
    caps: Option<Vec<u32>>,
    terms: BTreeMap<Monomial, RingElement>,
}

pub const NO_CAP: u32 = u32::MAX;

fn normalize_caps(trunc: u32, caps: Option<Vec<u32>>) -> Option<Vec<u32>> {
    caps.filter(|v| v.iter().any(|&c| c < trunc))
}

impl TruncSeries {
    pub fn zero(ring: &Arc<GradedRing>, vars: &[&str], trunc: u32) -> Self {
        TruncSeries {
            ring: Arc::clone(ring),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            trunc,
            caps: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<GradedRing>, vars: &[&str], trunc: u32, c: RingElement) -> Self {
        let mut s = Self::zero(ring, vars, trunc);
        if !c.is_zero() {
            s.terms.insert(Monomial(vec![0; s.vars.len()]), c);
        }
        s
    }

    pub fn one(ring: &Arc<GradedRing>, vars: &[&str], trunc: u32) -> Self {
        Self::constant(ring, vars, trunc, RingElement::one(ring))
    }

    /// The series `x` for a single variable name.
    pub fn var(ring: &Arc<GradedRing>, name: &str, trunc: u32) -> Self {
        let mut s = Self::zero(ring, &[name], trunc);
        if trunc >= 1 {
            s.terms.insert(Monomial(vec![1]), RingElement::one(ring));
        }
        s
    }

    /// Builds a series from raw (exponents, coefficient) pairs.
    pub fn from_terms<I>(
        ring: &Arc<GradedRing>,
        vars: &[&str],
        trunc: u32,
        it: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, RingElement)>,
    {
        let mut s = Self::zero(ring, vars, trunc);
        for (exps, c) in it {
            if exps.len() != s.vars.len() {
                return Err(Error::Invalid("exponent arity mismatch".into()));
            }
            same_ring(c.ring(), ring)?;
            if c.is_zero() {
                continue;
            }
            let total: u32 = exps.iter().sum();
            if total > trunc {
                continue;
            }
            let m = Monomial(exps);
            match s.terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(&c)?;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn caps(&self) -> Option<&[u32]> {
        self.caps.as_deref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn cap_at(&self, i: usize) -> u32 {
        self.caps.as_ref().map(|c| c[i]).unwrap_or(NO_CAP)
    }

    fn in_box(&self, exps: &[u32]) -> bool {
        let total: u32 = exps.iter().sum();
        if total > self.trunc {
            return false;
        }
        match &self.caps {
            None => true,
            Some(caps) => exps.iter().zip(caps.iter()).all(|(e, c)| e <= c),
        }
    }

    /// Coefficient of the given exponent vector (over this series' vars).
    pub fn coeff(&self, exps: &[u32]) -> RingElement {
        assert_eq!(exps.len(), self.vars.len());
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&self.ring))
    }

    /// Coefficient of `x^k` for a one-variable series.
    pub fn coeff1(&self, k: u32) -> RingElement {
        assert_eq!(self.vars.len(), 1, "coeff1 requires one variable");
        self.coeff(&[k])
    }

    pub fn constant_term(&self) -> RingElement {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Drops terms above `order` and lowers the truncation order.
    pub fn truncated(&self, order: u32) -> TruncSeries {
        if order >= self.trunc {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total() <= order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: order,
            caps: normalize_caps(order, self.caps.clone()),
            terms,
        }
    }

    /// Restricts the known box by per-variable caps (given by name).
    pub fn capped(&self, caps_by_name: &BTreeMap<String, u32>) -> TruncSeries {
        let mut caps: Vec<u32> = (0..self.vars.len()).map(|i| self.cap_at(i)).collect();
        for (i, v) in self.vars.iter().enumerate() {
            if let Some(&c) = caps_by_name.get(v) {
                caps[i] = caps[i].min(c);
            }
        }
        let caps = normalize_caps(self.trunc, Some(caps));
        let mut out = TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps,
            terms: self.terms.clone(),
        };
        out.filter_to_box();
        out
    }

    fn filter_to_box(&mut self) {
        let trunc = self.trunc;
        let caps = self.caps.clone();
        self.terms.retain(|m, _| {
            m.total() <= trunc
                && caps
                    .as_ref()
                    .map(|c| m.0.iter().zip(c.iter()).all(|(e, cap)| e <= cap))
                    .unwrap_or(true)
        });
    }

    /// Merged variable list of two series (first operand's order, then any
    /// new names from the second).
    fn merge_vars(&self, other: &TruncSeries) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn remap_exps(exps: &[u32], map: &[usize], n: usize) -> Vec<u32> {
        let mut out = vec![0u32; n];
        for (i, &e) in exps.iter().enumerate() {
            out[map[i]] += e;
        }
        out
    }

    fn var_index_map(&self, merged: &[String]) -> Vec<usize> {
        self.vars
            .iter()
            .map(|v| merged.iter().position(|w| w == v).unwrap())
            .collect()
    }

    /// Caps of `self` translated to the merged variable list (`NO_CAP` for
    /// variables this series does not mention: its coefficients there are
    /// exactly zero).
    fn caps_in(&self, merged: &[String]) -> Vec<u32> {
        let mut caps = vec![NO_CAP; merged.len()];
        if let Some(own) = &self.caps {
            for (i, v) in self.vars.iter().enumerate() {
                let j = merged.iter().position(|w| w == v).unwrap();
                caps[j] = own[i];
            }
        }
        caps
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        same_ring(&self.ring, &other.ring)?;
        let vars = self.merge_vars(other);
        let n = vars.len();
        let trunc = self.trunc.min(other.trunc);
        let caps: Vec<u32> = self
            .caps_in(&vars)
            .iter()
            .zip(other.caps_in(&vars).iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        let map_a = self.var_index_map(&vars);
        let map_b = other.var_index_map(&vars);
        let mut out = TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            trunc,
            caps: normalize_caps(trunc, Some(caps)),
            terms: BTreeMap::new(),
        };
        for (src, map) in [(self, &map_a), (other, &map_b)] {
            for (m, c) in &src.terms {
                let exps = Self::remap_exps(&m.0, map, n);
                if !out.in_box(&exps) {
                    continue;
                }
                let key = Monomial(exps);
                match out.terms.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c.clone());
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(c)?;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.mul_in_box(other, NO_CAP, &BTreeMap::new())
    }

    /// Product additionally filtered to total degree `box_trunc` and the
    /// named per-variable caps. The request can only shrink the sound box.
    pub fn mul_in_box(
        &self,
        other: &TruncSeries,
        box_trunc: u32,
        box_caps: &BTreeMap<String, u32>,
    ) -> Result<TruncSeries> {
        same_ring(&self.ring, &other.ring)?;
        let vars = self.merge_vars(other);
        let n = vars.len();
        let trunc = self.trunc.min(other.trunc).min(box_trunc);
        let mut caps: Vec<u32> = self
            .caps_in(&vars)
            .iter()
            .zip(other.caps_in(&vars).iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        for (i, v) in vars.iter().enumerate() {
            if let Some(&c) = box_caps.get(v) {
                caps[i] = caps[i].min(c);
            }
        }
        let map_a = self.var_index_map(&vars);
        let map_b = other.var_index_map(&vars);
        let mut out = TruncSeries {
            ring: Arc::clone(&self.ring),
            vars,
            trunc,
            caps: normalize_caps(trunc, Some(caps)),
            terms: BTreeMap::new(),
        };
        // Remap once; keep (total, exps, coeff) sorted by total degree so the
        // inner loop can stop early.
        let lift = |src: &TruncSeries, map: &[usize]| -> Vec<(u32, Vec<u32>, RingElement)> {
            let mut v: Vec<(u32, Vec<u32>, RingElement)> = src
                .terms
                .iter()
                .map(|(m, c)| {
                    let exps = Self::remap_exps(&m.0, map, n);
                    (m.total(), exps, c.clone())
                })
                .collect();
            v.sort_by_key(|(t, _, _)| *t);
            v
        };
        let ta = lift(self, &map_a);
        let tb = lift(other, &map_b);
        for (da, ea, ca) in &ta {
            if *da > trunc {
                break;
            }
            for (db, eb, cb) in &tb {
                if da + db > trunc {
                    break;
                }
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                if !out.in_box(&exps) {
                    continue;
                }
                let c = ca.mul(cb)?;
                if c.is_zero() {
                    continue;
                }
                let key = Monomial(exps);
                match out.terms.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c)?;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_element(&self, c: &RingElement) -> Result<TruncSeries> {
        same_ring(&self.ring, c.ring())?;
        if c.is_zero() {
            return Ok(TruncSeries {
                ring: Arc::clone(&self.ring),
                vars: self.vars.clone(),
                trunc: self.trunc,
                caps: self.caps.clone(),
                terms: BTreeMap::new(),
            });
        }
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let p = v.mul(c)?;
            if !p.is_zero() {
                terms.insert(m.clone(), p);
            }
        }
        Ok(TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms,
        })
    }

    pub fn mul_scalar(&self, c: &Scalar) -> TruncSeries {
        self.mul_element(&RingElement::constant(&self.ring, c.clone()))
            .expect("same ring")
    }

    pub fn pow(&self, e: u32) -> Result<TruncSeries> {
        self.pow_in_box(e, NO_CAP, &BTreeMap::new())
    }

    pub fn pow_in_box(
        &self,
        e: u32,
        box_trunc: u32,
        box_caps: &BTreeMap<String, u32>,
    ) -> Result<TruncSeries> {
        let mut acc = TruncSeries::one(&self.ring, &[], self.trunc.min(box_trunc));
        for _ in 0..e {
            acc = acc.mul_in_box(self, box_trunc, box_caps)?;
        }
        // Normalize the variable list even for e = 0.
        if acc.vars.len() != self.vars.len() {
            acc = acc.aligned_to(&self.vars);
        }
        Ok(acc)
    }

    /// Re-expresses the series over a superset variable list.
    pub fn aligned_to(&self, vars: &[String]) -> TruncSeries {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .expect("aligned_to requires a superset of the variables")
            })
            .collect();
        let n = vars.len();
        let mut caps = vec![NO_CAP; n];
        if let Some(own) = &self.caps {
            for (i, &j) in map.iter().enumerate() {
                caps[j] = own[i];
            }
        }
        TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: vars.to_vec(),
            trunc: self.trunc,
            caps: normalize_caps(self.trunc, Some(caps)),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(Self::remap_exps(&m.0, &map, n)), c.clone()))
                .collect(),
        }
    }

    /// Renames variables; `mapping` pairs old names with new ones. Names
    /// not mentioned stay. The renaming must be injective on the result.
    pub fn renamed(&self, mapping: &BTreeMap<String, String>) -> Result<TruncSeries> {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| mapping.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(Error::Invalid(format!(
                    "renaming collides on variable `{}`",
                    v
                )));
            }
        }
        Ok(TruncSeries {
            ring: Arc::clone(&self.ring),
            vars,
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Removes a variable from the list; every term must have exponent
    /// zero there (typically after [`TruncSeries::var_to_zero`]).
    pub fn drop_var(&self, name: &str) -> Result<TruncSeries> {
        let Some(idx) = self.vars.iter().position(|v| v == name) else {
            return Ok(self.clone());
        };
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let caps = self.caps.as_ref().map(|c| {
            let mut c = c.clone();
            c.remove(idx);
            c
        });
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[idx] != 0 {
                return Err(Error::Invalid(format!(
                    "cannot drop `{}`: a term still depends on it",
                    name
                )));
            }
            let mut exps = m.0.clone();
            exps.remove(idx);
            terms.insert(Monomial(exps), c.clone());
        }
        Ok(TruncSeries {
            ring: Arc::clone(&self.ring),
            vars,
            trunc: self.trunc,
            caps: normalize_caps(self.trunc, caps),
            terms,
        })
    }

    /// Drops the caps when they do not constrain degrees up to `order`,
    /// returning the series truncated to that order. Errors when a cap
    /// genuinely cuts into the requested simplex.
    pub fn uncapped_to(&self, order: u32) -> Result<TruncSeries> {
        let t = self.truncated(order);
        if t.caps().is_some() {
            return Err(Error::Precision(format!(
                "series capped at {:?} is not exact on the full simplex of order {}",
                self.caps(),
                order
            )));
        }
        Ok(t)
    }

    /// Sets one variable to zero (drops every term with a positive power).
    pub fn var_to_zero(&self, name: &str) -> TruncSeries {
        let Some(idx) = self.vars.iter().position(|v| v == name) else {
            return self.clone();
        };
        TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[idx] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a permutation of this series' own variables, given as the
    /// image list: `perm[i]` is the index whose variable replaces slot `i`.
    pub fn permuted(&self, perm: &[usize]) -> TruncSeries {
        assert_eq!(perm.len(), self.vars.len());
        // The variable list stays fixed; exponents move.
        let mut inv = vec![0usize; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let exps: Vec<u32> = (0..m.0.len()).map(|i| m.0[perm[i]]).collect();
                    (Monomial(exps), c.clone())
                })
                .collect(),
        }
    }

    fn is_pure_var(&self) -> Option<String> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !c.is_one() || m.total() != 1 {
            return None;
        }
        let idx = m.0.iter().position(|&e| e == 1).unwrap();
        Some(self.vars[idx].clone())
    }

    /// Substitutes series for variables. Every bound replacement must have
    /// zero constant term; unbound variables pass through.
    pub fn substitute(&self, bindings: &BTreeMap<String, TruncSeries>) -> Result<TruncSeries> {
        self.substitute_in_box(bindings, NO_CAP, &BTreeMap::new())
    }

    /// Substitution with the result additionally filtered to a requested
    /// box (total degree and per-variable caps by name).
    pub fn substitute_in_box(
        &self,
        bindings: &BTreeMap<String, TruncSeries>,
        box_trunc: u32,
        box_caps: &BTreeMap<String, u32>,
    ) -> Result<TruncSeries> {
        let relevant: BTreeMap<&String, &TruncSeries> = bindings
            .iter()
            .filter(|(v, _)| self.vars.contains(v))
            .collect();

        // Fast path: injective renaming.
        let mut rename: BTreeMap<String, String> = BTreeMap::new();
        let mut all_pure = true;
        for (v, b) in &relevant {
            same_ring(&self.ring, &b.ring)?;
            match b.is_pure_var() {
                Some(target) => {
                    rename.insert((*v).clone(), target);
                }
                None => {
                    all_pure = false;
                    if !b.constant_term().is_zero() {
                        return Err(Error::Invalid(format!(
                            "substitution for `{}` has a nonzero constant term",
                            v
                        )));
                    }
                }
            }
        }
        if all_pure {
            let out = self.renamed(&rename);
            if let Ok(s) = out {
                let s = if box_trunc < s.trunc {
                    s.truncated(box_trunc)
                } else {
                    s
                };
                return Ok(if box_caps.is_empty() {
                    s
                } else {
                    s.capped(box_caps)
                });
            }
            // A colliding renaming falls through to the general path.
        }

        if self.caps.is_some() {
            return Err(Error::Precision(
                "cannot substitute general series into a capped series".into(),
            ));
        }

        // Result variable list: replacement vars for bound variables,
        // passthrough names otherwise, in first-occurrence order.
        let mut vars: Vec<String> = Vec::new();
        for v in &self.vars {
            match relevant.get(v) {
                Some(b) => {
                    for w in &b.vars {
                        if !vars.contains(w) {
                            vars.push(w.clone());
                        }
                    }
                }
                None => {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }

        // Sound precision: min of our order and every non-renaming binding's
        // order; sound caps: per-variable min over bindings that mention the
        // variable.
        let mut trunc = self.trunc;
        for b in relevant.values() {
            if b.is_pure_var().is_none() {
                trunc = trunc.min(b.trunc);
            }
        }
        trunc = trunc.min(box_trunc);
        let mut caps = vec![NO_CAP; vars.len()];
        for b in relevant.values() {
            let bc = b.caps_in(&vars);
            // Only variables the binding actually mentions constrain it.
            for (j, v) in vars.iter().enumerate() {
                if b.vars.contains(v) {
                    caps[j] = caps[j].min(bc[j]);
                }
            }
        }
        for (j, v) in vars.iter().enumerate() {
            if let Some(&c) = box_caps.get(v) {
                caps[j] = caps[j].min(c);
            }
        }

        let var_strs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let caps_by_name: BTreeMap<String, u32> = vars
            .iter()
            .cloned()
            .zip(caps.iter().cloned())
            .filter(|(_, c)| *c != NO_CAP)
            .collect();

        // Power cache per bound variable.
        let mut max_exp: BTreeMap<String, u32> = BTreeMap::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if relevant.contains_key(&self.vars[i]) {
                    let entry = max_exp.entry(self.vars[i].clone()).or_insert(0);
                    *entry = (*entry).max(e);
                }
            }
        }
        let mut powers: BTreeMap<String, Vec<TruncSeries>> = BTreeMap::new();
        for (v, b) in &relevant {
            let top = max_exp.get(*v).copied().unwrap_or(0);
            let mut ps = Vec::with_capacity(top as usize + 1);
            ps.push(TruncSeries::one(&self.ring, &var_strs, trunc));
            let base = b.aligned_to(&vars);
            for k in 1..=top {
                let prev = &ps[(k - 1) as usize];
                ps.push(prev.mul_in_box(&base, trunc, &caps_by_name)?);
            }
            powers.insert((*v).clone(), ps);
        }

        let mut acc = TruncSeries::zero(&self.ring, &var_strs, trunc);
        acc.caps = normalize_caps(trunc, Some(caps.clone()));
        for (m, c) in &self.terms {
            let mut term = TruncSeries::constant(&self.ring, &var_strs, trunc, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = &self.vars[i];
                match powers.get(v) {
                    Some(ps) => {
                        term = term.mul_in_box(&ps[e as usize], trunc, &caps_by_name)?;
                    }
                    None => {
                        // Passthrough variable: multiply by v^e directly.
                        let mut exps = vec![0u32; vars.len()];
                        let j = vars.iter().position(|w| w == v).unwrap();
                        exps[j] = e;
                        let shift =
                            TruncSeries::from_terms(&self.ring, &var_strs, trunc, [(
                                exps,
                                RingElement::one(&self.ring),
                            )])?;
                        term = term.mul_in_box(&shift, trunc, &caps_by_name)?;
                    }
                }
            }
            acc = acc.add(&term)?;
        }
        acc.caps = normalize_caps(trunc, Some(caps));
        acc.filter_to_box();
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        let c0_inv = c0
            .unit_inverse()
            .ok_or_else(|| Error::NotAUnit(format!("constant term {}", c0)))?;
        // g = c0^{-1} * sum_k h^k  with  h = 1 - f * c0^{-1}.
        let normalized = self.mul_element(&c0_inv)?;
        let one = TruncSeries::one(&self.ring, &[], self.trunc);
        let h = one.sub(&normalized)?;
        let caps_by_name: BTreeMap<String, u32> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.cap_at(*i) != NO_CAP)
            .map(|(i, v)| (v.clone(), self.cap_at(i)))
            .collect();
        let mut acc = TruncSeries::one(&self.ring, &[], self.trunc).aligned_to(&self.vars);
        let mut p = TruncSeries::one(&self.ring, &[], self.trunc).aligned_to(&self.vars);
        for _ in 1..=self.trunc {
            p = p.mul_in_box(&h, self.trunc, &caps_by_name)?;
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p)?;
        }
        let mut out = acc.mul_element(&c0_inv)?;
        out.caps = self.caps.clone();
        out.filter_to_box();
        Ok(out)
    }

    /// Compositional inverse of a one-variable series with zero constant
    /// term and unit linear coefficient.
    pub fn reversion(&self) -> Result<TruncSeries> {
        if self.vars.len() != 1 {
            return Err(Error::Invalid("reversion requires one variable".into()));
        }
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid(
                "reversion requires zero constant term".into(),
            ));
        }
        let a1 = self.coeff1(1);
        let a1_inv = a1
            .unit_inverse()
            .ok_or_else(|| Error::NotAUnit(format!("linear coefficient {}", a1)))?;
        let name = self.vars[0].clone();
        let x = TruncSeries::var(&self.ring, &name, self.trunc);
        let mut g = x.mul_element(&a1_inv)?;
        for d in 2..=self.trunc {
            let mut bind = BTreeMap::new();
            bind.insert(name.clone(), g.clone());
            let h = self.substitute(&bind)?;
            let c = h.coeff(&[d]);
            if c.is_zero() {
                continue;
            }
            let corr = TruncSeries::from_terms(
                &self.ring,
                &[&name],
                self.trunc,
                [(vec![d], c.mul(&a1_inv)?.neg())],
            )?;
            g = g.add(&corr)?;
        }
        Ok(g)
    }

    /// Square root of a series with constant term 1. Over an integer base
    /// every division by 2 must be exact.
    pub fn sqrt(&self) -> Result<TruncSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::Invalid("sqrt requires constant term 1".into()));
        }
        let two = Scalar::from_i64(self.ring.base(), 2);
        let mut g = TruncSeries::one(&self.ring, &[], self.trunc).aligned_to(&self.vars);
        for d in 1..=self.trunc {
            let r = self.sub(&g.mul(&g)?)?;
            // Degree-d homogeneous correction.
            let mut any = false;
            let mut corr = TruncSeries::zero(
                &self.ring,
                &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                self.trunc,
            );
            for (m, c) in &r.terms {
                if m.total() == d {
                    corr.terms.insert(m.clone(), c.try_div_scalar(&two)?);
                    any = true;
                }
            }
            if any {
                g = g.add(&corr)?;
            }
        }
        Ok(g)
    }

    /// Partial derivative in one variable. The result is exact one order
    /// lower than the input.
    pub fn derivative(&self, name: &str) -> Result<TruncSeries> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable `{}`", name)))?;
        let trunc = self.trunc.saturating_sub(1);
        let mut caps = (0..self.vars.len())
            .map(|i| self.cap_at(i))
            .collect::<Vec<_>>();
        if caps[idx] != NO_CAP {
            caps[idx] = caps[idx].saturating_sub(1);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            if exps.iter().sum::<u32>() > trunc {
                continue;
            }
            let factor = Scalar::from_i64(self.ring.base(), e as i64);
            terms.insert(Monomial(exps), c.mul_scalar(&factor));
        }
        Ok(TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc,
            caps: normalize_caps(trunc, Some(caps)),
            terms,
        })
    }

    /// Termwise integral in one variable, with zero constant of
    /// integration. Requires exact division by the new exponents.
    pub fn integral(&self, name: &str) -> Result<TruncSeries> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable `{}`", name)))?;
        let trunc = self.trunc + 1;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[idx] += 1;
            let k = Scalar::from_i64(self.ring.base(), exps[idx] as i64);
            terms.insert(Monomial(exps), c.try_div_scalar(&k)?);
        }
        let mut caps = (0..self.vars.len())
            .map(|i| self.cap_at(i))
            .collect::<Vec<_>>();
        if caps[idx] != NO_CAP {
            caps[idx] += 1;
        }
        Ok(TruncSeries {
            ring: Arc::clone(&self.ring),
            vars: self.vars.clone(),
            trunc,
            caps: normalize_caps(trunc, Some(caps)),
            terms,
        })
    }

    /// Re-interprets every coefficient in a larger ring containing this
    /// ring's generators by name.
    pub fn embed_into_ring(&self, target: &Arc<GradedRing>) -> Result<TruncSeries> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.embed_into(target)?);
        }
        Ok(TruncSeries {
            ring: Arc::clone(target),
            vars: self.vars.clone(),
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms,
        })
    }

    /// Coefficient comparison on the common known box up to `order`.
    pub fn eq_to(&self, other: &TruncSeries, order: u32) -> Result<bool> {
        same_ring(&self.ring, &other.ring)?;
        let vars = self.merge_vars(other);
        let a = self.aligned_to(&vars);
        let b = other.aligned_to(&vars);
        let order = order.min(a.trunc).min(b.trunc);
        let box_ok = |m: &Monomial| -> bool {
            m.total() <= order
                && a.caps
                    .as_ref()
                    .map(|c| m.0.iter().zip(c).all(|(e, cap)| e <= cap))
                    .unwrap_or(true)
                && b.caps
                    .as_ref()
                    .map(|c| m.0.iter().zip(c).all(|(e, cap)| e <= cap))
                    .unwrap_or(true)
        };
        for (m, c) in &a.terms {
            if box_ok(m) && b.terms.get(m).map(|d| d != c).unwrap_or(!c.is_zero()) {
                return Ok(false);
            }
        }
        for (m, c) in &b.terms {
            if box_ok(m) && !a.terms.contains_key(m) && !c.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First coefficient (in canonical order) where the two series differ
    /// on the common box up to `order`, if any.
    pub fn first_difference(
        &self,
        other: &TruncSeries,
        order: u32,
    ) -> Result<Option<(Vec<u32>, RingElement, RingElement)>> {
        same_ring(&self.ring, &other.ring)?;
        let vars = self.merge_vars(other);
        let a = self.aligned_to(&vars);
        let b = other.aligned_to(&vars);
        let order = order.min(a.trunc).min(b.trunc);
        let mut keys: Vec<&Monomial> = a.terms.keys().chain(b.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for m in keys {
            if m.total() > order {
                continue;
            }
            let ca = a.terms.get(m).cloned().unwrap_or_else(|| RingElement::zero(&a.ring));
            let cb = b.terms.get(m).cloned().unwrap_or_else(|| RingElement::zero(&b.ring));
            if ca != cb {
                return Ok(Some((m.0.clone(), ca, cb)));
            }
        }
        Ok(None)
    }

    pub fn is_one_to(&self, order: u32) -> bool {
        let one = TruncSeries::one(&self.ring, &[], self.trunc).aligned_to(&self.vars);
        self.eq_to(&one, order).unwrap_or(false)
    }

    pub fn is_zero_to(&self, order: u32) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| m.total() > order || c.is_zero())
    }

    /// True when the series is fixed by every adjacent transposition of its
    /// variables.
    pub fn is_symmetric(&self) -> bool {
        let n = self.vars.len();
        for i in 0..n.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            let swapped = self.permuted(&perm);
            if swapped.terms != self.terms {
                return false;
            }
        }
        true
    }

    /// Pretty form of the monomial for diagnostics, e.g. `x^2*y`.
    pub fn monomial_string(&self, exps: &[u32]) -> String {
        let mut parts = Vec::new();
        for (v, &e) in self.vars.iter().zip(exps.iter()) {
            match e {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{}^{}", v, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(deg {})", self.trunc + 1);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            // Fold a leading minus of single-term coefficients into the
            // joining sign.
            let (joiner, shown) = match c.single_negated() {
                Some(abs) if i > 0 => (" - ", abs),
                Some(abs) => ("-", abs),
                None if i > 0 => (" + ", c.clone()),
                None => ("", c.clone()),
            };
            write!(f, "{}", joiner)?;
            let mono = self.monomial_string(&m.0);
            if m.is_constant() {
                write!(f, "{}", shown)?;
            } else if shown.is_one() {
                write!(f, "{}", mono)?;
            } else if shown.num_terms() > 1 {
                write!(f, "({})*{}", shown, mono)?;
            } else {
                write!(f, "{}*{}", shown, mono)?;
            }
        }
        write!(f, " + O(deg {})", self.trunc + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseRing;

    fn q() -> Arc<GradedRing> {
        GradedRing::rationals()
    }

    fn zu() -> Arc<GradedRing> {
        GradedRing::polynomial(BaseRing::Integers, &[("u", 2)]).unwrap()
    }

    fn one_plus(v: &str, ring: &Arc<GradedRing>, trunc: u32) -> TruncSeries {
        TruncSeries::one(ring, &[v], trunc)
            .add(&TruncSeries::var(ring, v, trunc))
            .unwrap()
    }

    #[test]
    fn product_truncates_and_keeps_exact_part() {
        let ring = q();
        let a = one_plus("x", &ring, 5);
        let b = TruncSeries::one(&ring, &["x"], 5)
            .sub(&TruncSeries::var(&ring, "x", 5))
            .unwrap();
        let p = a.mul(&b).unwrap();
        // 1 - x^2
        assert_eq!(p.coeff(&[0]), RingElement::one(&ring));
        assert!(p.coeff(&[1]).is_zero());
        assert_eq!(p.coeff(&[2]), RingElement::from_i64(&ring, -1));
        assert_eq!(p.trunc(), 5);
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let ring = q();
        let x = TruncSeries::var(&ring, "x", 1);
        let y = TruncSeries::var(&ring, "y", 3);
        let p = x.mul(&y).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.trunc(), 1);
    }

    #[test]
    fn distinct_variable_product() {
        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let ux = TruncSeries::var(&ring, "x", 4).mul_element(&u).unwrap();
        let uy = TruncSeries::var(&ring, "y", 4).mul_element(&u).unwrap();
        let one = TruncSeries::one(&ring, &[], 4);
        let p = one.add(&ux).unwrap().mul(&one.add(&uy).unwrap()).unwrap();
        assert_eq!(p.coeff(&[1, 1]), u.mul(&u).unwrap());
        assert_eq!(p.coeff(&[1, 0]), u);
        assert_eq!(p.vars(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn substitute_sum_of_vars() {
        let ring = q();
        let f = one_plus("x", &ring, 6);
        let y = TruncSeries::var(&ring, "y", 6);
        let z = TruncSeries::var(&ring, "z", 6);
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), y.add(&z).unwrap());
        let g = f.substitute(&bind).unwrap();
        assert_eq!(g.coeff(&[1, 0]), RingElement::one(&ring));
        assert_eq!(g.coeff(&[0, 1]), RingElement::one(&ring));
    }

    #[test]
    fn substitute_with_passthrough() {
        let ring = q();
        let f = TruncSeries::var(&ring, "x", 6).pow(2).unwrap();
        let x = TruncSeries::var(&ring, "x", 6);
        let t = TruncSeries::var(&ring, "t", 6);
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), x.add(&t).unwrap());
        let g = f.substitute(&bind).unwrap();
        // x^2 + 2xt + t^2
        assert_eq!(g.coeff(&[2, 0]), RingElement::one(&ring));
        assert_eq!(g.coeff(&[1, 1]), RingElement::from_i64(&ring, 2));
        assert_eq!(g.coeff(&[0, 2]), RingElement::one(&ring));
    }

    #[test]
    fn substitute_rejects_nonzero_constant() {
        let ring = q();
        let f = TruncSeries::var(&ring, "x", 4);
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), TruncSeries::one(&ring, &["y"], 4));
        assert!(f.substitute(&bind).is_err());
    }

    #[test]
    fn geometric_inverse() {
        let ring = q();
        let f = one_plus("x", &ring, 5);
        let g = f.invert().unwrap();
        for k in 0..=5u32 {
            let expect = RingElement::from_i64(&ring, if k % 2 == 0 { 1 } else { -1 });
            assert_eq!(g.coeff(&[k]), expect);
        }
        assert!(f.mul(&g).unwrap().is_one_to(5));
    }

    #[test]
    fn invert_two_variable_unit() {
        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let f = TruncSeries::one(&ring, &["x", "y"], 4)
            .add(&TruncSeries::var(&ring, "x", 4).mul_element(&u).unwrap())
            .unwrap()
            .add(&TruncSeries::var(&ring, "y", 4).mul_element(&u).unwrap())
            .unwrap();
        let g = f.invert().unwrap();
        assert!(f.mul(&g).unwrap().is_one_to(4));
        let u2 = u.mul(&u).unwrap();
        assert_eq!(g.coeff(&[2, 0]), u2);
        assert_eq!(g.coeff(&[1, 1]), u2.mul_scalar(&Scalar::from_i64(BaseRing::Integers, 2)));
    }

    #[test]
    fn invert_requires_unit_constant() {
        let ring = zu();
        let u = RingElement::generator(&ring, "u").unwrap();
        let f = TruncSeries::one(&ring, &["x"], 4)
            .mul_element(&u)
            .unwrap()
            .add(&TruncSeries::var(&ring, "x", 4))
            .unwrap();
        assert!(matches!(f.invert(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn reversion_catalan() {
        let ring = q();
        let x = TruncSeries::var(&ring, "x", 4);
        let f = x.add(&x.pow(2).unwrap()).unwrap();
        let g = f.reversion().unwrap();
        assert_eq!(g.coeff(&[1]), RingElement::one(&ring));
        assert_eq!(g.coeff(&[2]), RingElement::from_i64(&ring, -1));
        assert_eq!(g.coeff(&[3]), RingElement::from_i64(&ring, 2));
        assert_eq!(g.coeff(&[4]), RingElement::from_i64(&ring, -5));
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), g.clone());
        assert!(f.substitute(&bind).unwrap().eq_to(&x, 4).unwrap());
        let mut bind2 = BTreeMap::new();
        bind2.insert("x".to_string(), f.clone());
        assert!(g.substitute(&bind2).unwrap().eq_to(&x, 4).unwrap());
    }

    #[test]
    fn sqrt_of_one_plus_four_x() {
        let ring = q();
        let f = TruncSeries::one(&ring, &["x"], 4)
            .add(&TruncSeries::var(&ring, "x", 4).mul_scalar(&Scalar::from_i64(BaseRing::Rationals, 4)))
            .unwrap();
        let g = f.sqrt().unwrap();
        for (k, expect) in [(0i64, 1i64), (1, 2), (2, -2), (3, 4), (4, -10)] {
            assert_eq!(g.coeff(&[k as u32]), RingElement::from_i64(&ring, expect));
        }
        assert!(g.mul(&g).unwrap().eq_to(&f, 4).unwrap());
    }

    #[test]
    fn caps_propagate_and_bound_the_box() {
        let ring = q();
        let f = one_plus("x", &ring, 10)
            .mul(&one_plus("y", &ring, 10))
            .unwrap();
        let mut caps = BTreeMap::new();
        caps.insert("x".to_string(), 1u32);
        let g = f.capped(&caps);
        let h = g.mul(&g).unwrap();
        assert_eq!(h.caps(), Some(&[1u32, NO_CAP][..]));
        // Within the box the coefficients agree with the uncapped square.
        let full = f.mul(&f).unwrap();
        assert_eq!(h.coeff(&[1, 2]), full.coeff(&[1, 2]));
        // Outside the box nothing is stored.
        assert!(h.coeff(&[2, 0]).is_zero());
    }

    #[test]
    fn derivative_and_integral_round_trip() {
        let ring = q();
        let f = one_plus("x", &ring, 6).pow(3).unwrap();
        let d = f.derivative("x").unwrap();
        let i = d.integral("x").unwrap();
        let f_no_const = f.sub(&TruncSeries::one(&ring, &["x"], 6)).unwrap();
        assert!(i.eq_to(&f_no_const, 5).unwrap());
    }

    #[test]
    fn symmetry_detection() {
        let ring = q();
        let x = TruncSeries::var(&ring, "x1", 4);
        let y = TruncSeries::var(&ring, "x2", 4);
        let sym = x.mul(&y).unwrap().add(&x.add(&y).unwrap()).unwrap();
        assert!(sym.is_symmetric());
        let asym = x.pow(2).unwrap().add(&y).unwrap();
        assert!(!asym.is_symmetric());
    }
}
