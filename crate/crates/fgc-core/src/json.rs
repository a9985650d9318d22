//! The series interchange format.
//!
//! ```json
//! {
//!   "ring": {"base": "Q", "gens": [["m1", 2], ["m2", 4]]},
//!   "vars": ["x", "y"],
//!   "trunc": 8,
//!   "tate": {"low": -1, "high": 6},
//!   "terms": [{"t": -1, "mono": [1, 0], "coeff": "-2*m1"}]
//! }
//! ```
//!
//! Coefficient strings use the [`crate::parse`] grammar; output uses the
//! canonical `Display` form, so emission and ingestion round-trip. Output
//! is canonical: terms are sorted by (t-exponent, graded-lex monomial
//! order), and identical inputs always serialize to identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_coeff;
use crate::ring::GradedRing;
use crate::scalar::BaseRing;
use crate::series::TruncSeries;
use crate::tate_series::{TateSeries, T_INF};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingJson {
    pub base: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gens: Vec<(String, i64)>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowJson {
    pub low: i64,
    pub high: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    pub mono: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub ring: RingJson,
    pub vars: Vec<String>,
    pub trunc: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tate: Option<WindowJson>,
    pub terms: Vec<TermJson>,
}

pub fn ring_to_json(ring: &GradedRing) -> RingJson {
    RingJson {
        base: ring.base().to_string(),
        gens: ring
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.degree))
            .collect(),
    }
}

pub fn ring_from_json(j: &RingJson) -> Result<Arc<GradedRing>> {
    let base = match j.base.as_str() {
        "Z" => BaseRing::Integers,
        "Q" => BaseRing::Rationals,
        other => {
            return Err(Error::Invalid(format!(
                "unknown base ring `{}` (expected \"Z\" or \"Q\")",
                other
            )))
        }
    };
    if j.gens.is_empty() {
        return Ok(match base {
            BaseRing::Integers => GradedRing::integers(),
            BaseRing::Rationals => GradedRing::rationals(),
        });
    }
    let refs: Vec<(&str, i64)> = j.gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    GradedRing::polynomial(base, &refs)
}

pub fn series_to_json(f: &TruncSeries) -> SeriesJson {
    SeriesJson {
        ring: ring_to_json(f.ring()),
        vars: f.vars().to_vec(),
        trunc: f.trunc(),
        tate: None,
        terms: f
            .terms()
            .map(|(m, c)| TermJson {
                t: None,
                mono: m.0.clone(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> Result<TruncSeries> {
    let ring = ring_from_json(&j.ring)?;
    let var_refs: Vec<&str> = j.vars.iter().map(|s| s.as_str()).collect();
    let mut terms = Vec::new();
    for t in &j.terms {
        if t.t.is_some() {
            return Err(Error::Invalid(
                "plain series term carries a t-exponent; use the tate window".into(),
            ));
        }
        terms.push((t.mono.clone(), parse_coeff(&t.coeff, &ring)?));
    }
    TruncSeries::from_terms(&ring, &var_refs, j.trunc, terms)
}

/// Serializes a Tate series. An object exact in t reports its top stored
/// exponent as the window top.
pub fn tate_to_json(f: &TateSeries) -> SeriesJson {
    let top_stored = f.bodies().next_back().map(|(e, _)| *e);
    let high = if f.high() >= T_INF {
        top_stored.unwrap_or(0).max(0)
    } else {
        f.high()
    };
    let low = f.low().min(high);
    let mut terms = Vec::new();
    for (e, b) in f.bodies() {
        for (m, c) in b.terms() {
            terms.push(TermJson {
                t: Some(*e),
                mono: m.0.clone(),
                coeff: c.to_string(),
            });
        }
    }
    SeriesJson {
        ring: ring_to_json(f.ring()),
        vars: f.x_vars().to_vec(),
        trunc: f.x_trunc(),
        tate: Some(WindowJson { low, high }),
        terms,
    }
}

pub fn tate_from_json(j: &SeriesJson) -> Result<TateSeries> {
    let Some(window) = j.tate else {
        return Err(Error::Invalid("missing tate window".into()));
    };
    let ring = ring_from_json(&j.ring)?;
    let var_refs: Vec<&str> = j.vars.iter().map(|s| s.as_str()).collect();
    let mut grouped: BTreeMap<i64, Vec<(Vec<u32>, crate::ring::RingElement)>> = BTreeMap::new();
    for t in &j.terms {
        let e = t.t.unwrap_or(0);
        grouped
            .entry(e)
            .or_default()
            .push((t.mono.clone(), parse_coeff(&t.coeff, &ring)?));
    }
    let mut bodies = BTreeMap::new();
    for (e, terms) in grouped {
        bodies.insert(e, TruncSeries::from_terms(&ring, &var_refs, j.trunc, terms)?);
    }
    TateSeries::new(
        &ring,
        &var_refs,
        crate::tate::TATE_T,
        window.low,
        window.high,
        j.trunc,
        bodies,
    )
}

/// Canonical pretty-printed JSON.
pub fn to_canonical_string(j: &SeriesJson) -> String {
    serde_json::to_string_pretty(j).expect("series JSON serialization")
}

pub fn from_str(text: &str) -> Result<SeriesJson> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad series JSON: {}", e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingElement;

    #[test]
    fn plain_round_trip() {
        let ring = GradedRing::polynomial(BaseRing::Rationals, &[("m1", 2), ("m2", 4)]).unwrap();
        let m1 = RingElement::generator(&ring, "m1").unwrap();
        let f = TruncSeries::var(&ring, "x", 8)
            .mul_element(
                &m1.mul_scalar(&crate::scalar::Scalar::from_i64(BaseRing::Rationals, -2)),
            )
            .unwrap()
            .add(&TruncSeries::one(&ring, &["x", "y"], 8))
            .unwrap();
        let j = series_to_json(&f);
        let text = to_canonical_string(&j);
        let back = series_from_json(&from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
        // Determinism: serializing again is byte-identical.
        assert_eq!(text, to_canonical_string(&series_to_json(&back)));
    }

    #[test]
    fn tate_round_trip() {
        let ring = GradedRing::rationals();
        let mut bodies = BTreeMap::new();
        bodies.insert(-1, TruncSeries::var(&ring, "x", 6));
        bodies.insert(0, TruncSeries::one(&ring, &["x"], 6));
        let f = TateSeries::new(&ring, &["x"], "t", -1, 6, 6, bodies).unwrap();
        let j = tate_to_json(&f);
        assert_eq!(j.tate.unwrap().low, -1);
        let back = tate_from_json(&j).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn schema_example_parses() {
        let text = r#"{
            "ring": {"base": "Q", "gens": [["m1", 2], ["m2", 4]]},
            "vars": ["x", "y"],
            "trunc": 8,
            "terms": [{"mono": [1, 0], "coeff": "-2*m1"}]
        }"#;
        let f = series_from_json(&from_str(text).unwrap()).unwrap();
        let m1 = RingElement::generator(f.ring(), "m1").unwrap();
        assert_eq!(
            f.coeff(&[1, 0]),
            m1.mul_scalar(&crate::scalar::Scalar::from_i64(BaseRing::Rationals, -2))
        );
    }

    #[test]
    fn bad_coefficients_are_rejected() {
        let text = r#"{
            "ring": {"base": "Z"},
            "vars": ["x"],
            "trunc": 4,
            "terms": [{"mono": [1], "coeff": "1/2"}]
        }"#;
        assert!(series_from_json(&from_str(text).unwrap()).is_err());

        let text2 = r#"{
            "ring": {"base": "Q"},
            "vars": ["x"],
            "trunc": 4,
            "terms": [{"mono": [1], "coeff": "nope"}]
        }"#;
        assert!(series_from_json(&from_str(text2).unwrap()).is_err());
    }
}
