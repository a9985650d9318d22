//! Exact-arithmetic calculus for formal group laws, exponential
//! characteristic classes, and their Tate (Laurent) extensions.
//!
//! Everything is computed over exact coefficient rings — Z, Q, or graded
//! polynomial rings over them — with truncated multivariate power series
//! and explicitly tracked precision. The crate exposes:
//!
//! - [`ring`]: graded rings and canonical-form elements;
//! - [`series`]: truncated power series with precision tracking;
//! - [`tate_series`]: Laurent objects in a distinguished variable `t`;
//! - [`fgl`]: formal group laws with verified axioms;
//! - [`charclass`]: exponential characteristic classes, the splitting
//!   principle, Hirzebruch series and genera of projective spaces;
//! - [`tate`]: the Euler–Tate class, its characteristic series, Laurent
//!   invertibility of twisted Euler classes, and the β-unit;
//! - [`cnstruct`]: C^n-structures, the bar differential, and the sharp
//!   construction over Tate coefficients;
//! - [`json`]: the canonical series interchange format;
//! - [`selftest`]: the executable acceptance checks used by the CLI.
//!
//! # Example
//!
//! ```
//! use fgc_core::fgl::FglKind;
//! use fgc_core::charclass::{genus_cpn, hirzebruch_series, ExpClass};
//!
//! // The multiplicative law F = x + y + u*x*y over Q[u], verified to
//! // order 8 at construction.
//! let law = FglKind::Multiplicative.build(8).unwrap();
//! assert_eq!(law.coefficient(1, 1).to_string(), "u");
//!
//! // Its Hirzebruch series u*x/(e^{u*x} - 1) starts 1 - u*x/2 + ...
//! let q = hirzebruch_series(&law).unwrap();
//! assert_eq!(q.series().coeff1(1).to_string(), "-1/2*u");
//!
//! // The Todd series assigns genus 1 to every projective space.
//! let todd = ExpClass::todd(8).unwrap();
//! assert!(genus_cpn(&todd, 5).unwrap().is_one());
//! ```

pub mod charclass;
pub mod cnstruct;
pub mod error;
pub mod fgl;
pub mod json;
pub mod parse;
pub mod ring;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod tate;
pub mod tate_series;

pub use error::{Error, Result};
pub use ring::{GradedRing, Homogeneity, Monomial, RingElement};
pub use scalar::{BaseRing, Scalar};
pub use series::TruncSeries;
pub use tate_series::TateSeries;
