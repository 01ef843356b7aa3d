//! Exponential maps on polynomial rings over `Q` and `F_p`.
//!
//! An exponential map `σ: A → A[x]` (equivalently a locally finite iterative
//! higher derivation) is given by the images of the ring variables. This
//! crate validates the defining identities, computes σ-degrees, invariant
//! subspaces and local slices on bounded-degree windows, and rewrites
//! elements as polynomials in a slice over the invariant ring.

pub mod cli;
pub mod decompose;
pub mod expmap;
pub mod field;
pub mod invariants;
pub mod poly;

pub use expmap::{d_of_n, ExpMap, ExpMapError, LemmaReport, SigmaProfile, ValidationReport};
pub use field::{FieldElem, FieldError, FieldSpec};
pub use poly::{parse_poly, parse_sigma_image, BiPoly, MPoly, Monomial, PolyError, PolyRing, SigmaImage};
pub use decompose::{Decomposition, DecomposeError, HypothesisReport, VerificationReport};
pub use invariants::{DegreeWindow, InvariantsError, LocalSlices, MinimalSlice, SliceRecord};
