//! Explicit height bounds for generators of S-unit groups in division
//! algebras, together with an exact-arithmetic verification of the
//! Hurwitz-quaternion case.
//!
//! The crate is organised bottom-up:
//!
//! * [`quaternion`] – exact arithmetic in Hamilton's quaternions over ℚ,
//!   Hurwitz-order membership, content valuations and heights.
//! * [`bounds`] – the geometry-of-numbers constants (z, c, m_X, T1–T6,
//!   f1, f2, …) for an arbitrary algebra shape, in arbitrary precision.
//! * [`enumerate`] – Hurwitz elements of prescribed norm, generating sets
//!   and the unit group.
//! * [`padic`] – finite-precision p-adic scalars and 2×2 matrices, and the
//!   explicit splitting of the quaternions at odd primes.
//! * [`tree`] – Bruhat–Tits trees at odd primes and the transitivity
//!   verification on products of trees.
//! * [`presentation`] – free-group words and relator checks for the
//!   two-generator presentation at S = {∞, 3, 5}.

pub mod arith;
pub mod bounds;
pub mod enumerate;
pub mod error;
pub mod padic;
pub mod presentation;
pub mod quaternion;
pub mod tree;

pub use bounds::{AlgebraShape, BoundReport, BoundsEngine, Covolume, PlaceKind};
pub use enumerate::{NormClassEnumeration, UnitGroupReport};
pub use error::{Error, Result};
pub use padic::{PAdic, PAdicMatrix2, SplittingData};
pub use presentation::{Generator, RelatorOutcome, RelatorReport, Word};
pub use quaternion::{HurwitzElement, RatQuaternion, SPlaceSet};
pub use tree::{ProductVertex, TransitivityReport, TreeVertex};
