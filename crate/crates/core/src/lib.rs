//! Calculus of the genus-2 Goeritz group on the standard splitting surface.
//!
//! The crate is organized around five modules:
//!
//! * [`surface`] — the fixed cell complex of the genus-2 surface, its seven
//!   named curves, and the cellular symmetries `alpha` and `nu`.
//! * [`curve`] — simple closed curves as transverse paths: tautening,
//!   intersection numbers, homology classes, arc census, fingerprints.
//! * [`mcg`] — words in the mapping class group: parsing, expansion into
//!   atomic Dehn twists and symmetries, action on curves, the homology
//!   representation.
//! * [`goeritz`] — the complexity measure on reducing curves, the reduction
//!   algorithm, normal forms and element equality.
//! * [`conformance`] — the executable verification layer: relation suite,
//!   orbit census, uniqueness census, and the direct-action equality oracle.

pub mod conformance;
pub mod curve;
pub mod error;
pub mod goeritz;
pub mod mcg;
mod overlay;
pub mod surface;

pub use curve::TransversePath;
pub use error::{CurveError, GoeritzError, ParseError};
pub use goeritz::NormalForm;
pub use mcg::GroupWord;
pub use surface::{build_standard_model, validate_model, CurveName, SurfaceModel};
