//! Anisotropic perimeters and total variation energies.
//!
//! * [`anisotropy`]: norms, exact duals, restrictions and structural predicates.
//! * [`geometry`]: exact perimeters of polyhedral sets, slicing, subgraphs and cones.
//! * [`varmin`]: grid minimization of the area functional, set oracles and verdicts.
//! * [`casebook`]: the registry of worked examples with pass/fail rows.
//! * [`descriptors`]: JSON descriptors for norms, sets and scenarios.

pub mod anisotropy;
pub mod casebook;
pub mod descriptors;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod sampling;
pub mod varmin;

pub use anisotropy::{Anisotropy, Kind, OmegaSpec};
pub use error::{Error, Result};
