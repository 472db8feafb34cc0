//! Exact anisotropic perimeters of polyhedral sets, slicing identities,
//! subgraphs of piecewise-linear functions and cone constructions.

mod cones;
mod perimeter;
mod plfunc;
mod set;
mod slicing;
mod window;

pub use cones::{angle, build_cone_pair, roof_cut_delta, ConePair, ConeReport, RoofCut};
pub use perimeter::{perimeter, perimeter_in_bound};
pub use plfunc::{AffinePiece, Coarea, Level, PLFunction};
pub use slicing::{cylinder_identity, slice_check, CylinderIdentity, SliceReport};
pub use set::{Facet, Halfspace, PolyhedralSet, SetExpr, MAX_SET_DIM};
pub use window::Window;
