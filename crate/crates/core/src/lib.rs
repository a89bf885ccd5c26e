//! Finite set systems as indicator bit-vectors: geometric generators,
//! packings, random sampling, low-conflict spanning trees, batch geometric
//! measures and colorings.
//!
//! ```
//! use shallowpack::packing::{greedy_packing, shallow_filter};
//! use shallowpack::setsystem::build_halfspaces;
//! use shallowpack::spanning::exact_mst;
//! use shallowpack::{PointSet, Separation};
//!
//! let pts = PointSet::uniform(200, 2, 7)?;
//! let shallow = shallow_filter(&build_halfspaces(&pts)?, 40);
//! let packing = greedy_packing(&shallow, 10, Separation::Strict, 0);
//! let tree = exact_mst(&packing.system(&shallow)?)?;
//! assert!(tree.total_conflict() > 10 * (packing.len() - 1));
//! # Ok::<(), shallowpack::Error>(())
//! ```

pub mod bits;
pub mod discrepancy;
pub mod error;
pub mod fit;
pub mod measures;
pub mod packing;
mod par;
pub mod rng;
pub mod sampling;
pub mod setsystem;
pub mod spanning;

pub use bits::IncidenceVector;
pub use error::{Error, Result};
pub use setsystem::{CsParams, IndexSample, PointSet, Separation, SetSystem, ShatterProfile};
