//! Named system families used by experiments and the command line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{build_balls, build_halfspaces, build_rectangle_grid_dual, build_slabs};
use super::{CsParams, PointSet, SetSystem};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Halfspaces,
    Balls,
    Slabs,
    /// Dual system of the rectangle grid; ignores `dim` and the seed.
    Grid,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Halfspaces => "halfspaces",
            Family::Balls => "balls",
            Family::Slabs => "slabs",
            Family::Grid => "grid",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halfspaces" | "halfplanes" => Ok(Family::Halfspaces),
            "balls" | "discs" => Ok(Family::Balls),
            "slabs" => Ok(Family::Slabs),
            "grid" | "rectangle-grid" => Ok(Family::Grid),
            other => Err(Error::invalid(format!("unknown generator `{other}`"))),
        }
    }
}

/// A system family in a fixed dimension. Geometric families are built over
/// uniform random points in the unit cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub family: Family,
    pub dim: usize,
}

impl Generator {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        if family != Family::Grid && !(1..=3).contains(&dim) {
            return Err(Error::DimensionTooHigh(dim));
        }
        Ok(Generator { family, dim })
    }

    pub fn params(&self) -> CsParams {
        match self.family {
            Family::Halfspaces => CsParams::halfspaces(self.dim),
            Family::Balls => CsParams::balls(self.dim),
            Family::Slabs => CsParams::slabs(self.dim),
            // (n/delta)^2 cells: the planar packing bound with d1 = d
            Family::Grid => CsParams { d: 2.0, d1: 2.0, d0: 4 },
        }
    }

    /// The ground points for `n`; the same `(seed, n)` always gives the same
    /// points, whatever other parameters vary.
    pub fn points(&self, n: usize, seed: u64) -> Result<PointSet> {
        PointSet::uniform(n, self.dim, derive_seed(seed, "generator/points", n as u64))
    }

    pub fn build(&self, n: usize, delta: usize, seed: u64) -> Result<SetSystem> {
        match self.family {
            Family::Grid => build_rectangle_grid_dual(n, delta),
            Family::Halfspaces => build_halfspaces(&self.points(n, seed)?),
            Family::Balls => build_balls(&self.points(n, seed)?),
            Family::Slabs => build_slabs(&self.points(n, seed)?),
        }
    }
}
