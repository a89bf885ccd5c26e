//! Dual system of a grid of thin rectangles: `n/δ` vertical and `n/δ`
//! horizontal stacks, each stack holding `δ/2` copies of one rectangle.

use super::SetSystem;
use crate::bits::IncidenceVector;
use crate::error::{Error, Result};

/// The cells of the grid, one vector per crossing of a vertical and a
/// horizontal stack.
///
/// Ground-set layout: vertical stacks left to right (copies contiguous),
/// then horizontal stacks top to bottom. Every vector has length `delta`
/// and distinct cells are at distance `delta` (same row or column) or
/// `2 * delta`.
pub fn build_rectangle_grid_dual(n: usize, delta: usize) -> Result<SetSystem> {
    if delta < 2 || !delta.is_multiple_of(2) {
        return Err(Error::invalid(format!("delta must be even and >= 2, got {delta}")));
    }
    if n == 0 || !n.is_multiple_of(delta) {
        return Err(Error::invalid(format!("n = {n} must be a positive multiple of delta = {delta}")));
    }
    let g = n / delta;
    let half = delta / 2;
    let horizontal_base = n / 2;
    let mut cells = Vec::with_capacity(g * g);
    for row in 0..g {
        for col in 0..g {
            let vertical = (col * half)..(col * half + half);
            let horizontal = (horizontal_base + row * half)..(horizontal_base + row * half + half);
            cells.push(IncidenceVector::from_indices(n, vertical.chain(horizontal))?);
        }
    }
    SetSystem::new(n, cells)
}
