//! Latin grids, their verifiers and transforms, completion procedures and
//! systems of distinct representatives.

mod complete;
mod grid;
mod sdr;

pub use complete::{complete_rows_hall, generic_complete, random_latin_rectangle, Completion, MAX_SEARCH_SYMBOLS};
pub use grid::{latin_violation, removal_violation, verify_latin, verify_removes, CellOrigin, LatinGrid};
pub use sdr::{find_sdr, max_bipartite_matching, Matching, Sdr};

use crate::coloring::Coloring;
use crate::constraint::ConstraintPartition;
use crate::error::{Error, Result};

/// Fills every cell with `1 +` the color of its block. The coloring is
/// indexed by block and must be proper on the removal graph of `partition`.
pub fn from_coloring(partition: &ConstraintPartition, coloring: &Coloring) -> Result<LatinGrid> {
    if coloring.len() != partition.len() {
        return Err(Error::InvalidInput(format!(
            "coloring covers {} blocks, partition has {}",
            coloring.len(),
            partition.len()
        )));
    }
    let mut grid = LatinGrid::empty(partition.order());
    for (b, cells) in partition.blocks().iter().enumerate() {
        for &cell in cells {
            grid.set(cell, coloring.color(b) as u32 + 1, CellOrigin::Coloring);
        }
    }
    if let Some(v) = latin_violation(&grid) {
        return Err(Error::InvalidInput(format!("coloring is improper: {v}")));
    }
    Ok(grid)
}
