//! Singularity removal constraints: the partition of `S x S` into blocks on
//! which `x_A + s x_B` is constant.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::fade_state::{check_psk_order, FadeState};
use crate::latin::{CellOrigin, LatinGrid};
use crate::signal_set::SignalSet;

/// A cell of `S x S`: `row` indexes `x_A`, `col` indexes `x_B`, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// From 1-based `(row label, column label)`.
    pub fn from_labels(row: usize, col: usize) -> Self {
        Self {
            row: row - 1,
            col: col - 1,
        }
    }

    pub fn labels(&self) -> (usize, usize) {
        (self.row + 1, self.col + 1)
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintPartition {
    order: usize,
    fade_state: FadeState,
    blocks: Vec<Vec<Cell>>,
    values: Vec<Complex64>,
    cell_block: Vec<usize>,
}

impl ConstraintPartition {
    /// Builds a partition from explicit blocks. Blocks must cover every cell
    /// of the `order x order` grid exactly once.
    pub fn from_blocks(
        order: usize,
        fade_state: FadeState,
        blocks: Vec<Vec<Cell>>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != blocks.len() {
            return Err(Error::InvalidInput(format!(
                "{} blocks but {} values",
                blocks.len(),
                values.len()
            )));
        }
        let mut cell_block = vec![usize::MAX; order * order];
        for (b, cells) in blocks.iter().enumerate() {
            if cells.is_empty() {
                return Err(Error::InvalidInput(format!("block {} is empty", b + 1)));
            }
            for c in cells {
                if c.row >= order || c.col >= order {
                    return Err(Error::InvalidInput(format!(
                        "cell {:?} outside a grid of order {order}",
                        c.labels()
                    )));
                }
                let slot = &mut cell_block[c.row * order + c.col];
                if *slot != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "cell {:?} lies in blocks {} and {}",
                        c.labels(),
                        *slot + 1,
                        b + 1
                    )));
                }
                *slot = b;
            }
        }
        if let Some(pos) = cell_block.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "cell {:?} is not covered",
                Cell::new(pos / order, pos % order).labels()
            )));
        }
        Ok(Self {
            order,
            fade_state,
            blocks,
            values,
            cell_block,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn fade_state(&self) -> &FadeState {
        &self.fade_state
    }

    pub fn blocks(&self) -> &[Vec<Cell>] {
        &self.blocks
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, cell: Cell) -> usize {
        self.cell_block[cell.row * self.order + cell.col]
    }

    /// Indices of blocks with at least two cells, in block order.
    pub fn multi_cell_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].len() >= 2)
            .collect()
    }

    /// Multi-cell blocks as a set of sorted cell lists, for order-free
    /// comparison.
    pub fn multi_cell_set(&self) -> std::collections::BTreeSet<Vec<Cell>> {
        self.blocks
            .iter()
            .filter(|b| b.len() >= 2)
            .map(|b| {
                let mut b = b.clone();
                b.sort();
                b
            })
            .collect()
    }
}

/// Groups all `M^2` cells by the value of `x_A + s x_B`. Multi-cell blocks
/// come first, ordered by their first cell, followed by the singletons in
/// row-major order. Cells inside a block are row-major.
pub fn build_constraints(set: &SignalSet, s: &FadeState) -> Result<ConstraintPartition> {
    if s.is_zero() {
        return Err(Error::InvalidParameter(
            "the zero fade state has no constraint partition".into(),
        ));
    }
    let m = set.order();
    let mut groups: Vec<Vec<Cell>> = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();
    match (set.exact_points(), &s.exact) {
        (Some(points), Some(e)) => {
            let mut index: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
            for (a, pa) in points.iter().enumerate() {
                for (b, pb) in points.iter().enumerate() {
                    let v = pa + e * pb;
                    let slot = *index.entry((v.re, v.im)).or_insert_with(|| {
                        groups.push(Vec::new());
                        values.push(exact::to_f64(&v));
                        groups.len() - 1
                    });
                    groups[slot].push(Cell::new(a, b));
                }
            }
        }
        _ => {
            let pts = set.points();
            let raw: Vec<Complex64> = pts
                .iter()
                .flat_map(|a| pts.iter().map(move |b| a + s.value * b))
                .collect();
            let clusters = exact::cluster(&raw)?;
            groups = vec![Vec::new(); clusters.len()];
            for (pos, &c) in clusters.assignment.iter().enumerate() {
                groups[c].push(Cell::new(pos / m, pos % m));
            }
            values = clusters.representatives;
        }
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| (groups[g].len() < 2, groups[g][0]));
    let blocks = order.iter().map(|&g| groups[g].clone()).collect();
    let values = order.iter().map(|&g| values[g]).collect();
    ConstraintPartition::from_blocks(m, s.clone(), blocks, values)
}

/// The grid with every multi-cell block filled with its own 1-based index
/// among the multi-cell blocks; singleton cells stay empty.
pub fn constrained_pls(partition: &ConstraintPartition) -> LatinGrid {
    let mut grid = LatinGrid::empty(partition.order());
    for (symbol, &b) in partition.multi_cell_blocks().iter().enumerate() {
        for &cell in &partition.blocks()[b] {
            grid.set(cell, symbol as u32 + 1, CellOrigin::Constraint);
        }
    }
    grid
}

/// The two-cell constraints of `M`-PSK at the `(k, l)` representative, in
/// closed form and in the indexing `c_1, ..., c_{2M}` (or `c_1, ..., c_M`
/// when `k` or `l` is `M/2`), followed by the singleton blocks.
pub fn psk_constraints_closed_form(m: usize, k: usize, l: usize) -> Result<ConstraintPartition> {
    check_psk_order(m, 8)?;
    let s = FadeState::psk_representative(m, k, l)?;
    let blocks_1 = psk_closed_form_cells(m, k, l);
    let mut blocks: Vec<Vec<Cell>> = blocks_1
        .iter()
        .map(|b| b.iter().map(|&(r, c)| Cell::from_labels(r, c)).collect())
        .collect();
    let mut covered = vec![false; m * m];
    for b in &blocks {
        for c in b {
            covered[c.row * m + c.col] = true;
        }
    }
    for pos in 0..m * m {
        if !covered[pos] {
            blocks.push(vec![Cell::new(pos / m, pos % m)]);
        }
    }
    let set = SignalSet::psk(m.trailing_zeros())?;
    let values = blocks
        .iter()
        .map(|b| set.points()[b[0].row] + s.value * set.points()[b[0].col])
        .collect();
    ConstraintPartition::from_blocks(m, s, blocks, values)
}

/// Closed-form two-cell blocks with 1-based labels, cells sorted row-major.
pub fn psk_closed_form_cells(m: usize, k: usize, l: usize) -> Vec<[(usize, usize); 2]> {
    let (mi, ki, li) = (m as i64, k as i64, l as i64);
    let h = mi / 2;
    let (d1, d2) = if (ki - li) % 2 == 0 {
        ((ki - li) / 2, (ki + li) / 2)
    } else {
        ((ki + 1 - li) / 2, (ki + 1 + li) / 2)
    };
    let lab = |x: i64| (x.rem_euclid(mi) + 1) as usize;
    let sorted = |a: (usize, usize), b: (usize, usize)| if a <= b { [a, b] } else { [b, a] };
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    for i in 0..mi {
        let row_a = (i + 1) as usize;
        let row_b = lab(i - ki);
        first.push(sorted((row_a, lab(i - h - d1)), (row_b, lab(i + h - d2))));
        second.push(sorted((row_a, lab(i - d2)), (row_b, lab(i - d1))));
    }
    if k != m / 2 && l != m / 2 {
        first.extend(second);
    }
    first
}
