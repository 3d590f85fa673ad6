use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::constraint::{Cell, ConstraintPartition};
use crate::error::{Error, Result};

/// How a cell came to be filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellOrigin {
    Given,
    Constraint,
    Coloring,
    Diagonal,
    Fill,
    Sdr,
    Hall,
    Search,
}

/// An `M x M` array over symbols `1..`, possibly partially filled.
#[derive(Debug, Clone)]
pub struct LatinGrid {
    order: usize,
    cells: Vec<Option<u32>>,
    origins: Vec<Option<CellOrigin>>,
}

impl PartialEq for LatinGrid {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cells == other.cells
    }
}

impl Eq for LatinGrid {}

impl LatinGrid {
    pub fn empty(order: usize) -> Self {
        Self {
            order,
            cells: vec![None; order * order],
            origins: vec![None; order * order],
        }
    }

    /// Row-major symbols with `0` for an empty cell.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidInput("grid has no rows".into()));
        }
        let mut grid = Self::empty(order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} cells, expected {order}",
                    r + 1,
                    row.len()
                )));
            }
            for (c, &s) in row.iter().enumerate() {
                if s != 0 {
                    grid.set(Cell::new(r, c), s, CellOrigin::Given);
                }
            }
        }
        Ok(grid)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.cells
            .chunks(self.order)
            .map(|row| row.iter().map(|s| s.unwrap_or(0)).collect())
            .collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, cell: Cell) -> Option<u32> {
        self.cells[cell.row * self.order + cell.col]
    }

    pub fn at(&self, row: usize, col: usize) -> Option<u32> {
        self.cells[row * self.order + col]
    }

    pub fn origin(&self, cell: Cell) -> Option<CellOrigin> {
        self.origins[cell.row * self.order + cell.col]
    }

    pub fn set(&mut self, cell: Cell, symbol: u32, origin: CellOrigin) {
        let i = cell.row * self.order + cell.col;
        self.cells[i] = Some(symbol);
        self.origins[i] = Some(origin);
    }

    pub fn clear(&mut self, cell: Cell) {
        let i = cell.row * self.order + cell.col;
        self.cells[i] = None;
        self.origins[i] = None;
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|s| s.is_some()).count()
    }

    pub fn row(&self, r: usize) -> &[Option<u32>] {
        &self.cells[r * self.order..(r + 1) * self.order]
    }

    pub fn symbols(&self) -> BTreeSet<u32> {
        self.cells.iter().flatten().copied().collect()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols().len()
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut out = Self::empty(n);
        for r in 0..n {
            for c in 0..n {
                out.cells[c * n + r] = self.cells[r * n + c];
                out.origins[c * n + r] = self.origins[r * n + c];
            }
        }
        out
    }

    /// `out[r][c] = self[r][(c + steps) mod M]`.
    pub fn column_rotate(&self, steps: usize) -> Self {
        let n = self.order;
        let mut out = Self::empty(n);
        for r in 0..n {
            for c in 0..n {
                let src = r * n + (c + steps) % n;
                out.cells[r * n + c] = self.cells[src];
                out.origins[r * n + c] = self.origins[src];
            }
        }
        out
    }

    /// `out[perm[c]]` takes column `c`, for every row.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let n = self.order;
        let mut out = Self::empty(n);
        for r in 0..n {
            for c in 0..n {
                out.cells[r * n + perm[c]] = self.cells[r * n + c];
                out.origins[r * n + perm[c]] = self.origins[r * n + c];
            }
        }
        out
    }

    /// Swaps the roles of symbol and row: output cell `(s, c)` holds `r`
    /// exactly when input cell `(r, c)` holds `s`.
    pub fn interchange_symbol_row(&self) -> Result<Self> {
        let n = self.order;
        let mut out = Self::empty(n);
        for r in 0..n {
            for c in 0..n {
                let Some(s) = self.cells[r * n + c] else { continue };
                if s == 0 || s as usize > n {
                    return Err(Error::InvalidInput(format!(
                        "symbol {s} at {:?} cannot index a row of an order-{n} grid",
                        (r + 1, c + 1)
                    )));
                }
                let target = (s as usize - 1) * n + c;
                if out.cells[target].is_some() {
                    return Err(Error::InvalidInput(format!(
                        "symbol {s} repeats in column {}",
                        c + 1
                    )));
                }
                out.cells[target] = Some(r as u32 + 1);
                out.origins[target] = self.origins[r * n + c];
            }
        }
        Ok(out)
    }

    /// Boxed table, one line per row.
    pub fn to_ascii(&self) -> String {
        let width = self
            .symbols()
            .last()
            .map_or(1, |s| s.to_string().len());
        let rule: String = {
            let mut s = String::from("+");
            for _ in 0..self.order {
                s.push_str(&"-".repeat(width + 2));
                s.push('+');
            }
            s
        };
        let mut out = String::new();
        out.push_str(&rule);
        out.push('\n');
        for r in 0..self.order {
            out.push('|');
            for s in self.row(r) {
                match s {
                    Some(s) => write!(out, " {s:>width$} |").unwrap(),
                    None => write!(out, " {:>width$} |", "").unwrap(),
                }
            }
            out.push('\n');
            out.push_str(&rule);
            out.push('\n');
        }
        out
    }
}

/// First row or column repetition among filled cells, if any.
pub fn latin_violation(grid: &LatinGrid) -> Option<String> {
    let n = grid.order();
    for r in 0..n {
        let mut seen = BTreeSet::new();
        for c in 0..n {
            if let Some(s) = grid.at(r, c) {
                if !seen.insert(s) {
                    return Some(format!("symbol {s} repeats in row {}", r + 1));
                }
            }
        }
    }
    for c in 0..n {
        let mut seen = BTreeSet::new();
        for r in 0..n {
            if let Some(s) = grid.at(r, c) {
                if !seen.insert(s) {
                    return Some(format!("symbol {s} repeats in column {}", c + 1));
                }
            }
        }
    }
    None
}

/// No symbol repeats in a row or column among the filled cells.
pub fn verify_latin(grid: &LatinGrid) -> bool {
    latin_violation(grid).is_none()
}

/// First block whose cells are not all filled with one symbol, if any.
pub fn removal_violation(grid: &LatinGrid, partition: &ConstraintPartition) -> Option<String> {
    if grid.order() != partition.order() {
        return Some(format!(
            "grid order {} differs from partition order {}",
            grid.order(),
            partition.order()
        ));
    }
    for (b, cells) in partition.blocks().iter().enumerate() {
        let first = grid.get(cells[0]);
        if first.is_none() {
            return Some(format!("cell {:?} is empty", cells[0].labels()));
        }
        if let Some(c) = cells.iter().find(|&&c| grid.get(c) != first) {
            return Some(format!(
                "block {} holds {:?} at {:?} but {:?} at {:?}",
                b + 1,
                first.unwrap(),
                cells[0].labels(),
                grid.get(*c),
                c.labels()
            ));
        }
    }
    None
}

/// Every cell is filled and every block of the partition carries one symbol.
pub fn verify_removes(grid: &LatinGrid, partition: &ConstraintPartition) -> bool {
    removal_violation(grid, partition).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> LatinGrid {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|r| (0..n).map(|c| ((r + c) % n) as u32 + 1).collect())
            .collect();
        LatinGrid::from_rows(&rows).unwrap()
    }

    #[test]
    fn round_trip_and_transforms() {
        let g = cyclic(5);
        assert_eq!(LatinGrid::from_rows(&g.to_rows()).unwrap(), g);
        assert_eq!(g.transpose().transpose(), g);
        assert_eq!(g.column_rotate(2).column_rotate(3), g);
        assert_eq!(g.column_rotate(1).at(0, 0), Some(2));
        let i = g.interchange_symbol_row().unwrap();
        assert!(verify_latin(&i));
        assert_eq!(i.interchange_symbol_row().unwrap(), g);
        assert!(verify_latin(&LatinGrid::empty(4)));
    }

    #[test]
    fn violations_are_found() {
        let mut g = cyclic(4);
        g.set(Cell::new(0, 2), 2, CellOrigin::Given);
        assert!(!verify_latin(&g));
        assert!(LatinGrid::from_rows(&[vec![1, 2], vec![1]]).is_err());
    }

    #[test]
    fn ascii_layout() {
        let g = LatinGrid::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.to_ascii(), "+---+---+\n| 1 |   |\n+---+---+\n|   | 1 |\n+---+---+\n");
    }
}
