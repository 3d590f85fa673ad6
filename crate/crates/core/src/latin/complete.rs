use rand::seq::SliceRandom;
use rand::Rng;

use super::grid::{latin_violation, CellOrigin, LatinGrid};
use super::sdr::max_bipartite_matching;
use crate::constraint::Cell;
use crate::error::{Error, Result};

/// Completes a grid whose rows are either full permutations of `1..M` or
/// entirely empty, one row at a time by a perfect matching between columns
/// and the symbols they still miss.
pub fn complete_rows_hall(grid: &LatinGrid) -> Result<LatinGrid> {
    let n = grid.order();
    if let Some(v) = latin_violation(grid) {
        return Err(Error::InvalidInput(v));
    }
    for r in 0..n {
        let filled = grid.row(r).iter().filter(|s| s.is_some()).count();
        if filled != 0 && filled != n {
            return Err(Error::InvalidInput(format!(
                "row {} is partially filled ({filled} of {n} cells)",
                r + 1
            )));
        }
        if let Some(s) = grid.row(r).iter().flatten().find(|&&s| s == 0 || s as usize > n) {
            return Err(Error::InvalidInput(format!(
                "symbol {s} in row {} is outside 1..{n}",
                r + 1
            )));
        }
    }
    let mut out = grid.clone();
    let mut used = vec![vec![false; n]; n];
    for r in 0..n {
        for c in 0..n {
            if let Some(s) = out.at(r, c) {
                used[c][s as usize - 1] = true;
            }
        }
    }
    for r in 0..n {
        if out.at(r, 0).is_some() {
            continue;
        }
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|c| (0..n).filter(|&s| !used[c][s]).collect())
            .collect();
        let matching = max_bipartite_matching(&adjacency, n);
        if !matching.is_left_perfect() {
            return Err(Error::InvalidInput(format!(
                "row {} has no perfect matching of columns to missing symbols",
                r + 1
            )));
        }
        for (c, s) in matching.left.iter().enumerate() {
            let s = s.unwrap();
            used[c][s] = true;
            out.set(Cell::new(r, c), s as u32 + 1, CellOrigin::Hall);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    Completed(LatinGrid),
    /// The search space was exhausted without a completion.
    Infeasible,
    BudgetExhausted,
}

pub const MAX_SEARCH_SYMBOLS: usize = 128;

/// Backtracking completion over symbols `1..=max_symbols`, most constrained
/// cell first. Candidate symbols already in the grid are tried least used
/// first; at most one symbol not yet in the grid is tried, last.
pub fn generic_complete(grid: &LatinGrid, max_symbols: usize, node_budget: u64) -> Result<Completion> {
    if let Some(v) = latin_violation(grid) {
        return Err(Error::InvalidInput(v));
    }
    if max_symbols > MAX_SEARCH_SYMBOLS {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_SEARCH_SYMBOLS} symbols are supported, got {max_symbols}"
        )));
    }
    if let Some(&s) = grid.symbols().iter().find(|&&s| s as usize > max_symbols) {
        return Err(Error::InvalidInput(format!(
            "grid already uses symbol {s} beyond the limit {max_symbols}"
        )));
    }
    let n = grid.order();
    let mut search = Search {
        n,
        max_symbols,
        row: vec![0u128; n],
        col: vec![0u128; n],
        usage: vec![0usize; max_symbols + 1],
        grid: grid.clone(),
        nodes: 0,
        budget: node_budget,
    };
    for r in 0..n {
        for c in 0..n {
            if let Some(s) = grid.at(r, c) {
                search.place(r, c, s);
            }
        }
    }
    Ok(match search.run() {
        Some(true) => Completion::Completed(search.grid),
        Some(false) => Completion::Infeasible,
        None => Completion::BudgetExhausted,
    })
}

struct Search {
    n: usize,
    max_symbols: usize,
    row: Vec<u128>,
    col: Vec<u128>,
    usage: Vec<usize>,
    grid: LatinGrid,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn all(&self) -> u128 {
        if self.max_symbols == 128 {
            u128::MAX
        } else {
            (1u128 << self.max_symbols) - 1
        }
    }

    fn place(&mut self, r: usize, c: usize, s: u32) {
        let bit = 1u128 << (s - 1);
        self.row[r] |= bit;
        self.col[c] |= bit;
        self.usage[s as usize] += 1;
    }

    fn unplace(&mut self, r: usize, c: usize, s: u32) {
        let bit = 1u128 << (s - 1);
        self.row[r] &= !bit;
        self.col[c] &= !bit;
        self.usage[s as usize] -= 1;
    }

    /// `Some(true)` on completion, `Some(false)` when exhausted, `None` when
    /// the budget ran out.
    fn run(&mut self) -> Option<bool> {
        let mut best: Option<(usize, usize, u128)> = None;
        for r in 0..self.n {
            for c in 0..self.n {
                if self.grid.at(r, c).is_some() {
                    continue;
                }
                let options = self.all() & !(self.row[r] | self.col[c]);
                if best.is_none_or(|(_, _, b)| options.count_ones() < b.count_ones()) {
                    best = Some((r, c, options));
                    if options == 0 {
                        return Some(false);
                    }
                }
            }
        }
        let Some((r, c, options)) = best else {
            return Some(true);
        };
        let mut used: Vec<u32> = Vec::new();
        let mut fresh: Option<u32> = None;
        for s in 1..=self.max_symbols as u32 {
            if options & (1u128 << (s - 1)) == 0 {
                continue;
            }
            if self.usage[s as usize] > 0 {
                used.push(s);
            } else if fresh.is_none() {
                fresh = Some(s);
            }
        }
        used.sort_by_key(|&s| (self.usage[s as usize], s));
        used.extend(fresh);
        for s in used {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.place(r, c, s);
            self.grid.set(Cell::new(r, c), s, CellOrigin::Search);
            match self.run() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.grid.clear(Cell::new(r, c));
            self.unplace(r, c, s);
        }
        Some(false)
    }
}

/// A random `rows x M` Latin rectangle over `1..=M`, built row by row from
/// randomised perfect matchings; the remaining rows are empty.
pub fn random_latin_rectangle<R: Rng + ?Sized>(rng: &mut R, order: usize, rows: usize) -> LatinGrid {
    assert!(rows <= order, "a Latin rectangle has at most M rows");
    let n = order;
    let mut grid = LatinGrid::empty(n);
    let mut used = vec![vec![false; n]; n];
    for r in 0..rows {
        let mut columns: Vec<usize> = (0..n).collect();
        columns.shuffle(rng);
        let adjacency: Vec<Vec<usize>> = columns
            .iter()
            .map(|&c| {
                let mut s: Vec<usize> = (0..n).filter(|&s| !used[c][s]).collect();
                s.shuffle(rng);
                s
            })
            .collect();
        let matching = max_bipartite_matching(&adjacency, n);
        assert!(matching.is_left_perfect(), "Latin rectangles always extend by a row");
        for (i, s) in matching.left.iter().enumerate() {
            let (c, s) = (columns[i], s.unwrap());
            used[c][s] = true;
            grid.set(Cell::new(r, c), s as u32 + 1, CellOrigin::Given);
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::verify_latin;
    use rand::SeedableRng;

    #[test]
    fn hall_completion_of_random_rectangles() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [1, 3, 6, 9] {
            for r in 0..=n {
                let g = random_latin_rectangle(&mut rng, n, r);
                assert!(verify_latin(&g));
                let done = complete_rows_hall(&g).unwrap();
                assert!(done.is_complete() && verify_latin(&done));
                assert_eq!(done.symbol_count(), n);
            }
        }
    }

    #[test]
    fn hall_rejects_partial_rows() {
        let g = LatinGrid::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(complete_rows_hall(&g).is_err());
    }

    #[test]
    fn backtracking_small_cases() {
        let empty = LatinGrid::empty(4);
        let Completion::Completed(g) = generic_complete(&empty, 4, 10_000).unwrap() else {
            panic!()
        };
        assert!(g.is_complete() && verify_latin(&g) && g.symbol_count() == 4);
        let stuck = LatinGrid::from_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(generic_complete(&stuck, 2, 100).unwrap(), Completion::Infeasible);
        assert!(matches!(generic_complete(&stuck, 3, 100).unwrap(), Completion::Completed(_)));
        assert_eq!(generic_complete(&LatinGrid::empty(6), 6, 3).unwrap(), Completion::BudgetExhausted);
    }
}
