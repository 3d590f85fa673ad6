use std::collections::BTreeSet;

use super::{classify, vital_coloring, CaseTag, PskCase};
use crate::coloring::Coloring;
use crate::constraint::{build_constraints, psk_closed_form_cells, Cell};
use crate::error::{Error, Result};
use crate::fade_state::{psk_representatives, FadeState};
use crate::latin::{
    complete_rows_hall, find_sdr, latin_violation, removal_violation, CellOrigin, LatinGrid, Sdr,
};
use crate::signal_set::SignalSet;

/// The partial grid with every closed-form constraint of the build
/// parameters filled with `1 +` its color.
pub fn partial_grid(case: &PskCase, coloring: &Coloring) -> Result<LatinGrid> {
    let b = case.build_case();
    let cells = psk_closed_form_cells(b.order, b.k, b.l);
    if cells.len() != coloring.len() {
        return Err(Error::InvalidInput(format!(
            "coloring covers {} vertices, the vital subgraph has {}",
            coloring.len(),
            cells.len()
        )));
    }
    let mut grid = LatinGrid::empty(b.order);
    for (v, block) in cells.iter().enumerate() {
        for &(r, c) in block {
            grid.set(Cell::from_labels(r, c), coloring.color(v) as u32 + 1, CellOrigin::Coloring);
        }
    }
    if let Some(v) = latin_violation(&grid) {
        return Err(Error::ImproperColoring(v));
    }
    Ok(grid)
}

/// Fills, for every empty column `i_l` of the first row, the wrapped diagonal
/// starting at `(1, i_l)` with the new symbol `t + l`, where `t` is the largest
/// symbol already present.
pub fn diagonal_complete(grid: &LatinGrid) -> Result<LatinGrid> {
    let n = grid.order();
    let empty: Vec<usize> = (0..n).filter(|&c| grid.at(0, c).is_none()).collect();
    for r in 0..n {
        let shifted: BTreeSet<usize> = (0..n)
            .filter(|&c| grid.at(r, c).is_none())
            .map(|c| (c + n - r) % n)
            .collect();
        if shifted.iter().ne(empty.iter()) {
            return Err(Error::PatternMismatch(format!(
                "empty cells of row {} are not the first row's shifted by {r}",
                r + 1
            )));
        }
    }
    let base = grid.symbols().last().copied().unwrap_or(0);
    let mut out = grid.clone();
    for (i, &c0) in empty.iter().enumerate() {
        for b in 0..n {
            out.set(Cell::new(b, (c0 + b) % n), base + 1 + i as u32, CellOrigin::Diagonal);
        }
    }
    if let Some(v) = latin_violation(&out) {
        return Err(Error::PatternMismatch(format!("diagonal filling is not Latin: {v}")));
    }
    Ok(out)
}

/// Intermediate grids of the interchange / SDR / row-matching completion.
#[derive(Debug, Clone)]
pub struct FillTrace {
    /// The partial grid after the per-row fills.
    pub filled: LatinGrid,
    /// `filled` with symbol and row indices interchanged.
    pub interchanged: LatinGrid,
    /// Candidate cells of the interchanged grid, one set per representative
    /// to place.
    pub family: Vec<Vec<Cell>>,
    /// The interchanged grid with the SDR placed: a Latin rectangle.
    pub rectangle: LatinGrid,
    /// The rectangle completed row by row.
    pub completed: LatinGrid,
    /// `completed` interchanged back.
    pub result: LatinGrid,
}

fn check_empty(grid: &LatinGrid, cell: Cell) -> Result<()> {
    if grid.get(cell).is_some() {
        return Err(Error::PatternMismatch(format!(
            "fill cell {:?} is already occupied",
            cell.labels()
        )));
    }
    Ok(())
}

/// Completion for the cases where `l = M/2` (after any swap): one extra cell
/// per row, then interchange, SDR on the first four rows, row matching and
/// interchange back.
pub fn single_fill_complete(grid: &LatinGrid, case: &PskCase) -> Result<FillTrace> {
    let b = case.build_case();
    if !matches!(b.tag, CaseTag::SinOdd | CaseTag::SinEven) || b.l != b.order / 2 {
        return Err(Error::InvalidParameter(format!(
            "{} case (k={}, l={}) does not have l = M/2",
            b.tag.name(),
            b.k,
            b.l
        )));
    }
    let (m, k) = (b.order as i64, b.k as i64);
    let n = b.order;
    let blocks = psk_closed_form_cells(n, b.k, b.l);
    let mut filled = grid.clone();
    for i in 0..m {
        let col = if k % 2 == 1 {
            i - m / 4 - (k - 1) / 2
        } else {
            i - m / 4 - k / 2 + (1 << b.k.trailing_zeros())
        };
        let cell = Cell::new(i as usize, col.rem_euclid(m) as usize);
        check_empty(&filled, cell)?;
        let (r, c) = blocks[((i + m / 2) % m) as usize][0];
        let symbol = grid.get(Cell::from_labels(r, c)).ok_or_else(|| {
            Error::InvalidInput(format!("constraint cell {:?} is empty", (r, c)))
        })?;
        filled.set(cell, symbol, CellOrigin::Fill);
    }
    if let Some(v) = latin_violation(&filled) {
        return Err(Error::PatternMismatch(format!("row fills are not Latin: {v}")));
    }
    let interchanged = filled.interchange_symbol_row()?;
    let mut family = Vec::with_capacity(n);
    let mut placed = Vec::with_capacity(n);
    for j in 0..n {
        let present: BTreeSet<u32> = filled.row(j).iter().flatten().copied().collect();
        let missing: Vec<u32> = (1..=4).filter(|s| !present.contains(s)).collect();
        if missing.len() != 1 {
            return Err(Error::PatternMismatch(format!(
                "row {} misses {} of the symbols 1..4",
                j + 1,
                missing.len()
            )));
        }
        family.push(candidates(&filled, &interchanged, j, missing[0]));
        placed.push(j as u32 + 1);
    }
    finish(filled, interchanged, family, placed)
}

/// Completion for the cases with an 8-coloring: two extra cells per row,
/// then interchange, SDR on the first eight rows, row matching and
/// interchange back.
pub fn double_fill_complete(grid: &LatinGrid, case: &PskCase) -> Result<FillTrace> {
    let b = case.build_case();
    if !matches!(b.tag, CaseTag::DiffPower | CaseTag::Mixed) {
        return Err(Error::InvalidParameter(format!(
            "{} case has no 8-coloring completion",
            b.tag.name()
        )));
    }
    let (m, k, l) = (b.order as i64, b.k as i64, b.l as i64);
    let n = b.order;
    let (d1, d2) = if (k - l) % 2 != 0 {
        ((k + 1 - l) / 2, (k + 1 + l) / 2)
    } else {
        ((k - l) / 2, (k + l) / 2)
    };
    let mut filled = grid.clone();
    for i in 0..m {
        let row = i as usize;
        let targets = [
            ((i - d1).rem_euclid(m) as usize, 1..=4u32),
            ((i + m / 2 - d2).rem_euclid(m) as usize, 5..=8u32),
        ];
        for (col, range) in targets {
            let cell = Cell::new(row, col);
            check_empty(&filled, cell)?;
            let zeta: BTreeSet<u32> = filled
                .row(row)
                .iter()
                .flatten()
                .copied()
                .chain((0..n).filter_map(|r| filled.at(r, col)))
                .collect();
            let options: Vec<u32> = range.filter(|s| !zeta.contains(s)).collect();
            debug_assert!(options.len() <= 1, "several symbols fit {:?}", cell.labels());
            let symbol = *options.first().ok_or_else(|| {
                Error::PatternMismatch(format!("no symbol fits fill cell {:?}", cell.labels()))
            })?;
            filled.set(cell, symbol, CellOrigin::Fill);
        }
    }
    if let Some(v) = latin_violation(&filled) {
        return Err(Error::PatternMismatch(format!("row fills are not Latin: {v}")));
    }
    let interchanged = filled.interchange_symbol_row()?;
    let mut family = Vec::with_capacity(2 * n);
    let mut placed = Vec::with_capacity(2 * n);
    for j in 0..n {
        let present: BTreeSet<u32> = filled.row(j).iter().flatten().copied().collect();
        let missing: Vec<u32> = (1..=8).filter(|s| !present.contains(s)).collect();
        if missing.len() != 2 {
            return Err(Error::PatternMismatch(format!(
                "row {} misses {} of the symbols 1..8",
                j + 1,
                missing.len()
            )));
        }
        for r in missing {
            family.push(candidates(&filled, &interchanged, j, r));
            placed.push(j as u32 + 1);
        }
    }
    finish(filled, interchanged, family, placed)
}

/// Empty cells of row `symbol` of the interchanged grid whose column is not
/// already filled in row `j` of the original.
fn candidates(filled: &LatinGrid, interchanged: &LatinGrid, j: usize, symbol: u32) -> Vec<Cell> {
    let r = symbol as usize - 1;
    (0..filled.order())
        .filter(|&c| interchanged.at(r, c).is_none() && filled.at(j, c).is_none())
        .map(|c| Cell::new(r, c))
        .collect()
}

fn finish(
    filled: LatinGrid,
    interchanged: LatinGrid,
    family: Vec<Vec<Cell>>,
    placed: Vec<u32>,
) -> Result<FillTrace> {
    let reps = match find_sdr(&family) {
        Sdr::Representatives(r) => r,
        Sdr::HallViolation(violating) => {
            return Err(Error::SdrNotFound {
                violating: violating.iter().map(|i| i + 1).collect(),
                state: format!("\n{}", interchanged.to_ascii()),
            })
        }
    };
    let mut rectangle = interchanged.clone();
    for (cell, symbol) in reps.into_iter().zip(placed) {
        rectangle.set(cell, symbol, CellOrigin::Sdr);
    }
    if let Some(v) = latin_violation(&rectangle) {
        return Err(Error::MatchingFailure(format!("rectangle is not Latin: {v}")));
    }
    let completed = complete_rows_hall(&rectangle)
        .map_err(|e| Error::MatchingFailure(format!("{e}\n{}", rectangle.to_ascii())))?;
    let result = completed.interchange_symbol_row()?;
    Ok(FillTrace {
        filled,
        interchanged,
        family,
        rectangle,
        completed,
        result,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Diagonal,
    SingleFill,
    DoubleFill,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Diagonal => "diagonal",
            Method::SingleFill => "single-fill-sdr",
            Method::DoubleFill => "double-fill-sdr",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PskConstruction {
    pub case: PskCase,
    pub fade_state: FadeState,
    pub method: Method,
    pub vital_coloring: Coloring,
    pub partial: LatinGrid,
    pub trace: Option<FillTrace>,
    /// The verified Latin Square removing `fade_state`.
    pub grid: LatinGrid,
}

/// Runs the full construction for the `(k, l)` representative and verifies
/// that the result is a Latin Square on exactly `M` symbols removing it.
pub fn construct(m: usize, k: usize, l: usize) -> Result<PskConstruction> {
    let case = classify(m, k, l)?;
    let fade_state = FadeState::psk_representative(m, k, l)?;
    let set = SignalSet::psk(m.trailing_zeros())?;
    construct_with(&set, case, fade_state)
}

fn construct_with(set: &SignalSet, case: PskCase, fade_state: FadeState) -> Result<PskConstruction> {
    let coloring = vital_coloring(&case)?;
    let partial = partial_grid(&case, &coloring)?;
    let (method, trace, built) = match case.tag {
        CaseTag::BothOdd | CaseTag::SamePower => (Method::Diagonal, None, diagonal_complete(&partial)?),
        CaseTag::SinOdd | CaseTag::SinEven => {
            let t = single_fill_complete(&partial, &case)?;
            let g = t.result.clone();
            (Method::SingleFill, Some(t), g)
        }
        CaseTag::DiffPower | CaseTag::Mixed => {
            let t = double_fill_complete(&partial, &case)?;
            let g = t.result.clone();
            (Method::DoubleFill, Some(t), g)
        }
    };
    let mut grid = if case.swapped { built.transpose() } else { built };
    if case.needs_rotation() {
        grid = grid.column_rotate(1);
    }
    let partition = build_constraints(set, &fade_state)?;
    let failure = latin_violation(&grid)
        .or_else(|| removal_violation(&grid, &partition))
        .or_else(|| {
            (grid.symbol_count() != case.order)
                .then(|| format!("{} symbols instead of {}", grid.symbol_count(), case.order))
        });
    if let Some(f) = failure {
        return Err(Error::PatternMismatch(format!(
            "construction for M={}, k={}, l={} failed verification: {f}",
            case.order, case.k, case.l
        )));
    }
    Ok(PskConstruction {
        case,
        fade_state,
        method,
        vital_coloring: coloring,
        partial,
        trace,
        grid,
    })
}

/// Verified constructions for every representative, in `(k, l)` order.
pub fn remove_all_psk(m: usize) -> Result<Vec<PskConstruction>> {
    let set = SignalSet::psk(m.trailing_zeros())?;
    let reps = psk_representatives(m)?;
    let mut out = Vec::with_capacity(reps.len());
    for s in reps {
        let p = s.psk.expect("representatives carry circle parameters");
        out.push(construct_with(&set, classify(m, p.k, p.l)?, s)?);
    }
    Ok(out)
}
