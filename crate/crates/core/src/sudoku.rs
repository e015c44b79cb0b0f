//! One-hot encoding of a 9×9 Sudoku grid.
//!
//! Variable `(row, col, value)` with all three in `0..9` is set when the cell
//! at `(row, col)` holds digit `value + 1`. The 729 variables are laid out as
//! `81 * row + 9 * col + value`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qubo::{BitVector, PartialAssignment, QuboError, QuboInstance};

pub const VARIABLES: usize = 729;
pub const DEFAULT_LAMBDA: f64 = 3.0;
/// Energy of every valid solved grid under the penalty matrix.
pub const GROUND_ENERGY: f64 = -81.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SudokuError {
    #[error("penalty weight must exceed 2 to cancel the reward of two placed numbers (lambda > 2), got {0}")]
    Lambda(f64),
    #[error("coordinate out of range: row {row}, col {col}, value {value} (each must be in 0..9)")]
    OutOfRange { row: u8, col: u8, value: u8 },
    #[error("puzzle string has {len} characters, expected 81 (error at position {position})")]
    Length { len: usize, position: usize },
    #[error("invalid character {ch:?} at position {position}")]
    InvalidChar { position: usize, ch: char },
    #[error("clues {first} and {second} occupy the same cell")]
    SameCell { first: CellTriple, second: CellTriple },
    #[error("clues {first} and {second} repeat a digit in the same {unit}")]
    Conflict {
        first: CellTriple,
        second: CellTriple,
        unit: Unit,
    },
    #[error("inconsistent clues: {fixed} is placed but {forcing} forbids it")]
    Inconsistent { fixed: CellTriple, forcing: CellTriple },
    #[error("cell ({row}, {col}) holds several values {values:?}")]
    CellConflict { row: usize, col: usize, values: Vec<u8> },
    #[error("expected a {expected}-bit vector, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error(transparent)]
    Qubo(#[from] QuboError),
}

/// A row, column or 3×3 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Row,
    Column,
    Block,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Row => "row",
            Unit::Column => "column",
            Unit::Block => "block",
        })
    }
}

/// `(row, col, value)`, all 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellTriple {
    row: u8,
    col: u8,
    value: u8,
}

impl CellTriple {
    pub fn new(row: u8, col: u8, value: u8) -> Result<Self, SudokuError> {
        if row > 8 || col > 8 || value > 8 {
            return Err(SudokuError::OutOfRange { row, col, value });
        }
        Ok(CellTriple { row, col, value })
    }

    /// Inverse of [`CellTriple::index`].
    pub fn from_index(u: usize) -> Self {
        assert!(u < VARIABLES, "index {u} out of range");
        CellTriple {
            row: (u / 81) as u8,
            col: (u / 9 % 9) as u8,
            value: (u % 9) as u8,
        }
    }

    /// Position of this triple in the 729-bit vector.
    pub fn index(self) -> usize {
        81 * self.row as usize + 9 * self.col as usize + self.value as usize
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    pub fn value(self) -> usize {
        self.value as usize
    }

    pub fn block(self) -> usize {
        block_of(self.row(), self.col())
    }

    fn same_cell(self, other: Self) -> bool {
        self.row == other.row && self.col == other.col
    }

    /// The unit in which `self` and `other` place the same digit twice, if
    /// any. Rows and columns take precedence over blocks.
    fn shared_unit(self, other: Self) -> Option<Unit> {
        if self.value != other.value || self.same_cell(other) {
            return None;
        }
        if self.row == other.row {
            Some(Unit::Row)
        } else if self.col == other.col {
            Some(Unit::Column)
        } else if self.block() == other.block() {
            Some(Unit::Block)
        } else {
            None
        }
    }
}

impl fmt::Display for CellTriple {
    /// 1-based `(row, col, digit)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.row + 1, self.col + 1, self.value + 1)
    }
}

pub fn block_of(row: usize, col: usize) -> usize {
    3 * (row / 3) + col / 3
}

/// Whether two distinct variables break a Sudoku rule when both are set.
pub fn penalized(u: usize, v: usize) -> bool {
    if u == v {
        return false;
    }
    let (a, b) = (CellTriple::from_index(u), CellTriple::from_index(v));
    let same_value = a.value == b.value;
    let same_row = a.row == b.row;
    let same_col = a.col == b.col;
    let same_block = a.row / 3 == b.row / 3 && a.col / 3 == b.col / 3;
    (same_row && !same_col && same_value)
        || (!same_row && same_col && same_value)
        || (same_block && same_value)
        || (same_row && same_col && !same_value)
}

/// The 729-variable penalty matrix: `-1` on the diagonal and `lambda` on
/// every pair of variables that breaks a rule.
pub fn build_sudoku_qubo(lambda: f64) -> Result<QuboInstance, SudokuError> {
    if !(lambda > 2.0 && lambda.is_finite()) {
        return Err(SudokuError::Lambda(lambda));
    }
    let mut q = QuboInstance::zeros(VARIABLES);
    for u in 0..VARIABLES {
        q.set_weight(u, u, -1.0)?;
        for v in u + 1..VARIABLES {
            if penalized(u, v) {
                q.set_weight(u, v, lambda)?;
            }
        }
    }
    Ok(q)
}

/// 9×9 grid; `0` marks an empty cell, `1..=9` a digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SudokuGrid {
    cells: [[u8; 9]; 9],
}

impl SudokuGrid {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Digit at `(row, col)`, `None` if empty.
    pub fn get(&self, row: usize, col: usize) -> Option<u8> {
        match self.cells[row][col] {
            0 => None,
            d => Some(d),
        }
    }

    /// Sets a digit (`1..=9`) or clears the cell with `None`.
    pub fn set(&mut self, row: usize, col: usize, digit: Option<u8>) {
        let d = digit.unwrap_or(0);
        assert!(d <= 9, "digit {d} out of range");
        self.cells[row][col] = d;
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&d| d != 0).count()
    }

    pub fn is_complete(&self) -> bool {
        self.filled_count() == 81
    }

    /// Filled cells as `(row, col, digit - 1)` triples in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = CellTriple> + '_ {
        (0..9).flat_map(move |r| {
            (0..9).filter_map(move |c| {
                self.get(r, c).map(|d| CellTriple {
                    row: r as u8,
                    col: c as u8,
                    value: d - 1,
                })
            })
        })
    }

    /// Whether every filled cell of `self` matches `other`.
    pub fn is_subset_of(&self, other: &SudokuGrid) -> bool {
        self.triples().all(|t| other.get(t.row(), t.col()) == Some(t.value + 1))
    }

    /// 81-character row-major string with `0` for empty cells.
    pub fn to_puzzle_string(&self) -> String {
        self.cells.iter().flatten().map(|&d| char::from(b'0' + d)).collect()
    }

    /// Multi-line rendering with block separators.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for r in 0..9 {
            if r > 0 && r % 3 == 0 {
                out.push_str("------+-------+------\n");
            }
            for c in 0..9 {
                if c > 0 && c % 3 == 0 {
                    out.push_str("| ");
                }
                match self.get(r, c) {
                    Some(d) => out.push(char::from(b'0' + d)),
                    None => out.push('.'),
                }
                if c < 8 {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for SudokuGrid {
    type Err = SudokuError;

    /// Parses the 81-character format; `1`–`9` are digits, `0` or `.` empty.
    /// Error positions are 1-based.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        for (k, &ch) in chars.iter().enumerate().take(81) {
            if !(ch == '.' || ch.is_ascii_digit()) {
                return Err(SudokuError::InvalidChar { position: k + 1, ch });
            }
        }
        if chars.len() != 81 {
            return Err(SudokuError::Length {
                len: chars.len(),
                position: chars.len().min(81) + 1,
            });
        }
        let mut grid = SudokuGrid::empty();
        for (k, ch) in chars.into_iter().enumerate() {
            let d = ch.to_digit(10).unwrap_or(0) as u8;
            grid.cells[k / 9][k % 9] = d;
        }
        Ok(grid)
    }
}

impl fmt::Display for SudokuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_puzzle_string())
    }
}

/// Set of clues with no two in one cell and no repeated digit in a unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClueSet {
    clues: Vec<CellTriple>,
}

impl ClueSet {
    pub fn new<I: IntoIterator<Item = CellTriple>>(clues: I) -> Result<Self, SudokuError> {
        let set: BTreeSet<CellTriple> = clues.into_iter().collect();
        let clues: Vec<CellTriple> = set.into_iter().collect();
        for (a, &first) in clues.iter().enumerate() {
            for &second in &clues[a + 1..] {
                if first.same_cell(second) {
                    return Err(SudokuError::SameCell { first, second });
                }
                if let Some(unit) = first.shared_unit(second) {
                    return Err(SudokuError::Conflict { first, second, unit });
                }
            }
        }
        Ok(ClueSet { clues })
    }

    /// Filled cells of a grid as clues.
    pub fn from_grid(grid: &SudokuGrid) -> Result<Self, SudokuError> {
        Self::new(grid.triples())
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(clues: Vec<CellTriple>) -> Self {
        ClueSet { clues }
    }

    pub fn len(&self) -> usize {
        self.clues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CellTriple> + '_ {
        self.clues.iter().copied()
    }

    pub fn to_grid(&self) -> SudokuGrid {
        let mut grid = SudokuGrid::empty();
        for t in self.iter() {
            grid.set(t.row(), t.col(), Some(t.value + 1));
        }
        grid
    }
}

/// Which clue operations to apply when clamping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClampLevel {
    /// Fix the clue's bit to 1 and the other values of its cell to 0.
    Basic,
    /// Additionally zero the clue's value in its row, column and block.
    #[default]
    Full,
}

impl FromStr for ClampLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(ClampLevel::Basic),
            "full" => Ok(ClampLevel::Full),
            other => Err(format!("unknown clamp level `{other}` (expected basic or full)")),
        }
    }
}

impl fmt::Display for ClampLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClampLevel::Basic => "basic",
            ClampLevel::Full => "full",
        })
    }
}

/// Translates clues into fixed variables of the 729-variable instance.
pub fn clues_to_assignment(clues: &ClueSet, level: ClampLevel) -> Result<PartialAssignment, SudokuError> {
    let ones: BTreeMap<usize, CellTriple> = clues.iter().map(|t| (t.index(), t)).collect();
    // index forced to zero -> clue demanding it
    let mut zeros: BTreeMap<usize, CellTriple> = BTreeMap::new();

    for clue in clues.iter() {
        let (r, c, k) = (clue.row, clue.col, clue.value);
        let mut forbid = |row: u8, col: u8, value: u8| {
            let t = CellTriple { row, col, value };
            if t != clue {
                zeros.entry(t.index()).or_insert(clue);
            }
        };
        for other in 0..9 {
            forbid(r, c, other);
        }
        if level == ClampLevel::Full {
            for other in 0..9 {
                forbid(other, c, k);
                forbid(r, other, k);
            }
            let (br, bc) = (3 * (r / 3), 3 * (c / 3));
            for row in br..br + 3 {
                for col in bc..bc + 3 {
                    forbid(row, col, k);
                }
            }
        }
    }

    for (index, &fixed) in &ones {
        if let Some(&forcing) = zeros.get(index) {
            return Err(SudokuError::Inconsistent { fixed, forcing });
        }
    }
    Ok(PartialAssignment::new(VARIABLES, zeros.into_keys(), ones.into_keys())?)
}

/// Reads a 729-bit vector as a grid.
pub fn decode(x: &BitVector) -> Result<SudokuGrid, SudokuError> {
    if x.len() != VARIABLES {
        return Err(SudokuError::Dimension {
            expected: VARIABLES,
            actual: x.len(),
        });
    }
    let mut grid = SudokuGrid::empty();
    for row in 0..9 {
        for col in 0..9 {
            let base = 81 * row + 9 * col;
            let values: Vec<u8> = (0..9u8).filter(|&k| x.get(base + k as usize)).map(|k| k + 1).collect();
            match values.as_slice() {
                [] => {}
                [d] => grid.set(row, col, Some(*d)),
                _ => return Err(SudokuError::CellConflict { row, col, values }),
            }
        }
    }
    Ok(grid)
}

pub fn encode(grid: &SudokuGrid) -> BitVector {
    let mut x = BitVector::zeros(VARIABLES);
    for t in grid.triples() {
        x.set(t.index(), true);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub unit: Unit,
    /// 0-based row, column or block number.
    pub index: usize,
    pub digit: u8,
    pub occurrences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValidityReport {
    pub empty_cells: usize,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_complete(&self) -> bool {
        self.empty_cells == 0
    }

    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_valid_solution(&self) -> bool {
        self.is_complete() && self.is_consistent()
    }

    pub fn violations_in(&self, unit: Unit) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.unit == unit)
    }
}

pub fn validate_grid(grid: &SudokuGrid) -> ValidityReport {
    let mut violations = Vec::new();
    for unit in [Unit::Row, Unit::Column, Unit::Block] {
        for index in 0..9 {
            let mut counts = [0usize; 10];
            for k in 0..9 {
                let (r, c) = match unit {
                    Unit::Row => (index, k),
                    Unit::Column => (k, index),
                    Unit::Block => (3 * (index / 3) + k / 3, 3 * (index % 3) + k % 3),
                };
                if let Some(d) = grid.get(r, c) {
                    counts[d as usize] += 1;
                }
            }
            for (digit, &occurrences) in counts.iter().enumerate().skip(1) {
                if occurrences > 1 {
                    violations.push(Violation {
                        unit,
                        index,
                        digit: digit as u8,
                        occurrences,
                    });
                }
            }
        }
    }
    ValidityReport {
        empty_cells: 81 - grid.filled_count(),
        violations,
    }
}
