//! Puzzle → clamped instance → annealing → decoded grid.

use serde::Serialize;
use thiserror::Error;

use crate::anneal::{anneal, AnnealError, AnnealSchedule, SampleSet, SummaryStats};
use crate::qubo::{BitVector, PartialAssignment, QuboError, QuboInstance};
use crate::sudoku::{
    build_sudoku_qubo, clues_to_assignment, decode, validate_grid, ClampLevel, ClueSet, SudokuError, SudokuGrid,
    DEFAULT_LAMBDA, GROUND_ENERGY, VARIABLES,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Sudoku(#[from] SudokuError),
    #[error(transparent)]
    Anneal(#[from] AnnealError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub lambda: f64,
    pub level: ClampLevel,
    pub readouts: usize,
    pub schedule: AnnealSchedule,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            lambda: DEFAULT_LAMBDA,
            level: ClampLevel::Full,
            readouts: 1000,
            schedule: AnnealSchedule::default(),
            seed: 0,
        }
    }
}

/// The penalty matrix restricted by a clue set.
#[derive(Debug, Clone)]
pub struct ClampedPuzzle {
    pub clues: ClueSet,
    pub assignment: PartialAssignment,
    pub instance: QuboInstance,
}

impl ClampedPuzzle {
    pub fn new(full: &QuboInstance, clues: ClueSet, level: ClampLevel) -> Result<Self, SolveError> {
        let assignment = clues_to_assignment(&clues, level)?;
        let instance = full.clamp(&assignment)?;
        Ok(ClampedPuzzle {
            clues,
            assignment,
            instance,
        })
    }

    pub fn free_variables(&self) -> usize {
        self.instance.n()
    }

    /// Full-length vector for a reduced sample.
    pub fn expand(&self, reduced: &BitVector) -> Result<BitVector, QuboError> {
        self.assignment.expand(reduced)
    }

    /// Decoded grid if the reduced sample reaches the ground energy.
    ///
    /// The clamped offset carries the energy of the fixed part, so a reduced
    /// energy of exactly `GROUND_ENERGY` means the full vector is a solution.
    pub fn ground_grid(&self, reduced: &BitVector, energy: f64) -> Result<Option<SudokuGrid>, SolveError> {
        if energy != GROUND_ENERGY {
            return Ok(None);
        }
        let grid = decode(&self.expand(reduced)?)?;
        Ok(validate_grid(&grid).is_valid_solution().then_some(grid))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub puzzle: String,
    pub clue_count: usize,
    pub variables: usize,
    pub variables_basic: usize,
    pub variables_full: usize,
    /// Free variables of the instance that was annealed.
    pub variables_solved: usize,
    pub offset: f64,
    pub best_energy: f64,
    pub certified: bool,
    /// Best sample decoded, even when not certified; `None` if some cell
    /// holds several values.
    pub grid: Option<String>,
    pub summary: SummaryStats,
    #[serde(skip)]
    pub samples: SampleSet,
    #[serde(skip)]
    pub solution: Option<SudokuGrid>,
}

/// Solves a puzzle grid with simulated annealing.
pub fn solve_puzzle(puzzle: &SudokuGrid, config: &SolveConfig) -> Result<SolveReport, SolveError> {
    let clues = ClueSet::from_grid(puzzle)?;
    let full = build_sudoku_qubo(config.lambda)?;
    let variables_basic = clues_to_assignment(&clues, ClampLevel::Basic)?.m();
    let variables_full = clues_to_assignment(&clues, ClampLevel::Full)?.m();
    let clamped = ClampedPuzzle::new(&full, clues, config.level)?;

    let samples = anneal(&clamped.instance, config.readouts, &config.schedule, config.seed)?;
    let best = samples.best()?;
    let solution = clamped.ground_grid(&best.bits, best.energy)?;
    let grid = match &solution {
        Some(g) => Some(g.to_puzzle_string()),
        None => decode(&clamped.expand(&best.bits)?).ok().map(|g| g.to_puzzle_string()),
    };
    let summary = samples.summarize(Some(GROUND_ENERGY))?;

    Ok(SolveReport {
        puzzle: puzzle.to_puzzle_string(),
        clue_count: clamped.clues.len(),
        variables: VARIABLES,
        variables_basic,
        variables_full,
        variables_solved: clamped.free_variables(),
        offset: clamped.instance.offset(),
        best_energy: best.energy,
        certified: solution.is_some(),
        grid,
        summary,
        samples,
        solution,
    })
}
