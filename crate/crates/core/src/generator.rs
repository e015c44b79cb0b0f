//! Sampling solved grids and generating puzzles.
//!
//! A puzzle is produced by sampling a solved grid from the unclamped
//! instance, keeping a uniformly random subset of its cells as clues, and
//! annealing the clamped instance `k_checks` times. If two distinct solved
//! grids appear the clue set is ambiguous and the procedure restarts. The
//! check is probabilistic: an ambiguous clue set can pass when only one of
//! its solutions shows up among the samples.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::anneal::{anneal, AnnealSchedule, SampleSet};
use crate::qubo::{PartialAssignment, QuboInstance};
use crate::solve::{ClampedPuzzle, SolveError};
use crate::sudoku::{
    build_sudoku_qubo, decode, validate_grid, ClampLevel, ClueSet, SudokuGrid, DEFAULT_LAMBDA, GROUND_ENERGY,
};

/// Fewest clues any uniquely solvable puzzle can have.
pub const MIN_UNIQUE_CLUES: usize = 17;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("at least {MIN_UNIQUE_CLUES} clues are needed for a unique solution, got {0}")]
    TooFewClues(usize),
    #[error("a grid has only 81 cells, got {0} clues")]
    TooManyClues(usize),
    #[error("k_checks must be at least 2, got {0}")]
    TooFewChecks(usize),
    #[error("no solved grid found after {attempts} annealing batches")]
    NoSolvedGrid { attempts: usize },
    #[error("no unambiguous puzzle found within {restarts} restarts")]
    Exhausted { restarts: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl From<crate::anneal::AnnealError> for GeneratorError {
    fn from(e: crate::anneal::AnnealError) -> Self {
        GeneratorError::Solve(e.into())
    }
}

impl From<crate::sudoku::SudokuError> for GeneratorError {
    fn from(e: crate::sudoku::SudokuError) -> Self {
        GeneratorError::Solve(e.into())
    }
}

impl From<crate::qubo::QuboError> for GeneratorError {
    fn from(e: crate::qubo::QuboError) -> Self {
        GeneratorError::Solve(e.into())
    }
}

/// Distinct solved grids in a sample set, in order of first appearance.
///
/// `assignment` maps reduced samples back to 729 bits; pass `None` when the
/// samples come from the unclamped instance.
pub fn distinct_solutions(
    samples: &SampleSet,
    assignment: Option<&PartialAssignment>,
) -> Result<Vec<SudokuGrid>, GeneratorError> {
    let mut seen = HashSet::new();
    let mut grids = Vec::new();
    for s in samples.samples().iter().filter(|s| s.energy == GROUND_ENERGY) {
        let full = match assignment {
            Some(pa) => pa.expand(&s.bits)?,
            None => s.bits.clone(),
        };
        let grid = decode(&full)?;
        if validate_grid(&grid).is_valid_solution() && seen.insert(grid) {
            grids.push(grid);
        }
    }
    Ok(grids)
}

#[derive(Debug, Clone)]
pub struct SolutionSample {
    pub grids: Vec<SudokuGrid>,
    /// Samples at the ground energy, duplicates included.
    pub ground_hits: usize,
    pub readouts: usize,
}

/// Anneals the unclamped instance and keeps the distinct solved grids.
pub fn sample_solutions(
    readouts: usize,
    seed: u64,
    lambda: f64,
    schedule: &AnnealSchedule,
) -> Result<SolutionSample, GeneratorError> {
    let s = build_sudoku_qubo(lambda)?;
    let samples = anneal(&s, readouts, schedule, seed)?;
    let ground_hits = samples.energies().filter(|&e| e == GROUND_ENERGY).count();
    Ok(SolutionSample {
        grids: distinct_solutions(&samples, None)?,
        ground_hits,
        readouts,
    })
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    /// Distinct solved grids found among the samples.
    pub solutions: Vec<SudokuGrid>,
    pub ground_hits: usize,
    pub free_variables: usize,
}

impl UniquenessReport {
    pub fn is_ambiguous(&self) -> bool {
        self.solutions.len() > 1
    }
}

/// Draws `k_checks` annealing samples from the fully clamped instance and
/// collects the distinct solutions among them.
pub fn check_uniqueness(
    full: &QuboInstance,
    clues: &ClueSet,
    k_checks: usize,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<UniquenessReport, GeneratorError> {
    let clamped = ClampedPuzzle::new(full, clues.clone(), ClampLevel::Full)?;
    let samples = anneal(&clamped.instance, k_checks, schedule, seed)?;
    Ok(UniquenessReport {
        solutions: distinct_solutions(&samples, Some(&clamped.assignment))?,
        ground_hits: samples.energies().filter(|&e| e == GROUND_ENERGY).count(),
        free_variables: clamped.free_variables(),
    })
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub min_clues: usize,
    pub k_checks: usize,
    pub max_restarts: usize,
    pub seed: u64,
    pub lambda: f64,
    pub schedule: AnnealSchedule,
    /// Readouts per attempt at sampling a solved grid.
    pub solution_batch: usize,
    /// Batches tried before giving up on finding a solved grid.
    pub solution_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            min_clues: 30,
            k_checks: 50,
            max_restarts: 100,
            seed: 0,
            lambda: DEFAULT_LAMBDA,
            schedule: AnnealSchedule::default(),
            solution_batch: 100,
            solution_attempts: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratedPuzzle {
    pub puzzle: String,
    pub solution: String,
    pub clues: usize,
    /// Restarts taken before this puzzle passed the check.
    pub restarts: usize,
    pub k_checks: usize,
    pub seed: u64,
    #[serde(skip)]
    pub clue_set: ClueSet,
    #[serde(skip)]
    pub solution_grid: SudokuGrid,
}

fn validate_config(config: &GeneratorConfig) -> Result<(), GeneratorError> {
    if config.min_clues < MIN_UNIQUE_CLUES {
        return Err(GeneratorError::TooFewClues(config.min_clues));
    }
    if config.min_clues > 81 {
        return Err(GeneratorError::TooManyClues(config.min_clues));
    }
    if config.k_checks < 2 {
        return Err(GeneratorError::TooFewChecks(config.k_checks));
    }
    Ok(())
}

fn sample_solved_grid(
    full: &QuboInstance,
    config: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<SudokuGrid, GeneratorError> {
    for _ in 0..config.solution_attempts {
        let samples = anneal(full, config.solution_batch, &config.schedule, rng.gen())?;
        if let Some(&grid) = distinct_solutions(&samples, None)?.first() {
            return Ok(grid);
        }
    }
    Err(GeneratorError::NoSolvedGrid {
        attempts: config.solution_attempts,
    })
}

/// Generates a puzzle with `min_clues` clues that passed the sampling
/// uniqueness check.
pub fn generate_puzzle(config: &GeneratorConfig) -> Result<GeneratedPuzzle, GeneratorError> {
    validate_config(config)?;
    let full = build_sudoku_qubo(config.lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for restart in 0..config.max_restarts {
        let solved = sample_solved_grid(&full, config, &mut rng)?;
        let cells = index::sample(&mut rng, 81, config.min_clues);
        let mut puzzle = SudokuGrid::empty();
        for cell in cells.iter() {
            let (r, c) = (cell / 9, cell % 9);
            puzzle.set(r, c, solved.get(r, c));
        }
        let clues = ClueSet::from_grid(&puzzle)?;
        let report = check_uniqueness(&full, &clues, config.k_checks, &config.schedule, rng.gen())?;
        let conflicting = report.solutions.iter().any(|g| *g != solved);
        if report.is_ambiguous() || conflicting {
            continue;
        }
        return Ok(GeneratedPuzzle {
            puzzle: puzzle.to_puzzle_string(),
            solution: solved.to_puzzle_string(),
            clues: clues.len(),
            restarts: restart,
            k_checks: config.k_checks,
            seed: config.seed,
            clue_set: clues,
            solution_grid: solved,
        });
    }
    Err(GeneratorError::Exhausted {
        restarts: config.max_restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::Sample;
    use crate::sudoku::encode;

    const SOLVED: &str = "713854629852697341469312857645139278928765134137248965296571483581423796374986512";

    #[test]
    fn config_validation() {
        let base = GeneratorConfig::default();
        let err = generate_puzzle(&GeneratorConfig {
            min_clues: 16,
            ..base.clone()
        })
        .unwrap_err();
        assert!(matches!(err, GeneratorError::TooFewClues(16)));
        assert!(err.to_string().contains("17"));
        assert!(matches!(
            generate_puzzle(&GeneratorConfig {
                min_clues: 82,
                ..base.clone()
            }),
            Err(GeneratorError::TooManyClues(82))
        ));
        assert!(matches!(
            generate_puzzle(&GeneratorConfig { k_checks: 1, ..base }),
            Err(GeneratorError::TooFewChecks(1))
        ));
    }

    #[test]
    fn duplicates_are_removed() {
        let g: SudokuGrid = SOLVED.parse().unwrap();
        let mut other = g;
        // swapping digits 1 and 2 everywhere keeps the grid valid
        for r in 0..9 {
            for c in 0..9 {
                let d = g.get(r, c).unwrap();
                other.set(
                    r,
                    c,
                    Some(match d {
                        1 => 2,
                        2 => 1,
                        d => d,
                    }),
                );
            }
        }
        let mut partial = g;
        partial.set(0, 0, None);
        let sample = |grid: &SudokuGrid, energy| Sample {
            bits: encode(grid),
            energy,
        };
        let set = SampleSet::from_samples(
            vec![
                sample(&g, -81.0),
                sample(&partial, -80.0),
                sample(&other, -81.0),
                sample(&g, -81.0),
                sample(&other, -81.0),
            ],
            729,
            0,
        );
        assert_eq!(distinct_solutions(&set, None).unwrap(), vec![g, other]);
    }

    #[test]
    fn full_clue_count_returns_solution() {
        let config = GeneratorConfig {
            min_clues: 81,
            k_checks: 2,
            seed: 5,
            ..GeneratorConfig::default()
        };
        let p = generate_puzzle(&config).unwrap();
        assert_eq!(p.puzzle, p.solution);
        assert_eq!(p.clues, 81);
        assert_eq!(p.restarts, 0);
        assert!(validate_grid(&p.solution_grid).is_valid_solution());
    }
}
