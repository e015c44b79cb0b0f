//! Sudoku encoded as a quadratic unconstrained binary optimization (QUBO)
//! problem.
//!
//! The crate is organised bottom-up:
//!
//! - [`qubo`]: generic upper-triangular QUBO instances, energy evaluation,
//!   clamping of fixed variables and an exhaustive oracle for small sizes.
//! - [`sudoku`]: the 729-variable one-hot encoding of a 9×9 grid, the penalty
//!   matrix, translation of clues into partial assignments, and grid I/O.
//! - [`anneal`]: a seeded, parallel single-bit-flip simulated annealer.
//! - [`solve`]: the puzzle → clamp → anneal → decode pipeline.
//! - [`generator`]: sampling solved grids and generating puzzles whose
//!   uniqueness is checked by sampling.
//! - [`bench`]: dataset ingestion and the clue-count benchmark.
//!
//! ```
//! use sudoku_qubo::sudoku::{build_sudoku_qubo, encode, SudokuGrid, DEFAULT_LAMBDA, GROUND_ENERGY};
//!
//! let solved: SudokuGrid =
//!     "713854629852697341469312857645139278928765134137248965296571483581423796374986512"
//!         .parse()
//!         .unwrap();
//! let s = build_sudoku_qubo(DEFAULT_LAMBDA).unwrap();
//! assert_eq!(s.energy(&encode(&solved)).unwrap(), GROUND_ENERGY);
//! ```

pub mod anneal;
pub mod bench;
pub mod generator;
pub mod qubo;
pub mod solve;
pub mod sudoku;

pub use anneal::{anneal, AnnealSchedule, SampleSet, SummaryStats};
pub use qubo::{BitVector, PartialAssignment, QuboError, QuboInstance};
pub use sudoku::{ClampLevel, ClueSet, SudokuGrid};
