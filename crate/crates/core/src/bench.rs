//! Puzzle dataset ingestion and the clue-count benchmark.
//!
//! Datasets are CSV files with a header row and a required `puzzle` column;
//! `solution`, `clues` and `difficulty` are read when present. Clue counts
//! are always recomputed from the puzzle string.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::anneal::AnnealSchedule;
use crate::solve::{solve_puzzle, SolveConfig, SolveError};
use crate::sudoku::{ClampLevel, SudokuError, SudokuGrid, GROUND_ENERGY};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read dataset {path}: {source}")]
    Read { path: String, source: csv::Error },
    #[error("dataset has no `{0}` column")]
    MissingColumn(&'static str),
    #[error("dataset row {row}: {source}")]
    BadPuzzle { row: usize, source: SudokuError },
    #[error("no puzzle with {0} clues in the dataset")]
    NoPuzzleWithClues(usize),
    #[error("clue count {0} outside 17..=81")]
    ClueCountRange(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPuzzle {
    /// 1-based data row.
    pub row: usize,
    pub puzzle: SudokuGrid,
    pub solution: Option<SudokuGrid>,
    pub difficulty: Option<f64>,
}

impl DatasetPuzzle {
    pub fn clue_count(&self) -> usize {
        self.puzzle.filled_count()
    }
}

pub fn load_dataset(path: &Path) -> Result<Vec<DatasetPuzzle>, BenchError> {
    let read_err = |source| BenchError::Read {
        path: path.display().to_string(),
        source,
    };
    let reader = csv::Reader::from_path(path).map_err(read_err)?;
    read_dataset(reader).map_err(|e| match e {
        BenchError::Read { source, .. } => read_err(source),
        other => other,
    })
}

pub fn read_dataset<R: std::io::Read>(mut reader: csv::Reader<R>) -> Result<Vec<DatasetPuzzle>, BenchError> {
    let read_err = |source| BenchError::Read {
        path: String::from("<input>"),
        source,
    };
    let headers = reader.headers().map_err(read_err)?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let puzzle_col = column("puzzle").ok_or(BenchError::MissingColumn("puzzle"))?;
    let solution_col = column("solution");
    let difficulty_col = column("difficulty");

    let mut out = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(read_err)?;
        let row = k + 1;
        let bad = |source| BenchError::BadPuzzle { row, source };
        let puzzle: SudokuGrid = record.get(puzzle_col).unwrap_or("").parse().map_err(bad)?;
        let solution = match solution_col.and_then(|c| record.get(c)).filter(|s| !s.is_empty()) {
            Some(s) => Some(s.parse().map_err(bad)?),
            None => None,
        };
        let difficulty = difficulty_col
            .and_then(|c| record.get(c))
            .and_then(|s| s.trim().parse().ok());
        out.push(DatasetPuzzle {
            row,
            puzzle,
            solution,
            difficulty,
        });
    }
    Ok(out)
}

/// First puzzle (in file order) for each requested clue count.
pub fn first_per_clue_count<'a>(
    puzzles: &'a [DatasetPuzzle],
    clue_counts: &[usize],
) -> Result<Vec<(usize, &'a DatasetPuzzle)>, BenchError> {
    let mut first: BTreeMap<usize, &DatasetPuzzle> = BTreeMap::new();
    for p in puzzles {
        first.entry(p.clue_count()).or_insert(p);
    }
    clue_counts
        .iter()
        .map(|&n| {
            if !(17..=81).contains(&n) {
                return Err(BenchError::ClueCountRange(n));
            }
            first.get(&n).map(|&p| (n, p)).ok_or(BenchError::NoPuzzleWithClues(n))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub readouts: usize,
    pub schedule: AnnealSchedule,
    pub seed: u64,
    pub lambda: f64,
    pub level: ClampLevel,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub clues: usize,
    pub dataset_row: usize,
    pub puzzle: String,
    pub variables: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
    pub solved: bool,
    /// Whether the best grid equals the dataset's solution; empty when the
    /// dataset has none.
    pub matches_solution: Option<bool>,
    pub wall_time_s: f64,
}

/// Solves the first puzzle for each clue count and records the energy
/// distribution of the samples.
pub fn run_bench(
    puzzles: &[DatasetPuzzle],
    clue_counts: &[usize],
    config: &BenchConfig,
) -> Result<Vec<BenchRow>, BenchError> {
    let selected = first_per_clue_count(puzzles, clue_counts)?;
    let mut rows = Vec::with_capacity(selected.len());
    for (clues, p) in selected {
        let start = Instant::now();
        let solve_config = SolveConfig {
            lambda: config.lambda,
            level: config.level,
            readouts: config.readouts,
            schedule: config.schedule,
            seed: config.seed,
        };
        let report = solve_puzzle(&p.puzzle, &solve_config)?;
        let s = &report.summary;
        rows.push(BenchRow {
            clues,
            dataset_row: p.row,
            puzzle: report.puzzle.clone(),
            variables: report.variables_solved,
            min: s.min,
            median: s.median,
            max: s.max,
            mean: s.mean,
            stddev: s.stddev,
            solved: s.min == GROUND_ENERGY,
            matches_solution: p.solution.map(|sol| report.solution == Some(sol)),
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }
    Ok(rows)
}

pub fn write_rows_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DATA: &str = "id,puzzle,solution,clues,difficulty
a,000000020000090040000302007605100008000705100030200005090070003080000090004006500,713854629852697341469312857645139278928765134137248965296571483581423796374986512,99,2.5
b,.13854629852697341469312857645139278928765134137248965296571483581423796374986512,,80,
c,713854629852697341469312857645139278928765134137248965296571483581423796374986512,,0,
";

    fn data() -> Vec<DatasetPuzzle> {
        read_dataset(csv::Reader::from_reader(DATA.as_bytes())).unwrap()
    }

    #[test]
    fn loads_and_recounts_clues() {
        let d = data();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0].clue_count(), 24);
        assert_eq!(d[0].difficulty, Some(2.5));
        assert!(d[0].solution.is_some());
        assert_eq!(d[1].clue_count(), 80);
        assert_eq!(d[1].solution, None);
    }

    #[test]
    fn missing_column() {
        let r = csv::Reader::from_reader("id,quiz\n1,2\n".as_bytes());
        assert!(matches!(read_dataset(r), Err(BenchError::MissingColumn("puzzle"))));
    }

    #[test]
    fn bad_row_reported() {
        let r = csv::Reader::from_reader("puzzle\n123\n".as_bytes());
        assert!(matches!(read_dataset(r), Err(BenchError::BadPuzzle { row: 1, .. })));
    }

    #[test]
    fn selection() {
        let d = data();
        let picked = first_per_clue_count(&d, &[81, 24]).unwrap();
        assert_eq!(picked[0].1.row, 3);
        assert_eq!(picked[1].1.row, 1);
        assert!(matches!(
            first_per_clue_count(&d, &[30]),
            Err(BenchError::NoPuzzleWithClues(30))
        ));
        assert!(matches!(
            first_per_clue_count(&d, &[5]),
            Err(BenchError::ClueCountRange(5))
        ));
        assert!(first_per_clue_count(&d, &[]).unwrap().is_empty());
    }

    #[test]
    fn bench_rows() {
        let config = BenchConfig {
            readouts: 10,
            schedule: AnnealSchedule::default(),
            seed: 1,
            lambda: 3.0,
            level: ClampLevel::Full,
        };
        let rows = run_bench(&data(), &[80, 81], &config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.solved == (r.min == -81.0)));
        assert!(rows[0].solved);
        assert_eq!(rows[1].variables, 0);
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("clues,dataset_row,puzzle,variables,min"));
        assert!(run_bench(&data(), &[], &config).unwrap().is_empty());
    }
}
