mod common;

use common::*;
use sudoku_qubo::anneal::AnnealSchedule;
use sudoku_qubo::generator::{check_uniqueness, generate_puzzle, sample_solutions, GeneratorConfig};
use sudoku_qubo::solve::{solve_puzzle, SolveConfig};
use sudoku_qubo::sudoku::{
    build_sudoku_qubo, clues_to_assignment, encode, validate_grid, ClampLevel, ClueSet, SudokuGrid, DEFAULT_LAMBDA,
};

#[test]
fn sampled_solutions_are_valid_and_distinct() {
    let result = sample_solutions(200, 7, DEFAULT_LAMBDA, &AnnealSchedule::default()).unwrap();
    assert!(!result.grids.is_empty());
    assert!(result.ground_hits >= result.grids.len());
    let s = build_sudoku_qubo(DEFAULT_LAMBDA).unwrap();
    for (a, g) in result.grids.iter().enumerate() {
        assert!(validate_grid(g).is_valid_solution());
        assert_eq!(s.energy(&encode(g)).unwrap(), -81.0);
        assert!(result.grids[a + 1..].iter().all(|h| h != g));
    }
}

#[test]
fn ambiguous_clue_set_is_flagged() {
    let puzzle: SudokuGrid = AMBIGUOUS_PUZZLE.parse().unwrap();
    // exact oracle: the fixture has several solutions
    assert!(solutions(&puzzle, 100).len() >= 2);
    let s = build_sudoku_qubo(DEFAULT_LAMBDA).unwrap();
    let clues = ClueSet::from_grid(&puzzle).unwrap();
    let report = check_uniqueness(&s, &clues, 300, &AnnealSchedule::default(), 3).unwrap();
    assert!(
        report.is_ambiguous(),
        "only {} distinct solutions",
        report.solutions.len()
    );
    let exact = solutions(&puzzle, 100);
    for g in &report.solutions {
        assert!(exact.contains(g));
    }
}

#[test]
fn unique_puzzle_passes_the_check() {
    let s = build_sudoku_qubo(DEFAULT_LAMBDA).unwrap();
    let clues = ClueSet::from_grid(&nyt_puzzle()).unwrap();
    let report = check_uniqueness(&s, &clues, 200, &AnnealSchedule::default(), 1).unwrap();
    assert!(!report.is_ambiguous());
    assert_eq!(report.free_variables, 211);
    assert!(report.solutions.iter().all(|g| *g == nyt_solution()));
}

#[test]
fn generated_puzzle_is_sound() {
    let config = GeneratorConfig {
        min_clues: 40,
        k_checks: 50,
        seed: 11,
        ..GeneratorConfig::default()
    };
    let p = generate_puzzle(&config).unwrap();
    let puzzle: SudokuGrid = p.puzzle.parse().unwrap();
    let solution: SudokuGrid = p.solution.parse().unwrap();
    assert_eq!(puzzle.filled_count(), 40);
    assert!(puzzle.is_subset_of(&solution));
    assert!(validate_grid(&solution).is_valid_solution());
    assert_eq!(p.clue_set.len(), 40);

    // the companion solution sits at -81 after clamping and expansion
    let s = build_sudoku_qubo(DEFAULT_LAMBDA).unwrap();
    let pa = clues_to_assignment(&p.clue_set, ClampLevel::Full).unwrap();
    let x = encode(&solution);
    assert!(pa.is_consistent_with(&x));
    assert_eq!(s.clamp(&pa).unwrap().energy(&pa.project(&x).unwrap()).unwrap(), -81.0);

    // exact oracle agrees the puzzle is unique here
    assert_eq!(solutions(&puzzle, 2), vec![solution]);

    let report = solve_puzzle(
        &puzzle,
        &SolveConfig {
            seed: 999,
            readouts: 200,
            ..SolveConfig::default()
        },
    )
    .unwrap();
    assert_eq!(report.solution, Some(solution));

    let json = serde_json::to_value(&p).unwrap();
    for key in ["puzzle", "solution", "clues", "restarts", "k_checks", "seed"] {
        assert!(json.get(key).is_some(), "{key} missing");
    }
}

#[test]
fn generation_is_seed_deterministic() {
    let config = GeneratorConfig {
        min_clues: 45,
        k_checks: 10,
        seed: 2,
        ..GeneratorConfig::default()
    };
    let a = generate_puzzle(&config).unwrap();
    let b = generate_puzzle(&config).unwrap();
    assert_eq!(a.puzzle, b.puzzle);
    assert_eq!(a.solution, b.solution);
}
