#![allow(dead_code)]

use rand::seq::{index, SliceRandom};
use rand::Rng;
use sudoku_qubo::sudoku::{ClueSet, SudokuGrid};
use sudoku_qubo::QuboInstance;

/// Hard puzzle with 24 clues (New York Times, 8 January 2024).
pub const NYT_PUZZLE: &str = "000000020000090040000302007605100008000705100030200005090070003080000090004006500";

/// Its unique solution, computed by [`count_solutions`]-style backtracking.
pub const NYT_SOLUTION: &str = "713854629852697341469312857645139278928765134137248965296571483581423796374986512";

/// The 24 clues as printed, 1-based (row, column, digit).
pub const NYT_CLUES_1_BASED: [(u8, u8, u8); 24] = [
    (1, 8, 2),
    (2, 5, 9),
    (2, 8, 4),
    (3, 4, 3),
    (3, 6, 2),
    (3, 9, 7),
    (4, 1, 6),
    (4, 3, 5),
    (4, 4, 1),
    (4, 9, 8),
    (5, 4, 7),
    (5, 6, 5),
    (5, 7, 1),
    (6, 2, 3),
    (6, 4, 2),
    (6, 9, 5),
    (7, 2, 9),
    (7, 5, 7),
    (7, 9, 3),
    (8, 2, 8),
    (8, 8, 9),
    (9, 3, 4),
    (9, 6, 6),
    (9, 7, 5),
];

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/bench_puzzles.csv");

/// A minimal 23-clue puzzle with the clue at cell 52 (row 5, column 7,
/// 0-based) removed; it has 27 solutions.
pub const AMBIGUOUS_PUZZLE: &str = "600200000003070090800401200014007000000069700900050000032000000100000080090000000";

pub fn nyt_solution() -> SudokuGrid {
    NYT_SOLUTION.parse().unwrap()
}

pub fn nyt_puzzle() -> SudokuGrid {
    NYT_PUZZLE.parse().unwrap()
}

fn candidates(g: &[[u8; 9]; 9], r: usize, c: usize) -> Vec<u8> {
    (1..=9)
        .filter(|&d| {
            (0..9).all(|k| g[r][k] != d && g[k][c] != d)
                && (0..9).all(|k| g[3 * (r / 3) + k / 3][3 * (c / 3) + k % 3] != d)
        })
        .collect()
}

fn count_rec(g: &mut [[u8; 9]; 9], limit: usize, found: &mut Vec<[[u8; 9]; 9]>) {
    let mut best: Option<(usize, usize, Vec<u8>)> = None;
    for r in 0..9 {
        for c in 0..9 {
            if g[r][c] == 0 {
                let cs = candidates(g, r, c);
                if best.as_ref().is_none_or(|b| cs.len() < b.2.len()) {
                    best = Some((r, c, cs));
                }
            }
        }
    }
    let Some((r, c, cs)) = best else {
        found.push(*g);
        return;
    };
    for d in cs {
        if found.len() >= limit {
            return;
        }
        g[r][c] = d;
        count_rec(g, limit, found);
        g[r][c] = 0;
    }
}

/// Exact backtracking enumeration of a puzzle's solutions, up to `limit`.
pub fn solutions(puzzle: &SudokuGrid, limit: usize) -> Vec<SudokuGrid> {
    let mut g = [[0u8; 9]; 9];
    for r in 0..9 {
        for c in 0..9 {
            g[r][c] = puzzle.get(r, c).unwrap_or(0);
        }
    }
    let mut found = Vec::new();
    count_rec(&mut g, limit, &mut found);
    found
        .into_iter()
        .map(|cells| {
            let mut grid = SudokuGrid::empty();
            for r in 0..9 {
                for c in 0..9 {
                    grid.set(r, c, Some(cells[r][c]));
                }
            }
            grid
        })
        .collect()
}

/// Penalty condition straight from the rule list, on (row, col, value)
/// triples with no shared code path to the library predicate.
pub fn violates(a: (usize, usize, usize), b: (usize, usize, usize)) -> bool {
    let (i, j, k) = a;
    let (i2, j2, k2) = b;
    (i == i2 && j != j2 && k == k2)
        || (i != i2 && j == j2 && k == k2)
        || (i / 3 == i2 / 3 && j / 3 == j2 / 3 && k == k2)
        || (i == i2 && j == j2 && k != k2)
}

/// Number of distinct penalized pairs by double loop over all triples.
pub fn brute_force_pair_count() -> usize {
    let triples: Vec<(usize, usize, usize)> = (0..9)
        .flat_map(|i| (0..9).flat_map(move |j| (0..9).map(move |k| (i, j, k))))
        .collect();
    let mut count = 0;
    for a in 0..triples.len() {
        for b in a + 1..triples.len() {
            if violates(triples[a], triples[b]) {
                count += 1;
            }
        }
    }
    count
}

/// A valid grid obtained from `base` by relabeling digits and permuting
/// rows within bands and columns within stacks.
pub fn random_solved_grid<R: Rng>(rng: &mut R, base: &SudokuGrid) -> SudokuGrid {
    let mut digits: Vec<u8> = (1..=9).collect();
    digits.shuffle(rng);
    let mut rows: Vec<usize> = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    for band in 0..3 {
        let mut r: Vec<usize> = (0..3).map(|k| 3 * band + k).collect();
        r.shuffle(rng);
        rows.extend(r);
        let mut c: Vec<usize> = (0..3).map(|k| 3 * band + k).collect();
        c.shuffle(rng);
        cols.extend(c);
    }
    let mut out = SudokuGrid::empty();
    for r in 0..9 {
        for c in 0..9 {
            let d = base.get(rows[r], cols[c]).unwrap();
            out.set(r, c, Some(digits[d as usize - 1]));
        }
    }
    out
}

/// `count` cells of a solved grid kept as clues.
pub fn random_clues<R: Rng>(rng: &mut R, solved: &SudokuGrid, count: usize) -> (SudokuGrid, ClueSet) {
    let mut puzzle = SudokuGrid::empty();
    for cell in index::sample(rng, 81, count).iter() {
        puzzle.set(cell / 9, cell % 9, solved.get(cell / 9, cell % 9));
    }
    let clues = ClueSet::from_grid(&puzzle).unwrap();
    (puzzle, clues)
}

/// Random instance with small integer weights.
pub fn random_integer_instance<R: Rng>(rng: &mut R, n: usize, density: f64) -> QuboInstance {
    let mut q = QuboInstance::zeros(n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                q.set_weight(i, j, rng.gen_range(-6i32..=6) as f64).unwrap();
            }
        }
    }
    q.set_offset(rng.gen_range(-10i32..=10) as f64).unwrap();
    q
}
