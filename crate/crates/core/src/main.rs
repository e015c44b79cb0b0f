use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sudoku_qubo::anneal::{AnnealSchedule, Interpolation, SweepOrder};
use sudoku_qubo::bench::{load_dataset, run_bench, write_rows_csv, BenchConfig};
use sudoku_qubo::generator::{generate_puzzle, sample_solutions, GeneratorConfig, GeneratorError};
use sudoku_qubo::solve::{solve_puzzle, SolveConfig};
use sudoku_qubo::sudoku::{build_sudoku_qubo, clues_to_assignment, ClampLevel, ClueSet, SudokuGrid};

const EXIT_OK: u8 = 0;
const EXIT_UNSOLVED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "sudoku-qubo",
    version,
    about = "Solve, sample and generate Sudoku through a QUBO encoding"
)]
struct Cli {
    /// Penalty weight for rule violations (must exceed 2).
    #[arg(long, global = true, default_value_t = 3.0)]
    lambda: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Basic,
    Full,
}

impl From<Level> for ClampLevel {
    fn from(l: Level) -> Self {
        match l {
            Level::Basic => ClampLevel::Basic,
            Level::Full => ClampLevel::Full,
        }
    }
}

#[derive(Args, Clone)]
struct AnnealArgs {
    #[arg(long)]
    readouts: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
    #[arg(long, default_value_t = 2.0)]
    beta_start: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_end: f64,
    #[arg(long, default_value = "geometric")]
    interpolation: Interpolation,
    /// Visit variables in a fresh random order each sweep.
    #[arg(long)]
    random_order: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for annealing (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl AnnealArgs {
    fn schedule(&self) -> Result<AnnealSchedule, String> {
        let s = AnnealSchedule::new(self.beta_start, self.beta_end, self.sweeps, self.interpolation)
            .map_err(|e| e.to_string())?;
        Ok(if self.random_order {
            s.with_order(SweepOrder::Random)
        } else {
            s
        })
    }

    fn readouts(&self, default: usize) -> usize {
        self.readouts.unwrap_or(default)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the penalty matrix, optionally clamped by a puzzle, in instance text format.
    Build {
        /// 81-character puzzle; `0` or `.` marks an empty cell.
        #[arg(long)]
        puzzle: Option<String>,
        #[arg(long, value_enum, default_value_t = Level::Full)]
        clamp_level: Level,
        /// Output file (default: stdout).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write the dense symmetric matrix 0.5 (Q + Q^T) as CSV, for plotting.
        #[arg(long)]
        symmetric: Option<PathBuf>,
    },
    /// Solve a puzzle by annealing the clamped instance.
    Solve {
        puzzle: String,
        #[arg(long, value_enum, default_value_t = Level::Full)]
        clamp_level: Level,
        #[command(flatten)]
        anneal: AnnealArgs,
        /// Write all samples as CSV (readout_index, energy, hex bits).
        #[arg(long)]
        samples_csv: Option<PathBuf>,
    },
    /// Solve the first dataset puzzle for each clue count and report energy statistics.
    Bench {
        #[arg(long)]
        dataset: PathBuf,
        /// Clue counts, e.g. `19..31` or `23,25,27`.
        #[arg(long, default_value = "19..31")]
        clues: String,
        #[arg(long, value_enum, default_value_t = Level::Full)]
        clamp_level: Level,
        #[command(flatten)]
        anneal: AnnealArgs,
    },
    /// Sample solved grids from the unclamped instance.
    Sample {
        #[command(flatten)]
        anneal: AnnealArgs,
    },
    /// Generate puzzles whose uniqueness is checked by sampling.
    Generate {
        #[arg(long, default_value_t = 30)]
        clues: usize,
        #[arg(long, default_value_t = 50)]
        k_checks: usize,
        #[arg(long, default_value_t = 100)]
        max_restarts: usize,
        /// Number of puzzles; puzzle `i` uses seed `seed + i`.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        anneal: AnnealArgs,
    },
}

enum Failure {
    Input(String),
    Unsolved(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let threads = match &cli.command {
        Command::Solve { anneal, .. }
        | Command::Bench { anneal, .. }
        | Command::Sample { anneal }
        | Command::Generate { anneal, .. } => anneal.threads,
        Command::Build { .. } => None,
    };
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let result = match &cli.command {
        Command::Build {
            puzzle,
            clamp_level,
            output,
            symmetric,
        } => cmd_build(
            &cli,
            puzzle.as_deref(),
            (*clamp_level).into(),
            output.as_ref(),
            symmetric.as_ref(),
        ),
        Command::Solve {
            puzzle,
            clamp_level,
            anneal,
            samples_csv,
        } => cmd_solve(&cli, puzzle, (*clamp_level).into(), anneal, samples_csv.as_ref()),
        Command::Bench {
            dataset,
            clues,
            clamp_level,
            anneal,
        } => cmd_bench(&cli, dataset, clues, (*clamp_level).into(), anneal),
        Command::Sample { anneal } => cmd_sample(&cli, anneal),
        Command::Generate {
            clues,
            k_checks,
            max_restarts,
            count,
            anneal,
        } => cmd_generate(&cli, *clues, *k_checks, *max_restarts, *count, anneal),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Unsolved(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_UNSOLVED)
        }
    }
}

fn parse_puzzle(s: &str) -> Result<SudokuGrid, Failure> {
    s.parse::<SudokuGrid>()
        .map_err(|e| Failure::Input(format!("malformed puzzle: {e}")))
}

fn cmd_build(
    cli: &Cli,
    puzzle: Option<&str>,
    level: ClampLevel,
    output: Option<&PathBuf>,
    symmetric: Option<&PathBuf>,
) -> CmdResult {
    let full = build_sudoku_qubo(cli.lambda)?;
    let (instance, level_label) = match puzzle {
        Some(p) => {
            let clues = ClueSet::from_grid(&parse_puzzle(p)?)?;
            let pa = clues_to_assignment(&clues, level)?;
            (full.clamp(&pa)?, level.to_string())
        }
        None => (full, String::from("none")),
    };
    let mut text = format!(
        "# n {} offset {} lambda {} clamp {}\n",
        instance.n(),
        instance.offset(),
        cli.lambda,
        level_label
    );
    text.push_str(&instance.to_text());
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = symmetric {
        let n = instance.n();
        let dense = instance.symmetrized();
        let mut w = BufWriter::new(File::create(path)?);
        for row in dense.chunks(n.max(1)) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()?;
    }
    if cli.verbose {
        eprintln!(
            "wrote {} variables, {} nonzero weights",
            instance.n(),
            instance.nonzero_count()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_solve(
    cli: &Cli,
    puzzle: &str,
    level: ClampLevel,
    anneal: &AnnealArgs,
    samples_csv: Option<&PathBuf>,
) -> CmdResult {
    let grid = parse_puzzle(puzzle)?;
    let config = SolveConfig {
        lambda: cli.lambda,
        level,
        readouts: anneal.readouts(1000),
        schedule: anneal.schedule().map_err(Failure::Input)?,
        seed: anneal.seed,
    };
    let report = solve_puzzle(&grid, &config)?;
    if let Some(path) = samples_csv {
        report.samples.write_csv(BufWriter::new(File::create(path)?))?;
    }

    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => {
            println!("clues,variables_basic,variables_full,variables_solved,best_energy,certified,grid");
            println!(
                "{},{},{},{},{},{},{}",
                report.clue_count,
                report.variables_basic,
                report.variables_full,
                report.variables_solved,
                report.best_energy,
                report.certified,
                report.grid.as_deref().unwrap_or("")
            );
        }
        Format::Text => {
            if let Some(g) = &report.grid {
                let parsed: SudokuGrid = g.parse()?;
                print!("{}", parsed.pretty());
            }
            println!("best energy: {}", report.best_energy);
            println!(
                "variables: {} -> {} ({} clamping)",
                report.variables, report.variables_solved, level
            );
            if cli.verbose {
                println!(
                    "reduced sizes: basic {} / full {}",
                    report.variables_basic, report.variables_full
                );
                let s = &report.summary;
                println!(
                    "energies: min {} median {} max {} mean {:.3} stddev {:.3} ({} readouts)",
                    s.min, s.median, s.max, s.mean, s.stddev, s.count
                );
            }
            println!("certified: {}", if report.certified { "yes (-81)" } else { "no" });
        }
    }
    if report.certified {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Unsolved(format!(
            "no valid solution within {} readouts (best energy {})",
            config.readouts, report.best_energy
        )))
    }
}

fn parse_clue_counts(spec: &str) -> Result<Vec<usize>, Failure> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.trim().parse()?;
        let b: usize = b.trim_start_matches('=').trim().parse()?;
        return Ok((a..=b).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(Failure::from))
        .collect()
}

fn cmd_bench(cli: &Cli, dataset: &Path, clues: &str, level: ClampLevel, anneal: &AnnealArgs) -> CmdResult {
    let counts = parse_clue_counts(clues)?;
    let puzzles = if counts.is_empty() {
        Vec::new()
    } else {
        load_dataset(dataset)?
    };
    let config = BenchConfig {
        readouts: anneal.readouts(2000),
        schedule: anneal.schedule().map_err(Failure::Input)?,
        seed: anneal.seed,
        lambda: cli.lambda,
        level,
    };
    let rows = run_bench(&puzzles, &counts, &config)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => write_rows_csv(&rows, io::stdout().lock())?,
        Format::Text => {
            println!(
                "{:>5} {:>5} {:>8} {:>8} {:>8} {:>9} {:>7} {:>6} {:>8}",
                "clues", "vars", "min", "median", "max", "mean", "stddev", "solved", "time_s"
            );
            for r in &rows {
                println!(
                    "{:>5} {:>5} {:>8} {:>8} {:>8} {:>9.3} {:>7.3} {:>6} {:>8.2}",
                    r.clues, r.variables, r.min, r.median, r.max, r.mean, r.stddev, r.solved, r.wall_time_s
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sample(cli: &Cli, anneal: &AnnealArgs) -> CmdResult {
    let readouts = anneal.readouts(10_000);
    let schedule = anneal.schedule().map_err(Failure::Input)?;
    let result = sample_solutions(readouts, anneal.seed, cli.lambda, &schedule)?;
    let grids: Vec<String> = result.grids.iter().map(SudokuGrid::to_puzzle_string).collect();
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "readouts": readouts,
                "ground_hits": result.ground_hits,
                "distinct": grids.len(),
                "seed": anneal.seed,
                "grids": grids,
            }))?
        ),
        Format::Csv => {
            println!("index,solution");
            for (i, g) in grids.iter().enumerate() {
                println!("{i},{g}");
            }
        }
        Format::Text => {
            for g in &grids {
                println!("{g}");
            }
            println!(
                "# {} distinct valid grids from {} samples at energy -81 out of {} readouts",
                grids.len(),
                result.ground_hits,
                readouts
            );
        }
    }
    if grids.is_empty() {
        Err(Failure::Unsolved(format!("no valid grid among {readouts} readouts")))
    } else {
        Ok(EXIT_OK)
    }
}

fn cmd_generate(
    cli: &Cli,
    clues: usize,
    k_checks: usize,
    max_restarts: usize,
    count: usize,
    anneal: &AnnealArgs,
) -> CmdResult {
    let schedule = anneal.schedule().map_err(Failure::Input)?;
    let mut records = Vec::with_capacity(count);
    for i in 0..count {
        let config = GeneratorConfig {
            min_clues: clues,
            k_checks,
            max_restarts,
            seed: anneal.seed.wrapping_add(i as u64),
            lambda: cli.lambda,
            schedule,
            ..GeneratorConfig::default()
        };
        match generate_puzzle(&config) {
            Ok(p) => records.push(p),
            Err(e @ (GeneratorError::Exhausted { .. } | GeneratorError::NoSolvedGrid { .. })) => {
                return Err(Failure::Unsolved(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        }
    }
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&records)?),
        Format::Csv => {
            println!("puzzle,solution,clues,restarts,k_checks,seed");
            for r in &records {
                println!(
                    "{},{},{},{},{},{}",
                    r.puzzle, r.solution, r.clues, r.restarts, r.k_checks, r.seed
                );
            }
        }
        Format::Text => {
            for r in &records {
                println!("{}", r.puzzle);
                if cli.verbose {
                    println!("# solution {} restarts {} seed {}", r.solution, r.restarts, r.seed);
                }
            }
        }
    }
    Ok(EXIT_OK)
}
