//! `run`, `compare` and `arnas` experiments.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use embgo_core::algorithms::ResolvedAlgorithm;
use embgo_core::discrete::{
    brute_force_optimum, decode, load_table, synthetic_table, ArchCode, ArnasProblem, LookupTable,
};
use embgo_core::problems::build_problem;
use embgo_core::stats::{average_rank, mark_totals, significance_marks, ComparisonMatrix, Mark};
use embgo_core::{OptimizerConfig, Problem, RunResult};
use serde::Serialize;

use crate::config::{AlgorithmSpec, ExperimentConfig};
use crate::error::CliError;
use crate::runner::{run_cells, trial_seed, Cell};

/// Significance level of the comparison marks.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub best: f64,
    pub worst: f64,
}

#[derive(Debug)]
pub struct RunReport {
    pub summary: Vec<SummaryRow>,
    pub summary_path: PathBuf,
    pub trace_files: Vec<PathBuf>,
    /// Per-trial results in `[problem][algorithm][trial]` order.
    pub results: Vec<Vec<Vec<RunResult>>>,
}

#[derive(Debug)]
pub struct CompareReport {
    pub run: RunReport,
    pub matrix: ComparisonMatrix,
    pub reference: String,
    pub marks: Vec<Vec<Option<Mark>>>,
    pub ranks: Vec<f64>,
    pub report_path: PathBuf,
    pub text: String,
}

/// Runs every (problem, algorithm, trial) cell, writes one trace per trial
/// and `summary.csv`.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let problems: Vec<Box<dyn Problem>> = config
        .problems
        .iter()
        .map(|p| build_problem(p, config.dim))
        .collect::<Result<_, _>>()?;
    let algorithms: Vec<ResolvedAlgorithm> = config
        .algorithms
        .iter()
        .map(AlgorithmSpec::resolve)
        .collect::<Result<_, _>>()?;

    let mut cells = Vec::new();
    for problem in &problems {
        for (spec, alg) in config.algorithms.iter().zip(&algorithms) {
            for t in 0..config.trials {
                cells.push(Cell {
                    problem: problem.as_ref(),
                    optimizer: alg.optimizer.as_ref(),
                    config: OptimizerConfig::new(
                        config.pop_size,
                        config.budget_for(spec),
                        trial_seed(config.seed, t),
                    ),
                });
            }
        }
    }
    let mut flat = run_cells(&cells, config.jobs)?.into_iter();
    let results: Vec<Vec<Vec<RunResult>>> = problems
        .iter()
        .map(|_| {
            config
                .algorithms
                .iter()
                .map(|_| flat.by_ref().take(config.trials).collect())
                .collect()
        })
        .collect();

    let header = config_header(&config.resolved_json());
    let mut trace_files = Vec::new();
    let mut summary = Vec::new();
    for (p, name) in config.problems.iter().enumerate() {
        for (a, spec) in config.algorithms.iter().enumerate() {
            let runs = &results[p][a];
            for (t, r) in runs.iter().enumerate() {
                let path = config
                    .out
                    .join("traces")
                    .join(name)
                    .join(&spec.label)
                    .join(format!("trial-{t:03}.csv"));
                let context = format!(
                    "# problem: {name}, algorithm: {}, trial: {t}, seed: {}\n",
                    spec.label, r.seed
                );
                write_file(&path, &(header.clone() + &context + &trace_csv(r)))?;
                trace_files.push(path);
            }
            summary.push(summarize(name, &spec.label, runs));
        }
    }
    let summary_path = config.out.join("summary.csv");
    write_file(&summary_path, &(header + &summary_csv(&summary)))?;
    Ok(RunReport {
        summary,
        summary_path,
        trace_files,
        results,
    })
}

/// Runs all cells, then writes `comparison.txt` with mean ± std, marks
/// versus `reference` (default: the first algorithm) and average ranks.
pub fn cmd_compare(
    config: &ExperimentConfig,
    reference: Option<&str>,
) -> Result<CompareReport, CliError> {
    if config.algorithms.len() < 2 {
        return Err(CliError::Config(
            "compare needs at least two algorithms".into(),
        ));
    }
    let budgets: Vec<usize> = config
        .algorithms
        .iter()
        .map(|a| config.budget_for(a))
        .collect();
    if budgets.iter().any(|b| *b != budgets[0]) {
        let listing: Vec<String> = config
            .algorithms
            .iter()
            .zip(&budgets)
            .map(|(a, b)| format!("{}={b}", a.label))
            .collect();
        return Err(CliError::Config(format!(
            "unequal budgets ({}) make an unfair comparison",
            listing.join(", ")
        )));
    }
    let reference = match reference {
        Some(r) => config
            .algorithms
            .iter()
            .find(|a| a.label == r || a.name == r)
            .map(|a| a.label.clone())
            .ok_or_else(|| {
                CliError::Config(format!("reference '{r}' is not among the algorithms"))
            })?,
        None => config.algorithms[0].label.clone(),
    };

    let run = cmd_run(config)?;
    let samples = run
        .results
        .iter()
        .map(|row| {
            row.iter()
                .map(|runs| runs.iter().map(RunResult::best_fitness).collect())
                .collect()
        })
        .collect();
    let matrix = ComparisonMatrix::new(
        config.problems.clone(),
        config.algorithms.iter().map(|a| a.label.clone()).collect(),
        samples,
    )?;
    let marks = significance_marks(&matrix, &reference, ALPHA)?;
    let ranks = average_rank(&matrix);
    let text = config_header(&config.resolved_json())
        + &comparison_table(&matrix, &reference, &marks, &ranks);
    let report_path = config.out.join("comparison.txt");
    write_file(&report_path, &text)?;
    Ok(CompareReport {
        run,
        matrix,
        reference,
        marks,
        ranks,
        report_path,
        text,
    })
}

/// Where an ARNAS lookup table comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TableSource {
    File(PathBuf),
    /// The seeded in-repo generator.
    Synthetic(u64),
}

impl TableSource {
    /// `synthetic:<seed>` selects the generator; anything else is a path.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.strip_prefix("synthetic:") {
            Some(seed) => seed
                .parse()
                .map(TableSource::Synthetic)
                .map_err(|_| CliError::Config(format!("invalid synthetic table seed '{seed}'"))),
            None => Ok(TableSource::File(PathBuf::from(s))),
        }
    }

    pub fn load(&self) -> Result<LookupTable, CliError> {
        match self {
            TableSource::File(p) => Ok(load_table(p)?),
            TableSource::Synthetic(seed) => Ok(synthetic_table(*seed)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArnasConfig {
    pub table: TableSource,
    pub algorithm: AlgorithmSpec,
    pub pop_size: usize,
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(skip)]
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArnasTrial {
    pub trial: usize,
    pub seed: u64,
    pub code: String,
    pub accuracy: f64,
    /// Optimum accuracy minus the accuracy found; never negative.
    pub regret: f64,
}

#[derive(Debug)]
pub struct ArnasReport {
    pub optimum: (ArchCode, f64),
    pub trials: Vec<ArnasTrial>,
    pub results: Vec<RunResult>,
    pub report_path: PathBuf,
    pub text: String,
}

/// Searches the cell space of a lookup table and reports best code,
/// accuracy and regret against the exhaustive optimum.
pub fn cmd_arnas(config: &ArnasConfig) -> Result<ArnasReport, CliError> {
    if config.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    if config.budget < config.pop_size {
        return Err(CliError::Config(format!(
            "budget {} is smaller than the population size {}",
            config.budget, config.pop_size
        )));
    }
    let alg = config.algorithm.resolve()?;
    let table = config.table.load()?;
    let optimum = brute_force_optimum(&table)?;
    let problem = ArnasProblem::new(table);
    let cells: Vec<Cell> = (0..config.trials)
        .map(|t| Cell {
            problem: &problem,
            optimizer: alg.optimizer.as_ref(),
            config: OptimizerConfig::new(
                config.pop_size,
                config.budget,
                trial_seed(config.seed, t),
            ),
        })
        .collect();
    let results = run_cells(&cells, config.jobs)?;

    let mut echo = serde_json::to_value(config).expect("config serializes");
    echo["resolved"] = serde_json::to_value(&alg.params).expect("params serialize");
    let header = config_header(&echo.to_string());
    let mut trials = Vec::new();
    for (t, r) in results.iter().enumerate() {
        let code = decode(&r.best.position)?;
        let accuracy = -r.best_fitness();
        trials.push(ArnasTrial {
            trial: t,
            seed: r.seed,
            code: code.to_string(),
            accuracy,
            regret: (optimum.1 - accuracy).max(0.0),
        });
        let path = config.out.join("arnas").join(format!("trial-{t:03}.csv"));
        let context = format!("# trial: {t}, seed: {}, best code: {code}\n", r.seed);
        write_file(&path, &(header.clone() + &context + &trace_csv(r)))?;
    }

    let mut text = header;
    let t = problem.table();
    let _ = writeln!(
        text,
        "table: {} entries, dataset '{}', attack '{}'",
        t.len(),
        t.dataset,
        t.attack
    );
    let _ = writeln!(text, "optimum: {} accuracy {}", optimum.0, optimum.1);
    let _ = writeln!(
        text,
        "algorithm: {}, population {}, budget {}",
        config.algorithm.label, config.pop_size, config.budget
    );
    let _ = writeln!(
        text,
        "{:>5}  {:>20}  {:>6}  {:>10}  {:>10}",
        "trial", "seed", "code", "accuracy", "regret"
    );
    for r in &trials {
        let _ = writeln!(
            text,
            "{:>5}  {:>20}  {:>6}  {:>10.4}  {:>10.4}",
            r.trial, r.seed, r.code, r.accuracy, r.regret
        );
    }
    let report_path = config.out.join("arnas_report.txt");
    write_file(&report_path, &text)?;
    Ok(ArnasReport {
        optimum,
        trials,
        results,
        report_path,
        text,
    })
}

// ---------------------------------------------------------------------------

fn config_header(json: &str) -> String {
    format!("# config: {json}\n")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// `fes,best_fitness,diversity`, one row per checkpoint.
pub fn trace_csv(r: &RunResult) -> String {
    let mut s = String::from("fes,best_fitness,diversity\n");
    for (t, d) in r.trace.iter().zip(&r.diversity_trace) {
        let _ = writeln!(s, "{},{},{}", t.fes, t.best_fitness, d.diversity);
    }
    s
}

fn summarize(problem: &str, algorithm: &str, runs: &[RunResult]) -> SummaryRow {
    let f: Vec<f64> = runs.iter().map(RunResult::best_fitness).collect();
    let n = f.len() as f64;
    let mean = f.iter().sum::<f64>() / n;
    let std = if f.len() > 1 {
        (f.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    SummaryRow {
        problem: problem.to_string(),
        algorithm: algorithm.to_string(),
        trials: f.len(),
        mean,
        std,
        best: f.iter().copied().fold(f64::INFINITY, f64::min),
        worst: f.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from("problem,algorithm,trials,mean,std,best,worst\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.problem, r.algorithm, r.trials, r.mean, r.std, r.best, r.worst
        );
    }
    s
}

fn comparison_table(
    m: &ComparisonMatrix,
    reference: &str,
    marks: &[Vec<Option<Mark>>],
    ranks: &[f64],
) -> String {
    let k = m.algorithms.len();
    let first = m
        .problems
        .iter()
        .map(String::len)
        .chain(["Avg. rank".len(), "+/≈/−".chars().count()])
        .max()
        .unwrap_or(0);
    let cell = |p: usize, a: usize| {
        let mark = marks[p][a]
            .map(|x| format!(" {}", x.symbol()))
            .unwrap_or_default();
        format!("{:.3e} ± {:.2e}{mark}", m.mean(p, a), m.std(p, a))
    };
    let mut width = m.algorithms.iter().map(String::len).max().unwrap_or(0);
    for p in 0..m.problems.len() {
        for a in 0..k {
            width = width.max(cell(p, a).chars().count());
        }
    }
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));

    let mut out = format!(
        "# reference: {reference}; marks from two-sided Mann–Whitney U with Holm correction, alpha {ALPHA}\n"
    );
    let row = |label: &str, cols: Vec<String>| {
        let mut line = pad(label, first);
        for c in cols {
            line.push_str("  ");
            line.push_str(&pad(&c, width));
        }
        line.trim_end().to_string() + "\n"
    };
    out.push_str(&row("problem", m.algorithms.clone()));
    for p in 0..m.problems.len() {
        out.push_str(&row(&m.problems[p], (0..k).map(|a| cell(p, a)).collect()));
    }
    let totals = mark_totals(marks, k);
    out.push_str(&row(
        "+/≈/−",
        totals
            .iter()
            .zip(&m.algorithms)
            .map(|(&(plus, approx, minus), name)| {
                if name == reference {
                    "-".to_string()
                } else {
                    format!("{plus}/{approx}/{minus}")
                }
            })
            .collect(),
    ));
    out.push_str(&row(
        "Avg. rank",
        ranks.iter().map(|r| format!("{r:.2}")).collect(),
    ));
    out
}
