use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use embgo_cli::commands::{ArnasConfig, TableSource};
use embgo_cli::config::{
    algorithm_specs, ExperimentConfig, ARNAS_BUDGET, ARNAS_POP, BUDGET_PER_DIM, DEFAULT_POP,
    DEFAULT_TRIALS,
};
use embgo_cli::{cmd_arnas, cmd_compare, cmd_run, CliError};

#[derive(Parser)]
#[command(name = "embgo", version, about = "Seeded MBGO/EMBGO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms on problems and write traces plus summary.csv.
    Run(Common),
    /// Run and compare algorithms; writes comparison.txt with marks and ranks.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Algorithm the marks are computed against (default: the first).
        #[arg(long)]
        reference: Option<String>,
    },
    /// Search a lookup table of cell architectures.
    Arnas {
        /// Table file (`code,accuracy` lines) or `synthetic:<seed>`.
        #[arg(long)]
        table: String,
        #[arg(long, default_value = "embgo")]
        algorithm: String,
        #[arg(long, default_value_t = ARNAS_POP)]
        pop: usize,
        #[arg(long, default_value_t = ARNAS_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Common {
    /// Problem name; repeatable or comma-separated.
    #[arg(long = "problem", required = true, value_delimiter = ',')]
    problems: Vec<String>,
    /// Algorithm name; repeatable or comma-separated.
    #[arg(long = "algorithm", required = true, value_delimiter = ',')]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_POP)]
    pop: usize,
    /// Evaluation budget per run (default: 10000 × dim).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Base seed; trial k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parameter override `key=value` or `algorithm.key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Output directory.
    #[arg(long, env = "EMBGO_OUT", default_value = "results")]
    out: PathBuf,
    /// Concurrent trials (0 = one per core). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Common {
    fn config(self) -> Result<ExperimentConfig, CliError> {
        let budget = self.budget.unwrap_or(BUDGET_PER_DIM * self.dim);
        Ok(ExperimentConfig::new(
            self.problems,
            self.algorithms,
            &self.params,
            self.dim,
            self.pop,
            budget,
            self.trials,
            self.seed,
            self.output.out,
        )?
        .with_jobs(self.output.jobs))
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => {
            let report = cmd_run(&common.config()?)?;
            for r in &report.summary {
                println!(
                    "{} {}: mean {:.6e} std {:.3e} best {:.6e} worst {:.6e} ({} trials)",
                    r.problem, r.algorithm, r.mean, r.std, r.best, r.worst, r.trials
                );
            }
            println!("wrote {}", report.summary_path.display());
        }
        Command::Compare { common, reference } => {
            let report = cmd_compare(&common.config()?, reference.as_deref())?;
            print!(
                "{}",
                report
                    .text
                    .lines()
                    .skip(1)
                    .map(|l| format!("{l}\n"))
                    .collect::<String>()
            );
            println!("wrote {}", report.report_path.display());
        }
        Command::Arnas {
            table,
            algorithm,
            pop,
            budget,
            trials,
            seed,
            params,
            output,
        } => {
            let spec = algorithm_specs(&[algorithm], &params)?.remove(0);
            if spec.budget.is_some() {
                return Err(CliError::Config(
                    "set the ARNAS budget with --budget".into(),
                ));
            }
            let config = ArnasConfig {
                table: TableSource::parse(&table)?,
                algorithm: spec,
                pop_size: pop,
                budget,
                trials,
                seed,
                out: output.out,
                jobs: output.jobs,
            };
            let report = cmd_arnas(&config)?;
            print!(
                "{}",
                report
                    .text
                    .lines()
                    .skip(1)
                    .map(|l| format!("{l}\n"))
                    .collect::<String>()
            );
            println!("wrote {}", report.report_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("embgo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
