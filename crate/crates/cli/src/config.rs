//! Experiment configuration and parameter-override parsing.

use std::collections::BTreeMap;
use std::path::PathBuf;

use embgo_core::algorithms::{build_optimizer, parameter_keys, ResolvedAlgorithm};
use embgo_core::problems::build_problem;
use serde::Serialize;

use crate::error::CliError;

/// Default population size and trial count for benchmark runs.
pub const DEFAULT_POP: usize = 100;
pub const DEFAULT_TRIALS: usize = 30;
/// Budget per dimension when `--budget` is absent (the CEC convention).
pub const BUDGET_PER_DIM: usize = 10_000;
/// ARNAS protocol: population 50, 5000 evaluations.
pub const ARNAS_POP: usize = 50;
pub const ARNAS_BUDGET: usize = 5_000;

/// One algorithm entry with its overrides. `budget`, when set, replaces the
/// experiment-wide budget for this entry only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSpec {
    pub name: String,
    /// Unique column label; equals `name` unless the name is repeated.
    pub label: String,
    pub params: Vec<(String, String)>,
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub dim: usize,
    pub pop_size: usize,
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; 0 lets the pool decide. Never affects results.
    #[serde(skip)]
    pub jobs: usize,
}

impl ExperimentConfig {
    /// Builds a config, distributing `key=value` / `alg.key=value` overrides
    /// over the named algorithms.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        problems: Vec<String>,
        algorithms: Vec<String>,
        overrides: &[String],
        dim: usize,
        pop_size: usize,
        budget: usize,
        trials: usize,
        seed: u64,
        out: PathBuf,
    ) -> Result<Self, CliError> {
        let cfg = Self {
            problems,
            algorithms: algorithm_specs(&algorithms, overrides)?,
            dim,
            pop_size,
            budget,
            trials,
            seed,
            out,
            jobs: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.problems.is_empty() {
            return Err(CliError::Config(
                "at least one --problem is required".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Config(
                "at least one --algorithm is required".into(),
            ));
        }
        if self.trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        for p in &self.problems {
            build_problem(p, self.dim)?;
        }
        for a in &self.algorithms {
            let budget = self.budget_for(a);
            if budget < self.pop_size {
                return Err(CliError::Config(format!(
                    "{}: budget {budget} is smaller than the population size {}",
                    a.label, self.pop_size
                )));
            }
            a.resolve()?;
        }
        Ok(())
    }

    pub fn budget_for(&self, a: &AlgorithmSpec) -> usize {
        a.budget.unwrap_or(self.budget)
    }

    /// JSON echo of the config with every algorithm parameter resolved.
    pub fn resolved_json(&self) -> String {
        #[derive(Serialize)]
        struct Echo<'a> {
            #[serde(flatten)]
            config: &'a ExperimentConfig,
            resolved: BTreeMap<&'a str, BTreeMap<String, String>>,
        }
        let resolved = self
            .algorithms
            .iter()
            .map(|a| {
                let mut params = a.resolve().map(|r| r.params).unwrap_or_default();
                params.insert("budget".into(), self.budget_for(a).to_string());
                (a.label.as_str(), params)
            })
            .collect();
        serde_json::to_string(&Echo {
            config: self,
            resolved,
        })
        .expect("config serializes")
    }
}

impl AlgorithmSpec {
    pub fn resolve(&self) -> Result<ResolvedAlgorithm, CliError> {
        Ok(build_optimizer(&self.name, &self.params)?)
    }
}

/// Labels `names` and distributes `overrides` over them.
pub fn algorithm_specs(
    names: &[String],
    overrides: &[String],
) -> Result<Vec<AlgorithmSpec>, CliError> {
    let mut specs = label_algorithms(names);
    apply_overrides(&mut specs, overrides)?;
    for s in &specs {
        s.resolve()?;
    }
    Ok(specs)
}

fn label_algorithms(names: &[String]) -> Vec<AlgorithmSpec> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    names
        .iter()
        .map(|name| {
            let k = seen.entry(name).or_default();
            *k += 1;
            let repeated = names.iter().filter(|n| *n == name).count() > 1;
            AlgorithmSpec {
                name: name.clone(),
                label: if repeated {
                    format!("{name}#{k}")
                } else {
                    name.clone()
                },
                params: Vec::new(),
                budget: None,
            }
        })
        .collect()
}

/// `key=value` goes to every algorithm accepting `key`; `target.key=value`
/// goes to the algorithms whose name or label is `target`.
fn apply_overrides(specs: &mut [AlgorithmSpec], overrides: &[String]) -> Result<(), CliError> {
    for raw in overrides {
        let (lhs, value) = raw
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--param expects key=value, got '{raw}'")))?;
        let (target, key) = match lhs.split_once('.') {
            Some((t, k)) => (Some(t), k),
            None => (None, lhs),
        };
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Config(format!(
                "--param expects key=value, got '{raw}'"
            )));
        }
        let mut applied = 0;
        for spec in specs.iter_mut() {
            let targeted = match target {
                Some(t) => spec.name == t || spec.label == t,
                None => key == "budget" || parameter_keys(&spec.name)?.contains(&key),
            };
            if !targeted {
                continue;
            }
            if key == "budget" {
                let b = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid budget '{value}'")))?;
                spec.budget = Some(b);
            } else {
                spec.params.retain(|(k, _)| k != key);
                spec.params.push((key.to_string(), value.to_string()));
            }
            applied += 1;
        }
        if applied == 0 {
            return Err(CliError::Config(format!(
                "--param {raw} matches no selected algorithm"
            )));
        }
    }
    Ok(())
}
