//! Run contract shared by every optimizer: configuration, FE accounting,
//! traces and instrumentation hooks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::population_diversity;
use crate::population::{Bounds, Individual, Population};
use crate::problems::Problem;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub pop_size: usize,
    /// Maximum number of objective evaluations.
    pub budget: usize,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn new(pop_size: usize, budget: usize, seed: u64) -> Self {
        Self {
            pop_size,
            budget,
            seed,
        }
    }

    pub(crate) fn validate(&self, min_pop: usize) -> Result<()> {
        if self.pop_size < min_pop {
            return Err(Error::InvalidConfig(format!(
                "population size must be at least {min_pop}, got {}",
                self.pop_size
            )));
        }
        if self.budget < self.pop_size {
            return Err(Error::InvalidConfig(format!(
                "budget {} is smaller than the population size {}",
                self.budget, self.pop_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub fes: usize,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityPoint {
    pub iteration: usize,
    pub diversity: f64,
}

/// Outcome of one seeded run. `trace` and `diversity_trace` are sampled at
/// the same checkpoints: after initialization, after every iteration, and
/// once more if the budget ran out mid-iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Individual,
    pub trace: Vec<TracePoint>,
    pub diversity_trace: Vec<DiversityPoint>,
    pub seed: u64,
    pub fes_used: usize,
}

impl RunResult {
    pub fn best_fitness(&self) -> f64 {
        self.best.fitness
    }
}

/// Which search operator produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    /// Sinusoidal move toward the best member, used inside the safe zone.
    InZoneMove,
    /// Per-dimension Gaussian jitter or pull toward the best member.
    OutOfZoneMove,
    /// Current-to-best&mean differential mutation.
    DiffMutation,
    LevyFlight,
    /// Battle against an enemy with strictly better fitness.
    BattleStronger,
    /// Battle against an enemy with equal or worse fitness.
    BattleWeaker,
    DeTrial,
    PsoStep,
    UniformSample,
}

impl Operator {
    /// Movement-side operators of the MBGO family.
    pub fn is_movement(self) -> bool {
        matches!(
            self,
            Self::InZoneMove | Self::OutOfZoneMove | Self::DiffMutation | Self::LevyFlight
        )
    }

    pub fn is_battle(self) -> bool {
        matches!(self, Self::BattleStronger | Self::BattleWeaker)
    }
}

/// Instrumentation hooks. All methods default to no-ops.
pub trait Observer {
    /// Called once per objective evaluation with the evaluated position.
    fn on_evaluation(&mut self, _position: &[f64], _fitness: f64) {}

    /// Called after a candidate is evaluated, naming the operator that built it.
    fn on_operator(&mut self, _op: Operator) {}

    /// Called after each completed iteration with the cumulative FE count.
    fn on_iteration(&mut self, _iteration: usize, _fes: usize, _members: &[Individual]) {}
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NoopObserver;

impl Observer for NoopObserver {}

/// Common run interface. Implementations must be pure functions of
/// `(problem, config, rng state)`.
pub trait Optimizer: Send + Sync {
    fn name(&self) -> &str;

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult>;

    fn run(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
    ) -> Result<RunResult> {
        self.run_observed(problem, config, rng, &mut NoopObserver)
    }

    /// Runs with a fresh stream seeded from `config.seed`.
    fn run_seeded(&self, problem: &dyn Problem, config: &OptimizerConfig) -> Result<RunResult> {
        self.run(problem, config, &mut RngStream::new(config.seed))
    }
}

/// Budgeted evaluation front-end: counts FEs, tracks the best-so-far and
/// records checkpoints.
pub(crate) struct Evaluator<'a> {
    problem: &'a dyn Problem,
    observer: &'a mut dyn Observer,
    budget: usize,
    fes: usize,
    best: Option<Individual>,
    trace: Vec<TracePoint>,
    diversity: Vec<DiversityPoint>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn Problem, budget: usize, observer: &'a mut dyn Observer) -> Self {
        Self {
            problem,
            observer,
            budget,
            fes: 0,
            best: None,
            trace: Vec::new(),
            diversity: Vec::new(),
        }
    }

    pub fn exhausted(&self) -> bool {
        self.fes >= self.budget
    }

    pub fn observer(&mut self) -> &mut dyn Observer {
        &mut *self.observer
    }

    /// Evaluates `position`, or returns `None` once the budget is spent.
    /// NaN objective values are recorded as `+inf`.
    pub fn evaluate(&mut self, position: Vec<f64>) -> Option<Individual> {
        if self.exhausted() {
            return None;
        }
        let mut fitness = self.problem.evaluate(&position);
        if fitness.is_nan() {
            fitness = f64::INFINITY;
        }
        self.fes += 1;
        self.observer.on_evaluation(&position, fitness);
        if self.best.as_ref().is_none_or(|b| fitness < b.fitness) {
            self.best = Some(Individual::new(position.clone(), fitness));
        }
        Some(Individual::new(position, fitness))
    }

    /// Evaluates every unevaluated member in place.
    pub fn evaluate_population(&mut self, pop: &mut Population) -> Result<()> {
        for m in pop.members_mut() {
            let Some(evaluated) = self.evaluate(std::mem::take(&mut m.position)) else {
                return Err(Error::InvalidConfig(
                    "budget exhausted during initial evaluation".into(),
                ));
            };
            *m = evaluated;
        }
        Ok(())
    }

    pub fn checkpoint(&mut self, iteration: usize, diversity: f64) {
        if self.trace.last().is_some_and(|t| t.fes == self.fes) {
            return;
        }
        let best_fitness = self.best.as_ref().map_or(f64::INFINITY, |b| b.fitness);
        self.trace.push(TracePoint {
            fes: self.fes,
            best_fitness,
        });
        self.diversity.push(DiversityPoint {
            iteration,
            diversity,
        });
    }

    pub fn checkpoint_members(&mut self, iteration: usize, members: &[Individual]) {
        let pd = population_diversity(members, self.problem.bounds());
        self.checkpoint(iteration, pd);
    }

    /// Checkpoint plus the observer's iteration hook.
    pub fn end_iteration(&mut self, iteration: usize, members: &[Individual]) {
        self.checkpoint_members(iteration, members);
        self.observer.on_iteration(iteration, self.fes, members);
    }

    pub fn finish(self, seed: u64) -> RunResult {
        RunResult {
            best: self.best.expect("at least one evaluation"),
            trace: self.trace,
            diversity_trace: self.diversity,
            seed,
            fes_used: self.fes,
        }
    }
}

/// Counts evaluations, operator choices and per-iteration FE deltas.
#[derive(Debug, Default, Clone)]
pub struct CountingObserver {
    pub evaluations: usize,
    pub operators: std::collections::BTreeMap<String, usize>,
    /// FEs consumed by each completed iteration.
    pub fes_per_iteration: Vec<usize>,
    last_fes: Option<usize>,
    /// Set when any evaluated position fell outside `bounds_check`.
    pub out_of_bounds: usize,
    pub bounds_check: Option<Bounds>,
}

impl CountingObserver {
    pub fn with_bounds(bounds: Bounds) -> Self {
        Self {
            bounds_check: Some(bounds),
            ..Self::default()
        }
    }

    pub fn count(&self, op: Operator) -> usize {
        self.operators.get(&format!("{op:?}")).copied().unwrap_or(0)
    }
}

impl Observer for CountingObserver {
    fn on_evaluation(&mut self, position: &[f64], _fitness: f64) {
        if self.evaluations == 0 {
            self.last_fes = Some(0);
        }
        self.evaluations += 1;
        if let Some(b) = &self.bounds_check {
            if !b.contains(position) {
                self.out_of_bounds += 1;
            }
        }
    }

    fn on_operator(&mut self, op: Operator) {
        *self.operators.entry(format!("{op:?}")).or_default() += 1;
    }

    fn on_iteration(&mut self, iteration: usize, fes: usize, _members: &[Individual]) {
        if iteration == 0 {
            self.last_fes = Some(fes);
            return;
        }
        let prev = self.last_fes.unwrap_or(0);
        self.fes_per_iteration.push(fes - prev);
        self.last_fes = Some(fes);
    }
}
