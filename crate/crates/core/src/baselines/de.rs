use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::init_population;
use crate::problems::Problem;
use crate::rng::{RandomSource, RngStream};
use crate::run::{Evaluator, Observer, Operator, Optimizer, OptimizerConfig, RunResult};

/// DE/cur-to-rand/1 with binomial crossover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    /// Scaling factor F.
    pub f: f64,
    /// Crossover rate Cr.
    pub cr: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self { f: 0.8, cr: 0.9 }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.f >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "DE scaling factor must be ≥ 0, got {}",
                self.f
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::InvalidConfig(format!(
                "DE crossover rate must be in [0, 1], got {}",
                self.cr
            )));
        }
        Ok(())
    }
}

/// Takes the mutant gene where `uniform() < cr` and always at one forced
/// dimension; the target gene everywhere else.
pub fn binomial_crossover<R: RandomSource + ?Sized>(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut R,
) -> Vec<f64> {
    let forced = rng.below(target.len());
    target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&t, &m))| {
            if rng.uniform() < cr || j == forced {
                m
            } else {
                t
            }
        })
        .collect()
}

/// Three distinct indices, all different from `i`.
fn distinct_peers<R: RandomSource + ?Sized>(i: usize, n: usize, rng: &mut R) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    let mut k = 0;
    while k < 3 {
        let c = rng.below(n);
        if c != i && !picked[..k].contains(&c) {
            picked[k] = c;
            k += 1;
        }
    }
    picked
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct De {
    pub params: DeParams,
}

impl De {
    pub fn new(params: DeParams) -> Self {
        Self { params }
    }
}

pub fn run_de(
    problem: &dyn Problem,
    config: &OptimizerConfig,
    params: DeParams,
    rng: &mut RngStream,
) -> Result<RunResult> {
    De::new(params).run(problem, config, rng)
}

impl Optimizer for De {
    fn name(&self) -> &str {
        "de"
    }

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult> {
        config.validate(4)?;
        self.params.validate()?;
        let DeParams { f, cr } = self.params;
        let bounds = problem.bounds().clone();
        let n = config.pop_size;
        let mut pop = init_population(n, &bounds, rng)?;
        let mut ev = Evaluator::new(problem, config.budget, observer);
        ev.evaluate_population(&mut pop)?;
        ev.end_iteration(0, pop.members());

        let mut iteration = 0;
        'run: while !ev.exhausted() {
            for i in 0..n {
                let [r1, r2, r3] = distinct_peers(i, n, rng);
                let x = &pop.get(i).position;
                let (a, b, c) = (
                    &pop.get(r1).position,
                    &pop.get(r2).position,
                    &pop.get(r3).position,
                );
                let mutant: Vec<f64> = (0..x.len())
                    .map(|j| x[j] + f * (a[j] - x[j]) + f * (b[j] - c[j]))
                    .collect();
                let mut trial = binomial_crossover(x, &mutant, cr, rng);
                bounds.clamp_in_place(&mut trial);
                let Some(child) = ev.evaluate(trial) else {
                    break 'run;
                };
                ev.observer().on_operator(Operator::DeTrial);
                pop.offer(i, child);
            }
            iteration += 1;
            ev.end_iteration(iteration, pop.members());
        }
        ev.checkpoint_members(iteration + 1, pop.members());
        Ok(ev.finish(rng.seed()))
    }
}
