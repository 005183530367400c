use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Individual;
use crate::problems::Problem;
use crate::rng::RngStream;
use crate::run::{Evaluator, Observer, Operator, Optimizer, OptimizerConfig, RunResult};

/// I.i.d. uniform sampling of the box. Samples are grouped into batches of
/// `pop_size` for checkpointing only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RandomSearch;

pub fn run_random_search(
    problem: &dyn Problem,
    config: &OptimizerConfig,
    rng: &mut RngStream,
) -> Result<RunResult> {
    RandomSearch.run(problem, config, rng)
}

impl Optimizer for RandomSearch {
    fn name(&self) -> &str {
        "random"
    }

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult> {
        if config.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1".into()));
        }
        let batch = config.pop_size.max(1);
        let bounds = problem.bounds().clone();
        let mut ev = Evaluator::new(problem, config.budget, observer);
        let mut members: Vec<Individual> = Vec::with_capacity(batch);
        let mut iteration = 0;
        while !ev.exhausted() {
            members.clear();
            for _ in 0..batch {
                match ev.evaluate(bounds.sample(rng)) {
                    Some(ind) => {
                        ev.observer().on_operator(Operator::UniformSample);
                        members.push(ind)
                    }
                    None => break,
                }
            }
            if members.len() == batch {
                ev.end_iteration(iteration, &members);
                iteration += 1;
            }
        }
        ev.checkpoint_members(iteration, &members);
        Ok(ev.finish(rng.seed()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::Bounds;
    use crate::problems::{Benchmark, Function};

    fn sphere() -> Benchmark {
        Benchmark::new(Function::Sphere, Bounds::cube(3, -10.0, 10.0).unwrap())
    }

    #[test]
    fn single_sample() {
        let r = run_random_search(
            &sphere(),
            &OptimizerConfig::new(1, 1, 4),
            &mut RngStream::new(4),
        )
        .unwrap();
        assert_eq!(r.fes_used, 1);
        assert_eq!(r.trace.len(), 1);
        let expect = RngStream::new(4);
        let mut e = expect;
        let x = Bounds::cube(3, -10.0, 10.0).unwrap().sample(&mut e);
        assert_eq!(r.best.position, x);
        assert_eq!(r.best.fitness, Function::Sphere.evaluate(&x));
    }

    #[test]
    fn trace_monotone_and_budget_exact() {
        let r = run_random_search(
            &sphere(),
            &OptimizerConfig::new(7, 100, 1),
            &mut RngStream::new(1),
        )
        .unwrap();
        assert_eq!(r.fes_used, 100);
        assert_eq!(r.trace.last().unwrap().fes, 100);
        assert!(r
            .trace
            .windows(2)
            .all(|w| w[1].best_fitness <= w[0].best_fitness));
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(run_random_search(
            &sphere(),
            &OptimizerConfig::new(1, 0, 1),
            &mut RngStream::new(1)
        )
        .is_err());
    }
}
