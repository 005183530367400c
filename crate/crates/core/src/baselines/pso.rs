use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{init_population, Individual};
use crate::problems::Problem;
use crate::rng::{RandomSource, RngStream};
use crate::run::{Evaluator, Observer, Operator, Optimizer, OptimizerConfig, RunResult};

/// Global-best PSO settings. Velocities are clamped to `[-v_max, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_max: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            w: 1.0,
            c1: 2.05,
            c2: 2.05,
            v_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Pso {
    pub params: PsoParams,
}

impl Pso {
    pub fn new(params: PsoParams) -> Self {
        Self { params }
    }
}

pub fn run_pso(
    problem: &dyn Problem,
    config: &OptimizerConfig,
    params: PsoParams,
    rng: &mut RngStream,
) -> Result<RunResult> {
    Pso::new(params).run(problem, config, rng)
}

/// Swarm state exposed to tests.
pub(crate) struct Swarm {
    pub particles: Vec<Individual>,
    pub velocities: Vec<Vec<f64>>,
    pub pbest: Vec<Individual>,
    pub gbest: Individual,
}

impl Swarm {
    fn step<R: RandomSource + ?Sized>(&mut self, i: usize, p: &PsoParams, rng: &mut R) -> Vec<f64> {
        let x = &self.particles[i].position;
        let pb = &self.pbest[i].position;
        let g = &self.gbest.position;
        let v = &mut self.velocities[i];
        for j in 0..x.len() {
            let (r1, r2) = (rng.uniform(), rng.uniform());
            let nv = p.w * v[j] + p.c1 * r1 * (pb[j] - x[j]) + p.c2 * r2 * (g[j] - x[j]);
            v[j] = nv.clamp(-p.v_max, p.v_max);
        }
        x.iter().zip(v.iter()).map(|(a, b)| a + b).collect()
    }
}

impl Optimizer for Pso {
    fn name(&self) -> &str {
        "pso"
    }

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult> {
        config.validate(2)?;
        if !(self.params.v_max > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "PSO v_max must be positive, got {}",
                self.params.v_max
            )));
        }
        let bounds = problem.bounds().clone();
        let n = config.pop_size;
        let mut pop = init_population(n, &bounds, rng)?;
        let mut ev = Evaluator::new(problem, config.budget, observer);
        ev.evaluate_population(&mut pop)?;
        let particles = pop.members().to_vec();
        let (g, _) = pop.best_worst()?;
        let mut swarm = Swarm {
            velocities: vec![vec![0.0; bounds.dim()]; n],
            pbest: particles.clone(),
            gbest: particles[g].clone(),
            particles,
        };
        ev.end_iteration(0, &swarm.particles);

        let mut iteration = 0;
        'run: while !ev.exhausted() {
            for i in 0..n {
                let mut x = swarm.step(i, &self.params, rng);
                bounds.clamp_in_place(&mut x);
                let Some(moved) = ev.evaluate(x) else {
                    break 'run;
                };
                ev.observer().on_operator(Operator::PsoStep);
                if moved.fitness < swarm.pbest[i].fitness {
                    swarm.pbest[i] = moved.clone();
                    if moved.fitness < swarm.gbest.fitness {
                        swarm.gbest = moved.clone();
                    }
                }
                swarm.particles[i] = moved;
            }
            iteration += 1;
            ev.end_iteration(iteration, &swarm.particles);
        }
        ev.checkpoint_members(iteration + 1, &swarm.particles);
        Ok(ev.finish(rng.seed()))
    }
}
