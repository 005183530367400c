//! Efficient MBGO: the movement and battle phases are merged into a single
//! pass in which each member flips a fair coin between them. The movement
//! branch uses current-to-best&mean differential mutation inside the safe
//! zone and a Lévy flight outside it; the battle branch is unchanged from
//! MBGO. One evaluation per member per iteration.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::levy::LevyParams;
use crate::mbgo::{battle_candidate, in_safe_zone, safe_zone_radius};
use crate::population::{init_population, Extrema, Individual};
use crate::problems::Problem;
use crate::rng::{RandomSource, RngStream};
use crate::run::{Evaluator, Observer, Operator, Optimizer, OptimizerConfig, RunResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EmbgoParams {
    pub levy: LevyParams,
    /// Use one shared r for both sine coefficients of the differential
    /// mutation instead of two independent draws.
    pub shared_r: bool,
}

/// `X_i + (X_best − X_i)·sin(2πr₁) + (X_mean − X_i)·sin(2πr₂)`.
pub fn diff_mutation<R: RandomSource + ?Sized>(
    x_i: &Individual,
    x_best: &Individual,
    x_mean: &[f64],
    shared_r: bool,
    rng: &mut R,
) -> Vec<f64> {
    let s1 = (2.0 * PI * rng.uniform()).sin();
    let s2 = if shared_r {
        s1
    } else {
        (2.0 * PI * rng.uniform()).sin()
    };
    x_i.position
        .iter()
        .zip(&x_best.position)
        .zip(x_mean)
        .map(|((&x, &b), &m)| x + (b - x) * s1 + (m - x) * s2)
        .collect()
}

/// `X_i + Lévy(β)` with one step per dimension and no scale factor.
pub fn levy_move<R: RandomSource + ?Sized>(
    x_i: &Individual,
    params: &EmbgoParams,
    rng: &mut R,
) -> Vec<f64> {
    x_i.position
        .iter()
        .map(|x| x + params.levy.step(rng))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Embgo {
    pub params: EmbgoParams,
}

impl Embgo {
    pub fn new(params: EmbgoParams) -> Self {
        Self { params }
    }
}

pub fn run_embgo(
    problem: &dyn Problem,
    config: &OptimizerConfig,
    rng: &mut RngStream,
) -> Result<RunResult> {
    Embgo::default().run(problem, config, rng)
}

impl Optimizer for Embgo {
    fn name(&self) -> &str {
        "embgo"
    }

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult> {
        config.validate(2)?;
        let bounds = problem.bounds().clone();
        let n = config.pop_size;
        let mut pop = init_population(n, &bounds, rng)?;
        let mut ev = Evaluator::new(problem, config.budget, observer);
        ev.evaluate_population(&mut pop)?;
        let mut ex = Extrema::scan(&pop)?;
        ev.end_iteration(0, pop.members());

        let mut iteration = 0;
        'run: while !ev.exhausted() {
            let mean = pop.centroid();
            for i in 0..n {
                let (mut cand, op) = if rng.uniform() < 0.5 {
                    let zone = safe_zone_radius(pop.get(ex.best), pop.get(ex.worst), rng);
                    if in_safe_zone(pop.get(i), &zone) {
                        let c = diff_mutation(
                            pop.get(i),
                            pop.get(ex.best),
                            &mean,
                            self.params.shared_r,
                            rng,
                        );
                        (c, Operator::DiffMutation)
                    } else {
                        (
                            levy_move(pop.get(i), &self.params, rng),
                            Operator::LevyFlight,
                        )
                    }
                } else {
                    battle_candidate(&pop, i, rng)
                };
                bounds.clamp_in_place(&mut cand);
                let Some(child) = ev.evaluate(cand) else {
                    break 'run;
                };
                ev.observer().on_operator(op);
                if pop.offer(i, child) {
                    ex.replaced(&pop, i);
                }
            }
            iteration += 1;
            ev.end_iteration(iteration, pop.members());
        }
        ev.checkpoint_members(iteration + 1, pop.members());
        Ok(ev.finish(rng.seed()))
    }
}
