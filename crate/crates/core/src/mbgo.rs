//! Multiplayer battle game optimizer.
//!
//! Each iteration runs a movement pass and then a battle pass over the whole
//! population. In the movement pass a member inside the safe zone (a ball
//! around the current best whose radius is the best–worst distance scaled by
//! a random δ) takes a sinusoidal step; a member outside it moves per
//! dimension either by Gaussian jitter or toward the best. In the battle pass
//! every member meets a random enemy and moves relative to it. Offspring
//! replace their parent only on strict improvement.
//!
//! Operators return unclamped candidates; the run loop clamps to the box
//! before evaluation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::population::{init_population, Extrema, Individual, Population};
use crate::problems::Problem;
use crate::rng::{RandomSource, RngStream};
use crate::run::{Evaluator, Observer, Operator, Optimizer, OptimizerConfig, RunResult};

/// Keeps the safe-zone radius positive when best and worst coincide.
pub const SAFE_ZONE_EPSILON: f64 = 1e-12;
/// Support of the radius amplification factor δ.
pub const DELTA_RANGE: (f64, f64) = (0.8, 1.2);

#[derive(Debug, Clone, PartialEq)]
pub struct SafeZone {
    pub center: Vec<f64>,
    pub radius: f64,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Safe zone with an explicit amplification factor.
pub fn safe_zone_with_delta(best: &Individual, worst: &Individual, delta: f64) -> SafeZone {
    SafeZone {
        center: best.position.clone(),
        radius: (distance(&best.position, &worst.position) + SAFE_ZONE_EPSILON) * delta,
    }
}

/// Safe zone centred on `best` with `δ ~ U(0.8, 1.2)`.
pub fn safe_zone_radius<R: RandomSource + ?Sized>(
    best: &Individual,
    worst: &Individual,
    rng: &mut R,
) -> SafeZone {
    let delta = rng.uniform_in(DELTA_RANGE.0, DELTA_RANGE.1);
    safe_zone_with_delta(best, worst, delta)
}

/// Closed-ball membership.
pub fn in_safe_zone(x: &Individual, zone: &SafeZone) -> bool {
    distance(&x.position, &zone.center) <= zone.radius
}

/// `X_i + X_best·sin(2πr)` with one scalar r.
pub fn move_inside<R: RandomSource + ?Sized>(
    x_i: &Individual,
    x_best: &Individual,
    rng: &mut R,
) -> Vec<f64> {
    let s = (2.0 * PI * rng.uniform()).sin();
    x_i.position
        .iter()
        .zip(&x_best.position)
        .map(|(x, b)| x + b * s)
        .collect()
}

/// Per dimension: Gaussian jitter when `r < 0.5`, else a step of fraction r
/// toward the best.
pub fn move_outside<R: RandomSource + ?Sized>(
    x_i: &Individual,
    x_best: &Individual,
    rng: &mut R,
) -> Vec<f64> {
    x_i.position
        .iter()
        .zip(&x_best.position)
        .map(|(&x, &b)| {
            let r = rng.uniform();
            if r < 0.5 {
                x + rng.normal()
            } else {
                x + (b - x) * r
            }
        })
        .collect()
}

/// Difference vector pointing from the worse of the pair to the better one,
/// anchored so that `X_i − X_enemy` is used only when `X_i` is strictly better.
pub fn battle_dir(x_i: &Individual, x_enemy: &Individual) -> Vec<f64> {
    let i_better = x_i.fitness < x_enemy.fitness;
    x_i.position
        .iter()
        .zip(&x_enemy.position)
        .map(|(a, e)| if i_better { a - e } else { e - a })
        .collect()
}

/// Move against a stronger enemy: per dimension, step from self (`r < 0.5`)
/// or from the enemy, by `dir·r`.
pub fn battle_vs_stronger<R: RandomSource + ?Sized>(
    x_i: &Individual,
    x_enemy: &Individual,
    dir: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    x_i.position
        .iter()
        .zip(&x_enemy.position)
        .zip(dir)
        .map(|((&x, &e), &d)| {
            let r = rng.uniform();
            if r < 0.5 {
                x + d * r
            } else {
                e + d * r
            }
        })
        .collect()
}

/// Move against a weaker (or equal) enemy: `X_i + dir·cos(2πr)`.
pub fn battle_vs_weaker<R: RandomSource + ?Sized>(
    x_i: &Individual,
    dir: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let c = (2.0 * PI * rng.uniform()).cos();
    x_i.position
        .iter()
        .zip(dir)
        .map(|(x, d)| x + d * c)
        .collect()
}

/// Uniform index in `0..n` excluding `i`. Requires `n ≥ 2`.
pub fn random_enemy<R: RandomSource + ?Sized>(i: usize, n: usize, rng: &mut R) -> usize {
    let j = rng.below(n - 1);
    if j >= i {
        j + 1
    } else {
        j
    }
}

/// One battle candidate for slot `i`, reporting which operator fired.
pub(crate) fn battle_candidate<R: RandomSource + ?Sized>(
    pop: &Population,
    i: usize,
    rng: &mut R,
) -> (Vec<f64>, Operator) {
    let enemy = random_enemy(i, pop.len(), rng);
    let (me, foe) = (pop.get(i), pop.get(enemy));
    let dir = battle_dir(me, foe);
    if foe.fitness < me.fitness {
        (
            battle_vs_stronger(me, foe, &dir, rng),
            Operator::BattleStronger,
        )
    } else {
        (battle_vs_weaker(me, &dir, rng), Operator::BattleWeaker)
    }
}

/// MBGO with switchable phases. Both phases on is the standard algorithm;
/// the single-phase variants exist for ablation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mbgo {
    pub movement: bool,
    pub battle: bool,
}

impl Default for Mbgo {
    fn default() -> Self {
        Self {
            movement: true,
            battle: true,
        }
    }
}

impl Mbgo {
    pub fn movement_only() -> Self {
        Self {
            movement: true,
            battle: false,
        }
    }

    pub fn battle_only() -> Self {
        Self {
            movement: false,
            battle: true,
        }
    }
}

/// Runs standard MBGO.
pub fn run_mbgo(
    problem: &dyn Problem,
    config: &OptimizerConfig,
    rng: &mut RngStream,
) -> Result<RunResult> {
    Mbgo::default().run(problem, config, rng)
}

impl Optimizer for Mbgo {
    fn name(&self) -> &str {
        match (self.movement, self.battle) {
            (true, true) => "mbgo",
            (true, false) => "mbgo-movement",
            (false, true) => "mbgo-battle",
            (false, false) => "mbgo-idle",
        }
    }

    fn run_observed(
        &self,
        problem: &dyn Problem,
        config: &OptimizerConfig,
        rng: &mut RngStream,
        observer: &mut dyn Observer,
    ) -> Result<RunResult> {
        config.validate(2)?;
        if !self.movement && !self.battle {
            return Err(crate::error::Error::InvalidConfig(
                "at least one MBGO phase must be enabled".into(),
            ));
        }
        let bounds = problem.bounds().clone();
        let n = config.pop_size;
        let mut pop = init_population(n, &bounds, rng)?;
        let mut ev = Evaluator::new(problem, config.budget, observer);
        ev.evaluate_population(&mut pop)?;
        let mut ex = Extrema::scan(&pop)?;
        ev.end_iteration(0, pop.members());

        let mut iteration = 0;
        'run: while !ev.exhausted() {
            if self.movement {
                for i in 0..n {
                    let zone = safe_zone_radius(pop.get(ex.best), pop.get(ex.worst), rng);
                    let (mut cand, op) = if in_safe_zone(pop.get(i), &zone) {
                        (
                            move_inside(pop.get(i), pop.get(ex.best), rng),
                            Operator::InZoneMove,
                        )
                    } else {
                        (
                            move_outside(pop.get(i), pop.get(ex.best), rng),
                            Operator::OutOfZoneMove,
                        )
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
            }
            if self.battle {
                for i in 0..n {
                    let (mut cand, op) = battle_candidate(&pop, i, rng);
                    bounds.clamp_in_place(&mut cand);
                    let Some(child) = ev.evaluate(cand) else {
                        break 'run;
                    };
                    ev.observer().on_operator(op);
                    if pop.offer(i, child) {
                        ex.replaced(&pop, i);
                    }
                }
            }
            iteration += 1;
            ev.end_iteration(iteration, pop.members());
        }
        // Partial final iteration.
        ev.checkpoint_members(iteration + 1, pop.members());
        Ok(ev.finish(rng.seed()))
    }
}
