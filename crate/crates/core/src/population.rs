//! Individuals, search boxes and populations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Axis-aligned search box with `lower[j] < upper[j]` in every dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidConfig(
                "bounds must have at least one dimension".into(),
            ));
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The hypercube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Projects `x` onto the box component-wise.
    pub fn clamp_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = if v.is_nan() { lo } else { v.clamp(lo, hi) };
        }
    }

    pub fn sample<R: RandomSource + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform_in(lo, hi))
            .collect()
    }
}

/// Component-wise projection of `position` onto `bounds`.
pub fn clamp(position: &[f64], bounds: &Bounds) -> Result<Vec<f64>> {
    if position.len() != bounds.dim() {
        return Err(Error::Dimension {
            expected: bounds.dim(),
            actual: position.len(),
        });
    }
    let mut out = position.to_vec();
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

/// A candidate solution. `fitness` is NaN until the position is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl Individual {
    pub fn unevaluated(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: f64::NAN,
        }
    }

    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self { position, fitness }
    }

    pub fn is_evaluated(&self) -> bool {
        !self.fitness.is_nan()
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

/// Returns `offspring` only when it is strictly better than `parent`.
pub fn greedy_replace(parent: Individual, offspring: Individual) -> Individual {
    if offspring.fitness < parent.fitness {
        offspring
    } else {
        parent
    }
}

/// Ordered set of individuals; slot order is stable for the whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    pub fn from_members(members: Vec<Individual>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "population needs at least 2 members, got {}",
                members.len()
            )));
        }
        let dim = members[0].dim();
        if let Some(m) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                actual: m.dim(),
            });
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub(crate) fn members_mut(&mut self) -> &mut [Individual] {
        &mut self.members
    }

    /// Greedy replacement at slot `i`. Returns true when the offspring survived.
    pub fn offer(&mut self, i: usize, offspring: Individual) -> bool {
        if offspring.fitness < self.members[i].fitness {
            self.members[i] = offspring;
            true
        } else {
            false
        }
    }

    /// Arithmetic centroid of the member positions.
    pub fn centroid(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim()];
        for m in &self.members {
            for (acc, &v) in mean.iter_mut().zip(&m.position) {
                *acc += v;
            }
        }
        let n = self.members.len() as f64;
        mean.iter_mut().for_each(|v| *v /= n);
        mean
    }

    /// Indices of the (best, worst) members; ties go to the lowest index.
    pub fn best_worst(&self) -> Result<(usize, usize)> {
        best_worst(self)
    }
}

/// Samples `n` members uniformly inside `bounds`. Fitness stays unset.
pub fn init_population<R: RandomSource + ?Sized>(
    n: usize,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Population> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "population size must be at least 2, got {n}"
        )));
    }
    let members = (0..n)
        .map(|_| Individual::unevaluated(bounds.sample(rng)))
        .collect();
    Ok(Population { members })
}

/// Indices of the minimum- and maximum-fitness members, lowest index on ties.
pub fn best_worst(pop: &Population) -> Result<(usize, usize)> {
    let mut best = 0;
    let mut worst = 0;
    for (i, m) in pop.members.iter().enumerate() {
        if !m.is_evaluated() {
            return Err(Error::Unevaluated(i));
        }
        if m.fitness < pop.members[best].fitness {
            best = i;
        }
        if m.fitness > pop.members[worst].fitness {
            worst = i;
        }
    }
    Ok((best, worst))
}

/// Incrementally maintained best/worst indices.
///
/// Agrees with [`best_worst`] after every [`Population::offer`] provided
/// [`Extrema::replaced`] is called for each accepted offspring. A full rescan
/// happens only when the current worst member improves.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extrema {
    pub best: usize,
    pub worst: usize,
}

impl Extrema {
    pub fn scan(pop: &Population) -> Result<Self> {
        let (best, worst) = best_worst(pop)?;
        Ok(Self { best, worst })
    }

    pub fn replaced(&mut self, pop: &Population, i: usize) {
        let f = pop.members[i].fitness;
        let fb = pop.members[self.best].fitness;
        if f < fb || (f == fb && i < self.best) {
            self.best = i;
        }
        if i == self.worst {
            let mut worst = 0;
            for (j, m) in pop.members.iter().enumerate() {
                if m.fitness > pop.members[worst].fitness {
                    worst = j;
                }
            }
            self.worst = worst;
        }
    }
}
