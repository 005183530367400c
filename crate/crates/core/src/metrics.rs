//! Population diversity indicator.

use crate::population::{Bounds, Individual};

/// Mean absolute deviation from the centroid, normalized by the box width
/// per dimension and averaged over members and dimensions.
///
/// Lies in `[0, 1]` for any in-bounds population. An empty slice yields 0.
pub fn population_diversity(members: &[Individual], bounds: &Bounds) -> f64 {
    let n = members.len();
    if n == 0 {
        return 0.0;
    }
    let d = bounds.dim();
    let mut mean = vec![0.0; d];
    for m in members {
        for (acc, v) in mean.iter_mut().zip(&m.position) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= n as f64);
    let total: f64 = members
        .iter()
        .map(|m| {
            m.position
                .iter()
                .zip(&mean)
                .enumerate()
                .map(|(j, (x, c))| (x - c).abs() / bounds.width(j))
                .sum::<f64>()
        })
        .sum();
    total / (n * d) as f64
}
