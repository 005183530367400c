//! Nonparametric comparison toolkit: Mann–Whitney U, Holm step-down
//! adjustment, per-problem significance marks and average ranks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest `nₐ·n_b` for which p-values come from the exact permutation
/// distribution.
pub const EXACT_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    TwoSided,
    /// `a` tends to be smaller than `b`.
    Less,
    /// `a` tends to be larger than `b`.
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    pub u_a: f64,
    pub u_b: f64,
    pub p: f64,
    pub method: PMethod,
}

/// Midranks (1-based) of `values`, ties sharing their average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Two-sided Mann–Whitney U test.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    mann_whitney_u_with(a, b, Alternative::TwoSided)
}

/// Mann–Whitney U test with midrank ties. Uses the exact permutation
/// distribution when `nₐ·n_b ≤ 64`, otherwise the normal approximation with
/// tie-corrected variance and continuity correction.
pub fn mann_whitney_u_with(a: &[f64], b: &[f64], alternative: Alternative) -> Result<MannWhitney> {
    let method = if a.len() * b.len() <= EXACT_LIMIT {
        PMethod::Exact
    } else {
        PMethod::Normal
    };
    mann_whitney_u_using(a, b, alternative, method)
}

/// Mann–Whitney U test with the p-value method chosen by the caller. The
/// exact path costs O(nₐ·(nₐ+n_b)³) and is meant for small samples.
pub fn mann_whitney_u_using(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    method: PMethod,
) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain(
            "Mann–Whitney needs two non-empty samples".into(),
        ));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Domain("Mann–Whitney samples contain NaN".into()));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let rank_sum_a: f64 = ranks[..na].iter().sum();
    let u_a = rank_sum_a - (na * (na + 1)) as f64 / 2.0;
    let u_b = (na * nb) as f64 - u_a;

    let p = match method {
        PMethod::Exact => exact_p(&ranks, na, rank_sum_a, alternative),
        PMethod::Normal => normal_p(&pooled, na, nb, u_a, alternative),
    };
    Ok(MannWhitney {
        u_a,
        u_b,
        p: p.clamp(0.0, 1.0),
        method,
    })
}

/// Exact p from the distribution of the rank sum of `na` labels drawn from
/// the pooled midranks. Doubled midranks are integers, so counting is exact.
fn exact_p(ranks: &[f64], na: usize, rank_sum_a: f64, alternative: Alternative) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // counts[k][s]: subsets of size k with doubled rank sum s
    let mut counts = vec![vec![0.0f64; max_sum + 1]; na + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=na).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let (prev, cur) = (&lower[k - 1], &mut upper[0]);
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let dist = &counts[na];
    let total: f64 = dist.iter().sum();
    let observed = (2.0 * rank_sum_a).round() as usize;
    let le: f64 = dist[..=observed].iter().sum::<f64>() / total;
    let ge: f64 = dist[observed..].iter().sum::<f64>() / total;
    match alternative {
        Alternative::Less => le,
        Alternative::Greater => ge,
        Alternative::TwoSided => (2.0 * le.min(ge)).min(1.0),
    }
}

fn normal_p(pooled: &[f64], na: usize, nb: usize, u_a: f64, alternative: Alternative) -> f64 {
    let n = (na + nb) as f64;
    let mean = (na * nb) as f64 / 2.0;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if !(var > 0.0) {
        return 1.0;
    }
    let sd = var.sqrt();
    match alternative {
        Alternative::TwoSided => {
            let z = ((u_a - mean).abs() - 0.5).max(0.0) / sd;
            2.0 * (1.0 - std_normal_cdf(z))
        }
        Alternative::Less => std_normal_cdf((u_a - mean + 0.5) / sd),
        Alternative::Greater => 1.0 - std_normal_cdf((u_a - mean - 0.5) / sd),
    }
}

/// Holm step-down adjusted p-values, returned in input order.
pub fn holm_adjust(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("p-value {p} outside [0, 1]")));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p_values[i].total_cmp(&p_values[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        running = running.max((m - rank) as f64 * p_values[idx]).min(1.0);
        adjusted[idx] = running;
    }
    Ok(adjusted)
}

/// Per-trial final fitness values laid out as problems × algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    pub problems: Vec<String>,
    pub algorithms: Vec<String>,
    /// `samples[problem][algorithm]` holds one value per trial.
    pub samples: Vec<Vec<Vec<f64>>>,
}

impl ComparisonMatrix {
    pub fn new(
        problems: Vec<String>,
        algorithms: Vec<String>,
        samples: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if algorithms.len() < 2 {
            return Err(Error::Data(
                "a comparison needs at least two algorithms".into(),
            ));
        }
        if samples.len() != problems.len() {
            return Err(Error::Data(format!(
                "{} problems but {} sample rows",
                problems.len(),
                samples.len()
            )));
        }
        for (p, row) in problems.iter().zip(&samples) {
            if row.len() != algorithms.len() {
                return Err(Error::Data(format!(
                    "problem {p}: {} cells for {} algorithms",
                    row.len(),
                    algorithms.len()
                )));
            }
            if let Some(k) = row.iter().position(Vec::is_empty) {
                return Err(Error::Data(format!(
                    "problem {p}: no samples for {}",
                    algorithms[k]
                )));
            }
        }
        Ok(Self {
            problems,
            algorithms,
            samples,
        })
    }

    pub fn algorithm_index(&self, name: &str) -> Result<usize> {
        self.algorithms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::Unknown {
                kind: "algorithm column",
                name: name.to_string(),
            })
    }

    pub fn mean(&self, problem: usize, algorithm: usize) -> f64 {
        let s = &self.samples[problem][algorithm];
        s.iter().sum::<f64>() / s.len() as f64
    }

    /// Sample standard deviation (n − 1 denominator; 0 for one sample).
    pub fn std(&self, problem: usize, algorithm: usize) -> f64 {
        let s = &self.samples[problem][algorithm];
        if s.len() < 2 {
            return 0.0;
        }
        let m = self.mean(problem, algorithm);
        (s.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (s.len() - 1) as f64).sqrt()
    }

    pub fn median(&self, problem: usize, algorithm: usize) -> f64 {
        median(&self.samples[problem][algorithm])
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Outcome of a competitor against the reference on one problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mark {
    /// Reference significantly better.
    Plus,
    /// No significant difference.
    Approx,
    /// Reference significantly worse.
    Minus,
}

impl Mark {
    pub fn symbol(self) -> char {
        match self {
            Mark::Plus => '+',
            Mark::Approx => '≈',
            Mark::Minus => '-',
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Marks per `[problem][algorithm]`; the reference column is `None`.
///
/// Each competitor is tested against the reference with a two-sided
/// Mann–Whitney test; p-values are Holm-adjusted across the competitors of
/// each problem. A significant difference is attributed by comparing
/// medians, then means.
pub fn significance_marks(
    matrix: &ComparisonMatrix,
    reference: &str,
    alpha: f64,
) -> Result<Vec<Vec<Option<Mark>>>> {
    let r = matrix.algorithm_index(reference)?;
    let k = matrix.algorithms.len();
    let mut out = Vec::with_capacity(matrix.problems.len());
    for p in 0..matrix.problems.len() {
        let competitors: Vec<usize> = (0..k).filter(|&a| a != r).collect();
        let raw: Vec<f64> = competitors
            .iter()
            .map(|&a| mann_whitney_u(&matrix.samples[p][r], &matrix.samples[p][a]).map(|t| t.p))
            .collect::<Result<_>>()?;
        let adjusted = holm_adjust(&raw)?;
        let mut row = vec![None; k];
        for (&a, &padj) in competitors.iter().zip(&adjusted) {
            let mark = if padj < alpha {
                let by_median = matrix.median(p, r).total_cmp(&matrix.median(p, a));
                let ord = by_median.then(matrix.mean(p, r).total_cmp(&matrix.mean(p, a)));
                match ord {
                    Ordering::Less => Mark::Plus,
                    Ordering::Greater => Mark::Minus,
                    Ordering::Equal => Mark::Approx,
                }
            } else {
                Mark::Approx
            };
            row[a] = Some(mark);
        }
        out.push(row);
    }
    Ok(out)
}

/// `(+, ≈, −)` totals per algorithm column.
pub fn mark_totals(marks: &[Vec<Option<Mark>>], algorithms: usize) -> Vec<(usize, usize, usize)> {
    let mut totals = vec![(0, 0, 0); algorithms];
    for row in marks {
        for (a, m) in row.iter().enumerate() {
            match m {
                Some(Mark::Plus) => totals[a].0 += 1,
                Some(Mark::Approx) => totals[a].1 += 1,
                Some(Mark::Minus) => totals[a].2 += 1,
                None => {}
            }
        }
    }
    totals
}

/// Average over problems of each algorithm's rank by mean (1 = lowest mean,
/// midranks on ties).
pub fn average_rank(matrix: &ComparisonMatrix) -> Vec<f64> {
    let k = matrix.algorithms.len();
    let mut sums = vec![0.0; k];
    for p in 0..matrix.problems.len() {
        let means: Vec<f64> = (0..k).map(|a| matrix.mean(p, a)).collect();
        for (s, r) in sums.iter_mut().zip(midranks(&means)) {
            *s += r;
        }
    }
    let n = matrix.problems.len().max(1) as f64;
    sums.into_iter().map(|s| s / n).collect()
}
