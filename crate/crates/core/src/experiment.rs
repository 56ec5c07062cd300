//! Surplus scaling experiments: a JSON spec in, a CSV table and a log-log
//! least-squares fit out.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    cycle_blowup, near_acyclic_gadget, oriented_complete_bipartite, random_digraph, random_tournament,
    transitive_tournament, BipartiteMode, ConstructionError,
};
use crate::exact::{pi_exact, ExactBudget, ExactError};
use crate::graph::Digraph;
use crate::greedy::{random_ordering, restricted_greedy};
use crate::rng::derive_seed;

pub const CSV_HEADER: &str = "n,m,surplus_median,surplus_iqr";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiment needs at least one size")]
    EmptySweep,
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("size {size}: {source}")]
    Generation { size: usize, source: ConstructionError },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid experiment spec: {0}")]
    Spec(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Graph family swept by an experiment; each size is the family's size
/// parameter (vertices, blowup factor `t`, gadget length `N`, or part size).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    Tournament,
    Transitive,
    Blowup { r: usize },
    Gadget,
    /// Balanced complete bipartite graph with random orientation.
    Bipartite,
    /// `round(edges_per_vertex * n)` random edges.
    Random { edges_per_vertex: f64 },
}

impl Family {
    /// Seeded families use `seed`; the others ignore it.
    pub fn generate(&self, size: usize, seed: u64) -> Result<Digraph, ConstructionError> {
        match self {
            Family::Tournament => Ok(random_tournament(size, seed)),
            Family::Transitive => Ok(transitive_tournament(size)),
            Family::Blowup { r } => cycle_blowup(*r, size),
            Family::Gadget => near_acyclic_gadget(size),
            Family::Bipartite => oriented_complete_bipartite(size, size, BipartiteMode::Random(seed)),
            Family::Random { edges_per_vertex } => {
                random_digraph(size, (edges_per_vertex * size as f64).round() as usize, seed)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// One restricted-greedy run on a uniform ordering per trial.
    Greedy,
    /// Exact surplus by subset DP.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// CSV destination; standard output when absent.
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub m: usize,
    pub surplus_median: f64,
    pub surplus_iqr: f64,
}

impl Row {
    pub fn to_csv(&self) -> String {
        format!("{},{},{},{}", self.n, self.m, self.surplus_median, self.surplus_iqr)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    /// `(ln m, ln surplus_median)` for rows with positive median.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Residual sum of squares.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub rows: Vec<Row>,
    /// Absent when fewer than three rows have a positive median.
    pub fit: Option<ScalingFit>,
}

/// Linear interpolation between order statistics (the usual "type 7" rule).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Least squares of `y` on `x`; `None` below three points or when all `x` agree.
pub fn least_squares(points: &[(f64, f64)]) -> Option<ScalingFit> {
    if points.len() < 3 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    slope.is_finite().then(|| ScalingFit { points: points.to_vec(), slope, intercept, residual })
}

fn run_size(spec: &ExperimentSpec, index: usize, size: usize) -> Result<Row, ExperimentError> {
    let size_seed = derive_seed(spec.seed, index as u64);
    let budget = ExactBudget::from_env()?;
    let trials: Vec<(usize, f64)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let g = spec
                .family
                .generate(size, derive_seed(size_seed, 2 * trial as u64))
                .map_err(|source| ExperimentError::Generation { size, source })?;
            let surplus = match spec.algorithm {
                Algorithm::Greedy => {
                    let order = random_ordering(g.n(), derive_seed(size_seed, 2 * trial as u64 + 1));
                    restricted_greedy(&g, &order).result.surplus
                }
                Algorithm::Exact => pi_exact(&g, &budget)?,
            };
            Ok((g.m(), surplus.to_f64()))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let m = trials[0].0;
    let mut values: Vec<f64> = trials.iter().map(|t| t.1).collect();
    values.sort_by(f64::total_cmp);
    Ok(Row {
        n: size,
        m,
        surplus_median: quantile(&values, 0.5),
        surplus_iqr: quantile(&values, 0.75) - quantile(&values, 0.25),
    })
}

/// Runs every size in order, writing each CSV row to `csv` as soon as it is
/// done, so a failing size leaves the earlier rows in place.
pub fn experiment_scaling(spec: &ExperimentSpec, csv: &mut dyn Write) -> Result<ExperimentOutcome, ExperimentError> {
    if spec.sizes.is_empty() {
        return Err(ExperimentError::EmptySweep);
    }
    if spec.trials == 0 {
        return Err(ExperimentError::ZeroTrials);
    }
    writeln!(csv, "{CSV_HEADER}")?;
    let mut rows = Vec::with_capacity(spec.sizes.len());
    for (index, &size) in spec.sizes.iter().enumerate() {
        let row = match run_size(spec, index, size) {
            Ok(row) => row,
            Err(e) => {
                csv.flush()?;
                return Err(e);
            }
        };
        writeln!(csv, "{}", row.to_csv())?;
        rows.push(row);
    }
    csv.flush()?;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.surplus_median > 0.0 && r.m > 0)
        .map(|r| ((r.m as f64).ln(), r.surplus_median.ln()))
        .collect();
    Ok(ExperimentOutcome { fit: least_squares(&points), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, sizes: Vec<usize>, trials: usize, algorithm: Algorithm) -> ExperimentSpec {
        ExperimentSpec { family, sizes, trials, seed: 3, algorithm, output: None }
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 0.75), 3.25);
        assert_eq!(quantile(&[5.0], 0.3), 5.0);
    }

    #[test]
    fn fit_recovers_a_line() {
        let pts: Vec<(f64, f64)> = (1..5).map(|i| (i as f64, 0.75 * i as f64 + 2.0)).collect();
        let fit = least_squares(&pts).unwrap();
        assert!((fit.slope - 0.75).abs() < 1e-12);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!(fit.residual < 1e-20);
        assert!(least_squares(&pts[..2]).is_none());
        assert!(least_squares(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_none());
    }

    #[test]
    fn blowup_matches_closed_form() {
        let s = spec(Family::Blowup { r: 3 }, vec![1, 2], 2, Algorithm::Exact);
        let mut csv = Vec::new();
        let out = experiment_scaling(&s, &mut csv).unwrap();
        for row in &out.rows {
            let t = row.n as f64;
            assert_eq!(row.surplus_median, row.m as f64 / 2.0 - t * t);
            assert_eq!(row.surplus_iqr, 0.0);
        }
        assert!(out.fit.is_none());
        assert_eq!(String::from_utf8(csv).unwrap(), "n,m,surplus_median,surplus_iqr\n1,4,1,0\n2,16,4,0\n");
    }

    #[test]
    fn empty_sweep_and_zero_trials() {
        let mut sink = Vec::new();
        assert!(matches!(
            experiment_scaling(&spec(Family::Tournament, vec![], 3, Algorithm::Greedy), &mut sink),
            Err(ExperimentError::EmptySweep)
        ));
        assert!(matches!(
            experiment_scaling(&spec(Family::Tournament, vec![5], 0, Algorithm::Greedy), &mut sink),
            Err(ExperimentError::ZeroTrials)
        ));
    }

    #[test]
    fn failing_size_keeps_earlier_rows() {
        let s = spec(Family::Gadget, vec![2, 1, 3], 1, Algorithm::Greedy);
        let mut csv = Vec::new();
        let err = experiment_scaling(&s, &mut csv).unwrap_err();
        assert!(matches!(err, ExperimentError::Generation { size: 1, .. }));
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn deterministic_output() {
        let s = spec(Family::Tournament, vec![10, 20, 30], 7, Algorithm::Greedy);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let fa = experiment_scaling(&s, &mut a).unwrap();
        let fb = experiment_scaling(&s, &mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(fa, fb);
    }

    #[test]
    fn experiment_spec_json() {
        let text = r#"{"family": {"name": "blowup", "r": 3}, "sizes": [1, 2], "trials": 1, "seed": 0, "algorithm": "exact"}"#;
        let s: ExperimentSpec = serde_json::from_str(text).unwrap();
        assert_eq!(s.family, Family::Blowup { r: 3 });
        assert_eq!(s.output, None);
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"family": {"name": "nope"}}"#).is_err());
    }
}
