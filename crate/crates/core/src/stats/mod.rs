//! Monte Carlo aggregation and hypothesis testing.

mod benchmark;
mod student_t;
mod welch;

pub use benchmark::{
    run_benchmark, Benchmark, BenchmarkReport, BenchmarkTimings, PlannerSummary, PlannerTimings, WelchEntry,
};
pub use student_t::{ln_gamma, regularized_incomplete_beta, student_t_cdf, student_t_inverse_cdf};
pub use welch::{welch_one_sided, welch_samples, WelchReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean, sample standard deviation (n − 1 denominator), minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(samples: &[f64]) -> Result<SummaryRow> {
    if samples.is_empty() {
        return Err(Error::invalid("cannot summarize an empty sample"));
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Rounding can push the mean of identical values just outside [min, max].
    Ok(SummaryRow {
        n,
        mean: mean.clamp(min, max),
        std,
        min,
        max,
    })
}

/// Per-planner Monte Carlo series. Metric vectors hold successful runs only.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct McSeries {
    pub n_mc: usize,
    pub successes: usize,
    pub t_sol0: Vec<f64>,
    pub t_sol: Vec<f64>,
    pub d_sol: Vec<f64>,
}

impl McSeries {
    /// Success percentage.
    pub fn rho_mc(&self) -> f64 {
        if self.n_mc == 0 {
            0.0
        } else {
            100.0 * self.successes as f64 / self.n_mc as f64
        }
    }
}

/// Number of iterations at which the best cost rose, or a solution was lost,
/// after the first solution.
pub fn anytime_violations(series: &[Option<f64>]) -> usize {
    let mut best: Option<f64> = None;
    let mut violations = 0;
    for c in series {
        match (best, c) {
            (Some(b), Some(c)) if *c > b => violations += 1,
            (Some(_), None) => violations += 1,
            _ => {}
        }
        if let Some(c) = c {
            best = Some(best.map_or(*c, |b: f64| b.min(*c)));
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_examples() {
        let s = summarize(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!((s.mean, s.std, s.min, s.max), (5.0, 0.0, 5.0, 5.0));
        let s = summarize(&[1.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert!((s.std - 2f64.sqrt()).abs() < 1e-15);
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn rho() {
        let s = McSeries {
            n_mc: 100,
            successes: 95,
            ..McSeries::default()
        };
        assert_eq!(s.rho_mc(), 95.0);
    }

    #[test]
    fn violations() {
        assert_eq!(anytime_violations(&[None, Some(3.0), Some(3.0), Some(2.0)]), 0);
        assert_eq!(anytime_violations(&[Some(3.0), Some(3.5), Some(2.0), None]), 2);
    }
}
