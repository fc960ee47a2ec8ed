//! One-sided Welch test for equal sample sizes.

use serde::{Deserialize, Serialize};

use super::student_t::{student_t_cdf, student_t_inverse_cdf};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchReport {
    /// Test statistic `(mean_a − mean_b) / s_i`.
    pub t_s: f64,
    /// Pooled standard deviation of the mean difference.
    pub s_i: f64,
    /// Welch–Satterthwaite degrees of freedom, floored.
    pub dof: u64,
    /// Critical value `t_{1−α}`.
    pub t_threshold: f64,
    /// `P(T ≥ t_s)`.
    pub p_value: f64,
    pub alpha: f64,
}

impl WelchReport {
    /// Whether `t_s` exceeds the critical value.
    pub fn exceeds_threshold(&self) -> bool {
        self.t_s > self.t_threshold
    }
}

/// Welch's one-sided test of sample `a` against sample `b`, both of size `n`.
pub fn welch_one_sided(mean_a: f64, std_a: f64, mean_b: f64, std_b: f64, n: usize, alpha: f64) -> Result<WelchReport> {
    if n < 2 {
        return Err(Error::invalid("Welch's test needs at least two samples per group"));
    }
    if !(std_a >= 0.0 && std_b >= 0.0) || !mean_a.is_finite() || !mean_b.is_finite() {
        return Err(Error::invalid("means must be finite and standard deviations non-negative"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha must lie in (0, 1)"));
    }
    if std_a == 0.0 && std_b == 0.0 {
        return Err(Error::DegenerateTest);
    }
    let nf = n as f64;
    let (va, vb) = (std_a * std_a, std_b * std_b);
    let s_i = (va + vb).sqrt() / nf.sqrt();
    let t_s = (mean_a - mean_b) / s_i;
    let dof = (nf * nf * (nf - 1.0) * s_i.powi(4) / (va * va + vb * vb)).floor().max(1.0);
    Ok(WelchReport {
        t_s,
        s_i,
        dof: dof as u64,
        t_threshold: student_t_inverse_cdf(1.0 - alpha, dof),
        p_value: (1.0 - student_t_cdf(t_s, dof)).clamp(0.0, 1.0),
        alpha,
    })
}

/// Welch's test on two raw samples, which must have the same size.
pub fn welch_samples(a: &[f64], b: &[f64], alpha: f64) -> Result<WelchReport> {
    if a.len() != b.len() {
        return Err(Error::Unsupported(format!(
            "Welch's test with unequal sample sizes ({} and {})",
            a.len(),
            b.len()
        )));
    }
    let sa = super::summarize(a)?;
    let sb = super::summarize(b)?;
    welch_one_sided(sa.mean, sa.std, sb.mean, sb.std, a.len(), alpha)
}
