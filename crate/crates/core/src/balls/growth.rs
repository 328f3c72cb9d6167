use super::{enumerate_ball, Ball};
use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::group::{GroupModel, Length};

/// Ball counts and a growth classification.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    /// `counts[r]` = |B_r|.
    pub counts: Vec<usize>,
    /// Slope of log|B_r| against log r on the upper half of the radii.
    pub degree: f64,
    /// RMS residual of that log-log fit.
    pub residual: f64,
    /// Slope of log|B_r| against r on the same radii.
    pub exponential_rate: f64,
    pub exponential_residual: f64,
    /// Set when log|B_r| is better explained as linear in r than in log r.
    pub exponential: bool,
}

impl GrowthProfile {
    /// `Some(degree)` unless the exponential flag is set.
    pub fn polynomial_degree(&self) -> Option<f64> {
        (!self.exponential).then_some(self.degree)
    }
}

pub fn growth_profile(model: &GroupModel, r_max: Length) -> Result<GrowthProfile> {
    let ball: Ball = enumerate_ball(model, r_max)?;
    fit_growth(ball.counts())
}

/// Classifies growth from exact counts; needs at least four radii.
pub fn fit_growth(counts: &[usize]) -> Result<GrowthProfile> {
    if counts.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "growth fit needs radii 0..3 at least, got {} counts",
            counts.len()
        )));
    }
    if counts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Numeric("ball counts are not monotone".into()));
    }
    let r_max = counts.len() - 1;
    let tail: Vec<usize> = ((r_max / 2).max(1)..=r_max).collect();
    let rs: Vec<f64> = tail.iter().map(|&r| r as f64).collect();
    let log_rs: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let log_b: Vec<f64> = tail.iter().map(|&r| (counts[r] as f64).ln()).collect();
    let poly = fit_line(&log_rs, &log_b).ok_or_else(|| Error::Numeric("degenerate growth fit".into()))?;
    let expo = fit_line(&rs, &log_b).ok_or_else(|| Error::Numeric("degenerate growth fit".into()))?;
    Ok(GrowthProfile {
        counts: counts.to_vec(),
        degree: poly.slope,
        residual: poly.residual,
        exponential_rate: expo.slope,
        exponential_residual: expo.residual,
        exponential: expo.slope > 0.0 && expo.residual < poly.residual,
    })
}
