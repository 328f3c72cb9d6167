use crate::error::{Error, Result};

/// ρ₋ = ½ Σ_n √(n−1)·χ_[S_{n−1}, S_n), truncated after S_N.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoStep {
    /// S_0 = 0, S_1, …, S_N.
    thresholds: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoValue {
    pub value: f64,
    /// The n with S_{n−1} ≤ d < S_n, or `None` when saturated.
    pub level: Option<usize>,
    /// d ≥ S_N: beyond the truncation the value is reported as 0.
    pub saturated: bool,
}

impl RhoStep {
    /// Takes S_1 < S_2 < … < S_N (all positive).
    pub fn new(thresholds: &[f64]) -> Result<Self> {
        let mut s = Vec::with_capacity(thresholds.len() + 1);
        s.push(0.0);
        for &t in thresholds {
            if !(t.is_finite() && t > *s.last().unwrap()) {
                return Err(Error::InvalidParameter(format!(
                    "thresholds must be finite and strictly increasing from 0, got {t} after {}",
                    s.last().unwrap()
                )));
            }
            s.push(t);
        }
        Ok(RhoStep { thresholds: s })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn depth(&self) -> usize {
        self.thresholds.len() - 1
    }

    pub fn eval(&self, d: f64) -> RhoValue {
        // number of thresholds S_1..S_N that are ≤ d
        let below = self.thresholds[1..].partition_point(|&s| s <= d);
        if below == self.depth() {
            return RhoValue {
                value: 0.0,
                level: None,
                saturated: true,
            };
        }
        let n = below + 1;
        RhoValue {
            value: 0.5 * ((n - 1) as f64).sqrt(),
            level: Some(n),
            saturated: false,
        }
    }
}
