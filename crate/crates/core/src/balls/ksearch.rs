use super::{enumerate_ball_with_budget, Ball};
use crate::error::{Error, Result};
use crate::group::{GroupModel, Length};

/// Smallest integer radius k with |B_{k+R_n}| / |B_{k−R_n}| ≤ 1 + 1/(2n^{1+2p}), R_n = √n.
#[derive(Debug, Clone, PartialEq)]
pub struct KSearchResult {
    pub n: u64,
    pub p: f64,
    pub r_n: f64,
    pub k: Length,
    pub ratio: f64,
    pub bound: f64,
}

fn check_np(n: u64, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be a positive integer".into()));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1)")));
    }
    Ok(())
}

/// Radius scan over exact counts `counts[r] = |B_r|`.
///
/// Radii are floored: `|B_{r±R_n}|` means `counts[⌊r ± R_n⌋]`. An empty inner
/// ball makes the ratio ∞. Fails with a resource error when the counts run
/// out before the bound is met.
pub fn k_search(n: u64, p: f64, counts: &[usize]) -> Result<KSearchResult> {
    check_np(n, p)?;
    let r_n = (n as f64).sqrt();
    let bound = 1.0 + 1.0 / (2.0 * (n as f64).powf(1.0 + 2.0 * p));
    let mut worst_seen = f64::NAN;
    let mut r = r_n.ceil() as usize;
    loop {
        let hi = (r as f64 + r_n).floor() as usize;
        if hi >= counts.len() {
            return Err(Error::Resource(format!(
                "k(n) scan for n={n} ran out of ball at radius {} (last ratio {worst_seen})",
                counts.len().saturating_sub(1)
            )));
        }
        let lo = r as f64 - r_n;
        let ratio = if lo < 0.0 || counts[lo.floor() as usize] == 0 {
            f64::INFINITY
        } else {
            counts[hi] as f64 / counts[lo.floor() as usize] as f64
        };
        if ratio <= bound {
            return Ok(KSearchResult {
                n,
                p,
                r_n,
                k: r as Length,
                ratio,
                bound,
            });
        }
        worst_seen = ratio;
        r += 1;
    }
}

pub fn find_k_n_in_ball(ball: &Ball, n: u64, p: f64) -> Result<KSearchResult> {
    k_search(n, p, ball.counts())
}

/// k(n) for a model, enumerating balls of doubling radius until the scan succeeds.
pub fn find_k_n(model: &GroupModel, n: u64, p: f64, budget_bytes: usize) -> Result<KSearchResult> {
    check_np(n, p)?;
    let mut radius = 4 * ((n as f64).sqrt().ceil() as Length) + 4;
    loop {
        let ball = enumerate_ball_with_budget(model, radius, budget_bytes).map_err(|e| match e {
            Error::Resource(msg) => Error::Resource(format!("k(n) scan for n={n} aborted: {msg}")),
            other => other,
        })?;
        match k_search(n, p, ball.counts()) {
            Ok(res) => return Ok(res),
            Err(Error::Resource(_)) => radius = radius.saturating_mul(2),
            Err(e) => return Err(e),
        }
    }
}
