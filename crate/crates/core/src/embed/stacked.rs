use nalgebra::DMatrix;

use super::ScaleFamily;
use crate::balls::Ball;
use crate::error::{Error, Result};
use crate::group::Element;
use std::sync::Arc;

/// F(x) = ½ ⊕_{n ≤ N} (η_n(x) − η_n(x₀)) over realized families η_1, …, η_N.
#[derive(Debug, Clone)]
pub struct StackedEmbedding {
    levels: Vec<(Arc<Ball>, DMatrix<f64>)>,
    base_rows: Vec<usize>,
    basepoint: Element,
}

/// ¼ Σ_{i=n}^{N} i^{−(1+2p)}, the truncated tail constant.
pub fn tail_constant(n: usize, depth: usize, p: f64) -> f64 {
    (n.max(1)..=depth).map(|i| (i as f64).powf(-(1.0 + 2.0 * p))).sum::<f64>() / 4.0
}

/// Stacks realized families (level n is `families[n−1]`); each must contain `basepoint`.
pub fn stacked_embedding(families: &[ScaleFamily], basepoint: &Element) -> Result<StackedEmbedding> {
    let mut levels = Vec::with_capacity(families.len());
    let mut base_rows = Vec::with_capacity(families.len());
    for (i, fam) in families.iter().enumerate() {
        let v = fam
            .vectors()
            .ok_or_else(|| Error::Precondition(format!("level {} is not realized", i + 1)))?;
        let row = fam.ball().position(basepoint).ok_or_else(|| {
            Error::Precondition(format!("basepoint missing from the ball of level {}", i + 1))
        })?;
        levels.push((fam.ball().clone(), v.clone()));
        base_rows.push(row);
    }
    Ok(StackedEmbedding {
        levels,
        base_rows,
        basepoint: basepoint.clone(),
    })
}

impl StackedEmbedding {
    /// Truncation depth N.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn basepoint(&self) -> &Element {
        &self.basepoint
    }

    fn rows(&self, x: &Element) -> Result<Vec<usize>> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, (ball, _))| {
                ball.position(x).ok_or_else(|| {
                    Error::Precondition(format!(
                        "{} missing from the ball of level {}",
                        ball.model().format_element(x),
                        i + 1
                    ))
                })
            })
            .collect()
    }

    pub fn vector(&self, x: &Element) -> Result<Vec<f64>> {
        let rows = self.rows(x)?;
        let mut out = Vec::new();
        for (((_, v), &r), &b) in self.levels.iter().zip(&rows).zip(&self.base_rows) {
            out.extend(v.row(r).iter().zip(v.row(b).iter()).map(|(a, c)| 0.5 * (a - c)));
        }
        Ok(out)
    }

    /// ‖F(x) − F(y)‖² = ¼ Σ_n ‖η_n(x) − η_n(y)‖².
    pub fn distance_sq(&self, x: &Element, y: &Element) -> Result<f64> {
        let (rx, ry) = (self.rows(x)?, self.rows(y)?);
        Ok(self
            .levels
            .iter()
            .zip(rx.iter().zip(&ry))
            .map(|((_, v), (&i, &j))| (v.row(i) - v.row(j)).norm_squared())
            .sum::<f64>()
            / 4.0)
    }

    /// (n−1) + ¼Σ_{i=n}^{N} i^{−(1+2p)} with n = ⌊d²⌋+1, the upper bound when
    /// each level i satisfies ‖Δη_i‖ ≤ i^{−(1/2+p)} for d ≤ √i.
    pub fn upper_bound(&self, d: f64, p: f64) -> f64 {
        let n = (d * d).floor() as usize + 1;
        ((n - 1).min(self.depth())) as f64 + tail_constant(n, self.depth(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::enumerate_ball;
    use crate::embed::{
        corollary_threshold, schoenberg_family_for, CompressionProfile, RhoStep, ScaleParams,
    };
    use crate::group::{make_group, GroupSpec};

    fn coords(x: &Element) -> Vec<f64> {
        x.values().iter().map(|&v| v as f64).collect()
    }

    #[test]
    fn stacked_bounds_on_z() {
        let p = 0.05;
        let depth = 10;
        let z = make_group(&GroupSpec::FreeAbelian { rank: 1 }).unwrap();
        let ball = Arc::new(enumerate_ball(&z, 60).unwrap());
        let prof = CompressionProfile::isometric();
        let mut families = Vec::new();
        let mut thresholds = Vec::new();
        for n in 1..=depth as u64 {
            // ε_n = n^{−(1/2+p)}, R_n = √n
            let params = ScaleParams::new(n, p, 0.5, 1.0, 0.5 + p).unwrap();
            thresholds.push(corollary_threshold(&prof, &params).unwrap().a_n);
            let mut fam = schoenberg_family_for(ball.clone(), coords, &prof, params).unwrap();
            fam.realize().unwrap();
            families.push(fam);
        }
        let origin = z.identity();
        let stack = stacked_embedding(&families, &origin).unwrap();
        assert!(stack.vector(&origin).unwrap().iter().all(|&c| c == 0.0));
        let rho = RhoStep::new(&thresholds).unwrap();
        for y in ball.elements() {
            let d = z.distance(&origin, y) as f64;
            let dsq = stack.distance_sq(&origin, y).unwrap();
            assert!(dsq <= stack.upper_bound(d, p) + 1e-9, "d={d}");
            assert!(dsq <= d * d + tail_constant(1, depth, p) + 1e-9);
            let low = rho.eval(d);
            if !low.saturated {
                assert!(dsq + 1e-9 >= low.value * low.value, "d={d}");
            }
        }
    }

    #[test]
    fn missing_element_rejected() {
        let z = make_group(&GroupSpec::FreeAbelian { rank: 1 }).unwrap();
        let ball = Arc::new(enumerate_ball(&z, 3).unwrap());
        let params = ScaleParams::new(1, 0.05, 0.5, 1.0, 0.55).unwrap();
        let mut fam = schoenberg_family_for(ball, coords, &CompressionProfile::isometric(), params).unwrap();
        assert_eq!(
            stacked_embedding(std::slice::from_ref(&fam), &z.identity()).unwrap_err().category(),
            "precondition"
        );
        fam.realize().unwrap();
        let stack = stacked_embedding(&[fam], &z.identity()).unwrap();
        assert!(stack.vector(&Element::new(&[9])).is_err());
    }
}
