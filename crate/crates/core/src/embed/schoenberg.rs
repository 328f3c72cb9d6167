use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::{CompressionProfile, ScaleParams, EIGEN_FLOOR};
use crate::balls::Ball;
use crate::error::{Error, Result};
use crate::group::Element;

/// Unit vectors ξ_x, x ∈ ball, stored through their Gram matrix.
#[derive(Debug, Clone)]
pub struct ScaleFamily {
    ball: Arc<Ball>,
    features: Vec<Vec<f64>>,
    t: f64,
    gram: DMatrix<f64>,
    vectors: Option<DMatrix<f64>>,
    params: Option<ScaleParams>,
}

fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Gram[x][y] = exp(−t‖F(x)−F(y)‖²) over every pair of ball elements.
pub fn schoenberg_family<F>(ball: Arc<Ball>, f: F, t: f64) -> Result<ScaleFamily>
where
    F: Fn(&Element) -> Vec<f64> + Sync,
{
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t = {t} must be finite and nonnegative")));
    }
    let features: Vec<Vec<f64>> = ball.elements().par_iter().map(&f).collect();
    let dim = features.first().map_or(0, Vec::len);
    for (x, v) in ball.elements().iter().zip(&features) {
        if v.len() != dim || v.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "F({}) is not a finite vector of dimension {dim}",
                ball.model().format_element(x)
            )));
        }
    }
    let m = features.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| if i == j { 1.0 } else { (-t * squared_distance(&features[i], &features[j])).exp() })
                .collect()
        })
        .collect();
    let gram = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
    Ok(ScaleFamily {
        ball,
        features,
        t,
        gram,
        vectors: None,
        params: None,
    })
}

/// As [`schoenberg_family`] with t taken from the scale parameters and profile.
pub fn schoenberg_family_for<F>(
    ball: Arc<Ball>,
    f: F,
    profile: &CompressionProfile,
    params: ScaleParams,
) -> Result<ScaleFamily>
where
    F: Fn(&Element) -> Vec<f64> + Sync,
{
    let mut fam = schoenberg_family(ball, f, params.t(profile)?)?;
    fam.params = Some(params);
    Ok(fam)
}

impl ScaleFamily {
    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn params(&self) -> Option<&ScaleParams> {
        self.params.as_ref()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    /// ‖F(x_i) − F(x_j)‖.
    pub fn feature_distance(&self, i: usize, j: usize) -> f64 {
        squared_distance(&self.features[i], &self.features[j]).sqrt()
    }

    pub fn inner(&self, i: usize, j: usize) -> f64 {
        self.gram[(i, j)]
    }

    /// ‖ξ_i − ξ_j‖ = √(2 − 2⟨ξ_i, ξ_j⟩).
    pub fn vector_distance(&self, i: usize, j: usize) -> f64 {
        (2.0 - 2.0 * self.gram[(i, j)]).max(0.0).sqrt()
    }

    pub fn vectors(&self) -> Option<&DMatrix<f64>> {
        self.vectors.as_ref()
    }

    /// Factors the Gram matrix once and keeps the coordinates.
    pub fn realize(&mut self) -> Result<&DMatrix<f64>> {
        if self.vectors.is_none() {
            self.vectors = Some(realize_gram(&self.gram)?);
        }
        Ok(self.vectors.as_ref().unwrap())
    }
}

/// Coordinates (one row per ball element) with V·Vᵀ = Gram.
pub fn realize_vectors(family: &ScaleFamily) -> Result<DMatrix<f64>> {
    realize_gram(&family.gram)
}

/// Symmetric factorization of a unit-diagonal PSD matrix.
///
/// Eigenvalues in [−1e−10, 0) are clipped to 0. Rows are rescaled to unit
/// length afterwards, which only absorbs rounding.
pub fn realize_gram(gram: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = gram.nrows();
    if m != gram.ncols() {
        return Err(Error::InvalidParameter("Gram matrix is not square".into()));
    }
    if m == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(gram.clone());
    let worst = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if worst < EIGEN_FLOOR {
        return Err(Error::Numeric(format!("Gram matrix is indefinite: worst eigenvalue {worst:e}")));
    }
    let scale = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let mut v = eig.eigenvectors;
    for (j, s) in scale.iter().enumerate() {
        v.column_mut(j).scale_mut(*s);
    }
    for mut row in v.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    Ok(v)
}
