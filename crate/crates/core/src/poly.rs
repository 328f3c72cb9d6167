//! Normalized ball indicators g_n(x) = χ_{B(x,k)} / √|B_k| with k = k(n).
//!
//! For groups of polynomial growth the radius k(n) from [`crate::balls::k_search`]
//! makes |B_{k+√n}| / |B_{k−√n}| ≤ 1 + 1/(2n^{1+2p}), which forces
//! |1 − ⟨g_n(x), g_n(y)⟩| ≤ 1/(4n^{1+2p}) whenever d(x,y) ≤ √n.
//!
//! Vectors are never materialized. ⟨g_n(x), g_n(y)⟩ = |B_k ∩ uB_k| / |B_k|
//! with u = x⁻¹y, and only the shell k − l(u) < l(z) ≤ k can miss uB_k.

use std::sync::Arc;

use rayon::prelude::*;

use crate::balls::{k_search, largest_ball_within, Ball, KSearchResult, DEFAULT_BUDGET_BYTES};
use crate::error::{Error, Result};
use crate::group::{Element, GroupModel, Length};
use crate::report::{ConditionRow, VerificationReport};

#[derive(Debug, Clone)]
pub struct PolyFamily {
    ball: Arc<Ball>,
    search: KSearchResult,
}

/// Builds g_n on the working ball of radius ⌊√n⌋ + k(n) + 1.
pub fn poly_family(model: &GroupModel, n: u64, p: f64) -> Result<PolyFamily> {
    let search = crate::balls::find_k_n(model, n, p, DEFAULT_BUDGET_BYTES)?;
    let radius = (n as f64).sqrt().floor() as Length + search.k + 1;
    let ball = Arc::new(crate::balls::enumerate_ball(model, radius)?);
    Ok(PolyFamily { ball, search })
}

/// Builds g_n on an existing ball, which must reach radius k(n).
pub fn poly_family_in(ball: Arc<Ball>, n: u64, p: f64) -> Result<PolyFamily> {
    let search = k_search(n, p, ball.counts())?;
    Ok(PolyFamily { ball, search })
}

impl PolyFamily {
    pub fn n(&self) -> u64 {
        self.search.n
    }

    pub fn p(&self) -> f64 {
        self.search.p
    }

    pub fn k(&self) -> Length {
        self.search.k
    }

    pub fn search(&self) -> &KSearchResult {
        &self.search
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn model(&self) -> &GroupModel {
        self.ball.model()
    }

    /// |B_k|.
    pub fn ball_size(&self) -> usize {
        self.ball.count_within(self.k()).unwrap()
    }

    /// The common coordinate value 1/√|B_k| on the support.
    pub fn weight(&self) -> f64 {
        1.0 / (self.ball_size() as f64).sqrt()
    }

    /// Lemma support radius S_n = n^{3/2+5p}.
    pub fn support_bound(&self) -> f64 {
        (self.n() as f64).powf(1.5 + 5.0 * self.p())
    }

    /// |B_k ∩ u·B_k|.
    pub fn overlap(&self, u: &Element) -> usize {
        let model = self.model();
        let k = self.k();
        let d = model.length(u);
        if d > 2 * k {
            return 0;
        }
        let inner = if d <= k { self.ball.count_within(k - d).unwrap() } else { 0 };
        let u_inv = model.inverse(u);
        let shell = inner..self.ball_size();
        let hits = shell
            .filter(|&i| {
                let w = model.multiply(&u_inv, self.ball.element(i));
                self.ball.position(&w).is_some_and(|j| self.ball.length_at(j) <= k)
            })
            .count();
        inner + hits
    }

    pub fn inner(&self, x: &Element, y: &Element) -> f64 {
        let model = self.model();
        let u = model.multiply(&model.inverse(x), y);
        self.overlap(&u) as f64 / self.ball_size() as f64
    }

    /// ‖g_n(x) − g_n(y)‖² = 2 − 2⟨g_n(x), g_n(y)⟩.
    pub fn distance_sq(&self, x: &Element, y: &Element) -> f64 {
        2.0 - 2.0 * self.inner(x, y)
    }

    /// ‖χ_x^k − χ_y^k‖₁ / ‖χ_k‖₁.
    pub fn l1_difference(&self, x: &Element, y: &Element) -> f64 {
        let model = self.model();
        let u = model.multiply(&model.inverse(x), y);
        let b = self.ball_size();
        2.0 * (b - self.overlap(&u)) as f64 / b as f64
    }

    /// supp g_n(x) = x·B_k.
    pub fn support(&self, x: &Element) -> Vec<Element> {
        let model = self.model();
        self.ball.elements()[..self.ball_size()]
            .iter()
            .map(|z| model.multiply(x, z))
            .collect()
    }
}

/// Outcome of checking the lemma at one n.
#[derive(Debug, Clone)]
pub struct PolyLemmaOutcome {
    pub report: VerificationReport,
    pub search: KSearchResult,
    /// S_n = n^{3/2+5p}.
    pub support_bound: f64,
    /// supp g_n(x) = B(x, k) ⊂ B(x, S_n).
    pub support_contained: bool,
    /// 2n^{3/2+4p}.
    pub k_bound: f64,
    pub k_within_bound: bool,
}

/// Checks, at x = 1 (ball sizes do not depend on the center):
///
/// * `cond1`: |1 − ⟨g_n(1), g_n(y)⟩| ≤ 1/(4n^{1+2p}) for l(y) ≤ √n
/// * `chain`: ‖g_n(1) − g_n(y)‖² ≤ ‖χ_1^k − χ_y^k‖₁/‖χ_k‖₁ for the same y
/// * `ratio`: ‖χ_1^k − χ_y^k‖₁/‖χ_k‖₁ ≤ 1/(2n^{1+2p})
/// * `cond2`: k ≤ n^{3/2+5p}
pub fn verify_poly_lemma(family: &PolyFamily) -> PolyLemmaOutcome {
    let n = family.n();
    let p = family.p();
    let nf = n as f64;
    let tol1 = 1.0 / (4.0 * nf.powf(1.0 + 2.0 * p));
    let near = nf.sqrt().floor() as Length;
    let ball = family.ball();
    let model = family.model();
    let id = model.identity();
    let m = ball.count_within(near.min(ball.radius())).unwrap();
    let rows = (0..m)
        .into_par_iter()
        .map(|i| {
            let y = ball.element(i);
            let ip = family.inner(&id, y);
            let l1 = family.l1_difference(&id, y);
            let mut c1 = ConditionRow::new(n, "cond1");
            let mut chain = ConditionRow::new(n, "chain");
            let mut ratio = ConditionRow::new(n, "ratio");
            c1.record(tol1 - (1.0 - ip).abs());
            chain.record(l1 - (2.0 - 2.0 * ip));
            ratio.record(2.0 * tol1 - l1);
            [c1, chain, ratio]
        })
        .reduce(
            || {
                [
                    ConditionRow::new(n, "cond1"),
                    ConditionRow::new(n, "chain"),
                    ConditionRow::new(n, "ratio"),
                ]
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
                a
            },
        );
    let mut report = VerificationReport { rows: rows.to_vec() };
    let support_bound = family.support_bound();
    let mut c2 = ConditionRow::new(n, "cond2");
    c2.record(support_bound - family.k() as f64);
    report.push(c2);
    let k_bound = 2.0 * nf.powf(1.5 + 4.0 * p);
    PolyLemmaOutcome {
        report,
        search: family.search().clone(),
        support_bound,
        support_contained: family.k() as f64 <= support_bound,
        k_bound,
        k_within_bound: family.k() as f64 <= k_bound,
    }
}

/// The lemma checked for n = 1, 2, … on one shared ball.
#[derive(Debug, Clone)]
pub struct PolyScan {
    pub ball_radius: Length,
    pub ball_size: usize,
    pub outcomes: Vec<PolyLemmaOutcome>,
    /// Smallest n from which the support condition holds for every scanned n.
    pub n0: Option<u64>,
    /// Smallest n from which k(n) ≤ 2n^{3/2+4p} holds for every scanned n.
    pub n_bar: Option<u64>,
}

fn tail_start(outcomes: &[PolyLemmaOutcome], holds: impl Fn(&PolyLemmaOutcome) -> bool) -> Option<u64> {
    let mut start = None;
    for o in outcomes.iter().rev() {
        if !holds(o) {
            break;
        }
        start = Some(o.search.n);
    }
    start
}

/// Scans n = 1, 2, … while the working ball ⌊√n⌋ + k(n) + 1 fits in a ball of at most `max_elements`.
pub fn poly_scan(model: &GroupModel, p: f64, max_elements: usize) -> Result<PolyScan> {
    let ball = Arc::new(largest_ball_within(model, max_elements, DEFAULT_BUDGET_BYTES)?);
    let mut outcomes = Vec::new();
    for n in 1u64.. {
        let family = match poly_family_in(ball.clone(), n, p) {
            Ok(f) => f,
            Err(Error::Resource(_)) => break,
            Err(e) => return Err(e),
        };
        let working = (n as f64).sqrt().floor() as Length + family.k() + 1;
        if working > ball.radius() {
            break;
        }
        outcomes.push(verify_poly_lemma(&family));
    }
    Ok(PolyScan {
        ball_radius: ball.radius(),
        ball_size: ball.len(),
        n0: tail_start(&outcomes, |o| o.support_contained),
        n_bar: tail_start(&outcomes, |o| o.k_within_bound),
        outcomes,
    })
}
