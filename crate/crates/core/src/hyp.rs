//! Ray-segment vectors on free groups.
//!
//! Fix an end a of the tree (an infinite reduced word). From every vertex y
//! there is exactly one geodesic ray toward a: walk back from y to the longest
//! common prefix of y and a, then follow a. With m = k(n) = n^{2+5p},
//!
//! * F(x, k, m) is the set of ray vertices at indices ⌈m⌉..⌊2m⌋ over all y with d(x, y) < k,
//! * H(x, m) = m^{−(3/2−q)} Σ_{1 ≤ k < √m} F(x, k, m) (a multiset, so weights are integers times one scale),
//! * g(x) = √(H(x, m) / ‖H(x, m)‖₁).
//!
//! Only free groups are supported; other models fail with an unsupported-model error.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::balls::{enumerate_ball, Ball};
use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::group::{Element, GroupModel, GroupSpec, Length};
use crate::report::{ConditionRow, VerificationReport};

/// An eventually periodic reduced infinite word `pre · period^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Boundary {
    pre: Vec<i64>,
    period: Vec<i64>,
}

impl Boundary {
    pub fn new(pre: &Element, period: &Element) -> Result<Self> {
        let (pre, period) = (pre.values().to_vec(), period.values().to_vec());
        if period.is_empty() {
            return Err(Error::InvalidParameter("boundary period must be nonempty".into()));
        }
        let b = Boundary { pre, period };
        // every adjacent pair in pre·period·period must be reduced
        let probe: Vec<i64> = (0..b.pre.len() + 2 * b.period.len()).map(|i| b.letter(i)).collect();
        if probe.iter().any(|&l| l == 0) || probe.windows(2).any(|w| w[0] == -w[1]) {
            return Err(Error::InvalidParameter("boundary word is not reduced".into()));
        }
        Ok(b)
    }

    /// g^∞ for the i-th generator (0-based).
    pub fn power_of(generator: usize) -> Self {
        Boundary {
            pre: Vec::new(),
            period: vec![generator as i64 + 1],
        }
    }

    /// Parses the preperiod and period words in the model's element syntax.
    pub fn parse(model: &GroupModel, pre: &str, period: &str) -> Result<Self> {
        Boundary::new(&model.parse_element(pre)?, &model.parse_element(period)?)
    }

    pub fn letter(&self, i: usize) -> i64 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<i64> {
        (0..len).map(|i| self.letter(i)).collect()
    }

    fn max_letter(&self) -> i64 {
        self.pre.iter().chain(&self.period).map(|l| l.abs()).max().unwrap_or(0)
    }
}

fn require_free(model: &GroupModel) -> Result<usize> {
    match model.spec() {
        GroupSpec::FreeGroup { rank } => Ok(*rank),
        other => Err(Error::Unsupported(format!(
            "ray computations need a free group, got {other}"
        ))),
    }
}

fn check_boundary(model: &GroupModel, a: &Boundary) -> Result<()> {
    let rank = require_free(model)?;
    if a.max_letter() as usize > rank {
        return Err(Error::InvalidParameter(format!("boundary word uses letters outside F_{rank}")));
    }
    Ok(())
}

/// The j-th vertex of the ray from `y` toward `a` (vertex 0 is y).
fn ray_vertex(y: &[i64], common: usize, a: &Boundary, j: usize) -> Element {
    let back = y.len() - common;
    if j <= back {
        Element::new(&y[..y.len() - j])
    } else {
        Element::from_vec(a.prefix(common + j - back))
    }
}

fn common_prefix(y: &[i64], a: &Boundary) -> usize {
    y.iter().enumerate().take_while(|&(i, &l)| a.letter(i) == l).count()
}

/// Ray vertices at indices lo..=hi, in order.
pub fn ray_segment(model: &GroupModel, y: &Element, a: &Boundary, lo: usize, hi: usize) -> Result<Vec<Element>> {
    check_boundary(model, a)?;
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty index range {lo}..={hi}")));
    }
    let w = y.values();
    let c = common_prefix(w, a);
    Ok((lo..=hi).map(|j| ray_vertex(w, c, a, j)).collect())
}

/// F(x, k, m): the union of ray segments ⌈m⌉..=⌊2m⌋ from every y with d(x, y) < k.
pub fn f_indicator(model: &GroupModel, x: &Element, k: Length, m: f64, a: &Boundary) -> Result<BTreeSet<Element>> {
    check_boundary(model, a)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let ball = enumerate_ball(model, k - 1)?;
    Ok(f_from_ball(model, &ball, x, k, m, a))
}

fn f_from_ball(model: &GroupModel, ball: &Ball, x: &Element, k: Length, m: f64, a: &Boundary) -> BTreeSet<Element> {
    let (lo, hi) = (m.ceil() as usize, (2.0 * m).floor() as usize);
    let count = ball.count_within(k - 1).unwrap();
    let mut out = BTreeSet::new();
    for z in &ball.elements()[..count] {
        let y = model.multiply(x, z);
        let c = common_prefix(y.values(), a);
        for j in lo..=hi {
            out.insert(ray_vertex(y.values(), c, a, j));
        }
    }
    out
}

/// q at the midpoint of (0, 1/2 − (1+2p)/(2+5p)).
pub fn default_q(p: f64) -> f64 {
    0.5 * (0.5 - (1.0 + 2.0 * p) / (2.0 + 5.0 * p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypParams {
    pub n: u64,
    pub p: f64,
    pub q: f64,
    pub boundary: Boundary,
}

impl HypParams {
    pub fn new(n: u64, p: f64, q: f64, boundary: Boundary) -> Result<Self> {
        if n == 0 || !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("need n ≥ 1 and p ∈ [0,1), got n={n}, p={p}")));
        }
        if !(q > 0.0 && (2.0 + 5.0 * p) * (0.5 - q) > 1.0 + 2.0 * p) {
            return Err(Error::InvalidParameter(format!(
                "q = {q} violates 0 < q and (2+5p)(1/2−q) > 1+2p at p = {p}"
            )));
        }
        Ok(HypParams { n, p, q, boundary })
    }

    pub fn with_default_q(n: u64, p: f64, boundary: Boundary) -> Result<Self> {
        Self::new(n, p, default_q(p), boundary)
    }

    /// k(n) = n^{2+5p} (real valued).
    pub fn k_n(&self) -> f64 {
        (self.n as f64).powf(2.0 + 5.0 * self.p)
    }

    /// S_n = n^{2+6p}.
    pub fn support_bound(&self) -> f64 {
        (self.n as f64).powf(2.0 + 6.0 * self.p)
    }
}

/// H(x, m) as integer multiplicities times `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct HVector {
    pub counts: BTreeMap<Element, u64>,
    pub scale: f64,
    /// Σ counts; ‖H‖₁ = scale · total.
    pub total: u64,
    /// Σ_k |F(x, k, m)|, kept separately to check additivity.
    pub per_k_sizes: Vec<u64>,
}

impl HVector {
    pub fn l1(&self) -> f64 {
        self.scale * self.total as f64
    }

    pub fn is_zero(&self) -> bool {
        self.total == 0
    }

    /// ‖H_x − H_y‖₁, summed in integers before scaling.
    pub fn l1_difference(&self, other: &HVector) -> f64 {
        let mut diff: u64 = 0;
        for (z, &c) in &self.counts {
            diff += c.abs_diff(other.counts.get(z).copied().unwrap_or(0));
        }
        for (z, &c) in &other.counts {
            if !self.counts.contains_key(z) {
                diff += c;
            }
        }
        self.scale * diff as f64
    }

    /// ⟨g_x, g_y⟩ for the normalized square roots.
    pub fn g_inner(&self, other: &HVector) -> f64 {
        if self.is_zero() || other.is_zero() {
            return f64::NAN;
        }
        let s: f64 = self
            .counts
            .iter()
            .filter_map(|(z, &c)| other.counts.get(z).map(|&d| ((c * d) as f64).sqrt()))
            .sum();
        s / ((self.total as f64) * (other.total as f64)).sqrt()
    }
}

/// H and g vectors for one parameter set, memoized per center.
#[derive(Debug)]
pub struct HypFamily {
    model: GroupModel,
    params: HypParams,
    local: Ball,
    cache: RwLock<HashMap<Element, Arc<HVector>>>,
}

impl HypFamily {
    pub fn new(model: &GroupModel, params: HypParams) -> Result<Self> {
        check_boundary(model, &params.boundary)?;
        let m = params.k_n();
        let k_max = ks_below_sqrt(m).last().copied().unwrap_or(1);
        let local = enumerate_ball(model, k_max.saturating_sub(1))?;
        Ok(HypFamily {
            model: model.clone(),
            params,
            local,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &HypParams {
        &self.params
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    /// H(x, k(n)).
    pub fn h_vector(&self, x: &Element) -> Arc<HVector> {
        if let Some(h) = self.cache.read().unwrap().get(x) {
            return h.clone();
        }
        let h = Arc::new(h_vector_at(&self.model, &self.local, x, self.params.k_n(), self.params.q, &self.params.boundary));
        self.cache.write().unwrap().entry(x.clone()).or_insert(h).clone()
    }

    /// g(x) as (element, coordinate) pairs; fails when H(x) = 0.
    pub fn g_vector(&self, x: &Element) -> Result<Vec<(Element, f64)>> {
        let h = self.h_vector(x);
        if h.is_zero() {
            return Err(Error::Precondition(format!(
                "H({}) is zero, g is undefined",
                self.model.format_element(x)
            )));
        }
        let t = h.total as f64;
        Ok(h.counts.iter().map(|(z, &c)| (z.clone(), (c as f64 / t).sqrt())).collect())
    }

    /// max d(x, z) over the support of H(x).
    pub fn support_radius(&self, x: &Element) -> Length {
        self.h_vector(x)
            .counts
            .keys()
            .map(|z| self.model.distance(x, z))
            .max()
            .unwrap_or(0)
    }
}

fn ks_below_sqrt(m: f64) -> Vec<Length> {
    let root = m.sqrt();
    (1..).take_while(|&k| (k as f64) < root).collect()
}

/// H(x, m) = m^{−(3/2−q)} Σ_{1 ≤ k < √m} F(x, k, m); `ball` must reach radius ⌈√m⌉ − 2.
pub fn h_vector_at(model: &GroupModel, ball: &Ball, x: &Element, m: f64, q: f64, a: &Boundary) -> HVector {
    let mut counts = BTreeMap::new();
    let mut per_k_sizes = Vec::new();
    for k in ks_below_sqrt(m) {
        let f = f_from_ball(model, ball, x, k, m, a);
        per_k_sizes.push(f.len() as u64);
        for z in f {
            *counts.entry(z).or_insert(0) += 1;
        }
    }
    let total = counts.values().sum();
    HVector {
        counts,
        scale: m.powf(-(1.5 - q)),
        total,
        per_k_sizes,
    }
}

/// Whether the ‖H‖₁ ≥ 1 check compares integer totals (`Exact`) or scaled floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithmeticMode {
    #[default]
    Float,
    Exact,
}

#[derive(Debug, Clone)]
pub struct HypLemmaOutcome {
    pub report: VerificationReport,
    pub n: u64,
    pub k_n: f64,
    pub min_l1: f64,
    pub max_support_radius: Length,
    pub support_bound: f64,
    pub support_contained: bool,
    /// max ‖H(x) − H(y)‖₁ over pairs with d(x, y) ≤ ln n.
    pub max_difference: f64,
}

/// Checks the lemma's conditions for every x in the ball of radius `working_radius`:
///
/// * `cond1`: ‖H(x, k(n))‖₁ ≥ 1
/// * `cond3`: supp H(x, k(n)) ⊂ B(x, n^{2+6p})
/// * `cond2`: ‖H(x) − H(y)‖₁ ≤ 1/(4n^{1+2p}) for d(x, y) ≤ ln n
/// * `chain`: ‖g(x) − g(y)‖² ≤ 2‖H(x) − H(y)‖₁ for d(x, y) ≤ 1 when ‖H(x)‖₁ ≥ 1
pub fn verify_hyp_lemma(family: &HypFamily, working_radius: Length, mode: ArithmeticMode) -> Result<HypLemmaOutcome> {
    let model = family.model();
    let params = family.params();
    let n = params.n;
    let ball = enumerate_ball(model, working_radius)?;
    let near = (n as f64).ln();
    let tol2 = 1.0 / (4.0 * (n as f64).powf(1.0 + 2.0 * params.p));
    let support_bound = params.support_bound();
    let rows: Vec<[ConditionRow; 4]> = ball
        .elements()
        .par_iter()
        .map(|x| {
            let mut c1 = ConditionRow::new(n, "cond1");
            let mut c3 = ConditionRow::new(n, "cond3");
            let mut c2 = ConditionRow::new(n, "cond2");
            let mut chain = ConditionRow::new(n, "chain");
            let hx = family.h_vector(x);
            let margin = match mode {
                // integer total against m^{3/2−q}, so rounding in the scale never flips a tie
                ArithmeticMode::Exact => {
                    let need = params.k_n().powf(1.5 - params.q).ceil() as u64;
                    if hx.total >= need { 0.0 } else { -1.0 }
                }
                ArithmeticMode::Float => hx.l1() - 1.0,
            };
            c1.record(margin);
            c3.record(support_bound - family.support_radius(x) as f64);
            for y in ball.elements() {
                let d = model.distance(x, y) as f64;
                if d <= near || d <= 1.0 {
                    let hy = family.h_vector(y);
                    let diff = hx.l1_difference(&hy);
                    if d <= near {
                        c2.record(tol2 - diff);
                    }
                    if d <= 1.0 && hx.l1() >= 1.0 && !hy.is_zero() {
                        chain.record(2.0 * diff - (2.0 - 2.0 * hx.g_inner(&hy)));
                    }
                }
            }
            [c1, c3, c2, chain]
        })
        .collect();
    let mut merged = [
        ConditionRow::new(n, "cond1"),
        ConditionRow::new(n, "cond3"),
        ConditionRow::new(n, "cond2"),
        ConditionRow::new(n, "chain"),
    ];
    for r in &rows {
        for (m, x) in merged.iter_mut().zip(r) {
            m.merge(x);
        }
    }
    let min_l1 = ball
        .elements()
        .iter()
        .map(|x| family.h_vector(x).l1())
        .fold(f64::INFINITY, f64::min);
    let max_support_radius = ball.elements().iter().map(|x| family.support_radius(x)).max().unwrap_or(0);
    let max_difference = ball
        .elements()
        .par_iter()
        .map(|x| {
            ball.elements()
                .iter()
                .filter(|y| model.distance(x, y) as f64 <= near)
                .map(|y| family.h_vector(x).l1_difference(&family.h_vector(y)))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(HypLemmaOutcome {
        report: VerificationReport { rows: merged.to_vec() },
        n,
        k_n: params.k_n(),
        min_l1,
        max_support_radius,
        support_bound,
        support_contained: max_support_radius as f64 <= support_bound,
        max_difference,
    })
}

/// Least-squares (C, D) in max‖ΔH‖₁ · k(n)^{1/2−q} ≈ C ln n + D; needs two distinct n.
pub fn fit_condition2_constants(outcomes: &[HypLemmaOutcome], q: f64) -> Option<(f64, f64)> {
    let xs: Vec<f64> = outcomes.iter().map(|o| (o.n as f64).ln()).collect();
    let ys: Vec<f64> = outcomes.iter().map(|o| o.max_difference * o.k_n.powf(0.5 - q)).collect();
    fit_line(&xs, &ys).map(|f| (f.slope, f.intercept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn f2() -> GroupModel {
        make_group(&GroupSpec::FreeGroup { rank: 2 }).unwrap()
    }

    fn b_inf() -> Boundary {
        Boundary::power_of(1)
    }

    fn el(g: &GroupModel, s: &str) -> Element {
        g.parse_element(s).unwrap()
    }

    #[test]
    fn rays_from_simple_points() {
        let g = f2();
        let seg = ray_segment(&g, &g.identity(), &b_inf(), 0, 3).unwrap();
        assert_eq!(seg, ["1", "b", "bb", "bbb"].map(|s| el(&g, s)));
        let seg = ray_segment(&g, &el(&g, "B"), &b_inf(), 0, 2).unwrap();
        assert_eq!(seg, ["B", "1", "b"].map(|s| el(&g, s)));
        let seg = ray_segment(&g, &el(&g, "ab"), &b_inf(), 1, 2).unwrap();
        assert_eq!(seg, ["a", "1"].map(|s| el(&g, s)));
    }

    #[test]
    fn rays_are_geodesics_toward_the_end() {
        // brute force: step to the neighbor closer to a long prefix of a
        let g = f2();
        let gens = g.generators().unwrap();
        for a in [b_inf(), Boundary::parse(&g, "aB", "ab").unwrap()] {
            let target = Element::from_vec(a.prefix(40));
            for y in enumerate_ball(&g, 5).unwrap().elements() {
                let ray = ray_segment(&g, y, &a, 0, 12).unwrap();
                let mut cur = y.clone();
                for (j, v) in ray.iter().enumerate() {
                    assert_eq!(v, &cur, "y={y:?} j={j}");
                    let d = g.distance(&cur, &target);
                    cur = gens
                        .iter()
                        .map(|s| g.multiply(&cur, s))
                        .find(|w| g.distance(w, &target) + 1 == d)
                        .unwrap();
                }
                for w in ray.windows(2) {
                    assert_eq!(g.distance(&w[0], &w[1]), 1);
                }
            }
        }
    }

    #[test]
    fn f_indicator_small_cases() {
        let g = f2();
        let f = f_indicator(&g, &g.identity(), 1, 2.0, &b_inf()).unwrap();
        let expected: BTreeSet<Element> = ["bb", "bbb", "bbbb"].iter().map(|s| el(&g, s)).collect();
        assert_eq!(f, expected);
        // k = 2, m = 2: y ∈ {1, a, A, b, B}; segments 2..=4 give b^1..b^5
        let f = f_indicator(&g, &g.identity(), 2, 2.0, &b_inf()).unwrap();
        assert_eq!(f.len(), 5);
    }

    #[test]
    fn h_vector_structure() {
        let g = f2();
        let ball = enumerate_ball(&g, 2).unwrap();
        // m = 1: √m ≤ 1, empty sum
        let h = h_vector_at(&g, &ball, &g.identity(), 1.0, 0.01, &b_inf());
        assert!(h.is_zero());
        // m = 4: only k = 1
        let h = h_vector_at(&g, &ball, &g.identity(), 4.0, 0.01, &b_inf());
        assert_eq!(h.per_k_sizes, vec![5]);
        assert!((h.scale - 4f64.powf(-(1.5 - 0.01))).abs() < 1e-15);
        let h = h_vector_at(&g, &ball, &el(&g, "aB"), 11.8, 0.01, &b_inf());
        assert_eq!(h.total, h.per_k_sizes.iter().sum::<u64>());
    }

    #[test]
    fn g_is_unit_and_chain_holds() {
        let g = f2();
        let params = HypParams::with_default_q(2, 0.05, b_inf()).unwrap();
        let fam = HypFamily::new(&g, params).unwrap();
        let x = el(&g, "ab");
        let norm: f64 = fam.g_vector(&x).unwrap().iter().map(|(_, c)| c * c).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(fam.h_vector(&g.identity()).l1() >= 1.0);
        let y = el(&g, "abA");
        let (hx, hy) = (fam.h_vector(&x), fam.h_vector(&y));
        assert!(2.0 - 2.0 * hx.g_inner(&hy) <= 2.0 * hx.l1_difference(&hy) + 1e-12);
    }

    #[test]
    fn equivariance_under_b() {
        let g = f2();
        let params = HypParams::with_default_q(3, 0.05, b_inf()).unwrap();
        let fam = HypFamily::new(&g, params).unwrap();
        let b = el(&g, "b");
        let pts: Vec<Element> = ["1", "a", "aB", "Ab", "ba", "BBa"].iter().map(|s| el(&g, s)).collect();
        for x in &pts {
            for y in &pts {
                let lhs = fam.h_vector(&g.multiply(&b, x)).g_inner(&fam.h_vector(&g.multiply(&b, y)));
                let rhs = fam.h_vector(x).g_inner(&fam.h_vector(y));
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn q_rule_and_constraint() {
        let q = default_q(0.05);
        assert!((q - 0.5 * (0.5 - 1.1 / 2.25)).abs() < 1e-15);
        assert!(HypParams::new(2, 0.05, q, b_inf()).is_ok());
        assert!(HypParams::new(2, 0.05, 0.02, b_inf()).is_err());
    }

    #[test]
    fn non_free_models_are_unsupported() {
        let z = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
        let err = ray_segment(&z, &z.identity(), &b_inf(), 0, 1).unwrap_err();
        assert_eq!(err.category(), "unsupported");
    }

    #[test]
    fn unreduced_boundary_rejected() {
        let g = f2();
        assert!(Boundary::parse(&g, "b", "B").is_err());
        assert!(Boundary::parse(&g, "", "aA").is_err());
        assert!(Boundary::parse(&g, "", "ab").is_ok());
    }
}
