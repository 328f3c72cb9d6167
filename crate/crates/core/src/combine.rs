//! Combining a quotient family g_n on G with a kernel family h_n on H into
//! unit vectors f_n on Γ for an extension 1 → H → Γ → G → 1:
//!
//! f_n(a) = Σ_x g_n(π(a))(x) · δ_x ⊗ h_n(s_x(a)),   s_x(a) = project_to_kernel(σ(x)⁻¹·a).
//!
//! For x in supp g_n(π(a)) the kernel argument has length at most
//! 2·S_G + l(a), and for d(a,b) ≤ R the two arguments s_x(a), s_x(b) are
//! within 2·S_G + R of each other, which is the tolerance h_n is built for.
//!
//! h_n is a Schoenberg family exp(−t‖F(u) − F(v)‖²) over explicit kernel
//! features F, with t chosen so that 1 − ⟨h(u), h(v)⟩ ≤ 1/(4n^{1+2p})
//! whenever d_H(u, v) ≤ 2·S_G + R.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::balls::{Ball, DEFAULT_BUDGET_BYTES};
use crate::embed::schoenberg_t;
use crate::error::{Error, Result};
use crate::group::{Element, ExtensionModel, GroupSpec, Length};
use crate::hyp::HypFamily;
use crate::poly::PolyFamily;
use crate::report::{ConditionRow, VerificationReport};

/// Radii for one scale n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionScales {
    pub n: u64,
    pub p: f64,
    /// Compression exponent assumed for the kernel.
    pub delta: f64,
    /// Support radius S_G of g_n.
    pub s_g: f64,
    /// S_H = (n^{1/2+3p}·S_G)^{1/(δ−p)}.
    pub s_h: f64,
    /// S̄ = n^p·S_H.
    pub s_bar: f64,
    /// √n (polynomial case) or ln n (hyperbolic case).
    pub near: f64,
}

impl ExtensionScales {
    fn build(n: u64, p: f64, delta: f64, s_g: f64, near: f64) -> Result<Self> {
        if n == 0 || !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("need n ≥ 1 and p ∈ [0,1), got n={n}, p={p}")));
        }
        if !(delta > p && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!("need p < δ ≤ 1, got δ={delta}, p={p}")));
        }
        if !(s_g > 0.0 && s_g.is_finite()) {
            return Err(Error::InvalidParameter(format!("support radius {s_g} must be positive")));
        }
        let nf = n as f64;
        let s_h = (nf.powf(0.5 + 3.0 * p) * s_g).powf(1.0 / (delta - p));
        Ok(ExtensionScales {
            n,
            p,
            delta,
            s_g,
            s_h,
            s_bar: nf.powf(p) * s_h,
            near,
        })
    }

    /// S_G = n^{3/2+5p}, near radius √n.
    pub fn polynomial(n: u64, p: f64, delta: f64) -> Result<Self> {
        let nf = n as f64;
        Self::build(n, p, delta, nf.powf(1.5 + 5.0 * p), nf.sqrt())
    }

    /// S_G = n^{2+6p}, near radius ln n.
    pub fn hyperbolic(n: u64, p: f64, delta: f64) -> Result<Self> {
        let nf = n as f64;
        Self::build(n, p, delta, nf.powf(2.0 + 6.0 * p), nf.ln())
    }

    /// Same n, p, δ and near radius with a different support radius.
    pub fn with_support(&self, s_g: f64) -> Result<Self> {
        Self::build(self.n, self.p, self.delta, s_g, self.near)
    }

    /// 2·S_G + near radius.
    pub fn kernel_tolerance_radius(&self) -> f64 {
        2.0 * self.s_g + self.near
    }

    /// 2·S_G + S_H.
    pub fn far_radius(&self) -> f64 {
        2.0 * self.s_g + self.s_h
    }

    /// 1/(2n^{1+2p}).
    pub fn near_tolerance(&self) -> f64 {
        0.5 / (self.n as f64).powf(1.0 + 2.0 * self.p)
    }

    /// Kernel lengths needed to cover every argument for Γ-elements of length ≤ `gamma_radius`.
    pub fn domain_radius(&self, gamma_radius: Length) -> Length {
        (2.0 * self.s_g).floor() as Length + 2 * gamma_radius
    }
}

/// A finitely supported unit-vector family on the quotient.
pub trait QuotientFamily: Sync {
    /// Nonzero coordinates of the vector at `g`, sorted by element.
    fn weights(&self, g: &Element) -> Result<Vec<(Element, f64)>>;
}

impl QuotientFamily for PolyFamily {
    fn weights(&self, g: &Element) -> Result<Vec<(Element, f64)>> {
        let w = self.weight();
        let mut out: Vec<(Element, f64)> = self.support(g).into_iter().map(|x| (x, w)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

impl QuotientFamily for HypFamily {
    fn weights(&self, g: &Element) -> Result<Vec<(Element, f64)>> {
        self.g_vector(g)
    }
}

/// Explicit features of the kernel: coordinates for ℤ^d, a unit-circle pair per factor for ⊕ ℤ/m.
pub fn kernel_features(kernel: &GroupSpec, coords: &Element) -> Result<Vec<f64>> {
    match kernel {
        GroupSpec::FreeAbelian { .. } => Ok(coords.values().iter().map(|&v| v as f64).collect()),
        GroupSpec::DirectSumFinite { orders } => Ok(coords
            .values()
            .iter()
            .zip(orders)
            .filter(|&(_, &m)| m > 1)
            .flat_map(|(&v, &m)| {
                let theta = std::f64::consts::TAU * v as f64 / m as f64;
                [theta.cos(), theta.sin()]
            })
            .collect()),
        other => Err(Error::Unsupported(format!("no kernel features for {other}"))),
    }
}

/// h_n on the kernel ball of a fixed radius; elements are kept in Γ coordinates.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    domain_radius: Length,
    features: HashMap<Element, Vec<f64>>,
    rho_plus: f64,
    tolerance: f64,
    t: f64,
}

impl KernelFamily {
    pub fn new(ext: &ExtensionModel, scales: &ExtensionScales, domain_radius: Length) -> Result<Self> {
        let kernel_spec = ext.kernel().spec().clone();
        let elements = ext.kernel_ball_elements(domain_radius, DEFAULT_BUDGET_BYTES)?;
        let mut features = HashMap::with_capacity(elements.len());
        let mut lengths = Vec::with_capacity(elements.len());
        for (u, l) in elements {
            let f = kernel_features(&kernel_spec, &ext.kernel_coordinates(&u)?)?;
            lengths.push((u.clone(), l));
            features.insert(u, f);
        }
        let one = features[&ext.total().identity()].clone();
        let reach = scales.kernel_tolerance_radius();
        let rho_plus = lengths
            .iter()
            .filter(|(_, l)| *l as f64 <= reach)
            .map(|(u, _)| sq_dist(&features[u], &one).sqrt())
            .fold(0.0, f64::max);
        let tolerance = 0.25 / (scales.n as f64).powf(1.0 + 2.0 * scales.p);
        // 1 − exp(−tρ₊²) = tolerance
        let t = if rho_plus > 0.0 {
            schoenberg_t((2.0 * tolerance).sqrt(), rho_plus)?
        } else {
            1.0
        };
        Ok(KernelFamily {
            domain_radius,
            features,
            rho_plus,
            tolerance,
            t,
        })
    }

    pub fn domain_radius(&self) -> Length {
        self.domain_radius
    }

    pub fn domain_size(&self) -> usize {
        self.features.len()
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    /// 1/(4n^{1+2p}).
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn feature(&self, u: &Element) -> Option<&[f64]> {
        self.features.get(u).map(Vec::as_slice)
    }

    /// ⟨h(u), h(v)⟩, or `None` outside the domain.
    pub fn inner(&self, u: &Element, v: &Element) -> Option<f64> {
        Some((-self.t * sq_dist(self.feature(u)?, self.feature(v)?)).exp())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// One coordinate block of f_n(a).
#[derive(Debug, Clone)]
pub struct Block {
    pub x: Element,
    pub weight: f64,
    /// s_x(a) in Γ coordinates.
    pub kernel_arg: Element,
}

/// f_n(a) as blocks sorted by x.
#[derive(Debug, Clone)]
pub struct CombinedVector {
    pub blocks: Vec<Block>,
    pub out_of_domain: bool,
}

pub struct CombinedFamily<'a, Q: QuotientFamily> {
    ext: &'a ExtensionModel,
    quotient: &'a Q,
    kernel: &'a KernelFamily,
    scales: ExtensionScales,
}

/// f_n from g_n (support radius `scales.s_g`) and h_n.
pub fn combine_family<'a, Q: QuotientFamily>(
    ext: &'a ExtensionModel,
    quotient: &'a Q,
    kernel: &'a KernelFamily,
    scales: ExtensionScales,
) -> CombinedFamily<'a, Q> {
    CombinedFamily {
        ext,
        quotient,
        kernel,
        scales,
    }
}

impl<Q: QuotientFamily> CombinedFamily<'_, Q> {
    pub fn scales(&self) -> &ExtensionScales {
        &self.scales
    }

    pub fn kernel(&self) -> &KernelFamily {
        self.kernel
    }

    pub fn value(&self, a: &Element) -> Result<CombinedVector> {
        let total = self.ext.total();
        let ga = self.ext.project(a);
        let mut blocks = Vec::new();
        let mut out_of_domain = false;
        for (x, weight) in self.quotient.weights(&ga)? {
            if self.ext.quotient().distance(&x, &ga) as f64 > self.scales.s_g {
                return Err(Error::Precondition(format!(
                    "support of g at {} contains {} beyond S_G = {}",
                    self.ext.quotient().format_element(&ga),
                    self.ext.quotient().format_element(&x),
                    self.scales.s_g
                )));
            }
            let sx = self.ext.section(&x)?;
            let kernel_arg = self.ext.project_to_kernel(&total.multiply(&total.inverse(&sx), a))?;
            out_of_domain |= self.kernel.feature(&kernel_arg).is_none();
            blocks.push(Block { x, weight, kernel_arg });
        }
        Ok(CombinedVector { blocks, out_of_domain })
    }

    /// ⟨f(a), f(b)⟩, or `None` if a shared block is out of domain.
    pub fn inner_values(&self, fa: &CombinedVector, fb: &CombinedVector) -> Option<f64> {
        let mut sum = 0.0;
        for_common(fa, fb, |ba, bb| {
            let k = self.kernel.inner(&ba.kernel_arg, &bb.kernel_arg)?;
            sum += ba.weight * bb.weight * k;
            Some(())
        })?;
        Some(sum)
    }

    pub fn inner(&self, a: &Element, b: &Element) -> Result<Option<f64>> {
        Ok(self.inner_values(&self.value(a)?, &self.value(b)?))
    }

    /// ‖f(a)‖ = (Σ_x g(π(a))(x)²·‖h‖²)^{1/2}.
    pub fn norm(&self, a: &Element) -> Result<Option<f64>> {
        let fa = self.value(a)?;
        Ok(self.inner_values(&fa, &fa).map(f64::sqrt))
    }

    /// max over shared x of d_H(s_x(a), s_x(b)).
    pub fn drift(&self, fa: &CombinedVector, fb: &CombinedVector) -> Length {
        let total = self.ext.total();
        let mut worst = 0;
        for_common(fa, fb, |ba, bb| {
            worst = worst.max(total.distance(&ba.kernel_arg, &bb.kernel_arg));
            Some(())
        });
        worst
    }
}

fn for_common(fa: &CombinedVector, fb: &CombinedVector, mut f: impl FnMut(&Block, &Block) -> Option<()>) -> Option<()> {
    let (mut i, mut j) = (0, 0);
    while i < fa.blocks.len() && j < fb.blocks.len() {
        match fa.blocks[i].x.cmp(&fb.blocks[j].x) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                f(&fa.blocks[i], &fb.blocks[j])?;
                i += 1;
                j += 1;
            }
        }
    }
    Some(())
}

#[derive(Debug, Clone)]
pub struct CombinedOutcome {
    pub report: VerificationReport,
    /// max |‖f(a)‖ − 1| over in-domain a.
    pub max_norm_error: f64,
    pub max_drift: Length,
    pub ball_radius: Length,
    pub ball_size: usize,
}

/// Exhaustive pair check over a Γ-ball (pairs include a = b):
///
/// * `near`: d ≤ R ⇒ |1 − ⟨f(a), f(b)⟩| ≤ 1/(2n^{1+2p})
/// * `far`: d ≥ 2S_G + S_H ⇒ ‖f(a) − f(b)‖ ≥ 1
/// * `near_derived`: d ≤ R ⇒ ‖f(a) − f(b)‖ ≤ n^{−(1/2+p)}
/// * `far_derived`: d ≥ S̄ ⇒ ‖f(a) − f(b)‖ ≥ 1
/// * `drift`: d ≤ R ⇒ d_H(s_x(a), s_x(b)) ≤ 2S_G + R on the common support
/// * `unit_norm`: |‖f(a)‖ − 1| ≤ 1e−12
pub fn verify_combined<Q: QuotientFamily>(family: &CombinedFamily<'_, Q>, ball: &Ball) -> Result<CombinedOutcome> {
    let sc = *family.scales();
    let n = sc.n;
    let model = ball.model();
    let values: Vec<CombinedVector> = ball
        .elements()
        .par_iter()
        .map(|a| family.value(a))
        .collect::<Result<_>>()?;
    let names = ["near", "far", "near_derived", "far_derived", "drift", "unit_norm"];
    let fresh = || names.map(|c| ConditionRow::new(n, c));
    let near_tol = sc.near_tolerance();
    let derived_tol = (n as f64).powf(-(0.5 + sc.p));
    let drift_bound = sc.kernel_tolerance_radius();
    let m = values.len();
    let (rows, max_drift) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rows = fresh();
            let mut max_drift = 0;
            let fa = &values[i];
            match family.inner_values(fa, fa) {
                Some(s) => rows[5].record(1e-12 - (s.sqrt() - 1.0).abs()),
                None => rows[5].record_out_of_domain(),
            }
            for j in i..m {
                let d = model.distance(ball.element(i), ball.element(j)) as f64;
                let is_near = d <= sc.near;
                let is_far = d >= sc.far_radius();
                let is_far_derived = d >= sc.s_bar;
                if !(is_near || is_far || is_far_derived) {
                    continue;
                }
                let fb = &values[j];
                let inner = family
                    .inner_values(fa, fa)
                    .zip(family.inner_values(fb, fb))
                    .zip(family.inner_values(fa, fb));
                let Some(((aa, bb), ab)) = inner else {
                    for (k, flag) in [(0, is_near), (1, is_far), (2, is_near), (3, is_far_derived), (4, is_near)] {
                        if flag {
                            rows[k].record_out_of_domain();
                        }
                    }
                    continue;
                };
                let dist = (aa + bb - 2.0 * ab).max(0.0).sqrt();
                if is_near {
                    rows[0].record(near_tol - (1.0 - ab).abs());
                    rows[2].record(derived_tol - dist);
                    let dr = family.drift(fa, fb);
                    max_drift = max_drift.max(dr);
                    rows[4].record(drift_bound - dr as f64);
                }
                if is_far {
                    rows[1].record(dist - 1.0);
                }
                if is_far_derived {
                    rows[3].record(dist - 1.0);
                }
            }
            (rows, max_drift)
        })
        .reduce(
            || (fresh(), 0),
            |(mut a, da), (b, db)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
                (a, da.max(db))
            },
        );
    let max_norm_error = values
        .iter()
        .filter_map(|f| family.inner_values(f, f))
        .map(|s| (s.sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(CombinedOutcome {
        report: VerificationReport { rows: rows.to_vec() },
        max_norm_error,
        max_drift,
        ball_radius: ball.radius(),
        ball_size: ball.len(),
    })
}
