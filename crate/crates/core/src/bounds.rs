//! Closed-form compression lower bounds and empirical exponent estimates.
//!
//! Formula identifiers (the `formula` field of [`BoundReport`]) are stable:
//! `limit`, `limit_quasi`, `direct_sum`, `extension_poly`, `extension_hyp`,
//! `wreath`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fit::fit_line;

/// A positive-index sequence i ↦ value, i ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Seq {
    /// coef · i^exp
    Monomial { coef: f64, exp: f64 },
    /// values[i − 1]
    Table(Vec<f64>),
}

impl Seq {
    pub fn constant(c: f64) -> Self {
        Seq::Monomial { coef: c, exp: 0.0 }
    }

    pub fn at(&self, i: u64) -> Option<f64> {
        match self {
            Seq::Monomial { coef, exp } => Some(coef * (i as f64).powf(*exp)),
            Seq::Table(v) => v.get((i as usize).checked_sub(1)?).copied(),
        }
    }

    /// Polynomial degree in i, `Some(-inf)` for the zero sequence, `None` for tables.
    fn degree(&self) -> Option<f64> {
        match self {
            Seq::Monomial { coef, .. } if *coef == 0.0 => Some(f64::NEG_INFINITY),
            Seq::Monomial { exp, .. } => Some(*exp),
            Seq::Table(_) => None,
        }
    }

    fn check(&self, name: &str, positive: bool) -> Result<()> {
        let bad = |v: f64| !v.is_finite() || if positive { v <= 0.0 } else { v < 0.0 };
        let offending = match self {
            Seq::Monomial { coef, exp } => (bad(*coef) || !exp.is_finite()).then_some(*coef),
            Seq::Table(v) if v.is_empty() => Some(f64::NAN),
            Seq::Table(v) => v.iter().copied().find(|&x| bad(x)),
        };
        match offending {
            Some(v) => Err(Error::InvalidParameter(format!(
                "sequence {name} must be {} (found {v})",
                if positive { "positive" } else { "nonnegative" }
            ))),
            None => Ok(()),
        }
    }
}

/// g(n) = max(1, ⌈coef · n^exp⌉).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexRule {
    pub coef: f64,
    pub exp: f64,
}

impl IndexRule {
    pub fn constant(i: u64) -> Self {
        IndexRule { coef: i as f64, exp: 0.0 }
    }

    pub fn at(&self, n: u64) -> u64 {
        (self.coef * (n as f64).powf(self.exp)).ceil().max(1.0) as u64
    }
}

/// A directed system G_1 ⊂ G_2 ⊂ … with uniform embeddings of G_i satisfying
/// (1/C_i)·r^δ − D_i ≤ ‖ΔF‖ ≤ C̃_i·r + D̃_i.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSystem {
    pub delta: f64,
    pub c: Seq,
    pub c_tilde: Seq,
    pub d: Seq,
    pub d_tilde: Seq,
    pub g: IndexRule,
}

impl LimitSystem {
    pub fn new(delta: f64, c: Seq, c_tilde: Seq, d: Seq, d_tilde: Seq, g: IndexRule) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1]")));
        }
        c.check("C", true)?;
        c_tilde.check("C̃", true)?;
        d.check("D", false)?;
        d_tilde.check("D̃", false)?;
        if !(g.coef > 0.0 && g.exp >= 0.0 && g.coef.is_finite() && g.exp.is_finite()) {
            return Err(Error::InvalidParameter("index rule must be nondecreasing with positive coefficient".into()));
        }
        Ok(LimitSystem { delta, c, c_tilde, d, d_tilde, g })
    }

    /// Constant sequences and g ≡ 1.
    pub fn constant(delta: f64, c: f64, c_tilde: f64, d: f64, d_tilde: f64) -> Result<Self> {
        Self::new(
            delta,
            Seq::constant(c),
            Seq::constant(c_tilde),
            Seq::constant(d),
            Seq::constant(d_tilde),
            IndexRule::constant(1),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// x ∈ G_{g(n)} whenever l(x) ≤ √n
    #[default]
    Standard,
    /// x ∈ G_{g(n)} whenever l(x) ≤ ln n
    QuasiGeodesic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub formula: &'static str,
    /// The reported bound, in [0, 1].
    pub value: f64,
    /// Closed-form limit when one is derivable.
    pub symbolic: Option<f64>,
    pub trace: String,
    pub caveats: Vec<String>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "formula,value,symbolic,trace,caveats";

    pub fn to_csv_row(&self) -> String {
        let sym = self.symbolic.map(crate::report::format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            self.formula,
            crate::report::format_float(self.value),
            sym,
            csv_quote(&self.trace),
            csv_quote(&self.caveats.join("; "))
        )
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formula: {}", self.formula)?;
        writeln!(f, "value: {}", self.value)?;
        match self.symbolic {
            Some(s) => writeln!(f, "symbolic limit: {s}")?,
            None => writeln!(f, "symbolic limit: unavailable")?,
        }
        writeln!(f, "trace: {}", self.trace)?;
        for c in &self.caveats {
            writeln!(f, "caveat: {c}")?;
        }
        Ok(())
    }
}

/// (δ/2)·ln(n−1) / ln(C√(2 ln2 · n)(C̃X + D̃) + CD) at one n, with X = √n or ln n
/// and every sequence read at g(n); `None` when the denominator is not positive.
pub fn limit_quotient(sys: &LimitSystem, n: u64, variant: Variant) -> Result<Option<f64>> {
    let i = sys.g.at(n);
    let get = |s: &Seq, name: &str| {
        s.at(i)
            .ok_or_else(|| Error::Resource(format!("table for {name} ends before index {i} (n = {n})")))
    };
    let (c, ct, d, dt) = (get(&sys.c, "C")?, get(&sys.c_tilde, "C̃")?, get(&sys.d, "D")?, get(&sys.d_tilde, "D̃")?);
    let nf = n as f64;
    let x = match variant {
        Variant::Standard => nf.sqrt(),
        Variant::QuasiGeodesic => nf.ln(),
    };
    let den = (c * (2.0 * std::f64::consts::LN_2 * nf).sqrt() * (ct * x + dt) + c * d).ln();
    if !(den > 0.0) {
        return Ok(None);
    }
    Ok(Some(0.5 * sys.delta * (nf - 1.0).ln() / den))
}

/// Degree in n of the denominator's argument, when every sequence is a monomial.
fn denominator_degree(sys: &LimitSystem, variant: Variant) -> Option<f64> {
    let h = sys.g.exp;
    let dc = sys.c.degree()? * h;
    let dct = sys.c_tilde.degree()? * h;
    let dd = sys.d.degree()? * h;
    let ddt = sys.d_tilde.degree()? * h;
    let x = match variant {
        Variant::Standard => 0.5,
        Variant::QuasiGeodesic => 0.0,
    };
    Some((dc + 0.5 + (dct + x).max(ddt)).max(dc + dd))
}

/// Running maximum of [`limit_quotient`] over n ∈ [2, n_max], with the closed-form
/// limit (δ/2)/deg when the sequences are monomials.
pub fn limit_bound(sys: &LimitSystem, n_max: u64, variant: Variant) -> Result<BoundReport> {
    if n_max < 10 {
        return Err(Error::InvalidParameter(format!("nMax = {n_max} must be at least 10")));
    }
    let mut best: Option<(u64, f64)> = None;
    let mut skipped = 0u64;
    for n in 2..=n_max {
        match limit_quotient(sys, n, variant)? {
            Some(v) if best.is_none_or(|(_, b)| v > b) => best = Some((n, v)),
            Some(_) => {}
            None => skipped += 1,
        }
    }
    let formula = match variant {
        Variant::Standard => "limit",
        Variant::QuasiGeodesic => "limit_quasi",
    };
    let mut caveats = vec![format!("limsup approximated by the running maximum over n in [2, {n_max}]")];
    if skipped > 0 {
        caveats.push(format!("{skipped} values of n with nonpositive denominator skipped"));
    }
    let symbolic = match denominator_degree(sys, variant) {
        Some(deg) if deg > 0.0 => Some(0.5 * sys.delta / deg),
        Some(_) => {
            caveats.push("denominator does not grow polynomially; no closed-form limit".into());
            None
        }
        None => {
            caveats.push("tabulated sequences; no closed-form limit".into());
            None
        }
    };
    let (arg, raw) = best.unwrap_or((0, 0.0));
    if raw > 1.0 {
        caveats.push(format!("numeric proxy {raw} exceeds 1 and is capped"));
    }
    Ok(BoundReport {
        formula,
        value: raw.clamp(0.0, 1.0),
        symbolic,
        trace: format!("n in [2, {n_max}], maximum at n = {arg}, delta = {}", sys.delta),
        caveats,
    })
}

/// The limit bound for an infinite direct sum of finite groups, read with constant
/// embedding constants (δ = 1, C = C̃ = 1, D = D̃ = 0).
pub fn direct_sum_bound(n_max: u64) -> Result<BoundReport> {
    let sys = LimitSystem::constant(1.0, 1.0, 1.0, 0.0, 0.0)?;
    let mut rep = limit_bound(&sys, n_max, Variant::Standard)?;
    rep.formula = "direct_sum";
    rep.caveats.push(
        "with bounded constants the formula gives at most delta/2 = 0.5, while compression 1 is claimed for these groups; the formula is evaluated as written".into(),
    );
    Ok(rep)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1]")));
    }
    Ok(())
}

fn check_p(delta: f64, p: f64) -> Result<()> {
    check_delta(delta)?;
    if !(p >= 0.0 && p < delta) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, δ)")));
    }
    Ok(())
}

/// [2((2+8p)/(δ−p) + p)]⁻¹.
pub fn extension_bound_poly_at(delta: f64, p: f64) -> Result<f64> {
    check_p(delta, p)?;
    Ok(1.0 / (2.0 * ((2.0 + 8.0 * p) / (delta - p) + p)))
}

/// [2((5/2+9p)/(δ−p) + p)]⁻¹.
pub fn extension_bound_hyp_at(delta: f64, p: f64) -> Result<f64> {
    check_p(delta, p)?;
    Ok(1.0 / (2.0 * ((2.5 + 9.0 * p) / (delta - p) + p)))
}

/// Extension with polynomial-growth quotient: δ/4 in the limit p → 0.
pub fn extension_bound_poly(delta: f64) -> Result<BoundReport> {
    let value = extension_bound_poly_at(delta, 0.0)?;
    Ok(BoundReport {
        formula: "extension_poly",
        value,
        symbolic: Some(delta / 4.0),
        trace: format!("p -> 0, delta = {delta}"),
        caveats: Vec::new(),
    })
}

/// Extension with free (hyperbolic) quotient: δ/5 in the limit p → 0.
pub fn extension_bound_hyp(delta: f64) -> Result<BoundReport> {
    let value = extension_bound_hyp_at(delta, 0.0)?;
    Ok(BoundReport {
        formula: "extension_hyp",
        value,
        symbolic: Some(delta / 5.0),
        trace: format!("p -> 0, delta = {delta}"),
        caveats: Vec::new(),
    })
}

/// 2α/(d+4) for the restricted wreath product over a base of growth degree d.
pub fn wreath_bound(alpha: f64, d: u32) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("α = {alpha} outside (0, 1]")));
    }
    let value = 2.0 * alpha / (d as f64 + 4.0);
    Ok(BoundReport {
        formula: "wreath",
        value,
        symbolic: Some(value),
        trace: format!("alpha = {alpha}, d = {d}"),
        caveats: Vec::new(),
    })
}

/// Slope of the lower envelope of ln‖ΔF‖ against ln d.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionEstimate {
    pub exponent: f64,
    pub intercept: f64,
    pub residual: f64,
    /// (ln d, ln‖ΔF‖) of each dyadic bin's minimum, by increasing d.
    pub envelope: Vec<(f64, f64)>,
    pub pairs_used: usize,
    /// Bins whose minimum is 0, left out of the fit.
    pub zero_bins: usize,
}

pub const MIN_PAIRS: usize = 50;

/// Fits the dyadic-bin minima of (d, ‖ΔF‖) over pairs with d ≥ max(d_min, 1).
pub fn empirical_compression(pairs: &[(f64, f64)], d_min: f64) -> Result<CompressionEstimate> {
    let lo = d_min.max(1.0);
    let used: Vec<(f64, f64)> = pairs.iter().copied().filter(|&(d, _)| d >= lo && d.is_finite()).collect();
    if used.len() < MIN_PAIRS {
        return Err(Error::InvalidParameter(format!(
            "{} pairs with d >= {lo}, need at least {MIN_PAIRS}",
            used.len()
        )));
    }
    if used.iter().all(|&(_, v)| v == 0.0) {
        return Err(Error::Precondition("all distances in the image are zero".into()));
    }
    let mut bins: std::collections::BTreeMap<i32, (f64, f64)> = std::collections::BTreeMap::new();
    for (d, v) in used.iter().copied() {
        let key = d.log2().floor() as i32;
        let e = bins.entry(key).or_insert((d, v));
        if v < e.1 || (v == e.1 && d < e.0) {
            *e = (d, v);
        }
    }
    let zero_bins = bins.values().filter(|&&(_, v)| v <= 0.0).count();
    let envelope: Vec<(f64, f64)> = bins
        .values()
        .filter(|&&(_, v)| v > 0.0)
        .map(|&(d, v)| (d.ln(), v.ln()))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = envelope.iter().copied().unzip();
    let fit = fit_line(&xs, &ys)
        .ok_or_else(|| Error::Precondition(format!("{} usable dyadic bins, need at least 2", envelope.len())))?;
    Ok(CompressionEstimate {
        exponent: fit.slope,
        intercept: fit.intercept,
        residual: fit.residual,
        envelope,
        pairs_used: used.len(),
        zero_bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_forms() {
        assert!((extension_bound_poly(1.0).unwrap().value - 0.25).abs() < 1e-12);
        assert!((extension_bound_poly(0.5).unwrap().value - 0.125).abs() < 1e-12);
        assert!((extension_bound_hyp(1.0).unwrap().value - 0.2).abs() < 1e-12);
        assert!((extension_bound_hyp(0.5).unwrap().value - 0.1).abs() < 1e-12);
        assert!((wreath_bound(1.0, 1).unwrap().value - 0.4).abs() < 1e-12);
        assert!((wreath_bound(1.0, 0).unwrap().value - 0.5).abs() < 1e-12);
        assert!(wreath_bound(1.0, 1).unwrap().value < 0.75);
        assert!(extension_bound_poly(0.0).is_err());
        assert!(extension_bound_hyp(-1.0).is_err());
    }

    #[test]
    fn finite_p_values() {
        let poly = extension_bound_poly_at(1.0, 0.1).unwrap();
        assert!((poly - 1.0 / (2.0 * (2.8 / 0.9 + 0.1))).abs() < 1e-15);
        assert!((poly - 0.15570934256055366).abs() < 1e-15);
        let hyp = extension_bound_hyp_at(1.0, 0.1).unwrap();
        assert!((hyp - 0.12893982808022922).abs() < 1e-15);
        assert!(extension_bound_poly_at(0.5, 0.5).is_err());
    }

    #[test]
    fn constant_system_standard() {
        let sys = LimitSystem::constant(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let rep = limit_bound(&sys, 1_000_000, Variant::Standard).unwrap();
        assert_eq!(rep.symbolic, Some(0.5));
        assert!((rep.value - 0.49416).abs() < 1e-5, "{}", rep.value);
        assert!(rep.caveats[0].contains("running maximum"));
    }

    #[test]
    fn quasi_symbolic_is_one() {
        let sys = LimitSystem::constant(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let rep = limit_bound(&sys, 10_000, Variant::QuasiGeodesic).unwrap();
        assert_eq!(rep.symbolic, Some(1.0));
        assert_eq!(rep.formula, "limit_quasi");
    }

    #[test]
    fn polynomial_sequences_shift_the_degree() {
        // C_i = i, g(n) = n: denominator ~ n^{2}
        let sys = LimitSystem::new(
            1.0,
            Seq::Monomial { coef: 1.0, exp: 1.0 },
            Seq::constant(1.0),
            Seq::constant(0.0),
            Seq::constant(0.0),
            IndexRule { coef: 1.0, exp: 1.0 },
        )
        .unwrap();
        assert_eq!(limit_bound(&sys, 100, Variant::Standard).unwrap().symbolic, Some(0.25));
    }

    #[test]
    fn tables_and_rejections() {
        let sys = LimitSystem::new(
            1.0,
            Seq::Table(vec![1.0; 5]),
            Seq::constant(1.0),
            Seq::constant(0.0),
            Seq::constant(0.0),
            IndexRule { coef: 1.0, exp: 1.0 },
        )
        .unwrap();
        assert_eq!(limit_bound(&sys, 100, Variant::Standard).unwrap_err().category(), "resource");
        let bad = LimitSystem::constant(1.0, 0.0, 1.0, 0.0, 0.0);
        assert_eq!(bad.unwrap_err().category(), "invalid-parameter");
        assert!(LimitSystem::new(
            1.0,
            Seq::Table(vec![1.0, -2.0]),
            Seq::constant(1.0),
            Seq::constant(0.0),
            Seq::constant(0.0),
            IndexRule::constant(1)
        )
        .is_err());
    }

    #[test]
    fn direct_sum_carries_caveat() {
        let rep = direct_sum_bound(1000).unwrap();
        assert!(rep.value <= 0.5);
        assert!(rep.caveats.iter().any(|c| c.contains("compression 1")));
    }

    #[test]
    fn delta_to_zero() {
        let mut last = f64::INFINITY;
        for delta in [1.0, 0.1, 0.01, 0.001] {
            let sys = LimitSystem::constant(delta, 1.0, 1.0, 0.0, 0.0).unwrap();
            let v = limit_bound(&sys, 1000, Variant::Standard).unwrap().value;
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn csv_row_quotes_caveats() {
        let rep = direct_sum_bound(100).unwrap();
        let row = rep.to_csv_row();
        assert!(row.starts_with("direct_sum,"));
        assert_eq!(BoundReport::CSV_HEADER.split(',').count(), 5);
    }

    #[test]
    fn envelope_fits() {
        let pairs: Vec<(f64, f64)> = (1..=4000).map(|d| (d as f64, (d as f64).sqrt())).collect();
        let est = empirical_compression(&pairs, 1.0).unwrap();
        assert!((est.exponent - 0.5).abs() < 1e-9);
        let lin: Vec<(f64, f64)> = (1..=100).map(|d| (d as f64, 3.0 * d as f64)).collect();
        assert!((empirical_compression(&lin, 1.0).unwrap().exponent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn envelope_rejections() {
        let few: Vec<(f64, f64)> = (1..=49).map(|d| (d as f64, 1.0)).collect();
        assert_eq!(empirical_compression(&few, 1.0).unwrap_err().category(), "invalid-parameter");
        let flat: Vec<(f64, f64)> = (1..=100).map(|d| (d as f64, 0.0)).collect();
        assert_eq!(empirical_compression(&flat, 1.0).unwrap_err().category(), "precondition");
        let one_bin: Vec<(f64, f64)> = (0..60).map(|_| (3.0, 1.0)).collect();
        assert!(empirical_compression(&one_bin, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn proxy_nondecreasing_in_n_max(a in 10u64..3000, b in 10u64..3000, c in 0.5f64..4.0, dt in 0.0f64..3.0) {
            let sys = LimitSystem::constant(1.0, c, 1.0, 0.0, dt).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let vlo = limit_bound(&sys, lo, Variant::Standard).unwrap().value;
            let vhi = limit_bound(&sys, hi, Variant::Standard).unwrap().value;
            prop_assert!(vlo <= vhi);
        }

        #[test]
        fn wreath_never_exceeds_alpha(alpha in 1e-6f64..=1.0, d in 0u32..50) {
            let v = wreath_bound(alpha, d).unwrap().value;
            prop_assert!(v <= alpha && v > 0.0);
        }

        #[test]
        fn bound_in_unit_interval(delta in 1e-3f64..=1.0, c in 0.1f64..5.0, ct in 0.1f64..5.0, d in 0.0f64..5.0) {
            let sys = LimitSystem::constant(delta, c, ct, d, 0.0).unwrap();
            let v = limit_bound(&sys, 200, Variant::QuasiGeodesic).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn finite_p_decreasing_and_convergent() {
        for delta in [0.25, 0.5, 0.75, 1.0] {
            let grid: Vec<f64> = (0..=40).map(|k| k as f64 * delta / 200.0).collect();
            for f in [extension_bound_poly_at, extension_bound_hyp_at] {
                let vals: Vec<f64> = grid.iter().map(|&p| f(delta, p).unwrap()).collect();
                assert!(vals.windows(2).all(|w| w[1] < w[0]));
            }
            assert!((extension_bound_poly_at(delta, 1e-9).unwrap() - delta / 4.0).abs() < 1e-7);
            assert!((extension_bound_hyp_at(delta, 1e-9).unwrap() - delta / 5.0).abs() < 1e-7);
        }
    }
}
