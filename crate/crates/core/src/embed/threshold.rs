use super::{CompressionProfile, ScaleParams};
use crate::error::{Error, Result};

/// Distance thresholds beyond which ‖ξ_x − ξ_y‖ ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// A_n = [C√2·a·n^b·(C̃n^r + D̃) + CD]^{1/(δ−p)}.
    pub a_n: f64,
    /// [C(√(ln2 / −ln(1−ε_n²/2))·ρ₊(R_n) + D)]^{1/(δ−p)}: where e^{−tρ₋²} first drops to ½.
    pub sharp: f64,
    /// n^{(r+b+p)/(δ−p)}.
    pub simplified: f64,
    /// Whether A_n ≤ n^{(r+b+p)/(δ−p)} at this n.
    pub within_simplified: bool,
}

/// Thresholds for an embedding with ρ₋(d) = d^{δ−p}/C − D and ρ₊ from `profile`.
pub fn corollary_threshold(profile: &CompressionProfile, params: &ScaleParams) -> Result<Threshold> {
    let e = profile.delta - params.p;
    if e <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "δ − p = {e} must be positive (δ={}, p={})",
            profile.delta, params.p
        )));
    }
    let n = params.n as f64;
    let CompressionProfile {
        c, d, c_tilde, d_tilde, ..
    } = *profile;
    let a_n = (c * 2f64.sqrt() * params.a * n.powf(params.b) * (c_tilde * n.powf(params.r) + d_tilde) + c * d)
        .powf(1.0 / e);
    let eps = params.eps_n();
    let factor = (2f64.ln() / -(-eps * eps / 2.0).ln_1p()).sqrt();
    let sharp = (c * (factor * profile.rho_plus(params.r_n()) + d)).powf(1.0 / e);
    let simplified = n.powf((params.r + params.b + params.p) / e);
    Ok(Threshold {
        a_n,
        sharp,
        simplified,
        within_simplified: a_n <= simplified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometric_example() {
        let params = ScaleParams::new(16, 0.0, 0.5, 2f64.sqrt(), 0.5).unwrap();
        let th = corollary_threshold(&CompressionProfile::isometric(), &params).unwrap();
        assert!((th.a_n - 32.0).abs() < 1e-12);
        assert!(th.sharp <= th.a_n);
        assert!((th.simplified - 16.0).abs() < 1e-12);
        assert!(!th.within_simplified);
    }

    #[test]
    fn simplified_exponent() {
        let prof = CompressionProfile::new(0.8, 1.0, 0.0, 1.0, 0.0).unwrap();
        let params = ScaleParams::new(100, 0.1, 0.5, 1.0, 0.6).unwrap();
        let th = corollary_threshold(&prof, &params).unwrap();
        let expected = 100f64.powf((0.5 + 0.6 + 0.1) / 0.7);
        assert!((th.simplified / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_not_above_p_rejected() {
        let prof = CompressionProfile::new(0.5, 1.0, 0.0, 1.0, 0.0).unwrap();
        let params = ScaleParams::new(4, 0.5, 0.5, 1.0, 0.5).unwrap();
        assert_eq!(corollary_threshold(&prof, &params).unwrap_err().category(), "invalid-parameter");
    }

    #[test]
    fn large_n_falls_within_simplified() {
        // with C = C̃ = 1, D = D̃ = 0 the simplified bound wins once a·√2 < n^p
        let prof = CompressionProfile::isometric();
        let params = ScaleParams::new(1 << 20, 0.5, 0.5, 1.0, 0.5).unwrap();
        assert!(corollary_threshold(&prof, &params).unwrap().within_simplified);
    }
}
