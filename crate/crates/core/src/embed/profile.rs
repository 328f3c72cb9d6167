use crate::error::{Error, Result};

/// Control functions ρ₋(r) = r^δ/C − D and ρ₊(r) = C̃r + D̃, with ρ₋ ≤ ρ₊ at
/// r = 0 and on [1, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionProfile {
    pub delta: f64,
    pub c: f64,
    pub d: f64,
    pub c_tilde: f64,
    pub d_tilde: f64,
}

impl CompressionProfile {
    pub fn new(delta: f64, c: f64, d: f64, c_tilde: f64, d_tilde: f64) -> Result<Self> {
        let ok = delta > 0.0 && delta <= 1.0 && c > 0.0 && c_tilde > 0.0 && d >= 0.0 && d_tilde >= 0.0;
        if !ok || ![delta, c, d, c_tilde, d_tilde].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "profile needs δ ∈ (0,1], C, C̃ > 0, D, D̃ ≥ 0; got δ={delta}, C={c}, D={d}, C̃={c_tilde}, D̃={d_tilde}"
            )));
        }
        let prof = CompressionProfile {
            delta,
            c,
            d,
            c_tilde,
            d_tilde,
        };
        // ρ₊ − ρ₋ is convex in r; check it at its minimizer over r ≥ 1
        // (distances in a group with integer lengths are 0 or at least 1)
        let r_star = if delta < 1.0 {
            (delta / (c * c_tilde)).powf(1.0 / (1.0 - delta)).max(1.0)
        } else if c_tilde * c >= 1.0 {
            1.0
        } else {
            f64::NAN
        };
        if !(prof.rho_minus(r_star) <= prof.rho_plus(r_star) + crate::TIE_TOLERANCE) {
            return Err(Error::InvalidParameter(format!(
                "ρ₋ exceeds ρ₊ near r = {r_star} for δ={delta}, C={c}, D={d}, C̃={c_tilde}, D̃={d_tilde}"
            )));
        }
        Ok(prof)
    }

    /// The isometric profile δ = C = C̃ = 1, D = D̃ = 0.
    pub fn isometric() -> Self {
        CompressionProfile {
            delta: 1.0,
            c: 1.0,
            d: 0.0,
            c_tilde: 1.0,
            d_tilde: 0.0,
        }
    }

    pub fn rho_minus(&self, r: f64) -> f64 {
        r.powf(self.delta) / self.c - self.d
    }

    pub fn rho_plus(&self, r: f64) -> f64 {
        self.c_tilde * r + self.d_tilde
    }
}

/// The kernel parameter t = −ln(1−ε²/2)/ρ₊(R)².
pub fn schoenberg_t(eps: f64, rho_plus_r: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 2f64.sqrt()) {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, √2)")));
    }
    if !(rho_plus_r > 0.0 && rho_plus_r.is_finite()) {
        return Err(Error::InvalidParameter(format!("ρ₊(R) = {rho_plus_r} must be positive")));
    }
    Ok(-(-eps * eps / 2.0).ln_1p() / (rho_plus_r * rho_plus_r))
}

/// Per-scale parameters: R_n = n^r, ε_n = 1/(a n^b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub n: u64,
    pub p: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl ScaleParams {
    pub fn new(n: u64, p: f64, r: f64, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        // p = 0 stands for the p → 0 limit
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1)")));
        }
        if !(r > 0.0 && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(format!("r, a, b must be positive (r={r}, a={a}, b={b})")));
        }
        let s = ScaleParams { n, p, r, a, b };
        let eps = s.eps_n();
        if !(eps > 0.0 && eps < 2f64.sqrt()) {
            return Err(Error::InvalidParameter(format!("ε_n = {eps} outside (0, √2)")));
        }
        Ok(s)
    }

    pub fn r_n(&self) -> f64 {
        (self.n as f64).powf(self.r)
    }

    pub fn eps_n(&self) -> f64 {
        1.0 / (self.a * (self.n as f64).powf(self.b))
    }

    pub fn t(&self, profile: &CompressionProfile) -> Result<f64> {
        schoenberg_t(self.eps_n(), profile.rho_plus(self.r_n()))
    }
}
