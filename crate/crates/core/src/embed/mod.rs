//! Unit-vector families from embeddings, and the embedding rebuilt from families.
//!
//! Given F: B → ℝ^m on a ball, the vectors ξ_x = e^{−t‖F(x)‖²}·Exp(√(2t)F(x))
//! satisfy ⟨ξ_x, ξ_y⟩ = e^{−t‖F(x)−F(y)‖²}. Only that closed form is used:
//! a [`ScaleFamily`] is its Gram matrix, optionally factored into finite
//! coordinates by [`realize_vectors`].
//!
//! With t = −ln(1−ε²/2)/ρ₊(R)², pairs at distance ≤ R end up within ε of each
//! other, and pairs whose F-images are far apart end up at distance ≥ 1.
//! Conversely, stacking families η_1, …, η_N gives
//! F(x) = ½ ⊕ (η_n(x) − η_n(x₀)) ([`stacked_embedding`]) whose lower control
//! function is the step function [`RhoStep`].

mod profile;
mod rho;
mod schoenberg;
mod stacked;
mod threshold;
mod verify;

pub use profile::{schoenberg_t, CompressionProfile, ScaleParams};
pub use rho::{RhoStep, RhoValue};
pub use schoenberg::{realize_gram, realize_vectors, schoenberg_family, schoenberg_family_for, ScaleFamily};
pub use stacked::{stacked_embedding, tail_constant, StackedEmbedding};
pub use threshold::{corollary_threshold, Threshold};
pub use verify::verify_family;

/// Eigenvalues below this are treated as genuine indefiniteness.
pub const EIGEN_FLOOR: f64 = -1e-10;
