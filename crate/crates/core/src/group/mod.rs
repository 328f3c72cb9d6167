//! Concrete finitely generated groups with length functions.
//!
//! Every model implements [`Group`]: multiplication, inverse, identity, a
//! length function, and a canonical element encoding. Models are immutable
//! after construction (memo tables behind locks are invisible to callers)
//! and can be shared across threads through [`GroupModel`].
//!
//! Shipped models:
//!
//! | spec string | group | length |
//! |---|---|---|
//! | `free_abelian(d)` | ℤ^d | ℓ¹ word length over ±e_i |
//! | `free_group(r)` | F_r | reduced word length |
//! | `heisenberg` | discrete H₃ | word length over x^{±1}, y^{±1} (BFS) |
//! | `direct_sum_finite(1,m1,m2,..)` | ⊕ ℤ/m_i, F₀ trivial | min n with g ∈ ⊕_{i≤n} F_i |
//! | `lamplighter(m)` / `lamplighter(inf)` | {(f,0)} ⊂ (ℤ/m)≀ℤ or ℤ≀ℤ | induced from t^{±1}, e₀^{±1} |
//! | `extension(G,H,cocycle)` | Γ with 1→H→Γ→G→1 | see [`extension`] |

mod cayley;
mod direct_sum;
mod element;
pub mod extension;
mod free_abelian;
mod free_group;
mod heisenberg;
mod lamplighter;
mod product;
mod spec;

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

pub use cayley::cayley_ball;
pub(crate) use cayley::ball_elements;
pub use direct_sum::DirectSumFinite;
pub use element::Element;
pub use extension::{make_extension, ExtensionModel};
pub use free_abelian::FreeAbelian;
pub use free_group::FreeGroup;
pub use heisenberg::Heisenberg;
pub use lamplighter::{LampOrder, Lamplighter};
pub use product::ProductGroup;
pub use spec::{Cocycle, GroupSpec};

use crate::error::{Error, Result};

/// Integer length values; every shipped length function is integer valued.
pub type Length = u32;

/// A group together with a length function.
pub trait Group: Send + Sync + fmt::Debug {
    fn identity(&self) -> Element;

    fn multiply(&self, x: &Element, y: &Element) -> Element;

    fn inverse(&self, x: &Element) -> Element;

    fn length(&self, x: &Element) -> Length;

    /// Symmetric generating set when the length is the word length over it.
    fn generators(&self) -> Option<Vec<Element>> {
        None
    }

    /// Closed-form ball enumeration for models whose length is not a word
    /// length. `None` means "use Cayley-graph BFS over `generators`".
    fn enumerate_ball(&self, _radius: Length, _budget: usize) -> Option<Result<Vec<Element>>> {
        None
    }

    /// Whether `x` is a well-formed normal form for this model.
    fn is_valid(&self, x: &Element) -> bool;

    fn parse_element(&self, s: &str) -> Result<Element>;

    fn format_element(&self, x: &Element) -> String;

    /// Random element whose size grows with `scale`; used by sampled property checks.
    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element;
}

/// A shared, immutable group model tagged with the spec it was built from.
#[derive(Clone)]
pub struct GroupModel {
    spec: GroupSpec,
    inner: Arc<dyn Group>,
}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupModel").field("spec", &self.spec.to_string()).finish()
    }
}

impl GroupModel {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> Element {
        self.inner.identity()
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        self.inner.multiply(x, y)
    }

    pub fn inverse(&self, x: &Element) -> Element {
        self.inner.inverse(x)
    }

    pub fn length(&self, x: &Element) -> Length {
        self.inner.length(x)
    }

    /// Left-invariant distance d(x, y) = l(x⁻¹y).
    pub fn distance(&self, x: &Element, y: &Element) -> Length {
        self.inner.length(&self.inner.multiply(&self.inner.inverse(x), y))
    }

    pub fn generators(&self) -> Option<Vec<Element>> {
        self.inner.generators()
    }

    pub fn is_word_metric(&self) -> bool {
        self.inner.generators().is_some()
    }

    pub fn is_valid(&self, x: &Element) -> bool {
        self.inner.is_valid(x)
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let x = self.inner.parse_element(s)?;
        if !self.inner.is_valid(&x) {
            return Err(Error::parse("element", s, "not a valid normal form for this model"));
        }
        Ok(x)
    }

    pub fn format_element(&self, x: &Element) -> String {
        self.inner.format_element(x)
    }

    pub fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        self.inner.sample(rng, scale)
    }

    pub(crate) fn raw(&self) -> &dyn Group {
        self.inner.as_ref()
    }
}

/// Builds the model described by `spec`, validating its parameters.
pub fn make_group(spec: &GroupSpec) -> Result<GroupModel> {
    spec.validate()?;
    let inner: Arc<dyn Group> = match spec {
        GroupSpec::FreeAbelian { rank } => Arc::new(FreeAbelian::new(*rank)),
        GroupSpec::FreeGroup { rank } => Arc::new(FreeGroup::new(*rank)),
        GroupSpec::Heisenberg => Arc::new(Heisenberg::new()),
        GroupSpec::DirectSumFinite { orders } => Arc::new(DirectSumFinite::new(orders.clone())),
        GroupSpec::Lamplighter { lamp_order } => Arc::new(Lamplighter::new(*lamp_order)),
        GroupSpec::Extension {
            quotient,
            kernel,
            cocycle,
        } => match cocycle {
            Cocycle::Trivial => {
                let g = make_group(quotient)?;
                let h = make_group(kernel)?;
                Arc::new(ProductGroup::new(g, h))
            }
            Cocycle::Heisenberg => Arc::new(Heisenberg::new()),
        },
    };
    Ok(GroupModel {
        spec: spec.clone(),
        inner,
    })
}
