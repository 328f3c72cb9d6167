//! Group extensions 1 → H → Γ → G → 1 with induced lengths.
//!
//! The kernel H carries the length induced from Γ, and the quotient G the
//! word length relative to π(S), which for the shipped cocycles coincides
//! with the induced quotient length `inf{ l_Γ(y) : π(y) = π(x) }`.
//!
//! The section σ: G → Γ is the minimal-length lift, ties broken by the
//! canonical element order. For the trivial cocycle this is `g ↦ (g, 1)`;
//! otherwise lifts are found by scanning a Γ-ball of radius `l_G(g)` in
//! (length, canonical order) and keeping the first element over each `g`.

use std::collections::HashMap;
use std::sync::RwLock;

use super::{ball_elements, make_group, Cocycle, Element, GroupModel, GroupSpec, Length, ProductGroup};
use crate::error::{Error, Result};

#[derive(Debug, Default)]
struct SectionTable {
    radius: Option<Length>,
    lifts: HashMap<Element, Element>,
}

/// An extension with projection π, kernel inclusion, and a section σ.
#[derive(Debug)]
pub struct ExtensionModel {
    total: GroupModel,
    quotient: GroupModel,
    kernel: GroupModel,
    cocycle: Cocycle,
    sections: RwLock<SectionTable>,
    budget_bytes: usize,
}

/// Builds the extension model for an `extension(G, H, cocycle)` spec.
pub fn make_extension(spec: &GroupSpec) -> Result<ExtensionModel> {
    let GroupSpec::Extension {
        quotient,
        kernel,
        cocycle,
    } = spec
    else {
        return Err(Error::InvalidParameter(format!("{spec} is not an extension spec")));
    };
    Ok(ExtensionModel {
        total: make_group(spec)?,
        quotient: make_group(quotient)?,
        kernel: make_group(kernel)?,
        cocycle: *cocycle,
        sections: RwLock::new(SectionTable::default()),
        budget_bytes: crate::balls::DEFAULT_BUDGET_BYTES,
    })
}

impl ExtensionModel {
    /// The total group Γ.
    pub fn total(&self) -> &GroupModel {
        &self.total
    }

    /// The quotient G with the word length relative to π(S).
    pub fn quotient(&self) -> &GroupModel {
        &self.quotient
    }

    /// The kernel H as an abstract group (its own coordinates).
    pub fn kernel(&self) -> &GroupModel {
        &self.kernel
    }

    pub fn cocycle(&self) -> Cocycle {
        self.cocycle
    }

    /// π: Γ → G.
    pub fn project(&self, x: &Element) -> Element {
        match self.cocycle {
            Cocycle::Trivial => ProductGroup::split(x).0,
            Cocycle::Heisenberg => Element::new(&x.values()[..2]),
        }
    }

    /// The inclusion H → Γ.
    pub fn include_kernel(&self, h: &Element) -> Element {
        match self.cocycle {
            Cocycle::Trivial => ProductGroup::pair(&self.quotient.identity(), h),
            Cocycle::Heisenberg => Element::new(&[0, 0, h.values()[0]]),
        }
    }

    /// Kernel coordinates of an element of Γ that lies in H.
    pub fn kernel_coordinates(&self, x: &Element) -> Result<Element> {
        if !self.in_kernel(x) {
            return Err(Error::Precondition(format!(
                "{} is not in the kernel",
                self.total.format_element(x)
            )));
        }
        Ok(match self.cocycle {
            Cocycle::Trivial => ProductGroup::split(x).1,
            Cocycle::Heisenberg => Element::new(&[x.values()[2]]),
        })
    }

    pub fn in_kernel(&self, x: &Element) -> bool {
        self.project(x) == self.quotient.identity()
    }

    /// l_G(π(x)) for x ∈ Γ.
    pub fn induced_quotient_length(&self, x: &Element) -> Length {
        self.quotient.length(&self.project(x))
    }

    /// Length on H induced from Γ, for an element of Γ lying in H.
    pub fn kernel_length(&self, x: &Element) -> Length {
        self.total.length(x)
    }

    /// σ(g): a minimal-length lift of g, deterministic.
    pub fn section(&self, g: &Element) -> Result<Element> {
        if self.cocycle == Cocycle::Trivial {
            return Ok(ProductGroup::pair(g, &self.kernel.identity()));
        }
        let r = self.quotient.length(g);
        {
            let table = self.sections.read().unwrap();
            if table.radius.is_some_and(|tr| tr >= r) {
                return table
                    .lifts
                    .get(g)
                    .cloned()
                    .ok_or_else(|| Error::Numeric(format!("no lift of length {r} found")));
            }
        }
        let mut table = self.sections.write().unwrap();
        if !table.radius.is_some_and(|tr| tr >= r) {
            let target = r.max(table.radius.map_or(0, |tr| tr + 4));
            let mut ball = ball_elements(self.total.raw(), target, self.budget_bytes)?;
            ball.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
            let mut lifts = HashMap::new();
            for (x, _) in ball {
                lifts.entry(self.project(&x)).or_insert(x);
            }
            *table = SectionTable {
                radius: Some(target),
                lifts,
            };
        }
        table
            .lifts
            .get(g)
            .cloned()
            .ok_or_else(|| Error::Numeric(format!("no lift of length {r} found")))
    }

    /// γ·σ(π(γ))⁻¹, the kernel component of γ; `γ = project_to_kernel(γ)·σ(π(γ))`.
    pub fn project_to_kernel(&self, x: &Element) -> Result<Element> {
        let s = self.section(&self.project(x))?;
        Ok(self.total.multiply(x, &self.total.inverse(&s)))
    }

    /// All elements of H (as elements of Γ) with induced length ≤ `radius`.
    pub fn kernel_ball_elements(&self, radius: Length, budget_bytes: usize) -> Result<Vec<(Element, Length)>> {
        match self.cocycle {
            Cocycle::Trivial => Ok(ball_elements(self.kernel.raw(), radius, budget_bytes)?
                .into_iter()
                .map(|(h, l)| (self.include_kernel(&h), l))
                .collect()),
            Cocycle::Heisenberg => Ok(ball_elements(self.total.raw(), radius, budget_bytes)?
                .into_iter()
                .filter(|(x, _)| self.in_kernel(x))
                .collect()),
        }
    }
}
