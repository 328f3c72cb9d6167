//! Exact balls `B_R = { x : l(x) ≤ R }` around the identity.
//!
//! Elements are sorted by length, then by canonical encoding, so prefix
//! `0..count_within(r)` is exactly `B_r` for every `r ≤ R`.

mod cache;
mod growth;
mod ksearch;

use std::collections::HashMap;

pub use cache::{cache_load, cache_save, CACHE_MAGIC, CACHE_VERSION};
pub use growth::{fit_growth, growth_profile, GrowthProfile};
pub use ksearch::{find_k_n, find_k_n_in_ball, k_search, KSearchResult};

use crate::error::{Error, Result};
use crate::group::{ball_elements, Element, GroupModel, Length};

/// Default memory budget for a single enumeration (2 GiB).
pub const DEFAULT_BUDGET_BYTES: usize = 2 << 30;

#[derive(Clone)]
pub struct Ball {
    model: GroupModel,
    radius: Length,
    elements: Vec<Element>,
    lengths: Vec<Length>,
    index: HashMap<Element, usize>,
    /// `prefix[r]` = |B_r| for r = 0..=radius.
    prefix: Vec<usize>,
}

impl std::fmt::Debug for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ball")
            .field("spec", &self.model.spec().to_string())
            .field("radius", &self.radius)
            .field("len", &self.elements.len())
            .finish()
    }
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.model.spec() == other.model.spec()
            && self.radius == other.radius
            && self.elements == other.elements
            && self.lengths == other.lengths
    }
}

impl Ball {
    /// Builds a ball from unsorted `(element, length)` pairs, all of length ≤ `radius`.
    pub(crate) fn from_pairs(model: GroupModel, radius: Length, mut pairs: Vec<(Element, Length)>) -> Result<Ball> {
        pairs.sort_unstable_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let mut prefix = vec![0usize; radius as usize + 1];
        let mut elements = Vec::with_capacity(pairs.len());
        let mut lengths = Vec::with_capacity(pairs.len());
        for (x, l) in pairs {
            if l > radius {
                return Err(Error::Numeric(format!("element of length {l} in a ball of radius {radius}")));
            }
            prefix[l as usize] += 1;
            elements.push(x);
            lengths.push(l);
        }
        for r in 1..prefix.len() {
            prefix[r] += prefix[r - 1];
        }
        let index = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Ok(Ball {
            model,
            radius,
            elements,
            lengths,
            index,
            prefix,
        })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn radius(&self) -> Length {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn lengths(&self) -> &[Length] {
        &self.lengths
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn length_at(&self, i: usize) -> Length {
        self.lengths[i]
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    /// |B_r| for r ≤ radius; `None` beyond the enumerated radius.
    pub fn count_within(&self, r: Length) -> Option<usize> {
        self.prefix.get(r as usize).copied()
    }

    /// `counts()[r]` = |B_r| for r = 0..=radius.
    pub fn counts(&self) -> &[usize] {
        &self.prefix
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, Length)> {
        self.elements.iter().zip(self.lengths.iter().copied())
    }

    /// The sub-ball of radius `r ≤ radius`.
    pub fn truncated(&self, r: Length) -> Ball {
        let r = r.min(self.radius);
        let m = self.prefix[r as usize];
        let elements = self.elements[..m].to_vec();
        let index = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Ball {
            model: self.model.clone(),
            radius: r,
            elements,
            lengths: self.lengths[..m].to_vec(),
            index,
            prefix: self.prefix[..=r as usize].to_vec(),
        }
    }
}

/// Exact ball of radius `radius` with the default memory budget.
pub fn enumerate_ball(model: &GroupModel, radius: Length) -> Result<Ball> {
    enumerate_ball_with_budget(model, radius, DEFAULT_BUDGET_BYTES)
}

pub fn enumerate_ball_with_budget(model: &GroupModel, radius: Length, budget_bytes: usize) -> Result<Ball> {
    let pairs = ball_elements(model.raw(), radius, budget_bytes)?;
    Ball::from_pairs(model.clone(), radius, pairs)
}

/// The largest ball with at most `max_elements` elements, found by doubling
/// the radius and truncating the first ball that overshoots.
pub fn largest_ball_within(model: &GroupModel, max_elements: usize, budget_bytes: usize) -> Result<Ball> {
    let mut r: Length = 1;
    let mut previous = 0;
    loop {
        let ball = enumerate_ball_with_budget(model, r, budget_bytes)?;
        if ball.len() > max_elements {
            let fit = ball.counts().iter().rposition(|&c| c <= max_elements).unwrap_or(0);
            return Ok(ball.truncated(fit as Length));
        }
        // a ball that stops growing over a doubling of the radius is the whole (finite) group
        if r >= 8 && ball.len() == previous {
            return Ok(ball);
        }
        previous = ball.len();
        r = r.checked_mul(2).ok_or_else(|| Error::Resource("radius overflow".into()))?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupSpec};

    #[test]
    fn closed_form_counts() {
        let z2 = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
        let b = enumerate_ball(&z2, 6).unwrap();
        for r in 0..=6usize {
            assert_eq!(b.counts()[r], 2 * r * r + 2 * r + 1);
        }
        let f2 = make_group(&GroupSpec::FreeGroup { rank: 2 }).unwrap();
        assert_eq!(enumerate_ball(&f2, 3).unwrap().len(), 53);
    }

    #[test]
    fn heisenberg_radius_four() {
        let h = make_group(&GroupSpec::Heisenberg).unwrap();
        assert_eq!(enumerate_ball(&h, 4).unwrap().len(), 135);
    }

    #[test]
    fn ordering_and_index() {
        let z2 = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
        let b = enumerate_ball(&z2, 4).unwrap();
        assert_eq!(b.element(0), &z2.identity());
        for i in 1..b.len() {
            let prev = (b.length_at(i - 1), b.element(i - 1));
            assert!(prev < (b.length_at(i), b.element(i)));
            assert_eq!(b.position(b.element(i)), Some(i));
        }
        let t = b.truncated(2);
        assert_eq!(t.len(), 13);
        assert_eq!(t, enumerate_ball(&z2, 2).unwrap());
    }

    #[test]
    fn budget_error_names_radius() {
        let f2 = make_group(&GroupSpec::FreeGroup { rank: 2 }).unwrap();
        let err = enumerate_ball_with_budget(&f2, 20, 1 << 20).unwrap_err();
        assert_eq!(err.category(), "resource");
        assert!(err.to_string().contains("radius"));
    }

    #[test]
    fn largest_ball_respects_cap() {
        let z = make_group(&GroupSpec::FreeAbelian { rank: 1 }).unwrap();
        let b = largest_ball_within(&z, 100, DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(b.radius(), 49);
        assert_eq!(b.len(), 99);
        let d = make_group(&"direct_sum_finite(1,2,2)".parse().unwrap()).unwrap();
        assert_eq!(largest_ball_within(&d, 100, DEFAULT_BUDGET_BYTES).unwrap().len(), 4);
    }
}
