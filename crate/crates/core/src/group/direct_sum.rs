use rand::{Rng, RngCore};

use super::{Element, Group, Length};
use crate::error::{Error, Result};

/// Truncated direct sum F₀ ⊕ F₁ ⊕ … ⊕ F_N of cyclic groups, F₀ trivial.
///
/// Length: l(g) = min{ n : g ∈ ⊕_{i≤n} F_i }, i.e. the largest index with a
/// nonzero coordinate. This is an ultrametric length, not a word length.
#[derive(Debug, Clone)]
pub struct DirectSumFinite {
    orders: Vec<u64>,
}

impl DirectSumFinite {
    pub fn new(orders: Vec<u64>) -> Self {
        DirectSumFinite { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }
}

impl Group for DirectSumFinite {
    fn identity(&self) -> Element {
        Element::from_vec(vec![0; self.orders.len()])
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        x.values()
            .iter()
            .zip(y.values())
            .zip(&self.orders)
            .map(|((a, b), &m)| (a + b).rem_euclid(m as i64))
            .collect::<Vec<_>>()
            .into()
    }

    fn inverse(&self, x: &Element) -> Element {
        x.values()
            .iter()
            .zip(&self.orders)
            .map(|(a, &m)| (-a).rem_euclid(m as i64))
            .collect::<Vec<_>>()
            .into()
    }

    fn length(&self, x: &Element) -> Length {
        x.values().iter().rposition(|&a| a != 0).map_or(0, |i| i as Length)
    }

    fn enumerate_ball(&self, radius: Length, budget: usize) -> Option<Result<Vec<Element>>> {
        let top = (radius as usize).min(self.orders.len() - 1);
        let size: u128 = self.orders[..=top].iter().map(|&m| m as u128).product();
        if size.saturating_mul(super::cayley::BYTES_PER_ELEMENT as u128) > budget as u128 {
            return Some(Err(Error::Resource(format!(
                "direct sum ball of radius {radius} has {size} elements, over budget"
            ))));
        }
        let mut out = vec![self.identity()];
        for i in 1..=top {
            let m = self.orders[i] as i64;
            let prev = out.clone();
            for v in 1..m {
                out.extend(prev.iter().map(|g| {
                    let mut w = g.values().to_vec();
                    w[i] = v;
                    Element::from_vec(w)
                }));
            }
        }
        Some(Ok(out))
    }

    fn is_valid(&self, x: &Element) -> bool {
        x.len() == self.orders.len() && x.values().iter().zip(&self.orders).all(|(&a, &m)| a >= 0 && (a as u64) < m)
    }

    fn parse_element(&self, s: &str) -> Result<Element> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut values = body
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::parse("direct sum element", s, e.to_string()))?;
        if values.len() > self.orders.len() {
            return Err(Error::parse("direct sum element", s, "too many coordinates"));
        }
        values.resize(self.orders.len(), 0);
        Ok(values
            .iter()
            .zip(&self.orders)
            .map(|(a, &m)| a.rem_euclid(m as i64))
            .collect::<Vec<_>>()
            .into())
    }

    fn format_element(&self, x: &Element) -> String {
        let parts: Vec<String> = x.values().iter().map(i64::to_string).collect();
        format!("({})", parts.join(","))
    }

    fn sample(&self, rng: &mut dyn RngCore, _scale: u32) -> Element {
        self.orders
            .iter()
            .map(|&m| rng.gen_range(0..m as i64))
            .collect::<Vec<_>>()
            .into()
    }
}
