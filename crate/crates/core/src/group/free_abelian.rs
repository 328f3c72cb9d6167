use rand::{Rng, RngCore};

use super::{Element, Group, Length};
use crate::error::{Error, Result};

/// ℤ^d with the ℓ¹ word length over the standard generators ±e_i.
#[derive(Debug, Clone)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Self {
        FreeAbelian { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl Group for FreeAbelian {
    fn identity(&self) -> Element {
        Element::from_vec(vec![0; self.rank])
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        x.values().iter().zip(y.values()).map(|(a, b)| a + b).collect::<Vec<_>>().into()
    }

    fn inverse(&self, x: &Element) -> Element {
        x.values().iter().map(|a| -a).collect::<Vec<_>>().into()
    }

    fn length(&self, x: &Element) -> Length {
        x.values().iter().map(|a| a.unsigned_abs()).sum::<u64>() as Length
    }

    fn generators(&self) -> Option<Vec<Element>> {
        let mut gens = Vec::with_capacity(2 * self.rank);
        for i in 0..self.rank {
            for sign in [1, -1] {
                let mut v = vec![0; self.rank];
                v[i] = sign;
                gens.push(v.into());
            }
        }
        Some(gens)
    }

    fn is_valid(&self, x: &Element) -> bool {
        x.len() == self.rank
    }

    fn parse_element(&self, s: &str) -> Result<Element> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = body
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::parse("free abelian element", s, e.to_string()))?;
        if values.len() != self.rank {
            return Err(Error::parse(
                "free abelian element",
                s,
                format!("expected {} coordinates, got {}", self.rank, values.len()),
            ));
        }
        Ok(values.into())
    }

    fn format_element(&self, x: &Element) -> String {
        let parts: Vec<String> = x.values().iter().map(i64::to_string).collect();
        format!("({})", parts.join(","))
    }

    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        let s = scale.max(1) as i64;
        (0..self.rank).map(|_| rng.gen_range(-s..=s)).collect::<Vec<_>>().into()
    }
}
