use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use super::{Element, Group, Length};
use crate::error::{Error, Result};

/// Order of the lamp group: ℤ/m or ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LampOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for LampOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LampOrder::Finite(m) => write!(f, "{m}"),
            LampOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for LampOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "Z" => Ok(LampOrder::Infinite),
            t => t
                .parse::<u64>()
                .map(LampOrder::Finite)
                .map_err(|e| Error::parse("lamp order", s, e.to_string())),
        }
    }
}

/// The subgroup {(f, 0)} of L ≀ ℤ (L = ℤ/m or ℤ) with the metric induced
/// from the word length over t^{±1}, e₀^{±1}.
///
/// Elements are flat `[pos, value, pos, value, …]` lists sorted by position
/// with nonzero values (in `1..m` for finite lamps). The induced length of a
/// configuration is the total lamp cost plus the shortest closed cursor walk
/// from 0 that visits the whole support:
///
/// `Σ_i cost(f(i)) + 2·max(0, rightmost) + 2·max(0, −leftmost)`
///
/// with `cost(v) = min(v, m−v)` for ℤ/m and `|v|` for ℤ.
#[derive(Debug, Clone)]
pub struct Lamplighter {
    order: LampOrder,
}

impl Lamplighter {
    pub fn new(order: LampOrder) -> Self {
        Lamplighter { order }
    }

    pub fn lamp_order(&self) -> LampOrder {
        self.order
    }

    fn normalize(&self, v: i64) -> i64 {
        match self.order {
            LampOrder::Finite(m) => v.rem_euclid(m as i64),
            LampOrder::Infinite => v,
        }
    }

    fn cost(&self, v: i64) -> u64 {
        match self.order {
            LampOrder::Finite(m) => {
                let v = v.rem_euclid(m as i64) as u64;
                v.min(m - v)
            }
            LampOrder::Infinite => v.unsigned_abs(),
        }
    }

    /// Nonzero lamp values with cost at most `budget`.
    fn values_within(&self, budget: u64) -> Vec<i64> {
        match self.order {
            LampOrder::Finite(m) => (1..m as i64).filter(|&v| self.cost(v) <= budget).collect(),
            LampOrder::Infinite => (1..=budget as i64).flat_map(|v| [v, -v]).collect(),
        }
    }

    pub fn from_lamps(&self, lamps: &[(i64, i64)]) -> Element {
        let mut pairs: Vec<(i64, i64)> = lamps.iter().map(|&(p, v)| (p, self.normalize(v))).collect();
        pairs.sort();
        let mut flat = Vec::with_capacity(2 * pairs.len());
        let mut i = 0;
        while i < pairs.len() {
            let pos = pairs[i].0;
            let mut v = 0;
            while i < pairs.len() && pairs[i].0 == pos {
                v = self.normalize(v + pairs[i].1);
                i += 1;
            }
            if v != 0 {
                flat.push(pos);
                flat.push(v);
            }
        }
        flat.into()
    }

    pub fn lamps(x: &Element) -> impl Iterator<Item = (i64, i64)> + '_ {
        x.values().chunks_exact(2).map(|c| (c[0], c[1]))
    }

    fn enumerate_into(
        &self,
        out: &mut Vec<Element>,
        current: &mut Vec<i64>,
        pos: i64,
        right: i64,
        left: i64,
        budget: u64,
        cap: usize,
    ) -> bool {
        if out.len() > cap {
            return false;
        }
        if pos > right {
            out.push(Element::from_vec(current.clone()));
            return true;
        }
        // the extreme positions must be lit, otherwise the extents are smaller
        let must_light = (pos == left && left < 0) || (pos == right && right > 0);
        if !must_light && !self.enumerate_into(out, current, pos + 1, right, left, budget, cap) {
            return false;
        }
        for v in self.values_within(budget) {
            current.push(pos);
            current.push(v);
            let ok = self.enumerate_into(out, current, pos + 1, right, left, budget - self.cost(v), cap);
            current.truncate(current.len() - 2);
            if !ok {
                return false;
            }
        }
        true
    }
}

impl Group for Lamplighter {
    fn identity(&self) -> Element {
        Element::empty()
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        let (a, b) = (x.values(), y.values());
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let (pos, v) = if j >= b.len() || (i < a.len() && a[i] < b[j]) {
                let r = (a[i], a[i + 1]);
                i += 2;
                r
            } else if i >= a.len() || b[j] < a[i] {
                let r = (b[j], b[j + 1]);
                j += 2;
                r
            } else {
                let r = (a[i], self.normalize(a[i + 1] + b[j + 1]));
                i += 2;
                j += 2;
                r
            };
            if v != 0 {
                out.push(pos);
                out.push(v);
            }
        }
        out.into()
    }

    fn inverse(&self, x: &Element) -> Element {
        let mut out = x.values().to_vec();
        for c in out.chunks_exact_mut(2) {
            c[1] = self.normalize(-c[1]);
        }
        out.into()
    }

    fn length(&self, x: &Element) -> Length {
        let v = x.values();
        if v.is_empty() {
            return 0;
        }
        let lamp_cost: u64 = Self::lamps(x).map(|(_, val)| self.cost(val)).sum();
        let leftmost = v[0];
        let rightmost = v[v.len() - 2];
        let walk = 2 * rightmost.max(0) as u64 + 2 * (-leftmost).max(0) as u64;
        (lamp_cost + walk) as Length
    }

    fn enumerate_ball(&self, radius: Length, budget: usize) -> Option<Result<Vec<Element>>> {
        let cap = budget / super::cayley::BYTES_PER_ELEMENT;
        let r = radius as i64;
        let mut out = Vec::new();
        for left in 0..=r / 2 {
            for right in 0..=(r - 2 * left) / 2 {
                let lamp_budget = (r - 2 * left - 2 * right) as u64;
                let mut cur = Vec::new();
                if !self.enumerate_into(&mut out, &mut cur, -left, right, -left, lamp_budget, cap) {
                    return Some(Err(Error::Resource(format!(
                        "lamplighter ball of radius {radius} exceeds the memory budget"
                    ))));
                }
            }
        }
        Some(Ok(out))
    }

    fn is_valid(&self, x: &Element) -> bool {
        let v = x.values();
        if v.len() % 2 != 0 {
            return false;
        }
        let ordered = v.chunks_exact(2).collect::<Vec<_>>().windows(2).all(|w| w[0][0] < w[1][0]);
        ordered
            && Self::lamps(x).all(|(_, val)| {
                val != 0
                    && match self.order {
                        LampOrder::Finite(m) => val > 0 && (val as u64) < m,
                        LampOrder::Infinite => true,
                    }
            })
    }

    /// Accepts `{pos:value, …}`; `{}` or `1` is the identity.
    fn parse_element(&self, s: &str) -> Result<Element> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() || body == "1" {
            return Ok(Element::empty());
        }
        let mut lamps = Vec::new();
        for item in body.split(',') {
            let (p, v) = match item.split_once(':') {
                Some((p, v)) => (p, v),
                None => (item, "1"),
            };
            let p = p
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::parse("lamplighter element", s, e.to_string()))?;
            let v = v
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::parse("lamplighter element", s, e.to_string()))?;
            lamps.push((p, v));
        }
        Ok(self.from_lamps(&lamps))
    }

    fn format_element(&self, x: &Element) -> String {
        let parts: Vec<String> = Self::lamps(x).map(|(p, v)| format!("{p}:{v}")).collect();
        format!("{{{}}}", parts.join(","))
    }

    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        let s = scale.max(1) as i64;
        let lamps: Vec<(i64, i64)> = (0..rng.gen_range(0..=s))
            .map(|_| {
                let v = match self.order {
                    LampOrder::Finite(m) => rng.gen_range(0..m as i64),
                    LampOrder::Infinite => rng.gen_range(-3..=3),
                };
                (rng.gen_range(-s..=s), v)
            })
            .collect();
        self.from_lamps(&lamps)
    }
}
