#![allow(dead_code)]

use std::collections::VecDeque;

use hscomp::group::{Element, GroupModel, LampOrder};

/// Lamp positions covered by the wreath-product oracle.
pub const LAMP_LO: i64 = -3;
pub const LAMP_HI: i64 = 3;
const CURSOR_LO: i64 = -5;
const CURSOR_HI: i64 = 5;
/// Lamp values allowed in the oracle graph when the lamp group is ℤ.
pub const INF_VALUE_CAP: i64 = 3;

/// Word distances from the identity in the Cayley graph of L ≀ ℤ with
/// generators t^{±1} (cursor) and e₀^{±1} (lamp at the cursor), restricted to
/// lamps in [−3, 3], cursor in [−5, 5], and (for L = ℤ) values in [−3, 3].
/// Geodesics to configurations supported in [−3, 3] never leave that window.
pub struct WreathOracle {
    base: i64,
    offset: i64,
    dist: Vec<u8>,
}

impl WreathOracle {
    pub fn new(order: LampOrder) -> Self {
        let (base, offset) = match order {
            LampOrder::Finite(m) => (m as i64, 0),
            LampOrder::Infinite => (2 * INF_VALUE_CAP + 1, INF_VALUE_CAP),
        };
        let slots = (LAMP_HI - LAMP_LO + 1) as u32;
        let configs = base.pow(slots) as usize;
        let cursors = (CURSOR_HI - CURSOR_LO + 1) as usize;
        let total = configs * cursors;
        let mut dist = vec![u8::MAX; total];
        let encode = |cursor: i64, digits: &[i64]| -> usize {
            let c: usize = digits.iter().rev().fold(0, |acc, &d| acc * base as usize + d as usize);
            (cursor - CURSOR_LO) as usize * configs + c
        };
        let digits0 = vec![offset; slots as usize];
        let start = encode(0, &digits0);
        dist[start] = 0;
        let mut queue = VecDeque::from([(0i64, digits0.clone())]);
        let finite = matches!(order, LampOrder::Finite(_));
        while let Some((cursor, digits)) = queue.pop_front() {
            let d = dist[encode(cursor, &digits)];
            let mut push = |c: i64, ds: Vec<i64>, queue: &mut VecDeque<(i64, Vec<i64>)>| {
                let k = encode(c, &ds);
                if dist[k] == u8::MAX {
                    dist[k] = d + 1;
                    queue.push_back((c, ds));
                }
            };
            for step in [-1, 1] {
                let c = cursor + step;
                if (CURSOR_LO..=CURSOR_HI).contains(&c) {
                    push(c, digits.clone(), &mut queue);
                }
            }
            if (LAMP_LO..=LAMP_HI).contains(&cursor) {
                let slot = (cursor - LAMP_LO) as usize;
                for delta in [-1, 1] {
                    let mut ds = digits.clone();
                    let v = ds[slot] + delta;
                    if finite {
                        ds[slot] = v.rem_euclid(base);
                    } else if (0..base).contains(&v) {
                        ds[slot] = v;
                    } else {
                        continue;
                    }
                    push(cursor, ds, &mut queue);
                }
            }
        }
        WreathOracle { base, offset, dist }
    }

    /// Distance to the configuration (cursor back at 0); lamps as (position, value).
    pub fn distance(&self, lamps: &[(i64, i64)]) -> u32 {
        let slots = (LAMP_HI - LAMP_LO + 1) as usize;
        let mut digits = vec![self.offset; slots];
        for &(pos, v) in lamps {
            digits[(pos - LAMP_LO) as usize] = if self.offset == 0 { v.rem_euclid(self.base) } else { v + self.offset };
        }
        let configs = self.base.pow(slots as u32) as usize;
        let c: usize = digits.iter().rev().fold(0, |acc, &d| acc * self.base as usize + d as usize);
        let k = (0 - CURSOR_LO) as usize * configs + c;
        assert_ne!(self.dist[k], u8::MAX, "configuration {lamps:?} unreachable in the window");
        self.dist[k] as u32
    }
}

/// Every lamp configuration on [−3, 3] with values in `values`.
pub fn all_configurations(values: &[i64]) -> Vec<Vec<(i64, i64)>> {
    let mut out = vec![Vec::new()];
    for pos in LAMP_LO..=LAMP_HI {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for cfg in &out {
            for &v in values {
                let mut c: Vec<(i64, i64)> = cfg.clone();
                if v != 0 {
                    c.push((pos, v));
                }
                next.push(c);
            }
        }
        out = next;
    }
    out
}

/// The ray from `y` toward the end with prefixes `target_prefix`, by greedy
/// steps that reduce the distance to a long prefix; `steps + 1` vertices.
pub fn greedy_ray(model: &GroupModel, y: &Element, target_prefix: &Element, steps: usize) -> Vec<Element> {
    let gens = model.generators().expect("word-metric model");
    let mut cur = y.clone();
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        let d = model.distance(&cur, target_prefix);
        cur = gens
            .iter()
            .map(|s| model.multiply(&cur, s))
            .find(|w| model.distance(w, target_prefix) + 1 == d)
            .expect("a neighbor closer to the target");
        out.push(cur.clone());
    }
    out
}
