use std::collections::HashMap;
use std::sync::RwLock;

use rand::{Rng, RngCore};

use super::{cayley, Element, Group, Length};
use crate::error::{Error, Result};

/// Discrete Heisenberg group H₃ with generators x^{±1}, y^{±1}.
///
/// `(a, b, c)` is the unipotent matrix [[1,a,c],[0,1,b],[0,0,1]], so
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b')`. Word length is computed
/// by Cayley-graph BFS; the distance table grows lazily and is shared.
#[derive(Debug)]
pub struct Heisenberg {
    memo: RwLock<Memo>,
}

#[derive(Debug, Default)]
struct Memo {
    dist: HashMap<Element, Length>,
    frontier: Vec<Element>,
    radius: Length,
}

impl Heisenberg {
    pub fn new() -> Self {
        let id = Element::new(&[0, 0, 0]);
        let mut dist = HashMap::new();
        dist.insert(id.clone(), 0);
        Heisenberg {
            memo: RwLock::new(Memo {
                dist,
                frontier: vec![id],
                radius: 0,
            }),
        }
    }

    fn gens() -> [Element; 4] {
        [
            Element::new(&[1, 0, 0]),
            Element::new(&[-1, 0, 0]),
            Element::new(&[0, 1, 0]),
            Element::new(&[0, -1, 0]),
        ]
    }

    fn mul(x: &[i64], y: &[i64]) -> Element {
        Element::new(&[x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]])
    }

    fn grow_one_layer(&self, memo: &mut Memo) {
        let gens = Self::gens();
        let r = memo.radius + 1;
        let mut next = Vec::new();
        for g in &memo.frontier {
            for s in &gens {
                let h = Self::mul(g.values(), s.values());
                if !memo.dist.contains_key(&h) {
                    memo.dist.insert(h.clone(), r);
                    next.push(h);
                }
            }
        }
        memo.frontier = next;
        memo.radius = r;
    }
}

impl Default for Heisenberg {
    fn default() -> Self {
        Self::new()
    }
}

impl Group for Heisenberg {
    fn identity(&self) -> Element {
        Element::new(&[0, 0, 0])
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        Self::mul(x.values(), y.values())
    }

    fn inverse(&self, x: &Element) -> Element {
        let v = x.values();
        Element::new(&[-v[0], -v[1], -v[2] + v[0] * v[1]])
    }

    fn length(&self, x: &Element) -> Length {
        if let Some(&d) = self.memo.read().unwrap().dist.get(x) {
            return d;
        }
        let mut memo = self.memo.write().unwrap();
        loop {
            if let Some(&d) = memo.dist.get(x) {
                return d;
            }
            self.grow_one_layer(&mut memo);
        }
    }

    fn generators(&self) -> Option<Vec<Element>> {
        Some(Self::gens().to_vec())
    }

    fn enumerate_ball(&self, radius: Length, budget: usize) -> Option<Result<Vec<Element>>> {
        // plain BFS; the memo is only for point queries
        Some(cayley::bfs(self, &Self::gens(), radius, budget).map(|v| v.into_iter().map(|(e, _)| e).collect()))
    }

    fn is_valid(&self, x: &Element) -> bool {
        x.len() == 3
    }

    fn parse_element(&self, s: &str) -> Result<Element> {
        let t = s.trim();
        if t.starts_with('(') {
            let values = t
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse("heisenberg element", s, e.to_string()))?;
            if values.len() != 3 {
                return Err(Error::parse("heisenberg element", s, "expected (a,b,c)"));
            }
            return Ok(values.into());
        }
        // word over x, y, X, Y
        let mut g = self.identity();
        for c in t.chars().filter(|c| !matches!(c, '*' | '.' | ' ' | '1')) {
            let s = match c {
                'x' => [1, 0, 0],
                'X' => [-1, 0, 0],
                'y' => [0, 1, 0],
                'Y' => [0, -1, 0],
                _ => return Err(Error::parse("heisenberg word", s, format!("unexpected character {c:?}"))),
            };
            g = Self::mul(g.values(), &s);
        }
        Ok(g)
    }

    fn format_element(&self, x: &Element) -> String {
        let v = x.values();
        format!("({},{},{})", v[0], v[1], v[2])
    }

    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        let gens = Self::gens();
        let mut g = self.identity();
        for _ in 0..rng.gen_range(0..=scale.max(1)) {
            g = Self::mul(g.values(), gens[rng.gen_range(0..4)].values());
        }
        g
    }
}
