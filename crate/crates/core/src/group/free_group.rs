use rand::{Rng, RngCore};

use super::{Element, Group, Length};
use crate::error::{Error, Result};

/// Free group of finite rank; elements are freely reduced words.
///
/// Letter `i+1` is the i-th generator, `-(i+1)` its inverse. In text form the
/// generators are `a, b, c, …` and their inverses `A, B, C, …`; `1` is the
/// identity.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Appends `letter` to a reduced word, cancelling against the last letter.
    pub(crate) fn push_reduced(word: &mut Vec<i64>, letter: i64) {
        if word.last() == Some(&-letter) {
            word.pop();
        } else {
            word.push(letter);
        }
    }
}

impl Group for FreeGroup {
    fn identity(&self) -> Element {
        Element::empty()
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        let (xs, ys) = (x.values(), y.values());
        let mut cancel = 0;
        while cancel < xs.len() && cancel < ys.len() && xs[xs.len() - 1 - cancel] == -ys[cancel] {
            cancel += 1;
        }
        let mut w = Vec::with_capacity(xs.len() + ys.len() - 2 * cancel);
        w.extend_from_slice(&xs[..xs.len() - cancel]);
        w.extend_from_slice(&ys[cancel..]);
        w.into()
    }

    fn inverse(&self, x: &Element) -> Element {
        x.values().iter().rev().map(|l| -l).collect::<Vec<_>>().into()
    }

    fn length(&self, x: &Element) -> Length {
        x.len() as Length
    }

    fn generators(&self) -> Option<Vec<Element>> {
        Some(
            (1..=self.rank as i64)
                .flat_map(|i| [Element::new(&[i]), Element::new(&[-i])])
                .collect(),
        )
    }

    fn is_valid(&self, x: &Element) -> bool {
        let w = x.values();
        w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.rank) && w.windows(2).all(|p| p[0] != -p[1])
    }

    fn parse_element(&self, s: &str) -> Result<Element> {
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "e" {
            return Ok(Element::empty());
        }
        let mut w = Vec::new();
        for c in t.chars().filter(|c| !matches!(c, '*' | '.' | ' ')) {
            let letter = if c.is_ascii_lowercase() {
                (c as u8 - b'a') as i64 + 1
            } else if c.is_ascii_uppercase() {
                -((c as u8 - b'A') as i64 + 1)
            } else {
                return Err(Error::parse("free group word", s, format!("unexpected character {c:?}")));
            };
            if letter.unsigned_abs() as usize > self.rank {
                return Err(Error::parse("free group word", s, format!("generator {c:?} exceeds rank")));
            }
            Self::push_reduced(&mut w, letter);
        }
        Ok(w.into())
    }

    fn format_element(&self, x: &Element) -> String {
        if x.is_empty() {
            return "1".to_string();
        }
        x.values()
            .iter()
            .map(|&l| {
                if l > 0 {
                    (b'a' + (l - 1) as u8) as char
                } else {
                    (b'A' + (-l - 1) as u8) as char
                }
            })
            .collect()
    }

    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        let len = rng.gen_range(0..=scale.max(1));
        let mut w = Vec::new();
        for _ in 0..len {
            let g = rng.gen_range(1..=self.rank as i64);
            let l = if rng.gen_bool(0.5) { g } else { -g };
            Self::push_reduced(&mut w, l);
        }
        w.into()
    }
}
