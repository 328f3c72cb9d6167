use rand::RngCore;

use super::{cayley, Element, Group, GroupModel, Length};
use crate::error::{Error, Result};

/// Direct product G × H with length l(g,h) = l_G(g) + l_H(h).
///
/// When both factors carry word metrics this is the word metric over the
/// union of the factor generating sets. Elements are encoded as
/// `[len(g), g…, h…]`; text form is `g|h`.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    left: GroupModel,
    right: GroupModel,
}

impl ProductGroup {
    pub fn new(left: GroupModel, right: GroupModel) -> Self {
        ProductGroup { left, right }
    }

    pub fn left(&self) -> &GroupModel {
        &self.left
    }

    pub fn right(&self) -> &GroupModel {
        &self.right
    }

    pub fn pair(g: &Element, h: &Element) -> Element {
        let mut v = Vec::with_capacity(1 + g.len() + h.len());
        v.push(g.len() as i64);
        v.extend_from_slice(g.values());
        v.extend_from_slice(h.values());
        v.into()
    }

    pub fn split(x: &Element) -> (Element, Element) {
        let v = x.values();
        let n = v[0] as usize;
        (Element::new(&v[1..1 + n]), Element::new(&v[1 + n..]))
    }
}

impl Group for ProductGroup {
    fn identity(&self) -> Element {
        Self::pair(&self.left.identity(), &self.right.identity())
    }

    fn multiply(&self, x: &Element, y: &Element) -> Element {
        let ((g1, h1), (g2, h2)) = (Self::split(x), Self::split(y));
        Self::pair(&self.left.multiply(&g1, &g2), &self.right.multiply(&h1, &h2))
    }

    fn inverse(&self, x: &Element) -> Element {
        let (g, h) = Self::split(x);
        Self::pair(&self.left.inverse(&g), &self.right.inverse(&h))
    }

    fn length(&self, x: &Element) -> Length {
        let (g, h) = Self::split(x);
        self.left.length(&g) + self.right.length(&h)
    }

    fn generators(&self) -> Option<Vec<Element>> {
        let (gl, gr) = (self.left.generators()?, self.right.generators()?);
        let (el, er) = (self.left.identity(), self.right.identity());
        Some(
            gl.iter()
                .map(|s| Self::pair(s, &er))
                .chain(gr.iter().map(|t| Self::pair(&el, t)))
                .collect(),
        )
    }

    fn enumerate_ball(&self, radius: Length, budget: usize) -> Option<Result<Vec<Element>>> {
        if self.generators().is_some() {
            return None;
        }
        let combine = || -> Result<Vec<Element>> {
            let lb = cayley::ball_elements(self.left.raw(), radius, budget)?;
            let rb = cayley::ball_elements(self.right.raw(), radius, budget)?;
            let cap = budget / cayley::BYTES_PER_ELEMENT;
            let mut out = Vec::new();
            for (g, lg) in &lb {
                for (h, lh) in &rb {
                    if lg + lh <= radius {
                        out.push(Self::pair(g, h));
                    }
                }
                if out.len() > cap {
                    return Err(Error::Resource(format!(
                        "product ball of radius {radius} exceeds the memory budget"
                    )));
                }
            }
            Ok(out)
        };
        Some(combine())
    }

    fn is_valid(&self, x: &Element) -> bool {
        let v = x.values();
        if v.is_empty() || v[0] < 0 || 1 + v[0] as usize > v.len() {
            return false;
        }
        let (g, h) = Self::split(x);
        self.left.is_valid(&g) && self.right.is_valid(&h)
    }

    fn parse_element(&self, s: &str) -> Result<Element> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::parse("product element", s, "expected `g|h`"))?;
        Ok(Self::pair(&self.left.parse_element(a)?, &self.right.parse_element(b)?))
    }

    fn format_element(&self, x: &Element) -> String {
        let (g, h) = Self::split(x);
        format!("{}|{}", self.left.format_element(&g), self.right.format_element(&h))
    }

    fn sample(&self, rng: &mut dyn RngCore, scale: u32) -> Element {
        Self::pair(&self.left.sample(rng, scale), &self.right.sample(rng, scale))
    }
}
