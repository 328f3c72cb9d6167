use std::collections::HashSet;

use super::{Element, Group, GroupModel, Length};
use crate::error::{Error, Result};

/// Approximate resident bytes per enumerated element (vector slot + hash slot).
pub(crate) const BYTES_PER_ELEMENT: usize = 2 * std::mem::size_of::<Element>() + 32;

/// Breadth-first search in the Cayley graph from the identity, layer by layer.
///
/// Returns every element at graph distance ≤ `radius` with its distance, in
/// BFS discovery order.
pub(crate) fn bfs(
    group: &dyn Group,
    generators: &[Element],
    radius: Length,
    budget_bytes: usize,
) -> Result<Vec<(Element, Length)>> {
    let id = group.identity();
    let mut seen: HashSet<Element> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![(id.clone(), 0)];
    let mut frontier = vec![id];
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in generators {
                let h = group.multiply(g, s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        if seen.len().saturating_mul(BYTES_PER_ELEMENT) > budget_bytes {
            return Err(Error::Resource(format!(
                "ball enumeration exceeded memory budget of {budget_bytes} bytes at radius {r} \
                 (completed radius {}, {} elements)",
                r - 1,
                out.len()
            )));
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned().map(|h| (h, r)));
        frontier = next;
    }
    Ok(out)
}

/// All elements of length ≤ `radius` with their lengths, unordered.
pub(crate) fn ball_elements(group: &dyn Group, radius: Length, budget_bytes: usize) -> Result<Vec<(Element, Length)>> {
    if let Some(res) = group.enumerate_ball(radius, budget_bytes) {
        return Ok(res?
            .into_iter()
            .map(|e| {
                let l = group.length(&e);
                (e, l)
            })
            .collect());
    }
    let gens = group
        .generators()
        .ok_or_else(|| Error::Unsupported(format!("{group:?} has neither generators nor a ball enumerator")))?;
    bfs(group, &gens, radius, budget_bytes)
}

/// Cayley-graph BFS ball for a word-metric model; the reference oracle for
/// length formulas.
pub fn cayley_ball(model: &GroupModel, radius: Length, budget_bytes: usize) -> Result<Vec<(Element, Length)>> {
    let gens = model
        .generators()
        .ok_or_else(|| Error::Unsupported(format!("{} has no word-metric generating set", model.spec())))?;
    bfs(model.raw(), &gens, radius, budget_bytes)
}
