use rayon::prelude::*;

use super::ScaleFamily;
use crate::report::{ConditionRow, VerificationReport};

/// Exhaustive check over all unordered pairs (including x = y) of the family's ball:
///
/// * `near`: d(x,y) ≤ R ⇒ ‖ξ_x − ξ_y‖ ≤ ε
/// * `far`:  d(x,y) ≥ S ⇒ ‖ξ_x − ξ_y‖ ≥ 1
pub fn verify_family(family: &ScaleFamily, n: u64, r: f64, eps: f64, s: f64) -> VerificationReport {
    let ball = family.ball();
    let model = ball.model();
    let m = family.len();
    let (near, far) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut near = ConditionRow::new(n, "near");
            let mut far = ConditionRow::new(n, "far");
            for j in i..m {
                let d = model.distance(ball.element(i), ball.element(j)) as f64;
                let dist = family.vector_distance(i, j);
                if d <= r {
                    near.record(eps - dist);
                }
                if d >= s {
                    far.record(dist - 1.0);
                }
            }
            (near, far)
        })
        .reduce(
            || (ConditionRow::new(n, "near"), ConditionRow::new(n, "far")),
            |(mut a, mut b), (c, d)| {
                a.merge(&c);
                b.merge(&d);
                (a, b)
            },
        );
    VerificationReport { rows: vec![near, far] }
}
