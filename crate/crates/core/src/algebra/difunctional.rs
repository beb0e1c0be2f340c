use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::fincat::FinCategory;
use crate::structures::Span;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifunctionalResult {
    pub holds: bool,
    /// `(x, y, z, w)` with `x R y`, `z R y`, `z R w` but not `x R w`.
    pub witness: Option<(u32, u32, u32, u32)>,
}

/// `{(d x, c x)}` for a span in a concrete category, sorted and deduplicated.
pub fn relation_pairs(cat: &FinCategory, span: &Span) -> Option<Vec<(u32, u32)>> {
    let (d, c) = (cat.map(span.d)?, cat.map(span.c)?);
    let set: BTreeSet<(u32, u32)> = d.iter().copied().zip(c.iter().copied()).collect();
    Some(set.into_iter().collect())
}

/// Scans `(x, y)` in R, then `z` with `z R y`, then `w` with `z R w`, all in
/// ascending order, and reports the first quadruple missing `x R w`.
pub fn is_difunctional(pairs: &[(u32, u32)]) -> DifunctionalResult {
    let rel: BTreeSet<(u32, u32)> = pairs.iter().copied().collect();
    let mut by_right: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut by_left: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(x, y) in &rel {
        by_right.entry(y).or_default().push(x);
        by_left.entry(x).or_default().push(y);
    }
    for &(x, y) in &rel {
        for &z in &by_right[&y] {
            for &w in &by_left[&z] {
                if !rel.contains(&(x, w)) {
                    return DifunctionalResult {
                        holds: false,
                        witness: Some((x, y, z, w)),
                    };
                }
            }
        }
    }
    DifunctionalResult {
        holds: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_graph_is_difunctional() {
        let graph: Vec<(u32, u32)> = (0..5).map(|x| (x, x % 2)).collect();
        assert!(is_difunctional(&graph).holds);
    }

    #[test]
    fn three_pair_relation_witness() {
        let r = is_difunctional(&[(0, 0), (1, 0), (1, 1)]);
        assert!(!r.holds);
        assert_eq!(r.witness, Some((0, 0, 1, 1)));
    }

    #[test]
    fn agrees_with_all_16_cases() {
        // Every relation on 2 x 2, against the definition by full quantification.
        for mask in 0u32..16 {
            let pairs: Vec<(u32, u32)> = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i / 2, i % 2))
                .collect();
            let has = |a, b| pairs.contains(&(a, b));
            let mut brute = true;
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        for w in 0..2 {
                            if has(x, y) && has(z, y) && has(z, w) && !has(x, w) {
                                brute = false;
                            }
                        }
                    }
                }
            }
            assert_eq!(is_difunctional(&pairs).holds, brute, "{pairs:?}");
        }
    }
}
