//! Evaluation budgets for checks whose instance ranges outgrow a desk run.
//!
//! Instances are grouped into weight classes (the summed carrier sizes of the
//! objects involved) and taken lightest first. A class is either evaluated in
//! full or not at all, so the evaluated range does not depend on id order.

use serde::{Deserialize, Serialize};

use crate::fincat::{FinCategory, ObjId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalBudget {
    /// Instances examined per quantifier range.
    pub max_instances: usize,
    /// Base-morphism candidates examined when checking that structures lift.
    pub max_lift_checks: usize,
}

impl EvalBudget {
    pub const UNLIMITED: EvalBudget = EvalBudget {
        max_instances: usize::MAX,
        max_lift_checks: usize::MAX,
    };
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_instances: 400,
            max_lift_checks: 200_000,
        }
    }
}

/// Carrier size, or 1 for abstract objects.
pub fn weight(cat: &FinCategory, objs: &[ObjId]) -> usize {
    objs.iter().map(|&o| cat.carrier(o).unwrap_or(1)).sum()
}

/// A group of candidate instances sharing a weight; `raw` bounds the number
/// of candidates its expansion scans.
pub(crate) struct Cell<C> {
    pub weight: usize,
    pub raw: usize,
    pub key: C,
}

pub(crate) struct Staged<T> {
    pub items: Vec<T>,
    /// Cells left unexpanded because the budget ran out.
    pub skipped: usize,
}

/// Raw candidates scanned per admitted instance before giving up.
const RAW_FACTOR: usize = 64;

/// Expands cells lightest first and keeps whole weight classes while at most
/// `max` instances have been collected. `expand` receives the remaining room
/// and may stop once it has produced more than that.
pub(crate) fn staged<C, T>(
    mut cells: Vec<Cell<C>>,
    max: usize,
    mut expand: impl FnMut(&C, usize) -> Vec<T>,
) -> Staged<T> {
    cells.sort_by_key(|c| c.weight);
    let raw_cap = max.saturating_mul(RAW_FACTOR);
    let mut items = Vec::new();
    let mut raw_seen = 0usize;
    let mut i = 0;
    while i < cells.len() {
        let w = cells[i].weight;
        let end = i + cells[i..].iter().take_while(|c| c.weight == w).count();
        let class_raw: usize = cells[i..end]
            .iter()
            .map(|c| c.raw)
            .fold(0, usize::saturating_add);
        if raw_seen.saturating_add(class_raw) > raw_cap {
            return Staged {
                items,
                skipped: cells.len() - i,
            };
        }
        let mut batch = Vec::new();
        for cell in &cells[i..end] {
            let room = max - items.len() - batch.len();
            batch.extend(expand(&cell.key, room));
            if items.len() + batch.len() > max {
                return Staged {
                    items,
                    skipped: cells.len() - i,
                };
            }
        }
        raw_seen += class_raw;
        items.extend(batch);
        i = end;
    }
    Staged { items, skipped: 0 }
}
