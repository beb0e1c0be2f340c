//! Finite binary constraint problems: choose one value per variable so that
//! every arc admits the chosen pair. Arc consistency, then backtracking in
//! variable order with the lowest value first.

use std::collections::{HashSet, VecDeque};

pub(crate) struct Arc {
    pub from: usize,
    pub to: usize,
    /// Admissible `(value at from, value at to)` pairs.
    pub allowed: HashSet<(u32, u32)>,
}

pub(crate) enum Outcome {
    Solved(Vec<u32>),
    /// No choice exists; the arc whose pruning emptied a domain, if any.
    Unsatisfiable {
        culprit: Option<usize>,
    },
}

pub(crate) fn solve(domains: &[Vec<u32>], arcs: &[Arc]) -> Outcome {
    let n = domains.len();
    let mut doms: Vec<Vec<u32>> = domains.to_vec();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in arcs.iter().enumerate() {
        incident[a.from].push(k);
        if a.to != a.from {
            incident[a.to].push(k);
        }
    }
    if let Some(culprit) = propagate(&mut doms, arcs, &incident, (0..arcs.len()).collect()) {
        return Outcome::Unsatisfiable {
            culprit: Some(culprit),
        };
    }
    if doms.iter().any(|d| d.is_empty()) {
        return Outcome::Unsatisfiable { culprit: None };
    }
    match search(&doms, arcs, &incident, 0) {
        Some(sol) => Outcome::Solved(sol),
        None => Outcome::Unsatisfiable { culprit: None },
    }
}

/// Removes unsupported values; returns the arc that emptied a domain.
fn propagate(
    doms: &mut [Vec<u32>],
    arcs: &[Arc],
    incident: &[Vec<usize>],
    queue: Vec<usize>,
) -> Option<usize> {
    let mut queue: VecDeque<usize> = queue.into();
    let mut queued = vec![false; arcs.len()];
    for &k in &queue {
        queued[k] = true;
    }
    while let Some(k) = queue.pop_front() {
        queued[k] = false;
        let a = &arcs[k];
        let mut changed = Vec::new();
        if a.from == a.to {
            let before = doms[a.from].len();
            doms[a.from].retain(|&x| a.allowed.contains(&(x, x)));
            if doms[a.from].len() != before {
                changed.push(a.from);
            }
        } else {
            let to = doms[a.to].clone();
            let before = doms[a.from].len();
            doms[a.from].retain(|&x| to.iter().any(|&y| a.allowed.contains(&(x, y))));
            if doms[a.from].len() != before {
                changed.push(a.from);
            }
            let from = doms[a.from].clone();
            let before = doms[a.to].len();
            doms[a.to].retain(|&y| from.iter().any(|&x| a.allowed.contains(&(x, y))));
            if doms[a.to].len() != before {
                changed.push(a.to);
            }
        }
        for v in changed {
            if doms[v].is_empty() {
                return Some(k);
            }
            for &j in &incident[v] {
                if j != k && !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    None
}

fn search(
    doms: &[Vec<u32>],
    arcs: &[Arc],
    incident: &[Vec<usize>],
    var: usize,
) -> Option<Vec<u32>> {
    let Some(v) = (var..doms.len()).find(|&v| doms[v].len() > 1) else {
        return Some(doms.iter().map(|d| d[0]).collect());
    };
    for &x in &doms[v] {
        let mut next = doms.to_vec();
        next[v] = vec![x];
        if propagate(&mut next, arcs, incident, incident[v].clone()).is_none() {
            if let Some(sol) = search(&next, arcs, incident, v + 1) {
                return Some(sol);
            }
        }
    }
    None
}
