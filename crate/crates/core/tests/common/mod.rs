#![allow(dead_code)]

use malcheck_core::algebra::sets::{relation_workspace, span_workspace, SpanWorkspace};
use malcheck_core::algebra::{build_category_closure, stock_algebra, ClosureBudget, ClosureResult};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Leg tables of a random span with every carrier of size at most 6.
#[derive(Clone, Debug)]
pub struct RandomSpan {
    pub x: usize,
    pub y: usize,
    pub d: Vec<u32>,
    pub c: Vec<u32>,
}

pub fn random_spans(seed: u64, count: usize, max_apex: usize) -> Vec<RandomSpan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = rng.gen_range(1..=4);
            let y = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=max_apex);
            let d = (0..n).map(|_| rng.gen_range(0..x as u32)).collect();
            let c = (0..n).map(|_| rng.gen_range(0..y as u32)).collect();
            RandomSpan { x, y, d, c }
        })
        .collect()
}

pub fn workspace(s: &RandomSpan) -> SpanWorkspace {
    span_workspace(s.x, s.y, &s.d, &s.c).expect("legs fit")
}

pub fn closure(names: &[&str], depth: usize, carrier: usize) -> ClosureResult {
    let gens: Vec<_> = names
        .iter()
        .map(|&n| (n.to_string(), stock_algebra(n).unwrap()))
        .collect();
    build_category_closure(
        &gens,
        ClosureBudget {
            max_depth: depth,
            max_carrier: carrier,
            ..Default::default()
        },
    )
    .unwrap()
}

/// Sizes of the two sets and the pairs of the relation.
pub type RandomRelation = (usize, usize, Vec<(u32, u32)>);

/// Random nonempty relations between sets of size at most 3, as sorted pairs.
pub fn random_relations(seed: u64, count: usize, max_pairs: usize) -> Vec<RandomRelation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = rng.gen_range(1..=3);
            let y = rng.gen_range(1..=3);
            let want = rng.gen_range(1..=max_pairs.min(x * y));
            let mut all: Vec<(u32, u32)> = (0..x as u32)
                .flat_map(|a| (0..y as u32).map(move |b| (a, b)))
                .collect();
            all.shuffle(&mut rng);
            all.truncate(want);
            all.sort_unstable();
            (x, y, all)
        })
        .collect()
}

pub fn relation_workspace_of(
    x: usize,
    y: usize,
    pairs: &[(u32, u32)],
    max: usize,
) -> Option<SpanWorkspace> {
    let d: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let c: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    relation_workspace(x, y, &d, &c, max).ok()
}
