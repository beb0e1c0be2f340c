//! Products, subalgebras, pullbacks and equalizers with canonical carriers:
//! tuples in lexicographic order, subsets in ascending order.

use std::collections::HashMap;

use super::homs::generated;
use super::FinAlgebra;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgPullback {
    pub algebra: FinAlgebra,
    pub pairs: Vec<(u32, u32)>,
    pub pi1: Vec<u32>,
    pub pi2: Vec<u32>,
}

impl AlgPullback {
    /// The map `z ↦ (u1 z, u2 z)`, if every pair lies in the carrier.
    pub fn mediate(&self, u1: &[u32], u2: &[u32]) -> Option<Vec<u32>> {
        let index: HashMap<(u32, u32), u32> = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i as u32))
            .collect();
        u1.iter()
            .zip(u2)
            .map(|(&x, &y)| index.get(&(x, y)).copied())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgEqualizer {
    pub algebra: FinAlgebra,
    pub incl: Vec<u32>,
}

impl AlgEqualizer {
    pub fn mediate(&self, u: &[u32]) -> Option<Vec<u32>> {
        let index: HashMap<u32, u32> = self
            .incl
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        u.iter().map(|x| index.get(x).copied()).collect()
    }
}

fn same_signature(a: &FinAlgebra, b: &FinAlgebra) -> Result<()> {
    if a.signature != b.signature {
        return Err(Error::MalformedAlgebra("signatures differ".into()));
    }
    Ok(())
}

/// Algebra on a set of pairs closed under the componentwise operations.
fn on_pairs(a: &FinAlgebra, b: &FinAlgebra, pairs: &[(u32, u32)]) -> FinAlgebra {
    let index: HashMap<(u32, u32), u32> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u32))
        .collect();
    let size = pairs.len();
    let tables = a
        .signature
        .ops
        .iter()
        .enumerate()
        .map(|(k, op)| {
            let mut xs = vec![0u32; op.arity];
            let mut ys = vec![0u32; op.arity];
            (0..size.pow(op.arity as u32))
                .map(|mut code| {
                    for i in (0..op.arity).rev() {
                        let (x, y) = pairs[code % size];
                        xs[i] = x;
                        ys[i] = y;
                        code /= size;
                    }
                    index[&(a.apply(k, &xs), b.apply(k, &ys))]
                })
                .collect()
        })
        .collect();
    FinAlgebra {
        signature: a.signature.clone(),
        preset: a.preset,
        size,
        tables,
    }
}

pub fn product(a: &FinAlgebra, b: &FinAlgebra) -> Result<AlgPullback> {
    same_signature(a, b)?;
    let pairs: Vec<(u32, u32)> = (0..a.size as u32)
        .flat_map(|x| (0..b.size as u32).map(move |y| (x, y)))
        .collect();
    Ok(AlgPullback {
        algebra: on_pairs(a, b, &pairs),
        pi1: pairs.iter().map(|p| p.0).collect(),
        pi2: pairs.iter().map(|p| p.1).collect(),
        pairs,
    })
}

/// `{(x, y) : f x = g y}` for homomorphisms `f: a -> c` and `g: b -> c`.
pub fn pullback(a: &FinAlgebra, b: &FinAlgebra, f: &[u32], g: &[u32]) -> Result<AlgPullback> {
    same_signature(a, b)?;
    if f.len() != a.size || g.len() != b.size {
        return Err(Error::MalformedAlgebra(
            "map does not fit its domain".into(),
        ));
    }
    let pairs: Vec<(u32, u32)> = (0..a.size as u32)
        .flat_map(|x| {
            (0..b.size as u32)
                .filter(move |&y| f[x as usize] == g[y as usize])
                .map(move |y| (x, y))
        })
        .collect();
    Ok(AlgPullback {
        algebra: on_pairs(a, b, &pairs),
        pi1: pairs.iter().map(|p| p.0).collect(),
        pi2: pairs.iter().map(|p| p.1).collect(),
        pairs,
    })
}

/// `{x : f x = g x}` for parallel homomorphisms out of `a`.
pub fn equalizer(a: &FinAlgebra, f: &[u32], g: &[u32]) -> Result<AlgEqualizer> {
    if f.len() != a.size || g.len() != a.size {
        return Err(Error::MalformedAlgebra(
            "map does not fit its domain".into(),
        ));
    }
    let incl: Vec<u32> = (0..a.size as u32)
        .filter(|&x| f[x as usize] == g[x as usize])
        .collect();
    Ok(AlgEqualizer {
        algebra: a.restrict(&incl),
        incl,
    })
}

/// Subalgebra generated by `seed`, with its inclusion.
pub fn subalgebra(a: &FinAlgebra, seed: &[u32]) -> AlgEqualizer {
    let incl = generated(a, seed);
    AlgEqualizer {
        algebra: a.restrict(&incl),
        incl,
    }
}
