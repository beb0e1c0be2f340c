//! Kernel pairs of the two legs of a span and the pullback of their
//! projections: `D(d)`, `D(c)` and `D(d,c)`, whose elements are the triples
//! `(x, y, z)` with `d x = d y` and `c y = c z`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::limits::{kernel_pair, mediate_pullback, pullback};
use crate::structures::{ReflexiveGraph, Span, Validate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelPairData {
    pub span: Span,
    #[serde(rename = "Dd")]
    pub dd: ObjId,
    #[serde(rename = "Dc")]
    pub dc: ObjId,
    #[serde(rename = "Ddc")]
    pub ddc: ObjId,
    pub d1: MorId,
    pub d2: MorId,
    pub c1: MorId,
    pub c2: MorId,
    #[serde(rename = "Delta_d")]
    pub delta_d: MorId,
    #[serde(rename = "Delta_c")]
    pub delta_c: MorId,
    pub p1: MorId,
    pub p2: MorId,
    pub e1: MorId,
    pub e2: MorId,
    /// `⟨Δ, Δ⟩: D -> D(d,c)`.
    pub delta: MorId,
}

pub fn kernel_pair_construction(cat: &FinCategory, span: &Span) -> Result<KernelPairData> {
    let report = span.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    let one = cat.id(span.apex);
    let kd = kernel_pair(cat, span.d)?;
    let kc = kernel_pair(cat, span.c)?;
    let delta_d = mediate_pullback(cat, &kd, one, one)?;
    let delta_c = mediate_pullback(cat, &kc, one, one)?;
    let pdc = pullback(cat, kd.pi2, kc.pi1)?;
    let e1 = mediate_pullback(cat, &pdc, cat.id(kd.apex), cat.comp(delta_c, kd.pi2))?;
    let e2 = mediate_pullback(cat, &pdc, cat.comp(delta_d, kc.pi1), cat.id(kc.apex))?;
    let delta = mediate_pullback(cat, &pdc, delta_d, delta_c)?;
    Ok(KernelPairData {
        span: *span,
        dd: kd.apex,
        dc: kc.apex,
        ddc: pdc.apex,
        d1: kd.pi1,
        d2: kd.pi2,
        c1: kc.pi1,
        c2: kc.pi2,
        delta_d,
        delta_c,
        p1: pdc.pi1,
        p2: pdc.pi2,
        e1,
        e2,
        delta,
    })
}

/// `(D(d,c), D, d1·p1, ⟨Δ,Δ⟩, c2·p2)`.
pub fn k1(cat: &FinCategory, span: &Span) -> Result<ReflexiveGraph> {
    let kp = kernel_pair_construction(cat, span)?;
    Ok(k1_of(cat, &kp))
}

pub fn k1_of(cat: &FinCategory, kp: &KernelPairData) -> ReflexiveGraph {
    ReflexiveGraph {
        c1: kp.ddc,
        c0: kp.span.apex,
        d: cat.comp(kp.d1, kp.p1),
        c: cat.comp(kp.c2, kp.p2),
        e: kp.delta,
    }
}

/// Carriers as lexicographically ordered tuple lists and every arrow as a
/// function table over those positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelPairSets {
    pub dd: Vec<(u32, u32)>,
    pub dc: Vec<(u32, u32)>,
    pub ddc: Vec<(u32, u32, u32)>,
    pub d1: Vec<u32>,
    pub d2: Vec<u32>,
    pub c1: Vec<u32>,
    pub c2: Vec<u32>,
    pub delta_d: Vec<u32>,
    pub delta_c: Vec<u32>,
    pub p1: Vec<u32>,
    pub p2: Vec<u32>,
    pub e1: Vec<u32>,
    pub e2: Vec<u32>,
    pub delta: Vec<u32>,
    pub d1p1: Vec<u32>,
    pub c2p2: Vec<u32>,
}

/// Direct set-level construction from the leg tables of a concrete span.
pub fn element_oracle(d: &[u32], c: &[u32]) -> KernelPairSets {
    let n = d.len() as u32;
    let mut dd = Vec::new();
    let mut dc = Vec::new();
    let mut ddc = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if d[x as usize] == d[y as usize] {
                dd.push((x, y));
            }
            if c[x as usize] == c[y as usize] {
                dc.push((x, y));
            }
            for z in 0..n {
                if d[x as usize] == d[y as usize] && c[y as usize] == c[z as usize] {
                    ddc.push((x, y, z));
                }
            }
        }
    }
    let pos2 = |v: &[(u32, u32)], t: (u32, u32)| v.iter().position(|&u| u == t).unwrap() as u32;
    let pos3 = |t: (u32, u32, u32)| ddc.iter().position(|&u| u == t).unwrap() as u32;
    KernelPairSets {
        d1: dd.iter().map(|t| t.0).collect(),
        d2: dd.iter().map(|t| t.1).collect(),
        c1: dc.iter().map(|t| t.0).collect(),
        c2: dc.iter().map(|t| t.1).collect(),
        delta_d: (0..n).map(|y| pos2(&dd, (y, y))).collect(),
        delta_c: (0..n).map(|y| pos2(&dc, (y, y))).collect(),
        p1: ddc.iter().map(|&(x, y, _)| pos2(&dd, (x, y))).collect(),
        p2: ddc.iter().map(|&(_, y, z)| pos2(&dc, (y, z))).collect(),
        e1: dd.iter().map(|&(x, y)| pos3((x, y, y))).collect(),
        e2: dc.iter().map(|&(y, z)| pos3((y, y, z))).collect(),
        delta: (0..n).map(|y| pos3((y, y, y))).collect(),
        d1p1: ddc.iter().map(|t| t.0).collect(),
        c2p2: ddc.iter().map(|t| t.2).collect(),
        dd,
        dc,
        ddc,
    }
}

/// Reads a construction in a concrete category back as tuple lists, with
/// function tables re-indexed to the lexicographic positions.
pub fn concrete_tables(cat: &FinCategory, kp: &KernelPairData) -> Result<KernelPairSets> {
    if !cat.is_concrete() {
        return Err(Error::InvalidStructure("category is not concrete".into()));
    }
    let map = |f: MorId| cat.map(f).unwrap();
    let pairs = |a: MorId, b: MorId| -> Vec<(u32, u32)> {
        map(a).iter().copied().zip(map(b).iter().copied()).collect()
    };
    let dd_raw = pairs(kp.d1, kp.d2);
    let dc_raw = pairs(kp.c1, kp.c2);
    let p1 = map(kp.p1);
    let p2 = map(kp.p2);
    let ddc_raw: Vec<(u32, u32, u32)> = (0..p1.len())
        .map(|t| {
            let (x, y) = dd_raw[p1[t] as usize];
            let (_, z) = dc_raw[p2[t] as usize];
            (x, y, z)
        })
        .collect();
    let (dd, dd_pos) = canonical(&dd_raw);
    let (dc, dc_pos) = canonical(&dc_raw);
    let (ddc, ddc_pos) = canonical(&ddc_raw);
    // Table of `f` with domain positions reordered by `dom` and values by `cod`.
    let retable = |f: MorId, dom: Option<&[u32]>, cod: Option<&[u32]>| -> Vec<u32> {
        let m = map(f);
        let mut out = vec![0; m.len()];
        for (i, &v) in m.iter().enumerate() {
            let i2 = dom.map_or(i, |p| p[i] as usize);
            out[i2] = cod.map_or(v, |p| p[v as usize]);
        }
        out
    };
    Ok(KernelPairSets {
        d1: retable(kp.d1, Some(&dd_pos), None),
        d2: retable(kp.d2, Some(&dd_pos), None),
        c1: retable(kp.c1, Some(&dc_pos), None),
        c2: retable(kp.c2, Some(&dc_pos), None),
        delta_d: retable(kp.delta_d, None, Some(&dd_pos)),
        delta_c: retable(kp.delta_c, None, Some(&dc_pos)),
        p1: retable(kp.p1, Some(&ddc_pos), Some(&dd_pos)),
        p2: retable(kp.p2, Some(&ddc_pos), Some(&dc_pos)),
        e1: retable(kp.e1, Some(&dd_pos), Some(&ddc_pos)),
        e2: retable(kp.e2, Some(&dc_pos), Some(&ddc_pos)),
        delta: retable(kp.delta, None, Some(&ddc_pos)),
        d1p1: retable(cat.comp(kp.d1, kp.p1), Some(&ddc_pos), None),
        c2p2: retable(cat.comp(kp.c2, kp.p2), Some(&ddc_pos), None),
        dd,
        dc,
        ddc,
    })
}

/// Sorted copy of `raw` and, for each raw position, its sorted position.
pub(crate) fn canonical<T: Ord + Copy + std::hash::Hash>(raw: &[T]) -> (Vec<T>, Vec<u32>) {
    let mut sorted = raw.to_vec();
    sorted.sort_unstable();
    let index: HashMap<T, u32> = sorted
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i as u32))
        .collect();
    let pos = raw.iter().map(|t| index[t]).collect();
    (sorted, pos)
}
