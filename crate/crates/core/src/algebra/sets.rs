//! Finite sets and functions assembled into small concrete categories, with
//! pullbacks and equalizers added as canonical tuple carriers.

use super::limits::{self, AlgEqualizer, AlgPullback};
use super::{FinAlgebra, Signature};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Morphism, ObjId, Object};
use crate::structures::Span;

#[derive(Clone, Debug, Default)]
pub struct SetDiagram {
    sizes: Vec<usize>,
    maps: Vec<(usize, usize, Vec<u32>)>,
}

fn set(n: usize) -> FinAlgebra {
    FinAlgebra {
        signature: Signature::empty(),
        preset: None,
        size: n,
        tables: Vec::new(),
    }
}

impl SetDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_set(&mut self, size: usize) -> usize {
        self.sizes.push(size);
        self.sizes.len() - 1
    }

    pub fn add_map(&mut self, dom: usize, cod: usize, map: Vec<u32>) -> usize {
        assert_eq!(map.len(), self.sizes[dom], "map does not fit its domain");
        self.maps.push((dom, cod, map));
        self.maps.len() - 1
    }

    pub fn map(&self, f: usize) -> &[u32] {
        &self.maps[f].2
    }

    pub fn dom(&self, f: usize) -> usize {
        self.maps[f].0
    }

    pub fn cod(&self, f: usize) -> usize {
        self.maps[f].1
    }

    /// `g∘f` as a new map.
    pub fn compose(&mut self, g: usize, f: usize) -> usize {
        let table = self.maps[f]
            .2
            .iter()
            .map(|&x| self.maps[g].2[x as usize])
            .collect();
        self.add_map(self.maps[f].0, self.maps[g].1, table)
    }

    fn is_identity(x: usize, cod: usize, t: &[u32]) -> bool {
        x == cod && t.iter().enumerate().all(|(i, &v)| v == i as u32)
    }

    /// A map `x -> cod` with table `t`, counting identities.
    fn has_map(&self, x: usize, cod: usize, t: &[u32]) -> bool {
        Self::is_identity(x, cod, t)
            || self
                .maps
                .iter()
                .any(|(d, c, m)| *d == x && *c == cod && m == t)
    }

    fn find_or_add(&mut self, x: usize, cod: usize, t: &[u32]) -> usize {
        match self
            .maps
            .iter()
            .position(|(d, c, m)| *d == x && *c == cod && m == t)
        {
            Some(i) => i,
            None => self.add_map(x, cod, t.to_vec()),
        }
    }

    /// The first set of size `n` carrying maps with the given tables, as the
    /// concrete limit lookup would find it.
    fn existing(&mut self, n: usize, legs: &[(usize, &[u32])]) -> Option<(usize, Vec<usize>)> {
        let x = (0..self.sizes.len()).find(|&x| {
            self.sizes[x] == n && legs.iter().all(|&(cod, t)| self.has_map(x, cod, t))
        })?;
        Some((
            x,
            legs.iter()
                .map(|&(cod, t)| self.find_or_add(x, cod, t))
                .collect(),
        ))
    }

    /// Adds the canonical pullback of `f` and `g` unless a set already carries
    /// its projections; returns `(apex, pi1, pi2)`.
    pub fn pullback(&mut self, f: usize, g: usize) -> (usize, usize, usize, AlgPullback) {
        let (a, b) = (self.maps[f].0, self.maps[g].0);
        let pb = limits::pullback(
            &set(self.sizes[a]),
            &set(self.sizes[b]),
            &self.maps[f].2,
            &self.maps[g].2,
        )
        .expect("sets");
        if let Some((apex, ms)) = self.existing(pb.pairs.len(), &[(a, &pb.pi1), (b, &pb.pi2)]) {
            return (apex, ms[0], ms[1], pb);
        }
        let apex = self.add_set(pb.pairs.len());
        let pi1 = self.add_map(apex, a, pb.pi1.clone());
        let pi2 = self.add_map(apex, b, pb.pi2.clone());
        (apex, pi1, pi2, pb)
    }

    /// Adds the canonical equalizer of `f` and `g` unless a set already
    /// carries its inclusion; returns `(apex, incl)`.
    pub fn equalizer(&mut self, f: usize, g: usize) -> (usize, usize, AlgEqualizer) {
        let a = self.maps[f].0;
        let eq =
            limits::equalizer(&set(self.sizes[a]), &self.maps[f].2, &self.maps[g].2).expect("sets");
        if let Some((apex, ms)) = self.existing(eq.incl.len(), &[(a, &eq.incl)]) {
            return (apex, ms[0], eq);
        }
        let apex = self.add_set(eq.incl.len());
        let incl = self.add_map(apex, a, eq.incl.clone());
        (apex, incl, eq)
    }

    /// Category generated by the sets and maps, closed under composition.
    pub fn build(&self) -> Result<FinCategory> {
        let objects = self
            .sizes
            .iter()
            .map(|&s| Object {
                label: None,
                carrier: Some(s),
            })
            .collect();
        let morphisms = self
            .maps
            .iter()
            .map(|(d, c, m)| Morphism {
                dom: ObjId(*d as u32),
                cod: ObjId(*c as u32),
                label: None,
                map: Some(m.clone()),
            })
            .collect();
        FinCategory::generated(objects, morphisms)
    }
}

/// A span of finite sets inside the category generated by its kernel pairs,
/// `D(d,c)`, the split square built from the span and every mediating map
/// those constructions call for.
#[derive(Clone, Debug)]
pub struct SpanWorkspace {
    pub category: FinCategory,
    pub span: Span,
}

/// `d: D -> X` and `c: D -> Y` given as tables over `{0..x}` and `{0..y}`.
pub fn span_workspace(x: usize, y: usize, d: &[u32], c: &[u32]) -> Result<SpanWorkspace> {
    build_workspace(x, y, d, c, None)
}

/// The span workspace together with every map `p: D(d,c) -> D` with
/// `d·p = d·c2·p2`, so the remaining pregroupoid laws decide among them.
/// Fails when there would be more than `max_candidates` such maps.
pub fn relation_workspace(
    x: usize,
    y: usize,
    d: &[u32],
    c: &[u32],
    max_candidates: usize,
) -> Result<SpanWorkspace> {
    build_workspace(x, y, d, c, Some(max_candidates))
}

fn build_workspace(
    x: usize,
    y: usize,
    d: &[u32],
    c: &[u32],
    candidates: Option<usize>,
) -> Result<SpanWorkspace> {
    if d.len() != c.len()
        || d.iter().any(|&v| v as usize >= x)
        || c.iter().any(|&v| v as usize >= y)
    {
        return Err(Error::InvalidStructure(
            "span legs do not fit their sets".into(),
        ));
    }
    let mut g = SetDiagram::new();
    let (sx, sy, sd) = (g.add_set(x), g.add_set(y), g.add_set(d.len()));
    let md = g.add_map(sd, sx, d.to_vec());
    let mc = g.add_map(sd, sy, c.to_vec());
    let (dd, d1, d2, kd) = g.pullback(md, md);
    let (dc, c1, _, kc) = g.pullback(mc, mc);
    let (ddc, _, _, pdc) = g.pullback(d2, c1);
    let ident: Vec<u32> = (0..d.len() as u32).collect();
    let delta_d = kd.mediate(&ident, &ident).expect("diagonal");
    let delta_c = kc.mediate(&ident, &ident).expect("diagonal");
    let on = |f: &[u32], v: &[u32]| -> Vec<u32> { v.iter().map(|&i| f[i as usize]).collect() };
    let dd_id: Vec<u32> = (0..kd.pairs.len() as u32).collect();
    let dc_id: Vec<u32> = (0..kc.pairs.len() as u32).collect();
    let e1 = pdc
        .mediate(&dd_id, &on(&delta_c, &kd.pi2))
        .expect("section");
    let e2 = pdc
        .mediate(&on(&delta_d, &kc.pi1), &dc_id)
        .expect("section");
    let delta = pdc.mediate(&delta_d, &delta_c).expect("diagonal");
    g.add_map(sd, dd, delta_d.clone());
    g.add_map(sd, dc, delta_c.clone());
    g.add_map(dd, ddc, e1);
    g.add_map(dc, ddc, e2);
    g.add_map(sd, ddc, delta);
    // The split square over (d2, Δ, c1, Δ).
    let h = g.compose(mc, d2);
    let (kh_apex, h1, h2, kh) = g.pullback(h, h);
    let cd1 = g.compose(mc, d1);
    let (l, r) = (g.compose(cd1, h1), g.compose(cd1, h2));
    let (e, _, eq) = g.equalizer(l, r);
    let p2_tbl = kc
        .mediate(
            &on(&kd.pi2, &on(g.map(h1), &eq.incl)),
            &on(&kd.pi2, &on(g.map(h2), &eq.incl)),
        )
        .expect("pairs of the kernel pair of c");
    g.add_map(e, dc, p2_tbl);
    let diag = kh.mediate(&dd_id, &dd_id).expect("diagonal");
    g.add_map(dd, kh_apex, diag.clone());
    g.add_map(dd, e, eq.mediate(&diag).expect("equalized"));
    let pair = kh
        .mediate(&on(&delta_d, &kc.pi1), &on(&delta_d, &kc.pi2))
        .expect("pairs");
    g.add_map(dc, kh_apex, pair.clone());
    g.add_map(dc, e, eq.mediate(&pair).expect("equalized"));
    if let Some(max) = candidates {
        // Admissible images of (a, b, z) are the elements over d(z).
        let choices: Vec<Vec<u32>> = pdc
            .pairs
            .iter()
            .map(|&(_, j)| {
                let z = kc.pairs[j as usize].1;
                (0..d.len() as u32)
                    .filter(|&w| d[w as usize] == d[z as usize])
                    .collect()
            })
            .collect();
        let total = choices
            .iter()
            .try_fold(1usize, |n, c| n.checked_mul(c.len()).filter(|&n| n <= max));
        let Some(total) = total else {
            return Err(Error::InvalidStructure("too many candidate maps".into()));
        };
        let mut idx = vec![0usize; choices.len()];
        for _ in 0..total {
            g.add_map(
                ddc,
                sd,
                idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect(),
            );
            for (i, c) in idx.iter_mut().zip(&choices) {
                *i += 1;
                if *i < c.len() {
                    break;
                }
                *i = 0;
            }
        }
    }
    let category = g.build()?;
    let leg = |f: usize| {
        category
            .lookup_map(ObjId(sd as u32), ObjId(g.cod(f) as u32), g.map(f))
            .expect("generator")
    };
    let span = Span::new(ObjId(sd as u32), leg(md), leg(mc));
    Ok(SpanWorkspace { category, span })
}
