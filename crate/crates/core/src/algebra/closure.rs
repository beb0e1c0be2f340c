//! Budgeted closure of a set of algebras under pullbacks and equalizers,
//! realized as the full subcategory on the resulting algebras.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::homs::{count_homs_upto, enumerate_homs};
use super::limits::{equalizer, pullback};
use super::FinAlgebra;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Morphism, ObjId, Object};
use crate::limits::pullback_pairs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBudget {
    pub max_objects: usize,
    pub max_carrier: usize,
    /// Rounds of limit construction.
    pub max_depth: usize,
    pub max_morphisms: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_objects: 48,
            max_carrier: 16,
            max_depth: 2,
            max_morphisms: 4000,
        }
    }
}

/// A limit of existing objects that is not itself an object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LimitRequest {
    /// `"pullback"` or `"equalizer"`.
    pub kind: String,
    /// Objects of the diagram: `[A, B, C]` for a cospan, `[A, B]` for a pair.
    pub over: Vec<ObjId>,
    pub size: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "missing", rename_all = "snake_case")]
pub enum ClosureStatus {
    Closed,
    Truncated(Vec<LimitRequest>),
}

impl ClosureStatus {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureStatus::Closed)
    }
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub category: FinCategory,
    pub algebras: Vec<FinAlgebra>,
    pub status: ClosureStatus,
    /// Distinct missing limits beyond those listed in `status`.
    pub unlisted_missing: usize,
}

const MAX_LISTED: usize = 200;

struct State {
    algebras: Vec<FinAlgebra>,
    labels: Vec<String>,
    index: HashMap<FinAlgebra, usize>,
    homs: HashMap<(usize, usize), Vec<Vec<u32>>>,
    morphisms: usize,
}

impl State {
    fn homs(&mut self, a: usize, b: usize) -> &Vec<Vec<u32>> {
        let (x, y) = (&self.algebras[a], &self.algebras[b]);
        self.homs
            .entry((a, b))
            .or_insert_with(|| enumerate_homs(x, y))
    }

    /// Morphisms gained by adding `alg` as a new object.
    /// Whether adding `alg` keeps the morphism count within `max`.
    fn fits(&self, alg: &FinAlgebra, max: usize) -> bool {
        let mut room = max.saturating_sub(self.morphisms);
        let mut take = |a: &FinAlgebra, b: &FinAlgebra| match count_homs_upto(a, b, room) {
            Some(n) => {
                room -= n;
                true
            }
            None => false,
        };
        take(alg, alg) && self.algebras.iter().all(|o| take(alg, o) && take(o, alg))
    }

    fn add(&mut self, alg: FinAlgebra, label: String) {
        let i = self.algebras.len();
        self.index.insert(alg.clone(), i);
        self.algebras.push(alg);
        self.labels.push(label);
        for j in 0..=i {
            self.morphisms += self.homs(i, j).len();
            if j != i {
                self.morphisms += self.homs(j, i).len();
            }
        }
    }
}

/// Candidate limits of the current objects that are not yet present, keyed by
/// algebra, each with the first diagram producing it; oversize limits are only
/// described.
fn limit_round(
    st: &mut State,
    budget: &ClosureBudget,
) -> (Vec<(FinAlgebra, LimitRequest)>, Vec<LimitRequest>) {
    let n = st.algebras.len();
    let mut fresh: HashMap<FinAlgebra, LimitRequest> = HashMap::new();
    let mut oversize: BTreeSet<LimitRequest> = BTreeSet::new();
    // Cospans differing by an automorphism of the corner share a carrier.
    let mut seen: HashSet<(usize, usize, Vec<u32>, Vec<u32>)> = HashSet::new();
    for c in 0..n {
        let into: Vec<(usize, Vec<u32>)> = (0..n)
            .flat_map(|a| st.homs(a, c).clone().into_iter().map(move |h| (a, h)))
            .collect();
        let csize = st.algebras[c].size;
        for (fi, (a, f)) in into.iter().enumerate() {
            let mut fib_f = vec![0usize; csize];
            for &x in f {
                fib_f[x as usize] += 1;
            }
            // (f, g) and (g, f) give isomorphic limits; the lower index is kept.
            for (b, g) in &into[fi..] {
                let size: usize = g.iter().map(|&y| fib_f[y as usize]).sum();
                let request = |reason: &str| LimitRequest {
                    kind: "pullback".into(),
                    over: vec![ObjId(*a as u32), ObjId(*b as u32), ObjId(c as u32)],
                    size,
                    reason: reason.into(),
                };
                if size > budget.max_carrier {
                    oversize.insert(request("carrier budget"));
                    continue;
                }
                let (pi1, pi2): (Vec<u32>, Vec<u32>) = pullback_pairs(f, g).into_iter().unzip();
                if !seen.insert((*a, *b, pi1, pi2)) {
                    continue;
                }
                let pb =
                    pullback(&st.algebras[*a], &st.algebras[*b], f, g).expect("same signature");
                if !st.index.contains_key(&pb.algebra) {
                    fresh
                        .entry(pb.algebra)
                        .or_insert_with(|| request("not yet an object"));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let hs = st.homs(a, b).clone();
            for (i, f) in hs.iter().enumerate() {
                for g in &hs[i + 1..] {
                    let incl: Vec<u32> = (0..f.len() as u32)
                        .filter(|&x| f[x as usize] == g[x as usize])
                        .collect();
                    if !seen.insert((a, a, incl, Vec::new())) {
                        continue;
                    }
                    let eq = equalizer(&st.algebras[a], f, g).expect("fits");
                    if !st.index.contains_key(&eq.algebra) {
                        let size = eq.algebra.size;
                        fresh.entry(eq.algebra).or_insert_with(|| LimitRequest {
                            kind: "equalizer".into(),
                            over: vec![ObjId(a as u32), ObjId(b as u32)],
                            size,
                            reason: "not yet an object".into(),
                        });
                    }
                }
            }
        }
    }
    let mut fresh: Vec<(FinAlgebra, LimitRequest)> = fresh.into_iter().collect();
    fresh.sort_by(|x, y| (x.0.size, &x.0.tables).cmp(&(y.0.size, &y.0.tables)));
    (fresh, oversize.into_iter().collect())
}

/// `f` with its values renumbered by first occurrence, which identifies its
/// kernel.
fn kernel_key(f: &[u32]) -> Vec<u32> {
    let mut seen = HashMap::new();
    f.iter()
        .map(|x| {
            let n = seen.len() as u32;
            *seen.entry(*x).or_insert(n)
        })
        .collect()
}

/// Kernel pairs `D(d,d)`, `D(c,c)` and their pullback `D(d,c)` for every
/// relation `(R; d, c)` between current objects, smallest first. These are
/// the objects the reflexive graph of a relation is built from.
fn kernel_pair_round(st: &mut State, budget: &ClosureBudget) -> Vec<FinAlgebra> {
    let n = st.algebras.len();
    let mut fresh: HashSet<FinAlgebra> = HashSet::new();
    let mut done: HashSet<(usize, Vec<u32>, Vec<u32>)> = HashSet::new();
    for r in 0..n {
        let rel = st.algebras[r].clone();
        if rel.size < 2 {
            continue;
        }
        let mut kernels: BTreeSet<Vec<u32>> = BTreeSet::new();
        for x in 0..n {
            kernels.extend(st.homs(r, x).iter().map(|h| kernel_key(h)));
        }
        let kernels: Vec<Vec<u32>> = kernels.into_iter().collect();
        for kd in &kernels {
            for kc in &kernels {
                let mut pairs: Vec<(u32, u32)> =
                    kd.iter().copied().zip(kc.iter().copied()).collect();
                pairs.sort_unstable();
                pairs.dedup();
                if pairs.len() < rel.size || !done.insert((r, kd.clone(), kc.clone())) {
                    continue;
                }
                let ddd = pullback(&rel, &rel, kd, kd).expect("same signature");
                let dcc = pullback(&rel, &rel, kc, kc).expect("same signature");
                let fib: usize = ddd
                    .pi2
                    .iter()
                    .map(|&y| dcc.pi1.iter().filter(|&&z| z == y).count())
                    .sum();
                if fib > budget.max_carrier {
                    continue;
                }
                let ddc = pullback(&ddd.algebra, &dcc.algebra, &ddd.pi2, &dcc.pi1)
                    .expect("same signature");
                for alg in [ddd.algebra, dcc.algebra, ddc.algebra] {
                    if !st.index.contains_key(&alg) {
                        fresh.insert(alg);
                    }
                }
            }
        }
    }
    let mut fresh: Vec<FinAlgebra> = fresh.into_iter().collect();
    fresh.sort_by(|x, y| (x.size, &x.tables).cmp(&(y.size, &y.tables)));
    fresh
}

/// Full concrete subcategory on the generators and every pullback and
/// equalizer reachable within the budget, deduplicated by canonical tables.
/// A last round adds the kernel-pair objects of relations.
pub fn build_category_closure(
    generators: &[(String, FinAlgebra)],
    budget: ClosureBudget,
) -> Result<ClosureResult> {
    let mut st = State {
        algebras: Vec::new(),
        labels: Vec::new(),
        index: HashMap::new(),
        homs: HashMap::new(),
        morphisms: 0,
    };
    if let Some((_, first)) = generators.first() {
        if generators
            .iter()
            .any(|(_, g)| g.signature != first.signature)
        {
            return Err(Error::MalformedAlgebra(
                "generators do not share a signature".into(),
            ));
        }
    }
    for (name, alg) in generators {
        if alg.size > budget.max_carrier {
            return Err(Error::BudgetExceeded(format!(
                "generator {name} has {} elements",
                alg.size
            )));
        }
        if !st.index.contains_key(alg) {
            st.add(alg.clone(), name.clone());
        }
    }
    if st.algebras.len() > budget.max_objects || st.morphisms > budget.max_morphisms {
        return Err(Error::BudgetExceeded(
            "generators alone exceed the budget".into(),
        ));
    }
    for _ in 0..budget.max_depth {
        let (fresh, _) = limit_round(&mut st, &budget);
        let mut added = false;
        // Rejected candidates resurface in the final round as missing limits.
        for (alg, _) in fresh {
            if st.algebras.len() >= budget.max_objects || !st.fits(&alg, budget.max_morphisms) {
                continue;
            }
            let label = format!("L{}[{}]", st.algebras.len(), alg.size);
            st.add(alg, label);
            added = true;
        }
        if !added {
            break;
        }
    }
    for alg in kernel_pair_round(&mut st, &budget) {
        if st.algebras.len() >= budget.max_objects || !st.fits(&alg, budget.max_morphisms) {
            continue;
        }
        let label = format!("K{}[{}]", st.algebras.len(), alg.size);
        st.add(alg, label);
    }
    // Status is decided on the final object set.
    let (fresh, oversize) = limit_round(&mut st, &budget);
    let mut missing: Vec<LimitRequest> = fresh.into_iter().map(|(_, r)| r).collect();
    missing.extend(oversize);
    let unlisted = missing.len().saturating_sub(MAX_LISTED);
    missing.truncate(MAX_LISTED);
    let status = if missing.is_empty() {
        ClosureStatus::Closed
    } else {
        ClosureStatus::Truncated(missing)
    };
    let category = realize(&mut st)?;
    Ok(ClosureResult {
        category,
        algebras: st.algebras,
        status,
        unlisted_missing: unlisted,
    })
}

fn realize(st: &mut State) -> Result<FinCategory> {
    let n = st.algebras.len();
    let objects = (0..n)
        .map(|i| Object {
            label: Some(st.labels[i].clone()),
            carrier: Some(st.algebras[i].size),
        })
        .collect();
    let mut morphisms = Vec::with_capacity(st.morphisms);
    for a in 0..n {
        for b in 0..n {
            for h in st.homs(a, b).clone() {
                morphisms.push(Morphism {
                    dom: ObjId(a as u32),
                    cod: ObjId(b as u32),
                    label: None,
                    map: Some(h),
                });
            }
        }
    }
    FinCategory::concrete(objects, morphisms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::stock_algebra;
    use crate::limits::{certify_limit, Limit};

    fn gen(names: &[&str]) -> Vec<(String, FinAlgebra)> {
        names
            .iter()
            .map(|&n| (n.to_string(), stock_algebra(n).unwrap()))
            .collect()
    }

    #[test]
    fn trivial_generator_is_closed() {
        let r = build_category_closure(&gen(&["g1"]), ClosureBudget::default()).unwrap();
        assert!(r.status.is_closed());
        assert_eq!(r.category.num_objects(), 1);
        assert_eq!(r.category.num_morphisms(), 1);
    }

    #[test]
    fn z2_is_truncated() {
        let budget = ClosureBudget {
            max_carrier: 16,
            max_depth: 2,
            ..Default::default()
        };
        let r = build_category_closure(&gen(&["z2"]), budget).unwrap();
        match &r.status {
            ClosureStatus::Truncated(missing) => assert!(!missing.is_empty()),
            ClosureStatus::Closed => panic!("powers of Z2 cannot close"),
        }
        assert!(r.category.verify().is_empty());
    }

    #[test]
    fn closure_limits_certify() {
        let r = build_category_closure(
            &gen(&["c2"]),
            ClosureBudget {
                max_depth: 1,
                max_morphisms: 300,
                ..Default::default()
            },
        )
        .unwrap();
        let cat = &r.category;
        assert!(cat.verify().is_empty());
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                if cat.cod(f) == cat.cod(g) {
                    if let Ok(pb) = crate::limits::pullback(cat, f, g) {
                        assert!(certify_limit(cat, &Limit::Pullback(pb)).certified);
                    }
                }
                if cat.dom(f) == cat.dom(g) && cat.cod(f) == cat.cod(g) {
                    if let Ok(eq) = crate::limits::equalizer(cat, f, g) {
                        assert!(certify_limit(cat, &Limit::Equalizer(eq)).certified);
                    }
                }
            }
        }
    }
}
