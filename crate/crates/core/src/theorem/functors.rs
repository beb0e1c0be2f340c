//! Section and isomorphism tests for the forgetful functors from
//! groupoids, categories and multiplicative graphs to reflexive graphs, from
//! pregroupoids to spans, and from multiplicative kites to directed kites.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use super::csp::{self, Arc, Outcome};
use super::Verdict;
use crate::budget::{staged, weight, Cell, EvalBudget};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::kernelpair::{kernel_pair_construction, KernelPairData};
use crate::limits::{mediate_pullback, split_pullback, PullbackData, SplitPullbackData};
use crate::spanclass::{SpanClass, SpanClassSpec};
use crate::structures::{
    check_groupoid, check_internal_category, enumerate_pregroupoids, multiplication_frame,
    multiplications_in, DirectedKite, Kite, MultiplicativeGraph, ReflexiveGraph, Span, Validate,
};

/// The forgetful functor under test: `F0` on kites, `F1` on spans, `F2`–`F4`
/// on reflexive graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Functor {
    F0,
    F1,
    F2,
    F3,
    F4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// A structure on every object, chosen so that every base morphism lifts.
    Section,
    /// Exactly one structure on every object, and every base morphism lifts.
    Iso,
}

pub fn functor_condition(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    which: Functor,
    mode: Mode,
) -> Verdict {
    functor_condition_budgeted(cat, spec, which, mode, EvalBudget::UNLIMITED)
}

pub fn functor_condition_budgeted(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    which: Functor,
    mode: Mode,
    budget: EvalBudget,
) -> Verdict {
    match which {
        Functor::F0 => kite_problem(cat, spec, budget).decide(mode),
        Functor::F1 => span_problem(cat, spec, budget).decide(mode),
        Functor::F2 => graph_problems(cat, spec, budget)[0].decide(mode),
        Functor::F3 => graph_problems(cat, spec, budget)[1].decide(mode),
        Functor::F4 => graph_problems(cat, spec, budget)[2].decide(mode),
    }
}

/// Base objects with their admissible structures and the lifting
/// constraints between them.
pub(crate) struct Problem {
    objects: Vec<Json>,
    /// `None` when auxiliary limits are missing.
    domains: Vec<Option<Vec<u32>>>,
    arcs: Vec<Arc>,
    arc_labels: Vec<Json>,
    /// Objects and base-morphism pairs beyond the budget.
    skipped: usize,
    /// Base morphisms whose lifting could not be tested.
    lifts_unevaluated: usize,
}

impl Problem {
    pub(crate) fn decide(&self, mode: Mode) -> Verdict {
        let mut evaluated = 0;
        let mut unevaluated = self.skipped + self.lifts_unevaluated;
        let mut witness = None;
        for (i, dom) in self.domains.iter().enumerate() {
            let Some(dom) = dom else {
                unevaluated += 1;
                continue;
            };
            evaluated += 1;
            if witness.is_some() {
                continue;
            }
            if dom.is_empty() {
                witness = Some(json!({ "kind": "no_structure", "object": self.objects[i] }));
            } else if mode == Mode::Iso && dom.len() > 1 {
                witness = Some(json!({
                    "kind": "several_structures",
                    "object": self.objects[i],
                    "structures": dom,
                }));
            }
        }
        if witness.is_some() {
            return Verdict::decide(witness, evaluated, unevaluated);
        }
        let live: Vec<usize> = (0..self.arcs.len())
            .filter(|&k| {
                self.domains[self.arcs[k].from].is_some() && self.domains[self.arcs[k].to].is_some()
            })
            .collect();
        let witness = match mode {
            Mode::Iso => live.iter().find_map(|&k| {
                let a = &self.arcs[k];
                let (x, y) = (
                    self.domains[a.from].as_ref()?[0],
                    self.domains[a.to].as_ref()?[0],
                );
                (!a.allowed.contains(&(x, y)))
                    .then(|| self.arc_witness(k, "morphism_does_not_lift"))
            }),
            Mode::Section => self.unsolvable(&live),
        };
        Verdict::decide(witness, evaluated, unevaluated)
    }

    fn arc_witness(&self, k: usize, kind: &str) -> Json {
        let a = &self.arcs[k];
        json!({
            "kind": kind,
            "from": self.objects[a.from],
            "to": self.objects[a.to],
            "morphism": self.arc_labels[k],
        })
    }

    /// Runs the constraint solver on the evaluated objects.
    fn unsolvable(&self, live: &[usize]) -> Option<Json> {
        let vars: Vec<usize> = (0..self.domains.len())
            .filter(|&i| self.domains[i].is_some())
            .collect();
        let pos: HashMap<usize, usize> = vars.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let domains: Vec<Vec<u32>> = vars
            .iter()
            .map(|&i| self.domains[i].clone().unwrap())
            .collect();
        let arcs: Vec<Arc> = live
            .iter()
            .map(|&k| {
                let a = &self.arcs[k];
                Arc {
                    from: pos[&a.from],
                    to: pos[&a.to],
                    allowed: a.allowed.clone(),
                }
            })
            .collect();
        match csp::solve(&domains, &arcs) {
            Outcome::Solved(choice) => {
                debug_assert!(arcs
                    .iter()
                    .all(|a| a.allowed.contains(&(choice[a.from], choice[a.to]))));
                None
            }
            Outcome::Unsatisfiable { culprit: Some(c) } => {
                Some(self.arc_witness(live[c], "no_natural_choice"))
            }
            Outcome::Unsatisfiable { culprit: None } => Some(
                json!({ "kind": "no_natural_choice", "objects": vars.len(), "morphisms": live.len() }),
            ),
        }
    }
}

/// Lift-check bookkeeping shared by the three base categories.
struct Lifts {
    left: usize,
}

impl Lifts {
    fn take(&mut self, n: usize) -> bool {
        if self.left >= n {
            self.left -= n;
            true
        } else {
            self.left = 0;
            false
        }
    }
}

/// Pairs of evaluated objects, lightest combined weight first.
fn object_pairs(weights: &[usize], usable: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let idx: Vec<usize> = (0..weights.len()).filter(|&i| usable(i)).collect();
    let mut pairs: Vec<(usize, usize)> = idx
        .iter()
        .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
        .collect();
    pairs.sort_by_key(|&(i, j)| (weights[i] + weights[j], i, j));
    pairs
}

fn ids(ms: &[MorId]) -> Vec<u32> {
    ms.iter().map(|m| m.0).collect()
}

/// Whether some `h ∈ hom(x, y)` satisfies `h·a = b`.
fn factors(cat: &FinCategory, a: MorId, b: MorId, lifts: &mut Lifts) -> Option<bool> {
    let cands = cat.hom(cat.cod(a), cat.cod(b));
    if !lifts.take(cands.len()) {
        return None;
    }
    Some(cands.iter().any(|&h| cat.comp(h, a) == b))
}

// ---------------------------------------------------------------- graphs

struct GraphData {
    graph: ReflexiveGraph,
    frame: Option<MultiplicativeGraph>,
    mults: Vec<MorId>,
    /// Per multiplication: associative, and then also a groupoid; `None`
    /// when the object of composable triples is missing.
    assoc: Option<Vec<(bool, bool)>>,
}

/// Problems for `F2`, `F3` and `F4` over the same base.
pub(crate) fn graph_problems(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    budget: EvalBudget,
) -> [Problem; 3] {
    let class = SpanClass::new(cat, spec);
    let mut cells = Vec::new();
    for c1 in cat.objects() {
        for c0 in cat.objects() {
            let raw = cat.hom(c0, c1).len() * cat.hom(c1, c0).len();
            if raw > 0 {
                cells.push(Cell {
                    weight: weight(cat, &[c1, c0]),
                    raw,
                    key: (c1, c0),
                });
            }
        }
    }
    let st = staged(cells, budget.max_instances, |&(c1, c0), _| {
        let one = cat.id(c0);
        let mut out = Vec::new();
        for &e in cat.hom(c0, c1) {
            let sections: Vec<MorId> = cat
                .hom(c1, c0)
                .iter()
                .copied()
                .filter(|&d| cat.comp(d, e) == one)
                .collect();
            for &d in &sections {
                for &c in &sections {
                    let g = ReflexiveGraph { c1, c0, d, c, e };
                    if class.contains(&g.span()) {
                        out.push(g);
                    }
                }
            }
        }
        out
    });
    let data: Vec<GraphData> = st.items.iter().map(|g| graph_data(cat, g)).collect();
    let weights: Vec<usize> = data
        .iter()
        .map(|g| weight(cat, &[g.graph.c1, g.graph.c0]))
        .collect();
    let objects: Vec<Json> = data.iter().map(|g| json!({ "graph": g.graph })).collect();

    let mut arcs = Vec::new();
    let mut labels = Vec::new();
    let mut lifts = Lifts {
        left: budget.max_lift_checks,
    };
    let mut lifts_unevaluated = 0;
    let pairs = object_pairs(&weights, |i| data[i].frame.is_some());
    for (n, &(i, j)) in pairs.iter().enumerate() {
        let (gi, gj) = (&data[i], &data[j]);
        let (fi, fj) = (gi.frame.unwrap(), gj.frame.unwrap());
        let (a, b) = (&gi.graph, &gj.graph);
        let cands = cat.hom(a.c1, b.c1);
        if !lifts.take(cands.len()) {
            lifts_unevaluated += pairs.len() - n;
            break;
        }
        let c2j = PullbackData {
            apex: fj.c2,
            pi1: fj.pi1,
            pi2: fj.pi2,
            f: b.d,
            g: b.c,
        };
        for &f1 in cands {
            if i == j && f1 == cat.id(a.c1) {
                continue;
            }
            let f0 = cat.comp3(b.d, f1, a.e);
            if cat.comp(b.d, f1) != cat.comp(f0, a.d)
                || cat.comp(b.c, f1) != cat.comp(f0, a.c)
                || cat.comp(f1, a.e) != cat.comp(b.e, f0)
            {
                continue;
            }
            let Ok(f2) = mediate_pullback(cat, &c2j, cat.comp(f1, fi.pi1), cat.comp(f1, fi.pi2))
            else {
                lifts_unevaluated += 1;
                continue;
            };
            let mut allowed = HashSet::new();
            for &m in &gi.mults {
                for &m2 in &gj.mults {
                    if cat.comp(f1, m) == cat.comp(m2, f2) {
                        allowed.insert((m.0, m2.0));
                    }
                }
            }
            arcs.push(Arc {
                from: i,
                to: j,
                allowed,
            });
            labels.push(json!({ "f1": f1, "f0": f0 }));
        }
    }

    let level = |pick: &dyn Fn(&GraphData) -> Option<Vec<u32>>| Problem {
        objects: objects.clone(),
        domains: data.iter().map(pick).collect(),
        arcs: arcs
            .iter()
            .map(|a| Arc {
                from: a.from,
                to: a.to,
                allowed: a.allowed.clone(),
            })
            .collect(),
        arc_labels: labels.clone(),
        skipped: st.skipped,
        lifts_unevaluated,
    };
    let mg = level(&|g| g.frame.map(|_| ids(&g.mults)));
    let category = level(&|g| {
        let flags = g.assoc.as_ref()?;
        Some(
            g.mults
                .iter()
                .zip(flags)
                .filter(|(_, f)| f.0)
                .map(|(m, _)| m.0)
                .collect(),
        )
    });
    let groupoid = level(&|g| {
        let flags = g.assoc.as_ref()?;
        Some(
            g.mults
                .iter()
                .zip(flags)
                .filter(|(_, f)| f.1)
                .map(|(m, _)| m.0)
                .collect(),
        )
    });
    [mg, category, groupoid]
}

fn graph_data(cat: &FinCategory, g: &ReflexiveGraph) -> GraphData {
    let Ok(frame) = multiplication_frame(cat, g) else {
        return GraphData {
            graph: *g,
            frame: None,
            mults: Vec::new(),
            assoc: None,
        };
    };
    let mults = multiplications_in(cat, &frame);
    let assoc: Option<Vec<(bool, bool)>> = mults
        .iter()
        .map(|&m| {
            let mg = MultiplicativeGraph { m, ..frame };
            let is_cat = check_internal_category(cat, &mg).ok()?;
            Some((is_cat, is_cat && check_groupoid(cat, &mg)))
        })
        .collect();
    GraphData {
        graph: *g,
        frame: Some(frame),
        mults,
        assoc,
    }
}

// ----------------------------------------------------------------- spans

fn kernel_legs(kp: &KernelPairData) -> (PullbackData, PullbackData, PullbackData) {
    let s = &kp.span;
    (
        PullbackData {
            apex: kp.dd,
            pi1: kp.d1,
            pi2: kp.d2,
            f: s.d,
            g: s.d,
        },
        PullbackData {
            apex: kp.dc,
            pi1: kp.c1,
            pi2: kp.c2,
            f: s.c,
            g: s.c,
        },
        PullbackData {
            apex: kp.ddc,
            pi1: kp.p1,
            pi2: kp.p2,
            f: kp.d2,
            g: kp.c1,
        },
    )
}

/// `h(3): D(d,c) -> D'(d',c')`, acting as `h` on each of the three entries.
pub(crate) fn cube(
    cat: &FinCategory,
    h: MorId,
    a: &KernelPairData,
    b: &KernelPairData,
) -> Option<MorId> {
    let (kd, kc, pdc) = kernel_legs(b);
    let hd = mediate_pullback(cat, &kd, cat.comp(h, a.d1), cat.comp(h, a.d2)).ok()?;
    let hc = mediate_pullback(cat, &kc, cat.comp(h, a.c1), cat.comp(h, a.c2)).ok()?;
    mediate_pullback(cat, &pdc, cat.comp(hd, a.p1), cat.comp(hc, a.p2)).ok()
}

pub(crate) fn span_problem(cat: &FinCategory, spec: &SpanClassSpec, budget: EvalBudget) -> Problem {
    let class = SpanClass::new(cat, spec);
    let (spans, skipped) = class.members_within(budget.max_instances);
    let kps: Vec<Option<KernelPairData>> = spans
        .iter()
        .map(|s| kernel_pair_construction(cat, s).ok())
        .collect();
    let domains: Vec<Option<Vec<u32>>> = kps
        .iter()
        .map(|kp| kp.as_ref().map(|kp| ids(&enumerate_pregroupoids(cat, kp))))
        .collect();
    let weights: Vec<usize> = spans
        .iter()
        .map(|s| weight(cat, &[s.apex, cat.cod(s.d), cat.cod(s.c)]))
        .collect();

    let mut arcs = Vec::new();
    let mut labels = Vec::new();
    let mut lifts = Lifts {
        left: budget.max_lift_checks,
    };
    let mut lifts_unevaluated = 0;
    let pairs = object_pairs(&weights, |i| kps[i].is_some());
    'pairs: for (n, &(i, j)) in pairs.iter().enumerate() {
        let (a, b) = (&spans[i], &spans[j]);
        let (ka, kb) = (kps[i].as_ref().unwrap(), kps[j].as_ref().unwrap());
        let cands = cat.hom(a.apex, b.apex);
        if !lifts.take(cands.len()) {
            lifts_unevaluated += pairs.len() - n;
            break;
        }
        for &h in cands {
            if i == j && h == cat.id(a.apex) {
                continue;
            }
            let (d_ok, c_ok) = (
                factors(cat, a.d, cat.comp(b.d, h), &mut lifts),
                factors(cat, a.c, cat.comp(b.c, h), &mut lifts),
            );
            match (d_ok, c_ok) {
                (Some(true), Some(true)) => {}
                (Some(_), Some(_)) => continue,
                _ => {
                    lifts_unevaluated += pairs.len() - n;
                    break 'pairs;
                }
            }
            let Some(h3) = cube(cat, h, ka, kb) else {
                lifts_unevaluated += 1;
                continue;
            };
            let mut allowed = HashSet::new();
            for &p in domains[i].as_ref().unwrap() {
                for &q in domains[j].as_ref().unwrap() {
                    if cat.comp(h, MorId(p)) == cat.comp(MorId(q), h3) {
                        allowed.insert((p, q));
                    }
                }
            }
            arcs.push(Arc {
                from: i,
                to: j,
                allowed,
            });
            labels.push(json!({ "h": h }));
        }
    }
    Problem {
        objects: spans.iter().map(|s| json!({ "span": s })).collect(),
        domains,
        arcs,
        arc_labels: labels,
        skipped,
        lifts_unevaluated,
    }
}

// ----------------------------------------------------------------- kites

/// Split epimorphisms `x -> y` with their sections, memoized per pair.
struct Splits<'a> {
    cat: &'a FinCategory,
    memo: HashMap<(ObjId, ObjId), Vec<(MorId, MorId)>>,
}

impl<'a> Splits<'a> {
    fn new(cat: &'a FinCategory) -> Self {
        Splits {
            cat,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, x: ObjId, y: ObjId) -> &[(MorId, MorId)] {
        let cat = self.cat;
        self.memo.entry((x, y)).or_insert_with(|| {
            let one = cat.id(y);
            let mut out = Vec::new();
            for &f in cat.hom(x, y) {
                for &r in cat.hom(y, x) {
                    if cat.comp(f, r) == one {
                        out.push((f, r));
                    }
                }
            }
            out
        })
    }
}

pub(crate) fn split_pairs(cat: &FinCategory, x: ObjId, y: ObjId) -> Vec<(MorId, MorId)> {
    Splits::new(cat).get(x, y).to_vec()
}

fn out_of(cat: &FinCategory, d: ObjId) -> Vec<MorId> {
    cat.objects()
        .flat_map(|x| cat.hom(d, x).iter().copied())
        .collect()
}

/// Directed kites with direction in the class, over the given objects.
fn kites_over(
    cat: &FinCategory,
    class: &SpanClass<'_>,
    splits: &mut Splits<'_>,
    (a, b, c, d): (ObjId, ObjId, ObjId, ObjId),
    room: usize,
) -> Vec<DirectedKite> {
    let fr = splits.get(a, b).to_vec();
    let gs = splits.get(c, b).to_vec();
    let outs = out_of(cat, d);
    let mut found = Vec::new();
    for &(f, r) in &fr {
        for &(g, s) in &gs {
            for &alpha in cat.hom(a, d) {
                let beta = cat.comp(alpha, r);
                for &gamma in cat.hom(c, d) {
                    if cat.comp(gamma, s) != beta {
                        continue;
                    }
                    let bf = cat.comp(beta, f);
                    let bg = cat.comp(beta, g);
                    let ds: Vec<MorId> = outs
                        .iter()
                        .copied()
                        .filter(|&x| cat.comp(x, alpha) == cat.comp(x, bf))
                        .collect();
                    let cs: Vec<MorId> = outs
                        .iter()
                        .copied()
                        .filter(|&x| cat.comp(x, bg) == cat.comp(x, gamma))
                        .collect();
                    for &dl in &ds {
                        for &cl in &cs {
                            let dir = Span {
                                apex: d,
                                d: dl,
                                c: cl,
                            };
                            if !class.contains(&dir) {
                                continue;
                            }
                            let kite = Kite {
                                a,
                                b,
                                c,
                                d,
                                f,
                                r,
                                s,
                                g,
                                alpha,
                                beta,
                                gamma,
                            };
                            found.push(DirectedKite { kite, dir });
                            if found.len() > room {
                                return found;
                            }
                        }
                    }
                }
            }
        }
    }
    found
}

pub(crate) fn kite_problem(cat: &FinCategory, spec: &SpanClassSpec, budget: EvalBudget) -> Problem {
    let class = SpanClass::new(cat, spec);
    let mut splits = Splits::new(cat);
    let outs: Vec<usize> = cat.objects().map(|d| out_of(cat, d).len()).collect();
    let mut cells = Vec::new();
    for a in cat.objects() {
        for b in cat.objects() {
            let nab = splits.get(a, b).len();
            if nab == 0 {
                continue;
            }
            for c in cat.objects() {
                let ncb = splits.get(c, b).len();
                if ncb == 0 {
                    continue;
                }
                for d in cat.objects() {
                    let raw = nab
                        * ncb
                        * cat.hom(a, d).len()
                        * cat.hom(c, d).len()
                        * outs[d.idx()].max(1);
                    if raw > 0 {
                        cells.push(Cell {
                            weight: weight(cat, &[a, b, c, d]),
                            raw,
                            key: (a, b, c, d),
                        });
                    }
                }
            }
        }
    }
    let st = staged(cells, budget.max_instances, |&key, room| {
        kites_over(cat, &class, &mut splits, key, room)
    });
    let kites = st.items;
    let pbs: Vec<Option<SplitPullbackData>> = kites
        .iter()
        .map(|dk| split_pullback(cat, dk.kite.f, dk.kite.r, dk.kite.g, dk.kite.s).ok())
        .collect();
    let domains: Vec<Option<Vec<u32>>> = kites
        .iter()
        .zip(&pbs)
        .map(|(dk, pb)| {
            pb.as_ref()
                .map(|pb| ids(&kite_multiplications(cat, dk, pb)))
        })
        .collect();
    let weights: Vec<usize> = kites
        .iter()
        .map(|dk| weight(cat, &[dk.kite.a, dk.kite.b, dk.kite.c, dk.kite.d]))
        .collect();

    let mut arcs = Vec::new();
    let mut labels = Vec::new();
    let mut lifts = Lifts {
        left: budget.max_lift_checks,
    };
    let mut lifts_unevaluated = 0;
    let pairs = object_pairs(&weights, |i| pbs[i].is_some());
    'pairs: for (n, &(i, j)) in pairs.iter().enumerate() {
        let (x, y) = (&kites[i], &kites[j]);
        let (kx, ky) = (&x.kite, &y.kite);
        let bs = cat.hom(kx.b, ky.b);
        if !lifts.take(bs.len()) {
            lifts_unevaluated += pairs.len() - n;
            break;
        }
        for &b in bs {
            let (ha, hc) = (cat.hom(kx.a, ky.a), cat.hom(kx.c, ky.c));
            if !lifts.take(ha.len() + hc.len()) {
                lifts_unevaluated += pairs.len() - n;
                break 'pairs;
            }
            let as_: Vec<MorId> = ha
                .iter()
                .copied()
                .filter(|&a| {
                    cat.comp(ky.f, a) == cat.comp(b, kx.f) && cat.comp(a, kx.r) == cat.comp(ky.r, b)
                })
                .collect();
            let cs: Vec<MorId> = hc
                .iter()
                .copied()
                .filter(|&c| {
                    cat.comp(ky.g, c) == cat.comp(b, kx.g) && cat.comp(c, kx.s) == cat.comp(ky.s, b)
                })
                .collect();
            for &a in &as_ {
                for &c in &cs {
                    let deltas = cat.hom(kx.d, ky.d);
                    if !lifts.take(deltas.len()) {
                        lifts_unevaluated += pairs.len() - n;
                        break 'pairs;
                    }
                    for &delta in deltas {
                        let identity = i == j
                            && [(a, kx.a), (b, kx.b), (c, kx.c), (delta, kx.d)]
                                .iter()
                                .all(|&(m, o)| m == cat.id(o));
                        if identity
                            || cat.comp(delta, kx.alpha) != cat.comp(ky.alpha, a)
                            || cat.comp(delta, kx.gamma) != cat.comp(ky.gamma, c)
                        {
                            continue;
                        }
                        let dir = (
                            factors(cat, x.dir.d, cat.comp(y.dir.d, delta), &mut lifts),
                            factors(cat, x.dir.c, cat.comp(y.dir.c, delta), &mut lifts),
                        );
                        match dir {
                            (Some(true), Some(true)) => {}
                            (Some(_), Some(_)) => continue,
                            _ => {
                                lifts_unevaluated += pairs.len() - n;
                                break 'pairs;
                            }
                        }
                        let (px, py) = (pbs[i].as_ref().unwrap(), pbs[j].as_ref().unwrap());
                        let Ok(ac) = mediate_pullback(
                            cat,
                            &py.pb,
                            cat.comp(a, px.pb.pi1),
                            cat.comp(c, px.pb.pi2),
                        ) else {
                            lifts_unevaluated += 1;
                            continue;
                        };
                        let mut allowed = HashSet::new();
                        for &m in domains[i].as_ref().unwrap() {
                            for &m2 in domains[j].as_ref().unwrap() {
                                if cat.comp(delta, MorId(m)) == cat.comp(MorId(m2), ac) {
                                    allowed.insert((m, m2));
                                }
                            }
                        }
                        arcs.push(Arc {
                            from: i,
                            to: j,
                            allowed,
                        });
                        labels.push(json!({ "a": a, "b": b, "c": c, "delta": delta }));
                    }
                }
            }
        }
    }
    Problem {
        objects: kites.iter().map(|dk| json!({ "kite": dk })).collect(),
        domains,
        arcs,
        arc_labels: labels,
        skipped: st.skipped,
        lifts_unevaluated,
    }
}

/// Multiplications on a directed kite whose laws are already known to hold.
fn kite_multiplications(
    cat: &FinCategory,
    dk: &DirectedKite,
    sp: &SplitPullbackData,
) -> Vec<MorId> {
    debug_assert!(dk.validate(cat).is_empty());
    let k = &dk.kite;
    let dgp2 = cat.comp3(dk.dir.d, k.gamma, sp.pb.pi2);
    let cap1 = cat.comp3(dk.dir.c, k.alpha, sp.pb.pi1);
    cat.hom(sp.pb.apex, k.d)
        .iter()
        .copied()
        .filter(|&m| {
            cat.comp(m, sp.eps1) == k.alpha
                && cat.comp(m, sp.eps2) == k.gamma
                && cat.comp(dk.dir.d, m) == dgp2
                && cat.comp(dk.dir.c, m) == cap1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain_category, terminal_category};

    #[test]
    fn terminal_category_f4_iso() {
        let cat = terminal_category();
        let v = functor_condition(&cat, &SpanClassSpec::AllSpans, Functor::F4, Mode::Iso);
        assert_eq!(v.value, super::super::Value::True);
        assert_eq!(v.evaluated, 1);
    }

    #[test]
    fn chain_is_all_true() {
        let cat = chain_category(3);
        for f in [
            Functor::F0,
            Functor::F1,
            Functor::F2,
            Functor::F3,
            Functor::F4,
        ] {
            for mode in [Mode::Section, Mode::Iso] {
                let v = functor_condition(&cat, &SpanClassSpec::AllSpans, f, mode);
                assert_eq!(v.value, super::super::Value::True, "{f:?} {mode:?}: {v:?}");
            }
        }
    }
}
