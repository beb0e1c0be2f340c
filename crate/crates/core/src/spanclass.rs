//! Decidable classes of spans.
//!
//! Epimorphisms used by the strong-relation test are those of the supplied
//! finite category, not of any ambient variety.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::budget::{staged, weight, Cell, EvalBudget};
use crate::error::Result;
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::limits::pullback;
use crate::structures::{all_spans, Span};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "spans", rename_all = "snake_case")]
pub enum SpanClassSpec {
    AllSpans,
    Relations,
    StrongRelations,
    ExplicitList(Vec<Span>),
}

impl SpanClassSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SpanClassSpec::AllSpans => "all",
            SpanClassSpec::Relations => "relations",
            SpanClassSpec::StrongRelations => "strong",
            SpanClassSpec::ExplicitList(_) => "list",
        }
    }
}

/// Membership tester with per-category memo tables.
pub struct SpanClass<'a> {
    cat: &'a FinCategory,
    spec: &'a SpanClassSpec,
    factor_sets: OnceLock<Vec<(MorId, HashSet<MorId>)>>,
    memo: Mutex<HashMap<Span, bool>>,
}

impl<'a> SpanClass<'a> {
    pub fn new(cat: &'a FinCategory, spec: &'a SpanClassSpec) -> Self {
        SpanClass {
            cat,
            spec,
            factor_sets: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &SpanClassSpec {
        self.spec
    }

    pub fn contains(&self, span: &Span) -> bool {
        match self.spec {
            SpanClassSpec::AllSpans => true,
            SpanClassSpec::ExplicitList(list) => list.contains(span),
            SpanClassSpec::Relations => self.memoized(span, |s| is_jointly_monic(self.cat, s)),
            SpanClassSpec::StrongRelations => self.memoized(span, |s| {
                is_jointly_monic(self.cat, s) && self.fills_against_epis(s)
            }),
        }
    }

    fn memoized(&self, span: &Span, test: impl FnOnce(&Span) -> bool) -> bool {
        if let Some(&hit) = self.memo.lock().unwrap().get(span) {
            return hit;
        }
        let v = test(span);
        self.memo.lock().unwrap().insert(*span, v);
        v
    }

    /// Non-invertible epis `e` with the set of arrows factoring through them.
    fn factor_sets(&self) -> &[(MorId, HashSet<MorId>)] {
        self.factor_sets.get_or_init(|| {
            let cat = self.cat;
            let epis = cat.epis();
            cat.morphisms()
                .filter(|&e| epis[e.idx()] && !cat.is_iso(e))
                .map(|e| {
                    let y = cat.cod(e);
                    let set = cat
                        .objects()
                        .flat_map(|z| cat.hom(y, z).iter().map(move |&t| cat.comp(t, e)))
                        .collect();
                    (e, set)
                })
                .collect()
        })
    }

    /// For an epi `e`, whenever `d·w` and `c·w` factor through `e` so does `w`;
    /// the legs of the filler then agree because `e` is epi.
    fn fills_against_epis(&self, span: &Span) -> bool {
        let cat = self.cat;
        self.factor_sets().iter().all(|(e, set)| {
            cat.hom(cat.dom(*e), span.apex).iter().all(|&w| {
                !(set.contains(&cat.comp(span.d, w)) && set.contains(&cat.comp(span.c, w)))
                    || set.contains(&w)
            })
        })
    }

    /// Members among all spans of the category, in canonical order.
    pub fn members(&self) -> Vec<Span> {
        match self.spec {
            SpanClassSpec::ExplicitList(list) => {
                let mut v: Vec<Span> = list
                    .iter()
                    .copied()
                    .filter(|s| valid_span(self.cat, s))
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            }
            _ => all_spans(self.cat)
                .into_iter()
                .filter(|s| self.contains(s))
                .collect(),
        }
    }

    /// Members in whole weight classes, lightest first, at most `max` of them;
    /// also returns the number of `(apex, X, Y)` cells left unexamined.
    pub fn members_within(&self, max: usize) -> (Vec<Span>, usize) {
        let st = staged(span_cells(self.cat), max, |&(a, x, y), _| {
            self.spans_in(a, x, y)
        });
        (st.items, st.skipped)
    }

    fn spans_in(&self, apex: ObjId, x: ObjId, y: ObjId) -> Vec<Span> {
        let cat = self.cat;
        let mut out = Vec::new();
        for &d in cat.hom(apex, x) {
            for &c in cat.hom(apex, y) {
                let s = Span { apex, d, c };
                if self.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

pub(crate) fn span_cells(cat: &FinCategory) -> Vec<Cell<(ObjId, ObjId, ObjId)>> {
    let mut cells = Vec::new();
    for a in cat.objects() {
        for x in cat.objects() {
            for y in cat.objects() {
                let raw = cat.hom(a, x).len() * cat.hom(a, y).len();
                if raw > 0 {
                    cells.push(Cell {
                        weight: weight(cat, &[a, x, y]),
                        raw,
                        key: (a, x, y),
                    });
                }
            }
        }
    }
    cells
}

fn valid_span(cat: &FinCategory, s: &Span) -> bool {
    let n = cat.num_morphisms();
    s.d.idx() < n && s.c.idx() < n && cat.dom(s.d) == s.apex && cat.dom(s.c) == s.apex
}

pub fn membership(cat: &FinCategory, spec: &SpanClassSpec, span: &Span) -> bool {
    SpanClass::new(cat, spec).contains(span)
}

/// No parallel pair into the apex is identified by both legs.
pub fn is_jointly_monic(cat: &FinCategory, span: &Span) -> bool {
    let mut seen = HashSet::new();
    cat.objects().all(|z| {
        seen.clear();
        cat.hom(z, span.apex)
            .iter()
            .all(|&u| seen.insert((cat.comp(span.d, u), cat.comp(span.c, u))))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub missing: Option<ObjId>,
}

pub fn contains_identity_spans(cat: &FinCategory, spec: &SpanClassSpec) -> IdentityCheck {
    let class = SpanClass::new(cat, spec);
    let missing = cat
        .objects()
        .find(|&x| !class.contains(&Span::identity(cat, x)));
    IdentityCheck {
        holds: missing.is_none(),
        missing,
    }
}

/// Whether an explicit list is closed under precomposition with isomorphisms.
pub fn is_iso_closed(cat: &FinCategory, list: &[Span]) -> bool {
    let set: HashSet<&Span> = list.iter().collect();
    list.iter().all(|s| {
        cat.objects().all(|x| {
            cat.hom(x, s.apex)
                .iter()
                .filter(|&&phi| cat.is_iso(phi))
                .all(|&phi| {
                    set.contains(&Span {
                        apex: x,
                        d: cat.comp(s.d, phi),
                        c: cat.comp(s.c, phi),
                    })
                })
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityWitness {
    pub span: Span,
    pub u: MorId,
    pub v: MorId,
    pub pulled_back: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub witness: Option<StabilityWitness>,
    pub evaluated: usize,
    /// Instances skipped because a pullback is missing or the budget ran out.
    pub unevaluated: usize,
}

/// The span `(B, d', c')` obtained by pulling `d` back along `u` and `c`
/// along `v`, then pulling the two results back over `D`.
pub fn pull_back_span(cat: &FinCategory, span: &Span, u: MorId, v: MorId) -> Result<Span> {
    let pa = pullback(cat, u, span.d)?;
    let pc = pullback(cat, span.c, v)?;
    let pb = pullback(cat, pa.pi2, pc.pi1)?;
    Ok(Span {
        apex: pb.apex,
        d: cat.comp(pa.pi1, pb.pi1),
        c: cat.comp(pc.pi2, pb.pi2),
    })
}

pub fn is_pullback_stable(cat: &FinCategory, spec: &SpanClassSpec) -> StabilityReport {
    is_pullback_stable_budgeted(cat, spec, EvalBudget::UNLIMITED)
}

/// Stability scan over instances `(span, u, v)` in whole weight classes,
/// lightest first, within `budget.max_instances`.
pub fn is_pullback_stable_budgeted(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    budget: EvalBudget,
) -> StabilityReport {
    let mut report = StabilityReport {
        stable: true,
        witness: None,
        evaluated: 0,
        unevaluated: 0,
    };
    if matches!(spec, SpanClassSpec::AllSpans) {
        return report;
    }
    let class = SpanClass::new(cat, spec);
    let mut cells = Vec::new();
    for span_cell in span_cells(cat) {
        let (_, x, y) = span_cell.key;
        for u in cat.objects() {
            for v in cat.objects() {
                let raw = span_cell.raw * cat.hom(u, x).len() * cat.hom(v, y).len();
                if raw > 0 {
                    let weight = span_cell.weight + weight(cat, &[u, v]);
                    cells.push(Cell {
                        weight,
                        raw,
                        key: (span_cell.key, u, v),
                    });
                }
            }
        }
    }
    let st = staged(cells, budget.max_instances, |&((a, x, y), u, v), _| {
        let mut out = Vec::new();
        for span in class.spans_in(a, x, y) {
            for &um in cat.hom(u, x) {
                for &vm in cat.hom(v, y) {
                    out.push((span, um, vm));
                }
            }
        }
        out
    });
    report.unevaluated = st.skipped;
    for (span, u, v) in st.items {
        match pull_back_span(cat, &span, u, v) {
            Ok(b) => {
                report.evaluated += 1;
                if !class.contains(&b) {
                    report.stable = false;
                    report.witness = Some(StabilityWitness {
                        span,
                        u,
                        v,
                        pulled_back: b,
                    });
                    return report;
                }
            }
            Err(_) => report.unevaluated += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain_category, poset_category, Morphism, Object};

    fn all_functions(sizes: &[usize]) -> FinCategory {
        let objects = sizes
            .iter()
            .map(|&s| Object {
                label: None,
                carrier: Some(s),
            })
            .collect();
        let mut morphisms = Vec::new();
        for (a, &sa) in sizes.iter().enumerate() {
            for (b, &sb) in sizes.iter().enumerate() {
                for mut code in 0..sb.pow(sa as u32) {
                    let mut m = Vec::new();
                    for _ in 0..sa {
                        m.push((code % sb) as u32);
                        code /= sb;
                    }
                    morphisms.push(Morphism {
                        dom: ObjId(a as u32),
                        cod: ObjId(b as u32),
                        label: None,
                        map: Some(m),
                    });
                }
            }
        }
        FinCategory::generated(objects, morphisms).unwrap()
    }

    #[test]
    fn identity_spans_belong_to_every_kind() {
        let cat = all_functions(&[1, 2]);
        for spec in [
            SpanClassSpec::AllSpans,
            SpanClassSpec::Relations,
            SpanClassSpec::StrongRelations,
        ] {
            assert!(contains_identity_spans(&cat, &spec).holds);
        }
    }

    #[test]
    fn relations_are_injective_pairings() {
        let cat = all_functions(&[1, 2, 3]);
        for span in all_spans(&cat) {
            let (d, c) = (cat.map(span.d).unwrap(), cat.map(span.c).unwrap());
            let mut pairs: Vec<(u32, u32)> = d.iter().copied().zip(c.iter().copied()).collect();
            pairs.sort_unstable();
            let injective = pairs.windows(2).all(|w| w[0] != w[1]);
            assert_eq!(
                membership(&cat, &SpanClassSpec::Relations, &span),
                injective
            );
        }
    }

    #[test]
    fn strong_implies_relation() {
        let cat = all_functions(&[1, 2]);
        let strong = SpanClass::new(&cat, &SpanClassSpec::StrongRelations);
        for span in all_spans(&cat) {
            if strong.contains(&span) {
                assert!(is_jointly_monic(&cat, &span));
            }
        }
    }

    #[test]
    fn thin_category_strong_relations() {
        let cat = poset_category(4, |i, j| i == j || i == 0 || j == 3);
        let strong = SpanClass::new(&cat, &SpanClassSpec::StrongRelations);
        for span in all_spans(&cat) {
            assert!(is_jointly_monic(&cat, &span));
        }
        // 0 ≤ 1 is epi and mono but not invertible, so the relation it spans
        // has no diagonal filler; identity spans fill trivially.
        let up = cat.hom(ObjId(0), ObjId(1))[0];
        assert!(!strong.contains(&Span::new(ObjId(0), up, up)));
        for x in cat.objects() {
            assert!(strong.contains(&Span::identity(&cat, x)));
        }
        for spec in [SpanClassSpec::Relations, SpanClassSpec::StrongRelations] {
            assert!(is_pullback_stable(&cat, &spec).stable);
        }
    }

    #[test]
    fn explicit_list_without_identities() {
        let cat = chain_category(2);
        let f = cat.hom(ObjId(0), ObjId(1))[0];
        let spec = SpanClassSpec::ExplicitList(vec![Span::new(ObjId(0), f, f)]);
        let check = contains_identity_spans(&cat, &spec);
        assert!(!check.holds);
        assert_eq!(check.missing, Some(ObjId(0)));
    }

    #[test]
    fn all_spans_stable() {
        let cat = all_functions(&[1, 2]);
        assert!(is_pullback_stable(&cat, &SpanClassSpec::AllSpans).stable);
    }

    #[test]
    fn lone_relation_is_not_stable() {
        // Sets of sizes 0..=2 with all functions: closed under the pullbacks used.
        let cat = all_functions(&[0, 1, 2, 4]);
        let two = ObjId(2);
        let one = cat.id(two);
        let spec = SpanClassSpec::ExplicitList(vec![Span::new(two, one, one)]);
        let r = is_pullback_stable(&cat, &spec);
        assert!(!r.stable);
        assert!(r.witness.is_some());
    }
}
