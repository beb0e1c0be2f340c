//! Compatibility between split squares and spans.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::functors::split_pairs;
use super::Verdict;
use crate::budget::{staged, weight, Cell, EvalBudget};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::kernelpair::kernel_pair_construction;
use crate::limits::{
    equalizer, kernel_pair, mediate_equalizer, mediate_pullback, split_pullback, PullbackData,
};
use crate::spanclass::{SpanClass, SpanClassSpec};
use crate::structures::{Span, SplitSquare, Validate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "thetas", rename_all = "snake_case")]
pub enum CompatibilityFailure {
    NoTheta,
    NonUniqueTheta(Vec<MorId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityResult {
    pub holds: bool,
    pub u: MorId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<MorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<CompatibilityFailure>,
}

/// One result per admissible `u: E -> D`, in ascending id order.
pub fn check_compatibility(
    cat: &FinCategory,
    sq: &SplitSquare,
    span: &Span,
) -> Result<Vec<CompatibilityResult>> {
    let report = sq.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    let sp = split_pullback(cat, sq.f, sq.r, sq.g, sq.s)?;
    let (d, c) = (span.d, span.c);
    let e2p2 = cat.comp(sq.e2, sq.p2);
    let e1p1 = cat.comp(sq.e1, sq.p1);
    let mut out = Vec::new();
    for &u in cat.hom(sq.e, span.apex) {
        let du = cat.comp(d, u);
        let cu = cat.comp(c, u);
        if du != cat.comp(du, e2p2) || cu != cat.comp(cu, e1p1) {
            continue;
        }
        let (ue1, ue2) = (cat.comp(u, sq.e1), cat.comp(u, sq.e2));
        let due2pi2 = cat.comp3(du, sq.e2, sp.pb.pi2);
        let cue1pi1 = cat.comp3(cu, sq.e1, sp.pb.pi1);
        let thetas: Vec<MorId> = cat
            .hom(sp.pb.apex, span.apex)
            .iter()
            .copied()
            .filter(|&t| {
                cat.comp(t, sp.eps1) == ue1
                    && cat.comp(t, sp.eps2) == ue2
                    && cat.comp(d, t) == due2pi2
                    && cat.comp(c, t) == cue1pi1
            })
            .collect();
        out.push(match thetas.as_slice() {
            [t] => CompatibilityResult {
                holds: true,
                u,
                theta: Some(*t),
                failure: None,
            },
            [] => CompatibilityResult {
                holds: false,
                u,
                theta: None,
                failure: Some(CompatibilityFailure::NoTheta),
            },
            _ => CompatibilityResult {
                holds: false,
                u,
                theta: None,
                failure: Some(CompatibilityFailure::NonUniqueTheta(thetas)),
            },
        });
    }
    Ok(out)
}

fn squares_over(
    cat: &FinCategory,
    (e, a, b, c): (ObjId, ObjId, ObjId, ObjId),
    room: usize,
) -> Vec<SplitSquare> {
    let fr = split_pairs(cat, a, b);
    let gs = split_pairs(cat, c, b);
    if fr.is_empty() || gs.is_empty() {
        return Vec::new();
    }
    let pe1 = split_pairs(cat, e, a);
    let pe2 = split_pairs(cat, e, c);
    let mut out = Vec::new();
    for &(f, r) in &fr {
        for &(g, s) in &gs {
            let (sf, rg) = (cat.comp(s, f), cat.comp(r, g));
            for &(p1, e1) in &pe1 {
                let fp1 = cat.comp(f, p1);
                for &(p2, e2) in &pe2 {
                    if cat.comp(g, p2) == fp1
                        && cat.comp(p2, e1) == sf
                        && cat.comp(p1, e2) == rg
                        && cat.comp(e1, r) == cat.comp(e2, s)
                    {
                        out.push(SplitSquare {
                            e,
                            a,
                            b,
                            c,
                            p1,
                            p2,
                            e1,
                            e2,
                            f,
                            r,
                            g,
                            s,
                        });
                        if out.len() > room {
                            return out;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Split squares in whole weight classes, lightest first, with the number of
/// `(E, A, B, C)` cells left unexamined.
pub fn split_squares(cat: &FinCategory, max: usize) -> (Vec<SplitSquare>, usize) {
    let mut cells = Vec::new();
    for e in cat.objects() {
        for a in cat.objects() {
            for b in cat.objects() {
                for c in cat.objects() {
                    let raw = cat.hom(a, b).len()
                        * cat.hom(c, b).len()
                        * cat.hom(e, a).len()
                        * cat.hom(e, c).len();
                    if raw > 0 {
                        cells.push(Cell {
                            weight: weight(cat, &[e, a, b, c]),
                            raw,
                            key: (e, a, b, c),
                        });
                    }
                }
            }
        }
    }
    let st = staged(cells, max, |&key, room| squares_over(cat, key, room));
    (st.items, st.skipped)
}

/// Split squares whose apex is the apex of `span` and whose projections are
/// its legs, in either order.
fn squares_on_span(cat: &FinCategory, span: &Span) -> Vec<SplitSquare> {
    let e = span.apex;
    let mut out = Vec::new();
    for (p1, p2) in [(span.c, span.d), (span.d, span.c)] {
        let (a, c) = (cat.cod(p1), cat.cod(p2));
        let sec1: Vec<MorId> = cat
            .hom(a, e)
            .iter()
            .copied()
            .filter(|&x| cat.comp(p1, x) == cat.id(a))
            .collect();
        let sec2: Vec<MorId> = cat
            .hom(c, e)
            .iter()
            .copied()
            .filter(|&x| cat.comp(p2, x) == cat.id(c))
            .collect();
        if sec1.is_empty() || sec2.is_empty() {
            continue;
        }
        for b in cat.objects() {
            for &(f, r) in &split_pairs(cat, a, b) {
                let fp1 = cat.comp(f, p1);
                for &(g, s) in &split_pairs(cat, c, b) {
                    if cat.comp(g, p2) != fp1 {
                        continue;
                    }
                    let (sf, rg) = (cat.comp(s, f), cat.comp(r, g));
                    for &e1 in sec1.iter().filter(|&&x| cat.comp(p2, x) == sf) {
                        let e1r = cat.comp(e1, r);
                        for &e2 in sec2
                            .iter()
                            .filter(|&&x| cat.comp(p1, x) == rg && cat.comp(x, s) == e1r)
                        {
                            out.push(SplitSquare {
                                e,
                                a,
                                b,
                                c,
                                p1,
                                p2,
                                e1,
                                e2,
                                f,
                                r,
                                g,
                                s,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn incompatibility(
    cat: &FinCategory,
    sq: &SplitSquare,
    span: &Span,
) -> Option<Option<serde_json::Value>> {
    let results = check_compatibility(cat, sq, span).ok()?;
    Some(results.into_iter().find(|r| !r.holds).map(|bad| {
        json!({
            "kind": "incompatible_split_square",
            "square": sq,
            "span": span,
            "result": bad,
        })
    }))
}

pub fn condition10(cat: &FinCategory, spec: &SpanClassSpec) -> Verdict {
    condition10_budgeted(cat, spec, EvalBudget::UNLIMITED)
}

/// Pairs `(square, span)` are taken in whole classes of combined weight.
pub fn condition10_budgeted(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    budget: EvalBudget,
) -> Verdict {
    let class = SpanClass::new(cat, spec);
    let (squares, sq_skipped) = split_squares(cat, budget.max_instances);
    let (spans, span_skipped) = class.members_within(budget.max_instances);
    let sq_w: Vec<usize> = squares
        .iter()
        .map(|q| weight(cat, &[q.e, q.a, q.b, q.c]))
        .collect();
    let span_w: Vec<usize> = spans
        .iter()
        .map(|s| weight(cat, &[s.apex, cat.cod(s.d), cat.cod(s.c)]))
        .collect();
    let mut cells = Vec::new();
    for (i, &wi) in sq_w.iter().enumerate() {
        for (j, &wj) in span_w.iter().enumerate() {
            cells.push(Cell {
                weight: wi + wj,
                raw: 1,
                key: (i, j),
            });
        }
    }
    let pairs = staged(cells, budget.max_instances, |&k, _| vec![k]);
    let mut evaluated = 0;
    let mut unevaluated = sq_skipped + span_skipped + pairs.skipped;
    // Squares sitting on the span itself come first; they are the cheapest
    // place for a counterexample and need no extra weight.
    let mut anchored = HashSet::new();
    for span in &spans {
        for sq in squares_on_span(cat, span) {
            if let Some(found) = incompatibility(cat, &sq, span) {
                evaluated += 1;
                anchored.insert((sq, *span));
                if found.is_some() {
                    return Verdict::decide(found, evaluated, unevaluated);
                }
            }
        }
    }
    for (i, j) in pairs.items {
        if anchored.contains(&(squares[i], spans[j])) {
            continue;
        }
        match incompatibility(cat, &squares[i], &spans[j]) {
            Some(found) => {
                evaluated += 1;
                if found.is_some() {
                    return Verdict::decide(found, evaluated, unevaluated);
                }
            }
            None => unevaluated += 1,
        }
    }
    Verdict::decide(None, evaluated, unevaluated)
}

/// The split square over `(d2, Δ, c1, Δ)` whose apex `E` is the equalizer of
/// `c·d1·h1` and `c·d1·h2` on the kernel pair of `h = c·d2`, together with
/// `u: E -> D`. In elements `E` holds `(x, y, z, w)` as the pair of pairs
/// `((x, y), (w, z))` and `u` returns `w`.
pub fn construct_split_square_from_span(
    cat: &FinCategory,
    span: &Span,
) -> Result<(SplitSquare, MorId)> {
    let kp = kernel_pair_construction(cat, span)?;
    let kc = PullbackData {
        apex: kp.dc,
        pi1: kp.c1,
        pi2: kp.c2,
        f: span.c,
        g: span.c,
    };
    let h = cat.comp(span.c, kp.d2);
    let kh = kernel_pair(cat, h)?;
    let cd1 = cat.comp(span.c, kp.d1);
    let eq = equalizer(cat, cat.comp(cd1, kh.pi1), cat.comp(cd1, kh.pi2))?;
    let h1 = cat.comp(kh.pi1, eq.incl);
    let h2 = cat.comp(kh.pi2, eq.incl);
    let p1 = h1;
    let p2 = mediate_pullback(cat, &kc, cat.comp(kp.d2, h1), cat.comp(kp.d2, h2))?;
    let one_dd = cat.id(kp.dd);
    let diag = mediate_pullback(cat, &kh, one_dd, one_dd)?;
    let e1 = mediate_equalizer(cat, &eq, diag)?;
    let pair = mediate_pullback(
        cat,
        &kh,
        cat.comp(kp.delta_d, kp.c1),
        cat.comp(kp.delta_d, kp.c2),
    )?;
    let e2 = mediate_equalizer(cat, &eq, pair)?;
    let u = cat.comp(kp.d1, h2);
    let sq = SplitSquare {
        e: eq.apex,
        a: kp.dd,
        b: span.apex,
        c: kp.dc,
        p1,
        p2,
        e1,
        e2,
        f: kp.d2,
        r: kp.delta_d,
        g: kp.c1,
        s: kp.delta_c,
    };
    let report = sq.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    Ok((sq, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_category_closure, stock_algebra, ClosureBudget};
    use crate::structures::enumerate_pregroupoids;

    #[test]
    fn identity_span_square_is_compatible() {
        let r = build_category_closure(
            &[("z2".into(), stock_algebra("z2").unwrap())],
            ClosureBudget {
                max_depth: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let cat = &r.category;
        let (squares, _) = split_squares(cat, 200);
        assert!(!squares.is_empty());
        for x in cat.objects() {
            let span = Span::identity(cat, x);
            for sq in &squares {
                if let Ok(results) = check_compatibility(cat, sq, &span) {
                    assert!(results.iter().all(|r| r.holds));
                }
            }
        }
    }

    #[test]
    fn constructed_square_yields_pregroupoid() {
        let r = build_category_closure(
            &[("z2".into(), stock_algebra("z2").unwrap())],
            ClosureBudget::default(),
        )
        .unwrap();
        let cat = &r.category;
        let z2 = ObjId(0);
        let span = Span::identity(cat, z2);
        let (sq, u) = construct_split_square_from_span(cat, &span).unwrap();
        let results = check_compatibility(cat, &sq, &span).unwrap();
        let hit = results.iter().find(|r| r.u == u).expect("u is admissible");
        let kp = kernel_pair_construction(cat, &span).unwrap();
        assert_eq!(enumerate_pregroupoids(cat, &kp), vec![hit.theta.unwrap()]);
    }
}
