//! Internal structures: spans, reflexive and multiplicative graphs,
//! pregroupoids, kites and split squares, with their law checkers.
//!
//! Records hold morphism ids only. Every law is re-checked against the
//! ambient category; nothing is trusted from construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::kernelpair::{kernel_pair_construction, KernelPairData};
use crate::limits::{
    certify_limit, mediate_pullback, pullback, split_pullback, Limit, PullbackData,
    SplitPullbackData,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    #[serde(rename = "D")]
    pub apex: ObjId,
    pub d: MorId,
    pub c: MorId,
}

impl Span {
    pub fn new(apex: ObjId, d: MorId, c: MorId) -> Self {
        Span { apex, d, c }
    }

    pub fn identity(cat: &FinCategory, x: ObjId) -> Self {
        Span {
            apex: x,
            d: cat.id(x),
            c: cat.id(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflexiveGraph {
    #[serde(rename = "C1")]
    pub c1: ObjId,
    #[serde(rename = "C0")]
    pub c0: ObjId,
    pub d: MorId,
    pub c: MorId,
    pub e: MorId,
}

impl ReflexiveGraph {
    pub fn span(&self) -> Span {
        Span {
            apex: self.c1,
            d: self.d,
            c: self.c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicativeGraph {
    pub graph: ReflexiveGraph,
    /// Composable pairs `(x, y)` with `d x = c y`.
    #[serde(rename = "C2")]
    pub c2: ObjId,
    pub pi1: MorId,
    pub pi2: MorId,
    pub e1: MorId,
    pub e2: MorId,
    pub m: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PregroupoidStructure {
    pub span: Span,
    pub kp: KernelPairData,
    pub p: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Kite {
    #[serde(rename = "A")]
    pub a: ObjId,
    #[serde(rename = "B")]
    pub b: ObjId,
    #[serde(rename = "C")]
    pub c: ObjId,
    #[serde(rename = "D")]
    pub d: ObjId,
    pub f: MorId,
    pub r: MorId,
    pub s: MorId,
    pub g: MorId,
    pub alpha: MorId,
    pub beta: MorId,
    pub gamma: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedKite {
    pub kite: Kite,
    pub dir: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KiteMultiplication {
    pub dkite: DirectedKite,
    pub pb: SplitPullbackData,
    pub m: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSquare {
    #[serde(rename = "E")]
    pub e: ObjId,
    #[serde(rename = "A")]
    pub a: ObjId,
    #[serde(rename = "B")]
    pub b: ObjId,
    #[serde(rename = "C")]
    pub c: ObjId,
    pub p1: MorId,
    pub p2: MorId,
    pub e1: MorId,
    pub e2: MorId,
    pub f: MorId,
    pub r: MorId,
    pub g: MorId,
    pub s: MorId,
}

/// Names of violated laws; empty iff the structure is lawful.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Laws<'a> {
    cat: &'a FinCategory,
    report: LawReport,
    typed: bool,
}

impl<'a> Laws<'a> {
    fn new(cat: &'a FinCategory) -> Self {
        Laws {
            cat,
            report: LawReport::default(),
            typed: true,
        }
    }

    fn arrow(&mut self, name: &str, f: MorId, dom: ObjId, cod: ObjId) {
        let ok = f.idx() < self.cat.num_morphisms()
            && dom.idx() < self.cat.num_objects()
            && cod.idx() < self.cat.num_objects()
            && self.cat.dom(f) == dom
            && self.cat.cod(f) == cod;
        if !ok {
            self.typed = false;
            self.report.violations.push(format!("{name} is ill-typed"));
        }
    }

    fn law(&mut self, name: &str, lhs: &[MorId], rhs: &[MorId]) {
        if !self.typed {
            return;
        }
        let path = |p: &[MorId]| {
            let mut it = p.iter().rev();
            let mut acc = *it.next().unwrap();
            for &m in it {
                if self.cat.cod(acc) != self.cat.dom(m) {
                    return None;
                }
                acc = self.cat.comp(m, acc);
            }
            Some(acc)
        };
        match (path(lhs), path(rhs)) {
            (Some(l), Some(r)) if l == r => {}
            _ => self.report.violations.push(name.to_string()),
        }
    }

    fn one(&self, o: ObjId) -> MorId {
        self.cat.id(o)
    }

    fn finish(self) -> LawReport {
        self.report
    }
}

/// Law checking for every structure record. Paths are written in diagram
/// order: `&[g, f]` means `g∘f`.
pub trait Validate {
    fn validate(&self, cat: &FinCategory) -> LawReport;
}

impl Validate for Span {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        if self.d.idx() >= cat.num_morphisms() || self.c.idx() >= cat.num_morphisms() {
            l.report
                .violations
                .push("span legs are unknown morphisms".into());
            return l.finish();
        }
        l.arrow("d", self.d, self.apex, cat.cod(self.d));
        l.arrow("c", self.c, self.apex, cat.cod(self.c));
        l.finish()
    }
}

impl Validate for ReflexiveGraph {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        l.arrow("d", self.d, self.c1, self.c0);
        l.arrow("c", self.c, self.c1, self.c0);
        l.arrow("e", self.e, self.c0, self.c1);
        let one = l.one(self.c0);
        l.law("d·e = 1", &[self.d, self.e], &[one]);
        l.law("c·e = 1", &[self.c, self.e], &[one]);
        l.finish()
    }
}

impl Validate for MultiplicativeGraph {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        let mut inner = self.graph.validate(cat);
        if !inner.is_empty() {
            return inner;
        }
        let g = &self.graph;
        l.arrow("π1", self.pi1, self.c2, g.c1);
        l.arrow("π2", self.pi2, self.c2, g.c1);
        l.arrow("e1", self.e1, g.c1, self.c2);
        l.arrow("e2", self.e2, g.c1, self.c2);
        l.arrow("m", self.m, self.c2, g.c1);
        l.law("d·π1 = c·π2", &[g.d, self.pi1], &[g.c, self.pi2]);
        let one = l.one(g.c1);
        l.law("π1·e1 = 1", &[self.pi1, self.e1], &[one]);
        l.law("π2·e1 = e·d", &[self.pi2, self.e1], &[g.e, g.d]);
        l.law("π1·e2 = e·c", &[self.pi1, self.e2], &[g.e, g.c]);
        l.law("π2·e2 = 1", &[self.pi2, self.e2], &[one]);
        l.law("m·e1 = 1", &[self.m, self.e1], &[one]);
        l.law("m·e2 = 1", &[self.m, self.e2], &[one]);
        l.law("d·m = d·π2", &[g.d, self.m], &[g.d, self.pi2]);
        l.law("c·m = c·π1", &[g.c, self.m], &[g.c, self.pi1]);
        let mut report = l.finish();
        if report.is_empty() {
            let pb = PullbackData {
                apex: self.c2,
                pi1: self.pi1,
                pi2: self.pi2,
                f: g.d,
                g: g.c,
            };
            if !certify_limit(cat, &Limit::Pullback(pb)).certified {
                report
                    .violations
                    .push("(C2, π1, π2) is not a pullback of (d, c)".into());
            }
        }
        inner.violations.append(&mut report.violations);
        inner
    }
}

impl Validate for PregroupoidStructure {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        let (s, k) = (&self.span, &self.kp);
        l.arrow("p", self.p, k.ddc, s.apex);
        l.law("p·e1 = d1", &[self.p, k.e1], &[k.d1]);
        l.law("p·e2 = c2", &[self.p, k.e2], &[k.c2]);
        l.law("d·p = d·c2·p2", &[s.d, self.p], &[s.d, k.c2, k.p2]);
        l.law("c·p = c·d1·p1", &[s.c, self.p], &[s.c, k.d1, k.p1]);
        l.finish()
    }
}

impl Validate for Kite {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        l.arrow("f", self.f, self.a, self.b);
        l.arrow("r", self.r, self.b, self.a);
        l.arrow("s", self.s, self.b, self.c);
        l.arrow("g", self.g, self.c, self.b);
        l.arrow("α", self.alpha, self.a, self.d);
        l.arrow("β", self.beta, self.b, self.d);
        l.arrow("γ", self.gamma, self.c, self.d);
        let one = l.one(self.b);
        l.law("f·r = 1", &[self.f, self.r], &[one]);
        l.law("g·s = 1", &[self.g, self.s], &[one]);
        l.law("α·r = β", &[self.alpha, self.r], &[self.beta]);
        l.law("γ·s = β", &[self.gamma, self.s], &[self.beta]);
        l.finish()
    }
}

impl Validate for DirectedKite {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut report = self.kite.validate(cat);
        let mut dir = self.dir.validate(cat);
        report.violations.append(&mut dir.violations);
        if !report.is_empty() {
            return report;
        }
        let k = &self.kite;
        let mut l = Laws::new(cat);
        if self.dir.apex != k.d {
            l.report
                .violations
                .push("direction span is not on D".into());
            return l.finish();
        }
        l.law(
            "d·α = d·β·f",
            &[self.dir.d, k.alpha],
            &[self.dir.d, k.beta, k.f],
        );
        l.law(
            "c·β·g = c·γ",
            &[self.dir.c, k.beta, k.g],
            &[self.dir.c, k.gamma],
        );
        l.finish()
    }
}

impl Validate for KiteMultiplication {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut report = self.dkite.validate(cat);
        if !report.is_empty() {
            return report;
        }
        let (k, dir, pb) = (&self.dkite.kite, &self.dkite.dir, &self.pb);
        let mut l = Laws::new(cat);
        l.arrow("m", self.m, pb.pb.apex, k.d);
        l.arrow("π1", pb.pb.pi1, pb.pb.apex, k.a);
        l.arrow("π2", pb.pb.pi2, pb.pb.apex, k.c);
        l.law("f·π1 = g·π2", &[k.f, pb.pb.pi1], &[k.g, pb.pb.pi2]);
        l.law("π1·ε1 = 1", &[pb.pb.pi1, pb.eps1], &[cat.id(k.a)]);
        l.law("π2·ε1 = s·f", &[pb.pb.pi2, pb.eps1], &[k.s, k.f]);
        l.law("π1·ε2 = r·g", &[pb.pb.pi1, pb.eps2], &[k.r, k.g]);
        l.law("π2·ε2 = 1", &[pb.pb.pi2, pb.eps2], &[cat.id(k.c)]);
        l.law(
            "d·m = d·γ·π2",
            &[dir.d, self.m],
            &[dir.d, k.gamma, pb.pb.pi2],
        );
        l.law(
            "c·m = c·α·π1",
            &[dir.c, self.m],
            &[dir.c, k.alpha, pb.pb.pi1],
        );
        l.law("m·ε1 = α", &[self.m, pb.eps1], &[k.alpha]);
        l.law("m·ε2 = γ", &[self.m, pb.eps2], &[k.gamma]);
        report.violations.append(&mut l.finish().violations);
        report
    }
}

impl Validate for SplitSquare {
    fn validate(&self, cat: &FinCategory) -> LawReport {
        let mut l = Laws::new(cat);
        l.arrow("p1", self.p1, self.e, self.a);
        l.arrow("p2", self.p2, self.e, self.c);
        l.arrow("e1", self.e1, self.a, self.e);
        l.arrow("e2", self.e2, self.c, self.e);
        l.arrow("f", self.f, self.a, self.b);
        l.arrow("r", self.r, self.b, self.a);
        l.arrow("g", self.g, self.c, self.b);
        l.arrow("s", self.s, self.b, self.c);
        l.law("f·r = 1", &[self.f, self.r], &[cat.id(self.b)]);
        l.law("g·s = 1", &[self.g, self.s], &[cat.id(self.b)]);
        l.law("p1·e1 = 1", &[self.p1, self.e1], &[cat.id(self.a)]);
        l.law("p2·e2 = 1", &[self.p2, self.e2], &[cat.id(self.c)]);
        l.law("p2·e1 = s·f", &[self.p2, self.e1], &[self.s, self.f]);
        l.law("p1·e2 = r·g", &[self.p1, self.e2], &[self.r, self.g]);
        l.law("g·p2 = f·p1", &[self.g, self.p2], &[self.f, self.p1]);
        l.law("e1·r = e2·s", &[self.e1, self.r], &[self.e2, self.s]);
        l.finish()
    }
}

/// The square a split pullback forms with its sections.
pub fn split_square_of(
    cat: &FinCategory,
    sp: &SplitPullbackData,
    r: MorId,
    s: MorId,
) -> SplitSquare {
    SplitSquare {
        e: sp.pb.apex,
        a: cat.dom(sp.pb.f),
        b: cat.cod(sp.pb.f),
        c: cat.dom(sp.pb.g),
        p1: sp.pb.pi1,
        p2: sp.pb.pi2,
        e1: sp.eps1,
        e2: sp.eps2,
        f: sp.pb.f,
        r,
        g: sp.pb.g,
        s,
    }
}

/// Designated pullback `C2` of `(d, c)` with its induced sections.
pub fn multiplication_frame(cat: &FinCategory, rg: &ReflexiveGraph) -> Result<MultiplicativeGraph> {
    let report = rg.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    let pb = pullback(cat, rg.d, rg.c)?;
    let one = cat.id(rg.c1);
    let e1 = mediate_pullback(cat, &pb, one, cat.comp(rg.e, rg.d))?;
    let e2 = mediate_pullback(cat, &pb, cat.comp(rg.e, rg.c), one)?;
    Ok(MultiplicativeGraph {
        graph: *rg,
        c2: pb.apex,
        pi1: pb.pi1,
        pi2: pb.pi2,
        e1,
        e2,
        m: one,
    })
}

/// Every lawful multiplication `C2 -> C1`, in ascending id order.
pub fn enumerate_multiplications(cat: &FinCategory, rg: &ReflexiveGraph) -> Result<Vec<MorId>> {
    let fr = multiplication_frame(cat, rg)?;
    Ok(multiplications_in(cat, &fr))
}

pub(crate) fn multiplications_in(cat: &FinCategory, fr: &MultiplicativeGraph) -> Vec<MorId> {
    let g = &fr.graph;
    let one = cat.id(g.c1);
    let dp2 = cat.comp(g.d, fr.pi2);
    let cp1 = cat.comp(g.c, fr.pi1);
    cat.hom(fr.c2, g.c1)
        .iter()
        .copied()
        .filter(|&m| {
            cat.comp(m, fr.e1) == one
                && cat.comp(m, fr.e2) == one
                && cat.comp(g.d, m) == dp2
                && cat.comp(g.c, m) == cp1
        })
        .collect()
}

/// Triples `(x, y, z)` with the two induced maps `1×m` and `m×1` into `C2`.
pub fn check_internal_category(cat: &FinCategory, mg: &MultiplicativeGraph) -> Result<bool> {
    let c3 = pullback(cat, mg.pi2, mg.pi1)?;
    let c2 = PullbackData {
        apex: mg.c2,
        pi1: mg.pi1,
        pi2: mg.pi2,
        f: mg.graph.d,
        g: mg.graph.c,
    };
    let one_m = mediate_pullback(cat, &c2, cat.comp(mg.pi1, c3.pi1), cat.comp(mg.m, c3.pi2))?;
    let m_one = mediate_pullback(cat, &c2, cat.comp(mg.m, c3.pi1), cat.comp(mg.pi2, c3.pi2))?;
    Ok(cat.comp(mg.m, one_m) == cat.comp(mg.m, m_one))
}

/// Whether `(C2; m, π2)` is a pullback of `(d, d)`: every arrow is invertible.
pub fn check_groupoid(cat: &FinCategory, ic: &MultiplicativeGraph) -> bool {
    let d = ic.graph.d;
    let sq = PullbackData {
        apex: ic.c2,
        pi1: ic.m,
        pi2: ic.pi2,
        f: d,
        g: d,
    };
    certify_limit(cat, &Limit::Pullback(sq)).certified
}

/// Every `p: D(d,c) -> D` satisfying the pregroupoid laws.
pub fn enumerate_pregroupoids(cat: &FinCategory, kp: &KernelPairData) -> Vec<MorId> {
    let s = &kp.span;
    let dc2p2 = cat.comp3(s.d, kp.c2, kp.p2);
    let cd1p1 = cat.comp3(s.c, kp.d1, kp.p1);
    cat.hom(kp.ddc, s.apex)
        .iter()
        .copied()
        .filter(|&p| {
            cat.comp(p, kp.e1) == kp.d1
                && cat.comp(p, kp.e2) == kp.c2
                && cat.comp(s.d, p) == dc2p2
                && cat.comp(s.c, p) == cd1p1
        })
        .collect()
}

/// Every lawful kite multiplication over the designated split pullback.
pub fn enumerate_kite_multiplications(
    cat: &FinCategory,
    dk: &DirectedKite,
) -> Result<Vec<KiteMultiplication>> {
    let report = dk.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    let k = &dk.kite;
    let sp = split_pullback(cat, k.f, k.r, k.g, k.s)?;
    let dgp2 = cat.comp3(dk.dir.d, k.gamma, sp.pb.pi2);
    let cap1 = cat.comp3(dk.dir.c, k.alpha, sp.pb.pi1);
    Ok(cat
        .hom(sp.pb.apex, k.d)
        .iter()
        .copied()
        .filter(|&m| {
            cat.comp(m, sp.eps1) == k.alpha
                && cat.comp(m, sp.eps2) == k.gamma
                && cat.comp(dk.dir.d, m) == dgp2
                && cat.comp(dk.dir.c, m) == cap1
        })
        .map(|m| KiteMultiplication {
            dkite: *dk,
            pb: sp,
            m,
        })
        .collect())
}

/// Inputs accepted by [`derive_kite`]; the variant fixes the kind.
#[derive(Clone, Copy, Debug)]
pub enum KiteSource<'a> {
    Graph(&'a ReflexiveGraph),
    Multiplicative(&'a MultiplicativeGraph),
    Category(&'a MultiplicativeGraph),
    GraphMorphism {
        from: &'a ReflexiveGraph,
        to: &'a ReflexiveGraph,
        f1: MorId,
        f0: MorId,
    },
    Span(&'a Span),
    Square(&'a SplitSquare),
}

impl KiteSource<'_> {
    pub fn kind(&self) -> u8 {
        match self {
            KiteSource::Graph(_) => 1,
            KiteSource::Multiplicative(_) => 2,
            KiteSource::Category(_) => 3,
            KiteSource::GraphMorphism { .. } => 4,
            KiteSource::Span(_) => 5,
            KiteSource::Square(_) => 6,
        }
    }
}

/// The six directed kites.
pub fn derive_kite(cat: &FinCategory, src: KiteSource<'_>) -> Result<DirectedKite> {
    let dk = match src {
        KiteSource::Graph(g) => DirectedKite {
            kite: Kite {
                a: g.c1,
                b: g.c0,
                c: g.c1,
                d: g.c1,
                f: g.d,
                r: g.e,
                s: g.e,
                g: g.c,
                alpha: cat.id(g.c1),
                beta: g.e,
                gamma: cat.id(g.c1),
            },
            dir: g.span(),
        },
        KiteSource::Multiplicative(mg) => DirectedKite {
            kite: Kite {
                a: mg.c2,
                b: mg.graph.c1,
                c: mg.c2,
                d: mg.graph.c1,
                f: mg.pi2,
                r: mg.e2,
                s: mg.e1,
                g: mg.pi1,
                alpha: mg.m,
                beta: cat.id(mg.graph.c1),
                gamma: mg.m,
            },
            dir: mg.graph.span(),
        },
        KiteSource::Category(ic) => DirectedKite {
            kite: Kite {
                a: ic.c2,
                b: ic.graph.c1,
                c: ic.c2,
                d: ic.graph.c1,
                f: ic.m,
                r: ic.e2,
                s: ic.e1,
                g: ic.m,
                alpha: ic.pi2,
                beta: cat.id(ic.graph.c1),
                gamma: ic.pi1,
            },
            dir: ic.graph.span(),
        },
        KiteSource::GraphMorphism { from, to, f1, f0 } => {
            if cat.comp(to.d, f1) != cat.comp(f0, from.d)
                || cat.comp(to.c, f1) != cat.comp(f0, from.c)
                || cat.comp(f1, from.e) != cat.comp(to.e, f0)
            {
                return Err(Error::InvalidStructure(
                    "(f1, f0) is not a graph morphism".into(),
                ));
            }
            DirectedKite {
                kite: Kite {
                    a: from.c1,
                    b: from.c0,
                    c: from.c1,
                    d: to.c1,
                    f: from.d,
                    r: from.e,
                    s: from.e,
                    g: from.c,
                    alpha: f1,
                    beta: cat.comp(to.e, f0),
                    gamma: f1,
                },
                dir: to.span(),
            }
        }
        KiteSource::Span(span) => {
            let kp = kernel_pair_construction(cat, span)?;
            DirectedKite {
                kite: Kite {
                    a: kp.dd,
                    b: span.apex,
                    c: kp.dc,
                    d: span.apex,
                    f: kp.d2,
                    r: kp.delta_d,
                    s: kp.delta_c,
                    g: kp.c1,
                    alpha: kp.d1,
                    beta: cat.id(span.apex),
                    gamma: kp.c2,
                },
                dir: *span,
            }
        }
        KiteSource::Square(sq) => {
            let beta = cat.comp(sq.e1, sq.r);
            DirectedKite {
                kite: Kite {
                    a: sq.a,
                    b: sq.b,
                    c: sq.c,
                    d: sq.e,
                    f: sq.f,
                    r: sq.r,
                    s: sq.s,
                    g: sq.g,
                    alpha: sq.e1,
                    beta,
                    gamma: sq.e2,
                },
                dir: Span {
                    apex: sq.e,
                    d: sq.p2,
                    c: sq.p1,
                },
            }
        }
    };
    let report = dk.validate(cat);
    if !report.is_empty() {
        return Err(Error::InvalidStructure(report.violations.join("; ")));
    }
    Ok(dk)
}

/// All reflexive graphs of `cat`: `(C1, C0, d, c, e)` with `d e = c e = 1`.
pub fn reflexive_graphs(cat: &FinCategory) -> Vec<ReflexiveGraph> {
    let mut out = Vec::new();
    for c0 in cat.objects() {
        for c1 in cat.objects() {
            let one = cat.id(c0);
            for &e in cat.hom(c0, c1) {
                let sections: Vec<MorId> = cat
                    .hom(c1, c0)
                    .iter()
                    .copied()
                    .filter(|&d| cat.comp(d, e) == one)
                    .collect();
                for &d in &sections {
                    for &c in &sections {
                        out.push(ReflexiveGraph { c1, c0, d, c, e });
                    }
                }
            }
        }
    }
    out
}

/// All spans of `cat`.
pub fn all_spans(cat: &FinCategory) -> Vec<Span> {
    let mut out = Vec::new();
    for apex in cat.objects() {
        let outgoing: Vec<MorId> = cat
            .objects()
            .flat_map(|x| cat.hom(apex, x).iter().copied())
            .collect();
        for &d in &outgoing {
            for &c in &outgoing {
                out.push(Span { apex, d, c });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain_category, terminal_category, Morphism, Object};

    fn sets(sizes: &[usize], maps: &[(u32, u32, Vec<u32>)]) -> FinCategory {
        let objects = sizes
            .iter()
            .map(|&s| Object {
                label: None,
                carrier: Some(s),
            })
            .collect();
        let morphisms = maps
            .iter()
            .map(|(d, c, m)| Morphism {
                dom: ObjId(*d),
                cod: ObjId(*c),
                label: None,
                map: Some(m.clone()),
            })
            .collect();
        FinCategory::generated(objects, morphisms).unwrap()
    }

    fn identity_graph(cat: &FinCategory, x: ObjId) -> ReflexiveGraph {
        let one = cat.id(x);
        ReflexiveGraph {
            c1: x,
            c0: x,
            d: one,
            c: one,
            e: one,
        }
    }

    /// Pair groupoid on a 2-element set: arrows `(i, j)` encoded as `2i + j`,
    /// `d(i, j) = j`, `c(i, j) = i`, composable pairs `((i,j),(j,k))`.
    fn pair_groupoid() -> (FinCategory, ReflexiveGraph) {
        // Objects: 0 = C0 (2), 1 = C1 (4), 2 = C2 (8), 3 = C3 (16).
        let mut maps = Vec::new();
        let arrows: Vec<(u32, u32)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        let enc = |(i, j): (u32, u32)| 2 * i + j;
        maps.push((1, 0, arrows.iter().map(|a| a.1).collect())); // d
        maps.push((1, 0, arrows.iter().map(|a| a.0).collect())); // c
        maps.push((0, 1, (0..2).map(|i| enc((i, i))).collect())); // e
                                                                  // C2 in canonical pullback order of (d, c): pairs (x, y) with d x = c y.
        let mut pairs = Vec::new();
        for x in &arrows {
            for y in &arrows {
                if x.1 == y.0 {
                    pairs.push((*x, *y));
                }
            }
        }
        maps.push((2, 1, pairs.iter().map(|p| enc(p.0)).collect())); // π1
        maps.push((2, 1, pairs.iter().map(|p| enc(p.1)).collect())); // π2
                                                                     // x ∘ y with y: j -> k? Here d x = c y means x = (i, j), y = (j, k); m = (i, k).
        maps.push((2, 1, pairs.iter().map(|p| enc((p.0 .0, p.1 .1))).collect())); // m
        let index =
            |q: ((u32, u32), (u32, u32))| pairs.iter().position(|&p| p == q).unwrap() as u32;
        maps.push((
            1,
            2,
            arrows.iter().map(|&x| index((x, (x.1, x.1)))).collect(),
        )); // e1
        maps.push((
            1,
            2,
            arrows.iter().map(|&x| index(((x.0, x.0), x))).collect(),
        )); // e2
        let mut triples = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate() {
                if p.1 == q.0 {
                    triples.push((i, j));
                }
            }
        }
        maps.push((3, 2, triples.iter().map(|t| t.0 as u32).collect()));
        maps.push((3, 2, triples.iter().map(|t| t.1 as u32).collect()));
        // 1×m and m×1 into C2.
        let one_m: Vec<u32> = triples
            .iter()
            .map(|&(i, j)| index((pairs[i].0, (pairs[j].0 .0, pairs[j].1 .1))))
            .collect();
        let m_one: Vec<u32> = triples
            .iter()
            .map(|&(i, j)| index(((pairs[i].0 .0, pairs[i].1 .1), pairs[j].1)))
            .collect();
        maps.push((3, 2, one_m));
        maps.push((3, 2, m_one));
        let cat = sets(&[2, 4, 8, 16], &maps);
        let find = |d: u32, c: u32, m: Vec<u32>| cat.lookup_map(ObjId(d), ObjId(c), &m).unwrap();
        let rg = ReflexiveGraph {
            c1: ObjId(1),
            c0: ObjId(0),
            d: find(1, 0, maps[0].2.clone()),
            c: find(1, 0, maps[1].2.clone()),
            e: find(0, 1, maps[2].2.clone()),
        };
        (cat, rg)
    }

    #[test]
    fn identity_graph_is_lawful_with_one_multiplication() {
        let cat = terminal_category();
        let rg = identity_graph(&cat, ObjId(0));
        assert!(rg.validate(&cat).is_empty());
        let ms = enumerate_multiplications(&cat, &rg).unwrap();
        assert_eq!(ms.len(), 1);
        let mg = MultiplicativeGraph {
            m: ms[0],
            ..multiplication_frame(&cat, &rg).unwrap()
        };
        assert!(mg.validate(&cat).is_empty());
        assert!(check_internal_category(&cat, &mg).unwrap());
        assert!(check_groupoid(&cat, &mg));
    }

    #[test]
    fn pair_groupoid_is_an_internal_groupoid() {
        let (cat, rg) = pair_groupoid();
        let ms = enumerate_multiplications(&cat, &rg).unwrap();
        assert!(!ms.is_empty());
        let fr = multiplication_frame(&cat, &rg).unwrap();
        // The category contains only the generated maps, so m is the composition.
        let m = ms[0];
        assert_eq!(cat.map(m).unwrap(), &[0, 1, 0, 1, 2, 3, 2, 3]);
        let mg = MultiplicativeGraph { m, ..fr };
        assert!(mg.validate(&cat).is_empty());
        assert!(check_internal_category(&cat, &mg).unwrap());
    }

    #[test]
    fn broken_multiplication_is_named() {
        let (cat, rg) = pair_groupoid();
        let fr = multiplication_frame(&cat, &rg).unwrap();
        let mg = MultiplicativeGraph { m: fr.pi1, ..fr };
        let report = mg.validate(&cat);
        assert!(
            report.violations.iter().any(|v| v == "d·m = d·π2"),
            "{report:?}"
        );
    }

    #[test]
    fn graph_kite_multiplications_are_graph_multiplications() {
        let (cat, rg) = pair_groupoid();
        let dk = derive_kite(&cat, KiteSource::Graph(&rg)).unwrap();
        let kms = enumerate_kite_multiplications(&cat, &dk).unwrap();
        let ms = enumerate_multiplications(&cat, &rg).unwrap();
        assert_eq!(kms.iter().map(|k| k.m).collect::<Vec<_>>(), ms);
        for km in &kms {
            assert!(km.validate(&cat).is_empty());
        }
    }

    #[test]
    fn degenerate_kite_has_exactly_one_multiplication() {
        let cat = terminal_category();
        let one = cat.id(ObjId(0));
        let x = ObjId(0);
        let dk = DirectedKite {
            kite: Kite {
                a: x,
                b: x,
                c: x,
                d: x,
                f: one,
                r: one,
                s: one,
                g: one,
                alpha: one,
                beta: one,
                gamma: one,
            },
            dir: Span::identity(&cat, x),
        };
        assert_eq!(enumerate_kite_multiplications(&cat, &dk).unwrap().len(), 1);
        let rg = identity_graph(&cat, x);
        let dk1 = derive_kite(&cat, KiteSource::Graph(&rg)).unwrap();
        assert_eq!(dk1, dk);
    }

    #[test]
    fn chain_graphs_and_spans() {
        let cat = chain_category(2);
        // In a poset every reflexive graph is an identity graph.
        for rg in reflexive_graphs(&cat) {
            assert_eq!(rg.c0, rg.c1);
        }
        assert_eq!(all_spans(&cat).len(), 4 + 1);
    }
}
