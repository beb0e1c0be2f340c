//! Structures built from one another: a kite multiplication from a
//! pregroupoid structure, and a pregroupoid structure from a multiplication
//! on the reflexive graph of a span's kernel pairs.

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId};
use crate::kernelpair::{k1_of, kernel_pair_construction};
use crate::limits::{mediate_pullback, split_pullback, PullbackData};
use crate::structures::{
    multiplication_frame, DirectedKite, KiteMultiplication, PregroupoidStructure, Span, Validate,
};

fn invalid(report: crate::structures::LawReport) -> Error {
    Error::InvalidStructure(report.violations.join("; "))
}

/// `m = p·θ`, where `θ: A×_B C -> D(d,c)` sends `(a, c)` to
/// `(α a, β f a, γ c)`.
pub fn kite_multiplication_from_pregroupoid(
    cat: &FinCategory,
    dk: &DirectedKite,
    p: &PregroupoidStructure,
) -> Result<KiteMultiplication> {
    if dk.dir != p.span {
        return Err(Error::InvalidStructure(
            "kite direction differs from the pregroupoid span".into(),
        ));
    }
    if !dk.validate(cat).is_empty() {
        return Err(Error::NonCommutingCone);
    }
    let report = p.validate(cat);
    if !report.is_empty() {
        return Err(invalid(report));
    }
    let (k, kp) = (&dk.kite, &p.kp);
    let sp = split_pullback(cat, k.f, k.r, k.g, k.s)?;
    let kd = PullbackData {
        apex: kp.dd,
        pi1: kp.d1,
        pi2: kp.d2,
        f: p.span.d,
        g: p.span.d,
    };
    let kc = PullbackData {
        apex: kp.dc,
        pi1: kp.c1,
        pi2: kp.c2,
        f: p.span.c,
        g: p.span.c,
    };
    let pdc = PullbackData {
        apex: kp.ddc,
        pi1: kp.p1,
        pi2: kp.p2,
        f: kp.d2,
        g: kp.c1,
    };
    let left = mediate_pullback(
        cat,
        &kd,
        cat.comp(k.alpha, sp.pb.pi1),
        cat.comp3(k.beta, k.f, sp.pb.pi1),
    )?;
    let right = mediate_pullback(
        cat,
        &kc,
        cat.comp3(k.beta, k.g, sp.pb.pi2),
        cat.comp(k.gamma, sp.pb.pi2),
    )?;
    let theta = mediate_pullback(cat, &pdc, left, right)?;
    let km = KiteMultiplication {
        dkite: *dk,
        pb: sp,
        m: cat.comp(p.p, theta),
    };
    let report = km.validate(cat);
    if !report.is_empty() {
        return Err(invalid(report));
    }
    Ok(km)
}

/// `p(x, y, z)` is the middle entry of the composite of the arrows
/// `(z, z, y)` and `(y, x, x)` of the reflexive graph `K1(span)`.
pub fn pregroupoid_from_graph_multiplication(
    cat: &FinCategory,
    span: &Span,
    m_on_k1: MorId,
) -> Result<PregroupoidStructure> {
    let kp = kernel_pair_construction(cat, span)?;
    let graph = k1_of(cat, &kp);
    let frame = multiplication_frame(cat, &graph)?;
    let kd = PullbackData {
        apex: kp.dd,
        pi1: kp.d1,
        pi2: kp.d2,
        f: span.d,
        g: span.d,
    };
    let kc = PullbackData {
        apex: kp.dc,
        pi1: kp.c1,
        pi2: kp.c2,
        f: span.c,
        g: span.c,
    };
    let pdc = PullbackData {
        apex: kp.ddc,
        pi1: kp.p1,
        pi2: kp.p2,
        f: kp.d2,
        g: kp.c1,
    };
    let c2 = PullbackData {
        apex: frame.c2,
        pi1: frame.pi1,
        pi2: frame.pi2,
        f: graph.d,
        g: graph.c,
    };
    let twist_d = mediate_pullback(cat, &kd, kp.d2, kp.d1)?;
    let twist_c = mediate_pullback(cat, &kc, kp.c2, kp.c1)?;
    // (y, x, x) and (z, z, y).
    let later = mediate_pullback(
        cat,
        &pdc,
        cat.comp(twist_d, kp.p1),
        cat.comp3(kp.delta_c, kp.d1, kp.p1),
    )?;
    let earlier = mediate_pullback(
        cat,
        &pdc,
        cat.comp3(kp.delta_d, kp.c2, kp.p2),
        cat.comp(twist_c, kp.p2),
    )?;
    let pair = mediate_pullback(cat, &c2, later, earlier)?;
    let p = cat.comp_path(&[pair, m_on_k1, kp.p1, kp.d2]);
    let pre = PregroupoidStructure { span: *span, kp, p };
    let report = pre.validate(cat);
    if !report.is_empty() {
        return Err(invalid(report));
    }
    Ok(pre)
}
