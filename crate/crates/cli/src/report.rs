//! Text renderings; JSON output is the serde form of the same values.

use std::fmt::Write;

use malcheck_core::algebra::{ClosureResult, ClosureStatus};
use malcheck_core::theorem::{
    condition_functor, CompatibilityFailure, CompatibilityResult, Functor, Mode,
};
use malcheck_core::{TheoremReport, Value, Verdict};

fn functor_name(f: Functor) -> &'static str {
    match f {
        Functor::F0 => "multiplicative kites -> directed kites",
        Functor::F1 => "pregroupoids -> spans",
        Functor::F2 => "multiplicative graphs -> reflexive graphs",
        Functor::F3 => "internal categories -> reflexive graphs",
        Functor::F4 => "internal groupoids -> reflexive graphs",
    }
}

pub fn condition_name(i: usize) -> String {
    match condition_functor(i) {
        Some((f, Mode::Section)) => format!("{} has a lifting section", functor_name(f)),
        Some((f, Mode::Iso)) => format!("{} is an isomorphism", functor_name(f)),
        None => "split squares are compatible with spans".into(),
    }
}

fn value(v: Value) -> &'static str {
    match v {
        Value::True => "true",
        Value::False => "false",
        Value::NotEvaluable => "not evaluable",
    }
}

pub fn verdict_line(label: &str, v: &Verdict) -> String {
    let mut s = format!(
        "{label:<60} {:<13} evaluated {}, unevaluated {}",
        value(v.value),
        v.evaluated,
        v.unevaluated
    );
    if let Some(w) = &v.witness {
        let _ = write!(s, "\n    witness: {w}");
    }
    s
}

pub fn theorem(r: &TheoremReport) -> String {
    let mut s = String::new();
    let h = &r.hypotheses;
    let _ = writeln!(s, "class: {}", r.class.name());
    let _ = writeln!(
        s,
        "hypotheses: identity spans {}, pullback stable {} ({} unevaluated)",
        if h.identities { "present" } else { "missing" },
        if h.stable { "yes" } else { "no" },
        h.unevaluated
    );
    if let Some(w) = &h.stability_witness {
        let _ = writeln!(
            s,
            "    stability witness: {}",
            serde_json::to_string(w).unwrap_or_default()
        );
    }
    for (i, v) in r.conditions.all().iter().enumerate() {
        let _ = writeln!(
            s,
            "({:>2}) {}",
            i + 1,
            verdict_line(&condition_name(i + 1), v)
        );
    }
    let all = r.conditions.all();
    let verdict = if all.iter().all(|v| v.value == Value::True) {
        "all conditions hold"
    } else if r.agrees_true() {
        "no condition refuted on the evaluated instances"
    } else if r.agrees_false() {
        "all conditions fail"
    } else if r.agreement {
        "no condition decided"
    } else {
        "verdicts disagree"
    };
    let _ = writeln!(s, "agreement: {} ({verdict})", r.agreement);
    s
}

pub fn compatibility(results: &[CompatibilityResult]) -> String {
    let mut s = String::new();
    if results.is_empty() {
        s.push_str("no admissible u: E -> D; the pair is compatible\n");
    }
    for r in results {
        let _ = match (&r.failure, r.theta) {
            (None, Some(t)) => writeln!(s, "u = {}: theta = {}", r.u.0, t.0),
            (Some(CompatibilityFailure::NoTheta), _) => writeln!(
                s,
                "u = {}: no theta with theta·eps1 = u·e1 and theta·eps2 = u·e2 over the legs",
                r.u.0
            ),
            (Some(CompatibilityFailure::NonUniqueTheta(ts)), _) => {
                let ids: Vec<u32> = ts.iter().map(|t| t.0).collect();
                writeln!(s, "u = {}: theta is not unique, candidates {ids:?}", r.u.0)
            }
            (None, None) => writeln!(s, "u = {}: holds", r.u.0),
        };
    }
    s
}

pub fn closure(r: &ClosureResult) -> String {
    let cat = &r.category;
    let mut s = format!(
        "{} objects, {} morphisms\n",
        cat.num_objects(),
        cat.num_morphisms()
    );
    for o in cat.objects() {
        let label = cat.object(o).label.as_deref().unwrap_or("-");
        let _ = writeln!(
            s,
            "  {:>3} {label:<12} carrier {}",
            o.0,
            cat.carrier(o).unwrap_or(0)
        );
    }
    match &r.status {
        ClosureStatus::Closed => s.push_str("status: closed\n"),
        ClosureStatus::Truncated(missing) => {
            let _ = writeln!(
                s,
                "status: truncated, {} missing limits",
                missing.len() + r.unlisted_missing
            );
            for m in missing {
                let over: Vec<u32> = m.over.iter().map(|o| o.0).collect();
                let _ = writeln!(
                    s,
                    "  {} over {over:?}: size {} ({})",
                    m.kind, m.size, m.reason
                );
            }
            if r.unlisted_missing > 0 {
                let _ = writeln!(s, "  ... and {} more", r.unlisted_missing);
            }
        }
    }
    s
}
