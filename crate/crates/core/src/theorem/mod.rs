//! Decision procedures for the ten equivalent conditions, the compatibility
//! test between split squares and spans, the explicit constructions linking
//! the conditions, and the agreement report.
//!
//! Quantifier ranges are finite but can be large. Every checker accepts an
//! [`EvalBudget`]; instances it does not reach, and instances whose auxiliary
//! limits are missing from the category, are counted as unevaluated. A
//! counterexample among the evaluated instances decides `False` regardless.

mod compat;
mod constructions;
mod csp;
mod functors;

use serde::{Deserialize, Serialize};

use crate::budget::EvalBudget;
use crate::fincat::FinCategory;
use crate::spanclass::{
    contains_identity_spans, is_pullback_stable_budgeted, SpanClassSpec, StabilityWitness,
};

pub use compat::{
    check_compatibility, condition10, condition10_budgeted, construct_split_square_from_span,
    split_squares, CompatibilityFailure, CompatibilityResult,
};
pub use constructions::{
    kite_multiplication_from_pregroupoid, pregroupoid_from_graph_multiplication,
};
pub use functors::{functor_condition, functor_condition_budgeted, Functor, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    True,
    False,
    NotEvaluable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub evaluated: usize,
    /// Instances with missing limits plus those beyond the budget.
    pub unevaluated: usize,
}

impl Verdict {
    pub(crate) fn decide(
        witness: Option<serde_json::Value>,
        evaluated: usize,
        unevaluated: usize,
    ) -> Verdict {
        let value = match (&witness, unevaluated) {
            (Some(_), _) => Value::False,
            (None, 0) => Value::True,
            (None, _) => Value::NotEvaluable,
        };
        Verdict {
            value,
            witness,
            evaluated,
            unevaluated,
        }
    }

    pub fn is_decisive(&self) -> bool {
        self.value != Value::NotEvaluable
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub identities: bool,
    pub stable: bool,
    /// Stability instances not evaluated.
    pub unevaluated: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability_witness: Option<StabilityWitness>,
}

impl Hypotheses {
    /// No identity span is missing and no stability counterexample was found.
    pub fn pass(&self) -> bool {
        self.identities && self.stable
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: Verdict,
    pub c4: Verdict,
    pub c5: Verdict,
    pub c6: Verdict,
    pub c7: Verdict,
    pub c8: Verdict,
    pub c9: Verdict,
    pub c10: Verdict,
}

impl Conditions {
    pub fn all(&self) -> [&Verdict; 10] {
        [
            &self.c1, &self.c2, &self.c3, &self.c4, &self.c5, &self.c6, &self.c7, &self.c8,
            &self.c9, &self.c10,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub class: SpanClassSpec,
    pub hypotheses: Hypotheses,
    pub conditions: Conditions,
    /// All decisive verdicts are equal.
    pub agreement: bool,
}

impl TheoremReport {
    /// No condition is refuted and each was checked on at least one instance.
    pub fn agrees_true(&self) -> bool {
        self.agreement
            && self
                .conditions
                .all()
                .iter()
                .all(|v| v.value != Value::False && v.evaluated > 0)
    }

    /// Some condition is refuted and none is established.
    pub fn agrees_false(&self) -> bool {
        self.agreement
            && self
                .conditions
                .all()
                .iter()
                .any(|v| v.value == Value::False)
    }

    pub fn witnesses(&self) -> Vec<(usize, &serde_json::Value)> {
        self.conditions
            .all()
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.witness.as_ref().map(|w| (i + 1, w)))
            .collect()
    }
}

/// Condition `i` (1-based) as a functor test.
pub fn condition_functor(i: usize) -> Option<(Functor, Mode)> {
    Some(match i {
        1 => (Functor::F4, Mode::Section),
        2 => (Functor::F3, Mode::Section),
        3 => (Functor::F2, Mode::Section),
        4 => (Functor::F1, Mode::Section),
        5 => (Functor::F0, Mode::Iso),
        6 => (Functor::F1, Mode::Iso),
        7 => (Functor::F2, Mode::Iso),
        8 => (Functor::F3, Mode::Iso),
        9 => (Functor::F4, Mode::Iso),
        _ => return None,
    })
}

pub fn theorem_report(cat: &FinCategory, spec: &SpanClassSpec) -> TheoremReport {
    theorem_report_budgeted(cat, spec, EvalBudget::UNLIMITED)
}

pub fn theorem_report_budgeted(
    cat: &FinCategory,
    spec: &SpanClassSpec,
    budget: EvalBudget,
) -> TheoremReport {
    let ids = contains_identity_spans(cat, spec);
    let stab = is_pullback_stable_budgeted(cat, spec, budget);
    let hypotheses = Hypotheses {
        identities: ids.holds,
        stable: stab.stable,
        unevaluated: stab.unevaluated,
        stability_witness: stab.witness,
    };
    let graphs = functors::graph_problems(cat, spec, budget);
    let spans = functors::span_problem(cat, spec, budget);
    let kites = functors::kite_problem(cat, spec, budget);
    let conditions = Conditions {
        c1: graphs[2].decide(Mode::Section),
        c2: graphs[1].decide(Mode::Section),
        c3: graphs[0].decide(Mode::Section),
        c4: spans.decide(Mode::Section),
        c5: kites.decide(Mode::Iso),
        c6: spans.decide(Mode::Iso),
        c7: graphs[0].decide(Mode::Iso),
        c8: graphs[1].decide(Mode::Iso),
        c9: graphs[2].decide(Mode::Iso),
        c10: condition10_budgeted(cat, spec, budget),
    };
    let agreement = agreement(&conditions.all());
    TheoremReport {
        class: spec.clone(),
        hypotheses,
        conditions,
        agreement,
    }
}

/// Whether all decisive verdicts coincide.
pub fn agreement(verdicts: &[&Verdict]) -> bool {
    let mut decisive = verdicts.iter().filter(|v| v.is_decisive()).map(|v| v.value);
    match decisive.next() {
        None => true,
        Some(first) => decisive.all(|v| v == first),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::terminal_category;

    #[test]
    fn trivial_category_is_all_true() {
        let cat = terminal_category();
        for spec in [
            SpanClassSpec::AllSpans,
            SpanClassSpec::Relations,
            SpanClassSpec::StrongRelations,
        ] {
            let r = theorem_report(&cat, &spec);
            assert!(r.hypotheses.pass());
            for v in r.conditions.all() {
                assert_eq!(v.value, Value::True, "{spec:?}: {v:?}");
            }
            assert!(r.agreement && r.agrees_true());
        }
    }

    #[test]
    fn agreement_ignores_undecided() {
        let t = Verdict::decide(None, 1, 0);
        let n = Verdict::decide(None, 1, 3);
        let f = Verdict::decide(Some(serde_json::json!("w")), 1, 0);
        assert!(agreement(&[&t, &n, &t]));
        assert!(agreement(&[&f, &n]));
        assert!(!agreement(&[&t, &f]));
    }
}
