//! Loading categories, algebras, spans and budgets from flags and files.

use std::fmt;
use std::path::Path;

use malcheck_core::algebra::{
    build_category_closure, stock_algebra, ClosureBudget, ClosureResult, FinAlgebra,
};
use malcheck_core::{EvalBudget, FinCategory, MorId, ObjId, Span, SpanClassSpec};

/// An input or closure problem; always exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<malcheck_core::Error> for InputError {
    fn from(e: malcheck_core::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Input<T> = Result<T, InputError>;

fn read(path: &str) -> Input<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Input<T> {
    serde_json::from_str(text).map_err(|e| InputError(format!("{what}: {e}")))
}

/// A stock name, or a path to an algebra file.
pub fn algebra(spec: &str) -> Input<FinAlgebra> {
    if let Ok(a) = stock_algebra(spec) {
        return Ok(a);
    }
    if Path::new(spec).exists() {
        return FinAlgebra::from_json_str(&read(spec)?)
            .map_err(|e| InputError(format!("{spec}: {e}")));
    }
    Err(InputError(format!("unknown algebra {spec:?}")))
}

pub fn category_file(path: &str) -> Input<FinCategory> {
    FinCategory::from_json_str(&read(path)?).map_err(|e| InputError(format!("{path}: {e}")))
}

/// Budgets after applying `MALCHECK_BUDGET`, a comma-separated list of
/// `key=value` with keys `objects`, `carrier`, `depth`, `morphisms`,
/// `instances` and `lift`.
pub fn budgets(env: Option<&str>) -> Input<(ClosureBudget, EvalBudget)> {
    let mut cb = ClosureBudget::default();
    let mut eb = EvalBudget::default();
    let Some(env) = env else { return Ok((cb, eb)) };
    for item in env.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            InputError(format!("MALCHECK_BUDGET: expected key=value, got {item:?}"))
        })?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("MALCHECK_BUDGET: bad number in {item:?}")))?;
        match k.trim() {
            "objects" => cb.max_objects = v,
            "carrier" => cb.max_carrier = v,
            "depth" => cb.max_depth = v,
            "morphisms" => cb.max_morphisms = v,
            "instances" => eb.max_instances = v,
            "lift" => eb.max_lift_checks = v,
            other => {
                return Err(InputError(format!(
                    "MALCHECK_BUDGET: unknown key {other:?}"
                )))
            }
        }
    }
    Ok((cb, eb))
}

pub fn closure(generators: &[String], budget: ClosureBudget) -> Input<ClosureResult> {
    let gens = generators
        .iter()
        .map(|g| Ok((g.clone(), algebra(g)?)))
        .collect::<Input<Vec<_>>>()?;
    Ok(build_category_closure(&gens, budget)?)
}

/// `all`, `relations`, `strong` or `list:<file>` holding a JSON array of spans.
pub fn class(spec: &str) -> Input<SpanClassSpec> {
    Ok(match spec {
        "all" => SpanClassSpec::AllSpans,
        "relations" => SpanClassSpec::Relations,
        "strong" => SpanClassSpec::StrongRelations,
        _ => match spec.strip_prefix("list:") {
            Some(path) => SpanClassSpec::ExplicitList(json(path, &read(path)?)?),
            None => return Err(InputError(format!("unknown span class {spec:?}"))),
        },
    })
}

/// `D,d,c` as ids, checked against the category.
pub fn span(cat: &FinCategory, spec: &str) -> Input<Span> {
    let ids: Vec<u32> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| InputError(format!("span {spec:?}: expected three ids D,d,c")))
        })
        .collect::<Input<_>>()?;
    let [apex, d, c] = ids[..] else {
        return Err(InputError(format!(
            "span {spec:?}: expected three ids D,d,c"
        )));
    };
    let s = Span::new(ObjId(apex), MorId(d), MorId(c));
    check_span(cat, &s)?;
    Ok(s)
}

fn check_span(cat: &FinCategory, s: &Span) -> Input<()> {
    if s.apex.idx() >= cat.num_objects() {
        return Err(InputError(format!("unknown object {}", s.apex.0)));
    }
    for f in [s.d, s.c] {
        if f.idx() >= cat.num_morphisms() {
            return Err(InputError(format!("unknown morphism {}", f.0)));
        }
        if cat.dom(f) != s.apex {
            return Err(InputError(format!(
                "morphism {} does not start at object {}",
                f.0, s.apex.0
            )));
        }
    }
    Ok(())
}

/// Inline JSON or a path to a JSON file.
pub fn json_arg<T: serde::de::DeserializeOwned>(what: &str, arg: &str) -> Input<T> {
    if arg.trim_start().starts_with('{') {
        json(what, arg)
    } else {
        json(arg, &read(arg)?)
    }
}

/// `a:b` pairs separated by commas.
pub fn pairs(spec: &str) -> Input<Vec<(u32, u32)>> {
    spec.split(',')
        .map(|p| {
            let bad = || InputError(format!("pair {p:?}: expected a:b"));
            let (a, b) = p.trim().split_once(':').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        })
        .collect()
}
