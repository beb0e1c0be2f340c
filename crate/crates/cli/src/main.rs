mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use malcheck_core::algebra::{
    find_maltsev_operations, is_difunctional, maltsev_naturality, relation_pairs, stock_examples,
    ClosureBudget, MaltsevReport,
};
use malcheck_core::kernelpair::concrete_tables;
use malcheck_core::spanclass::{is_jointly_monic, SpanClass};
use malcheck_core::theorem::{check_compatibility, condition10_budgeted};
use malcheck_core::{
    kernel_pair_construction, theorem_report_budgeted, EvalBudget, FinCategory, SpanClassSpec,
    SplitSquare, Value,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use input::{Input, InputError};

#[derive(Parser)]
#[command(
    name = "malcheck",
    version,
    about = "Checks Mal'tsev-type conditions on finite categories"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Where the category comes from: a file, or the closure of generators.
#[derive(Args, Clone)]
struct Source {
    /// Category JSON file.
    #[arg(long, conflicts_with = "generators")]
    category: Option<String>,
    /// Stock algebra names or algebra files, comma-separated.
    #[arg(long, value_delimiter = ',')]
    generators: Vec<String>,
    /// Rounds of limit construction for the closure.
    #[arg(long)]
    depth: Option<usize>,
    /// Largest carrier admitted into the closure.
    #[arg(long)]
    max_carrier: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a category or an algebra.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with_all = ["category", "generators"])]
        algebra: Option<String>,
    },
    /// Build the finite category generated by algebras under finite limits.
    Closure {
        #[command(flatten)]
        source: Source,
        /// Write the category JSON here.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum)]
        expect: Option<ClosureExpect>,
    },
    /// The kernel pairs of a span and the object of composable triples.
    KernelPair {
        #[command(flatten)]
        source: Source,
        /// `D,d,c` ids.
        #[arg(long)]
        span: String,
    },
    /// Compatibility of a split square with a span, or across a span class.
    Compat {
        #[command(flatten)]
        source: Source,
        /// Split square JSON, inline or as a file.
        #[arg(long, requires = "span")]
        square: Option<String>,
        #[arg(long, requires = "square")]
        span: Option<String>,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long, value_enum, default_value_t = Expect::True)]
        expect: Expect,
    },
    /// All ten conditions with hypotheses and agreement.
    Theorem {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long, value_enum, default_value_t = Expect::Agree)]
        expect: Expect,
    },
    /// Difunctionality of the relations in a class, or of explicit pairs.
    Difunctional {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "relations")]
        class: String,
        /// Explicit relation as `a:b` pairs, comma-separated.
        #[arg(long, conflicts_with_all = ["category", "generators"])]
        pairs: Option<String>,
        #[arg(long, value_enum, default_value_t = Expect::True)]
        expect: Expect,
    },
    /// Homomorphisms `A^3 -> A` satisfying the Mal'tsev identities.
    MaltsevOp {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum)]
        expect: Option<OpsExpect>,
    },
    /// Stock algebras, one as JSON, or random spans for test corpora.
    Examples {
        #[arg(long)]
        name: Option<String>,
        /// Emit this many random spans of finite sets.
        #[arg(long, requires = "seed")]
        random_spans: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    True,
    False,
    Agree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClosureExpect {
    Closed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpsExpect {
    Empty,
    Nonempty,
}

/// Report text or JSON plus whether the requested property held.
struct Outcome {
    json: serde_json::Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn new(value: &impl Serialize, text: String, ok: bool) -> Outcome {
        Outcome {
            json: serde_json::to_value(value).expect("serializable report"),
            text,
            ok,
        }
    }
}

struct Env {
    closure: ClosureBudget,
    eval: EvalBudget,
}

fn closure_budget(source: &Source, env: &Env) -> ClosureBudget {
    let mut budget = env.closure;
    budget.max_depth = source.depth.unwrap_or(budget.max_depth);
    budget.max_carrier = source.max_carrier.unwrap_or(budget.max_carrier);
    budget
}

fn load(source: &Source, env: &Env) -> Input<FinCategory> {
    if let Some(path) = &source.category {
        return input::category_file(path);
    }
    if source.generators.is_empty() {
        return Err(InputError("give --category or --generators".into()));
    }
    Ok(input::closure(&source.generators, closure_budget(source, env))?.category)
}

fn verdict_ok(expect: Expect, v: Value) -> bool {
    match expect {
        Expect::True | Expect::Agree => v == Value::True,
        Expect::False => v == Value::False,
    }
}

fn run(command: Command, env: &Env) -> Input<Outcome> {
    match command {
        Command::Verify { source, algebra } => {
            if let Some(a) = algebra {
                let alg = input::algebra(&a)?;
                let text = format!(
                    "algebra: {} elements, {} operations\n",
                    alg.size,
                    alg.signature.ops.len()
                );
                return Ok(Outcome::new(&alg.to_json(), text, true));
            }
            let cat = load(&source, env)?;
            let v = json!({
                "objects": cat.num_objects(),
                "morphisms": cat.num_morphisms(),
                "concrete": cat.is_concrete(),
            });
            let text = format!(
                "category: {} objects, {} morphisms{}\n",
                cat.num_objects(),
                cat.num_morphisms(),
                if cat.is_concrete() { ", concrete" } else { "" }
            );
            Ok(Outcome::new(&v, text, true))
        }
        Command::Closure {
            source,
            out,
            expect,
        } => {
            if source.generators.is_empty() {
                return Err(InputError("closure needs --generators".into()));
            }
            let r = input::closure(&source.generators, closure_budget(&source, env))?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&r.category.to_json())
                    .expect("serializable category");
                std::fs::write(&path, text + "\n")
                    .map_err(|e| InputError(format!("{path}: {e}")))?;
            }
            let objects: Vec<_> = r
                .category
                .objects()
                .map(|o| json!({"id": o.0, "label": r.category.object(o).label, "carrier": r.category.carrier(o)}))
                .collect();
            let v = json!({
                "objects": objects,
                "morphisms": r.category.num_morphisms(),
                "status": r.status,
                "unlisted_missing": r.unlisted_missing,
            });
            let ok = expect.is_none() || r.status.is_closed();
            Ok(Outcome::new(&v, report::closure(&r), ok))
        }
        Command::KernelPair { source, span } => {
            let cat = load(&source, env)?;
            let span = input::span(&cat, &span)?;
            let kp = kernel_pair_construction(&cat, &span)?;
            let tables = cat
                .is_concrete()
                .then(|| concrete_tables(&cat, &kp))
                .transpose()?;
            let v = json!({"kernel_pair": kp, "tables": tables});
            let text = format!(
                "D(d) = object {}, D(c) = object {}, D(d,c) = object {}\n{}\n",
                kp.dd.0,
                kp.dc.0,
                kp.ddc.0,
                serde_json::to_string(&kp).expect("serializable")
            );
            Ok(Outcome::new(&v, text, true))
        }
        Command::Compat {
            source,
            square,
            span,
            class,
            expect,
        } => {
            let cat = load(&source, env)?;
            if let (Some(sq), Some(span)) = (square, span) {
                let sq: SplitSquare = input::json_arg("split square", &sq)?;
                let span = input::span(&cat, &span)?;
                let results = check_compatibility(&cat, &sq, &span)?;
                let holds = results.iter().all(|r| r.holds);
                let ok = match expect {
                    Expect::True | Expect::Agree => holds,
                    Expect::False => !holds,
                };
                return Ok(Outcome::new(&results, report::compatibility(&results), ok));
            }
            let spec = input::class(&class)?;
            let v = condition10_budgeted(&cat, &spec, env.eval);
            let text = report::verdict_line(&report::condition_name(10), &v) + "\n";
            Ok(Outcome::new(&v, text, verdict_ok(expect, v.value)))
        }
        Command::Theorem {
            source,
            class,
            expect,
        } => {
            let spec = input::class(&class)?;
            let cat = load(&source, env)?;
            let r = theorem_report_budgeted(&cat, &spec, env.eval);
            let ok = r.hypotheses.pass()
                && match expect {
                    Expect::Agree => r.agreement,
                    Expect::True => r.agrees_true(),
                    Expect::False => r.agrees_false(),
                };
            Ok(Outcome::new(&r, report::theorem(&r), ok))
        }
        Command::Difunctional {
            source,
            class,
            pairs,
            expect,
        } => {
            let want = expect != Expect::False;
            if let Some(p) = pairs {
                let r = is_difunctional(&input::pairs(&p)?);
                let text = match r.witness {
                    None => "difunctional\n".to_string(),
                    Some(w) => format!("not difunctional: witness (x, y, z, w) = {w:?}\n"),
                };
                return Ok(Outcome::new(&r, text, r.holds == want));
            }
            let spec = input::class(&class)?;
            let cat = load(&source, env)?;
            if !cat.is_concrete() {
                return Err(InputError(
                    "difunctionality needs a concrete category".into(),
                ));
            }
            let members = SpanClass::new(&cat, &spec);
            let (spans, skipped) = members.members_within(env.eval.max_instances);
            let mut checked = 0;
            let mut witness = None;
            for s in spans.iter().filter(|s| {
                matches!(
                    spec,
                    SpanClassSpec::Relations | SpanClassSpec::StrongRelations
                ) || is_jointly_monic(&cat, s)
            }) {
                let pairs = relation_pairs(&cat, s).expect("concrete");
                checked += 1;
                if let Some(w) = is_difunctional(&pairs).witness {
                    witness = Some(json!({"span": s, "pairs": pairs, "quadruple": w}));
                    break;
                }
            }
            let holds = witness.is_none();
            let v = json!({"holds": holds, "checked": checked, "unexamined_cells": skipped, "witness": witness});
            let text = match &witness {
                None => format!("{checked} relations difunctional ({skipped} cells unexamined)\n"),
                Some(w) => format!("not difunctional: {w}\n"),
            };
            // Without a witness, unexamined cells leave the claim open.
            let ok = if want { holds && skipped == 0 } else { !holds };
            Ok(Outcome::new(&v, text, ok))
        }
        Command::MaltsevOp { algebra, expect } => {
            let a = input::algebra(&algebra)?;
            let operations = find_maltsev_operations(&a);
            let failures: Vec<_> = operations
                .iter()
                .flat_map(|p| maltsev_naturality(&a, p, &a, p))
                .collect();
            let r = MaltsevReport {
                natural: failures.is_empty(),
                failures,
                operations,
            };
            let text = format!(
                "{} Mal'tsev operation(s); natural under endomorphisms: {}\n",
                r.operations.len(),
                r.natural
            );
            let ok = match expect {
                None => true,
                Some(OpsExpect::Empty) => r.operations.is_empty(),
                Some(OpsExpect::Nonempty) => !r.operations.is_empty(),
            };
            Ok(Outcome::new(&r, text, ok))
        }
        Command::Examples {
            name,
            random_spans,
            seed,
        } => {
            if let Some(n) = random_spans {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.expect("required by clap"));
                let spans: Vec<_> = (0..n)
                    .map(|_| {
                        let (x, y, k) = (
                            rng.gen_range(1..=4u32),
                            rng.gen_range(1..=4u32),
                            rng.gen_range(1..=6),
                        );
                        let d: Vec<u32> = (0..k).map(|_| rng.gen_range(0..x)).collect();
                        let c: Vec<u32> = (0..k).map(|_| rng.gen_range(0..y)).collect();
                        json!({"x": x, "y": y, "d": d, "c": c})
                    })
                    .collect();
                let text = spans.iter().map(|s| format!("{s}\n")).collect();
                return Ok(Outcome::new(&spans, text, true));
            }
            if let Some(n) = name {
                let a = input::algebra(&n)?;
                let text = serde_json::to_string_pretty(&a.to_json()).expect("serializable") + "\n";
                return Ok(Outcome::new(&a.to_json(), text, true));
            }
            let list: Vec<_> = stock_examples()
                .into_iter()
                .map(|(n, a)| json!({"name": n, "size": a.size, "preset": a.preset}))
                .collect();
            let text = stock_examples()
                .into_iter()
                .map(|(n, a)| format!("{n:<6} {} elements\n", a.size))
                .collect();
            Ok(Outcome::new(&list, text, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = std::env::var("MALCHECK_BUDGET").ok();
    let outcome = input::budgets(budget.as_deref())
        .and_then(|(closure, eval)| run(cli.command, &Env { closure, eval }));
    match outcome {
        Ok(o) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable") + "\n",
                Format::Text => o.text,
            };
            // A closed pipe is not an error of the check.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("malcheck: {e}");
            ExitCode::from(2)
        }
    }
}
