//! The acceptance criteria, one line each. Runs without the libtest harness
//! so that the summary is printed in order and in full.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{closure, random_relations, random_spans, relation_workspace_of, workspace};
use malcheck_core::algebra::{
    find_maltsev_operations, is_difunctional, relation_pairs, stock_algebra, FinAlgebra,
};
use malcheck_core::fincat::{chain_category, terminal_category};
use malcheck_core::kernelpair::concrete_tables;
use malcheck_core::limits::kernel_pair;
use malcheck_core::structures::enumerate_pregroupoids;
use malcheck_core::theorem::construct_split_square_from_span;
use malcheck_core::{
    element_oracle, kernel_pair_construction, theorem_report_budgeted, EvalBudget, FinCategory,
    MorId, ObjId, Span, SpanClassSpec, TheoremReport, Value,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Setting {
    name: &'static str,
    cat: FinCategory,
}

fn settings() -> Vec<Setting> {
    vec![
        Setting {
            name: "trivial",
            cat: terminal_category(),
        },
        Setting {
            name: "4-chain",
            cat: chain_category(4),
        },
        Setting {
            name: "{2-chain, B2}",
            cat: closure(&["c2", "b2"], 2, 16).category,
        },
        Setting {
            name: "M3",
            cat: closure(&["m3"], 2, 16).category,
        },
        Setting {
            name: "Z2",
            cat: closure(&["z2"], 2, 16).category,
        },
        Setting {
            name: "S3",
            cat: closure(&["s3"], 1, 36).category,
        },
    ]
}

fn classes() -> [SpanClassSpec; 3] {
    [
        SpanClassSpec::AllSpans,
        SpanClassSpec::Relations,
        SpanClassSpec::StrongRelations,
    ]
}

/// Hypotheses, then the ten condition values.
fn fingerprint(r: &TheoremReport) -> (bool, Vec<Value>) {
    (
        r.hypotheses.pass(),
        r.conditions.all().iter().map(|v| v.value).collect(),
    )
}

struct Reports {
    settings: Vec<Setting>,
    /// Indexed by setting, then class.
    reports: Vec<Vec<TheoremReport>>,
}

impl Reports {
    fn compute() -> Reports {
        let settings = settings();
        let reports = settings
            .iter()
            .map(|s| {
                classes()
                    .iter()
                    .map(|c| theorem_report_budgeted(&s.cat, c, EvalBudget::default()))
                    .collect()
            })
            .collect();
        Reports { settings, reports }
    }

    fn get(&self, name: &str, class: usize) -> &TheoremReport {
        let i = self
            .settings
            .iter()
            .position(|s| s.name == name)
            .expect("setting");
        &self.reports[i][class]
    }
}

fn criterion1(r: &Reports) -> Outcome {
    let mut bad = Vec::new();
    for (s, reps) in r.settings.iter().zip(&r.reports) {
        for rep in reps {
            if !rep.hypotheses.pass() || !rep.agreement {
                bad.push(format!("{} / {}", s.name, rep.class.name()));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!(
            "{} (category, class) pairs: hypotheses hold and verdicts agree",
            r.settings.len() * 3
        ))
    } else {
        Err(format!("failing pairs: {}", bad.join(", ")))
    }
}

fn criterion2(r: &Reports) -> Outcome {
    let expectations = [
        ("Z2", 0, true),
        ("S3", 0, false),
        ("S3", 1, true),
        ("M3", 2, false),
        ("{2-chain, B2}", 2, true),
    ];
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for (name, class, want_true) in expectations {
        let rep = r.get(name, class);
        let ok = if want_true {
            rep.agrees_true()
        } else {
            rep.agrees_false() && !rep.witnesses().is_empty()
        };
        let label = format!("{name} / {}", rep.class.name());
        if ok {
            notes.push(format!(
                "{label} {}",
                if want_true { "true" } else { "false" }
            ));
        } else {
            bad.push(label);
        }
    }
    if bad.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("unexpected classification: {}", bad.join(", ")))
    }
}

fn criterion3() -> Outcome {
    let spans = random_spans(7, 120, 6);
    for (i, s) in spans.iter().enumerate() {
        let ws = workspace(s);
        let kp = kernel_pair_construction(&ws.category, &ws.span)
            .map_err(|e| format!("span {i}: {e}"))?;
        let got = concrete_tables(&ws.category, &kp).map_err(|e| format!("span {i}: {e}"))?;
        if got != element_oracle(&s.d, &s.c) {
            return Err(format!(
                "span {i} (d={:?}, c={:?}) differs from the element oracle",
                s.d, s.c
            ));
        }
    }
    Ok(format!(
        "{} random spans match on every carrier and arrow",
        spans.len()
    ))
}

fn criterion4() -> Outcome {
    let spans = random_spans(11, 60, 5);
    for (i, s) in spans.iter().enumerate() {
        let ws = workspace(s);
        let cat = &ws.category;
        let (sq, u) = construct_split_square_from_span(cat, &ws.span)
            .map_err(|e| format!("span {i}: {e}"))?;
        let kp = kernel_pair_construction(cat, &ws.span).map_err(|e| format!("span {i}: {e}"))?;
        let t = |f: MorId| cat.map(f).unwrap();
        let (d1, d2, c1, c2) = (t(kp.d1), t(kp.d2), t(kp.c1), t(kp.c2));
        let (p1, p2, um) = (t(sq.p1), t(sq.p2), t(u));
        let quad = |k: usize| {
            let (a, b) = (p1[k] as usize, p2[k] as usize);
            (d2[a] == c1[b]).then_some((d1[a], d2[a], c2[b], um[k]))
        };
        let size = cat.carrier(sq.e).unwrap();
        let got: Option<BTreeSet<_>> = (0..size).map(quad).collect();
        let got = got.ok_or(format!("span {i}: p1 and p2 disagree"))?;
        let (d, c) = (&s.d, &s.c);
        let n = d.len();
        let mut want = BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        if d[x] == d[y] && c[y] == c[z] && d[z] == d[w] && c[w] == c[x] {
                            want.insert((x as u32, y as u32, z as u32, w as u32));
                        }
                    }
                }
            }
        }
        if got.len() != size || got != want {
            return Err(format!(
                "span {i} (d={d:?}, c={c:?}): apex is not the quadruple set"
            ));
        }
        let e1_ok = t(sq.e1).iter().enumerate().all(|(k, &e)| {
            let (x, y) = (d1[k], d2[k]);
            quad(e as usize) == Some((x, y, y, x))
        });
        let e2_ok = t(sq.e2).iter().enumerate().all(|(k, &e)| {
            let (y, z) = (c1[k], c2[k]);
            quad(e as usize) == Some((y, y, z, z))
        });
        if !e1_ok || !e2_ok {
            return Err(format!(
                "span {i}: sections differ from the element formulas"
            ));
        }
    }
    Ok(format!(
        "{} random spans: apex, p1, p2, e1, e2 and u match the quadruple formulas",
        spans.len()
    ))
}

fn table(a: &FinAlgebra, f: impl Fn(u32, u32, u32) -> u32) -> Vec<u32> {
    let n = a.size as u32;
    (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .map(|(x, y, z)| f(x, y, z))
        .collect()
}

fn criterion5() -> Outcome {
    let start = Instant::now();
    let z2 = stock_algebra("z2").unwrap();
    let ops = find_maltsev_operations(&z2);
    if ops != vec![table(&z2, |x, y, z| x ^ y ^ z)] {
        return Err(format!(
            "Z2 gave {} operations, expected only x+y+z",
            ops.len()
        ));
    }
    let z3 = stock_algebra("z3").unwrap();
    let ops = find_maltsev_operations(&z3);
    let n = 3;
    if !ops.contains(&table(&z3, |x, y, z| (x + 2 * y + z) % 3)) {
        return Err("Z3 list lacks x-y+z".into());
    }
    let lawful = ops.iter().all(|p| {
        (0..n).all(|x| {
            (0..n).all(|y| {
                p[((x * n + y) * n + y) as usize] == x && p[((y * n + y) * n + x) as usize] == x
            })
        })
    });
    if !lawful {
        return Err("a Z3 operation breaks p(x,y,y) = x = p(y,y,x)".into());
    }
    let s3 = find_maltsev_operations(&stock_algebra("s3").unwrap());
    if !s3.is_empty() {
        return Err(format!("S3 gave {} operations", s3.len()));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("search took {secs:.1}s"));
    }
    Ok(format!(
        "Z2: x+y+z only; Z3: {} lawful operation(s) incl. x-y+z; S3: none ({secs:.1}s)",
        ops.len()
    ))
}

/// Jointly monic spans of a concrete category, lightest apex first, with the
/// relation each one is.
fn relations(cat: &FinCategory) -> impl Iterator<Item = (Span, Vec<(u32, u32)>)> + '_ {
    let mut apexes: Vec<ObjId> = cat.objects().collect();
    apexes.sort_by_key(|&o| (cat.carrier(o), o));
    apexes.into_iter().flat_map(move |r| {
        let outs: Vec<MorId> = cat
            .objects()
            .flat_map(|x| cat.hom(r, x).iter().copied())
            .collect();
        let size = cat.carrier(r).unwrap();
        let mut found = Vec::new();
        for &d in &outs {
            for &c in &outs {
                let span = Span::new(r, d, c);
                let pairs = relation_pairs(cat, &span).unwrap();
                if pairs.len() == size {
                    found.push((span, pairs));
                }
            }
        }
        found
    })
}

fn criterion6() -> Outcome {
    let z2 = closure(&["z2"], 2, 16).category;
    let mut count = 0;
    for (span, pairs) in relations(&z2) {
        count += 1;
        if !is_difunctional(&pairs).holds {
            return Err(format!("Z2 relation {span:?} is not difunctional"));
        }
    }
    let explicit = is_difunctional(&[(0, 0), (1, 0), (1, 1)]);
    if explicit.holds || explicit.witness.is_none() {
        return Err("the relation {(0,0),(1,0),(1,1)} was accepted".into());
    }
    let m3 = closure(&["m3"], 2, 16).category;
    let hit =
        relations(&m3).find_map(|(span, pairs)| is_difunctional(&pairs).witness.map(|w| (span, w)));
    let Some((span, w)) = hit else {
        return Err("no non-difunctional relation in the M3 closure".into());
    };
    Ok(format!(
        "{count} Z2 relations difunctional; explicit relation refuted at {:?}; M3 relation on object {} refuted at {w:?}",
        explicit.witness.unwrap(),
        span.apex.0
    ))
}

fn criterion7() -> Outcome {
    let mut checked = 0;
    let mut with_structure = 0;
    let mut skipped = 0;
    for (names, depth, carrier) in [
        (&["z2"][..], 2, 16),
        (&["s3"], 1, 36),
        (&["m3"], 2, 16),
        (&["c2", "b2"], 2, 16),
    ] {
        let cat = closure(names, depth, carrier).category;
        for (span, pairs) in relations(&cat) {
            let Ok(kp) = kernel_pair_construction(&cat, &span) else {
                skipped += 1;
                continue;
            };
            let found = enumerate_pregroupoids(&cat, &kp);
            let difunctional = is_difunctional(&pairs).holds;
            if found.len() > 1 || (found.len() == 1) != difunctional {
                return Err(format!(
                    "{names:?}: span {span:?} has {} pregroupoid structures, difunctional = {difunctional}",
                    found.len()
                ));
            }
            checked += 1;
            with_structure += found.len();
        }
    }
    // Relations of sets, where every D(d,c) exists and the candidate maps
    // are listed explicitly.
    let (mut sets, mut refuted) = (0, 0);
    for (x, y, pairs) in random_relations(23, 200, 4) {
        let Some(ws) = relation_workspace_of(x, y, &pairs, 256) else {
            continue;
        };
        let kp = kernel_pair_construction(&ws.category, &ws.span)
            .map_err(|e| format!("{pairs:?}: {e}"))?;
        let found = enumerate_pregroupoids(&ws.category, &kp);
        let difunctional = is_difunctional(&pairs).holds;
        if found.len() > 1 || (found.len() == 1) != difunctional {
            return Err(format!(
                "relation {pairs:?} has {} pregroupoid structures, difunctional = {difunctional}",
                found.len()
            ));
        }
        sets += 1;
        refuted += usize::from(!difunctional);
    }
    if refuted == 0 {
        return Err("no non-difunctional set relation was examined".into());
    }
    Ok(format!(
        "{checked} relations in closures ({with_structure} with a unique structure), {skipped} lack kernel pairs; \
         {sets} set relations, {refuted} non-difunctional without a structure"
    ))
}

fn permuted(cat: &FinCategory, seed: u64) -> FinCategory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut objs: Vec<u32> = (0..cat.num_objects() as u32).collect();
    let mut mors: Vec<u32> = (0..cat.num_morphisms() as u32).collect();
    objs.shuffle(&mut rng);
    mors.shuffle(&mut rng);
    cat.relabel(&objs, &mors).expect("permutation")
}

/// The largest designated kernel pair with a nontrivial carrier, with its
/// elements reversed.
fn replaced_pullback(cat: &FinCategory) -> Option<(FinCategory, ObjId)> {
    if !cat.is_concrete() {
        return None;
    }
    let apex = cat
        .morphisms()
        .filter_map(|f| kernel_pair(cat, f).ok())
        .map(|pb| pb.apex)
        .filter(|&o| cat.carrier(o).unwrap() >= 2)
        .max_by_key(|&o| (cat.carrier(o), std::cmp::Reverse(o)))?;
    let n = cat.carrier(apex).unwrap() as u32;
    let perm: Vec<u32> = (0..n).rev().collect();
    Some((cat.permute_carrier(apex, &perm).expect("permutation"), apex))
}

fn criterion8(r: &Reports) -> Outcome {
    let mut variants = 0;
    for (i, (s, reps)) in r.settings.iter().zip(&r.reports).enumerate() {
        let mut alts = vec![("permuted ids", permuted(&s.cat, 100 + i as u64))];
        if let Some((cat, _)) = replaced_pullback(&s.cat) {
            alts.push(("replaced pullback", cat));
        }
        for (how, cat) in alts {
            for (class, base) in classes().iter().zip(reps) {
                let rep = theorem_report_budgeted(&cat, class, EvalBudget::default());
                if fingerprint(&rep) != fingerprint(base) {
                    return Err(format!("{} / {} changed under {how}", s.name, class.name()));
                }
                variants += 1;
            }
        }
    }
    Ok(format!(
        "{variants} perturbed reports reproduce the verdicts of criteria 1-2"
    ))
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {n} ({title}): PASS [{secs:.1}s] {detail}"),
        Err(detail) => println!("criterion {n} ({title}): FAIL [{secs:.1}s] {detail}"),
    }
    outcome.is_ok()
}

fn main() {
    let start = Instant::now();
    let reports = Reports::compute();
    println!(
        "theorem reports computed in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    let results = [
        run(1, "theorem agreement", || criterion1(&reports)),
        run(2, "directional classifications", || criterion2(&reports)),
        run(3, "kernel-pair oracle", criterion3),
        run(4, "split square from a span", criterion4),
        run(5, "Mal'tsev operation search", criterion5),
        run(6, "difunctionality", criterion6),
        run(7, "pregroupoids and difunctionality", criterion7),
        run(8, "robustness", || criterion8(&reports)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
