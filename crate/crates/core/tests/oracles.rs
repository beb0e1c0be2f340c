mod common;

use std::collections::BTreeSet;

use common::{random_relations, random_spans, relation_workspace_of, workspace};
use malcheck_core::algebra::is_difunctional;
use malcheck_core::kernelpair::concrete_tables;
use malcheck_core::structures::enumerate_pregroupoids;
use malcheck_core::theorem::construct_split_square_from_span;
use malcheck_core::{element_oracle, kernel_pair_construction, FinCategory, MorId};

fn table(cat: &FinCategory, f: MorId) -> &[u32] {
    cat.map(f).unwrap()
}

#[test]
fn kernel_pairs_match_elements() {
    for (i, s) in random_spans(7, 120, 6).iter().enumerate() {
        let ws = workspace(s);
        let kp = kernel_pair_construction(&ws.category, &ws.span).unwrap();
        let got = concrete_tables(&ws.category, &kp).unwrap();
        assert_eq!(
            got,
            element_oracle(&s.d, &s.c),
            "span {i}: d={:?} c={:?}",
            s.d,
            s.c
        );
    }
}

#[test]
fn split_square_from_span_matches_quadruples() {
    for (i, s) in random_spans(11, 60, 5).iter().enumerate() {
        let ws = workspace(s);
        let cat = &ws.category;
        let (sq, u) = construct_split_square_from_span(cat, &ws.span).unwrap();
        let kp = kernel_pair_construction(cat, &ws.span).unwrap();
        let (d, c) = (&s.d, &s.c);
        let n = d.len() as u32;
        let mut want = BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let [x_, y_, z_, w_] = [x, y, z, w].map(|v| v as usize);
                        if d[x_] == d[y_] && c[y_] == c[z_] && d[z_] == d[w_] && c[w_] == c[x_] {
                            want.insert((x, y, z, w));
                        }
                    }
                }
            }
        }
        let (d1, d2, c1, c2) = (
            table(cat, kp.d1),
            table(cat, kp.d2),
            table(cat, kp.c1),
            table(cat, kp.c2),
        );
        let (p1, p2, um) = (table(cat, sq.p1), table(cat, sq.p2), table(cat, u));
        let quad = |t: usize| {
            let (a, b) = (p1[t] as usize, p2[t] as usize);
            assert_eq!(d2[a], c1[b], "span {i}: p1 and p2 disagree on y");
            (d1[a], d2[a], c2[b], um[t])
        };
        let size = cat.carrier(sq.e).unwrap();
        let got: BTreeSet<_> = (0..size).map(quad).collect();
        assert_eq!(got.len(), size, "span {i}: quadruples repeat");
        assert_eq!(got, want, "span {i}: d={d:?} c={c:?}");
        let e1 = table(cat, sq.e1);
        for (s_, &t) in e1.iter().enumerate() {
            let (x, y) = (d1[s_], d2[s_]);
            assert_eq!(quad(t as usize), (x, y, y, x), "span {i}: e1");
        }
        let e2 = table(cat, sq.e2);
        for (s_, &t) in e2.iter().enumerate() {
            let (y, z) = (c1[s_], c2[s_]);
            assert_eq!(quad(t as usize), (y, y, z, z), "span {i}: e2");
        }
    }
}

#[test]
fn set_relations_have_structure_iff_difunctional() {
    let mut seen = [0usize; 2];
    for (x, y, pairs) in random_relations(5, 150, 4) {
        let Some(ws) = relation_workspace_of(x, y, &pairs, 256) else {
            continue;
        };
        let kp = kernel_pair_construction(&ws.category, &ws.span).unwrap();
        let found = enumerate_pregroupoids(&ws.category, &kp);
        let difunctional = is_difunctional(&pairs).holds;
        assert!(found.len() <= 1, "{pairs:?}");
        assert_eq!(found.len() == 1, difunctional, "{pairs:?}");
        seen[usize::from(difunctional)] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
