//! Designated pullbacks and equalizers.
//!
//! In concrete mode the limit is computed as a set of element tuples and
//! looked up among the objects of the category: first by the canonical
//! projection tables (lexicographic tuple order), then by any object whose
//! projections are jointly bijective onto the tuple set. In abstract mode every
//! (object, cone) pair is tried in ascending id order and the first one whose
//! universal property is certified wins.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::structures::SplitSquare;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PullbackData {
    pub apex: ObjId,
    /// `apex -> dom(f)`.
    pub pi1: MorId,
    /// `apex -> dom(g)`.
    pub pi2: MorId,
    pub f: MorId,
    pub g: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EqualizerData {
    pub apex: ObjId,
    pub incl: MorId,
    pub f: MorId,
    pub g: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitPullbackData {
    pub pb: PullbackData,
    /// `⟨1_A, s∘f⟩`.
    pub eps1: MorId,
    /// `⟨r∘g, 1_C⟩`.
    pub eps2: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Pullback(PullbackData),
    Equalizer(EqualizerData),
}

/// A cone that does not factor uniquely through a claimed limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub vertex: ObjId,
    pub legs: Vec<MorId>,
    pub mediators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub certified: bool,
    pub witness: Option<ConeWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum LimitKey {
    Pullback(MorId, MorId),
    Equalizer(MorId, MorId),
}

pub(crate) type LimitCache = Mutex<HashMap<LimitKey, Result<Limit>>>;

fn cached(
    cat: &FinCategory,
    key: LimitKey,
    compute: impl FnOnce() -> Result<Limit>,
) -> Result<Limit> {
    if let Some(hit) = cat.caches.limits.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let value = compute();
    // Two racing fills compute the same deterministic value.
    cat.caches
        .limits
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(value)
        .clone()
}

/// Designated pullback of the cospan `f: A -> B <- C: g`.
pub fn pullback(cat: &FinCategory, f: MorId, g: MorId) -> Result<PullbackData> {
    check_mor(cat, f)?;
    check_mor(cat, g)?;
    if cat.cod(f) != cat.cod(g) {
        return Err(Error::NonComposable { g, f });
    }
    let lim = cached(cat, LimitKey::Pullback(f, g), || {
        let pb = if cat.is_concrete() {
            concrete_pullback(cat, f, g)?
        } else {
            abstract_pullback(cat, f, g)?
        };
        Ok(Limit::Pullback(pb))
    })?;
    match lim {
        Limit::Pullback(pb) => Ok(pb),
        Limit::Equalizer(_) => unreachable!(),
    }
}

/// Kernel pair of `f`, the pullback of `f` along itself.
pub fn kernel_pair(cat: &FinCategory, f: MorId) -> Result<PullbackData> {
    pullback(cat, f, f)
}

/// Designated equalizer of the parallel pair `f, g`.
pub fn equalizer(cat: &FinCategory, f: MorId, g: MorId) -> Result<EqualizerData> {
    check_mor(cat, f)?;
    check_mor(cat, g)?;
    if cat.dom(f) != cat.dom(g) || cat.cod(f) != cat.cod(g) {
        return Err(Error::InvalidStructure(format!(
            "{f} and {g} are not parallel"
        )));
    }
    let lim = cached(cat, LimitKey::Equalizer(f, g), || {
        let eq = if cat.is_concrete() {
            concrete_equalizer(cat, f, g)?
        } else {
            abstract_equalizer(cat, f, g)?
        };
        Ok(Limit::Equalizer(eq))
    })?;
    match lim {
        Limit::Equalizer(eq) => Ok(eq),
        Limit::Pullback(_) => unreachable!(),
    }
}

fn check_mor(cat: &FinCategory, f: MorId) -> Result<()> {
    if f.idx() < cat.num_morphisms() {
        Ok(())
    } else {
        Err(Error::UnknownMorphism(f))
    }
}

fn label(cat: &FinCategory, o: ObjId) -> String {
    match &cat.object(o).label {
        Some(l) => format!("{o} ({l})"),
        None => o.to_string(),
    }
}

/// Lexicographically ordered `(a, c)` with `f(a) = g(c)`.
pub(crate) fn pullback_pairs(fm: &[u32], gm: &[u32]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (a, &fa) in fm.iter().enumerate() {
        for (c, &gc) in gm.iter().enumerate() {
            if fa == gc {
                out.push((a as u32, c as u32));
            }
        }
    }
    out
}

fn concrete_pullback(cat: &FinCategory, f: MorId, g: MorId) -> Result<PullbackData> {
    let (a, c) = (cat.dom(f), cat.dom(g));
    let pairs = pullback_pairs(cat.map(f).unwrap(), cat.map(g).unwrap());
    let left: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let right: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    let candidates: Vec<ObjId> = cat
        .objects()
        .filter(|&x| cat.carrier(x) == Some(pairs.len()))
        .collect();
    for &x in &candidates {
        if let (Some(pi1), Some(pi2)) = (cat.lookup_map(x, a, &left), cat.lookup_map(x, c, &right))
        {
            return Ok(PullbackData {
                apex: x,
                pi1,
                pi2,
                f,
                g,
            });
        }
    }
    let index: HashMap<(u32, u32), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    for &x in &candidates {
        for &pi1 in cat.hom(x, a) {
            let m1 = cat.map(pi1).unwrap();
            for &pi2 in cat.hom(x, c) {
                let m2 = cat.map(pi2).unwrap();
                let mut hit = vec![false; pairs.len()];
                let bijective = m1.iter().zip(m2).all(|(&u, &v)| match index.get(&(u, v)) {
                    Some(&i) => !std::mem::replace(&mut hit[i], true),
                    None => false,
                });
                if bijective {
                    return Ok(PullbackData {
                        apex: x,
                        pi1,
                        pi2,
                        f,
                        g,
                    });
                }
            }
        }
    }
    Err(Error::MissingClosure(format!(
        "pullback of {f} and {g} over {} ({} elements)",
        label(cat, cat.cod(f)),
        pairs.len()
    )))
}

fn concrete_equalizer(cat: &FinCategory, f: MorId, g: MorId) -> Result<EqualizerData> {
    let a = cat.dom(f);
    let (fm, gm) = (cat.map(f).unwrap(), cat.map(g).unwrap());
    let elems: Vec<u32> = (0..fm.len() as u32)
        .filter(|&i| fm[i as usize] == gm[i as usize])
        .collect();
    let candidates: Vec<ObjId> = cat
        .objects()
        .filter(|&x| cat.carrier(x) == Some(elems.len()))
        .collect();
    for &x in &candidates {
        if let Some(incl) = cat.lookup_map(x, a, &elems) {
            return Ok(EqualizerData {
                apex: x,
                incl,
                f,
                g,
            });
        }
    }
    for &x in &candidates {
        for &incl in cat.hom(x, a) {
            let mut image = cat.map(incl).unwrap().to_vec();
            image.sort_unstable();
            if image == elems {
                return Ok(EqualizerData {
                    apex: x,
                    incl,
                    f,
                    g,
                });
            }
        }
    }
    Err(Error::MissingClosure(format!(
        "equalizer of {f} and {g} on {} ({} elements)",
        label(cat, a),
        elems.len()
    )))
}

fn abstract_pullback(cat: &FinCategory, f: MorId, g: MorId) -> Result<PullbackData> {
    let (a, c) = (cat.dom(f), cat.dom(g));
    for x in cat.objects() {
        for &pi1 in cat.hom(x, a) {
            let fp = cat.comp(f, pi1);
            for &pi2 in cat.hom(x, c) {
                if cat.comp(g, pi2) != fp {
                    continue;
                }
                let pb = PullbackData {
                    apex: x,
                    pi1,
                    pi2,
                    f,
                    g,
                };
                if certify_pullback(cat, &pb).is_none() {
                    return Ok(pb);
                }
            }
        }
    }
    Err(Error::NoPullback { f, g })
}

fn abstract_equalizer(cat: &FinCategory, f: MorId, g: MorId) -> Result<EqualizerData> {
    let a = cat.dom(f);
    for x in cat.objects() {
        for &incl in cat.hom(x, a) {
            if cat.comp(f, incl) != cat.comp(g, incl) {
                continue;
            }
            let eq = EqualizerData {
                apex: x,
                incl,
                f,
                g,
            };
            if certify_equalizer(cat, &eq).is_none() {
                return Ok(eq);
            }
        }
    }
    Err(Error::NoEqualizer { f, g })
}

/// `None` when every cone factors uniquely.
fn certify_pullback(cat: &FinCategory, pb: &PullbackData) -> Option<ConeWitness> {
    let (a, c) = (cat.dom(pb.f), cat.dom(pb.g));
    for z in cat.objects() {
        let mut counts: HashMap<(MorId, MorId), usize> = HashMap::new();
        for &h in cat.hom(z, pb.apex) {
            *counts
                .entry((cat.comp(pb.pi1, h), cat.comp(pb.pi2, h)))
                .or_default() += 1;
        }
        for &u1 in cat.hom(z, a) {
            let fu = cat.comp(pb.f, u1);
            for &u2 in cat.hom(z, c) {
                if cat.comp(pb.g, u2) != fu {
                    continue;
                }
                let n = counts.get(&(u1, u2)).copied().unwrap_or(0);
                if n != 1 {
                    return Some(ConeWitness {
                        vertex: z,
                        legs: vec![u1, u2],
                        mediators: n,
                    });
                }
            }
        }
    }
    None
}

fn certify_equalizer(cat: &FinCategory, eq: &EqualizerData) -> Option<ConeWitness> {
    let a = cat.dom(eq.f);
    for z in cat.objects() {
        let mut counts: HashMap<MorId, usize> = HashMap::new();
        for &h in cat.hom(z, eq.apex) {
            *counts.entry(cat.comp(eq.incl, h)).or_default() += 1;
        }
        for &u in cat.hom(z, a) {
            if cat.comp(eq.f, u) != cat.comp(eq.g, u) {
                continue;
            }
            let n = counts.get(&u).copied().unwrap_or(0);
            if n != 1 {
                return Some(ConeWitness {
                    vertex: z,
                    legs: vec![u],
                    mediators: n,
                });
            }
        }
    }
    None
}

/// Exhaustively checks the universal property against every cone in `cat`.
pub fn certify_limit(cat: &FinCategory, limit: &Limit) -> Certification {
    let commutes = match limit {
        Limit::Pullback(pb) => cat.comp(pb.f, pb.pi1) == cat.comp(pb.g, pb.pi2),
        Limit::Equalizer(eq) => cat.comp(eq.f, eq.incl) == cat.comp(eq.g, eq.incl),
    };
    if !commutes {
        return Certification {
            certified: false,
            witness: None,
        };
    }
    let witness = match limit {
        Limit::Pullback(pb) => certify_pullback(cat, pb),
        Limit::Equalizer(eq) => certify_equalizer(cat, eq),
    };
    Certification {
        certified: witness.is_none(),
        witness,
    }
}

/// The unique `h: Z -> apex` with `pi1∘h = u1` and `pi2∘h = u2`.
pub fn mediate_pullback(
    cat: &FinCategory,
    pb: &PullbackData,
    u1: MorId,
    u2: MorId,
) -> Result<MorId> {
    let z = cat.dom(u1);
    if cat.dom(u2) != z
        || cat.cod(u1) != cat.dom(pb.f)
        || cat.cod(u2) != cat.dom(pb.g)
        || cat.comp(pb.f, u1) != cat.comp(pb.g, u2)
    {
        return Err(Error::NonCommutingCone);
    }
    if cat.is_concrete() {
        let (m1, m2) = (cat.map(pb.pi1).unwrap(), cat.map(pb.pi2).unwrap());
        let index: HashMap<(u32, u32), u32> = m1
            .iter()
            .zip(m2)
            .enumerate()
            .map(|(i, (&x, &y))| ((x, y), i as u32))
            .collect();
        if index.len() == m1.len() {
            let (a1, a2) = (cat.map(u1).unwrap(), cat.map(u2).unwrap());
            let table: Option<Vec<u32>> = a1
                .iter()
                .zip(a2)
                .map(|(&x, &y)| index.get(&(x, y)).copied())
                .collect();
            // Joint injectivity of the projections makes the function unique.
            return table
                .and_then(|t| cat.lookup_map(z, pb.apex, &t))
                .ok_or(Error::NoMediator);
        }
    }
    unique(
        cat.hom(z, pb.apex)
            .iter()
            .copied()
            .filter(|&h| cat.comp(pb.pi1, h) == u1 && cat.comp(pb.pi2, h) == u2),
    )
}

/// The unique `h: Z -> apex` with `incl∘h = u`.
pub fn mediate_equalizer(cat: &FinCategory, eq: &EqualizerData, u: MorId) -> Result<MorId> {
    let z = cat.dom(u);
    if cat.cod(u) != cat.dom(eq.f) || cat.comp(eq.f, u) != cat.comp(eq.g, u) {
        return Err(Error::NonCommutingCone);
    }
    if cat.is_concrete() {
        let m = cat.map(eq.incl).unwrap();
        let index: HashMap<u32, u32> = m.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        if index.len() == m.len() {
            let table: Option<Vec<u32>> = cat
                .map(u)
                .unwrap()
                .iter()
                .map(|x| index.get(x).copied())
                .collect();
            return table
                .and_then(|t| cat.lookup_map(z, eq.apex, &t))
                .ok_or(Error::NoMediator);
        }
    }
    unique(
        cat.hom(z, eq.apex)
            .iter()
            .copied()
            .filter(|&h| cat.comp(eq.incl, h) == u),
    )
}

/// Mediator for either kind of limit; `cone` holds one leg per projection.
pub fn mediate(cat: &FinCategory, limit: &Limit, cone: &[MorId]) -> Result<MorId> {
    match (limit, cone) {
        (Limit::Pullback(pb), &[u1, u2]) => mediate_pullback(cat, pb, u1, u2),
        (Limit::Equalizer(eq), &[u]) => mediate_equalizer(cat, eq, u),
        _ => Err(Error::NonCommutingCone),
    }
}

fn unique(mut it: impl Iterator<Item = MorId>) -> Result<MorId> {
    match (it.next(), it.next()) {
        (Some(h), None) => Ok(h),
        _ => Err(Error::NoMediator),
    }
}

/// Pullback of a cospan of split epis together with its two canonical sections.
pub fn split_pullback(
    cat: &FinCategory,
    f: MorId,
    r: MorId,
    g: MorId,
    s: MorId,
) -> Result<SplitPullbackData> {
    let b = cat.cod(f);
    if cat.cod(g) != b || cat.dom(r) != b || cat.dom(s) != b {
        return Err(Error::InvalidStructure("split cospan is ill-typed".into()));
    }
    if cat.comp(f, r) != cat.id(b) || cat.comp(g, s) != cat.id(b) {
        return Err(Error::InvalidStructure(
            "f∘r or g∘s is not the identity".into(),
        ));
    }
    let pb = pullback(cat, f, g)?;
    let (a, c) = (cat.dom(f), cat.dom(g));
    let eps1 = mediate_pullback(cat, &pb, cat.id(a), cat.comp(s, f))?;
    let eps2 = mediate_pullback(cat, &pb, cat.comp(r, g), cat.id(c))?;
    Ok(SplitPullbackData { pb, eps1, eps2 })
}

/// `⟨p1, p2⟩: E -> A ×_B C`.
pub fn comparison(cat: &FinCategory, sq: &SplitSquare) -> Result<MorId> {
    let pb = pullback(cat, sq.f, sq.g)?;
    mediate_pullback(cat, &pb, sq.p1, sq.p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain_category, poset_category, Morphism, Object};

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

    fn all_functions(sizes: &[usize]) -> FinCategory {
        let mut maps = Vec::new();
        for (a, &sa) in sizes.iter().enumerate() {
            for (b, &sb) in sizes.iter().enumerate() {
                for mut code in 0..sb.pow(sa as u32) {
                    let mut m = Vec::new();
                    for _ in 0..sa {
                        m.push((code % sb) as u32);
                        code /= sb;
                    }
                    maps.push((a as u32, b as u32, m));
                }
            }
        }
        sets(sizes, &maps)
    }

    #[test]
    fn pullback_along_identities() {
        let cat = chain_category(3);
        let one = cat.id(ObjId(1));
        let pb = pullback(&cat, one, one).unwrap();
        assert_eq!(pb.apex, ObjId(1));
        assert!(cat.is_iso(pb.pi1) && cat.is_iso(pb.pi2));
        assert!(certify_limit(&cat, &Limit::Pullback(pb)).certified);
    }

    #[test]
    fn poset_pullback_is_meet() {
        // Divisors of 12 ordered by divisibility; the meet is the gcd.
        let divs = [1u32, 2, 3, 4, 6, 12];
        let cat = poset_category(divs.len(), |i, j| divs[j].is_multiple_of(divs[i]));
        let gcd = |mut a: u32, mut b: u32| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        for i in 0..divs.len() {
            for k in 0..divs.len() {
                let top = ObjId(5);
                let f = cat.hom(ObjId(i as u32), top)[0];
                let g = cat.hom(ObjId(k as u32), top)[0];
                let pb = pullback(&cat, f, g).unwrap();
                assert_eq!(divs[pb.apex.idx()], gcd(divs[i], divs[k]));
            }
        }
    }

    #[test]
    fn concrete_product_over_point() {
        let cat = all_functions(&[2, 1, 4]);
        let t = cat.hom(ObjId(0), ObjId(1))[0];
        let pb = pullback(&cat, t, t).unwrap();
        assert_eq!(pb.apex, ObjId(2));
        assert_eq!(cat.map(pb.pi1).unwrap(), &[0, 0, 1, 1]);
        assert_eq!(cat.map(pb.pi2).unwrap(), &[0, 1, 0, 1]);
        assert!(certify_limit(&cat, &Limit::Pullback(pb)).certified);
    }

    #[test]
    fn missing_pullback_is_reported() {
        let cat = all_functions(&[2, 1]);
        let t = cat.hom(ObjId(0), ObjId(1))[0];
        assert!(matches!(
            pullback(&cat, t, t),
            Err(Error::MissingClosure(_))
        ));
    }

    #[test]
    fn equalizer_cases() {
        let cat = all_functions(&[3, 1]);
        let f = cat.lookup_map(ObjId(0), ObjId(0), &[0, 1, 2]).unwrap();
        let g = cat.lookup_map(ObjId(0), ObjId(0), &[1, 1, 0]).unwrap();
        let eq = equalizer(&cat, f, g).unwrap();
        assert_eq!(eq.apex, ObjId(1));
        assert_eq!(cat.map(eq.incl).unwrap(), &[1]);
        let same = equalizer(&cat, f, f).unwrap();
        assert!(cat.is_iso(same.incl));
        let poset = chain_category(3);
        let h = poset.hom(ObjId(0), ObjId(2))[0];
        let e = equalizer(&poset, h, h).unwrap();
        assert_eq!(e.incl, poset.id(ObjId(0)));
    }

    #[test]
    fn mediator_of_own_projections_is_identity() {
        let cat = all_functions(&[2, 1, 4]);
        let t = cat.hom(ObjId(0), ObjId(1))[0];
        let pb = pullback(&cat, t, t).unwrap();
        assert_eq!(
            mediate_pullback(&cat, &pb, pb.pi1, pb.pi2).unwrap(),
            cat.id(pb.apex)
        );
        let pt = cat.lookup_map(ObjId(1), ObjId(0), &[1]).unwrap();
        let pt0 = cat.lookup_map(ObjId(1), ObjId(0), &[0]).unwrap();
        let h = mediate(&cat, &Limit::Pullback(pb), &[pt, pt0]).unwrap();
        assert_eq!(cat.map(h).unwrap(), &[2]);
    }

    #[test]
    fn smaller_apex_fails_certification() {
        let cat = all_functions(&[2, 1, 4]);
        let t = cat.hom(ObjId(0), ObjId(1))[0];
        // The diagonal 2 -> 2x2 as a fake pullback: (0,1) does not factor.
        let fake = PullbackData {
            apex: ObjId(0),
            pi1: cat.id(ObjId(0)),
            pi2: cat.id(ObjId(0)),
            f: t,
            g: t,
        };
        let cert = certify_limit(&cat, &Limit::Pullback(fake));
        assert!(!cert.certified);
        assert_eq!(cert.witness.unwrap().mediators, 0);
    }

    #[test]
    fn permuted_apex_is_found_and_certified() {
        let cat = all_functions(&[2, 1, 4]);
        let moved = cat.permute_carrier(ObjId(2), &[3, 1, 0, 2]).unwrap();
        let t = moved.hom(ObjId(0), ObjId(1))[0];
        let pb = pullback(&moved, t, t).unwrap();
        assert_eq!(pb.apex, ObjId(2));
        assert!(certify_limit(&moved, &Limit::Pullback(pb)).certified);
    }

    #[test]
    fn split_pullback_of_point_sections() {
        let cat = all_functions(&[2, 1, 4]);
        let f = cat.hom(ObjId(0), ObjId(1))[0];
        let r = cat.lookup_map(ObjId(1), ObjId(0), &[1]).unwrap();
        let sp = split_pullback(&cat, f, r, f, r).unwrap();
        assert_eq!(cat.carrier(sp.pb.apex), Some(4));
        // ε1 is the graph of s∘f: a ↦ (a, 1).
        assert_eq!(cat.map(sp.eps1).unwrap(), &[1, 3]);
        assert_eq!(cat.comp(sp.pb.pi1, sp.eps1), cat.id(ObjId(0)));
        assert_eq!(cat.comp(sp.pb.pi2, sp.eps2), cat.id(ObjId(0)));
    }

    #[test]
    fn split_pullback_in_lattice_is_trivial() {
        let cat = chain_category(3);
        let one = cat.id(ObjId(2));
        let sp = split_pullback(&cat, one, one, one, one).unwrap();
        assert_eq!(sp.pb.apex, ObjId(2));
        assert!(cat.is_iso(sp.eps1) && cat.is_iso(sp.eps2));
    }
}
