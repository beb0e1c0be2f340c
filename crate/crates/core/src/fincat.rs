//! Explicitly finite categories.
//!
//! A [`FinCategory`] is stored fully materialized: every hom-set is a sorted
//! list of morphism ids and composition is a dense table indexed by the
//! positions of the two arrows inside their hom-sets. Objects and morphisms
//! are dense integer handles. A category may optionally be *concrete*: each
//! object carries a finite carrier `0..n` and each morphism a function table,
//! in which case composition of functions must agree with the table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::LimitCache;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorId(pub u32);

impl ObjId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Object {
    pub label: Option<String>,
    /// Size of the carrier set in concrete mode.
    pub carrier: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub dom: ObjId,
    pub cod: ObjId,
    pub label: Option<String>,
    /// `map[i]` is the image of element `i` (concrete mode only).
    pub map: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismClassification {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub iso: bool,
}

/// One violated category axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Associativity { h: MorId, g: MorId, f: MorId },
    LeftIdentity { f: MorId },
    RightIdentity { f: MorId },
    IdentityNotIdentityMap { obj: ObjId },
    MapShape { f: MorId },
    ConcreteMismatch { g: MorId, f: MorId },
    DuplicateMap { first: MorId, second: MorId },
    MixedConcreteness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) epis: OnceLock<Vec<bool>>,
    pub(crate) limits: LimitCache,
}

/// Collects objects, morphisms and composition entries; [`CategoryBuilder::build`]
/// checks totality and materializes the tables.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<Object>,
    morphisms: Vec<Morphism>,
    compose: HashMap<(MorId, MorId), MorId>,
    identities: BTreeMap<ObjId, MorId>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(
        &mut self,
        label: impl Into<Option<String>>,
        carrier: Option<usize>,
    ) -> ObjId {
        self.objects.push(Object {
            label: label.into(),
            carrier,
        });
        ObjId(self.objects.len() as u32 - 1)
    }

    pub fn add_morphism(
        &mut self,
        dom: ObjId,
        cod: ObjId,
        label: impl Into<Option<String>>,
        map: Option<Vec<u32>>,
    ) -> MorId {
        self.morphisms.push(Morphism {
            dom,
            cod,
            label: label.into(),
            map,
        });
        MorId(self.morphisms.len() as u32 - 1)
    }

    pub fn set_identity(&mut self, obj: ObjId, id: MorId) {
        self.identities.insert(obj, id);
    }

    pub fn set_composite(&mut self, g: MorId, f: MorId, gf: MorId) {
        self.compose.insert((g, f), gf);
    }

    pub fn build(self) -> Result<FinCategory> {
        let n = self.objects.len();
        for (i, m) in self.morphisms.iter().enumerate() {
            if m.dom.idx() >= n || m.cod.idx() >= n {
                return Err(Error::MalformedCategory(format!(
                    "morphism {i} refers to a missing object"
                )));
            }
        }
        let mut identities = Vec::with_capacity(n);
        for o in 0..n {
            let id = *self
                .identities
                .get(&ObjId(o as u32))
                .ok_or_else(|| Error::MalformedCategory(format!("object {o} has no identity")))?;
            let m = self
                .morphisms
                .get(id.idx())
                .ok_or(Error::UnknownMorphism(id))?;
            if m.dom.idx() != o || m.cod.idx() != o {
                return Err(Error::MalformedCategory(format!(
                    "identity of object {o} is not an endomorphism of it"
                )));
            }
            identities.push(id);
        }
        let mut cat = FinCategory::skeleton(self.objects, self.morphisms, identities);
        let mut table = vec![Vec::new(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let hab = &cat.homs[a * n + b];
                if hab.is_empty() {
                    continue;
                }
                for c in 0..n {
                    let hbc = &cat.homs[b * n + c];
                    if hbc.is_empty() {
                        continue;
                    }
                    let mut block = Vec::with_capacity(hab.len() * hbc.len());
                    for &f in hab {
                        for &g in hbc {
                            let gf = *self.compose.get(&(g, f)).ok_or_else(|| {
                                Error::MalformedCategory(format!(
                                    "partial composition table: no entry for {g} after {f}"
                                ))
                            })?;
                            let m = cat
                                .morphisms
                                .get(gf.idx())
                                .ok_or(Error::UnknownMorphism(gf))?;
                            if m.dom.idx() != a || m.cod.idx() != c {
                                return Err(Error::MalformedCategory(format!(
                                    "composite {gf} of {g} after {f} has the wrong type"
                                )));
                            }
                            block.push(gf);
                        }
                    }
                    table[(a * n + b) * n + c] = block;
                }
            }
        }
        cat.table = table;
        Ok(cat)
    }
}

pub struct FinCategory {
    objects: Vec<Object>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    homs: Vec<Vec<MorId>>,
    local: Vec<u32>,
    table: Vec<Vec<MorId>>,
    by_map: HashMap<(ObjId, ObjId), HashMap<Vec<u32>, MorId>>,
    pub(crate) caches: Caches,
}

impl Clone for FinCategory {
    fn clone(&self) -> Self {
        FinCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            homs: self.homs.clone(),
            local: self.local.clone(),
            table: self.table.clone(),
            by_map: self.by_map.clone(),
            caches: Caches::default(),
        }
    }
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .field("concrete", &self.is_concrete())
            .finish()
    }
}

impl FinCategory {
    fn skeleton(objects: Vec<Object>, morphisms: Vec<Morphism>, identities: Vec<MorId>) -> Self {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        let mut local = vec![0u32; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            let h = &mut homs[m.dom.idx() * n + m.cod.idx()];
            local[i] = h.len() as u32;
            h.push(MorId(i as u32));
        }
        let mut by_map: HashMap<(ObjId, ObjId), HashMap<Vec<u32>, MorId>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            if let Some(map) = &m.map {
                by_map
                    .entry((m.dom, m.cod))
                    .or_default()
                    .entry(map.clone())
                    .or_insert(MorId(i as u32));
            }
        }
        FinCategory {
            objects,
            morphisms,
            identities,
            homs,
            local,
            table: Vec::new(),
            by_map,
            caches: Caches::default(),
        }
    }

    /// Builds a concrete category from carriers and function tables; composition
    /// is function composition and must stay inside the given morphisms.
    pub fn concrete(objects: Vec<Object>, morphisms: Vec<Morphism>) -> Result<Self> {
        Self::concrete_impl(objects, morphisms, false)
    }

    /// Like [`FinCategory::concrete`] but adds identities and all composites of
    /// the given functions until the set is closed under composition.
    pub fn generated(objects: Vec<Object>, morphisms: Vec<Morphism>) -> Result<Self> {
        Self::concrete_impl(objects, morphisms, true)
    }

    fn concrete_impl(
        objects: Vec<Object>,
        mut morphisms: Vec<Morphism>,
        close: bool,
    ) -> Result<Self> {
        let n = objects.len();
        let sizes: Vec<usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.carrier
                    .ok_or_else(|| Error::MalformedCategory(format!("object {i} has no carrier")))
            })
            .collect::<Result<_>>()?;
        for (i, m) in morphisms.iter().enumerate() {
            check_map_shape(i, m, &sizes)?;
        }
        let mut seen: HashMap<(ObjId, ObjId, Vec<u32>), MorId> = HashMap::new();
        let mut unique = Vec::with_capacity(morphisms.len());
        for m in morphisms.drain(..) {
            let key = (m.dom, m.cod, m.map.clone().unwrap_or_default());
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(MorId(unique.len() as u32));
                unique.push(m);
            }
        }
        morphisms = unique;
        if close {
            for (o, &size) in sizes.iter().enumerate() {
                let key = (
                    ObjId(o as u32),
                    ObjId(o as u32),
                    (0..size as u32).collect::<Vec<_>>(),
                );
                if !seen.contains_key(&key) {
                    seen.insert(key.clone(), MorId(morphisms.len() as u32));
                    morphisms.push(Morphism {
                        dom: key.0,
                        cod: key.1,
                        label: None,
                        map: Some(key.2),
                    });
                }
            }
            let mut frontier_start = 0;
            loop {
                let len = morphisms.len();
                let mut fresh = Vec::new();
                for i in 0..len {
                    for j in 0..len {
                        if i < frontier_start && j < frontier_start {
                            continue;
                        }
                        let (f, g) = (&morphisms[i], &morphisms[j]);
                        if f.cod != g.dom {
                            continue;
                        }
                        let fm = f.map.as_ref().unwrap();
                        let gm = g.map.as_ref().unwrap();
                        let map: Vec<u32> = fm.iter().map(|&x| gm[x as usize]).collect();
                        let key = (f.dom, g.cod, map);
                        if !seen.contains_key(&key) {
                            seen.insert(key.clone(), MorId((len + fresh.len()) as u32));
                            fresh.push(Morphism {
                                dom: key.0,
                                cod: key.1,
                                label: None,
                                map: Some(key.2),
                            });
                        }
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                frontier_start = len;
                morphisms.extend(fresh);
            }
        }
        let mut identities = Vec::with_capacity(n);
        for (o, &size) in sizes.iter().enumerate() {
            let key = (
                ObjId(o as u32),
                ObjId(o as u32),
                (0..size as u32).collect::<Vec<_>>(),
            );
            let id = *seen.get(&key).ok_or_else(|| {
                Error::MalformedCategory(format!("object {o} has no identity function"))
            })?;
            identities.push(id);
        }
        let mut cat = FinCategory::skeleton(objects, morphisms, identities);
        let mut table = vec![Vec::new(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let hab = &cat.homs[a * n + b];
                if hab.is_empty() {
                    continue;
                }
                for c in 0..n {
                    let hbc = &cat.homs[b * n + c];
                    if hbc.is_empty() {
                        continue;
                    }
                    let mut block = Vec::with_capacity(hab.len() * hbc.len());
                    let mut buf = Vec::with_capacity(sizes[a]);
                    for &f in hab {
                        let fm = cat.morphisms[f.idx()].map.as_ref().unwrap();
                        for &g in hbc {
                            let gm = cat.morphisms[g.idx()].map.as_ref().unwrap();
                            buf.clear();
                            buf.extend(fm.iter().map(|&x| gm[x as usize]));
                            let gf = cat
                                .lookup_map(ObjId(a as u32), ObjId(c as u32), &buf)
                                .ok_or_else(|| {
                                    Error::MalformedCategory(format!(
                                        "not closed under composition: {g} after {f} is missing"
                                    ))
                                })?;
                            block.push(gf);
                        }
                    }
                    table[(a * n + b) * n + c] = block;
                }
            }
        }
        cat.table = table;
        Ok(cat)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object(&self, o: ObjId) -> &Object {
        &self.objects[o.idx()]
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.idx()]
    }

    #[inline]
    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f.idx()].dom
    }

    #[inline]
    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f.idx()].cod
    }

    #[inline]
    pub fn id(&self, o: ObjId) -> MorId {
        self.identities[o.idx()]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.id(self.dom(f)) == f && self.dom(f) == self.cod(f)
    }

    pub fn is_concrete(&self) -> bool {
        !self.objects.is_empty()
            && self.objects.iter().all(|o| o.carrier.is_some())
            && self.morphisms.iter().all(|m| m.map.is_some())
    }

    pub fn carrier(&self, o: ObjId) -> Option<usize> {
        self.objects[o.idx()].carrier
    }

    pub fn map(&self, f: MorId) -> Option<&[u32]> {
        self.morphisms[f.idx()].map.as_deref()
    }

    /// Morphisms `a -> b` in ascending id order.
    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.idx() * self.objects.len() + b.idx()]
    }

    /// The morphism `dom -> cod` with the given function table, if present.
    pub fn lookup_map(&self, dom: ObjId, cod: ObjId, map: &[u32]) -> Option<MorId> {
        self.by_map.get(&(dom, cod))?.get(map).copied()
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        if f.idx() >= self.morphisms.len() {
            return Err(Error::UnknownMorphism(f));
        }
        if g.idx() >= self.morphisms.len() {
            return Err(Error::UnknownMorphism(g));
        }
        if self.cod(f) != self.dom(g) {
            return Err(Error::NonComposable { g, f });
        }
        Ok(self.comp(g, f))
    }

    /// `g ∘ f` without the composability check (debug-asserted).
    #[inline]
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        let (fm, gm) = (&self.morphisms[f.idx()], &self.morphisms[g.idx()]);
        debug_assert_eq!(fm.cod, gm.dom, "non-composable pair");
        let n = self.objects.len();
        let (a, b, c) = (fm.dom.idx(), fm.cod.idx(), gm.cod.idx());
        let width = self.homs[b * n + c].len();
        self.table[(a * n + b) * n + c]
            [self.local[f.idx()] as usize * width + self.local[g.idx()] as usize]
    }

    /// `h ∘ g ∘ f`.
    #[inline]
    pub fn comp3(&self, h: MorId, g: MorId, f: MorId) -> MorId {
        self.comp(h, self.comp(g, f))
    }

    /// Composite of a path given in application order: `path[last] ∘ … ∘ path[0]`.
    pub fn comp_path(&self, path: &[MorId]) -> MorId {
        let mut it = path.iter();
        let mut acc = *it.next().expect("empty path");
        for &m in it {
            acc = self.comp(m, acc);
        }
        acc
    }

    /// Overwrites one composition-table entry without any checking. Only useful
    /// for building deliberately broken categories.
    pub fn set_composite_unchecked(&mut self, g: MorId, f: MorId, gf: MorId) {
        let (fm, gm) = (&self.morphisms[f.idx()], &self.morphisms[g.idx()]);
        let n = self.objects.len();
        let (a, b, c) = (fm.dom.idx(), fm.cod.idx(), gm.cod.idx());
        let width = self.homs[b * n + c].len();
        let pos = self.local[f.idx()] as usize * width + self.local[g.idx()] as usize;
        self.table[(a * n + b) * n + c][pos] = gf;
        self.caches = Caches::default();
    }

    /// Replaces the function table of one morphism without touching composition.
    pub fn set_map_unchecked(&mut self, f: MorId, map: Vec<u32>) {
        let m = &mut self.morphisms[f.idx()];
        let tables = self.by_map.entry((m.dom, m.cod)).or_default();
        if let Some(old) = m.map.replace(map.clone()) {
            tables.remove(&old);
        }
        tables.entry(map).or_insert(f);
        self.caches = Caches::default();
    }

    /// Every violated axiom: associativity, identity laws and, in concrete
    /// mode, agreement of the table with function composition.
    pub fn verify(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.objects.len();
        let concrete = self.is_concrete();
        let any_concrete = self.objects.iter().any(|o| o.carrier.is_some())
            || self.morphisms.iter().any(|m| m.map.is_some());
        if any_concrete && !concrete {
            violations.push(Violation::MixedConcreteness);
        }
        for f in self.morphisms() {
            if self.comp(self.id(self.cod(f)), f) != f {
                violations.push(Violation::LeftIdentity { f });
            }
            if self.comp(f, self.id(self.dom(f))) != f {
                violations.push(Violation::RightIdentity { f });
            }
        }
        let mut concrete_ok = concrete;
        if concrete {
            let sizes: Vec<usize> = self.objects.iter().map(|o| o.carrier.unwrap()).collect();
            for (i, m) in self.morphisms.iter().enumerate() {
                if check_map_shape(i, m, &sizes).is_err() {
                    violations.push(Violation::MapShape { f: MorId(i as u32) });
                    concrete_ok = false;
                }
            }
            if concrete_ok {
                for o in self.objects() {
                    let map = self.map(self.id(o)).unwrap();
                    if map.iter().enumerate().any(|(i, &x)| x as usize != i) {
                        violations.push(Violation::IdentityNotIdentityMap { obj: o });
                        concrete_ok = false;
                    }
                }
                let mut seen: HashMap<(ObjId, ObjId, &[u32]), MorId> = HashMap::new();
                for f in self.morphisms() {
                    let m = self.morphism(f);
                    if let Some(&first) = seen.get(&(m.dom, m.cod, m.map.as_deref().unwrap())) {
                        violations.push(Violation::DuplicateMap { first, second: f });
                        concrete_ok = false;
                    } else {
                        seen.insert((m.dom, m.cod, m.map.as_deref().unwrap()), f);
                    }
                }
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            for &f in &self.homs[a * n + b] {
                                let fm = self.map(f).unwrap();
                                for &g in &self.homs[b * n + c] {
                                    let gm = self.map(g).unwrap();
                                    let gf = self.map(self.comp(g, f)).unwrap();
                                    if fm.iter().zip(gf).any(|(&x, &y)| gm[x as usize] != y) {
                                        violations.push(Violation::ConcreteMismatch { g, f });
                                        concrete_ok = false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Function composition is associative, so a table that agrees with
        // faithful function data needs no separate triple scan.
        if !concrete_ok {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            for &f in &self.homs[a * n + b] {
                                for &g in &self.homs[b * n + c] {
                                    let gf = self.comp(g, f);
                                    for &h in &self.homs[c * n + d] {
                                        if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                                            violations.push(Violation::Associativity { h, g, f });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_mono(&self, f: MorId) -> bool {
        let a = self.dom(f);
        let mut images = Vec::new();
        self.objects().all(|z| {
            images.clear();
            images.extend(self.hom(z, a).iter().map(|&u| self.comp(f, u)));
            all_distinct(&mut images)
        })
    }

    pub fn is_epi(&self, f: MorId) -> bool {
        if let Some(epis) = self.caches.epis.get() {
            return epis[f.idx()];
        }
        self.is_epi_uncached(f)
    }

    fn is_epi_uncached(&self, f: MorId) -> bool {
        let b = self.cod(f);
        let mut images = Vec::new();
        self.objects().all(|z| {
            images.clear();
            images.extend(self.hom(b, z).iter().map(|&u| self.comp(u, f)));
            all_distinct(&mut images)
        })
    }

    /// Epimorphisms of this category, computed once.
    pub fn epis(&self) -> &[bool] {
        self.caches
            .epis
            .get_or_init(|| self.morphisms().map(|f| self.is_epi_uncached(f)).collect())
    }

    /// Some `r` with `r ∘ f = 1`.
    pub fn retraction(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        let one = self.id(a);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&r| self.comp(r, f) == one)
    }

    /// Some `s` with `f ∘ s = 1`.
    pub fn section(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        let one = self.id(b);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&s| self.comp(f, s) == one)
    }

    pub fn classify(&self, f: MorId) -> MorphismClassification {
        let split_mono = self.retraction(f).is_some();
        let split_epi = self.section(f).is_some();
        let (a, b) = (self.dom(f), self.cod(f));
        let iso = self
            .hom(b, a)
            .iter()
            .any(|&g| self.comp(g, f) == self.id(a) && self.comp(f, g) == self.id(b));
        MorphismClassification {
            mono: self.is_mono(f),
            epi: self.is_epi(f),
            split_mono,
            split_epi,
            iso,
        }
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .any(|&g| self.comp(g, f) == self.id(a) && self.comp(f, g) == self.id(b))
    }

    /// Renames object `i` to `obj_perm[i]` and morphism `j` to `mor_perm[j]`.
    pub fn relabel(&self, obj_perm: &[u32], mor_perm: &[u32]) -> Result<FinCategory> {
        let n = self.objects.len();
        let m = self.morphisms.len();
        if !is_permutation(obj_perm, n) || !is_permutation(mor_perm, m) {
            return Err(Error::MalformedCategory(
                "relabelling is not a permutation".into(),
            ));
        }
        let mut objects = vec![None; n];
        for (i, o) in self.objects.iter().enumerate() {
            objects[obj_perm[i] as usize] = Some(o.clone());
        }
        let mut morphisms = vec![None; m];
        for (j, mo) in self.morphisms.iter().enumerate() {
            morphisms[mor_perm[j] as usize] = Some(Morphism {
                dom: ObjId(obj_perm[mo.dom.idx()]),
                cod: ObjId(obj_perm[mo.cod.idx()]),
                label: mo.label.clone(),
                map: mo.map.clone(),
            });
        }
        let mut b = CategoryBuilder {
            objects: objects.into_iter().map(Option::unwrap).collect(),
            morphisms: morphisms.into_iter().map(Option::unwrap).collect(),
            ..Default::default()
        };
        for o in self.objects() {
            b.set_identity(ObjId(obj_perm[o.idx()]), MorId(mor_perm[self.id(o).idx()]));
        }
        let mp = |x: MorId| MorId(mor_perm[x.idx()]);
        for f in self.morphisms() {
            for z in self.objects() {
                for &g in self.hom(self.cod(f), z) {
                    b.set_composite(mp(g), mp(f), mp(self.comp(g, f)));
                }
            }
        }
        b.build()
    }

    /// Renames the elements of one object's carrier: element `i` becomes
    /// `perm[i]`, and every function into or out of the object is transported.
    /// Morphism and object ids are unchanged.
    pub fn permute_carrier(&self, obj: ObjId, perm: &[u32]) -> Result<FinCategory> {
        let size = self
            .carrier(obj)
            .ok_or_else(|| Error::MalformedCategory("object is not concrete".into()))?;
        if !is_permutation(perm, size) {
            return Err(Error::MalformedCategory(
                "carrier relabelling is not a permutation".into(),
            ));
        }
        let mut b = CategoryBuilder {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            ..Default::default()
        };
        for m in b.morphisms.iter_mut() {
            let Some(map) = m.map.as_mut() else { continue };
            if m.cod == obj {
                for x in map.iter_mut() {
                    *x = perm[*x as usize];
                }
            }
            if m.dom == obj {
                let mut moved = vec![0; map.len()];
                for (i, &x) in map.iter().enumerate() {
                    moved[perm[i] as usize] = x;
                }
                *map = moved;
            }
        }
        for o in self.objects() {
            b.set_identity(o, self.id(o));
        }
        for f in self.morphisms() {
            for z in self.objects() {
                for &g in self.hom(self.cod(f), z) {
                    b.set_composite(g, f, self.comp(g, f));
                }
            }
        }
        b.build()
    }

    pub fn to_json(&self) -> CategoryJson {
        let mut compose = Vec::new();
        for f in self.morphisms() {
            for z in self.objects() {
                for &g in self.hom(self.cod(f), z) {
                    compose.push([g.0, f.0, self.comp(g, f).0]);
                }
            }
        }
        compose.sort_unstable();
        CategoryJson {
            objects: self
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| ObjectJson {
                    id: i as u32,
                    label: o.label.clone(),
                    carrier: o.carrier,
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .enumerate()
                .map(|(i, m)| MorphismJson {
                    id: i as u32,
                    dom: m.dom.0,
                    cod: m.cod.0,
                    label: m.label.clone(),
                    map: m.map.clone(),
                })
                .collect(),
            compose,
            identities: self.objects().map(|o| (o.0, self.id(o).0)).collect(),
        }
    }

    pub fn from_json(json: &CategoryJson) -> Result<FinCategory> {
        let n = json.objects.len();
        let m = json.morphisms.len();
        let mut objects = vec![None; n];
        for o in &json.objects {
            let slot = objects.get_mut(o.id as usize).ok_or_else(|| {
                Error::MalformedCategory(format!("object id {} out of range", o.id))
            })?;
            if slot.is_some() {
                return Err(Error::MalformedCategory(format!(
                    "duplicate object id {}",
                    o.id
                )));
            }
            *slot = Some(Object {
                label: o.label.clone(),
                carrier: o.carrier,
            });
        }
        let mut morphisms = vec![None; m];
        for mo in &json.morphisms {
            let slot = morphisms.get_mut(mo.id as usize).ok_or_else(|| {
                Error::MalformedCategory(format!("morphism id {} out of range", mo.id))
            })?;
            if slot.is_some() {
                return Err(Error::MalformedCategory(format!(
                    "duplicate morphism id {}",
                    mo.id
                )));
            }
            *slot = Some(Morphism {
                dom: ObjId(mo.dom),
                cod: ObjId(mo.cod),
                label: mo.label.clone(),
                map: mo.map.clone(),
            });
        }
        let mut b = CategoryBuilder {
            objects: objects.into_iter().map(Option::unwrap).collect(),
            morphisms: morphisms.into_iter().map(Option::unwrap).collect(),
            ..Default::default()
        };
        for (&o, &i) in &json.identities {
            b.set_identity(ObjId(o), MorId(i));
        }
        for &[g, f, gf] in &json.compose {
            for x in [g, f, gf] {
                if x as usize >= m {
                    return Err(Error::UnknownMorphism(MorId(x)));
                }
            }
            let (g, f) = (MorId(g), MorId(f));
            if b.morphisms[f.idx()].cod != b.morphisms[g.idx()].dom {
                return Err(Error::NonComposable { g, f });
            }
            b.set_composite(g, f, MorId(gf));
        }
        b.build()
    }

    pub fn from_json_str(s: &str) -> Result<FinCategory> {
        let json: CategoryJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        FinCategory::from_json(&json)
    }
}

/// On-disk category format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<ObjectJson>,
    pub morphisms: Vec<MorphismJson>,
    /// Triples `[g, f, g∘f]`.
    pub compose: Vec<[u32; 3]>,
    pub identities: BTreeMap<u32, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: u32,
    pub dom: u32,
    pub cod: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<u32>>,
}

fn check_map_shape(i: usize, m: &Morphism, sizes: &[usize]) -> Result<()> {
    let map = m
        .map
        .as_ref()
        .ok_or_else(|| Error::MalformedCategory(format!("morphism {i} has no function table")))?;
    let (ds, cs) = (sizes[m.dom.idx()], sizes[m.cod.idx()]);
    if map.len() != ds || map.iter().any(|&x| x as usize >= cs) {
        return Err(Error::MalformedCategory(format!(
            "function table of morphism {i} does not fit its carriers"
        )));
    }
    Ok(())
}

fn all_distinct(v: &mut [MorId]) -> bool {
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

fn is_permutation(p: &[u32], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter()
        .all(|&x| (x as usize) < n && !std::mem::replace(&mut seen[x as usize], true))
}

/// Thin category of the total order `0 < 1 < … < n-1`.
pub fn chain_category(n: usize) -> FinCategory {
    let mut objs = Vec::new();
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        objs.push(b.add_object(Some(format!("{i}")), None));
    }
    poset_into(&mut b, &objs, |i, j| i <= j)
}

/// Thin category of a finite preorder given by `leq`.
pub fn poset_category(n: usize, leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    let mut objs = Vec::new();
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        objs.push(b.add_object(Some(format!("{i}")), None));
    }
    poset_into(&mut b, &objs, leq)
}

fn poset_into(
    b: &mut CategoryBuilder,
    objs: &[ObjId],
    leq: impl Fn(usize, usize) -> bool,
) -> FinCategory {
    let n = objs.len();
    let mut arrow = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if leq(i, j) {
                arrow[i * n + j] =
                    Some(b.add_morphism(objs[i], objs[j], Some(format!("{i}<={j}")), None));
            }
        }
    }
    for i in 0..n {
        b.set_identity(
            objs[i],
            arrow[i * n + i].expect("preorder must be reflexive"),
        );
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(f), Some(g)) = (arrow[i * n + j], arrow[j * n + k]) {
                    let gf = arrow[i * n + k].expect("preorder must be transitive");
                    b.set_composite(g, f, gf);
                }
            }
        }
    }
    b.clone().build().expect("poset categories are valid")
}

/// The category with one object and one morphism.
pub fn terminal_category() -> FinCategory {
    chain_category(1)
}
