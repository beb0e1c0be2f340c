//! Finite algebras given by operation tables, and the categories they generate.

mod closure;
mod difunctional;
mod homs;
mod limits;
mod maltsev;
pub mod sets;
mod stock;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closure::{
    build_category_closure, ClosureBudget, ClosureResult, ClosureStatus, LimitRequest,
};
pub use difunctional::{is_difunctional, relation_pairs, DifunctionalResult};
pub use homs::{count_homs_upto, enumerate_homs, generating_set, is_hom};
pub use limits::{equalizer, product, pullback, subalgebra, AlgEqualizer, AlgPullback};
pub use maltsev::{find_maltsev_operations, maltsev_naturality, MaltsevReport, NaturalityFailure};
pub use stock::{stock_algebra, stock_examples, STOCK_NAMES};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpSpec {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature {
    pub ops: Vec<OpSpec>,
}

impl Signature {
    pub fn new(ops: &[(&str, usize)]) -> Self {
        Signature {
            ops: ops
                .iter()
                .map(|&(n, a)| OpSpec {
                    name: n.into(),
                    arity: a,
                })
                .collect(),
        }
    }

    /// `mul/2, inv/1, one/0`.
    pub fn group() -> Self {
        Signature::new(&[("mul", 2), ("inv", 1), ("one", 0)])
    }

    /// `meet/2, join/2`.
    pub fn lattice() -> Self {
        Signature::new(&[("meet", 2), ("join", 2)])
    }

    /// No operations: finite sets.
    pub fn empty() -> Self {
        Signature { ops: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        let mut names: Vec<&str> = self.ops.iter().map(|o| o.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedAlgebra(
                "operation names are not unique".into(),
            ));
        }
        Ok(())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Group,
    Lattice,
}

/// Elements are `0..size`; `tables[k]` is the row-major table of operation `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAlgebra {
    pub signature: Signature,
    pub preset: Option<Preset>,
    pub size: usize,
    pub tables: Vec<Vec<u32>>,
}

impl FinAlgebra {
    /// Checks table shapes and, when a preset is declared, its axioms.
    pub fn new(
        signature: Signature,
        preset: Option<Preset>,
        size: usize,
        tables: Vec<Vec<u32>>,
    ) -> Result<Self> {
        signature.validate()?;
        if tables.len() != signature.ops.len() {
            return Err(Error::MalformedAlgebra(
                "one table per operation is required".into(),
            ));
        }
        for (op, t) in signature.ops.iter().zip(&tables) {
            let want = size.pow(op.arity as u32);
            if t.len() != want {
                return Err(Error::MalformedAlgebra(format!(
                    "table of {} has {} entries, expected {want}",
                    op.name,
                    t.len()
                )));
            }
            if t.iter().any(|&x| x as usize >= size) {
                return Err(Error::MalformedAlgebra(format!(
                    "table of {} leaves the carrier",
                    op.name
                )));
            }
        }
        let alg = FinAlgebra {
            signature,
            preset,
            size,
            tables,
        };
        if let Some(p) = preset {
            alg.check_preset(p)?;
        }
        Ok(alg)
    }

    /// Builds tables by evaluating `f(op_index, args)`.
    pub fn from_fn(
        signature: Signature,
        preset: Option<Preset>,
        size: usize,
        f: impl Fn(usize, &[u32]) -> u32,
    ) -> Result<Self> {
        let tables = signature
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let mut args = vec![0u32; op.arity];
                (0..size.pow(op.arity as u32))
                    .map(|mut code| {
                        for slot in args.iter_mut().rev() {
                            *slot = (code % size) as u32;
                            code /= size;
                        }
                        f(k, &args)
                    })
                    .collect()
            })
            .collect();
        FinAlgebra::new(signature, preset, size, tables)
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature.ops[op].arity
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[u32]) -> u32 {
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size + a as usize;
        }
        self.tables[op][idx]
    }

    fn op(&self, name: &str) -> usize {
        self.signature
            .position(name)
            .expect("preset operation present")
    }

    fn check_preset(&self, preset: Preset) -> Result<()> {
        let want = match preset {
            Preset::Group => Signature::group(),
            Preset::Lattice => Signature::lattice(),
        };
        if self.signature != want {
            return Err(Error::MalformedAlgebra(format!(
                "signature does not match the {preset:?} preset"
            )));
        }
        let n = self.size as u32;
        let fail = |law: &str, inst: &[u32]| {
            Err(Error::MalformedAlgebra(format!("{law} fails at {inst:?}")))
        };
        match preset {
            Preset::Group => {
                let (mul, inv, one) = (self.op("mul"), self.op("inv"), self.op("one"));
                let e = self.apply(one, &[]);
                let m = |a, b| self.apply(mul, &[a, b]);
                for a in 0..n {
                    if m(e, a) != a || m(a, e) != a {
                        return fail("identity", &[a]);
                    }
                    let ia = self.apply(inv, &[a]);
                    if m(a, ia) != e || m(ia, a) != e {
                        return fail("inverse", &[a]);
                    }
                    for b in 0..n {
                        for c in 0..n {
                            if m(m(a, b), c) != m(a, m(b, c)) {
                                return fail("associativity", &[a, b, c]);
                            }
                        }
                    }
                }
            }
            Preset::Lattice => {
                let (meet, join) = (self.op("meet"), self.op("join"));
                let mt = |a, b| self.apply(meet, &[a, b]);
                let jn = |a, b| self.apply(join, &[a, b]);
                for a in 0..n {
                    if mt(a, a) != a || jn(a, a) != a {
                        return fail("idempotence", &[a]);
                    }
                    for b in 0..n {
                        if mt(a, b) != mt(b, a) || jn(a, b) != jn(b, a) {
                            return fail("commutativity", &[a, b]);
                        }
                        if mt(a, jn(a, b)) != a || jn(a, mt(a, b)) != a {
                            return fail("absorption", &[a, b]);
                        }
                        for c in 0..n {
                            if mt(mt(a, b), c) != mt(a, mt(b, c))
                                || jn(jn(a, b), c) != jn(a, jn(b, c))
                            {
                                return fail("associativity", &[a, b, c]);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// First triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`, if any.
    pub fn distributivity_failure(&self) -> Option<(u32, u32, u32)> {
        let (meet, join) = (
            self.signature.position("meet")?,
            self.signature.position("join")?,
        );
        let mt = |a, b| self.apply(meet, &[a, b]);
        let jn = |a, b| self.apply(join, &[a, b]);
        let n = self.size as u32;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mt(a, jn(b, c)) != jn(mt(a, b), mt(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The algebra on `elems` (a subset closed under all operations), renumbered
    /// by position.
    pub(crate) fn restrict(&self, elems: &[u32]) -> FinAlgebra {
        let pos: BTreeMap<u32, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        let size = elems.len();
        let tables = self
            .signature
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let mut args = vec![0u32; op.arity];
                (0..size.pow(op.arity as u32))
                    .map(|mut code| {
                        for slot in args.iter_mut().rev() {
                            *slot = elems[code % size];
                            code /= size;
                        }
                        pos[&self.apply(k, &args)]
                    })
                    .collect()
            })
            .collect();
        FinAlgebra {
            signature: self.signature.clone(),
            preset: self.preset,
            size,
            tables,
        }
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            signature: self.signature.ops.clone(),
            preset: self.preset,
            carrier: self.size,
            tables: self
                .signature
                .ops
                .iter()
                .zip(&self.tables)
                .map(|(op, t)| (op.name.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<FinAlgebra> {
        let signature = Signature {
            ops: json.signature.clone(),
        };
        signature.validate()?;
        let mut tables = Vec::new();
        for op in &signature.ops {
            tables.push(json.tables.get(&op.name).cloned().ok_or_else(|| {
                Error::MalformedAlgebra(format!("missing table for {}", op.name))
            })?);
        }
        if json.tables.len() != signature.ops.len() {
            return Err(Error::MalformedAlgebra(
                "table for an undeclared operation".into(),
            ));
        }
        FinAlgebra::new(signature, json.preset, json.carrier, tables)
    }

    pub fn from_json_str(s: &str) -> Result<FinAlgebra> {
        let json: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        FinAlgebra::from_json(&json)
    }
}

/// On-disk algebra format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub signature: Vec<OpSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    pub carrier: usize,
    pub tables: BTreeMap<String, Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let z3 = stock_algebra("z3").unwrap();
        let back = FinAlgebra::from_json(&z3.to_json()).unwrap();
        assert_eq!(back, z3);
        let s = serde_json::to_string(&z3.to_json()).unwrap();
        assert_eq!(FinAlgebra::from_json_str(&s).unwrap(), z3);
    }

    #[test]
    fn preset_violation_is_named() {
        // Subtraction mod 3 is not associative.
        let bad = FinAlgebra::from_fn(Signature::group(), Some(Preset::Group), 3, |k, a| match k {
            0 => (a[0] + 3 - a[1]) % 3,
            1 => a[0],
            _ => 0,
        });
        match bad {
            Err(Error::MalformedAlgebra(msg)) => {
                assert!(msg.contains("inverse") || msg.contains("associativity"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distributivity_of_stock_lattices() {
        assert!(stock_algebra("m3")
            .unwrap()
            .distributivity_failure()
            .is_some());
        assert!(stock_algebra("n5")
            .unwrap()
            .distributivity_failure()
            .is_some());
        assert!(stock_algebra("b2")
            .unwrap()
            .distributivity_failure()
            .is_none());
        for c in ["c2", "c3", "c4"] {
            assert!(stock_algebra(c).unwrap().distributivity_failure().is_none());
        }
    }

    #[test]
    fn m3_failure_matches_brute_force() {
        let m3 = stock_algebra("m3").unwrap();
        let (a, b, c) = m3.distributivity_failure().unwrap();
        let mt = |x, y| m3.apply(0, &[x, y]);
        let jn = |x, y| m3.apply(1, &[x, y]);
        assert_ne!(mt(a, jn(b, c)), jn(mt(a, b), mt(a, c)));
        let failures = (0..125u32)
            .filter(|t| {
                let (x, y, z) = (t / 25, t / 5 % 5, t % 5);
                mt(x, jn(y, z)) != jn(mt(x, y), mt(x, z))
            })
            .count();
        assert!(failures > 0);
    }
}
