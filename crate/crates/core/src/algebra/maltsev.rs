use serde::{Deserialize, Serialize};

use super::homs::enumerate_homs;
use super::limits::product;
use super::FinAlgebra;

/// Homomorphisms `p: A³ -> A` with `p(x, y, y) = x = p(y, y, x)`, as tables
/// indexed by `(x·n + y)·n + z`.
pub fn find_maltsev_operations(a: &FinAlgebra) -> Vec<Vec<u32>> {
    let sq = product(a, a).expect("same signature");
    let cube = product(&sq.algebra, a).expect("same signature");
    let n = a.size;
    let at = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    enumerate_homs(&cube.algebra, a)
        .into_iter()
        .filter(|p| {
            (0..n).all(|x| {
                (0..n).all(|y| p[at(x, y, y)] as usize == x && p[at(y, y, x)] as usize == x)
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalityFailure {
    pub hom: Vec<u32>,
    pub args: (u32, u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaltsevReport {
    pub operations: Vec<Vec<u32>>,
    pub natural: bool,
    pub failures: Vec<NaturalityFailure>,
}

/// Whether `pb(h x, h y, h z) = h(pa(x, y, z))` for every homomorphism `h: a -> b`.
pub fn maltsev_naturality(
    a: &FinAlgebra,
    pa: &[u32],
    b: &FinAlgebra,
    pb: &[u32],
) -> Vec<NaturalityFailure> {
    let (n, m) = (a.size, b.size);
    let mut out = Vec::new();
    for h in enumerate_homs(a, b) {
        'scan: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = pb[(h[x] as usize * m + h[y] as usize) * m + h[z] as usize];
                    if lhs != h[pa[(x * n + y) * n + z] as usize] {
                        out.push(NaturalityFailure {
                            hom: h.clone(),
                            args: (x as u32, y as u32, z as u32),
                        });
                        break 'scan;
                    }
                }
            }
        }
    }
    out
}
