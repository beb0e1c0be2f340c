use super::{FinAlgebra, Preset, Signature};
use crate::error::{Error, Result};

pub const STOCK_NAMES: &[&str] = &[
    "g1", "z2", "z3", "z4", "klein", "s3", "l1", "c2", "c3", "c4", "b2", "m3", "n5",
];

fn cyclic(n: u32) -> FinAlgebra {
    FinAlgebra::from_fn(
        Signature::group(),
        Some(Preset::Group),
        n as usize,
        |k, a| match k {
            0 => (a[0] + a[1]) % n,
            1 => (n - a[0]) % n,
            _ => 0,
        },
    )
    .expect("cyclic group")
}

fn klein() -> FinAlgebra {
    FinAlgebra::from_fn(Signature::group(), Some(Preset::Group), 4, |k, a| match k {
        0 => a[0] ^ a[1],
        1 => a[0],
        _ => 0,
    })
    .expect("Klein group")
}

/// Permutations of {0,1,2} in lexicographic order; `mul(a, b) = a∘b`.
fn s3() -> FinAlgebra {
    let perms: [[u32; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [u32; 3]| perms.iter().position(|&q| q == p).unwrap() as u32;
    FinAlgebra::from_fn(Signature::group(), Some(Preset::Group), 6, |k, a| match k {
        0 => {
            let (p, q) = (perms[a[0] as usize], perms[a[1] as usize]);
            index([p[q[0] as usize], p[q[1] as usize], p[q[2] as usize]])
        }
        1 => {
            let p = perms[a[0] as usize];
            let mut inv = [0; 3];
            for i in 0..3 {
                inv[p[i] as usize] = i as u32;
            }
            index(inv)
        }
        _ => 0,
    })
    .expect("S3")
}

/// Lattice of a finite partial order in which all binary meets and joins exist.
fn lattice_from_order(n: u32, leq: impl Fn(u32, u32) -> bool) -> FinAlgebra {
    let glb = |a: u32, b: u32| {
        (0..n)
            .filter(|&x| leq(x, a) && leq(x, b))
            .find(|&x| (0..n).all(|y| !(leq(y, a) && leq(y, b)) || leq(y, x)))
            .expect("meet exists")
    };
    let lub = |a: u32, b: u32| {
        (0..n)
            .filter(|&x| leq(a, x) && leq(b, x))
            .find(|&x| (0..n).all(|y| !(leq(a, y) && leq(b, y)) || leq(x, y)))
            .expect("join exists")
    };
    FinAlgebra::from_fn(
        Signature::lattice(),
        Some(Preset::Lattice),
        n as usize,
        |k, a| {
            if k == 0 {
                glb(a[0], a[1])
            } else {
                lub(a[0], a[1])
            }
        },
    )
    .expect("lattice from order")
}

pub fn stock_algebra(name: &str) -> Result<FinAlgebra> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "g1" => cyclic(1),
        "z2" => cyclic(2),
        "z3" => cyclic(3),
        "z4" => cyclic(4),
        "klein" => klein(),
        "s3" => s3(),
        "l1" => lattice_from_order(1, |_, _| true),
        "c2" | "2-chain" => lattice_from_order(2, |a, b| a <= b),
        "c3" => lattice_from_order(3, |a, b| a <= b),
        "c4" => lattice_from_order(4, |a, b| a <= b),
        "b2" => lattice_from_order(4, |a, b| a & b == a),
        // 0 bottom, 1..=3 pairwise incomparable atoms, 4 top.
        "m3" => lattice_from_order(5, |a, b| a == b || a == 0 || b == 4),
        // 0 < 1 < 2 < 4 and 0 < 3 < 4.
        "n5" => lattice_from_order(5, |a, b| a == b || a == 0 || b == 4 || (a == 1 && b == 2)),
        _ => return Err(Error::Parse(format!("unknown stock algebra {name:?}"))),
    })
}

pub fn stock_examples() -> Vec<(&'static str, FinAlgebra)> {
    STOCK_NAMES
        .iter()
        .map(|&n| (n, stock_algebra(n).expect("stock")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_sizes() {
        let sizes: Vec<usize> = stock_examples().iter().map(|(_, a)| a.size).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 4, 6, 1, 2, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn s3_is_nonabelian() {
        let s3 = stock_algebra("s3").unwrap();
        let commute =
            (0..6u32).all(|a| (0..6u32).all(|b| s3.apply(0, &[a, b]) == s3.apply(0, &[b, a])));
        assert!(!commute);
    }
}
