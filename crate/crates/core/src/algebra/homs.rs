use super::FinAlgebra;

/// Whether `h` commutes with every operation table.
pub fn is_hom(a: &FinAlgebra, b: &FinAlgebra, h: &[u32]) -> bool {
    if a.signature != b.signature || h.len() != a.size || h.iter().any(|&x| x as usize >= b.size) {
        return false;
    }
    for (k, op) in a.signature.ops.iter().enumerate() {
        let mut args = vec![0u32; op.arity];
        let mut img = vec![0u32; op.arity];
        for mut code in 0..a.size.pow(op.arity as u32) {
            for i in (0..op.arity).rev() {
                args[i] = (code % a.size) as u32;
                img[i] = h[args[i] as usize];
                code /= a.size;
            }
            if h[a.apply(k, &args) as usize] != b.apply(k, &img) {
                return false;
            }
        }
    }
    true
}

/// Elements reachable from `seed` under the operations, sorted.
pub(crate) fn generated(a: &FinAlgebra, seed: &[u32]) -> Vec<u32> {
    let mut inside = vec![false; a.size];
    let mut order: Vec<u32> = Vec::new();
    let push = |x: u32, inside: &mut Vec<bool>, order: &mut Vec<u32>| {
        if !inside[x as usize] {
            inside[x as usize] = true;
            order.push(x);
        }
    };
    for (k, op) in a.signature.ops.iter().enumerate() {
        if op.arity == 0 {
            push(a.apply(k, &[]), &mut inside, &mut order);
        }
    }
    for &x in seed {
        push(x, &mut inside, &mut order);
    }
    let mut done = 0;
    while done < order.len() {
        let x = order[done];
        done += 1;
        for (k, op) in a.signature.ops.iter().enumerate() {
            match op.arity {
                0 => {}
                1 => push(a.apply(k, &[x]), &mut inside, &mut order),
                2 => {
                    for i in 0..done {
                        let y = order[i];
                        push(a.apply(k, &[x, y]), &mut inside, &mut order);
                        push(a.apply(k, &[y, x]), &mut inside, &mut order);
                    }
                }
                n => {
                    // Generic arities: close over all tuples of known elements.
                    let known = order[..done].to_vec();
                    let mut args = vec![0u32; n];
                    for mut code in 0..known.len().pow(n as u32) {
                        for slot in args.iter_mut() {
                            *slot = known[code % known.len()];
                            code /= known.len();
                        }
                        push(a.apply(k, &args), &mut inside, &mut order);
                    }
                }
            }
        }
    }
    order.sort_unstable();
    order
}

/// Greedy generating set: each element not yet generated is added in order.
pub fn generating_set(a: &FinAlgebra) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut inside = vec![false; a.size];
    for x in generated(a, &[]) {
        inside[x as usize] = true;
    }
    for x in 0..a.size as u32 {
        if !inside[x as usize] {
            gens.push(x);
            for y in generated(a, &gens) {
                inside[y as usize] = true;
            }
        }
    }
    gens
}

/// All homomorphisms `a -> b`, in lexicographic order of their tables.
///
/// Generator images are chosen by backtracking; every other value follows by
/// propagating through the operations, and any clash prunes the branch.
pub fn enumerate_homs(a: &FinAlgebra, b: &FinAlgebra) -> Vec<Vec<u32>> {
    if a.signature != b.signature {
        return Vec::new();
    }
    if a.size == 0 {
        return vec![Vec::new()];
    }
    let gens = generating_set(a);
    let mut out = Vec::new();
    let mut choice = vec![0u32; gens.len()];
    if b.size == 0 {
        return out;
    }
    loop {
        if let Some(h) = propagate(a, b, &gens, &choice) {
            out.push(h);
        }
        // Odometer over generator images.
        let mut i = gens.len();
        loop {
            if i == 0 {
                out.sort_unstable();
                out.dedup();
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if (choice[i] as usize) < b.size {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Number of homomorphisms `a -> b`, or `None` once it exceeds `limit`.
pub fn count_homs_upto(a: &FinAlgebra, b: &FinAlgebra, limit: usize) -> Option<usize> {
    if a.signature != b.signature {
        return Some(0);
    }
    if a.size == 0 {
        return (limit >= 1).then_some(1);
    }
    if b.size == 0 {
        return Some(0);
    }
    let gens = generating_set(a);
    let mut choice = vec![0u32; gens.len()];
    let mut n = 0usize;
    loop {
        // Distinct generator images give distinct maps.
        if propagate(a, b, &gens, &choice).is_some() {
            n += 1;
            if n > limit {
                return None;
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return Some(n);
            }
            i -= 1;
            choice[i] += 1;
            if (choice[i] as usize) < b.size {
                break;
            }
            choice[i] = 0;
        }
    }
}

const UNSET: u32 = u32::MAX;

fn propagate(a: &FinAlgebra, b: &FinAlgebra, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    let mut h = vec![UNSET; a.size];
    let mut order: Vec<u32> = Vec::with_capacity(a.size);
    let assign = |x: u32, v: u32, h: &mut Vec<u32>, order: &mut Vec<u32>| -> bool {
        let slot = &mut h[x as usize];
        if *slot == UNSET {
            *slot = v;
            order.push(x);
            true
        } else {
            *slot == v
        }
    };
    for (k, op) in a.signature.ops.iter().enumerate() {
        if op.arity == 0 && !assign(a.apply(k, &[]), b.apply(k, &[]), &mut h, &mut order) {
            return None;
        }
    }
    for (&g, &v) in gens.iter().zip(images) {
        if !assign(g, v, &mut h, &mut order) {
            return None;
        }
    }
    let mut done = 0;
    while done < order.len() {
        let x = order[done];
        done += 1;
        let hx = h[x as usize];
        for (k, op) in a.signature.ops.iter().enumerate() {
            match op.arity {
                0 => {}
                1 => {
                    if !assign(a.apply(k, &[x]), b.apply(k, &[hx]), &mut h, &mut order) {
                        return None;
                    }
                }
                2 => {
                    for i in 0..done {
                        let y = order[i];
                        let hy = h[y as usize];
                        if !assign(
                            a.apply(k, &[x, y]),
                            b.apply(k, &[hx, hy]),
                            &mut h,
                            &mut order,
                        ) || !assign(
                            a.apply(k, &[y, x]),
                            b.apply(k, &[hy, hx]),
                            &mut h,
                            &mut order,
                        ) {
                            return None;
                        }
                    }
                }
                _ => {}
            }
        }
    }
    if h.contains(&UNSET) {
        return None;
    }
    // Operations of arity above two are not propagated; check them directly.
    if a.signature.ops.iter().any(|o| o.arity > 2) && !is_hom(a, b, &h) {
        return None;
    }
    Some(h)
}
