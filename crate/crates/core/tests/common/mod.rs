//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use blockenc::{Circuit, Complex64, Gate, RegisterLayout, Unitary};

/// Minimum total Hamming cost over all bijections `a -> b`.
pub fn brute_force_assignment(a: &[u64], b: &[u64]) -> usize {
    assert_eq!(a.len(), b.len());
    let mut idx: Vec<usize> = (0..b.len()).collect();
    let mut best = usize::MAX;
    permutations(&mut idx, 0, &mut |perm| {
        let cost = a.iter().zip(perm).map(|(x, &j)| (x ^ b[j]).count_ones() as usize).sum();
        best = best.min(cost);
    });
    best
}

/// Minimum of `Σ cost[i][perm[i]]` over all permutations.
pub fn brute_force_matrix(cost: &[Vec<i64>]) -> i64 {
    let mut idx: Vec<usize> = (0..cost.len()).collect();
    let mut best = i64::MAX;
    permutations(&mut idx, 0, &mut |perm| {
        best = best.min(perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum());
    });
    if cost.is_empty() {
        0
    } else {
        best
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Every sub-cube of the `width`-bit cube as a set of members.
pub fn all_cubes(width: usize) -> Vec<BTreeSet<u64>> {
    let mut out = Vec::new();
    // each position is 0, 1 or free
    for code in 0..3usize.pow(width as u32) {
        let mut digits = Vec::with_capacity(width);
        let mut c = code;
        for _ in 0..width {
            digits.push(c % 3);
            c /= 3;
        }
        let mut members = BTreeSet::new();
        for x in 0..1u64 << width {
            if (0..width).all(|b| digits[b] == 2 || (x >> b & 1) as usize == digits[b]) {
                members.insert(x);
            }
        }
        out.push(members);
    }
    out
}

/// Unitary of a gate list built as the product of individual gate matrices.
pub fn product_of_gates(layout: RegisterLayout, gates: &[Gate]) -> Unitary {
    let mut u = Unitary::identity(layout.dim());
    for g in gates {
        u = blockenc::gate_unitary(g, layout).unwrap().mul(&u);
    }
    u
}

/// Permutation adding `delta` modulo `2^n` to the matrix register on the
/// data states in `items`, computed by index arithmetic.
pub fn shift_oracle(layout: RegisterLayout, items: &BTreeSet<u64>, delta: i64) -> Unitary {
    let n = layout.matrix;
    let dim_m = 1i64 << n;
    let low = (1usize << n) - 1;
    let flag_bits = layout.total() - layout.data;
    Unitary::from_fn(layout.dim(), |row, col| {
        let data = (col >> flag_bits) as u64;
        let image = if items.contains(&data) {
            let j = (col & low) as i64;
            (col & !low) | ((j + delta).rem_euclid(dim_m) as usize)
        } else {
            col
        };
        if row == image {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn is_exact_identity(u: &Unitary) -> bool {
    u == &Unitary::identity(u.dim())
}

pub fn unitarity(c: &Circuit) -> f64 {
    blockenc::circuit_unitary(c).unwrap().unitarity_residual()
}

/// Largest singular value by power iteration on `B†B`.
pub fn spectral_norm(b: &[Vec<Complex64>]) -> f64 {
    let n = b.len();
    let apply = |x: &[Complex64]| -> Vec<Complex64> { (0..n).map(|r| (0..n).map(|c| b[r][c] * x[c]).sum()).collect() };
    let apply_adj = |y: &[Complex64]| -> Vec<Complex64> {
        (0..n).map(|c| (0..n).map(|r| b[r][c].conj() * y[r]).sum()).collect()
    };
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64 * 0.01, 0.3)).collect();
    for _ in 0..300 {
        let z = apply_adj(&apply(&x));
        let nz = norm(&z);
        if nz == 0.0 {
            return 0.0;
        }
        x = z.into_iter().map(|v| v / nz).collect();
    }
    norm(&apply(&x))
}

/// Dense `A / α - block` check against the matrix definition directly.
pub fn block_error(a: &blockenc::SparseMatrix, c: &Circuit, alpha: f64) -> f64 {
    let u = blockenc::circuit_unitary(c).unwrap();
    let dim = a.dim();
    let mut worst: f64 = 0.0;
    for r in 0..dim {
        for col in 0..dim {
            worst = worst.max((u.get(r, col) * alpha - a.get(r, col)).norm());
        }
    }
    worst
}
