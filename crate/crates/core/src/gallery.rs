//! Example matrices: complex tridiagonal, the structured 32×32 pattern and
//! seeded random instances.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::sparse::{Entry, SparseMatrix};

/// `2^n × 2^n` matrix with `lower`, `diag`, `upper` on the three central
/// diagonals (no wrap-around).
pub fn tridiagonal(n: usize, lower: Complex64, diag: Complex64, upper: Complex64) -> Result<SparseMatrix> {
    let dim = 1usize << n;
    let mut e = Vec::with_capacity(3 * dim);
    for i in 0..dim {
        if i > 0 {
            e.push(Entry { row: i, col: i - 1, value: lower });
        }
        e.push(Entry { row: i, col: i, value: diag });
        if i + 1 < dim {
            e.push(Entry { row: i, col: i + 1, value: upper });
        }
    }
    SparseMatrix::new(dim, e)
}

/// Uniform in `[-1, 1]` excluding zero.
fn nonzero_unit(rng: &mut impl Rng) -> f64 {
    loop {
        let x: f64 = rng.random_range(-1.0..=1.0);
        if x != 0.0 {
            return x;
        }
    }
}

/// Six real coefficients `a..f` for the lower, diagonal and upper values
/// `a+bi`, `c+di`, `e+fi`.
pub fn tridiagonal_coefficients(seed: u64) -> [f64; 6] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| nonzero_unit(&mut rng))
}

pub fn tridiagonal_from(coeffs: [f64; 6]) -> Result<SparseMatrix> {
    let [a, b, c, d, e, f] = coeffs;
    tridiagonal(3, Complex64::new(a, b), Complex64::new(c, d), Complex64::new(e, f))
}

/// The 8×8 complex tridiagonal matrix for a seed.
pub fn random_tridiagonal(seed: u64) -> SparseMatrix {
    tridiagonal_from(tridiagonal_coefficients(seed)).expect("nonzero coefficients")
}

/// Rows covered by the `(i, i-1)` band: all but multiples of five.
fn sub_band_rows() -> impl Iterator<Item = usize> {
    (1..30).filter(|i| i % 5 != 0)
}

/// Rows covered by the `(i, i+1)` band.
fn super_band_rows() -> impl Iterator<Item = usize> {
    (0..29).filter(|i| i % 5 != 4)
}

/// Positions of the fourteen isolated-or-band values of the structured
/// 32×32 pattern, indexed by value.
pub fn structured32_cells() -> Vec<Vec<(usize, usize)>> {
    let singles = [(6, 0), (10, 1), (12, 1), (16, 2), (18, 2), (22, 3), (24, 3), (28, 4)];
    let mut cells = vec![
        (10..32).map(|i| (i, i - 5)).collect::<Vec<_>>(),
        sub_band_rows().map(|i| (i, i - 1)).collect(),
        (0..5).map(|i| (i, i)).collect(),
        (5..32).map(|i| (i, i)).collect(),
        super_band_rows().map(|i| (i, i + 1)).collect(),
        (5..27).map(|i| (i, i + 5)).collect(),
    ];
    cells.extend(singles.iter().map(|&c| vec![c]));
    cells
}

/// Structured 32×32 matrix carrying `values[p]` on the cells of value `p`.
pub fn structured32(values: [f64; 14]) -> Result<SparseMatrix> {
    let entries = structured32_cells()
        .into_iter()
        .zip(values)
        .flat_map(|(cells, v)| {
            cells.into_iter().map(move |(row, col)| Entry {
                row,
                col,
                value: Complex64::new(v, 0.0),
            })
        });
    SparseMatrix::new(32, entries)
}

/// Distinct positive values for the structured pattern, with the two diagonal
/// values ordered so the difference encoding is the cheapest.
pub fn structured32_values(seed: u64) -> [f64; 14] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut v: [f64; 14] = std::array::from_fn(|_| rng.random_range(0.05..1.0));
        if v[2] > v[3] {
            v.swap(2, 3);
        }
        let mut sorted = v;
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            return v;
        }
    }
}

pub fn random_structured32(seed: u64) -> SparseMatrix {
    structured32(structured32_values(seed)).expect("valid pattern")
}

/// Random sparse matrix on `n` qubits. Values are drawn from a small palette
/// so that bands and repeated values occur.
pub fn random_sparse(n: usize, density: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let palette: Vec<Complex64> = (0..4)
        .map(|_| {
            let re = if rng.random_bool(0.8) { nonzero_unit(&mut rng) } else { 0.0 };
            let im = if re == 0.0 || rng.random_bool(0.3) { nonzero_unit(&mut rng) } else { 0.0 };
            Complex64::new(re, im)
        })
        .collect();
    loop {
        let mut e = Vec::new();
        for row in 0..dim {
            for col in 0..dim {
                if rng.random_bool(density) {
                    let value = palette[rng.random_range(0..palette.len())];
                    e.push(Entry { row, col, value });
                }
            }
        }
        if let Ok(m) = SparseMatrix::new(dim, e) {
            return m;
        }
    }
}

/// Random banded matrix: a few full or partial diagonals with one value each.
pub fn random_banded(n: usize, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let bands = rng.random_range(1..=3usize);
    let mut cells = std::collections::BTreeMap::new();
    for _ in 0..bands {
        let offset = rng.random_range(-(dim as i64) + 1..dim as i64);
        let value = Complex64::new(nonzero_unit(&mut rng), if rng.random_bool(0.3) { nonzero_unit(&mut rng) } else { 0.0 });
        let start = rng.random_range(0..dim);
        let len = rng.random_range(1..=dim);
        for row in start..(start + len).min(dim) {
            let col = row as i64 + offset;
            if (0..dim as i64).contains(&col) {
                cells.entry((row, col as usize)).or_insert(value);
            }
        }
    }
    if cells.is_empty() {
        cells.insert((0, 0), Complex64::new(1.0, 0.0));
    }
    SparseMatrix::new(dim, cells.into_iter().map(|((row, col), value)| Entry { row, col, value }))
        .expect("valid cells")
}
