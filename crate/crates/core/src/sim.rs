//! Dense state-vector and unitary simulation of IR circuits.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, RegisterLayout};
use crate::error::{Error, Result};

/// Largest circuit `circuit_unitary` will build densely.
pub const MAX_DENSE_QUBITS: usize = 12;

/// A dense square matrix stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Unitary { dim, data }
    }

    pub fn from_columns(dim: usize, columns: Vec<Vec<Complex64>>) -> Self {
        assert_eq!(columns.len(), dim);
        let data = columns.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(data.len(), dim * dim);
        Unitary { dim, data }
    }

    /// Builds a matrix from a row-major closure.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for col in 0..dim {
            for row in 0..dim {
                data.push(f(row, col));
            }
        }
        Unitary { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Unitary) -> Unitary {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let columns: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|c| {
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                for (k, &b) in rhs.column(c).iter().enumerate() {
                    if b == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, &a) in out.iter_mut().zip(self.column(k)) {
                        *o += a * b;
                    }
                }
                out
            })
            .collect();
        Unitary::from_columns(dim, columns)
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True when every entry is exactly 0 or 1 and each row and column holds
    /// a single 1.
    pub fn is_permutation(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut row_hits = vec![0usize; self.dim];
        for c in 0..self.dim {
            let mut hits = 0;
            for (r, &v) in self.column(c).iter().enumerate() {
                if v == one {
                    hits += 1;
                    row_hits[r] += 1;
                } else if v != zero {
                    return false;
                }
            }
            if hits != 1 {
                return false;
            }
        }
        row_hits.iter().all(|&h| h == 1)
    }

    /// Row index of the 1 in column `col` of a permutation matrix.
    pub fn permutation_image(&self, col: usize) -> Option<usize> {
        let one = Complex64::new(1.0, 0.0);
        self.column(col).iter().position(|&v| v == one)
    }

    /// `max |(U^dagger U - I)_{jk}|`, exploiting column sparsity.
    pub fn unitarity_residual(&self) -> f64 {
        let sparse: Vec<Vec<(usize, Complex64)>> = (0..self.dim)
            .into_par_iter()
            .map(|c| {
                self.column(c)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.norm_sqr() > 0.0)
                    .map(|(r, &v)| (r, v))
                    .collect()
            })
            .collect();
        // Columns sharing no row index have an exactly zero inner product, so
        // only pairs that meet in some row need a dot product.
        let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); self.dim];
        for (c, col) in sparse.iter().enumerate() {
            for &(r, _) in col {
                by_row[r].push(c);
            }
        }
        (0..self.dim)
            .into_par_iter()
            .map(|j| {
                let mut partners: Vec<usize> = sparse[j]
                    .iter()
                    .flat_map(|&(r, _)| by_row[r].iter().copied())
                    .filter(|&k| k >= j)
                    .collect();
                partners.sort_unstable();
                partners.dedup();
                let mut worst: f64 = 0.0;
                // The diagonal must be checked even for an all-zero column.
                if partners.first() != Some(&j) {
                    worst = 1.0;
                }
                for k in partners {
                    let dot = dot_conj(self.column(j), self.column(k));
                    let expected = if j == k { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expected).norm());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Applies `gate` in place to a state over `total` qubits.
pub fn apply_gate(state: &mut [Complex64], total: usize, gate: &Gate) {
    let bit = |q: usize| 1usize << (total - 1 - q);
    let masks = |g: &Gate| g.controls().map_or((0, 0), |c| c.index_masks(total));
    match gate {
        Gate::X { target } | Gate::Mcx { target, .. } => {
            let (mask, value) = masks(gate);
            let t = bit(*target);
            for i in 0..state.len() {
                if i & t == 0 && i & mask == value {
                    state.swap(i, i | t);
                }
            }
        }
        Gate::Ry {
            angle,
            target,
            controls,
        } => {
            let (mask, value) = controls.index_masks(total);
            let t = bit(*target);
            let (s, c) = (angle / 2.0).sin_cos();
            for i in 0..state.len() {
                if i & t == 0 && i & mask == value {
                    let a0 = state[i];
                    let a1 = state[i | t];
                    state[i] = a0 * c - a1 * s;
                    state[i | t] = a0 * s + a1 * c;
                }
            }
        }
        Gate::Phase {
            angle,
            target,
            controls,
        } => {
            let (mask, value) = controls.index_masks(total);
            let t = bit(*target);
            let phase = Complex64::from_polar(1.0, *angle);
            for (i, amp) in state.iter_mut().enumerate() {
                if i & t != 0 && i & mask == value {
                    *amp *= phase;
                }
            }
        }
        Gate::Swap { a, b, controls } => {
            let (mask, value) = controls.index_masks(total);
            let (ba, bb) = (bit(*a), bit(*b));
            for i in 0..state.len() {
                if i & ba != 0 && i & bb == 0 && i & mask == value {
                    state.swap(i, (i & !ba) | bb);
                }
            }
        }
        Gate::GlobalPhase { angle } => {
            let phase = Complex64::from_polar(1.0, *angle);
            for amp in state.iter_mut() {
                *amp *= phase;
            }
        }
    }
}

/// Runs `circuit` on an input state.
pub fn simulate(circuit: &Circuit, input: &[Complex64]) -> Vec<Complex64> {
    let total = circuit.layout().total();
    assert_eq!(input.len(), 1 << total);
    let mut state = input.to_vec();
    for g in circuit.gates() {
        apply_gate(&mut state, total, g);
    }
    state
}

/// Output state for the all-zeros input.
pub fn simulate_zero(circuit: &Circuit) -> Vec<Complex64> {
    let mut input = vec![Complex64::new(0.0, 0.0); circuit.layout().dim()];
    input[0] = Complex64::new(1.0, 0.0);
    simulate(circuit, &input)
}

fn check_size(total: usize) -> Result<()> {
    if total > MAX_DENSE_QUBITS {
        Err(Error::TooLarge {
            qubits: total,
            limit: MAX_DENSE_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// Exact unitary of a single gate on `layout`.
pub fn gate_unitary(gate: &Gate, layout: RegisterLayout) -> Result<Unitary> {
    let total = layout.total();
    gate.validate(total)?;
    check_size(total)?;
    let circuit = Circuit::from_gates(layout, vec![gate.clone()])?;
    circuit_unitary(&circuit)
}

/// Dense unitary of `circuit`; column `j` is the image of basis state `j`.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Unitary> {
    let total = circuit.layout().total();
    check_size(total)?;
    let dim = 1usize << total;
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut state = vec![Complex64::new(0.0, 0.0); dim];
            state[j] = Complex64::new(1.0, 0.0);
            for g in circuit.gates() {
                apply_gate(&mut state, total, g);
            }
            state
        })
        .collect();
    Ok(Unitary::from_columns(dim, columns))
}
