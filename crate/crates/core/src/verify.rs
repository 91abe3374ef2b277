//! Dense-simulation check of an encoded block against the input matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, RegisterLayout};
use crate::error::{Error, Result};
use crate::pipeline::EncodedCircuit;
use crate::sim::{circuit_unitary, Unitary};
use crate::sparse::SparseMatrix;

/// Largest unitarity residual a passing circuit may have.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Sub-matrix on the states with data and delete registers in `|0⟩`. With
/// those registers most significant this is the top-left `2^n` block.
pub fn extract_block(u: &Unitary, layout: RegisterLayout) -> Result<Vec<Vec<Complex64>>> {
    if u.dim() != layout.dim() {
        return Err(Error::BadLayout {
            dim: u.dim(),
            expected: layout.dim(),
        });
    }
    let n = 1usize << layout.matrix;
    Ok((0..n).map(|r| (0..n).map(|c| u.get(r, c)).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryError {
    pub row: usize,
    pub col: usize,
    pub expected: [f64; 2],
    pub actual: [f64; 2],
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub alpha: f64,
    pub max_abs_error: f64,
    /// Entry holding the largest error.
    pub worst: Option<(usize, usize)>,
    pub entries_over_tolerance: usize,
    /// Sum of absolute errors over all entries.
    pub total_error: f64,
    /// Up to ten entries with the largest errors, largest first.
    pub worst_entries: Vec<EntryError>,
    pub unitarity_residual: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict}: max error {:.3e} (tolerance {:.1e}), {} entries over tolerance, unitarity residual {:.3e}, alpha {}",
            self.max_abs_error, self.tolerance, self.entries_over_tolerance, self.unitarity_residual, self.alpha
        );
        if let (false, Some((r, c))) = (self.pass, self.worst) {
            s.push_str(&format!("\nworst entry at row {r}, column {c}"));
        }
        s
    }
}

/// Compares `scale · block(circuit)` with `target` entrywise.
pub fn compare_block(
    target: &[Vec<Complex64>],
    circuit: &Circuit,
    scale: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let layout = circuit.layout();
    let dim = 1usize << layout.matrix;
    if target.len() != dim {
        return Err(Error::BadLayout {
            dim: target.len(),
            expected: dim,
        });
    }
    let u = circuit_unitary(circuit)?;
    let block = extract_block(&u, layout)?;
    let mut errors = Vec::with_capacity(dim * dim);
    for (r, row) in block.iter().enumerate() {
        for (c, &b) in row.iter().enumerate() {
            let actual = b * scale;
            let expected = target[r][c];
            errors.push(EntryError {
                row: r,
                col: c,
                expected: [expected.re, expected.im],
                actual: [actual.re, actual.im],
                error: (actual - expected).norm(),
            });
        }
    }
    let total_error = errors.iter().map(|e| e.error).sum();
    let over = errors.iter().filter(|e| e.error > tol).count();
    errors.sort_by(|a, b| b.error.total_cmp(&a.error).then((a.row, a.col).cmp(&(b.row, b.col))));
    let max_abs_error = errors.first().map_or(0.0, |e| e.error);
    let worst = errors.first().map(|e| (e.row, e.col));
    errors.truncate(10);
    let unitarity_residual = u.unitarity_residual();
    Ok(VerificationReport {
        tolerance: tol,
        alpha: scale,
        max_abs_error,
        worst,
        entries_over_tolerance: over,
        total_error,
        worst_entries: errors,
        unitarity_residual,
        pass: max_abs_error <= tol && unitarity_residual <= UNITARITY_TOLERANCE,
    })
}

/// Checks `α · block(circuit) = A`.
pub fn verify_circuit(matrix: &SparseMatrix, circuit: &Circuit, alpha: f64, tol: f64) -> Result<VerificationReport> {
    if circuit.layout().matrix != matrix.n() {
        return Err(Error::BadLayout {
            dim: 1 << circuit.layout().matrix,
            expected: matrix.dim(),
        });
    }
    compare_block(&matrix.dense(), circuit, alpha, tol)
}

pub fn verify(matrix: &SparseMatrix, encoded: &EncodedCircuit, tol: f64) -> Result<VerificationReport> {
    verify_circuit(matrix, &encoded.circuit, encoded.alpha, tol)
}
