//! Compiler from sparse complex matrices to gate-level block-encoding
//! circuits.
//!
//! A matrix `A` is encoded as `U = UNPREP · O_c · PREP` on three registers:
//! `m` data qubits indexing the distinct values of `A`, one delete qubit and
//! `n` matrix qubits. The block of `U` with data and delete registers in
//! `|0⟩` equals `A / α`, with `α` the sum of the data magnitudes.
//!
//! Basis convention: qubit `q_0` is the most significant bit of a basis
//! index, so the data register occupies the highest bits and the encoded
//! block is the top-left `2^n × 2^n` corner of the unitary.

pub mod assign;
pub mod bits;
pub mod circuit;
pub mod error;
pub mod gallery;
pub mod mcx;
pub mod oracle;
pub mod permute;
pub mod pipeline;
pub mod prep;
pub mod sim;
pub mod sparse;
pub mod verify;

pub use assign::{build_target_set, hungarian, solve_assignment, target_set_for, Bijection, FixedIndexPolicy};
pub use bits::{hamming, BitPattern, ControlSet};
pub use circuit::{
    export_text, import_text, Circuit, Control, ControlPattern, Gate, IrFile, Register, RegisterLayout, IR_HEADER,
};
pub use error::{Error, Result};
pub use mcx::{expand_mcx, is_reducible, reduce_composition, Reduction};
pub use oracle::{
    combined_shift, delete_gates, insert_gates, shift_gates, FusionOptions, Fused, Route, ShiftOp,
};
pub use permute::{a_permute, a_permute_inverse, a_permute_with_stats, a_swap, PermutationSpec, PermuteStats};
pub use pipeline::{
    compile, compile_naive, logical_ops, stats, CompileConfig, EncodedCircuit, LogicalOp, StageReport, StatsReport,
};
pub use prep::{prep_amplitudes, synthesize_prep, synthesize_unprep};
pub use sim::{circuit_unitary, gate_unitary, simulate, Unitary};
pub use sparse::{
    extract_data_vectors, plan_operations, subnormalization, DataVector, DiagonalStrategy, Direction, Entry,
    OperationPlan, Phase, PlanOptions, Shift, SignVector, SparseMatrix, Subnormalization,
};
pub use verify::{compare_block, extract_block, verify, verify_circuit, VerificationReport};

pub use num_complex::Complex64;
