//! Shift, delete and insert subcircuits of the index-mapping stage, and the
//! fusion of one operation over many control strings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::assign::{solve_assignment, target_set_for, FixedIndexPolicy};
use crate::bits::{low_mask, subcube_partition, BitPattern, ControlSet};
use crate::circuit::{Circuit, ControlPattern, Gate, Register, RegisterLayout};
use crate::error::{Error, Result};
use crate::mcx::is_reducible;
use crate::permute::{a_permute, PermutationSpec};
use crate::sparse::Direction;

/// A power-of-two cyclic shift of the matrix register, conditioned on a
/// data-register pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftOp {
    pub data: BitPattern,
    pub direction: Direction,
    /// Exponent `k` of the amount `2^k`; the lowest `k` matrix qubits idle.
    pub power: usize,
}

fn merged(a: ControlPattern, b: &ControlPattern) -> ControlPattern {
    a.merged(b).expect("registers are disjoint")
}

/// MCX cascade adding (left) or subtracting (right) `2^power` modulo `2^n`.
/// Bit `b` flips when bits `power..b` are all 1 (increment) or all 0
/// (decrement), highest bit first.
pub fn shift_cascade(
    layout: RegisterLayout,
    controls: &ControlPattern,
    direction: Direction,
    power: usize,
) -> Result<Vec<Gate>> {
    let n = layout.matrix;
    if power >= n {
        return Err(Error::BadShift {
            amount: 1usize.checked_shl(power as u32).unwrap_or(usize::MAX),
            dim: 1 << n,
        });
    }
    let mreg = layout.matrix_register();
    let carry = direction == Direction::Left;
    let mut gates = Vec::with_capacity(n - power);
    for b in (power..n).rev() {
        let care = low_mask(b) & !low_mask(power);
        let value = if carry { care } else { 0 };
        let row = mreg.controls(&BitPattern::new(n, care, value));
        gates.push(Gate::mcx(merged(row, controls), mreg.qubit_of_bit(b)));
    }
    Ok(gates)
}

pub fn shift_gates(layout: RegisterLayout, op: &ShiftOp) -> Result<Circuit> {
    let data = layout.data_register().controls(&op.data);
    Circuit::from_gates(layout, shift_cascade(layout, &data, op.direction, op.power)?)
}

/// How a set of control strings was turned into gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// The set collapses to one pattern as given.
    Direct,
    /// Permuted onto a collapsible set, then restored.
    Permuted,
    /// Split into sub-cubes, one application each.
    Partitioned,
    /// Completed with zero-amplitude slots first.
    Padded,
}

#[derive(Debug, Clone, Default)]
pub struct FusionOptions {
    pub policy: FixedIndexPolicy,
    /// Unused basis states that may join the set, in order of preference.
    pub zero_slots: Vec<u64>,
    /// Always permute power-of-two sets instead of comparing costs.
    pub strict: bool,
    /// Leave permuted states in place; the caller restores them later.
    pub defer_restore: bool,
}

/// Result of fusing one operation over a set of strings.
#[derive(Debug, Clone)]
pub struct Fused {
    pub gates: Vec<Gate>,
    pub route: Route,
    /// Strings the body finally acted on, in the original frame.
    pub slots: BTreeSet<u64>,
    /// Zero slots added to the set.
    pub padded: Vec<u64>,
    /// Permutation gates applied before the body (and, unless deferred,
    /// undone after it).
    pub permutation: Vec<Gate>,
    /// Largest number of register controls on the body.
    pub control_width: usize,
    /// Gates spent on permuting and restoring.
    pub permutation_gates: usize,
}

impl Fused {
    pub fn mcx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_mcx()).count()
    }
}

/// Emits `body` once for every pattern needed to cover `set` on `reg`,
/// choosing the cheapest of the direct, permuted, partitioned and padded
/// routes. Ties prefer permuting, then partitioning, then padding.
pub fn fuse_over(
    layout: RegisterLayout,
    reg: Register,
    set: &BTreeSet<u64>,
    opts: &FusionOptions,
    body: &dyn Fn(&BitPattern) -> Result<Vec<Gate>>,
) -> Result<Fused> {
    if set.is_empty() {
        return Err(Error::BadInput("cannot fuse over an empty set".into()));
    }
    let cs = ControlSet::new(reg.width, set.iter().copied())?;
    if let Some(f) = direct_or_permuted(layout, reg, &cs, opts, body, true)? {
        if f.route == Route::Direct || opts.strict {
            return Ok(f);
        }
    }
    let mut candidates: Vec<Fused> = Vec::new();
    if let Some(f) = direct_or_permuted(layout, reg, &cs, opts, body, false)? {
        candidates.push(f);
    }
    candidates.push(partitioned(reg, set, body)?);
    let need = set.len().next_power_of_two() - set.len();
    if need > 0 {
        let pads: Vec<u64> = opts
            .zero_slots
            .iter()
            .copied()
            .filter(|z| !set.contains(z))
            .take(need)
            .collect();
        if pads.len() == need {
            let full: BTreeSet<u64> = set.iter().chain(&pads).copied().collect();
            let pcs = ControlSet::new(reg.width, full.iter().copied())?;
            if let Some(mut f) = direct_or_permuted(layout, reg, &pcs, opts, body, false)? {
                f.route = Route::Padded;
                f.padded = pads;
                candidates.push(f);
            }
        }
    }
    let best = candidates
        .into_iter()
        .enumerate()
        .min_by_key(|(i, f)| (f.mcx_count(), *i))
        .map(|(_, f)| f)
        .expect("partition is always available");
    Ok(best)
}

/// Permuted (or direct) application for a power-of-two set.
fn direct_or_permuted(
    layout: RegisterLayout,
    reg: Register,
    cs: &ControlSet,
    opts: &FusionOptions,
    body: &dyn Fn(&BitPattern) -> Result<Vec<Gate>>,
    direct_only: bool,
) -> Result<Option<Fused>> {
    if !cs.len().is_power_of_two() {
        return Ok(None);
    }
    if let Some(r) = is_reducible(cs)? {
        let gates = body(&r.pattern)?;
        return Ok(Some(Fused {
            gates,
            route: Route::Direct,
            slots: cs.as_set().clone(),
            padded: Vec::new(),
            permutation: Vec::new(),
            control_width: r.pattern.constrained(),
            permutation_gates: 0,
        }));
    }
    if direct_only && !opts.strict {
        return Ok(None);
    }
    let (pattern, s3) = match target_set_for(cs, &opts.policy) {
        Ok(t) => t,
        Err(Error::BadInput(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let bijection = solve_assignment(cs, &s3)?;
    let perm = a_permute(&PermutationSpec {
        bijection,
        register: reg,
        layout,
    })?
    .into_gates();
    let mut gates = perm.clone();
    gates.extend(body(&pattern)?);
    let mut permutation_gates = perm.len();
    if !opts.defer_restore {
        gates.extend(perm.iter().rev().cloned());
        permutation_gates *= 2;
    }
    Ok(Some(Fused {
        gates,
        route: Route::Permuted,
        slots: cs.as_set().clone(),
        padded: Vec::new(),
        permutation: perm,
        control_width: pattern.constrained(),
        permutation_gates,
    }))
}

fn partitioned(
    reg: Register,
    set: &BTreeSet<u64>,
    body: &dyn Fn(&BitPattern) -> Result<Vec<Gate>>,
) -> Result<Fused> {
    let cubes = subcube_partition(reg.width, set);
    let mut gates = Vec::new();
    let mut width = 0;
    for cube in &cubes {
        gates.extend(body(cube)?);
        width = width.max(cube.constrained());
    }
    let route = if cubes.len() == 1 { Route::Direct } else { Route::Partitioned };
    Ok(Fused {
        gates,
        route,
        slots: set.clone(),
        padded: Vec::new(),
        permutation: Vec::new(),
        control_width: width,
        permutation_gates: 0,
    })
}

fn row_set(layout: RegisterLayout, rows: &BTreeSet<usize>) -> Result<BTreeSet<u64>> {
    let dim = 1usize << layout.matrix;
    if let Some(&r) = rows.iter().find(|&&r| r >= dim) {
        return Err(Error::BadInput(format!("row {r} outside a {dim}-row matrix")));
    }
    Ok(rows.iter().map(|&r| r as u64).collect())
}

/// Flips the delete qubit on `rows` for states matching `data`, fusing the
/// rows with the given options.
pub fn delete_with(
    layout: RegisterLayout,
    data: &ControlPattern,
    rows: &BTreeSet<usize>,
    opts: &FusionOptions,
) -> Result<Fused> {
    let del = layout
        .del_qubit()
        .ok_or_else(|| Error::BadInput("layout has no delete qubit".into()))?;
    let mreg = layout.matrix_register();
    let set = row_set(layout, rows)?;
    fuse_over(layout, mreg, &set, opts, &|p| {
        Ok(vec![Gate::mcx(merged(mreg.controls(p), data), del)])
    })
}

/// Row deletion for one data pattern. Power-of-two row sets that do not
/// collapse are permuted onto a left-ended cube and restored.
pub fn delete_gates(layout: RegisterLayout, data: &BitPattern, rows: &BTreeSet<usize>) -> Result<Circuit> {
    if rows.is_empty() {
        return Err(Error::BadInput("no rows to delete".into()));
    }
    let opts = FusionOptions {
        policy: FixedIndexPolicy::LeftEnded,
        strict: true,
        ..FusionOptions::default()
    };
    let controls = layout.data_register().controls(data);
    Circuit::from_gates(layout, delete_with(layout, &controls, rows, &opts)?.gates)
}

/// Keeps the item only on `rows`: delete everywhere, then undo on `rows`.
pub fn insert_gates(layout: RegisterLayout, data: &BitPattern, rows: &BTreeSet<usize>) -> Result<Circuit> {
    if rows.is_empty() {
        return Err(Error::BadInput("no rows to insert".into()));
    }
    let del = layout
        .del_qubit()
        .ok_or_else(|| Error::BadInput("layout has no delete qubit".into()))?;
    let controls = layout.data_register().controls(data);
    let mut c = Circuit::new(layout);
    c.push(Gate::mcx(controls, del))?;
    c.append(&delete_gates(layout, data, rows)?)?;
    Ok(c)
}

/// One shift applied to every item of `items`, fused over the data register.
pub fn combined_shift(
    layout: RegisterLayout,
    items: &ControlSet,
    direction: Direction,
    power: usize,
    opts: &FusionOptions,
) -> Result<Fused> {
    let dreg = layout.data_register();
    if items.width() != dreg.width {
        return Err(Error::BadInput(format!(
            "item strings have {} bits, data register {}",
            items.width(),
            dreg.width
        )));
    }
    fuse_over(layout, dreg, items.as_set(), opts, &|p| {
        shift_cascade(layout, &dreg.controls(p), direction, power)
    })
}

/// Classical action of an MCX/X gate on a basis state of `reg`. Gates must
/// act only inside `reg`.
pub fn apply_classical(gate: &Gate, reg: Register, state: u64) -> u64 {
    let bit_of = |q: usize| (reg.offset + reg.width - 1 - q) as u32;
    match gate {
        Gate::X { target } => state ^ (1 << bit_of(*target)),
        Gate::Mcx { controls, target } => {
            let on = controls
                .controls()
                .iter()
                .all(|c| (state >> bit_of(c.qubit) & 1 == 1) == c.value);
            if on {
                state ^ (1 << bit_of(*target))
            } else {
                state
            }
        }
        other => panic!("{} is not a classical register gate", other.name()),
    }
}
