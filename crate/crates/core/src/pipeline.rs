//! End-to-end compilation: PREP, index mapping, UNPREP.
//!
//! The index-mapping stage runs all shifts, then all deletions, then all
//! insertions. Matrix-register controls of the later stages therefore always
//! refer to row indices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assign::FixedIndexPolicy;
use crate::bits::BitPattern;
use crate::circuit::{Circuit, ControlPattern, Gate, RegisterLayout};
use crate::error::Result;
use crate::oracle::{apply_classical, delete_with, fuse_over, shift_cascade, FusionOptions, Route};
use crate::prep::{synthesize_prep, synthesize_unprep};
use crate::sparse::{plan_operations, DiagonalStrategy, Direction, OperationPlan, PlanOptions, SparseMatrix, StrategyRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileConfig {
    pub tolerance: f64,
    /// Fixed positions used when fusing over the data register.
    pub data_policy: FixedIndexPolicy,
    /// Fixed positions used when fusing over matrix rows.
    pub matrix_policy: FixedIndexPolicy,
    pub strategy: DiagonalStrategy,
    /// Allow unused data slots to complete item sets.
    pub zero_pad: bool,
    /// Keep data-register permutations in place across operations and undo
    /// them all at the end of the index-mapping stage.
    pub defer_restore: bool,
    /// Leave out the index-mapping stage entirely.
    pub skip_oc: bool,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            tolerance: 1e-9,
            data_policy: FixedIndexPolicy::RightEnded,
            matrix_policy: FixedIndexPolicy::LeftEnded,
            strategy: DiagonalStrategy::Auto,
            zero_pad: true,
            defer_restore: false,
            skip_oc: false,
        }
    }
}

/// One operation of the index-mapping stage over a set of data items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum OpKind {
    Shift { direction: Direction, power: usize },
    /// Flip the delete qubit on these rows.
    Delete { rows: BTreeSet<usize> },
    /// Flip the delete qubit on every row (first half of an insertion).
    DeleteAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Shift,
    Delete,
    Insert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOp {
    pub stage: Stage,
    pub kind: OpKind,
    pub items: Vec<usize>,
}

impl LogicalOp {
    pub fn label(&self) -> String {
        match &self.kind {
            OpKind::Shift { direction, power } => format!("{}{}", direction.symbol(), 1usize << power),
            OpKind::Delete { rows } => {
                let rows: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
                let head = if self.stage == Stage::Insert { "I" } else { "D" };
                format!("{head}[{}]", rows.join(","))
            }
            OpKind::DeleteAll => "D[all]".into(),
        }
    }
}

/// The index-mapping operations of a plan in emission order.
pub fn logical_ops(plan: &OperationPlan) -> Vec<LogicalOp> {
    let mut ops: Vec<LogicalOp> = plan
        .shift_groups()
        .into_iter()
        .map(|g| LogicalOp {
            stage: Stage::Shift,
            kind: OpKind::Shift {
                direction: g.direction,
                power: g.power,
            },
            items: g.items,
        })
        .collect();
    let grouped = |select: &dyn Fn(&crate::sparse::ItemPlan) -> &BTreeSet<usize>| {
        let mut groups: Vec<(BTreeSet<usize>, Vec<usize>)> = Vec::new();
        for item in &plan.items {
            let rows = select(item);
            if rows.is_empty() {
                continue;
            }
            match groups.iter_mut().find(|(r, _)| r == rows) {
                Some((_, items)) => items.push(item.index),
                None => groups.push((rows.clone(), vec![item.index])),
            }
        }
        groups
    };
    for (rows, items) in grouped(&|i| &i.deletions) {
        ops.push(LogicalOp {
            stage: Stage::Delete,
            kind: OpKind::Delete { rows },
            items,
        });
    }
    let inserts = grouped(&|i| &i.insertions);
    if !inserts.is_empty() {
        let mut all: Vec<usize> = inserts.iter().flat_map(|(_, items)| items.iter().copied()).collect();
        all.sort_unstable();
        ops.push(LogicalOp {
            stage: Stage::Insert,
            kind: OpKind::DeleteAll,
            items: all,
        });
        for (rows, items) in inserts {
            ops.push(LogicalOp {
                stage: Stage::Insert,
                kind: OpKind::Delete { rows },
                items,
            });
        }
    }
    ops
}

/// How one logical operation was lowered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub label: String,
    pub op: LogicalOp,
    pub route: Route,
    /// Data slots the operation finally acted on, padding included.
    pub slots: Vec<u64>,
    pub padded: Vec<u64>,
    pub data_control_width: usize,
    pub mcx: usize,
    pub permutation_gates: usize,
}

#[derive(Debug, Clone)]
pub struct EncodedCircuit {
    pub circuit: Circuit,
    pub alpha: f64,
    pub layout: RegisterLayout,
    pub plan: OperationPlan,
    pub stages: Vec<StageReport>,
    pub config: CompileConfig,
}

fn body_for(
    layout: RegisterLayout,
    kind: &OpKind,
    row_opts: &FusionOptions,
    data: &ControlPattern,
) -> Result<Vec<Gate>> {
    match kind {
        OpKind::Shift { direction, power } => shift_cascade(layout, data, *direction, *power),
        OpKind::Delete { rows } => Ok(delete_with(layout, data, rows, row_opts)?.gates),
        OpKind::DeleteAll => Ok(vec![Gate::mcx(
            data.clone(),
            layout.del_qubit().expect("block-encoding layout"),
        )]),
    }
}

fn layout_for(plan: &OperationPlan) -> RegisterLayout {
    RegisterLayout::block_encoding(plan.data_qubits(), plan.n)
}

/// Compiles the fused circuit.
pub fn compile(matrix: &SparseMatrix, config: &CompileConfig) -> Result<EncodedCircuit> {
    let plan = plan_operations(matrix, &PlanOptions { strategy: config.strategy })?;
    let layout = layout_for(&plan);
    let m = layout.data;
    let dreg = layout.data_register();
    let s = plan.items.len() as u64;
    let mut circuit = Circuit::new(layout);
    circuit.append(&synthesize_prep(&plan.data, &plan.signs)?.embedded(layout, 0)?)?;

    let mut stages = Vec::new();
    if !config.skip_oc {
        let row_opts = FusionOptions {
            policy: config.matrix_policy.clone(),
            ..FusionOptions::default()
        };
        // frame[logical slot] = basis state currently holding that slot
        let mut frame: Vec<u64> = (0..1u64 << m).collect();
        let mut deferred: Vec<Gate> = Vec::new();
        for op in logical_ops(&plan) {
            let set: BTreeSet<u64> = op.items.iter().map(|&p| frame[p]).collect();
            let zero_slots = if config.zero_pad {
                (s..1u64 << m).map(|z| frame[z as usize]).collect()
            } else {
                Vec::new()
            };
            let opts = FusionOptions {
                policy: config.data_policy.clone(),
                zero_slots,
                strict: false,
                defer_restore: config.defer_restore,
            };
            let fused = fuse_over(layout, dreg, &set, &opts, &|p| {
                body_for(layout, &op.kind, &row_opts, &dreg.controls(p))
            })?;
            let logical = |x: u64| frame.iter().position(|&f| f == x).expect("frame is a bijection") as u64;
            let mut slots: Vec<u64> = fused.slots.iter().map(|&x| logical(x)).collect();
            slots.sort_unstable();
            let mut padded: Vec<u64> = fused.padded.iter().map(|&x| logical(x)).collect();
            padded.sort_unstable();
            log::debug!("{} over {:?}: {:?}, {} MCX", op.label(), slots, fused.route, fused.mcx_count());
            stages.push(StageReport {
                label: op.label(),
                op: op.clone(),
                route: fused.route,
                slots,
                padded,
                data_control_width: fused.control_width,
                mcx: fused.mcx_count(),
                permutation_gates: fused.permutation_gates,
            });
            circuit.extend(fused.gates)?;
            if config.defer_restore && !fused.permutation.is_empty() {
                for f in frame.iter_mut() {
                    *f = fused.permutation.iter().fold(*f, |x, g| apply_classical(g, dreg, x));
                }
                deferred.extend(fused.permutation);
            }
        }
        circuit.extend(deferred.into_iter().rev())?;
    }

    circuit.append(&synthesize_unprep(&plan.data)?.embedded(layout, 0)?)?;
    Ok(EncodedCircuit {
        circuit,
        alpha: plan.data.alpha(),
        layout,
        plan,
        stages,
        config: config.clone(),
    })
}

/// The same operations as `encoded`, lowered item by item and row by row
/// without any fusion or permutation.
pub fn compile_naive(encoded: &EncodedCircuit) -> Result<Circuit> {
    let plan = &encoded.plan;
    let layout = encoded.layout;
    let dreg = layout.data_register();
    let mreg = layout.matrix_register();
    let del = layout.del_qubit().expect("block-encoding layout");
    let mut circuit = Circuit::new(layout);
    circuit.append(&synthesize_prep(&plan.data, &plan.signs)?.embedded(layout, 0)?)?;
    for stage in &encoded.stages {
        for &slot in &stage.slots {
            let data = dreg.controls(&BitPattern::exact(layout.data, slot));
            match &stage.op.kind {
                OpKind::Shift { direction, power } => {
                    circuit.extend(shift_cascade(layout, &data, *direction, *power)?)?;
                }
                OpKind::Delete { rows } => {
                    for &r in rows {
                        let row = mreg.controls(&BitPattern::exact(layout.matrix, r as u64));
                        circuit.push(Gate::mcx(data.merged(&row)?, del))?;
                    }
                }
                OpKind::DeleteAll => circuit.push(Gate::mcx(data, del))?,
            }
        }
    }
    circuit.append(&synthesize_unprep(&plan.data)?.embedded(layout, 0)?)?;
    Ok(circuit)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitCounts {
    pub gates: usize,
    pub mcx: usize,
    pub by_kind: BTreeMap<String, usize>,
    /// MCX/X gates keyed by number of controls.
    pub mcx_by_control_width: BTreeMap<usize, usize>,
}

impl CircuitCounts {
    pub fn of(circuit: &Circuit) -> Self {
        let mut by_kind = BTreeMap::new();
        let mut widths = BTreeMap::new();
        for g in circuit.gates() {
            *by_kind.entry(g.name().to_string()).or_insert(0) += 1;
            if g.is_mcx() {
                *widths.entry(g.control_width()).or_insert(0) += 1;
            }
        }
        CircuitCounts {
            gates: circuit.len(),
            mcx: circuit.mcx_count(),
            by_kind,
            mcx_by_control_width: widths,
        }
    }
}

/// One row of the per-item operation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    pub item: String,
    pub magnitude: f64,
    pub phase: crate::sparse::Phase,
    pub shift: Option<String>,
    pub deletions: Vec<usize>,
    pub insertions: Vec<usize>,
}

pub fn plan_table(plan: &OperationPlan) -> Vec<PlanRow> {
    plan.items
        .iter()
        .map(|i| PlanRow {
            item: format!("a{}", i.index),
            magnitude: i.magnitude,
            phase: i.phase,
            shift: i.shift.map(|s| s.label()),
            deletions: i.deletions.iter().copied().collect(),
            insertions: i.insertions.iter().copied().collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveComparison {
    pub gates: usize,
    pub mcx: usize,
    pub max_data_control_width: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub data_qubits: usize,
    pub matrix_qubits: usize,
    pub total_qubits: usize,
    pub alpha: f64,
    pub items: usize,
    pub fused: CircuitCounts,
    pub permutation_gates: usize,
    pub naive: NaiveComparison,
    pub strategy: Option<StrategyRecord>,
    pub plan: Vec<PlanRow>,
    pub stages: Vec<StageReport>,
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

pub fn stats(encoded: &EncodedCircuit) -> Result<StatsReport> {
    let naive = compile_naive(encoded)?;
    let dreg = encoded.layout.data_register();
    let naive_width = naive
        .gates()
        .iter()
        .filter(|g| g.is_mcx())
        .filter_map(|g| g.controls().map(|c| c.width_in(&dreg)))
        .max()
        .unwrap_or(0);
    Ok(StatsReport {
        data_qubits: encoded.layout.data,
        matrix_qubits: encoded.layout.matrix,
        total_qubits: encoded.layout.total(),
        alpha: encoded.alpha,
        items: encoded.plan.items.len(),
        fused: CircuitCounts::of(&encoded.circuit),
        permutation_gates: encoded.stages.iter().map(|s| s.permutation_gates).sum(),
        naive: NaiveComparison {
            gates: naive.len(),
            mcx: naive.mcx_count(),
            max_data_control_width: naive_width,
        },
        strategy: encoded.plan.strategy.clone(),
        plan: plan_table(&encoded.plan),
        stages: encoded.stages.clone(),
    })
}
