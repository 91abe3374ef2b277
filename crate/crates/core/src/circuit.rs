//! Gate-level intermediate representation.
//!
//! Qubits are numbered from the top of the circuit: `q0, q1, ...`. A basis
//! index over `P` qubits has `q0` as its most significant bit, so qubit `q`
//! corresponds to bit `P - 1 - q` of the index. The block-encoding layout
//! places the data register first, then the delete flag, then the matrix
//! register; with every flag qubit at `|0>` the basis index equals the
//! matrix index `j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitPattern;
use crate::error::{Error, Result};

/// Header line shared by the text and JSON serializations.
pub const IR_HEADER: &str = "blockenc-ir v1";

/// Register sizes of a block-encoding circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub data: usize,
    pub del: bool,
    pub matrix: usize,
}

/// A contiguous run of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub offset: usize,
    pub width: usize,
}

impl Register {
    /// Qubit holding bit `bit` (weight `2^bit`) of the register value.
    pub fn qubit_of_bit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.width);
        self.offset + self.width - 1 - bit
    }

    /// Translates a register-local pattern into qubit controls.
    pub fn controls(&self, pattern: &BitPattern) -> ControlPattern {
        debug_assert_eq!(pattern.width(), self.width);
        let controls = (0..self.width)
            .rev()
            .filter(|&b| pattern.care() >> b & 1 == 1)
            .map(|b| Control {
                qubit: self.qubit_of_bit(b),
                value: pattern.value() >> b & 1 == 1,
            })
            .collect();
        ControlPattern::from_sorted_unchecked(controls)
    }

    pub fn contains(&self, qubit: usize) -> bool {
        qubit >= self.offset && qubit < self.offset + self.width
    }
}

impl RegisterLayout {
    /// Full block-encoding layout: `data` flag qubits, one delete qubit and
    /// `matrix` index qubits.
    pub fn block_encoding(data: usize, matrix: usize) -> Self {
        RegisterLayout {
            data,
            del: true,
            matrix,
        }
    }

    /// A bare register of `qubits` qubits (no delete flag, no matrix register).
    pub fn qubits(qubits: usize) -> Self {
        RegisterLayout {
            data: qubits,
            del: false,
            matrix: 0,
        }
    }

    pub fn total(&self) -> usize {
        self.data + usize::from(self.del) + self.matrix
    }

    pub fn dim(&self) -> usize {
        1 << self.total()
    }

    pub fn data_register(&self) -> Register {
        Register {
            offset: 0,
            width: self.data,
        }
    }

    pub fn del_qubit(&self) -> Option<usize> {
        self.del.then_some(self.data)
    }

    pub fn matrix_register(&self) -> Register {
        Register {
            offset: self.data + usize::from(self.del),
            width: self.matrix,
        }
    }
}

/// A single control: the gate fires only if `qubit` is in state `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

/// Controls of a gate, sorted by qubit. Qubits not listed are don't-care; an
/// empty pattern is unconditional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ControlPattern(Vec<Control>);

impl ControlPattern {
    pub fn unconditional() -> Self {
        ControlPattern(Vec::new())
    }

    pub fn new(mut controls: Vec<Control>) -> Result<Self> {
        controls.sort();
        if controls.windows(2).any(|w| w[0].qubit == w[1].qubit) {
            return Err(Error::BadGate("a qubit is controlled twice".into()));
        }
        Ok(ControlPattern(controls))
    }

    fn from_sorted_unchecked(controls: Vec<Control>) -> Self {
        ControlPattern(controls)
    }

    /// Convenience constructor from `(qubit, value)` pairs.
    pub fn from_pairs(pairs: &[(usize, bool)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(qubit, value)| Control { qubit, value })
                .collect(),
        )
    }

    /// Parses a pattern such as `"01X"` over qubits `offset..offset+len`.
    pub fn parse_on(offset: usize, s: &str) -> Result<Self> {
        let pattern = BitPattern::parse(s)?;
        Ok(Register {
            offset,
            width: pattern.width(),
        }
        .controls(&pattern))
    }

    pub fn controls(&self) -> &[Control] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn involves(&self, qubit: usize) -> bool {
        self.0.iter().any(|c| c.qubit == qubit)
    }

    /// Union of two patterns on disjoint qubits.
    pub fn merged(&self, other: &ControlPattern) -> Result<Self> {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        Self::new(all)
    }

    /// Number of controls that fall inside `reg`.
    pub fn width_in(&self, reg: &Register) -> usize {
        self.0.iter().filter(|c| reg.contains(c.qubit)).count()
    }

    /// `(mask, value)` over basis indices of a `total`-qubit space.
    pub fn index_masks(&self, total: usize) -> (usize, usize) {
        let mut mask = 0usize;
        let mut value = 0usize;
        for c in &self.0 {
            let bit = 1usize << (total - 1 - c.qubit);
            mask |= bit;
            if c.value {
                value |= bit;
            }
        }
        (mask, value)
    }
}

/// The gate set of the IR. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    X {
        target: usize,
    },
    Mcx {
        controls: ControlPattern,
        target: usize,
    },
    Ry {
        angle: f64,
        target: usize,
        controls: ControlPattern,
    },
    Phase {
        angle: f64,
        target: usize,
        controls: ControlPattern,
    },
    Swap {
        a: usize,
        b: usize,
        controls: ControlPattern,
    },
    #[serde(rename = "gphase")]
    GlobalPhase {
        angle: f64,
    },
}

impl Gate {
    pub fn mcx(controls: ControlPattern, target: usize) -> Self {
        Gate::Mcx { controls, target }
    }

    /// True for X and MCX gates.
    pub fn is_mcx(&self) -> bool {
        matches!(self, Gate::X { .. } | Gate::Mcx { .. })
    }

    pub fn controls(&self) -> Option<&ControlPattern> {
        match self {
            Gate::Mcx { controls, .. }
            | Gate::Ry { controls, .. }
            | Gate::Phase { controls, .. }
            | Gate::Swap { controls, .. } => Some(controls),
            Gate::X { .. } | Gate::GlobalPhase { .. } => None,
        }
    }

    pub fn control_width(&self) -> usize {
        self.controls().map_or(0, ControlPattern::len)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X { .. } => "x",
            Gate::Mcx { .. } => "mcx",
            Gate::Ry { .. } => "ry",
            Gate::Phase { .. } => "phase",
            Gate::Swap { .. } => "swap",
            Gate::GlobalPhase { .. } => "gphase",
        }
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Ry {
                angle,
                target,
                controls,
            } => Gate::Ry {
                angle: -angle,
                target: *target,
                controls: controls.clone(),
            },
            Gate::Phase {
                angle,
                target,
                controls,
            } => Gate::Phase {
                angle: -angle,
                target: *target,
                controls: controls.clone(),
            },
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: -angle },
            other => other.clone(),
        }
    }

    /// Checks qubit indices against a `total`-qubit circuit.
    pub fn validate(&self, total: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= total {
                Err(Error::BadGate(format!(
                    "qubit q{q} out of range for {total} qubits"
                )))
            } else {
                Ok(())
            }
        };
        if let Some(controls) = self.controls() {
            for c in controls.controls() {
                check(c.qubit)?;
            }
        }
        let targets: Vec<usize> = match self {
            Gate::X { target }
            | Gate::Mcx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Phase { target, .. } => vec![*target],
            Gate::Swap { a, b, .. } => {
                if a == b {
                    return Err(Error::BadGate(format!("swap of q{a} with itself")));
                }
                vec![*a, *b]
            }
            Gate::GlobalPhase { .. } => vec![],
        };
        for t in targets {
            check(t)?;
            if self.controls().is_some_and(|c| c.involves(t)) {
                return Err(Error::BadGate(format!("q{t} is both target and control")));
            }
        }
        Ok(())
    }
}

fn write_controls(f: &mut fmt::Formatter<'_>, controls: &ControlPattern) -> fmt::Result {
    write!(f, "ctrl=")?;
    for (i, c) in controls.controls().iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "q{}:{}", c.qubit, u8::from(c.value))?;
    }
    Ok(())
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X { target } => write!(f, "x q{target}"),
            Gate::Mcx { controls, target } => {
                write!(f, "mcx ")?;
                if !controls.is_empty() {
                    write_controls(f, controls)?;
                    write!(f, " ")?;
                }
                write!(f, "target=q{target}")
            }
            Gate::Ry {
                angle,
                target,
                controls,
            }
            | Gate::Phase {
                angle,
                target,
                controls,
            } => {
                write!(f, "{}({angle})", self.name())?;
                if controls.is_empty() {
                    write!(f, " q{target}")
                } else {
                    write!(f, " ")?;
                    write_controls(f, controls)?;
                    write!(f, " target=q{target}")
                }
            }
            Gate::Swap { a, b, controls } => {
                write!(f, "swap ")?;
                if !controls.is_empty() {
                    write_controls(f, controls)?;
                    write!(f, " ")?;
                }
                write!(f, "q{a} q{b}")
            }
            Gate::GlobalPhase { angle } => write!(f, "gphase({angle})"),
        }
    }
}

fn parse_qubit(tok: &str) -> std::result::Result<usize, String> {
    tok.strip_prefix('q')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("bad qubit {tok:?}"))
}

fn parse_controls(tok: &str) -> std::result::Result<ControlPattern, String> {
    let list = tok.strip_prefix("ctrl=").ok_or("expected ctrl=")?;
    let mut controls = Vec::new();
    for item in list.split(',') {
        let (q, v) = item
            .split_once(':')
            .ok_or_else(|| format!("bad control {item:?}"))?;
        let value = match v {
            "0" => false,
            "1" => true,
            _ => return Err(format!("bad control value {v:?}")),
        };
        controls.push(Control {
            qubit: parse_qubit(q)?,
            value,
        });
    }
    ControlPattern::new(controls).map_err(|e| e.to_string())
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, Self::Err> {
        let mut toks = line.split_whitespace();
        let head = toks.next().ok_or("empty gate line")?;
        let rest: Vec<&str> = toks.collect();
        let (name, angle) = match head.split_once('(') {
            Some((name, tail)) => {
                let inner = tail.strip_suffix(')').ok_or("unclosed angle")?;
                let angle: f64 = inner.parse().map_err(|_| format!("bad angle {inner:?}"))?;
                (name, Some(angle))
            }
            None => (head, None),
        };
        let (controls, operands) = match rest.first() {
            Some(t) if t.starts_with("ctrl=") => (parse_controls(t)?, &rest[1..]),
            _ => (ControlPattern::unconditional(), &rest[..]),
        };
        let target_of = |ops: &[&str], keyword: bool| -> std::result::Result<usize, String> {
            match ops {
                [t] => {
                    let t = if keyword {
                        t.strip_prefix("target=").ok_or("expected target=")?
                    } else {
                        t
                    };
                    parse_qubit(t)
                }
                _ => Err(format!("expected one target, got {ops:?}")),
            }
        };
        match (name, angle) {
            ("x", None) if controls.is_empty() => Ok(Gate::X {
                target: target_of(operands, false)?,
            }),
            ("mcx", None) => Ok(Gate::Mcx {
                target: target_of(operands, true)?,
                controls,
            }),
            ("ry" | "phase", Some(angle)) => {
                let target = target_of(operands, !controls.is_empty())?;
                Ok(if name == "ry" {
                    Gate::Ry {
                        angle,
                        target,
                        controls,
                    }
                } else {
                    Gate::Phase {
                        angle,
                        target,
                        controls,
                    }
                })
            }
            ("swap", None) => match operands {
                [a, b] => Ok(Gate::Swap {
                    a: parse_qubit(a)?,
                    b: parse_qubit(b)?,
                    controls,
                }),
                _ => Err("swap needs two qubits".into()),
            },
            ("gphase", Some(angle)) if operands.is_empty() && controls.is_empty() => {
                Ok(Gate::GlobalPhase { angle })
            }
            _ => Err(format!("unrecognized gate {line:?}")),
        }
    }
}

/// An ordered gate list; the first gate is applied first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit {
            layout,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(layout: RegisterLayout, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(layout);
        c.extend(gates)?;
        Ok(c)
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.layout.total())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends another circuit on the same layout.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.layout.total() != self.layout.total() {
            return Err(Error::BadGate(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.layout.total(),
                self.layout.total()
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Adjoint: reversed gate order with each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Re-homes the gates on a wider layout, shifting every qubit by `offset`.
    pub fn embedded(&self, layout: RegisterLayout, offset: usize) -> Result<Circuit> {
        let shift_pattern = |p: &ControlPattern| {
            ControlPattern::from_sorted_unchecked(
                p.controls()
                    .iter()
                    .map(|c| Control {
                        qubit: c.qubit + offset,
                        value: c.value,
                    })
                    .collect(),
            )
        };
        let gates = self.gates.iter().map(|g| match g {
            Gate::X { target } => Gate::X {
                target: target + offset,
            },
            Gate::Mcx { controls, target } => Gate::Mcx {
                controls: shift_pattern(controls),
                target: target + offset,
            },
            Gate::Ry {
                angle,
                target,
                controls,
            } => Gate::Ry {
                angle: *angle,
                target: target + offset,
                controls: shift_pattern(controls),
            },
            Gate::Phase {
                angle,
                target,
                controls,
            } => Gate::Phase {
                angle: *angle,
                target: target + offset,
                controls: shift_pattern(controls),
            },
            Gate::Swap { a, b, controls } => Gate::Swap {
                a: a + offset,
                b: b + offset,
                controls: shift_pattern(controls),
            },
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: *angle },
        });
        Circuit::from_gates(layout, gates.collect())
    }

    /// Replaces each SWAP by its three-MCX equivalent.
    pub fn lowered_swaps(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            match g {
                Gate::Swap { a, b, controls } => {
                    let with = |q: usize, v: bool| {
                        controls
                            .merged(&ControlPattern::from_pairs(&[(q, v)]).unwrap())
                            .expect("swap qubits are not controls")
                    };
                    gates.push(Gate::mcx(with(*b, true), *a));
                    gates.push(Gate::mcx(with(*a, true), *b));
                    gates.push(Gate::mcx(with(*b, true), *a));
                }
                other => gates.push(other.clone()),
            }
        }
        Circuit {
            layout: self.layout,
            gates,
        }
    }

    pub fn mcx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_mcx()).count()
    }
}

/// A serialized circuit plus the subnormalization needed to read its block.
#[derive(Debug, Clone, PartialEq)]
pub struct IrFile {
    pub circuit: Circuit,
    pub alpha: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct IrJson {
    format: String,
    layout: RegisterLayout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    gates: Vec<Gate>,
}

impl IrFile {
    pub fn to_text(&self) -> String {
        let l = self.circuit.layout;
        let mut out = format!(
            "{IR_HEADER}\nlayout data={} del={} matrix={}\n",
            l.data,
            u8::from(l.del),
            l.matrix
        );
        if let Some(alpha) = self.alpha {
            out.push_str(&format!("alpha {alpha}\n"));
        }
        for g in &self.circuit.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| Error::Parse { line, message };
        match lines.next() {
            Some((_, h)) if h == IR_HEADER => {}
            Some((n, h)) => return Err(perr(n, format!("expected header {IR_HEADER:?}, found {h:?}"))),
            None => return Err(perr(0, "empty input".into())),
        }
        let (n, layout_line) = lines.next().ok_or_else(|| perr(1, "missing layout".into()))?;
        let layout = parse_layout(layout_line).map_err(|m| perr(n, m))?;
        let mut circuit = Circuit::new(layout);
        let mut alpha = None;
        for (n, line) in lines {
            if let Some(v) = line.strip_prefix("alpha ") {
                alpha = Some(v.trim().parse().map_err(|_| perr(n, format!("bad alpha {v:?}")))?);
                continue;
            }
            let gate: Gate = line.parse().map_err(|m| perr(n, m))?;
            circuit
                .push(gate)
                .map_err(|e| perr(n, e.to_string()))?;
        }
        Ok(IrFile { circuit, alpha })
    }

    pub fn to_json(&self) -> String {
        let doc = IrJson {
            format: IR_HEADER.to_string(),
            layout: self.circuit.layout,
            alpha: self.alpha,
            gates: self.circuit.gates.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("IR serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: IrJson = serde_json::from_str(text)?;
        if doc.format != IR_HEADER {
            return Err(Error::Json(format!("unsupported format {:?}", doc.format)));
        }
        Ok(IrFile {
            circuit: Circuit::from_gates(doc.layout, doc.gates)?,
            alpha: doc.alpha,
        })
    }
}

fn parse_layout(line: &str) -> std::result::Result<RegisterLayout, String> {
    let rest = line.strip_prefix("layout ").ok_or("expected layout line")?;
    let mut data = None;
    let mut del = None;
    let mut matrix = None;
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("bad field {tok:?}"))?;
        let v: usize = v.parse().map_err(|_| format!("bad value in {tok:?}"))?;
        match k {
            "data" => data = Some(v),
            "del" if v <= 1 => del = Some(v == 1),
            "matrix" => matrix = Some(v),
            _ => return Err(format!("bad field {tok:?}")),
        }
    }
    Ok(RegisterLayout {
        data: data.ok_or("missing data=")?,
        del: del.ok_or("missing del=")?,
        matrix: matrix.ok_or("missing matrix=")?,
    })
}

/// Line-per-gate text form of a circuit.
pub fn export_text(circuit: &Circuit) -> String {
    IrFile {
        circuit: circuit.clone(),
        alpha: None,
    }
    .to_text()
}

/// Inverse of [`export_text`].
pub fn import_text(text: &str) -> Result<Circuit> {
    IrFile::from_text(text).map(|f| f.circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn text_format_lines() {
        assert_eq!(Gate::X { target: 0 }.to_string(), "x q0");
        let mcx = Gate::mcx(ControlPattern::parse_on(0, "01X").unwrap(), 3);
        assert_eq!(mcx.to_string(), "mcx ctrl=q0:0,q1:1 target=q3");
        let ry = Gate::Ry {
            angle: FRAC_PI_2,
            target: 1,
            controls: ControlPattern::unconditional(),
        };
        assert_eq!(ry.to_string(), "ry(1.5707963267948966) q1");
    }

    #[test]
    fn rejects_bad_gates() {
        let mut c = Circuit::new(RegisterLayout::qubits(2));
        assert!(c.push(Gate::X { target: 2 }).is_err());
        let bad = Gate::mcx(ControlPattern::from_pairs(&[(1, true)]).unwrap(), 1);
        assert!(matches!(c.push(bad), Err(Error::BadGate(_))));
        assert!(ControlPattern::from_pairs(&[(0, true), (0, false)]).is_err());
    }

    #[test]
    fn layout_registers() {
        let l = RegisterLayout::block_encoding(3, 5);
        assert_eq!(l.total(), 9);
        assert_eq!(l.del_qubit(), Some(3));
        assert_eq!(l.matrix_register().offset, 4);
        assert_eq!(l.matrix_register().qubit_of_bit(0), 8);
        assert_eq!(l.data_register().qubit_of_bit(2), 0);
    }

    #[test]
    fn import_rejects_garbage() {
        assert!(import_text("nope").is_err());
        let bad = format!("{IR_HEADER}\nlayout data=1 del=0 matrix=0\nfoo q0\n");
        assert!(matches!(import_text(&bad), Err(Error::Parse { line: 3, .. })));
    }

    fn arb_gate(total: usize) -> impl Strategy<Value = Gate> {
        let controls = proptest::collection::btree_map(0..total, any::<bool>(), 0..total);
        let angle = prop_oneof![-10.0f64..10.0, Just(std::f64::consts::PI), Just(1e-300)];
        (0..6usize, 0..total, 0..total, controls, angle).prop_filter_map(
            "target overlaps controls",
            move |(kind, t, u, ctrls, angle)| {
                let pattern = ControlPattern::from_pairs(
                    &ctrls
                        .into_iter()
                        .filter(|(q, _)| *q != t && *q != u)
                        .collect::<Vec<_>>(),
                )
                .ok()?;
                let g = match kind {
                    0 => Gate::X { target: t },
                    1 => Gate::mcx(pattern, t),
                    2 => Gate::Ry { angle, target: t, controls: pattern },
                    3 => Gate::Phase { angle, target: t, controls: pattern },
                    4 if t != u => Gate::Swap { a: t, b: u, controls: pattern },
                    _ => Gate::GlobalPhase { angle },
                };
                Some(g)
            },
        )
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(gates in proptest::collection::vec(arb_gate(6), 0..20), alpha in proptest::option::of(0.0f64..100.0)) {
            let layout = RegisterLayout::block_encoding(2, 3);
            let file = IrFile { circuit: Circuit::from_gates(layout, gates).unwrap(), alpha };
            prop_assert_eq!(&IrFile::from_text(&file.to_text()).unwrap(), &file);
            prop_assert_eq!(&IrFile::from_json(&file.to_json()).unwrap(), &file);
        }
    }
}
