//! Sparse matrix input, data/sign vectors and the per-item operation plan.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One stored entry of a sparse matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// Coordinate-form complex matrix of dimension `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    entries: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    row: usize,
    col: usize,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    dim: usize,
    entries: Vec<EntryRecord>,
}

impl SparseMatrix {
    /// Validates the entries; exact zeros are dropped.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = Entry>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::BadDimension(dim));
        }
        let mut seen = BTreeMap::new();
        for e in entries {
            if e.row >= dim || e.col >= dim {
                return Err(Error::EntryOutOfRange {
                    row: e.row,
                    col: e.col,
                    dim,
                });
            }
            if !e.value.re.is_finite() || !e.value.im.is_finite() {
                return Err(Error::BadInput(format!("non-finite value at ({}, {})", e.row, e.col)));
            }
            if seen.insert((e.row, e.col), e.value).is_some() {
                return Err(Error::DuplicateEntry { row: e.row, col: e.col });
            }
        }
        let entries: Vec<Entry> = seen
            .into_iter()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|((row, col), value)| Entry {
                row,
                col,
                // normalizes negative zeros so equal values group together
                value: Complex64::new(value.re + 0.0, value.im + 0.0),
            })
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(SparseMatrix {
            n: dim.trailing_zeros() as usize,
            entries,
        })
    }

    /// Builds from a row-major dense matrix.
    pub fn from_dense(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::BadInput(format!("row {r} has {} columns, expected {dim}", row.len())));
            }
            for (c, &value) in row.iter().enumerate() {
                entries.push(Entry { row: r, col: c, value });
            }
        }
        Self::new(dim, entries)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: MatrixRecord = serde_json::from_str(text)?;
        Self::new(
            rec.dim,
            rec.entries.into_iter().map(|e| Entry {
                row: e.row,
                col: e.col,
                value: Complex64::new(e.re, e.im),
            }),
        )
    }

    pub fn to_json(&self) -> String {
        let rec = MatrixRecord {
            dim: self.dim(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryRecord {
                    row: e.row,
                    col: e.col,
                    re: e.value.re,
                    im: e.value.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("matrix serializes")
    }

    /// Number of matrix qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Nonzero entries sorted by (row, col).
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.row, e.col))
            .map(|i| self.entries[i].value)
            .unwrap_or_default()
    }

    /// Row-major dense copy.
    pub fn dense(&self) -> Vec<Vec<Complex64>> {
        let dim = self.dim();
        let mut out = vec![vec![Complex64::default(); dim]; dim];
        for e in &self.entries {
            out[e.row][e.col] = e.value;
        }
        out
    }

    /// Largest absolute row or column sum.
    pub fn max_line_sum(&self) -> f64 {
        let dim = self.dim();
        let mut rows = vec![0.0; dim];
        let mut cols = vec![0.0; dim];
        for e in &self.entries {
            rows[e.row] += e.value.norm();
            cols[e.col] += e.value.norm();
        }
        rows.into_iter().chain(cols).fold(0.0, f64::max)
    }
}

/// Unit phase of a data item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "+i")]
    PlusI,
    #[serde(rename = "-i")]
    MinusI,
}

impl Phase {
    pub fn of_real(x: f64) -> Phase {
        if x < 0.0 {
            Phase::Minus
        } else {
            Phase::Plus
        }
    }

    pub fn of_imag(x: f64) -> Phase {
        if x < 0.0 {
            Phase::MinusI
        } else {
            Phase::PlusI
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Phase::Plus => Complex64::new(1.0, 0.0),
            Phase::Minus => Complex64::new(-1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// Angle of the phase in `(-π, π]`.
    pub fn angle(self) -> f64 {
        match self {
            Phase::Plus => 0.0,
            Phase::Minus => PI,
            Phase::PlusI => FRAC_PI_2,
            Phase::MinusI => -FRAC_PI_2,
        }
    }
}

/// Positive magnitudes loaded onto the data register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataVector {
    items: Vec<f64>,
}

impl DataVector {
    pub fn new(items: Vec<f64>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyData);
        }
        if let Some(bad) = items.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::BadInput(format!("data item {bad} is not a positive real")));
        }
        Ok(DataVector { items })
    }

    pub fn items(&self) -> &[f64] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Data qubit count `⌈log2 s⌉`.
    pub fn qubits(&self) -> usize {
        self.items.len().next_power_of_two().trailing_zeros() as usize
    }

    /// Items followed by zeros up to `2^m`.
    pub fn padded(&self) -> Vec<f64> {
        let mut out = self.items.clone();
        out.resize(1 << self.qubits(), 0.0);
        out
    }

    pub fn alpha(&self) -> f64 {
        self.items.iter().sum()
    }
}

/// One phase per data item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector {
    phases: Vec<Phase>,
}

impl SignVector {
    pub fn new(phases: Vec<Phase>) -> Self {
        SignVector { phases }
    }

    /// All `+1`.
    pub fn positive(len: usize) -> Self {
        SignVector {
            phases: vec![Phase::Plus; len],
        }
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subnormalization {
    pub alpha: f64,
}

pub fn subnormalization(data: &DataVector) -> Subnormalization {
    Subnormalization { alpha: data.alpha() }
}

/// Entries sharing one cyclic diagonal offset and one exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGroup {
    /// `(col - row) mod N`.
    pub offset: usize,
    #[serde(with = "complex_pair")]
    pub value: Complex64,
    /// Rows holding the value, ascending.
    pub rows: Vec<usize>,
    /// Row displacement `row - col` chosen to realize the offset.
    pub displacement: i64,
}

impl ValueGroup {
    pub fn first_row(&self) -> usize {
        self.rows[0]
    }

    pub fn is_band(&self) -> bool {
        self.rows.len() > 1
    }
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// Row index exceeds column index: `c(j) = j + amount`.
    Left,
    /// `c(j) = j - amount`.
    Right,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Right => 'R',
        }
    }
}

/// A cyclic shift of the matrix register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shift {
    pub direction: Direction,
    pub amount: usize,
}

impl Shift {
    /// Exponents of the binary expansion of the amount, ascending.
    pub fn powers(&self) -> Vec<usize> {
        (0..usize::BITS as usize).filter(|b| self.amount >> b & 1 == 1).collect()
    }

    /// Row reached from column `col` in an `n`-qubit register.
    pub fn apply(&self, col: usize, n: usize) -> usize {
        let dim = 1usize << n;
        match self.direction {
            Direction::Left => (col + self.amount) % dim,
            Direction::Right => (col + dim - self.amount % dim) % dim,
        }
    }

    /// Column that the shift sends to `row`.
    pub fn source(&self, row: usize, n: usize) -> usize {
        let dim = 1usize << n;
        match self.direction {
            Direction::Left => (row + dim - self.amount % dim) % dim,
            Direction::Right => (row + self.amount) % dim,
        }
    }

    /// MCX count of the cascades for all powers.
    pub fn cascade_cost(&self, n: usize) -> usize {
        self.powers().iter().map(|&k| n.saturating_sub(k)).sum()
    }

    pub fn label(&self) -> String {
        let d = self.direction.symbol();
        let parts: Vec<String> = self.powers().iter().map(|k| format!("{d}{}", 1usize << k)).collect();
        format!("{d}{} = {}", self.amount, parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    Re,
    Im,
}

/// Operations for one data item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemPlan {
    pub index: usize,
    pub group: usize,
    pub component: Component,
    pub magnitude: f64,
    pub phase: Phase,
    pub shift: Option<Shift>,
    pub deletions: BTreeSet<usize>,
    pub insertions: BTreeSet<usize>,
}

impl ItemPlan {
    /// Rows on which the item survives.
    pub fn rows(&self, n: usize) -> BTreeSet<usize> {
        if !self.insertions.is_empty() {
            self.insertions.clone()
        } else {
            (0..1usize << n).filter(|r| !self.deletions.contains(r)).collect()
        }
    }

    /// Column of the item's entry in `row`.
    pub fn column_for(&self, row: usize, n: usize) -> usize {
        self.shift.map_or(row, |s| s.source(row, n))
    }
}

/// Treatment of a main diagonal carrying two distinct values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DiagonalStrategy {
    /// Pick the cheapest, earliest on ties.
    #[default]
    Auto,
    /// Each value on its own rows.
    Separate,
    /// Difference on the second value's rows, first value everywhere.
    DifferenceOnSecond,
    /// Second value everywhere, difference on the first value's rows.
    DifferenceOnFirst,
}

impl DiagonalStrategy {
    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(DiagonalStrategy::Separate),
            2 => Some(DiagonalStrategy::DifferenceOnSecond),
            3 => Some(DiagonalStrategy::DifferenceOnFirst),
            _ => None,
        }
    }

    pub fn number(self) -> Option<u8> {
        match self {
            DiagonalStrategy::Auto => None,
            DiagonalStrategy::Separate => Some(1),
            DiagonalStrategy::DifferenceOnSecond => Some(2),
            DiagonalStrategy::DifferenceOnFirst => Some(3),
        }
    }
}

/// What was decided for a two-valued main diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRecord {
    pub chosen: u8,
    /// `Σ(|Re| + |Im|)` of the two encoded values under strategies 1, 2, 3.
    pub costs: [f64; 3],
    pub forced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanOptions {
    pub strategy: DiagonalStrategy,
}

/// Items sharing one power-of-two shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftGroup {
    pub direction: Direction,
    /// Exponent `k` of the amount `2^k`.
    pub power: usize,
    pub items: Vec<usize>,
}

impl ShiftGroup {
    pub fn label(&self) -> String {
        format!("{}{}", self.direction.symbol(), 1usize << self.power)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperationPlan {
    pub n: usize,
    pub groups: Vec<ValueGroup>,
    pub items: Vec<ItemPlan>,
    pub data: DataVector,
    pub signs: SignVector,
    pub strategy: Option<StrategyRecord>,
}

impl OperationPlan {
    /// Data qubit count.
    pub fn data_qubits(&self) -> usize {
        self.data.qubits()
    }

    /// Items grouped by common power-of-two shifts: left shifts first, then
    /// right, each by ascending power.
    pub fn shift_groups(&self) -> Vec<ShiftGroup> {
        let mut map: BTreeMap<(Direction, usize), Vec<usize>> = BTreeMap::new();
        for item in &self.items {
            if let Some(s) = item.shift {
                for k in s.powers() {
                    map.entry((s.direction, k)).or_default().push(item.index);
                }
            }
        }
        map.into_iter()
            .map(|((direction, power), items)| ShiftGroup { direction, power, items })
            .collect()
    }

    /// Checks the structural invariants of the plan.
    pub fn validate(&self) -> Result<()> {
        let dim = 1usize << self.n;
        if self.items.len() != self.data.len() || self.items.len() != self.signs.len() {
            return Err(Error::BadInput("plan, data and sign lengths differ".into()));
        }
        let mut shifts: HashMap<usize, Option<Shift>> = HashMap::new();
        for item in &self.items {
            if let Some(s) = item.shift {
                if s.amount == 0 || s.amount >= dim {
                    return Err(Error::BadShift { amount: s.amount, dim });
                }
            }
            if !item.deletions.is_disjoint(&item.insertions) {
                return Err(Error::BadInput(format!("item {} deletes and inserts one row", item.index)));
            }
            if item.deletions.iter().chain(&item.insertions).any(|&r| r >= dim) {
                return Err(Error::BadInput(format!("item {} touches a row outside the matrix", item.index)));
            }
            if let Some(prev) = shifts.insert(item.group, item.shift) {
                if prev != item.shift {
                    return Err(Error::BadInput(format!(
                        "components of group {} are shifted differently",
                        item.group
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense matrix that the plan encodes, row-major.
    pub fn reconstruct(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.n;
        let mut out = vec![vec![Complex64::default(); dim]; dim];
        for item in &self.items {
            let v = item.phase.value() * item.magnitude;
            for row in item.rows(self.n) {
                out[row][item.column_for(row, self.n)] += v;
            }
        }
        out
    }
}

/// Groups entries by cyclic offset and exact value, in plan order: bands by
/// signed displacement then first row, followed by isolated entries by row.
pub fn value_groups(matrix: &SparseMatrix) -> Vec<ValueGroup> {
    let n = matrix.n();
    let dim = matrix.dim();
    let mut index: HashMap<(usize, u64, u64), usize> = HashMap::new();
    let mut raw: Vec<(usize, Complex64, Vec<(usize, usize)>)> = Vec::new();
    for e in matrix.entries() {
        let offset = (e.col + dim - e.row) % dim;
        let key = (offset, e.value.re.to_bits(), e.value.im.to_bits());
        let slot = *index.entry(key).or_insert_with(|| {
            raw.push((offset, e.value, Vec::new()));
            raw.len() - 1
        });
        raw[slot].2.push((e.row, e.col));
    }
    let mut groups: Vec<ValueGroup> = raw
        .into_iter()
        .map(|(offset, value, cells)| {
            let displacement = choose_displacement(&cells, n);
            let mut rows: Vec<usize> = cells.iter().map(|c| c.0).collect();
            rows.sort_unstable();
            ValueGroup {
                offset,
                value,
                rows,
                displacement,
            }
        })
        .collect();
    groups.sort_by_key(|g| {
        if g.is_band() {
            (0, -g.displacement, g.first_row(), 0)
        } else {
            (1, 0, g.first_row(), g.offset)
        }
    });
    groups
}

/// Majority `row - col` over the cells; ties go to the cheaper cascade, then
/// to the non-negative displacement.
fn choose_displacement(cells: &[(usize, usize)], n: usize) -> i64 {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &(r, c) in cells {
        *counts.entry(r as i64 - c as i64).or_default() += 1;
    }
    let cost = |d: i64| displacement_shift(d).map_or(0, |s| s.cascade_cost(n));
    counts
        .into_iter()
        .max_by(|a, b| {
            a.1.cmp(&b.1)
                .then(cost(b.0).cmp(&cost(a.0)))
                .then((a.0 >= 0).cmp(&(b.0 >= 0)))
        })
        .map(|(d, _)| d)
        .expect("group has at least one cell")
}

fn displacement_shift(d: i64) -> Option<Shift> {
    match d {
        0 => None,
        d if d > 0 => Some(Shift {
            direction: Direction::Left,
            amount: d as usize,
        }),
        d => Some(Shift {
            direction: Direction::Right,
            amount: (-d) as usize,
        }),
    }
}

fn value_cost(v: Complex64) -> f64 {
    v.re.abs() + v.im.abs()
}

/// Applies the two-valued main-diagonal strategy, returning effective groups.
fn apply_strategy(
    mut groups: Vec<ValueGroup>,
    strategy: DiagonalStrategy,
) -> (Vec<ValueGroup>, Option<StrategyRecord>) {
    let diag: Vec<usize> = (0..groups.len()).filter(|&i| groups[i].offset == 0).collect();
    if diag.len() != 2 {
        return (groups, None);
    }
    let (i2, i3) = if groups[diag[0]].first_row() <= groups[diag[1]].first_row() {
        (diag[0], diag[1])
    } else {
        (diag[1], diag[0])
    };
    let (v2, v3) = (groups[i2].value, groups[i3].value);
    let costs = [
        value_cost(v2) + value_cost(v3),
        value_cost(v3 - v2) + value_cost(v2),
        value_cost(v3) + value_cost(v2 - v3),
    ];
    let (chosen, forced) = match strategy.number() {
        Some(k) => (k, true),
        None => {
            let mut best = 0;
            for k in 1..3 {
                if costs[k] < costs[best] {
                    best = k;
                }
            }
            (best as u8 + 1, false)
        }
    };
    let r2 = groups[i2].rows.clone();
    let r3 = groups[i3].rows.clone();
    let union: Vec<usize> = r2.iter().chain(&r3).copied().collect::<BTreeSet<_>>().into_iter().collect();
    match chosen {
        2 => {
            groups[i2].value = v3 - v2;
            groups[i2].rows = r3;
            groups[i3].value = v2;
            groups[i3].rows = union;
        }
        3 => {
            groups[i2].value = v3;
            groups[i2].rows = union;
            groups[i3].value = v2 - v3;
            groups[i3].rows = r2;
        }
        _ => {}
    }
    (groups, Some(StrategyRecord { chosen, costs, forced }))
}

/// Data and sign vectors with the default plan options.
pub fn extract_data_vectors(matrix: &SparseMatrix) -> Result<(DataVector, SignVector)> {
    let plan = plan_operations(matrix, &PlanOptions::default())?;
    Ok((plan.data, plan.signs))
}

/// One item per nonzero real and imaginary part of each value group, with its
/// shift and its row deletions or insertions.
pub fn plan_operations(matrix: &SparseMatrix, options: &PlanOptions) -> Result<OperationPlan> {
    let n = matrix.n();
    let dim = matrix.dim();
    let (groups, strategy) = apply_strategy(value_groups(matrix), options.strategy);
    let mut items = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        let present: BTreeSet<usize> = g.rows.iter().copied().collect();
        let (deletions, insertions) = if present.len() == dim {
            (BTreeSet::new(), BTreeSet::new())
        } else if present.len() <= dim - present.len() {
            (BTreeSet::new(), present)
        } else {
            ((0..dim).filter(|r| !present.contains(r)).collect(), BTreeSet::new())
        };
        let shift = displacement_shift(g.displacement);
        for (component, x, phase) in [
            (Component::Re, g.value.re, Phase::of_real(g.value.re)),
            (Component::Im, g.value.im, Phase::of_imag(g.value.im)),
        ] {
            if x != 0.0 {
                items.push(ItemPlan {
                    index: items.len(),
                    group: gi,
                    component,
                    magnitude: x.abs(),
                    phase,
                    shift,
                    deletions: deletions.clone(),
                    insertions: insertions.clone(),
                });
            }
        }
    }
    let data = DataVector::new(items.iter().map(|i| i.magnitude).collect())?;
    let signs = SignVector::new(items.iter().map(|i| i.phase).collect());
    let plan = OperationPlan {
        n,
        groups,
        items,
        data,
        signs,
        strategy,
    };
    plan.validate()?;
    Ok(plan)
}
