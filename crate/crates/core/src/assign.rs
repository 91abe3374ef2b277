//! Mapping an arbitrary control set onto a fusable one.
//!
//! Given `S2` and a choice of fixed positions `F`, the target set `S3` agrees
//! with the most frequent sub-string of `S2` on `F` and enumerates the rest.
//! The bijection `S2 -> S3` minimizing total Hamming distance is a linear
//! assignment problem over the strings not already shared by both sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{format_bits, hamming_bits, low_mask, BitPattern, ControlSet};
use crate::error::{Error, Result};

/// Which positions become the fixed (controlled) bits of a fused MCX.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FixedIndexPolicy {
    /// Lowest positions `{P-n-1, ..., 0}`: the bottom qubits of the register.
    #[default]
    RightEnded,
    /// Highest positions `{P-1, ..., n}`: the top qubits of the register.
    LeftEnded,
    /// Bit positions in priority order; the first `P - n` that fit are used.
    Explicit(Vec<usize>),
}

impl FixedIndexPolicy {
    /// Mask of `fixed` positions for a `width`-bit register.
    pub fn fixed_mask(&self, width: usize, fixed: usize) -> Result<u64> {
        if fixed > width {
            return Err(Error::BadInput(format!(
                "cannot fix {fixed} of {width} positions"
            )));
        }
        match self {
            FixedIndexPolicy::RightEnded => Ok(low_mask(fixed)),
            FixedIndexPolicy::LeftEnded => Ok(low_mask(width) & !low_mask(width - fixed)),
            FixedIndexPolicy::Explicit(bits) => {
                let mut mask = 0u64;
                for &b in bits.iter().filter(|&&b| b < width) {
                    if mask.count_ones() as usize == fixed {
                        break;
                    }
                    mask |= 1 << b;
                }
                if mask.count_ones() as usize == fixed {
                    Ok(mask)
                } else {
                    Err(Error::BadInput(format!(
                        "explicit positions {bits:?} provide fewer than {fixed} bits below {width}"
                    )))
                }
            }
        }
    }
}

/// Most frequent sub-string of `s2` on the positions in `fixed`. Ties go to
/// the numerically (equivalently, lexicographically) smallest pattern.
pub fn mode_pattern(s2: &ControlSet, fixed: u64) -> BitPattern {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for s in s2.iter() {
        *counts.entry(s & fixed).or_default() += 1;
    }
    let mut best = (0u64, 0usize);
    for (&pat, &n) in &counts {
        if n > best.1 {
            best = (pat, n);
        }
    }
    BitPattern::new(s2.width(), fixed, best.0)
}

/// All strings agreeing with `pattern` on its fixed positions.
pub fn build_target_set(pattern: &BitPattern) -> ControlSet {
    ControlSet::new(pattern.width(), pattern.members()).expect("pattern members are distinct")
}

/// Mode pattern and target set for `s2` under `policy`.
pub fn target_set_for(s2: &ControlSet, policy: &FixedIndexPolicy) -> Result<(BitPattern, ControlSet)> {
    let size = s2.len();
    if !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    let free = size.trailing_zeros() as usize;
    if free > s2.width() {
        return Err(Error::BadInput("control set larger than its space".into()));
    }
    let fixed = policy.fixed_mask(s2.width(), s2.width() - free)?;
    let pattern = mode_pattern(s2, fixed);
    let s3 = build_target_set(&pattern);
    Ok((pattern, s3))
}

/// A cost-annotated bijection between two control sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    width: usize,
    pairs: Vec<(u64, u64)>,
    cost: usize,
}

impl Bijection {
    pub fn new(width: usize, mut pairs: Vec<(u64, u64)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut targets: Vec<u64> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        let dup_src = pairs.windows(2).any(|w| w[0].0 == w[1].0);
        let dup_dst = targets.windows(2).any(|w| w[0] == w[1]);
        if dup_src || dup_dst {
            return Err(Error::BadInput("mapping is not a bijection".into()));
        }
        let mask = low_mask(width);
        if pairs.iter().any(|&(a, b)| a & !mask != 0 || b & !mask != 0) {
            return Err(Error::BadInput(format!("strings exceed {width} bits")));
        }
        let cost = pairs.iter().map(|&(a, b)| hamming_bits(a, b) as usize).sum();
        Ok(Bijection { width, pairs, cost })
    }

    pub fn identity(set: &ControlSet) -> Self {
        Bijection {
            width: set.width(),
            pairs: set.iter().map(|s| (s, s)).collect(),
            cost: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Pairs sorted by source.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// Total Hamming cost.
    pub fn cost(&self) -> usize {
        self.cost
    }

    pub fn image(&self, source: u64) -> Option<u64> {
        self.pairs
            .binary_search_by_key(&source, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn to_strings(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (format_bits(a, self.width), format_bits(b, self.width)))
            .collect()
    }
}

/// Minimum-cost bijection `s2 -> s3` with Hamming costs. Shared strings map to
/// themselves; among optimal assignments of the rest, the one whose target
/// sequence (sources ascending) is lexicographically smallest is returned.
pub fn solve_assignment(s2: &ControlSet, s3: &ControlSet) -> Result<Bijection> {
    if s2.len() != s3.len() || s2.width() != s3.width() {
        return Err(Error::BadInput(format!(
            "sets of size {} ({} bits) and {} ({} bits) cannot be matched",
            s2.len(),
            s2.width(),
            s3.len(),
            s3.width()
        )));
    }
    let shared: Vec<u64> = s2.iter().filter(|s| s3.contains(*s)).collect();
    let sources: Vec<u64> = s2.iter().filter(|s| !s3.contains(*s)).collect();
    let targets: Vec<u64> = s3.iter().filter(|s| !s2.contains(*s)).collect();
    let cost: Vec<Vec<i64>> = sources
        .iter()
        .map(|&a| targets.iter().map(|&b| i64::from(hamming_bits(a, b))).collect())
        .collect();
    let assignment = lexicographic_assignment(&cost);
    let mut pairs: Vec<(u64, u64)> = shared.iter().map(|&s| (s, s)).collect();
    pairs.extend(
        assignment
            .iter()
            .enumerate()
            .map(|(j, &k)| (sources[j], targets[k])),
    );
    Bijection::new(s2.width(), pairs)
}

/// Optimal assignment of a square cost matrix. Returns `(row -> col, cost)`.
///
/// Shortest augmenting path with vertex potentials, `O(n^3)`.
pub fn hungarian(cost: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");
    const INF: i64 = i64::MAX / 4;
    // 1-based: index 0 is the virtual column used to start each augmentation.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = INF;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for col in 1..=n {
        assignment[owner[col] - 1] = col - 1;
    }
    let total = assignment.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
    (assignment, total)
}

/// Among optimal assignments, fixes rows in order to their smallest feasible
/// column.
fn lexicographic_assignment(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    let (_, mut remaining_best) = hungarian(cost);
    let mut free_cols: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for row in 0..n {
        let rest_rows: Vec<usize> = (row + 1..n).collect();
        let mut chosen = None;
        for (idx, &col) in free_cols.iter().enumerate() {
            let rest_cols: Vec<usize> = free_cols
                .iter()
                .copied()
                .filter(|&c| c != col)
                .collect();
            let sub: Vec<Vec<i64>> = rest_rows
                .iter()
                .map(|&r| rest_cols.iter().map(|&c| cost[r][c]).collect())
                .collect();
            let (_, sub_cost) = hungarian(&sub);
            if cost[row][col] + sub_cost == remaining_best {
                chosen = Some(idx);
                remaining_best -= cost[row][col];
                break;
            }
        }
        let idx = chosen.expect("some column completes an optimal assignment");
        out.push(free_cols.remove(idx));
    }
    out
}
