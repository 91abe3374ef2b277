//! Fusion and expansion of MCX compositions that share controls and target.
//!
//! MCX gates whose control strings are distinct basis states act on
//! orthogonal subspaces, so they commute. When the strings agree on a fixed
//! set of positions and enumerate every combination of the remaining ones,
//! the whole product is a single MCX controlled on the fixed positions only.

use crate::bits::{low_mask, BitPattern, ControlSet};
use crate::circuit::{Control, ControlPattern, Gate, Register};
use crate::error::{Error, Result};

/// Fixed positions and values shared by every string of a fusable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub pattern: BitPattern,
}

impl Reduction {
    /// Bit mask of the fixed positions.
    pub fn fixed(&self) -> u64 {
        self.pattern.care()
    }

    /// Number of varying positions.
    pub fn free_bits(&self) -> usize {
        self.pattern.width() - self.pattern.constrained()
    }
}

/// Returns the fused pattern when `s2` collapses to one MCX, `None` otherwise.
pub fn is_reducible(s2: &ControlSet) -> Result<Option<Reduction>> {
    let size = s2.len();
    if size == 0 {
        return Err(Error::BadInput("empty control set".into()));
    }
    if !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    let width = s2.width();
    let first = s2.iter().next().expect("nonempty");
    let differs = s2.iter().fold(0u64, |acc, s| acc | (s ^ first));
    let fixed = low_mask(width) & !differs;
    let free = width - fixed.count_ones() as usize;
    // Distinct strings agreeing on `fixed` enumerate all 2^free combinations
    // exactly when there are 2^free of them.
    if free < 64 && size == 1usize << free {
        Ok(Some(Reduction {
            pattern: BitPattern::new(width, fixed, first),
        }))
    } else {
        Ok(None)
    }
}

/// The individual MCX gates of the composition, one per string.
pub fn composition_gates(s2: &ControlSet, reg: Register, target: usize) -> Vec<Gate> {
    s2.iter()
        .map(|s| Gate::mcx(reg.controls(&BitPattern::exact(s2.width(), s)), target))
        .collect()
}

/// Replaces the composition over `s2` by one MCX.
pub fn reduce_composition(s2: &ControlSet, reg: Register, target: usize) -> Result<Gate> {
    if reg.contains(target) {
        return Err(Error::BadGate(format!("target q{target} lies in the control register")));
    }
    let reduction = is_reducible(s2)?.ok_or(Error::NotReducible)?;
    Ok(Gate::mcx(reg.controls(&reduction.pattern), target))
}

/// Splits one MCX into `2^|grow|` MCX gates by turning each qubit of `grow`
/// from don't-care into an explicit 0/1 control.
pub fn expand_mcx(
    controls: &ControlPattern,
    target: usize,
    grow: &[usize],
) -> Result<Vec<ControlPattern>> {
    for (i, &q) in grow.iter().enumerate() {
        if q == target {
            return Err(Error::BadExpansion(format!("q{q} is the target")));
        }
        if controls.involves(q) {
            return Err(Error::BadExpansion(format!("q{q} is already controlled")));
        }
        if grow[..i].contains(&q) {
            return Err(Error::BadExpansion(format!("q{q} listed twice")));
        }
    }
    if controls.involves(target) {
        return Err(Error::BadExpansion(format!("target q{target} is controlled")));
    }
    let mut out = Vec::with_capacity(1 << grow.len());
    for combo in 0..(1u64 << grow.len()) {
        let mut all: Vec<Control> = controls.controls().to_vec();
        // The first listed qubit takes the most significant bit of `combo`.
        for (i, &q) in grow.iter().enumerate() {
            let bit = grow.len() - 1 - i;
            all.push(Control {
                qubit: q,
                value: combo >> bit & 1 == 1,
            });
        }
        out.push(ControlPattern::new(all)?);
    }
    Ok(out)
}
