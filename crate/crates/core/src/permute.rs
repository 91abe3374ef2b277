//! Coherent amplitude permutations built from single-bit swaps.

use std::collections::BTreeMap;

use crate::assign::Bijection;
use crate::bits::{hamming_bits, low_mask, BitPattern};
use crate::circuit::{Circuit, ControlPattern, Gate, Register, RegisterLayout};
use crate::error::{Error, Result};

/// A bijection to realize on one register of a layout.
#[derive(Debug, Clone)]
pub struct PermutationSpec {
    pub bijection: Bijection,
    pub register: Register,
    pub layout: RegisterLayout,
}

/// Counters reported alongside a synthesized permutation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PermuteStats {
    pub swaps: usize,
    /// Sources that could not move greedily and were exchanged along a
    /// conjugated path instead.
    pub detours: usize,
    /// Sum of Hamming distances of the moved pairs.
    pub distance: usize,
}

/// MCX exchanging the amplitudes of basis states `a` and `b`, which must
/// differ in exactly one position of `reg`.
pub fn a_swap(reg: Register, a: u64, b: u64) -> Result<Gate> {
    let diff = a ^ b;
    if diff.count_ones() != 1 || (a | b) & !low_mask(reg.width) != 0 {
        return Err(Error::NotAdjacent { a, b });
    }
    let bit = diff.trailing_zeros() as usize;
    let shared = BitPattern::new(reg.width, low_mask(reg.width) & !diff, a);
    Ok(Gate::mcx(reg.controls(&shared), reg.qubit_of_bit(bit)))
}

/// Permutation circuit sending each source amplitude of the bijection to its
/// image.
pub fn a_permute(spec: &PermutationSpec) -> Result<Circuit> {
    a_permute_with_stats(spec).map(|(c, _)| c)
}

/// Sources are routed in ascending order of distance (ties by source); each
/// step flips one differing bit, lowest bit position (highest qubit index)
/// first, into a state that holds no source amplitude. A source with no such
/// step is exchanged with its target along a conjugated path, which leaves
/// every intermediate state untouched.
pub fn a_permute_with_stats(spec: &PermutationSpec) -> Result<(Circuit, PermuteStats)> {
    let reg = spec.register;
    if spec.bijection.width() != reg.width {
        return Err(Error::BadInput(format!(
            "bijection over {} bits does not fit a {}-qubit register",
            spec.bijection.width(),
            reg.width
        )));
    }
    let mut circuit = Circuit::new(spec.layout);
    let mut stats = PermuteStats::default();
    // position -> source amplitude currently stored there, and its inverse
    let mut holds: BTreeMap<u64, u64> = spec.bijection.pairs().iter().map(|&(a, _)| (a, a)).collect();
    let mut place: BTreeMap<u64, u64> = holds.clone();
    let mut pending: Vec<(u64, u64)> = spec
        .bijection
        .pairs()
        .iter()
        .copied()
        .filter(|(a, b)| a != b)
        .collect();
    pending.sort_by_key(|&(a, b)| (hamming_bits(a, b), a));

    // exchanges the contents of two positions
    let exchange = |holds: &mut BTreeMap<u64, u64>, place: &mut BTreeMap<u64, u64>, x: u64, y: u64| {
        let hx = holds.remove(&x);
        let hy = holds.remove(&y);
        if let Some(s) = hx {
            holds.insert(y, s);
            place.insert(s, y);
        }
        if let Some(s) = hy {
            holds.insert(x, s);
            place.insert(s, x);
        }
    };

    for (source, target) in pending {
        let mut cur = place[&source];
        stats.distance += hamming_bits(source, target) as usize;
        while cur != target {
            let diff = cur ^ target;
            let step = (0..reg.width)
                .filter(|b| diff >> b & 1 == 1)
                .map(|b| cur ^ (1 << b))
                .find(|next| *next == target || !holds.contains_key(next));
            match step {
                Some(next) => {
                    circuit.push(a_swap(reg, cur, next)?)?;
                    stats.swaps += 1;
                    exchange(&mut holds, &mut place, cur, next);
                    cur = next;
                }
                None => {
                    let path = bit_path(cur, target, reg.width);
                    let mut gates = Vec::with_capacity(2 * path.len());
                    for w in path.windows(2) {
                        gates.push(a_swap(reg, w[0], w[1])?);
                    }
                    for w in path[..path.len() - 1].windows(2).rev() {
                        gates.push(a_swap(reg, w[0], w[1])?);
                    }
                    stats.swaps += gates.len();
                    stats.detours += 1;
                    circuit.extend(gates)?;
                    exchange(&mut holds, &mut place, cur, target);
                    cur = target;
                }
            }
        }
    }
    Ok((circuit, stats))
}

/// States visited by flipping the differing bits of `from` and `to` one at a
/// time, lowest position first.
fn bit_path(from: u64, to: u64, width: usize) -> Vec<u64> {
    let mut path = vec![from];
    let mut cur = from;
    for b in 0..width {
        if (from ^ to) >> b & 1 == 1 {
            cur ^= 1 << b;
            path.push(cur);
        }
    }
    path
}

/// Undo circuit: the same self-inverse MCX gates in reverse order.
pub fn a_permute_inverse(circuit: &Circuit) -> Circuit {
    circuit.inverse()
}

/// Controlled SWAP of two register qubits, lowered to MCX gates.
pub fn controlled_swap(layout: RegisterLayout, controls: ControlPattern, a: usize, b: usize) -> Result<Circuit> {
    let c = Circuit::from_gates(layout, vec![Gate::Swap { a, b, controls }])?;
    Ok(c.lowered_swaps())
}
