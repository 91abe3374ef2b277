//! Bit strings, ternary control patterns and control sets.
//!
//! A `P`-bit string is stored as the low `P` bits of a `u64`. Bit `i` carries
//! weight `2^i`; written out, strings are most significant bit first, so the
//! leftmost character is bit `P - 1`. Inside a register, bit `i` lives on
//! register qubit `P - 1 - i` (the top qubit holds the most significant bit).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Mask with the low `width` bits set.
pub fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Number of differing positions between two bit strings.
pub fn hamming_bits(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Hamming distance between two textual binary strings of equal length.
pub fn hamming(a: &str, b: &str) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::BadInput(format!(
            "length mismatch: {:?} has {} bits, {:?} has {}",
            a,
            a.len(),
            b,
            b.len()
        )));
    }
    let (_, x) = parse_bits(a)?;
    let (_, y) = parse_bits(b)?;
    Ok(hamming_bits(x, y) as usize)
}

/// Parses a string of `0`/`1` characters, most significant bit first.
pub fn parse_bits(s: &str) -> Result<(usize, u64)> {
    if s.len() > 64 {
        return Err(Error::BadInput(format!("bit string {s:?} is too long")));
    }
    let mut value = 0u64;
    for c in s.chars() {
        value <<= 1;
        match c {
            '0' => {}
            '1' => value |= 1,
            _ => return Err(Error::BadInput(format!("bad bit {c:?} in {s:?}"))),
        }
    }
    Ok((s.len(), value))
}

/// Formats the low `width` bits of `value`, most significant bit first.
pub fn format_bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Ternary pattern over a register: bits in `care` must equal the matching
/// bits of `value`, all other positions are don't-care.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPattern {
    width: usize,
    care: u64,
    value: u64,
}

impl BitPattern {
    pub fn new(width: usize, care: u64, value: u64) -> Self {
        let care = care & low_mask(width);
        BitPattern {
            width,
            care,
            value: value & care,
        }
    }

    /// Pattern matching exactly one basis string.
    pub fn exact(width: usize, value: u64) -> Self {
        Self::new(width, low_mask(width), value)
    }

    /// Pattern without constraints.
    pub fn unconditional(width: usize) -> Self {
        Self::new(width, 0, 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn care(&self) -> u64 {
        self.care
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_unconditional(&self) -> bool {
        self.care == 0
    }

    /// Number of constrained positions.
    pub fn constrained(&self) -> usize {
        self.care.count_ones() as usize
    }

    pub fn matches(&self, bits: u64) -> bool {
        bits & self.care == self.value
    }

    /// Every basis string matched by this pattern, in ascending order.
    pub fn members(&self) -> Vec<u64> {
        let free = low_mask(self.width) & !self.care;
        let mut out = Vec::with_capacity(1 << free.count_ones());
        let mut sub = 0u64;
        loop {
            out.push(self.value | sub);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        out
    }

    /// Parses `0`, `1` and `X` (or `x`) characters, most significant first.
    pub fn parse(s: &str) -> Result<Self> {
        let width = s.chars().count();
        let mut care = 0u64;
        let mut value = 0u64;
        for c in s.chars() {
            care <<= 1;
            value <<= 1;
            match c {
                '0' => care |= 1,
                '1' => {
                    care |= 1;
                    value |= 1;
                }
                'X' | 'x' | '𝖷' => {}
                _ => return Err(Error::BadInput(format!("bad pattern symbol {c:?}"))),
            }
        }
        Ok(Self::new(width, care, value))
    }
}

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            let c = if self.care >> i & 1 == 0 {
                'X'
            } else if self.value >> i & 1 == 1 {
                '1'
            } else {
                '0'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A set of distinct `width`-bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlSet {
    width: usize,
    strings: BTreeSet<u64>,
}

impl ControlSet {
    pub fn new(width: usize, strings: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mask = low_mask(width);
        let mut set = BTreeSet::new();
        for s in strings {
            if s & !mask != 0 {
                return Err(Error::BadInput(format!(
                    "string {s:#b} does not fit in {width} bits"
                )));
            }
            if !set.insert(s) {
                return Err(Error::BadInput(format!("duplicate string {s:#b}")));
            }
        }
        Ok(ControlSet {
            width,
            strings: set,
        })
    }

    /// Builds a set from textual strings such as `["000", "001"]`.
    pub fn from_strs(strs: &[&str]) -> Result<Self> {
        let width = strs.first().map(|s| s.len()).unwrap_or(0);
        let mut values = Vec::with_capacity(strs.len());
        for s in strs {
            let (w, v) = parse_bits(s)?;
            if w != width {
                return Err(Error::BadInput(format!("{s:?} is not {width} bits long")));
            }
            values.push(v);
        }
        Self::new(width, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.strings.contains(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.strings.iter().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<u64> {
        &self.strings
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(|s| format_bits(s, self.width)).collect()
    }
}

/// Splits `set` into disjoint sub-cubes (each expressible as one pattern),
/// greedily taking the largest cube still contained in the remainder.
pub fn subcube_partition(width: usize, set: &BTreeSet<u64>) -> Vec<BitPattern> {
    let mut remaining = set.clone();
    let mut out = Vec::new();
    let full = low_mask(width);
    while !remaining.is_empty() {
        let max_dim = (usize::BITS - 1 - remaining.len().leading_zeros()) as usize;
        let mut found = None;
        'search: for dim in (0..=max_dim.min(width)).rev() {
            for free in masks_with_popcount(width, dim) {
                for &x in &remaining {
                    let cube = BitPattern::new(width, full & !free, x);
                    if cube.members().iter().all(|m| remaining.contains(m)) {
                        found = Some(cube);
                        break 'search;
                    }
                }
            }
        }
        let cube = found.expect("singletons are always cubes");
        for m in cube.members() {
            remaining.remove(&m);
        }
        out.push(cube);
    }
    out
}

/// All `width`-bit masks with exactly `ones` bits set, ascending.
pub fn masks_with_popcount(width: usize, ones: usize) -> Vec<u64> {
    (0..=low_mask(width))
        .filter(|m| m.count_ones() as usize == ones)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming("010", "001").unwrap(), 2);
        assert_eq!(hamming("0110", "0110").unwrap(), 0);
        assert_eq!(hamming("0000", "1111").unwrap(), 4);
        assert!(matches!(hamming("01", "011"), Err(Error::BadInput(_))));
    }

    #[test]
    fn pattern_round_trip() {
        let p = BitPattern::parse("0X1").unwrap();
        assert_eq!(p.to_string(), "0X1");
        assert_eq!(p.members(), vec![0b001, 0b011]);
        assert!(BitPattern::parse("XX").unwrap().is_unconditional());
        assert_eq!(BitPattern::exact(3, 5).to_string(), "101");
    }

    #[test]
    fn partition_prefers_large_cubes() {
        let set: BTreeSet<u64> = (0..10).collect();
        let cubes = subcube_partition(5, &set);
        let names: Vec<String> = cubes.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["00XXX", "0100X"]);
    }

    #[test]
    fn control_set_rejects_duplicates() {
        assert!(ControlSet::from_strs(&["01", "01"]).is_err());
        assert!(ControlSet::from_strs(&["01", "011"]).is_err());
    }
}
