//! State preparation of the data register.
//!
//! Magnitudes are loaded by a binary tree of multiplexed RY rotations: level
//! `k` rotates qubit `q_k` once per value of the `k` qubits above it. Phases
//! follow as controlled PHASE gates, one per item whose phase is not `+1`.

use num_complex::Complex64;

use crate::circuit::{Circuit, ControlPattern, Gate, Register, RegisterLayout};
use crate::bits::BitPattern;
use crate::error::{Error, Result};
use crate::sparse::{DataVector, Phase, SignVector};

/// Target amplitudes `phase_p · sqrt(A_p / α)`, zero-padded to `2^m`.
pub fn prep_amplitudes(data: &DataVector, signs: &SignVector) -> Vec<Complex64> {
    let alpha = data.alpha();
    data.padded()
        .iter()
        .enumerate()
        .map(|(p, &a)| {
            let phase = signs.phases().get(p).copied().unwrap_or(Phase::Plus);
            phase.value() * (a / alpha).sqrt()
        })
        .collect()
}

/// Circuit `C` on `m` qubits with `C|0⟩ = Σ_p ψ_p |p⟩`.
pub fn synthesize_prep(data: &DataVector, signs: &SignVector) -> Result<Circuit> {
    if signs.len() != data.len() {
        return Err(Error::BadInput(format!(
            "{} phases for {} data items",
            signs.len(),
            data.len()
        )));
    }
    let mut circuit = magnitude_tree(data)?;
    let m = data.qubits();
    for (p, phase) in signs.phases().iter().enumerate() {
        if *phase != Phase::Plus {
            circuit.extend(phase_gates(m, p as u64, phase.angle()))?;
        }
    }
    Ok(circuit)
}

/// `V†`, where `V|0⟩ = Σ_p sqrt(A_p / α) |p⟩`.
pub fn synthesize_unprep(data: &DataVector) -> Result<Circuit> {
    Ok(magnitude_tree(data)?.inverse())
}

fn magnitude_tree(data: &DataVector) -> Result<Circuit> {
    let m = data.qubits();
    let alpha = data.alpha();
    if !(alpha > 0.0) {
        return Err(Error::EmptyData);
    }
    let weights: Vec<f64> = data.padded().iter().map(|a| a / alpha).collect();
    let reg = Register { offset: 0, width: m };
    let mut circuit = Circuit::new(RegisterLayout::qubits(m));
    for level in 0..m {
        // each prefix covers a block of 2^(m - level) consecutive indices
        let block = 1usize << (m - level);
        for prefix in 0..(1usize << level) {
            let start = prefix * block;
            let left: f64 = weights[start..start + block / 2].iter().sum();
            let right: f64 = weights[start + block / 2..start + block].iter().sum();
            if right == 0.0 {
                continue;
            }
            let angle = 2.0 * right.sqrt().atan2(left.sqrt());
            let controls = prefix_controls(reg, level, prefix as u64);
            circuit.push(Gate::Ry {
                angle,
                target: level,
                controls,
            })?;
        }
    }
    Ok(circuit)
}

/// Controls fixing qubits `q_0..q_{level-1}` to `prefix`.
fn prefix_controls(reg: Register, level: usize, prefix: u64) -> ControlPattern {
    let m = reg.width;
    let care = if level == 0 { 0 } else { ((1u64 << level) - 1) << (m - level) };
    reg.controls(&BitPattern::new(m, care, prefix << (m - level)))
}

/// Gates multiplying basis state `p` of an `m`-qubit register by `e^{iθ}`.
pub fn phase_gates(m: usize, p: u64, angle: f64) -> Vec<Gate> {
    if m == 0 {
        return vec![Gate::GlobalPhase { angle }];
    }
    let reg = Register { offset: 0, width: m };
    let full = crate::bits::low_mask(m);
    if p == 0 {
        // flip the last qubit so the state has a 1 to act on
        let target = m - 1;
        let controls = reg.controls(&BitPattern::new(m, full & !1, 0));
        return vec![
            Gate::X { target },
            Gate::Phase { angle, target, controls },
            Gate::X { target },
        ];
    }
    let bit = p.trailing_zeros() as usize;
    let controls = reg.controls(&BitPattern::new(m, full & !(1 << bit), p));
    vec![Gate::Phase {
        angle,
        target: reg.qubit_of_bit(bit),
        controls,
    }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{circuit_unitary, simulate_zero};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn single_item_is_empty() {
        let d = DataVector::new(vec![1.0]).unwrap();
        assert!(synthesize_prep(&d, &SignVector::positive(1)).unwrap().is_empty());
        assert!(synthesize_unprep(&d).unwrap().is_empty());
    }

    #[test]
    fn two_items_with_minus() {
        let d = DataVector::new(vec![1.0, 1.0]).unwrap();
        let s = SignVector::new(vec![Phase::Plus, Phase::Minus]);
        let c = synthesize_prep(&d, &s).unwrap();
        assert_eq!(c.gates().len(), 2);
        assert!(matches!(c.gates()[0], Gate::Ry { angle, target: 0, .. } if (angle - FRAC_PI_2).abs() < 1e-15));
        assert!(matches!(&c.gates()[1], Gate::Phase { angle, target: 0, controls } if *angle == PI && controls.is_empty()));
        let r = 0.5f64.sqrt();
        assert!(close(&simulate_zero(&c), &[Complex64::new(r, 0.0), Complex64::new(-r, 0.0)], 1e-15));
        let u = synthesize_unprep(&d).unwrap();
        assert!(matches!(u.gates()[0], Gate::Ry { angle, .. } if (angle + FRAC_PI_2).abs() < 1e-15));
    }

    #[test]
    fn six_items_all_phases() {
        let d = DataVector::new(vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).unwrap();
        let s = SignVector::new(vec![
            Phase::Minus,
            Phase::PlusI,
            Phase::Plus,
            Phase::MinusI,
            Phase::Minus,
            Phase::PlusI,
        ]);
        let c = synthesize_prep(&d, &s).unwrap();
        assert!(close(&simulate_zero(&c), &prep_amplitudes(&d, &s), 1e-12));
        let unprep = synthesize_unprep(&d).unwrap();
        let v = simulate_zero(&unprep.inverse());
        let plain = prep_amplitudes(&d, &SignVector::positive(6));
        assert!(close(&v, &plain, 1e-12));
        let uu = circuit_unitary(&unprep).unwrap().mul(&circuit_unitary(&unprep.inverse()).unwrap());
        assert!(uu.max_abs_diff(&crate::sim::Unitary::identity(8)) < 1e-12);
    }

    #[test]
    fn real_positive_prep_is_unprep_adjoint() {
        let d = DataVector::new(vec![0.2, 0.9, 0.1]).unwrap();
        let prep = synthesize_prep(&d, &SignVector::positive(3)).unwrap();
        assert_eq!(prep.inverse(), synthesize_unprep(&d).unwrap());
    }

    #[test]
    fn zero_branches_elided() {
        // three items padded with one zero: the last right branch vanishes
        let d = DataVector::new(vec![1.0, 1.0, 1.0]).unwrap();
        let c = synthesize_prep(&d, &SignVector::positive(3)).unwrap();
        assert_eq!(c.gates().len(), 2);
    }

    #[test]
    fn global_phase_without_data_qubits() {
        let d = DataVector::new(vec![2.0]).unwrap();
        let c = synthesize_prep(&d, &SignVector::new(vec![Phase::Minus])).unwrap();
        assert_eq!(c.gates(), &[Gate::GlobalPhase { angle: PI }]);
        assert!(close(&simulate_zero(&c), &[Complex64::new(-1.0, 0.0)], 1e-15));
    }
}
