//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p blockenc-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use blockenc::gallery::{random_banded, random_sparse, random_structured32, random_tridiagonal};
use blockenc::oracle::shift_cascade;
use blockenc::pipeline::OpKind;
use blockenc::sim::simulate_zero;
use blockenc::{
    a_permute, a_permute_inverse, circuit_unitary, compile, compile_naive, delete_gates, hungarian, is_reducible,
    prep_amplitudes, reduce_composition, solve_assignment, stats, synthesize_prep, verify, BitPattern, Bijection,
    CompileConfig, Complex64, ControlSet, Direction, Entry, Gate, PermutationSpec, Register, RegisterLayout,
    SparseMatrix,
};
use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BLOCK_TOL: f64 = 1e-9;
const ETA_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-12;
const PREP_TOL: f64 = 1e-10;

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn regression_matrices() -> Vec<(String, SparseMatrix)> {
    let mut out = Vec::new();
    for seed in 0..5 {
        out.push((format!("tridiagonal seed {seed}"), random_tridiagonal(seed)));
    }
    out.push(("structured32 seed 0".into(), random_structured32(0)));
    for seed in 0..6 {
        out.push((format!("sparse n=3 seed {seed}"), random_sparse(3, 0.25, seed)));
        out.push((format!("banded n={} seed {seed}", 2 + seed % 3), random_banded(2 + (seed as usize % 3), seed)));
    }
    out.push((
        "identity 8".into(),
        SparseMatrix::new(8, (0..8).map(|i| Entry { row: i, col: i, value: Complex64::new(1.0, 0.0) })).unwrap(),
    ));
    out.push((
        "scaled identity 4".into(),
        SparseMatrix::new(4, (0..4).map(|i| Entry { row: i, col: i, value: Complex64::new(-0.3, 0.4) })).unwrap(),
    ));
    out
}

fn criterion_1() -> Outcome {
    let mut worst_err: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for seed in 0..100 {
        let a = random_tridiagonal(seed);
        let start = Instant::now();
        let enc = compile(&a, &CompileConfig::default()).map_err(|e| e.to_string())?;
        let report = verify(&a, &enc, BLOCK_TOL).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        check(enc.layout == RegisterLayout::block_encoding(3, 3), format!("seed {seed}: layout {:?}", enc.layout))?;
        let direct = block_error(&a, &enc.circuit, enc.alpha);
        worst_err = worst_err.max(direct).max(report.max_abs_error);
        check(report.pass && direct <= BLOCK_TOL, format!("seed {seed}: error {direct:.3e}"))?;
    }
    check(slowest < Duration::from_secs(1), format!("slowest instance {slowest:?}"))?;
    Ok(format!("100 instances, max error {worst_err:.2e}, slowest {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let a = random_structured32(2026);
    let enc = compile(&a, &CompileConfig::default()).map_err(|e| e.to_string())?;
    check(enc.layout.total() == 10 && enc.layout.data == 4 && enc.layout.matrix == 5, "layout is not 4+1+5")?;
    let plan = &enc.plan;
    let labels: Vec<Option<String>> = plan.items.iter().map(|i| i.shift.map(|s| s.label())).collect();
    let expected_shifts = [
        Some("L5 = L1 L4"),
        Some("L1 = L1"),
        None,
        None,
        Some("R1 = R1"),
        Some("R5 = R1 R4"),
        Some("L6 = L2 L4"),
        Some("L9 = L1 L8"),
        Some("L11 = L1 L2 L8"),
        Some("L14 = L2 L4 L8"),
        Some("L16 = L16"),
        Some("L19 = L1 L2 L16"),
        Some("L21 = L1 L4 L16"),
        Some("L24 = L8 L16"),
    ];
    let expected_shifts: Vec<Option<String>> = expected_shifts.iter().map(|s| s.map(String::from)).collect();
    check(labels == expected_shifts, format!("shift decompositions {labels:?}"))?;
    let range = |r: std::ops::Range<usize>| r.collect::<BTreeSet<usize>>();
    let expected_deletions: Vec<BTreeSet<usize>> = vec![
        range(0..10),
        BTreeSet::from([0, 5, 10, 15, 20, 25, 30, 31]),
        range(0..5),
        BTreeSet::new(),
        BTreeSet::from([4, 9, 14, 19, 24, 29, 30, 31]),
        range(0..5).into_iter().chain(27..32).collect(),
    ];
    for (p, rows) in expected_deletions.iter().enumerate() {
        check(&plan.items[p].deletions == rows, format!("a{p} deletions {:?}", plan.items[p].deletions))?;
    }
    for (p, row) in (6..14).zip([6, 10, 12, 16, 18, 22, 24, 28]) {
        check(
            plan.items[p].insertions == BTreeSet::from([row]),
            format!("a{p} insertions {:?}", plan.items[p].insertions),
        )?;
    }
    check(plan.strategy.as_ref().map(|s| s.chosen) == Some(2), "difference strategy not chosen")?;
    let groups: Vec<(String, Vec<usize>)> = plan.shift_groups().iter().map(|g| (g.label(), g.items.clone())).collect();
    let expected_groups: Vec<(String, Vec<usize>)> = [
        ("L1", vec![0, 1, 7, 8, 11, 12]),
        ("L2", vec![6, 8, 9, 11]),
        ("L4", vec![0, 6, 9, 12]),
        ("L8", vec![7, 8, 9, 13]),
        ("L16", vec![10, 11, 12, 13]),
        ("R1", vec![4, 5]),
        ("R4", vec![5]),
    ]
    .into_iter()
    .map(|(l, v)| (l.to_string(), v))
    .collect();
    check(groups == expected_groups, format!("shift groups {groups:?}"))?;
    let l1 = &enc.stages[0];
    check(l1.slots == vec![0, 1, 7, 8, 11, 12, 14, 15], format!("L1 slots {:?}", l1.slots))?;
    let start = Instant::now();
    let report = verify(&a, &enc, BLOCK_TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(report.pass, format!("block error {:.3e}", report.max_abs_error))?;
    check(elapsed < Duration::from_secs(10), format!("simulation took {elapsed:?}"))?;
    Ok(format!("item plan and shift groups reproduced, max error {:.2e}, 1024-dim simulation {elapsed:?}", report.max_abs_error))
}

fn criterion_3() -> Outcome {
    let mut reducible = 0usize;
    for p in 1..=4usize {
        let reg = Register { offset: 0, width: p };
        let layout = RegisterLayout::qubits(p + 1);
        for cube in all_cubes(p) {
            let cs = ControlSet::new(p, cube.iter().copied()).unwrap();
            check(is_reducible(&cs).unwrap().is_some(), format!("cube {:?} on {p} bits rejected", cube))?;
            let fused = reduce_composition(&cs, reg, p).unwrap();
            let individual: Vec<Gate> = blockenc::mcx::composition_gates(&cs, reg, p);
            let lhs = product_of_gates(layout, &[fused]);
            let rhs = product_of_gates(layout, &individual);
            check(lhs.max_abs_diff(&rhs) == 0.0 && lhs.is_permutation(), format!("cube {cube:?} differs"))?;
            reducible += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rejected = 0usize;
    while rejected < 1000 {
        let p = rng.random_range(2..=4usize);
        let n = rng.random_range(1..p);
        let mut all: Vec<u64> = (0..1u64 << p).collect();
        all.shuffle(&mut rng);
        let set: BTreeSet<u64> = all[..1 << n].iter().copied().collect();
        if all_cubes(p).contains(&set) {
            continue;
        }
        let cs = ControlSet::new(p, set.iter().copied()).unwrap();
        check(is_reducible(&cs).unwrap().is_none(), format!("irreducible {set:?} accepted"))?;
        rejected += 1;
    }
    Ok(format!("{reducible} reducible sets fused exactly, {rejected} irreducible sets rejected"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..1000 {
        let p = rng.random_range(1..=6usize);
        let size = rng.random_range(1..=6usize.min(1 << p));
        let mut pool: Vec<u64> = (0..1u64 << p).collect();
        pool.shuffle(&mut rng);
        let a: Vec<u64> = pool[..size].to_vec();
        pool.shuffle(&mut rng);
        let b: Vec<u64> = pool[..size].to_vec();
        let s2 = ControlSet::new(p, a.iter().copied()).unwrap();
        let s3 = ControlSet::new(p, b.iter().copied()).unwrap();
        let phi = solve_assignment(&s2, &s3).unwrap();
        let brute = brute_force_assignment(&a, &b);
        check(phi.cost() == brute, format!("trial {trial}: cost {} vs brute force {brute}", phi.cost()))?;
        let cost: Vec<Vec<i64>> = (0..size).map(|_| (0..size).map(|_| rng.random_range(0..10)).collect()).collect();
        let (_, h) = hungarian(&cost);
        check(h == brute_force_matrix(&cost), format!("trial {trial}: Hungarian {h} on {cost:?}"))?;
    }
    // deletion rows {0,1,4,7} onto {0,1,2,3}
    let s2 = ControlSet::new(3, [0, 1, 4, 7]).unwrap();
    let s3 = ControlSet::new(3, [0, 1, 2, 3]).unwrap();
    let phi = solve_assignment(&s2, &s3).unwrap();
    let expected = Bijection::new(3, vec![(0, 0), (1, 1), (4, 2), (7, 3)]).unwrap();
    check(phi == expected, format!("mapping {:?}", phi.to_strings()))?;
    check(phi.cost() == 3 && brute_force_assignment(&[0, 1, 4, 7], &[0, 1, 2, 3]) == 3, "cost is not 3")?;
    // L1 group of the structured matrix on the data register
    let reference_data = [(0b0001u64, 0b0010u64), (0b0111, 0b0110), (0b1011, 0b1010), (0b1111, 0b0100)];
    let s2 = ControlSet::new(4, [0, 1, 7, 8, 11, 12, 14, 15]).unwrap();
    let (_, s3) = blockenc::target_set_for(&s2, &blockenc::FixedIndexPolicy::RightEnded).unwrap();
    let ours = solve_assignment(&s2, &s3).unwrap();
    let reference: usize = reference_data.iter().map(|(a, b)| (a ^ b).count_ones() as usize).sum();
    check(ours.cost() == reference, format!("data mapping cost {} vs {reference}", ours.cost()))?;
    // a1 deletion rows on the matrix register
    let reference_rows = [(0u64, 0b11000u64), (5, 0b11101), (10, 0b11010), (15, 0b11011), (20, 0b11100)];
    let s2 = ControlSet::new(5, [0, 5, 10, 15, 20, 25, 30, 31]).unwrap();
    let (_, s3) = blockenc::target_set_for(&s2, &blockenc::FixedIndexPolicy::LeftEnded).unwrap();
    check(s3.iter().collect::<Vec<_>>() == (24..32).collect::<Vec<_>>(), "row target set is not 24..31")?;
    let ours_rows = solve_assignment(&s2, &s3).unwrap();
    let reference_r: usize = reference_rows.iter().map(|(a, b)| (a ^ b).count_ones() as usize).sum();
    check(ours_rows.cost() == reference_r, format!("row mapping cost {} vs {reference_r}", ours_rows.cost()))?;
    Ok(format!(
        "1000 random instances optimal, small mapping cost 3, data mapping cost {reference}, row mapping cost {reference_r}"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut detours = 0;
    for trial in 0..500 {
        let p = rng.random_range(1..=5usize);
        let size = rng.random_range(1..=1usize << p);
        let mut pool: Vec<u64> = (0..1u64 << p).collect();
        pool.shuffle(&mut rng);
        let sources = pool[..size].to_vec();
        pool.shuffle(&mut rng);
        let pairs: Vec<(u64, u64)> = sources.into_iter().zip(pool[..size].iter().copied()).collect();
        let phi = Bijection::new(p, pairs.clone()).unwrap();
        let spec = PermutationSpec {
            bijection: phi,
            register: Register { offset: 0, width: p },
            layout: RegisterLayout::qubits(p),
        };
        let (c, st) = blockenc::a_permute_with_stats(&spec).unwrap();
        detours += st.detours;
        let u = circuit_unitary(&c).unwrap();
        check(u.is_permutation(), format!("trial {trial}: not a permutation matrix"))?;
        for &(a, b) in &pairs {
            check(u.permutation_image(a as usize) == Some(b as usize), format!("trial {trial}: {a} not sent to {b}"))?;
        }
        let mut round = c.clone();
        round.append(&a_permute_inverse(&c)).unwrap();
        check(is_exact_identity(&circuit_unitary(&round).unwrap()), format!("trial {trial}: inverse mismatch"))?;
        check(a_permute(&spec).unwrap() == c, "nondeterministic permutation")?;
    }
    Ok(format!("500 bijections realized exactly ({detours} detours)"))
}

fn criterion_6() -> Outcome {
    let a = random_structured32(6);
    let enc = compile(&a, &CompileConfig::default()).map_err(|e| e.to_string())?;
    let l1 = enc
        .stages
        .iter()
        .find(|s| s.op.kind == OpKind::Shift { direction: Direction::Left, power: 0 })
        .ok_or("no L1 stage")?;
    check(l1.data_control_width == 1, format!("fused L1 data-control width {}", l1.data_control_width))?;
    let naive = compile_naive(&enc).map_err(|e| e.to_string())?;
    let dreg = enc.layout.data_register();
    let naive_l1_width = naive
        .gates()
        .iter()
        .filter(|g| g.is_mcx())
        .filter_map(|g| g.controls().map(|c| c.width_in(&dreg)))
        .max()
        .unwrap_or(0);
    check(naive_l1_width == 4, format!("naive data-control width {naive_l1_width}"))?;
    let report = stats(&enc).map_err(|e| e.to_string())?;
    check(
        report.fused.mcx < report.naive.mcx,
        format!("fused MCX {} not below naive {}", report.fused.mcx, report.naive.mcx),
    )?;
    let diff = circuit_unitary(&enc.circuit).unwrap().max_abs_diff(&circuit_unitary(&naive).unwrap());
    check(diff <= UNITARY_TOL, format!("fused and naive unitaries differ by {diff:.3e}"))?;
    Ok(format!(
        "L1 width 1 vs 4, MCX {} vs {}, unitary difference {diff:.1e}",
        report.fused.mcx, report.naive.mcx
    ))
}

fn criterion_7() -> Outcome {
    let config = CompileConfig {
        skip_oc: true,
        ..CompileConfig::default()
    };
    let mut count = 0;
    for (name, a) in regression_matrices() {
        let enc = compile(&a, &config).map_err(|e| format!("{name}: {e}"))?;
        let items = enc.plan.data.items();
        let eta: Complex64 = enc
            .plan
            .signs
            .phases()
            .iter()
            .zip(items)
            .map(|(ph, &x)| ph.value() * x)
            .sum::<Complex64>()
            / items.iter().sum::<f64>();
        let u = circuit_unitary(&enc.circuit).unwrap();
        let dim = a.dim();
        for r in 0..dim {
            for c in 0..dim {
                let expected = if r == c { eta } else { Complex64::new(0.0, 0.0) };
                let err = (u.get(r, c) - expected).norm();
                check(err <= ETA_TOL, format!("{name}: entry ({r},{c}) off by {err:.3e}"))?;
            }
        }
        count += 1;
    }
    Ok(format!("{count} regression matrices give the diagonal scalar block"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // left then right shift by the same amount
    for _ in 0..50 {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=4usize);
        let layout = RegisterLayout::block_encoding(m, n);
        let data = layout.data_register().controls(&BitPattern::exact(m, rng.random_range(0..1u64 << m)));
        let k = rng.random_range(0..n);
        let mut gates = shift_cascade(layout, &data, Direction::Left, k).unwrap();
        gates.extend(shift_cascade(layout, &data, Direction::Right, k).unwrap());
        check(is_exact_identity(&product_of_gates(layout, &gates)), "L then R is not the identity")?;
    }
    // cascade against index arithmetic
    for _ in 0..30 {
        let m = rng.random_range(0..=2usize);
        let n = rng.random_range(1..=4usize);
        let layout = RegisterLayout::block_encoding(m, n);
        let slot = rng.random_range(0..1u64 << m);
        let data = layout.data_register().controls(&BitPattern::exact(m, slot));
        let k = rng.random_range(0..n);
        let dir = if rng.random_bool(0.5) { Direction::Left } else { Direction::Right };
        let gates = shift_cascade(layout, &data, dir, k).unwrap();
        let delta = if dir == Direction::Left { 1i64 << k } else { -(1i64 << k) };
        check(
            product_of_gates(layout, &gates) == shift_oracle(layout, &BTreeSet::from([slot]), delta),
            "cascade differs from cyclic addition",
        )?;
    }
    // deletion twice
    for _ in 0..50 {
        let n = rng.random_range(1..=4usize);
        let layout = RegisterLayout::block_encoding(1, n);
        let rows: BTreeSet<usize> = (0..1usize << n).filter(|_| rng.random_bool(0.4)).collect();
        if rows.is_empty() {
            continue;
        }
        let d = delete_gates(layout, &BitPattern::exact(1, 1), &rows).unwrap();
        let mut twice = d.clone();
        twice.append(&d).unwrap();
        check(is_exact_identity(&circuit_unitary(&twice).unwrap()), "deletion is not an involution")?;
    }
    // state preparation amplitudes
    let mut worst_prep: f64 = 0.0;
    for (name, a) in regression_matrices() {
        let (data, signs) = blockenc::extract_data_vectors(&a).unwrap();
        let c = synthesize_prep(&data, &signs).unwrap();
        let got = simulate_zero(&c);
        let want = prep_amplitudes(&data, &signs);
        let alpha = data.alpha();
        for (p, (g, w)) in got.iter().zip(&want).enumerate() {
            let direct = if p < data.len() {
                signs.phases()[p].value() * (data.items()[p] / alpha).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            };
            let err = (g - w).norm().max((g - direct).norm());
            worst_prep = worst_prep.max(err);
            check(err <= PREP_TOL, format!("{name}: amplitude {p} off by {err:.3e}"))?;
        }
    }
    // unitarity of every emitted circuit
    let mut worst_unit: f64 = 0.0;
    let mut circuits = 0;
    for (name, a) in regression_matrices() {
        for config in [
            CompileConfig::default(),
            CompileConfig { skip_oc: true, ..CompileConfig::default() },
            CompileConfig { defer_restore: true, ..CompileConfig::default() },
        ] {
            let enc = compile(&a, &config).unwrap();
            let res = unitarity(&enc.circuit);
            worst_unit = worst_unit.max(res);
            check(res <= UNITARY_TOL, format!("{name}: unitarity residual {res:.3e}"))?;
            let res_naive = unitarity(&compile_naive(&enc).unwrap());
            check(res_naive <= UNITARY_TOL, format!("{name}: naive unitarity residual {res_naive:.3e}"))?;
            circuits += 2;
        }
    }
    Ok(format!(
        "shift/delete involutions exact, PREP error {worst_prep:.1e}, {circuits} circuits unitary to {worst_unit:.1e}"
    ))
}

fn main() -> std::process::ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("complex tridiagonal reproduction", criterion_1),
        ("structured 32x32 reproduction", criterion_2),
        ("MCX fusion round trip", criterion_3),
        ("assignment optimality", criterion_4),
        ("coherent permutation contract", criterion_5),
        ("fusion benefit", criterion_6),
        ("diagonal scalar without index mapping", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
