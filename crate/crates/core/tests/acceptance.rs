//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qsqrt_core::analysis::{layer_groups, resource_report, schedule_layers, t_count, t_depth};
use qsqrt_core::arithmetic::{build_adder, build_ctrl_add_sub, build_ctrl_adder, build_subtractor};
use qsqrt_core::lowering::{lower_swap, lower_to_clifford_t, lower_toffoli, lower_zcx};
use qsqrt_core::sim::{perm_run, sv_run, BasisState, Statevector};
use qsqrt_core::sqrt::{build_isqrt_circuit, IsqrtPipeline, SqrtLayout};
use qsqrt_core::{Circuit, Gate, QubitId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn isqrt_floor(a: u64) -> u64 {
    let mut r = 0;
    while (r + 1) * (r + 1) <= a {
        r += 1;
    }
    r
}

fn random_state(width: usize, rng: &mut impl Rng) -> Statevector {
    let amps: Vec<Complex64> = (0..1usize << width)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Statevector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let expected = [
        (6, 13, 224),
        (8, 17, 364),
        (10, 21, 532),
        (12, 25, 728),
        (14, 29, 952),
        (16, 33, 1204),
    ];
    for (n, qubits, tc) in expected {
        let c = build_isqrt_circuit(n).map_err(fail)?;
        let got = t_count(&c).map_err(fail)?;
        ensure!(
            c.width() == qubits,
            "n={n}: {} qubits, expected {qubits}",
            c.width()
        );
        ensure!(got == tc, "n={n}: T-count {got}, expected {tc}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("6 widths exact in {:.2?}", elapsed))
}

fn component_formulas() -> Outcome {
    for n in 2..=10 {
        let adder = t_count(&build_adder(n).map_err(fail)?).map_err(fail)?;
        let sub = t_count(&build_subtractor(n).map_err(fail)?).map_err(fail)?;
        let ctrl = t_count(&build_ctrl_adder(n).map_err(fail)?).map_err(fail)?;
        ensure!(adder == 14 * n - 14, "adder n={n}: {adder}");
        ensure!(sub == 14 * n - 14, "subtractor n={n}: {sub}");
        ensure!(ctrl == 21 * n - 14, "ctrl-adder n={n}: {ctrl}");
    }
    Ok("adder, subtractor, ctrl-adder for n = 2..10".into())
}

fn functional_sweep() -> Outcome {
    let mut lines = Vec::new();
    for (n, top) in [(6usize, 31u64), (8, 127)] {
        let pipeline = IsqrtPipeline::new(n).map_err(fail)?;
        for a in 1..=top {
            let r = pipeline.run(a).map_err(fail)?.result;
            let root = isqrt_floor(a);
            ensure!(
                r.root == root && r.remainder == a - root * root,
                "n={n} a={a}: got ({}, {})",
                r.root,
                r.remainder
            );
            if n == 6 && [9, 15, 16].contains(&a) {
                lines.push(format!("{a} -> ({}, {})", r.root, r.remainder));
            }
        }
    }
    let anchors = lines.join(", ");
    ensure!(
        anchors == "9 -> (3, 0), 15 -> (3, 6), 16 -> (4, 0)",
        "anchors {anchors}"
    );
    Ok(format!("158 inputs; {anchors}"))
}

fn arithmetic_oracles() -> Outcome {
    let mut cases = 0;
    for n in 1..=4usize {
        let m = (1u64 << n) - 1;
        let add = build_adder(n).map_err(fail)?;
        let sub = build_subtractor(n).map_err(fail)?;
        for a in 0..=m {
            for b in 0..=m {
                let input = BasisState::from_u64(2 * n, a | b << n);
                let s = perm_run(&add, &input).map_err(fail)?.to_u64();
                let d = perm_run(&sub, &input).map_err(fail)?.to_u64();
                ensure!(s == (a + b) & m | b << n, "adder n={n} a={a} b={b}: {s:#x}");
                ensure!(
                    d == (a + (1 << n) - b) & m | b << n,
                    "subtractor n={n} a={a} b={b}: {d:#x}"
                );
                cases += 2;
            }
        }
        let ctrl_as = build_ctrl_add_sub(n).map_err(fail)?;
        let ctrl_add = if n >= 2 {
            Some(build_ctrl_adder(n).map_err(fail)?)
        } else {
            None
        };
        for z in 0..2u64 {
            for a in 0..=m {
                for b in 0..=m {
                    let packed = z | a << 1 | b << (n + 1);
                    let input = BasisState::from_u64(2 * n + 1, packed);
                    let out = perm_run(&ctrl_as, &input).map_err(fail)?.to_u64();
                    let want = if z == 0 {
                        (a + b) & m
                    } else {
                        (a + (1 << n) - b) & m
                    };
                    ensure!(
                        out == z | want << 1 | b << (n + 1),
                        "ctrl-add/sub n={n} z={z} a={a} b={b}: {out:#x}"
                    );
                    cases += 1;
                    if let Some(c) = &ctrl_add {
                        let out = perm_run(c, &input).map_err(fail)?.to_u64();
                        let want = if z == 1 { (a + b) & m } else { a };
                        ensure!(
                            out == z | want << 1 | b << (n + 1),
                            "ctrl-add n={n} z={z} a={a} b={b}: {out:#x}"
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{cases} cases over n = 1..4, B and control preserved"
    ))
}

type Matrix = Vec<Vec<Complex64>>;

fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new((i == j) as u8 as f64, 0.0))
                .collect()
        })
        .collect()
}

/// Dense matrix of a primitive gate on `width` qubits, qubit i = bit i of the index.
fn gate_matrix(g: &Gate, width: usize) -> Matrix {
    let dim = 1 << width;
    let bit = |x: usize, q: &QubitId| x >> q.0 & 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        match g {
            Gate::X(q) => m[col ^ 1 << q.0][col] = Complex64::new(1.0, 0.0),
            Gate::Cx(c, t) => m[col ^ bit(col, c) << t.0][col] = Complex64::new(1.0, 0.0),
            Gate::T(q) | Gate::Tdg(q) => {
                let sign = if matches!(g, Gate::T(_)) { 1.0 } else { -1.0 };
                m[col][col] = if bit(col, q) == 1 {
                    Complex64::from_polar(1.0, sign * std::f64::consts::FRAC_PI_4)
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
            Gate::H(q) => {
                let flipped = col ^ 1 << q.0;
                m[col][col] = Complex64::new(if bit(col, q) == 1 { -s } else { s }, 0.0);
                m[flipped][col] = Complex64::new(s, 0.0);
            }
            other => panic!("not a lowered primitive: {other:?}"),
        }
    }
    m
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn decomposition_equivalence() -> Outcome {
    let (a, b, c) = (QubitId(0), QubitId(1), QubitId(2));
    let low = lower_toffoli(&Gate::Ccx(a, b, c)).map_err(fail)?;
    let mut u = identity(8);
    for g in low.gates() {
        u = matmul(&gate_matrix(g, 3), &u);
    }
    let mut worst = 0.0f64;
    for col in 0..8usize {
        let target = if col & 3 == 3 { col ^ 4 } else { col };
        for (row, entry) in u.iter().enumerate() {
            let want = Complex64::new((row == target) as u8 as f64, 0.0);
            worst = worst.max((entry[col] - want).norm());
        }
    }
    ensure!(worst <= 1e-12, "CCX unitary deviates by {worst:e}");
    let tc = t_count(&low).map_err(fail)?;
    ensure!(tc == 7, "lowered CCX T-count {tc}");

    let swap = lower_swap(&Gate::Swap(a, b)).map_err(fail)?;
    let zcx = lower_zcx(&Gate::Zcx(a, b)).map_err(fail)?;
    for x in 0..4u64 {
        let (x0, x1) = (x & 1, x >> 1);
        let s = perm_run(&swap, &BasisState::from_u64(2, x))
            .map_err(fail)?
            .to_u64();
        ensure!(s == x1 | x0 << 1, "SWAP on {x}: {s}");
        let z = perm_run(&zcx, &BasisState::from_u64(2, x))
            .map_err(fail)?
            .to_u64();
        ensure!(z == x0 | (x1 ^ (1 - x0)) << 1, "ZCX on {x}: {z}");
    }
    Ok(format!(
        "CCX max deviation {worst:.1e}, T-count 7; SWAP and ZCX on all 4 inputs"
    ))
}

fn cross_backend() -> Outcome {
    let n = 6;
    let layout = SqrtLayout::new(n).map_err(fail)?;
    let logical = build_isqrt_circuit(n).map_err(fail)?;
    let lowered = lower_to_clifford_t(&logical).map_err(fail)?;
    let mut inputs: Vec<u64> = (1..=layout.max_input()).collect();
    inputs.shuffle(&mut ChaCha8Rng::seed_from_u64(6));
    inputs.truncate(20);
    let mut weakest = 1.0f64;
    for &a in &inputs {
        let start = layout.initial_state(a);
        let want = perm_run(&logical, &start).map_err(fail)?.to_u64();
        let out = sv_run(&lowered, &Statevector::basis(13, start.to_u64())).map_err(fail)?;
        let (idx, amp) = out
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .map(|(i, amp)| (i as u64, *amp))
            .unwrap();
        weakest = weakest.min(amp.norm());
        ensure!(amp.norm() >= 1.0 - 1e-9, "a={a}: |amp| = {}", amp.norm());
        ensure!(
            idx == want,
            "a={a}: statevector {idx:#x}, permutation {want:#x}"
        );
    }
    Ok(format!("20 inputs on 13 qubits, min |amp| = {weakest:.12}"))
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let circuits = [
        build_adder(3).map_err(fail)?,
        build_ctrl_adder(3).map_err(fail)?,
        build_isqrt_circuit(4).map_err(fail)?,
        build_isqrt_circuit(6).map_err(fail)?,
    ];
    for c in &circuits {
        let mut round = lower_to_clifford_t(c).map_err(fail)?;
        round
            .extend_from(&lower_to_clifford_t(&c.inverse()).map_err(fail)?)
            .map_err(fail)?;
        for _ in 0..3 {
            let input = random_state(c.width(), &mut rng);
            let d = sv_run(&round, &input).map_err(fail)?.max_distance(&input);
            ensure!(d < 1e-9, "{} + inverse deviates by {d:e}", c.name());
        }
    }

    let mut swept = 0;
    for n in [6, 8, 10] {
        let pipeline = IsqrtPipeline::new(n).map_err(fail)?;
        for a in 1..=pipeline.layout().max_input() {
            ensure!(
                !pipeline.run(a).map_err(fail)?.ancilla,
                "n={n} a={a}: z left at 1"
            );
            swept += 1;
        }
    }

    let lowered = lower_to_clifford_t(&build_isqrt_circuit(6).map_err(fail)?).map_err(fail)?;
    let groups = layer_groups(&lowered).map_err(fail)?;
    for group in &groups {
        let mut used = vec![false; lowered.width()];
        for &idx in group {
            for q in lowered.gates()[idx].operands() {
                ensure!(!used[q.0], "qubit {} used twice in one layer", q.0);
                used[q.0] = true;
            }
        }
    }
    // Replay layer by layer, reversing the order inside each layer.
    let layers = schedule_layers(&lowered).map_err(fail)?;
    let mut order: Vec<usize> = (0..lowered.len()).collect();
    order.sort_by_key(|&i| (layers[i], std::cmp::Reverse(i)));
    let replay = Circuit::from_gates_unchecked(
        lowered.width(),
        "replay",
        order.iter().map(|&i| lowered.gates()[i].clone()).collect(),
    );
    for _ in 0..100 {
        let input = random_state(lowered.width(), &mut rng);
        let seq = sv_run(&lowered, &input).map_err(fail)?;
        let lay = sv_run(&replay, &input).map_err(fail)?;
        let d = seq.max_distance(&lay);
        ensure!(d < 1e-9, "layered replay deviates by {d:e}");
    }
    Ok(format!(
        "inverse on 4 circuits, z clean on {swept} inputs, {} layers replayed on 100 states",
        groups.len()
    ))
}

/// Scheduled T-depth of ISQRT(n), measured once and pinned.
const T_DEPTH_BASELINE: [(usize, usize); 6] = [
    (6, 179),
    (8, 290),
    (10, 423),
    (12, 578),
    (14, 755),
    (16, 954),
];

fn t_depth_baseline() -> Outcome {
    let mut report = Vec::new();
    for (n, pinned) in T_DEPTH_BASELINE {
        let r = resource_report(&build_isqrt_circuit(n).map_err(fail)?).map_err(fail)?;
        ensure!(
            r.t_depth == pinned,
            "n={n}: scheduled T-depth {} drifted from {pinned}",
            r.t_depth
        );
        report.push(format!("n={n}:{} (5n+3={})", r.t_depth, 5 * n + 3));
    }
    let d = t_depth(&build_isqrt_circuit(6).map_err(fail)?).map_err(fail)?;
    ensure!(d == 179, "t_depth and resource_report disagree");
    let zero = IsqrtPipeline::new(6).map_err(fail)?.run(0).map_err(fail)?;
    Ok(format!(
        "{}; a=0 gives root {} remainder {} z {} (not asserted)",
        report.join(" "),
        zero.result.root,
        zero.result.remainder,
        zero.ancilla as u8
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("ISQRT qubits and T-count table", table_reproduction),
        ("component T-count formulas", component_formulas),
        ("isqrt functional sweep", functional_sweep),
        ("arithmetic exhaustive oracles", arithmetic_oracles),
        ("decomposition equivalence", decomposition_equivalence),
        ("cross-backend equivalence", cross_backend),
        ("property suite", property_suite),
        ("scheduled T-depth baseline", t_depth_baseline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{secs:.2}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{secs:.2}s] {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
