//! Named circuit families with their resource formulas and integer oracles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::expected_t_count_isqrt;
use crate::arithmetic::{build_adder, build_ctrl_add_sub, build_ctrl_adder, build_subtractor};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::lowering::lower_to_clifford_t;
use crate::sim::{perm_run, sv_run_with_cap, BasisState, Statevector, AMPLITUDE_TOLERANCE};
use crate::sqrt::{build_isqrt_circuit, IsqrtPipeline, SqrtLayout};

/// Cap on the number of cases an exhaustive sweep may enumerate.
pub const EXHAUSTIVE_CASE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Adder,
    Subtractor,
    CtrlAddSub,
    CtrlAdd,
    Isqrt,
}

impl Block {
    pub const ALL: [Block; 5] = [
        Block::Adder,
        Block::Subtractor,
        Block::CtrlAddSub,
        Block::CtrlAdd,
        Block::Isqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Block::Adder => "adder",
            Block::Subtractor => "subtractor",
            Block::CtrlAddSub => "ctrl-add-sub",
            Block::CtrlAdd => "ctrl-add",
            Block::Isqrt => "isqrt",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Block::Adder | Block::Subtractor | Block::CtrlAddSub => 1,
            Block::CtrlAdd => 2,
            Block::Isqrt => 4,
        }
    }

    pub fn requires_even(self) -> bool {
        self == Block::Isqrt
    }

    pub fn check_n(self, n: usize) -> Result<()> {
        if n < self.min_n() {
            return Err(Error::InvalidWidth {
                width: n,
                reason: "below the minimum register width for this circuit",
            });
        }
        if self.requires_even() && !n.is_multiple_of(2) {
            return Err(Error::InvalidWidth {
                width: n,
                reason: "square-root width must be even",
            });
        }
        Ok(())
    }

    pub fn build(self, n: usize) -> Result<Circuit> {
        self.check_n(n)?;
        match self {
            Block::Adder => build_adder(n),
            Block::Subtractor => build_subtractor(n),
            Block::CtrlAddSub => build_ctrl_add_sub(n),
            Block::CtrlAdd => build_ctrl_adder(n),
            Block::Isqrt => build_isqrt_circuit(n),
        }
    }

    pub fn expected_width(self, n: usize) -> usize {
        match self {
            Block::Adder | Block::Subtractor => 2 * n,
            _ => 2 * n + 1,
        }
    }

    pub fn expected_t_count(self, n: usize) -> Result<usize> {
        self.check_n(n)?;
        Ok(match self {
            Block::Adder | Block::Subtractor | Block::CtrlAddSub => 14 * n - 14,
            Block::CtrlAdd => 21 * n - 14,
            Block::Isqrt => expected_t_count_isqrt(n)?,
        })
    }

    /// Number of oracle cases in an exhaustive sweep at width `n`.
    pub fn case_count(self, n: usize) -> u64 {
        let bits = match self {
            Block::Adder | Block::Subtractor => 2 * n,
            Block::CtrlAddSub | Block::CtrlAdd => 2 * n + 1,
            Block::Isqrt => return (1u64 << (n - 1).min(63)) - 1,
        };
        if bits >= 64 {
            u64::MAX
        } else {
            1u64 << bits
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Block {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Block::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Block::ALL.iter().map(|b| b.name()).collect();
                format!(
                    "unknown circuit `{s}` (expected one of: {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Permutation,
    /// Lowered circuit on the statevector simulator, limited to `cap` qubits.
    Statevector {
        cap: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Input value: the packed register word for arithmetic blocks, `a` for isqrt.
    pub input: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub block: Block,
    pub n: usize,
    pub checked: usize,
    pub passed: usize,
    pub first_failure: Option<Failure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none() && self.checked == self.passed
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Expected packed output for an arithmetic block, from plain integer arithmetic.
fn arithmetic_oracle(block: Block, n: usize, input: u64) -> u64 {
    let m = mask(n);
    match block {
        Block::Adder | Block::Subtractor => {
            let (a, b) = (input & m, input >> n & m);
            let out = if block == Block::Adder {
                a.wrapping_add(b)
            } else {
                a.wrapping_sub(b)
            };
            out & m | b << n
        }
        Block::CtrlAddSub | Block::CtrlAdd => {
            let z = input & 1;
            let (a, b) = (input >> 1 & m, input >> (n + 1) & m);
            let out = match (block, z) {
                (Block::CtrlAddSub, 0) | (Block::CtrlAdd, 1) => a.wrapping_add(b),
                (Block::CtrlAddSub, _) => a.wrapping_sub(b),
                _ => a,
            };
            z | (out & m) << 1 | b << (n + 1)
        }
        Block::Isqrt => unreachable!(),
    }
}

fn integer_sqrt(a: u64) -> u64 {
    let mut r = (a as f64).sqrt() as u64;
    while r * r > a {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= a {
        r += 1;
    }
    r
}

enum Runner {
    Perm(Circuit),
    Sv(Circuit, usize),
}

impl Runner {
    fn new(circuit: &Circuit, backend: Backend) -> Result<Runner> {
        Ok(match backend {
            Backend::Permutation => Runner::Perm(circuit.clone()),
            Backend::Statevector { cap } => {
                if circuit.width() > cap {
                    return Err(Error::Capacity {
                        width: circuit.width(),
                        cap,
                    });
                }
                Runner::Sv(lower_to_clifford_t(circuit)?, cap)
            }
        })
    }

    fn run(&self, input: &BasisState) -> std::result::Result<BasisState, String> {
        match self {
            Runner::Perm(c) => perm_run(c, input).map_err(|e| e.to_string()),
            Runner::Sv(c, cap) => {
                let w = c.width();
                let out = sv_run_with_cap(c, &Statevector::basis(w, input.to_u64()), *cap)
                    .map_err(|e| e.to_string())?;
                match out.as_basis(AMPLITUDE_TOLERANCE) {
                    Some((idx, _)) => Ok(BasisState::from_u64(w, idx)),
                    None => Err("output is not a single basis state".into()),
                }
            }
        }
    }
}

fn sweep_inputs(block: Block, n: usize, mode: SweepMode) -> Result<Vec<u64>> {
    let total = block.case_count(n);
    let first = if block == Block::Isqrt { 1 } else { 0 };
    match mode {
        SweepMode::Exhaustive => {
            if total > EXHAUSTIVE_CASE_LIMIT {
                return Err(Error::EnumerationLimit {
                    width: block.expected_width(n),
                    limit: EXHAUSTIVE_CASE_LIMIT as usize,
                });
            }
            Ok((first..first + total).collect())
        }
        SweepMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..samples)
                .map(|_| first + rng.gen_range(0..total.max(1)))
                .collect())
        }
    }
}

/// Checks `block` at width `n` against its integer oracle. Cases run in
/// parallel; the reported failure is the first in input order.
pub fn verify_block(
    block: Block,
    n: usize,
    mode: SweepMode,
    backend: Backend,
) -> Result<VerifyReport> {
    block.check_n(n)?;
    let cases = sweep_inputs(block, n, mode)?;

    let outcomes: Vec<Option<Failure>> = if block == Block::Isqrt {
        let pipeline = IsqrtPipeline::new(n)?;
        let layout = pipeline.layout();
        let runner = Runner::new(pipeline.circuit(), backend)?;
        cases
            .par_iter()
            .map(|&a| check_isqrt(&pipeline, &layout, &runner, a))
            .collect()
    } else {
        let circuit = block.build(n)?;
        let width = circuit.width();
        let runner = Runner::new(&circuit, backend)?;
        cases
            .par_iter()
            .map(|&input| {
                let expected = arithmetic_oracle(block, n, input);
                match runner.run(&BasisState::from_u64(width, input)) {
                    Ok(out) if out.to_u64() == expected => None,
                    Ok(out) => Some(Failure {
                        input,
                        message: format!("expected {expected:#x}, got {:#x}", out.to_u64()),
                    }),
                    Err(message) => Some(Failure { input, message }),
                }
            })
            .collect()
    };

    let checked = outcomes.len();
    let passed = outcomes.iter().filter(|o| o.is_none()).count();
    Ok(VerifyReport {
        block,
        n,
        checked,
        passed,
        first_failure: outcomes.into_iter().flatten().next(),
    })
}

fn check_isqrt(
    pipeline: &IsqrtPipeline,
    layout: &SqrtLayout,
    runner: &Runner,
    a: u64,
) -> Option<Failure> {
    let out = match runner.run(&layout.initial_state(a)) {
        Ok(out) => out,
        Err(message) => return Some(Failure { input: a, message }),
    };
    let got = pipeline.decode(&out);
    let root = integer_sqrt(a);
    let remainder = a - root * root;
    if got.root != root || got.remainder != remainder {
        return Some(Failure {
            input: a,
            message: format!(
                "expected root {root} remainder {remainder}, got root {} remainder {}",
                got.root, got.remainder
            ),
        });
    }
    if out.get(layout.z()) {
        return Some(Failure {
            input: a,
            message: "ancilla z not restored to 0".into(),
        });
    }
    None
}
