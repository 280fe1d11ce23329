//! Non-restoring integer square root as a single reversible circuit.
//!
//! Register layout on `2n + 1` qubits: `R = 0..n` holds the radicand and ends
//! up holding the remainder, `F = n..2n` starts at 1 and ends up holding the
//! root, and `z = 2n` is the sign/control ancilla (starts and ends at 0).
//!
//! Before post-processing the root sits in `F[2..=n/2+1]`; the pipeline flips
//! `F[0]` back to 0 and shifts `F` down by two so the whole register reads as
//! the root.

use std::sync::Arc;

use crate::arithmetic::{build_ctrl_add_sub, build_ctrl_adder};
use crate::circuit::{Circuit, QubitId};
use crate::error::{Error, Result};
use crate::sim::{perm_run, BasisState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqrtLayout {
    n: usize,
}

impl SqrtLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidWidth {
                width: n,
                reason: "square-root width must be even and at least 4",
            });
        }
        Ok(SqrtLayout { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        2 * self.n + 1
    }

    pub fn r(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    pub fn f(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        self.n + i
    }

    pub fn z(&self) -> usize {
        2 * self.n
    }

    pub fn r_register(&self) -> Vec<QubitId> {
        (0..self.n).map(|i| QubitId(self.r(i))).collect()
    }

    pub fn f_register(&self) -> Vec<QubitId> {
        (0..self.n).map(|i| QubitId(self.f(i))).collect()
    }

    /// Largest radicand the layout accepts: `2^(n-1) - 1`.
    pub fn max_input(&self) -> u64 {
        if self.n > 64 {
            u64::MAX
        } else {
            (1u128 << (self.n - 1)) as u64 - 1
        }
    }

    /// Initial basis state `R = a`, `F = 1`, `z = 0`.
    pub fn initial_state(&self, a: u64) -> BasisState {
        let mut s = BasisState::zeros(self.width());
        s.write(&self.r_register(), a);
        s.set(self.f(0), true);
        s
    }

    fn identity_mapping(&self) -> Vec<usize> {
        (0..self.width()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqrtResult {
    pub root: u64,
    pub remainder: u64,
}

/// Smallest even `n >= 4` with `a <= 2^(n-1) - 1`.
pub fn select_width(a: u64) -> usize {
    let mut n = 4;
    while (a as u128) > (1u128 << (n - 1)) - 1 {
        n += 2;
    }
    n
}

/// Initial subtraction on the two most significant bits.
pub fn build_part1(n: usize) -> Result<Circuit> {
    let l = SqrtLayout::new(n)?;
    let (r, f, z) = (|i| l.r(i), |i| l.f(i), l.z());
    let mut c = Circuit::new(l.width(), "PART 1")?;
    c.x(r(n - 2))?;
    c.cx(r(n - 2), r(n - 1))?;
    c.cx(r(n - 1), f(1))?;
    c.zcx(r(n - 1), z)?;
    c.zcx(r(n - 1), f(2))?;
    let mapping: Vec<usize> = std::iter::once(z)
        .chain((n - 4..n).map(r))
        .chain((0..4).map(f))
        .collect();
    c.append_circuit(build_ctrl_add_sub(4)?, &mapping)?;
    Ok(c)
}

/// Conditional add/subtract, one round per remaining bit pair (`i = 2..n/2`).
pub fn build_part2(n: usize) -> Result<Circuit> {
    let l = SqrtLayout::new(n)?;
    let (r, f, z) = (|i| l.r(i), |i| l.f(i), l.z());
    let mut c = Circuit::new(l.width(), "PART 2")?;
    for i in 2..n / 2 {
        c.zcx(z, f(1))?;
        c.cx(f(2), z)?;
        c.cx(r(n - 1), f(1))?;
        c.zcx(r(n - 1), z)?;
        c.zcx(r(n - 1), f(i + 1))?;
        for j in (3..=i + 1).rev() {
            c.swap(f(j), f(j - 1))?;
        }
        let m = 2 * i + 2;
        let mapping: Vec<usize> = std::iter::once(z)
            .chain((n - m..n).map(r))
            .chain((0..m).map(f))
            .collect();
        c.append_circuit(build_ctrl_add_sub(m)?, &mapping)?;
    }
    Ok(c)
}

/// Remainder restoration: add `F` back into `R` if the last step went negative.
pub fn build_part3(n: usize) -> Result<Circuit> {
    let l = SqrtLayout::new(n)?;
    let (r, f, z) = (|i| l.r(i), |i| l.f(i), l.z());
    let mut c = Circuit::new(l.width(), "PART 3")?;
    c.zcx(z, f(1))?;
    c.cx(f(2), z)?;
    c.zcx(r(n - 1), z)?;
    c.zcx(r(n - 1), f(n / 2 + 1))?;
    c.x(z)?;
    let mapping: Vec<usize> = std::iter::once(z)
        .chain((0..n).map(r))
        .chain((0..n).map(f))
        .collect();
    c.append_circuit(build_ctrl_adder(n)?, &mapping)?;
    c.x(z)?;
    for j in (3..=n / 2 + 1).rev() {
        c.swap(f(j), f(j - 1))?;
    }
    c.cx(f(2), z)?;
    Ok(c)
}

/// `PART 1`, `PART 2`, `PART 3` as composites on the shared `[R, F, z]` layout.
pub fn build_isqrt_circuit(n: usize) -> Result<Circuit> {
    let l = SqrtLayout::new(n)?;
    let mapping = l.identity_mapping();
    let mut c = Circuit::new(l.width(), "ISQRT")?;
    c.append_circuit(build_part1(n)?, &mapping)?;
    c.append_circuit(build_part2(n)?, &mapping)?;
    c.append_circuit(build_part3(n)?, &mapping)?;
    Ok(c)
}

/// `ISQRT` followed by the readout fix-up: `X(F[0])`, then
/// `SWAP(F[i], F[i-2])` for `i = 2 ..= n/2 + 1` in ascending order.
pub fn build_isqrt_pipeline(n: usize) -> Result<Circuit> {
    let l = SqrtLayout::new(n)?;
    let mut c = Circuit::new(l.width(), "ISQRT PIPELINE")?;
    c.append_circuit(build_isqrt_circuit(n)?, &l.identity_mapping())?;
    c.x(l.f(0))?;
    for i in 2..n / 2 + 2 {
        c.swap(l.f(i), l.f(i - 2))?;
    }
    Ok(c)
}

/// Output of one pipeline run on a basis input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtRun {
    pub result: SqrtResult,
    /// Value of `z` after the pipeline; 0 for a clean run.
    pub ancilla: bool,
    pub output: BasisState,
}

/// A built pipeline, reusable across many inputs.
#[derive(Debug, Clone)]
pub struct IsqrtPipeline {
    layout: SqrtLayout,
    circuit: Arc<Circuit>,
}

impl IsqrtPipeline {
    pub fn new(n: usize) -> Result<Self> {
        Ok(IsqrtPipeline {
            layout: SqrtLayout::new(n)?,
            circuit: Arc::new(build_isqrt_pipeline(n)?),
        })
    }

    pub fn layout(&self) -> SqrtLayout {
        self.layout
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn decode(&self, output: &BasisState) -> SqrtResult {
        SqrtResult {
            root: output.read(&self.layout.f_register()),
            remainder: output.read(&self.layout.r_register()),
        }
    }

    /// Runs the permutation simulator on `R = a, F = 1, z = 0`.
    pub fn run(&self, a: u64) -> Result<SqrtRun> {
        let max = self.layout.max_input();
        if a > max {
            return Err(Error::InputRange {
                value: a,
                min: 0,
                max,
            });
        }
        let output = perm_run(&self.circuit, &self.layout.initial_state(a))?;
        Ok(SqrtRun {
            result: self.decode(&output),
            ancilla: output.get(self.layout.z()),
            output,
        })
    }
}

/// Integer square root and remainder of `a` computed by simulating the circuit.
/// `a` must lie in `[0, 2^(n-1) - 1]`; the circuit is only claimed correct for `a >= 1`.
pub fn isqrt(a: u64, n: usize) -> Result<SqrtResult> {
    Ok(IsqrtPipeline::new(n)?.run(a)?.result)
}
