//! Ancilla-free reversible adders and their controlled variants.
//!
//! Qubit conventions (index 0 of every register is its LSB):
//!
//! | circuit        | width  | layout                          |
//! |----------------|--------|---------------------------------|
//! | `ADD`, `SUB`   | `2n`   | `A = 0..n`, `B = n..2n`         |
//! | `CTRL ADD/SUB` | `2n+1` | `z = 0`, `A = 1..=n`, `B = n+1..` |
//! | `CTRL ADD`     | `2n+1` | `z = 0`, `A = 1..=n`, `B = n+1..` |
//!
//! All sums are taken mod `2^n`; there is no carry-out qubit. `B` (and `z`)
//! are always returned unchanged.

use crate::circuit::{Circuit, QubitId};
use crate::error::{Error, Result};

/// Operand registers of a two-register (optionally controlled) arithmetic block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub a: Vec<QubitId>,
    pub b: Vec<QubitId>,
    pub z: Option<QubitId>,
}

impl RegisterLayout {
    /// `A = 0..n`, `B = n..2n`.
    pub fn uncontrolled(n: usize) -> Self {
        RegisterLayout {
            a: (0..n).map(QubitId).collect(),
            b: (n..2 * n).map(QubitId).collect(),
            z: None,
        }
    }

    /// `z = 0`, `A = 1..=n`, `B = n+1..=2n`.
    pub fn controlled(n: usize) -> Self {
        RegisterLayout {
            a: (1..=n).map(QubitId).collect(),
            b: (n + 1..=2 * n).map(QubitId).collect(),
            z: Some(QubitId(0)),
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn width(&self) -> usize {
        self.a.len() + self.b.len() + usize::from(self.z.is_some())
    }

    fn a(&self, i: usize) -> usize {
        self.a[i].0
    }

    fn b(&self, i: usize) -> usize {
        self.b[i].0
    }

    fn z(&self) -> usize {
        self.z.expect("controlled layout").0
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidWidth {
            width: n,
            reason: if min == 1 {
                "register width must be at least 1"
            } else {
                "register width must be at least 2"
            },
        });
    }
    Ok(())
}

/// `(a, b, c) -> (a, a^b, ab^c)`: a Toffoli followed by a CNOT.
pub fn peres_gate() -> Circuit {
    let mut c = Circuit::new(3, "PERES").expect("width 3");
    c.ccx(0, 1, 2).expect("in range");
    c.cx(0, 1).expect("in range");
    c
}

/// In-place ripple-carry adder, `A <- (A + B) mod 2^n`.
pub fn build_adder(n: usize) -> Result<Circuit> {
    check_n(n, 1)?;
    let l = RegisterLayout::uncontrolled(n);
    let mut c = Circuit::new(l.width(), "ADD")?;
    let peres = std::sync::Arc::new(peres_gate());

    for i in 1..n {
        c.cx(l.b(i), l.a(i))?;
    }
    for i in (1..n.saturating_sub(1)).rev() {
        c.cx(l.b(i), l.b(i + 1))?;
    }
    for i in 0..n - 1 {
        c.ccx(l.b(i), l.a(i), l.b(i + 1))?;
    }
    for i in (0..n).rev() {
        if i == n - 1 {
            c.cx(l.b(i), l.a(i))?;
        } else {
            c.append_composite("PERES", peres.clone(), &[l.b(i), l.a(i), l.b(i + 1)])?;
        }
    }
    for i in 1..n.saturating_sub(1) {
        c.cx(l.b(i), l.b(i + 1))?;
    }
    for i in 1..n {
        c.cx(l.b(i), l.a(i))?;
    }
    Ok(c)
}

/// `A <- (A - B) mod 2^n` as `NOT(NOT(A) + B)`.
pub fn build_subtractor(n: usize) -> Result<Circuit> {
    check_n(n, 1)?;
    let mut c = Circuit::new(2 * n, "SUB")?;
    for i in 0..n {
        c.x(i)?;
    }
    let mapping: Vec<usize> = (0..2 * n).collect();
    c.append_circuit(build_adder(n)?, &mapping)?;
    for i in 0..n {
        c.x(i)?;
    }
    Ok(c)
}

/// `z = 0`: `A <- A + B`; `z = 1`: `A <- A - B` (all mod `2^n`).
pub fn build_ctrl_add_sub(n: usize) -> Result<Circuit> {
    check_n(n, 1)?;
    let l = RegisterLayout::controlled(n);
    let mut c = Circuit::new(l.width(), "CTRL ADD/SUB")?;
    for i in 0..n {
        c.cx(l.z(), l.a(i))?;
    }
    let mapping: Vec<usize> = l.a.iter().chain(&l.b).map(|q| q.0).collect();
    c.append_circuit(build_adder(n)?, &mapping)?;
    for i in 0..n {
        c.cx(l.z(), l.a(i))?;
    }
    Ok(c)
}

/// `z = 1`: `A <- (A + B) mod 2^n`; `z = 0`: identity. Needs `n >= 2`.
pub fn build_ctrl_adder(n: usize) -> Result<Circuit> {
    check_n(n, 2)?;
    let l = RegisterLayout::controlled(n);
    let z = l.z();
    let mut c = Circuit::new(l.width(), "CTRL ADD")?;

    for i in 1..n {
        c.cx(l.b(i), l.a(i))?;
    }
    for i in (1..n - 1).rev() {
        c.cx(l.b(i), l.b(i + 1))?;
    }
    for i in 0..n - 1 {
        c.ccx(l.a(i), l.b(i), l.b(i + 1))?;
    }
    c.ccx(z, l.b(n - 1), l.a(n - 1))?;
    for i in (0..n - 1).rev() {
        c.ccx(l.a(i), l.b(i), l.b(i + 1))?;
        c.ccx(z, l.b(i), l.a(i))?;
    }
    for i in 1..n - 1 {
        c.cx(l.b(i), l.b(i + 1))?;
    }
    for i in 1..n {
        c.cx(l.b(i), l.a(i))?;
    }
    Ok(c)
}
