//! Gate set and circuit IR.
//!
//! A [`Circuit`] is a fixed-width, ordered list of [`Gate`]s. Composite gates
//! hold their body by value (behind an [`Arc`]) together with the mapping from
//! body qubits onto the enclosing circuit; they are expanded only on demand.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composite bodies nested deeper than this are reported by [`Circuit::validate`].
pub const MAX_NESTING: usize = 64;

/// Position of a qubit within a circuit. Index 0 is the least significant bit
/// of whichever register it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    X,
    Cx,
    Zcx,
    Ccx,
    Swap,
    H,
    T,
    Tdg,
    Composite,
}

impl GateKind {
    /// Number of operands, or `None` for composites whose arity is their body width.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::X | GateKind::H | GateKind::T | GateKind::Tdg => Some(1),
            GateKind::Cx | GateKind::Zcx | GateKind::Swap => Some(2),
            GateKind::Ccx => Some(3),
            GateKind::Composite => None,
        }
    }

    /// True for gates that map computational basis states to basis states.
    pub fn is_permutation(self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::Cx
                | GateKind::Zcx
                | GateKind::Ccx
                | GateKind::Swap
                | GateKind::Composite
        )
    }

    /// Members of the lowered Clifford+T set `{X, CX, H, T, TDG}`.
    pub fn is_clifford_t(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cx | GateKind::H | GateKind::T | GateKind::Tdg
        )
    }

    pub fn is_t_type(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Zcx => "zcx",
            GateKind::Ccx => "ccx",
            GateKind::Swap => "swap",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Composite => "composite",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named sub-circuit applied to `operands`; body qubit `i` maps to `operands[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Composite {
    pub name: String,
    pub body: Arc<Circuit>,
    pub operands: Vec<QubitId>,
}

/// One gate with its operands. Controls come first: `Cx(control, target)`,
/// `Zcx(control, target)` (fires when the control is 0), `Ccx(c0, c1, target)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(QubitId),
    Cx(QubitId, QubitId),
    Zcx(QubitId, QubitId),
    Ccx(QubitId, QubitId, QubitId),
    Swap(QubitId, QubitId),
    H(QubitId),
    T(QubitId),
    Tdg(QubitId),
    Composite(Composite),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::Cx(..) => GateKind::Cx,
            Gate::Zcx(..) => GateKind::Zcx,
            Gate::Ccx(..) => GateKind::Ccx,
            Gate::Swap(..) => GateKind::Swap,
            Gate::H(_) => GateKind::H,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::Composite(_) => GateKind::Composite,
        }
    }

    pub fn operands(&self) -> Vec<QubitId> {
        match self {
            Gate::X(a) | Gate::H(a) | Gate::T(a) | Gate::Tdg(a) => vec![*a],
            Gate::Cx(a, b) | Gate::Zcx(a, b) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::Ccx(a, b, c) => vec![*a, *b, *c],
            Gate::Composite(comp) => comp.operands.clone(),
        }
    }

    /// Builds a primitive gate of `kind` from positional operands.
    pub fn from_operands(kind: GateKind, operands: &[QubitId]) -> Result<Gate> {
        let expected = kind.arity().ok_or(Error::UnsupportedGate(kind))?;
        if operands.len() != expected {
            return Err(Error::ArityMismatch {
                name: kind.to_string(),
                expected,
                actual: operands.len(),
            });
        }
        let q = operands;
        Ok(match kind {
            GateKind::X => Gate::X(q[0]),
            GateKind::H => Gate::H(q[0]),
            GateKind::T => Gate::T(q[0]),
            GateKind::Tdg => Gate::Tdg(q[0]),
            GateKind::Cx => Gate::Cx(q[0], q[1]),
            GateKind::Zcx => Gate::Zcx(q[0], q[1]),
            GateKind::Swap => Gate::Swap(q[0], q[1]),
            GateKind::Ccx => Gate::Ccx(q[0], q[1], q[2]),
            GateKind::Composite => unreachable!(),
        })
    }

    /// Relabels every operand through `map` (`q -> map[q]`).
    pub fn remap(&self, map: &[QubitId]) -> Gate {
        let m = |q: &QubitId| map[q.0];
        match self {
            Gate::X(a) => Gate::X(m(a)),
            Gate::H(a) => Gate::H(m(a)),
            Gate::T(a) => Gate::T(m(a)),
            Gate::Tdg(a) => Gate::Tdg(m(a)),
            Gate::Cx(a, b) => Gate::Cx(m(a), m(b)),
            Gate::Zcx(a, b) => Gate::Zcx(m(a), m(b)),
            Gate::Swap(a, b) => Gate::Swap(m(a), m(b)),
            Gate::Ccx(a, b, c) => Gate::Ccx(m(a), m(b), m(c)),
            Gate::Composite(comp) => Gate::Composite(Composite {
                name: comp.name.clone(),
                body: Arc::clone(&comp.body),
                operands: comp.operands.iter().map(m).collect(),
            }),
        }
    }

    /// The adjoint gate. Everything in the set is self-inverse except T/TDG
    /// and composites, whose bodies are inverted.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::T(a) => Gate::Tdg(*a),
            Gate::Tdg(a) => Gate::T(*a),
            Gate::Composite(comp) => Gate::Composite(Composite {
                name: format!("{}_dg", comp.name),
                body: Arc::new(comp.body.inverse()),
                operands: comp.operands.clone(),
            }),
            g => g.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Gate::Composite(comp) => comp.name.as_str(),
            g => g.kind().as_str(),
        };
        write!(f, "{name}(")?;
        for (i, q) in self.operands().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", q.0)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    ZeroWidth,
    OutOfRange { qubit: usize, width: usize },
    OperandCollision { qubit: usize },
    ArityMismatch { expected: usize, actual: usize },
    NestingTooDeep,
}

/// One broken invariant. `path` lists the enclosing composites as
/// `"<gate index>:<name>"`, outermost first; `gate` is the index of the
/// offending gate within the innermost circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<String>,
    pub gate: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut path = self.path.join("/");
        if let Some(g) = self.gate {
            if !path.is_empty() {
                path.push('/');
            }
            path.push_str(&g.to_string());
        }
        write!(f, "[{path}] {:?}", self.kind)
    }
}

/// A fixed-width ordered gate sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    name: String,
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, name: impl Into<String>) -> Result<Circuit> {
        if width == 0 {
            return Err(Error::InvalidWidth {
                width,
                reason: "a circuit needs at least one qubit",
            });
        }
        Ok(Circuit {
            name: name.into(),
            width,
            gates: Vec::new(),
        })
    }

    /// Assembles a circuit without checking any invariant. Use
    /// [`Circuit::validate`] before handing the result to simulators.
    pub fn from_gates_unchecked(
        width: usize,
        name: impl Into<String>,
        gates: Vec<Gate>,
    ) -> Circuit {
        Circuit {
            name: name.into(),
            width,
            gates,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    fn check_operands(&self, operands: &[QubitId]) -> Result<()> {
        for (i, q) in operands.iter().enumerate() {
            if q.0 >= self.width {
                return Err(Error::QubitOutOfRange {
                    qubit: q.0,
                    width: self.width,
                });
            }
            if operands[..i].contains(q) {
                return Err(Error::OperandCollision { qubit: q.0 });
            }
        }
        Ok(())
    }

    /// Appends `gate` after checking range, distinctness and composite arity.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        if let Gate::Composite(comp) = &gate {
            if comp.operands.len() != comp.body.width {
                return Err(Error::ArityMismatch {
                    name: comp.name.clone(),
                    expected: comp.body.width,
                    actual: comp.operands.len(),
                });
            }
        }
        self.check_operands(&gate.operands())?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::X(QubitId(q)))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Cx(QubitId(control), QubitId(target)))
    }

    pub fn zcx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Zcx(QubitId(control), QubitId(target)))
    }

    pub fn ccx(&mut self, c0: usize, c1: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Ccx(QubitId(c0), QubitId(c1), QubitId(target)))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(Gate::Swap(QubitId(a), QubitId(b)))
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::H(QubitId(q)))
    }

    pub fn t(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::T(QubitId(q)))
    }

    pub fn tdg(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::Tdg(QubitId(q)))
    }

    /// Appends `body` as a named composite gate; body qubit `i` acts on `mapping[i]`.
    pub fn append_composite(
        &mut self,
        name: impl Into<String>,
        body: impl Into<Arc<Circuit>>,
        mapping: &[usize],
    ) -> Result<&mut Self> {
        self.push(Gate::Composite(Composite {
            name: name.into(),
            body: body.into(),
            operands: mapping.iter().copied().map(QubitId).collect(),
        }))
    }

    /// Appends `body` as a composite named after the body itself.
    pub fn append_circuit(
        &mut self,
        body: impl Into<Arc<Circuit>>,
        mapping: &[usize],
    ) -> Result<&mut Self> {
        let body = body.into();
        let name = body.name.clone();
        self.append_composite(name, body, mapping)
    }

    /// Collects every invariant violation, descending into composite bodies.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        self.collect_violations(&mut Vec::new(), &mut out);
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn collect_violations(&self, path: &mut Vec<String>, out: &mut Vec<Violation>) {
        if self.width == 0 {
            out.push(Violation {
                path: path.clone(),
                gate: None,
                kind: ViolationKind::ZeroWidth,
            });
        }
        if path.len() > MAX_NESTING {
            out.push(Violation {
                path: path.clone(),
                gate: None,
                kind: ViolationKind::NestingTooDeep,
            });
            return;
        }
        for (idx, gate) in self.gates.iter().enumerate() {
            let mut report = |kind| {
                out.push(Violation {
                    path: path.clone(),
                    gate: Some(idx),
                    kind,
                })
            };
            let operands = gate.operands();
            if let Some(expected) = gate.kind().arity() {
                if operands.len() != expected {
                    report(ViolationKind::ArityMismatch {
                        expected,
                        actual: operands.len(),
                    });
                }
            }
            for (i, q) in operands.iter().enumerate() {
                if q.0 >= self.width {
                    report(ViolationKind::OutOfRange {
                        qubit: q.0,
                        width: self.width,
                    });
                }
                if operands[..i].contains(q) {
                    report(ViolationKind::OperandCollision { qubit: q.0 });
                }
            }
            if let Gate::Composite(comp) = gate {
                if comp.operands.len() != comp.body.width {
                    report(ViolationKind::ArityMismatch {
                        expected: comp.body.width,
                        actual: comp.operands.len(),
                    });
                }
                path.push(format!("{idx}:{}", comp.name));
                comp.body.collect_violations(path, out);
                path.pop();
            }
        }
    }

    /// Calls `f` on every primitive gate in execution order, expanding
    /// composites and relabelling their operands into this circuit's qubits.
    pub fn for_each_primitive<F: FnMut(&Gate)>(&self, mut f: F) {
        let _ = self.try_for_each_primitive(|g| {
            f(g);
            Ok::<(), std::convert::Infallible>(())
        });
    }

    /// Fallible [`Circuit::for_each_primitive`]; stops at the first error.
    pub fn try_for_each_primitive<E, F>(&self, mut f: F) -> std::result::Result<(), E>
    where
        F: FnMut(&Gate) -> std::result::Result<(), E>,
    {
        self.visit_primitives(None, &mut f)
    }

    fn visit_primitives<E, F>(
        &self,
        map: Option<&[QubitId]>,
        f: &mut F,
    ) -> std::result::Result<(), E>
    where
        F: FnMut(&Gate) -> std::result::Result<(), E>,
    {
        for gate in &self.gates {
            match gate {
                Gate::Composite(comp) => {
                    let inner: Vec<QubitId> = match map {
                        Some(m) => comp.operands.iter().map(|q| m[q.0]).collect(),
                        None => comp.operands.clone(),
                    };
                    comp.body.visit_primitives(Some(&inner), f)?;
                }
                g => match map {
                    Some(m) => f(&g.remap(m))?,
                    None => f(g)?,
                },
            }
        }
        Ok(())
    }

    /// True when no composite gates are present.
    pub fn is_flat(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Composite(_)))
    }

    /// Gate-wise inverse: reversed order with each gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            name: format!("{}_dg", self.name),
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Appends all gates of `other` (same width) in order.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Circuit {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peres() -> Circuit {
        let mut c = Circuit::new(3, "PERES").unwrap();
        c.ccx(0, 1, 2).unwrap().cx(0, 1).unwrap();
        c
    }

    #[test]
    fn new_circuit_is_empty() {
        let c = Circuit::new(3, "PERES").unwrap();
        assert_eq!(c.width(), 3);
        assert!(c.is_empty());
        let c = Circuit::new(13, "ISQRT").unwrap();
        assert_eq!(c.width(), 13);
        assert!(c.is_empty());
    }

    #[test]
    fn zero_width_rejected() {
        assert!(matches!(
            Circuit::new(0, "x"),
            Err(Error::InvalidWidth { width: 0, .. })
        ));
    }

    #[test]
    fn append_gate_checks() {
        let mut c = Circuit::new(2, "c").unwrap();
        c.cx(0, 1).unwrap();
        assert_eq!(c.len(), 1);

        let mut c = Circuit::new(3, "c").unwrap();
        assert_eq!(
            c.ccx(0, 0, 1).unwrap_err(),
            Error::OperandCollision { qubit: 0 }
        );
        assert_eq!(
            c.x(5).unwrap_err(),
            Error::QubitOutOfRange { qubit: 5, width: 3 }
        );
        assert!(c.is_empty());
    }

    #[test]
    fn append_keeps_prior_gates() {
        let mut c = Circuit::new(3, "c").unwrap();
        c.x(0).unwrap().cx(0, 1).unwrap();
        let before = c.gates().to_vec();
        c.ccx(0, 1, 2).unwrap();
        assert_eq!(&c.gates()[..2], &before[..]);
    }

    #[test]
    fn append_composite_checks() {
        let mut c = Circuit::new(5, "outer").unwrap();
        c.append_circuit(peres(), &[4, 1, 0]).unwrap();
        match &c.gates()[0] {
            Gate::Composite(comp) => {
                assert_eq!(comp.name, "PERES");
                assert_eq!(comp.operands, vec![QubitId(4), QubitId(1), QubitId(0)]);
                assert_eq!(comp.body.len(), 2);
            }
            g => panic!("unexpected {g:?}"),
        }
        assert!(matches!(
            c.append_circuit(peres(), &[0, 1]),
            Err(Error::ArityMismatch {
                expected: 3,
                actual: 2,
                ..
            })
        ));
        assert_eq!(
            c.append_circuit(peres(), &[0, 1, 1]).unwrap_err(),
            Error::OperandCollision { qubit: 1 }
        );
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn validate_flags_collision() {
        let c = Circuit::from_gates_unchecked(3, "bad", vec![Gate::Cx(QubitId(2), QubitId(2))]);
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::OperandCollision { qubit: 2 });
        assert_eq!(v[0].gate, Some(0));
    }

    #[test]
    fn validate_reports_path_into_composite() {
        let body =
            Circuit::from_gates_unchecked(2, "BAD", vec![Gate::X(QubitId(0)), Gate::X(QubitId(7))]);
        let mut c = Circuit::new(4, "outer").unwrap();
        c.x(3).unwrap();
        c.append_circuit(body, &[0, 1]).unwrap();
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, vec!["1:BAD".to_string()]);
        assert_eq!(v[0].gate, Some(1));
        assert_eq!(v[0].kind, ViolationKind::OutOfRange { qubit: 7, width: 2 });
    }

    #[test]
    fn validate_rejects_runaway_nesting() {
        let mut c = Circuit::new(1, "leaf").unwrap();
        c.x(0).unwrap();
        for _ in 0..=MAX_NESTING + 1 {
            let mut outer = Circuit::new(1, "wrap").unwrap();
            outer.append_circuit(c, &[0]).unwrap();
            c = outer;
        }
        let v = c.validate().unwrap_err();
        assert!(v.iter().any(|v| v.kind == ViolationKind::NestingTooDeep));
    }

    #[test]
    fn primitive_visit_relabels() {
        let mut c = Circuit::new(5, "outer").unwrap();
        c.append_circuit(peres(), &[4, 1, 0]).unwrap();
        let mut seen = Vec::new();
        c.for_each_primitive(|g| seen.push(g.clone()));
        assert_eq!(
            seen,
            vec![
                Gate::Ccx(QubitId(4), QubitId(1), QubitId(0)),
                Gate::Cx(QubitId(4), QubitId(1))
            ]
        );
    }

    #[test]
    fn inverse_swaps_t_phases() {
        let mut c = Circuit::new(2, "c").unwrap();
        c.h(0)
            .unwrap()
            .t(0)
            .unwrap()
            .cx(0, 1)
            .unwrap()
            .tdg(1)
            .unwrap();
        let inv = c.inverse();
        assert_eq!(
            inv.gates(),
            &[
                Gate::T(QubitId(1)),
                Gate::Cx(QubitId(0), QubitId(1)),
                Gate::Tdg(QubitId(0)),
                Gate::H(QubitId(0)),
            ]
        );
    }
}
