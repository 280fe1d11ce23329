//! Rewrites logical circuits down to the Clifford+T set `{X, CX, H, T, TDG}`.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, GateKind, QubitId};
use crate::error::{Error, Result};

/// Template expansion for one gate kind. Template qubit `i` stands for the
/// source gate's `i`-th operand.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionRule {
    pub source: GateKind,
    pub replacement: Circuit,
}

impl DecompositionRule {
    pub fn new(source: GateKind, replacement: Circuit) -> Result<Self> {
        let arity = source.arity().ok_or_else(|| Error::InvalidRule {
            kind: source,
            reason: "composites are flattened, not rewritten".into(),
        })?;
        if replacement.width() != arity {
            return Err(Error::InvalidRule {
                kind: source,
                reason: format!("template width {} != arity {arity}", replacement.width()),
            });
        }
        if let Some(g) = replacement
            .gates()
            .iter()
            .find(|g| !g.kind().is_clifford_t())
        {
            return Err(Error::InvalidRule {
                kind: source,
                reason: format!("template contains non Clifford+T gate {g}"),
            });
        }
        Ok(DecompositionRule {
            source,
            replacement,
        })
    }

    /// Instantiates the template on `gate`'s operands.
    pub fn expand(&self, gate: &Gate) -> Vec<Gate> {
        let ops = gate.operands();
        self.replacement
            .gates()
            .iter()
            .map(|g| g.remap(&ops))
            .collect()
    }
}

/// Registry of rules keyed by gate kind.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: BTreeMap<GateKind, DecompositionRule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::standard()
    }
}

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet {
            rules: BTreeMap::new(),
        }
    }

    /// SWAP as three CX, ZCX by X-conjugation, CCX by the 7-T network.
    pub fn standard() -> Self {
        let mut set = RuleSet::empty();
        for (kind, template) in [
            (GateKind::Swap, swap_template()),
            (GateKind::Zcx, zcx_template()),
            (GateKind::Ccx, toffoli_template()),
        ] {
            set.insert(DecompositionRule::new(kind, template).expect("built-in rule"));
        }
        set
    }

    /// Registers `rule`, replacing any previous rule for the same kind.
    pub fn insert(&mut self, rule: DecompositionRule) -> Option<DecompositionRule> {
        self.rules.insert(rule.source, rule)
    }

    pub fn get(&self, kind: GateKind) -> Option<&DecompositionRule> {
        self.rules.get(&kind)
    }

    /// Flattens `c` and rewrites every gate outside Clifford+T by its rule.
    pub fn lower(&self, c: &Circuit) -> Result<Circuit> {
        let mut gates = Vec::with_capacity(c.len());
        let mut missing = None;
        c.for_each_primitive(|g| {
            let kind = g.kind();
            if kind.is_clifford_t() {
                gates.push(g.clone());
            } else if let Some(rule) = self.rules.get(&kind) {
                gates.extend(rule.expand(g));
            } else if missing.is_none() {
                missing = Some(kind);
            }
        });
        if let Some(kind) = missing {
            return Err(Error::UnsupportedGate(kind));
        }
        Ok(Circuit::from_gates_unchecked(c.width(), c.name(), gates))
    }
}

fn template(width: usize, name: &str, gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates_unchecked(width, name, gates)
}

fn swap_template() -> Circuit {
    let (a, b) = (QubitId(0), QubitId(1));
    template(
        2,
        "swap",
        vec![Gate::Cx(a, b), Gate::Cx(b, a), Gate::Cx(a, b)],
    )
}

fn zcx_template() -> Circuit {
    let (c, t) = (QubitId(0), QubitId(1));
    template(2, "zcx", vec![Gate::X(c), Gate::Cx(c, t), Gate::X(c)])
}

// 2 H, 6 CX, 4 T, 3 TDG; exact (no global phase) on all eight basis states.
fn toffoli_template() -> Circuit {
    let (a, b, c) = (QubitId(0), QubitId(1), QubitId(2));
    template(
        3,
        "ccx",
        vec![
            Gate::H(c),
            Gate::Cx(b, c),
            Gate::Tdg(c),
            Gate::Cx(a, c),
            Gate::T(c),
            Gate::Cx(b, c),
            Gate::Tdg(c),
            Gate::Cx(a, c),
            Gate::T(b),
            Gate::T(c),
            Gate::H(c),
            Gate::Cx(a, b),
            Gate::Tdg(b),
            Gate::Cx(a, b),
            Gate::T(a),
        ],
    )
}

/// Expands every composite in place order; no other rewriting.
pub fn flatten(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    c.for_each_primitive(|g| gates.push(g.clone()));
    Circuit::from_gates_unchecked(c.width(), c.name(), gates)
}

fn expect_kind(g: &Gate, kind: GateKind) -> Result<()> {
    if g.kind() == kind {
        Ok(())
    } else {
        Err(Error::UnsupportedGate(g.kind()))
    }
}

fn lower_one(g: &Gate, kind: GateKind, template: Circuit) -> Result<Circuit> {
    expect_kind(g, kind)?;
    let ops = g.operands();
    let width = ops.iter().map(|q| q.0 + 1).max().unwrap_or(1);
    let gates = template.gates().iter().map(|t| t.remap(&ops)).collect();
    Ok(Circuit::from_gates_unchecked(width, kind.as_str(), gates))
}

/// `SWAP(a,b)` as `CX(a,b) CX(b,a) CX(a,b)`, on a circuit just wide enough for the operands.
pub fn lower_swap(g: &Gate) -> Result<Circuit> {
    lower_one(g, GateKind::Swap, swap_template())
}

/// `ZCX(c,t)` as `X(c) CX(c,t) X(c)`.
pub fn lower_zcx(g: &Gate) -> Result<Circuit> {
    lower_one(g, GateKind::Zcx, zcx_template())
}

/// `CCX(a,b,c)` as the 15-gate Clifford+T network.
pub fn lower_toffoli(g: &Gate) -> Result<Circuit> {
    lower_one(g, GateKind::Ccx, toffoli_template())
}

/// Lowers with the standard rule set. Idempotent on already-lowered circuits.
pub fn lower_to_clifford_t(c: &Circuit) -> Result<Circuit> {
    RuleSet::standard().lower(c)
}
