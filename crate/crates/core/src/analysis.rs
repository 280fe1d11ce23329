//! Resource metrics: gate histograms, T-count, scheduled T-depth and depth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::lowering::lower_to_clifford_t;

pub type Histogram = BTreeMap<GateKind, usize>;

/// Label attached to [`ResourceReport::t_depth`] wherever it is displayed.
pub const T_DEPTH_LABEL: &str = "scheduled T-depth (upper bound)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub width: usize,
    pub t_count: usize,
    /// Layers containing a T/TDG gate under ASAP scheduling. An upper bound on
    /// the minimum T-depth: Clifford commutation is not exploited.
    pub t_depth: usize,
    pub total_depth: usize,
    pub histogram: Histogram,
}

/// Per-kind gate counts after expanding composites (no lowering).
pub fn count_ops(c: &Circuit) -> Histogram {
    let mut h = Histogram::new();
    c.for_each_primitive(|g| *h.entry(g.kind()).or_default() += 1);
    h
}

fn t_gates(h: &Histogram) -> usize {
    h.get(&GateKind::T).copied().unwrap_or(0) + h.get(&GateKind::Tdg).copied().unwrap_or(0)
}

/// Number of T and TDG gates after lowering to Clifford+T.
pub fn t_count(c: &Circuit) -> Result<usize> {
    Ok(t_gates(&count_ops(&lower_to_clifford_t(c)?)))
}

/// ASAP layer (1-based) of every gate: one more than the latest layer already
/// occupied on any of its qubits.
pub fn schedule_layers(c: &Circuit) -> Result<Vec<usize>> {
    let mut frontier = vec![0usize; c.width()];
    let mut layers = Vec::with_capacity(c.len());
    for g in c.gates() {
        if let Gate::Composite(_) = g {
            return Err(Error::MustLower(GateKind::Composite));
        }
        let ops = g.operands();
        let layer = 1 + ops.iter().map(|q| frontier[q.0]).max().unwrap_or(0);
        for q in &ops {
            frontier[q.0] = layer;
        }
        layers.push(layer);
    }
    Ok(layers)
}

/// Gate indices grouped by ASAP layer; `result[k]` holds layer `k + 1`.
pub fn layer_groups(c: &Circuit) -> Result<Vec<Vec<usize>>> {
    let layers = schedule_layers(c)?;
    let depth = layers.iter().copied().max().unwrap_or(0);
    let mut groups = vec![Vec::new(); depth];
    for (idx, layer) in layers.into_iter().enumerate() {
        groups[layer - 1].push(idx);
    }
    Ok(groups)
}

fn t_depth_of_lowered(low: &Circuit, layers: &[usize]) -> usize {
    let mut t_layers: Vec<usize> = low
        .gates()
        .iter()
        .zip(layers)
        .filter(|(g, _)| g.kind().is_t_type())
        .map(|(_, l)| *l)
        .collect();
    t_layers.sort_unstable();
    t_layers.dedup();
    t_layers.len()
}

/// Number of ASAP layers of the lowered circuit that contain a T or TDG gate.
pub fn t_depth(c: &Circuit) -> Result<usize> {
    let low = lower_to_clifford_t(c)?;
    Ok(t_depth_of_lowered(&low, &schedule_layers(&low)?))
}

/// Full resource summary, measured on the Clifford+T lowering of `c`.
pub fn resource_report(c: &Circuit) -> Result<ResourceReport> {
    let low = lower_to_clifford_t(c)?;
    let layers = schedule_layers(&low)?;
    let histogram = count_ops(&low);
    Ok(ResourceReport {
        width: c.width(),
        t_count: t_gates(&histogram),
        t_depth: t_depth_of_lowered(&low, &layers),
        total_depth: layers.iter().copied().max().unwrap_or(0),
        histogram,
    })
}

/// `7/2 n^2 + 21n - 28`, evaluated exactly for even `n >= 4`.
pub fn expected_t_count_isqrt(n: usize) -> Result<usize> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidWidth {
            width: n,
            reason: "square-root width must be even and at least 4",
        });
    }
    Ok((7 * n * n + 42 * n - 56) / 2)
}
