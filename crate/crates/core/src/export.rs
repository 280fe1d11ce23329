//! OpenQASM 2.0 import/export and report serialization (JSON, CSV).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{Histogram, ResourceReport};
use crate::circuit::{Circuit, Gate, GateKind, QubitId};
use crate::error::{Error, Result};

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
const REGISTER: &str = "q";

/// Serialized OpenQASM 2.0 source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmDocument {
    pub text: String,
}

impl std::fmt::Display for QasmDocument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

fn emit_gate(out: &mut String, g: &Gate) {
    let q = |q: &QubitId| format!("{REGISTER}[{}]", q.0);
    // writeln! into a String cannot fail.
    let _ = match g {
        Gate::X(a) | Gate::H(a) | Gate::T(a) | Gate::Tdg(a) => {
            writeln!(out, "{} {};", g.kind(), q(a))
        }
        Gate::Cx(a, b) | Gate::Swap(a, b) => writeln!(out, "{} {},{};", g.kind(), q(a), q(b)),
        Gate::Ccx(a, b, c) => writeln!(out, "ccx {},{},{};", q(a), q(b), q(c)),
        Gate::Zcx(c, t) => writeln!(out, "x {0};\ncx {0},{1};\nx {0};", q(c), q(t)),
        Gate::Composite(_) => unreachable!("composites are flattened before emission"),
    };
}

/// Emits `c` with composites flattened and ZCX written as `x; cx; x`.
pub fn to_qasm(c: &Circuit) -> Result<QasmDocument> {
    if let Err(violations) = c.validate() {
        return Err(Error::Invalid(violations[0].to_string()));
    }
    let mut text = String::from(HEADER);
    let _ = writeln!(text, "qreg {REGISTER}[{}];", c.width());
    c.for_each_primitive(|g| emit_gate(&mut text, g));
    Ok(QasmDocument { text })
}

/// Statements of a document with the 1-based line each one starts on.
fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 1;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split("//").next().unwrap_or("");
        for (i, piece) in line.split(';').enumerate() {
            if i > 0 {
                let stmt = current.trim().to_string();
                if !stmt.is_empty() {
                    out.push((start, stmt));
                }
                current.clear();
            }
            if current.trim().is_empty() {
                start = lineno + 1;
            }
            current.push_str(piece);
            current.push(' ');
        }
    }
    let rest = current.trim();
    if !rest.is_empty() {
        out.push((start, rest.to_string()));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_qubit(line: usize, reg: &str, width: usize, arg: &str) -> Result<QubitId> {
    let arg = arg.trim();
    let inner = arg
        .strip_prefix(reg)
        .and_then(|s| s.trim().strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected `{reg}[i]`, found `{arg}`")))?;
    let idx: usize = inner
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad qubit index `{inner}`")))?;
    if idx >= width {
        return Err(parse_err(
            line,
            format!("qubit {idx} out of range for qreg of size {width}"),
        ));
    }
    Ok(QubitId(idx))
}

/// Parses the subset of OpenQASM 2.0 produced by [`to_qasm`].
pub fn from_qasm(text: &str) -> Result<Circuit> {
    let mut register: Option<(String, usize, usize)> = None;
    let mut gates = Vec::new();
    let mut seen_version = false;

    for (line, stmt) in statements(text) {
        let (head, rest) = match stmt.find(char::is_whitespace) {
            Some(i) => (&stmt[..i], stmt[i..].trim()),
            None => (stmt.as_str(), ""),
        };
        match head {
            "OPENQASM" => {
                if rest != "2.0" {
                    return Err(parse_err(line, format!("unsupported version `{rest}`")));
                }
                seen_version = true;
            }
            "include" => {}
            "qreg" => {
                if register.is_some() {
                    return Err(parse_err(line, "only one qreg is supported"));
                }
                let open = rest
                    .find('[')
                    .ok_or_else(|| parse_err(line, "malformed qreg"))?;
                let name = rest[..open].trim().to_string();
                let size: usize = rest[open + 1..]
                    .strip_suffix(']')
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| parse_err(line, "malformed qreg size"))?;
                if name.is_empty() || size == 0 {
                    return Err(parse_err(line, "malformed qreg"));
                }
                register = Some((name, size, line));
            }
            _ => {
                let kind = match head {
                    "x" => GateKind::X,
                    "cx" => GateKind::Cx,
                    "ccx" => GateKind::Ccx,
                    "swap" => GateKind::Swap,
                    "h" => GateKind::H,
                    "t" => GateKind::T,
                    "tdg" => GateKind::Tdg,
                    other => {
                        let name = other.split('(').next().unwrap_or(other);
                        return Err(parse_err(line, format!("unsupported gate `{name}`")));
                    }
                };
                let (reg, width, _) = register
                    .as_ref()
                    .ok_or_else(|| parse_err(line, "gate before qreg declaration"))?;
                let operands = rest
                    .split(',')
                    .map(|a| parse_qubit(line, reg, *width, a))
                    .collect::<Result<Vec<_>>>()?;
                let gate = Gate::from_operands(kind, &operands)
                    .map_err(|e| parse_err(line, e.to_string()))?;
                for (i, q) in operands.iter().enumerate() {
                    if operands[..i].contains(q) {
                        return Err(parse_err(line, format!("qubit {} used twice", q.0)));
                    }
                }
                gates.push(gate);
            }
        }
    }
    if !seen_version {
        return Err(parse_err(1, "missing `OPENQASM 2.0;` header"));
    }
    let (_, width, _) = register.ok_or_else(|| parse_err(1, "no qreg declared"))?;
    Ok(Circuit::from_gates_unchecked(width, "qasm", gates))
}

/// One row of a resource table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub width: usize,
    pub t_count: usize,
    pub t_count_expected: Option<usize>,
    pub t_depth: usize,
    pub total_depth: usize,
    pub histogram: Histogram,
}

impl ReportRow {
    pub fn new(n: usize, report: ResourceReport, t_count_expected: Option<usize>) -> Self {
        ReportRow {
            n,
            width: report.width,
            t_count: report.t_count,
            t_count_expected,
            t_depth: report.t_depth,
            total_depth: report.total_depth,
            histogram: report.histogram,
        }
    }
}

pub fn rows_to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(rows).expect("report rows serialize")
}

pub const CSV_COLUMNS: [&str; 6] = [
    "n",
    "width",
    "t_count",
    "t_count_expected",
    "t_depth",
    "total_depth",
];

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in rows {
        let expected = r
            .t_count_expected
            .map(|e| e.to_string())
            .unwrap_or_default();
        w.write_record([
            r.n.to_string(),
            r.width.to_string(),
            r.t_count.to_string(),
            expected,
            r.t_depth.to_string(),
            r.total_depth.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
