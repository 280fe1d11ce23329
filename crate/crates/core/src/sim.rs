//! Simulation backends.
//!
//! * [`perm_run`] tracks a single computational basis state through circuits
//!   built from `X, CX, ZCX, CCX, SWAP` (and composites of them). Cost is one
//!   bit operation per gate.
//! * [`sv_run`] evolves a dense statevector through lowered Clifford+T
//!   circuits. Bit `i` of an amplitude index is qubit `i`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use bitvec::prelude::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, GateKind, QubitId};
use crate::error::{Error, Result};
use crate::lowering::lower_to_clifford_t;

/// Default statevector cap in qubits.
pub const DEFAULT_SV_CAP: usize = 16;
/// Environment variable that overrides [`DEFAULT_SV_CAP`].
pub const SV_CAP_ENV: &str = "QSQRT_SV_CAP";
/// Largest permutation-circuit width enumerated exhaustively by [`assert_equiv`].
pub const PERM_EXHAUSTIVE_LIMIT: usize = 20;
/// Largest statevector width enumerated exhaustively by [`assert_equiv`].
pub const SV_EXHAUSTIVE_LIMIT: usize = 12;
/// Amplitude tolerance for statevector comparisons.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

/// Reads [`SV_CAP_ENV`], falling back to [`DEFAULT_SV_CAP`] when unset or unparsable.
pub fn sv_cap_from_env() -> usize {
    std::env::var(SV_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SV_CAP)
}

/// A classical bitstring; bit `i` is qubit `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: BitVec<u64, Lsb0>,
}

impl BasisState {
    pub fn zeros(width: usize) -> Self {
        BasisState {
            bits: bitvec![u64, Lsb0; 0; width],
        }
    }

    /// Low `width` bits of `value`; higher bits are discarded.
    pub fn from_u64(width: usize, value: u64) -> Self {
        let mut s = BasisState::zeros(width);
        for i in 0..width.min(64) {
            s.bits.set(i, value >> i & 1 == 1);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, q: usize) -> bool {
        self.bits[q]
    }

    pub fn set(&mut self, q: usize, v: bool) {
        self.bits.set(q, v);
    }

    pub fn flip(&mut self, q: usize) {
        let v = self.bits[q];
        self.bits.set(q, !v);
    }

    /// The first 64 qubits as an integer.
    pub fn to_u64(&self) -> u64 {
        self.read(&(0..self.width().min(64)).map(QubitId).collect::<Vec<_>>())
    }

    /// Reads `qubits` as an unsigned integer, `qubits[0]` being the LSB.
    pub fn read(&self, qubits: &[QubitId]) -> u64 {
        qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, q)| acc | (self.bits[q.0] as u64) << i)
    }

    /// Writes the low bits of `value` into `qubits`, `qubits[0]` being the LSB.
    pub fn write(&mut self, qubits: &[QubitId], value: u64) {
        for (i, q) in qubits.iter().enumerate() {
            self.bits.set(q.0, i < 64 && value >> i & 1 == 1);
        }
    }

    fn apply(&mut self, g: &Gate) -> Result<()> {
        match *g {
            Gate::X(a) => self.flip(a.0),
            Gate::Cx(c, t) => {
                if self.get(c.0) {
                    self.flip(t.0)
                }
            }
            Gate::Zcx(c, t) => {
                if !self.get(c.0) {
                    self.flip(t.0)
                }
            }
            Gate::Ccx(c0, c1, t) => {
                if self.get(c0.0) && self.get(c1.0) {
                    self.flip(t.0)
                }
            }
            Gate::Swap(a, b) => {
                let (va, vb) = (self.get(a.0), self.get(b.0));
                self.set(a.0, vb);
                self.set(b.0, va);
            }
            ref other => return Err(Error::NonPermutationGate(other.kind())),
        }
        Ok(())
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // MSB first, like a ket.
        f.write_str("|")?;
        for b in self.bits.iter().rev() {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        f.write_str(">")
    }
}

/// Applies `c` to a basis state. Composites are expanded on the fly.
pub fn perm_run(c: &Circuit, input: &BasisState) -> Result<BasisState> {
    if input.width() != c.width() {
        return Err(Error::WidthMismatch {
            left: c.width(),
            right: input.width(),
        });
    }
    let mut state = input.clone();
    c.try_for_each_primitive(|g| state.apply(g))?;
    Ok(state)
}

/// True if every primitive in `c` is a basis-state permutation.
pub fn is_permutation_circuit(c: &Circuit) -> bool {
    c.try_for_each_primitive(|g| {
        if g.kind().is_permutation() {
            Ok(())
        } else {
            Err(())
        }
    })
    .is_ok()
}

/// Dense amplitude vector over `2^width` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The basis state `|index>`.
    pub fn basis(width: usize, index: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Statevector { width, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidWidth {
                width: len,
                reason: "amplitude count must be a power of two",
            });
        }
        Ok(Statevector {
            width: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute amplitude difference against `other`.
    pub fn max_distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The index of the single basis state carrying amplitude magnitude
    /// `>= 1 - tol`, if there is one.
    pub fn as_basis(&self, tol: f64) -> Option<(u64, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .find(|(_, a)| a.norm() >= 1.0 - tol)
            .map(|(i, a)| (i as u64, *a))
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        match *g {
            Gate::X(q) => {
                let m = 1usize << q.0;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Cx(c, t) => {
                let (mc, mt) = (1usize << c.0, 1usize << t.0);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::H(q) => {
                let m = 1usize << q.0;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::T(q) | Gate::Tdg(q) => {
                let sign = if g.kind() == GateKind::T { 1.0 } else { -1.0 };
                let phase = Complex64::new(FRAC_1_SQRT_2, sign * FRAC_1_SQRT_2);
                let m = 1usize << q.0;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a *= phase;
                    }
                }
            }
            ref other => return Err(Error::MustLower(other.kind())),
        }
        Ok(())
    }
}

/// Runs a lowered circuit with the default qubit cap.
pub fn sv_run(c: &Circuit, input: &Statevector) -> Result<Statevector> {
    sv_run_with_cap(c, input, DEFAULT_SV_CAP)
}

/// Runs a circuit made only of `{X, CX, H, T, TDG}` on `input`.
pub fn sv_run_with_cap(c: &Circuit, input: &Statevector, cap: usize) -> Result<Statevector> {
    if c.width() > cap {
        return Err(Error::Capacity {
            width: c.width(),
            cap,
        });
    }
    if input.width() != c.width() {
        return Err(Error::WidthMismatch {
            left: c.width(),
            right: input.width(),
        });
    }
    let mut state = input.clone();
    for g in c.gates() {
        state.apply(g)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl EquivMode {
    /// 100 random basis inputs from a fixed seed.
    pub fn sampled() -> Self {
        EquivMode::Sampled {
            samples: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent {
        cases: usize,
    },
    /// First basis input on which the two circuits disagree.
    Counterexample {
        input: u64,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

enum Backend {
    Perm(Circuit),
    Sv(Circuit),
}

impl Backend {
    fn run(&self, width: usize, input: u64, cap: usize) -> Result<Statevector> {
        match self {
            Backend::Perm(c) => {
                let out = perm_run(c, &BasisState::from_u64(width, input))?;
                Ok(Statevector::basis(width, out.to_u64()))
            }
            Backend::Sv(c) => sv_run_with_cap(c, &Statevector::basis(width, input), cap),
        }
    }
}

fn inputs(width: usize, mode: EquivMode, limit: usize) -> Result<Vec<u64>> {
    match mode {
        EquivMode::Exhaustive => {
            if width > limit {
                return Err(Error::EnumerationLimit { width, limit });
            }
            Ok((0..1u64 << width).collect())
        }
        EquivMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if width >= 64 {
                u64::MAX
            } else {
                (1u64 << width) - 1
            };
            Ok((0..samples).map(|_| rng.gen::<u64>() & mask).collect())
        }
    }
}

/// Compares two circuits on basis inputs.
///
/// When both are permutation circuits the comparison is bit-exact on
/// [`perm_run`] outputs. Otherwise each side is lowered; a permutation side
/// still runs on [`perm_run`] and is embedded as a basis vector, the other
/// runs on [`sv_run`], and amplitudes must agree within
/// [`AMPLITUDE_TOLERANCE`].
pub fn assert_equiv(a: &Circuit, b: &Circuit, mode: EquivMode) -> Result<Equivalence> {
    assert_equiv_with_cap(a, b, mode, DEFAULT_SV_CAP)
}

pub fn assert_equiv_with_cap(
    a: &Circuit,
    b: &Circuit,
    mode: EquivMode,
    cap: usize,
) -> Result<Equivalence> {
    let width = a.width();
    if b.width() != width {
        return Err(Error::WidthMismatch {
            left: width,
            right: b.width(),
        });
    }
    if is_permutation_circuit(a) && is_permutation_circuit(b) {
        let cases = inputs(width, mode, PERM_EXHAUSTIVE_LIMIT)?;
        for &input in &cases {
            let s = BasisState::from_u64(width, input);
            if perm_run(a, &s)? != perm_run(b, &s)? {
                return Ok(Equivalence::Counterexample { input });
            }
        }
        return Ok(Equivalence::Equivalent { cases: cases.len() });
    }

    if width > cap {
        return Err(Error::Capacity { width, cap });
    }
    let backend = |c: &Circuit| -> Result<Backend> {
        if is_permutation_circuit(c) {
            Ok(Backend::Perm(c.clone()))
        } else {
            Ok(Backend::Sv(lower_to_clifford_t(c)?))
        }
    };
    let (ba, bb) = (backend(a)?, backend(b)?);
    let cases = inputs(width, mode, SV_EXHAUSTIVE_LIMIT)?;
    for &input in &cases {
        let (sa, sb) = (ba.run(width, input, cap)?, bb.run(width, input, cap)?);
        if sa.max_distance(&sb) > AMPLITUDE_TOLERANCE {
            return Ok(Equivalence::Counterexample { input });
        }
    }
    Ok(Equivalence::Equivalent { cases: cases.len() })
}
