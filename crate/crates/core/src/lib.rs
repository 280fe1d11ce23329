//! Reversible-circuit toolkit for the T-count optimised non-restoring integer
//! square root.
//!
//! The crate builds the arithmetic blocks (ancilla-free adder, subtractor,
//! controlled add/subtract, controlled adder) and the three-part square-root
//! circuit on a small gate-level IR, lowers them to Clifford+T, simulates them
//! on basis states or dense statevectors, and reports T-count, scheduled
//! T-depth and depth.
//!
//! ```
//! use qsqrt_core::{analysis, sqrt};
//!
//! let r = sqrt::isqrt(15, 6).unwrap();
//! assert_eq!((r.root, r.remainder), (3, 6));
//!
//! let c = sqrt::build_isqrt_circuit(6).unwrap();
//! assert_eq!(c.width(), 13);
//! assert_eq!(analysis::t_count(&c).unwrap(), 224);
//! ```

pub mod analysis;
pub mod arithmetic;
pub mod blocks;
pub mod circuit;
pub mod error;
pub mod export;
pub mod lowering;
pub mod sim;
pub mod sqrt;

pub use circuit::{Circuit, Composite, Gate, GateKind, QubitId, Violation, ViolationKind};
pub use error::{Error, Result};
