//! Simulation core for a universal, unambiguous Bell-pair concentration and
//! distillation protocol.
//!
//! Two parties share copies of an unknown two-qubit state. In one *core step*
//! each party applies the same local two-qubit unitary `U±` to the qubits of
//! two pairs, measures the second pair, and keeps the first pair only if both
//! measurements return `0`. Two iterations (four input pairs) turn almost any
//! entangled pure state into `|Φ+⟩` exactly; three iterations (eight pairs)
//! turn a slightly mixed state into `|Φ+⟩` with noise suppressed to second
//! order.
//!
//! Every closed-form map in [`step`] has a brute-force counterpart that
//! simulates the four-qubit system explicitly. The brute-force path is the
//! reference; closed forms are checked against it.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command-line front end live in the `bellforge` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod gates;
pub mod jacobi;
pub mod linalg;
pub mod protocol;
pub mod states;
pub mod step;

pub use error::{Error, Result};
pub use gates::{Sign, TwoQubitGate};
pub use linalg::{CMatrix, CVector, QubitOrder, C64};
pub use protocol::{IterationTrace, PerturbationSeries};
pub use states::{BellState, Density2Q, InputClass, NoiseKind, NoiseModel, PureState2Q};
pub use step::{Representation, StepOutcome, XStateElements};
