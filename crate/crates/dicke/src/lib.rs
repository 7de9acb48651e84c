//! Connectivity-aware synthesis of Dicke-state and symmetric-state preparation
//! circuits over 1-qubit gates and CNOTs, for complete, grid and path
//! topologies, together with a state-vector verifier and a light-cone
//! depth auditor.
//!
//! Qubit ordering is little-endian throughout: qubit `i` is bit `i` of the
//! basis index. An encoded register `reg` stores its paper position `s_j` at
//! `reg[j - 1]`, so the "rightmost" position of a bit string is `reg[0]`.

pub mod circuit;
pub mod encoding;
pub mod error;
pub mod primitives;
pub mod scalar;
pub mod synth;
pub mod unary;
pub mod util;
pub mod verify;

pub use circuit::{Circuit, ConnectivityGraph, DepthReport, Gate, Topology};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use synth::{GridPartition, SynthesisPlan};
pub use verify::{LightConeGraph, ReachableSets, StateVector};

pub type Circuit64 = Circuit<f64>;
pub type Circuit32 = Circuit<f32>;
pub type Gate64 = Gate<f64>;
pub type Gate32 = Gate<f32>;
pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
