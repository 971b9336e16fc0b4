//! Chemical reaction networks as signal processors.
//!
//! Networks are described in a small text format ([`dsl`]) or JSON
//! ([`json`]), compiled to mass-action ODEs and integrated ([`kinetics`]).
//! On top of that sit synthesizers for filters ([`filters`]), oscillators and
//! AM modems ([`modem`]), and frequency-domain measurements ([`analysis`]).

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dsl;
pub mod exec;
pub mod filters;
pub mod json;
pub mod kinetics;
pub mod modem;
pub mod network;

pub use dsl::{parse_network, serialize_network, ParseError};
pub use exec::Execution;
pub use json::{network_from_json, network_to_json};
pub use kinetics::{compile_odes, simulate, OdeSystem, SimError, SimOptions, Tolerances, Trace};
pub use network::{compose, DualRailSignal, Network, NetworkError, Reaction, Species};
