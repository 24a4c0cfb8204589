//! Simulation library for a dual-function triangle-LFM / V-LFM waveform used
//! for both inter-satellite communications and space-debris radar.
//!
//! Bits map onto chirp symbols (`1` → triangle, `0` → V). The radar side
//! dechirps the debris echo per chirp half and estimates both beat
//! frequencies with root-MUSIC; their sum and difference separate velocity
//! from range. The communications side decides between the two symbol
//! shapes with a two-branch dechirp-and-integrate receiver.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambiguity;
pub mod channel;
pub mod comms_rx;
pub mod config;
pub mod error;
pub mod harness;
pub mod radar_rx;
pub mod rng;
pub mod signal;
pub mod waveform;

pub use error::{Error, Result};
pub use signal::ComplexSignal;
pub use waveform::{ChirpDirection, SymbolShape, WaveformParams, SPEED_OF_LIGHT};
