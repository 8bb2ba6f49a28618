//! Discrete-event simulation of pulse-coupled oscillator networks.
//!
//! Oscillators advance their phase on `[0, 1)` at a common fundamental rate,
//! fire at the threshold and perturb their neighbours. Besides the classic
//! instantaneous phase jump, received pulses can be realized continuously by
//! temporarily changing an oscillator's rate ([`continuity`]), which shows up
//! as a reduced, time-varying effective coupling strength.

pub mod config;
pub mod continuity;
pub mod engine;
pub mod error;
pub mod figures;
pub mod metrics;
pub mod output;
pub mod phase;
pub mod prc;
pub mod sweep;
pub mod topology;

pub use continuity::{ContinuityConfig, ContinuityMode};
pub use engine::{run, InitialPhases, SimConfig, Simulation, Trace};
pub use error::{Error, Result};
pub use phase::{Phase, PhaseVector};
pub use prc::Algorithm;
pub use topology::Graph;
