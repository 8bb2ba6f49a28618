use thiserror::Error;

/// Errors raised by the simulator and its supporting modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite phase value {0}")]
    NonFinitePhase(f64),

    #[error("phase {0} is outside [0, 1)")]
    PhaseOutOfRange(f64),

    #[error("phase vector must contain at least one oscillator")]
    EmptyPhaseVector,

    #[error("state value {x} is outside the inverse-map domain of the {curve} curve")]
    OutsideStateDomain { curve: &'static str, x: f64 },

    #[error("phase {theta} is outside the domain of the {curve} curve")]
    OutsideCurveDomain { curve: &'static str, theta: f64 },

    #[error("elapsed time {0} must be non-negative")]
    NegativeElapsed(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not strongly connected; synchronization guarantees do not apply")]
    NotStronglyConnected,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("oscillator {oscillator} crossed below phase 0 at t = {time}")]
    DownwardZeroCrossing { oscillator: usize, time: f64 },

    #[error("event queue produced time {event} before current time {now}")]
    EventOrder { now: f64, event: f64 },

    #[error("scenario parse error: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
