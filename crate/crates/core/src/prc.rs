//! Pulse responses of the supported synchronization algorithms.
//!
//! Two families share one output type, [`PulseResponse`]:
//!
//! * the delay-advance phase response curve with a refractory window, and
//! * state-map algorithms (Peskin, Mirollo-Strogatz, reachback firefly), which
//!   lift the phase into a concave state variable, add a fixed increment and
//!   map back.

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Desired phase change on receiving one pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseResponse {
    pub phi: f64,
    /// Fire immediately. Only state-map algorithms set this; `phi` is then unused.
    pub absorb: bool,
}

impl PulseResponse {
    fn shift(phi: f64) -> Self {
        PulseResponse { phi, absorb: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayAdvanceParams {
    refractory: f64,
}

impl DelayAdvanceParams {
    pub fn new(refractory: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&refractory) {
            return Err(Error::InvalidParameter(format!("refractory period {refractory} must lie in [0, 1)")));
        }
        Ok(DelayAdvanceParams { refractory })
    }

    pub fn refractory(&self) -> f64 {
        self.refractory
    }
}

/// Delay-advance response: pull towards the most recent firing, ignoring
/// pulses inside the refractory window `[0, D)`.
pub fn prc_delay_advance(theta: Phase, params: &DelayAdvanceParams) -> PulseResponse {
    let t = theta.value();
    if t < params.refractory {
        PulseResponse::shift(0.0)
    } else if t <= 0.5 {
        PulseResponse::shift(-t)
    } else {
        PulseResponse::shift(1.0 - t)
    }
}

/// Phase-to-state mapping used by a state-map algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateCurve {
    Peskin { gamma: f64 },
    MirolloStrogatz { b: f64 },
    Rfa,
}

impl StateCurve {
    pub fn name(&self) -> &'static str {
        match self {
            StateCurve::Peskin { .. } => "peskin",
            StateCurve::MirolloStrogatz { .. } => "mirollo_strogatz",
            StateCurve::Rfa => "rfa",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidParameter(format!("{what} = {v} must be finite and > 0")));
        match *self {
            StateCurve::Peskin { gamma } if !(gamma.is_finite() && gamma > 0.0) => bad("gamma", gamma),
            StateCurve::MirolloStrogatz { b } if !(b.is_finite() && b > 0.0) => bad("b", b),
            _ => Ok(()),
        }
    }

    /// State value at the firing phase, `f(1)`.
    pub fn firing_state(&self) -> f64 {
        match *self {
            StateCurve::Peskin { gamma } => {
                let a = -(-gamma).exp_m1();
                a * a
            }
            StateCurve::MirolloStrogatz { .. } => 1.0,
            StateCurve::Rfa => 0.0,
        }
    }

    /// `f(theta)` for `theta` in `[0, 1]` (`(0, 1]` for RFA).
    pub fn forward(&self, theta: f64) -> Result<f64> {
        let out_of_domain = || Error::OutsideCurveDomain { curve: self.name(), theta };
        if !(0.0..=1.0).contains(&theta) {
            return Err(out_of_domain());
        }
        Ok(match *self {
            StateCurve::Peskin { gamma } => (-(-gamma).exp_m1()) * (-(-gamma * theta).exp_m1()),
            StateCurve::MirolloStrogatz { b } => (b.exp_m1() * theta).ln_1p() / b,
            StateCurve::Rfa => {
                if theta == 0.0 {
                    return Err(out_of_domain());
                }
                theta.ln()
            }
        })
    }

    /// `g(x)`, the inverse of [`forward`](Self::forward), on the image of `[0, 1]`.
    pub fn inverse(&self, x: f64) -> Result<f64> {
        let out_of_domain = || Error::OutsideStateDomain { curve: self.name(), x };
        if x.is_nan() || x > self.firing_state() {
            return Err(out_of_domain());
        }
        match *self {
            StateCurve::Peskin { gamma } => {
                let a = -(-gamma).exp_m1();
                if x < 0.0 || x >= a {
                    return Err(out_of_domain());
                }
                // ln(a / (a - x)) = -ln(1 - x/a)
                Ok(-(-x / a).ln_1p() / gamma)
            }
            StateCurve::MirolloStrogatz { b } => {
                if x < 0.0 {
                    return Err(out_of_domain());
                }
                Ok((b * x).exp_m1() / b.exp_m1())
            }
            StateCurve::Rfa => Ok(x.exp()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMapParams {
    epsilon: f64,
    curve: StateCurve,
}

impl StateMapParams {
    pub fn new(epsilon: f64, curve: StateCurve) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be > 0")));
        }
        curve.validate()?;
        Ok(StateMapParams { epsilon, curve })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn curve(&self) -> StateCurve {
        self.curve
    }
}

pub fn state_forward(theta: f64, curve: &StateCurve) -> Result<f64> {
    curve.forward(theta)
}

pub fn state_inverse(x: f64, curve: &StateCurve) -> Result<Phase> {
    let theta = curve.inverse(x)?;
    // g(f(1)) lands on the threshold itself, which is not a phase
    Phase::new(theta).map_err(|_| Error::OutsideStateDomain { curve: curve.name(), x })
}

/// Increment the state variable by epsilon and map back, absorbing when the
/// new state reaches the firing state `f(1)`.
pub fn state_map_jump(theta: Phase, params: &StateMapParams) -> Result<PulseResponse> {
    let curve = params.curve;
    let x = curve.forward(theta.value())? + params.epsilon;
    if x >= curve.firing_state() {
        return Ok(PulseResponse { phi: 0.0, absorb: true });
    }
    let next = curve.inverse(x)?;
    Ok(PulseResponse::shift((next - theta.value()).max(0.0)))
}

/// Reachback accumulator: pulse-induced jumps are recorded during a cycle
/// and applied together when the oscillator fires.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RfaAccumulator {
    pending: f64,
}

impl RfaAccumulator {
    pub fn pending(&self) -> f64 {
        self.pending
    }

    /// Add the jump a pulse at `theta` would have caused. A pulse that would
    /// push the state past the firing state is recorded as the distance to
    /// the threshold, and phase 0 records nothing.
    pub fn record(self, theta: Phase, params: &StateMapParams) -> Result<Self> {
        if theta.value() == 0.0 {
            return Ok(self);
        }
        let resp = state_map_jump(theta, params)?;
        let phi = if resp.absorb { 1.0 - theta.value() } else { resp.phi };
        Ok(RfaAccumulator { pending: self.pending + phi })
    }

    /// Take the recorded total and reset.
    pub fn flush(self) -> (f64, Self) {
        (self.pending, RfaAccumulator::default())
    }
}

pub fn rfa_record(acc: RfaAccumulator, theta: Phase, params: &StateMapParams) -> Result<RfaAccumulator> {
    acc.record(theta, params)
}

pub fn rfa_flush(acc: RfaAccumulator) -> (f64, RfaAccumulator) {
    acc.flush()
}

/// A synchronization algorithm as seen by the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    DelayAdvance(DelayAdvanceParams),
    StateMap(StateMapParams),
}

impl Algorithm {
    /// State-map algorithms have no coupling parameter of their own.
    pub fn is_state_map(&self) -> bool {
        matches!(self, Algorithm::StateMap(_))
    }

    pub fn is_reachback(&self) -> bool {
        matches!(self, Algorithm::StateMap(p) if p.curve == StateCurve::Rfa)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::DelayAdvance(_) => "prc",
            Algorithm::StateMap(p) => p.curve.name(),
        }
    }
}
