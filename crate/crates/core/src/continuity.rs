//! Turning a desired phase change into a continuous frequency adjustment.
//!
//! Instead of jumping by `psi`, an oscillator runs at a modified rate
//! `omega_i` for a while and then returns to its fundamental rate `omega0`.
//! The constant-frequency method fixes the rate offset and varies the
//! duration; the constant-time method fixes the duration and varies the
//! offset. The jump baseline is the limit of either.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContinuityMode {
    Jump,
    ConstantFrequency,
    ConstantTime,
}

impl ContinuityMode {
    pub const ALL: [ContinuityMode; 3] =
        [ContinuityMode::Jump, ContinuityMode::ConstantFrequency, ContinuityMode::ConstantTime];

    pub fn name(&self) -> &'static str {
        match self {
            ContinuityMode::Jump => "jump",
            ContinuityMode::ConstantFrequency => "constant_frequency",
            ContinuityMode::ConstantTime => "constant_time",
        }
    }
}

/// Rates are in cycles per second, durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityConfig {
    mode: ContinuityMode,
    omega_a_up: f64,
    omega_a_down: f64,
    tau: f64,
    omega0: f64,
}

impl ContinuityConfig {
    pub fn new(mode: ContinuityMode, omega_a_up: f64, omega_a_down: f64, tau: f64, omega0: f64) -> Result<Self> {
        for (name, v) in [("omega_a_up", omega_a_up), ("omega_a_down", omega_a_down), ("tau", tau), ("omega0", omega0)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and > 0")));
            }
        }
        Ok(ContinuityConfig { mode, omega_a_up, omega_a_down, tau, omega0 })
    }

    pub fn jump(omega0: f64) -> Result<Self> {
        Self::new(ContinuityMode::Jump, 1.0, 1.0, 1.0, omega0)
    }

    pub fn constant_frequency(omega_a: f64, omega0: f64) -> Result<Self> {
        Self::new(ContinuityMode::ConstantFrequency, omega_a, omega_a, 1.0, omega0)
    }

    pub fn constant_time(tau: f64, omega0: f64) -> Result<Self> {
        Self::new(ContinuityMode::ConstantTime, 1.0, 1.0, tau, omega0)
    }

    pub fn mode(&self) -> ContinuityMode {
        self.mode
    }
    pub fn omega_a_up(&self) -> f64 {
        self.omega_a_up
    }
    pub fn omega_a_down(&self) -> f64 {
        self.omega_a_down
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
}

/// An in-flight adjustment. `remaining` is measured from `started_at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustmentPlan {
    pub omega: f64,
    pub remaining: f64,
    pub psi_total: f64,
    pub started_at: f64,
}

impl AdjustmentPlan {
    pub fn null(omega0: f64, now: f64) -> Self {
        AdjustmentPlan { omega: omega0, remaining: 0.0, psi_total: 0.0, started_at: now }
    }

    pub fn is_active(&self) -> bool {
        self.remaining > 0.0
    }

    /// Rate in effect `dt` seconds after the plan started.
    pub fn rate_after(&self, dt: f64, omega0: f64) -> f64 {
        if dt < self.remaining {
            self.omega
        } else {
            omega0
        }
    }
}

pub fn plan(psi: f64, cfg: &ContinuityConfig, now: f64) -> AdjustmentPlan {
    let omega0 = cfg.omega0;
    if psi == 0.0 {
        return AdjustmentPlan::null(omega0, now);
    }
    let (omega, remaining) = match cfg.mode {
        ContinuityMode::Jump => (omega0, 0.0),
        ContinuityMode::ConstantFrequency => {
            let omega_a = if psi > 0.0 { cfg.omega_a_up } else { cfg.omega_a_down };
            (omega0 + omega_a.copysign(psi), psi.abs() / omega_a)
        }
        ContinuityMode::ConstantTime => (omega0 + psi / cfg.tau, cfg.tau),
    };
    AdjustmentPlan { omega, remaining, psi_total: psi, started_at: now }
}

/// Replace `old` after it has run for `elapsed` seconds.
///
/// Returns the new plan and the fraction of the old `psi` actually realized.
pub fn replan(
    old: &AdjustmentPlan,
    elapsed: f64,
    new_psi: f64,
    cfg: &ContinuityConfig,
    now: f64,
) -> Result<(AdjustmentPlan, f64)> {
    if elapsed < 0.0 || elapsed.is_nan() {
        return Err(Error::NegativeElapsed(elapsed));
    }
    let realized = if old.remaining > 0.0 { (elapsed / old.remaining).min(1.0) } else { 1.0 };
    Ok((plan(new_psi, cfg, now), realized))
}

/// Coupling strength actually realized by an adjustment that ran for `t0`
/// of its `tau_i` seconds. A zero-length (jump) adjustment realizes `alpha`.
pub fn effective_coupling(t0: f64, tau_i: f64, alpha: f64) -> f64 {
    if tau_i <= 0.0 {
        return alpha;
    }
    (t0 / tau_i).min(1.0) * alpha
}

/// Unwrapped phase `dt` seconds into `plan`, starting from `theta_start`.
pub fn phase_at(plan: &AdjustmentPlan, theta_start: f64, dt: f64, omega0: f64) -> f64 {
    let in_plan = dt.min(plan.remaining);
    let after = (dt - plan.remaining).max(0.0);
    theta_start + plan.omega * in_plan + omega0 * after
}

/// Log entry for one adjustment that ended, by completion or interruption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRecord {
    pub oscillator: usize,
    /// Time at which the adjustment ended.
    pub fire_time: f64,
    /// How long the adjustment ran.
    pub t0: f64,
    /// Planned duration (zero for jumps).
    pub tau_i: f64,
    /// Coupling strength the adjustment was planned with.
    pub alpha: f64,
    pub alpha_effective: f64,
}
