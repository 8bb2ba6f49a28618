//! Built-in scenarios: the delay-advance curve on all-to-all and ring
//! networks (with and without refractory period) and the three state-map
//! algorithms, each under jump, constant-frequency and constant-time
//! adjustment.
//!
//! Initial phases are drawn from fixed seeds, so every output is reproducible.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::continuity::{ContinuityConfig, ContinuityMode};
use crate::engine::{InitialPhases, SimConfig};
use crate::error::Result;
use crate::output::{write_run, RunOutcome};
use crate::prc::{Algorithm, DelayAdvanceParams, StateCurve, StateMapParams};
use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    AllToAll,
    Ring,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureScenario {
    pub name: &'static str,
    pub n: usize,
    pub topology: Topology,
    pub algorithm: Algorithm,
    pub alpha: f64,
    /// Constant-frequency rate offset, as a multiple of the fundamental rate.
    pub omega_a: f64,
    /// Constant-time adjustment duration in seconds.
    pub tau: f64,
    pub horizon: f64,
    pub sync_tol: f64,
    pub seed: u64,
    pub arc_length: f64,
}

pub const OMEGA0: f64 = 1.0;

fn delay_advance(d: f64) -> Algorithm {
    Algorithm::DelayAdvance(DelayAdvanceParams::new(d).expect("valid refractory period"))
}

fn state_map(curve: StateCurve) -> Algorithm {
    Algorithm::StateMap(StateMapParams::new(0.002, curve).expect("valid state-map parameters"))
}

pub fn builtin_scenarios() -> Vec<FigureScenario> {
    let prc = |name, topology, d, horizon| FigureScenario {
        name,
        n: 6,
        topology,
        algorithm: delay_advance(d),
        alpha: 0.5,
        omega_a: 0.3,
        tau: 0.3,
        horizon,
        sync_tol: 1e-6,
        seed: 4,
        arc_length: 0.45,
    };
    let sm = |name, curve, omega_a, tau| FigureScenario {
        name,
        n: 6,
        topology: Topology::AllToAll,
        algorithm: state_map(curve),
        alpha: 1.0,
        omega_a,
        tau,
        horizon: 200.0,
        sync_tol: 1e-4,
        seed: 9,
        arc_length: 0.45,
    };
    vec![
        prc("prc_all_to_all", Topology::AllToAll, 0.0, 60.0),
        prc("prc_refractory", Topology::AllToAll, 0.5, 60.0),
        prc("prc_ring", Topology::Ring, 0.0, 120.0),
        sm("peskin", StateCurve::Peskin { gamma: 3.0 }, 0.3, 0.1),
        sm("mirollo_strogatz", StateCurve::MirolloStrogatz { b: 5.0 }, 0.3, 0.1),
        sm("rfa", StateCurve::Rfa, 0.007, 1.1),
    ]
}

pub fn scenario(name: &str) -> Option<FigureScenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

impl FigureScenario {
    pub fn graph(&self) -> Graph {
        match self.topology {
            Topology::AllToAll => Graph::all_to_all(self.n),
            Topology::Ring => Graph::ring(self.n),
        }
        .expect("built-in topology is valid")
    }

    pub fn continuity(&self, mode: ContinuityMode) -> ContinuityConfig {
        ContinuityConfig::new(mode, self.omega_a * OMEGA0, self.omega_a * OMEGA0, self.tau, OMEGA0)
            .expect("built-in continuity parameters are valid")
    }

    pub fn config(&self, mode: ContinuityMode) -> SimConfig {
        self.config_with_seed(mode, self.seed)
    }

    pub fn config_with_seed(&self, mode: ContinuityMode, seed: u64) -> SimConfig {
        let mut cfg = SimConfig::new(
            self.graph(),
            self.algorithm,
            self.alpha,
            self.continuity(mode),
            InitialPhases::RandomArc { seed, arc_length: self.arc_length, arc_offset: 0.0 },
        );
        cfg.horizon = self.horizon;
        cfg
    }
}

/// Run every built-in scenario in every mode, writing one output set per
/// pair under `out_dir/<scenario>/<mode>/`.
pub fn reproduce_figures(out_dir: &Path) -> Result<Vec<(PathBuf, RunOutcome)>> {
    let jobs: Vec<(FigureScenario, ContinuityMode)> = builtin_scenarios()
        .into_iter()
        .flat_map(|s| ContinuityMode::ALL.into_iter().map(move |m| (s.clone(), m)))
        .collect();
    jobs.par_iter()
        .map(|(s, mode)| {
            let dir = out_dir.join(s.name).join(mode.name());
            let label = format!("{} ({})", s.name, mode.name());
            let outcome = write_run(&s.config(*mode), &dir, &label, s.sync_tol, 1.0 / OMEGA0)?;
            Ok((dir, outcome))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_scenarios_with_caption_parameters() {
        let all = builtin_scenarios();
        assert_eq!(all.len(), 6);
        let rfa = scenario("rfa").unwrap();
        assert_eq!((rfa.omega_a, rfa.tau), (0.007, 1.1));
        let c = rfa.continuity(ContinuityMode::ConstantFrequency);
        assert_eq!(c.omega_a_up(), 0.007);
        for name in ["peskin", "mirollo_strogatz"] {
            let s = scenario(name).unwrap();
            assert_eq!((s.omega_a, s.tau, s.alpha), (0.3, 0.1, 1.0));
        }
        for name in ["prc_all_to_all", "prc_refractory", "prc_ring"] {
            let s = scenario(name).unwrap();
            assert_eq!((s.n, s.omega_a, s.tau, s.alpha), (6, 0.3, 0.3, 0.5));
            assert!(s.arc_length < 0.5);
        }
        assert_eq!(scenario("prc_ring").unwrap().graph().edge_count(), 12);
        assert!(scenario("nope").is_none());
    }

    #[test]
    fn configs_validate() {
        for s in builtin_scenarios() {
            for mode in ContinuityMode::ALL {
                s.config(mode).validate().unwrap();
            }
        }
    }
}
