//! TOML scenario files.
//!
//! ```toml
//! [network]
//! n = 6
//! topology = "all_to_all"   # all_to_all | ring | edges
//!
//! [algorithm]
//! kind = "prc"              # prc | peskin | mirollo_strogatz | rfa
//! alpha = 0.5
//!
//! [continuity]
//! mode = "constant_frequency"
//! omega_a = 0.3             # multiple of omega0
//! ```
//!
//! Range errors are reported with the line and column of the offending
//! value; errors that involve several keys point at their table.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::continuity::{ContinuityConfig, ContinuityMode};
use crate::engine::{AlphaSchedule, InitialPhases, SimConfig, SyncCriterion, TheoremCheck};
use crate::error::{Error, Result};
use crate::metrics::DEFAULT_SYNC_TOL;
use crate::prc::{Algorithm, DelayAdvanceParams, StateCurve, StateMapParams};
use crate::topology::{self, Graph};

/// Arc length used when `[initial]` gives neither phases nor an arc.
pub const DEFAULT_INITIAL_ARC: f64 = 0.45;

macro_rules! checked_f64 {
    ($name:ident, $ok:expr, $what:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
        #[serde(try_from = "f64")]
        struct $name(f64);

        impl TryFrom<f64> for $name {
            type Error = String;
            fn try_from(v: f64) -> std::result::Result<Self, String> {
                let ok: fn(f64) -> bool = $ok;
                if ok(v) {
                    Ok($name(v))
                } else {
                    Err(format!("{v} {}", $what))
                }
            }
        }
    };
}

checked_f64!(Coupling, |v| v > 0.0 && v <= 1.0, "is not a coupling strength in (0, 1]");
checked_f64!(Positive, |v| v.is_finite() && v > 0.0, "must be finite and > 0");
checked_f64!(NonNegative, |v| v.is_finite() && v >= 0.0, "must be finite and >= 0");
checked_f64!(UnitInterval, |v| (0.0..1.0).contains(&v), "must lie in [0, 1)");
checked_f64!(Refractory, |v| (0.0..=1.0).contains(&v), "is not a refractory period in [0, 1]");
checked_f64!(Finite, |v| v.is_finite(), "must be finite");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TopologyKind {
    AllToAll,
    Ring,
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AlgorithmKind {
    Prc,
    Peskin,
    MirolloStrogatz,
    Rfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModeKind {
    Jump,
    ConstantFrequency,
    ConstantTime,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    network: Spanned<NetworkSection>,
    algorithm: Spanned<AlgorithmSection>,
    continuity: Option<Spanned<ContinuitySection>>,
    initial: Option<Spanned<InitialSection>>,
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkSection {
    n: usize,
    topology: TopologyKind,
    edges: Option<Vec<(usize, usize)>>,
    edge_file: Option<PathBuf>,
    #[serde(default)]
    allow_disconnected: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgorithmSection {
    kind: AlgorithmKind,
    alpha: Option<Coupling>,
    refractory: Option<Refractory>,
    epsilon: Option<Positive>,
    gamma: Option<Positive>,
    b: Option<Positive>,
    /// Per-reception coupling drawn uniformly from `[lo, hi]`.
    alpha_random: Option<(Coupling, Coupling)>,
    alpha_seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuitySection {
    mode: ModeKind,
    omega0: Option<Positive>,
    omega_a: Option<Positive>,
    omega_a_up: Option<Positive>,
    omega_a_down: Option<Positive>,
    tau: Option<Positive>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSection {
    phases: Option<Vec<UnitInterval>>,
    seed: Option<u64>,
    arc: Option<UnitInterval>,
    offset: Option<Finite>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    horizon: Option<NonNegative>,
    sample_dt: Option<Positive>,
    lambda_bar: Option<Positive>,
    #[serde(default)]
    stop_on_sync: bool,
    sync_tol: Option<Positive>,
    sync_hold: Option<NonNegative>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<PathBuf>,
    label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputOptions {
    pub dir: Option<PathBuf>,
    pub label: String,
}

/// A parsed scenario: simulation settings plus reporting and output options.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sim: SimConfig,
    pub sync_tol: f64,
    pub sync_hold: f64,
    pub output: OutputOptions,
}

impl Scenario {
    /// Replace the seed of random initial phases and of a random coupling schedule.
    pub fn override_seed(&mut self, seed: u64) {
        if let InitialPhases::RandomArc { seed: s, .. } = &mut self.sim.initial {
            *s = seed;
        }
        if let AlphaSchedule::Random { seed: s, .. } = &mut self.sim.alpha_schedule {
            *s = seed;
        }
    }
}

pub fn parse_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text, path.parent())
}

/// Parse scenario text. Relative edge-file paths resolve against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: Option<&Path>) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text)?;
    let at = |span: Range<usize>, msg: String| {
        let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
        Error::InvalidConfig(format!("line {line}: {msg}"))
    };

    let net_span = file.network.span();
    let net = file.network.into_inner();
    let graph = build_graph(&net, base_dir).map_err(|e| at(net_span.clone(), e.to_string()))?;

    let alg_span = file.algorithm.span();
    let alg = file.algorithm.into_inner();
    let (algorithm, alpha, alpha_schedule) = build_algorithm(&alg).map_err(|e| at(alg_span.clone(), e))?;

    let omega0;
    let continuity = match file.continuity {
        None => {
            omega0 = 1.0;
            ContinuityConfig::jump(omega0)?
        }
        Some(c) => {
            let span = c.span();
            let c = c.into_inner();
            omega0 = c.omega0.map_or(1.0, |v| v.0);
            build_continuity(&c, omega0).map_err(|e| at(span, e))?
        }
    };

    let (initial, init_span) = match file.initial {
        None => (build_initial(&InitialSection::default(), graph.n()), 0..0),
        Some(s) => {
            let span = s.span();
            (build_initial(s.get_ref(), graph.n()), span)
        }
    };
    let initial = initial.map_err(|e| at(init_span.clone(), e))?;

    let run = file.run;
    let sync_tol = run.sync_tol.map_or(DEFAULT_SYNC_TOL, |v| v.0);
    let sync_hold = run.sync_hold.map_or(1.0 / omega0, |v| v.0);
    let mut sim = SimConfig::new(graph, algorithm, alpha, continuity, initial);
    sim.alpha_schedule = alpha_schedule;
    sim.allow_disconnected = net.allow_disconnected;
    if let Some(h) = run.horizon {
        sim.horizon = h.0;
    }
    if let Some(dt) = run.sample_dt {
        sim.sample_dt = dt.0;
    }
    sim.theorem_check = run.lambda_bar.map(|v| TheoremCheck { lambda_bar: v.0 });
    if run.stop_on_sync {
        sim.stop_on_sync = Some(SyncCriterion { tol: sync_tol, hold: sync_hold });
    }
    sim.validate().map_err(|e| match e {
        Error::NotStronglyConnected => at(net_span, e.to_string()),
        Error::InvalidConfig(msg) if msg.contains("initial") => at(init_span, msg),
        Error::InvalidConfig(msg) => Error::InvalidConfig(msg),
        other => other,
    })?;

    let label = file
        .output
        .label
        .unwrap_or_else(|| format!("{} ({}), N = {}", sim.algorithm.name(), sim.continuity.mode().name(), sim.n()));
    Ok(Scenario { sim, sync_tol, sync_hold, output: OutputOptions { dir: file.output.dir, label } })
}

fn build_graph(net: &NetworkSection, base_dir: Option<&Path>) -> Result<Graph> {
    match net.topology {
        TopologyKind::AllToAll | TopologyKind::Ring if net.edges.is_some() || net.edge_file.is_some() => {
            Err(Error::InvalidGraph("`edges` and `edge_file` require topology = \"edges\"".into()))
        }
        TopologyKind::AllToAll => Graph::all_to_all(net.n),
        TopologyKind::Ring => Graph::ring(net.n),
        TopologyKind::Edges => match (&net.edges, &net.edge_file) {
            (Some(edges), None) => {
                if edges.iter().any(|&(a, b)| a == 0 || b == 0) {
                    return Err(Error::InvalidGraph("edge indices are 1-based".into()));
                }
                let zero_based: Vec<_> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
                Graph::from_edges(net.n, &zero_based)
            }
            (None, Some(file)) => {
                let path = match base_dir {
                    Some(dir) if file.is_relative() => dir.join(file),
                    _ => file.clone(),
                };
                topology::read_edge_list(net.n, &path)
            }
            _ => Err(Error::InvalidGraph("topology = \"edges\" needs exactly one of `edges` or `edge_file`".into())),
        },
    }
}

fn build_algorithm(alg: &AlgorithmSection) -> std::result::Result<(Algorithm, f64, AlphaSchedule), String> {
    let unused = |name: &str, present: bool| {
        if present {
            Err(format!("`{name}` does not apply to algorithm {:?}", alg.kind))
        } else {
            Ok(())
        }
    };
    let state_map = |curve: StateCurve| -> std::result::Result<Algorithm, String> {
        let eps = alg.epsilon.ok_or("state-map algorithms need `epsilon`")?.0;
        StateMapParams::new(eps, curve).map(Algorithm::StateMap).map_err(|e| e.to_string())
    };
    let algorithm = match alg.kind {
        AlgorithmKind::Prc => {
            unused("epsilon", alg.epsilon.is_some())?;
            unused("gamma", alg.gamma.is_some())?;
            unused("b", alg.b.is_some())?;
            let d = alg.refractory.map_or(0.0, |v| v.0);
            Algorithm::DelayAdvance(DelayAdvanceParams::new(d).map_err(|e| e.to_string())?)
        }
        AlgorithmKind::Peskin => {
            unused("refractory", alg.refractory.is_some())?;
            unused("b", alg.b.is_some())?;
            state_map(StateCurve::Peskin { gamma: alg.gamma.ok_or("peskin needs `gamma`")?.0 })?
        }
        AlgorithmKind::MirolloStrogatz => {
            unused("refractory", alg.refractory.is_some())?;
            unused("gamma", alg.gamma.is_some())?;
            state_map(StateCurve::MirolloStrogatz { b: alg.b.ok_or("mirollo_strogatz needs `b`")?.0 })?
        }
        AlgorithmKind::Rfa => {
            unused("refractory", alg.refractory.is_some())?;
            unused("gamma", alg.gamma.is_some())?;
            unused("b", alg.b.is_some())?;
            state_map(StateCurve::Rfa)?
        }
    };
    let (alpha, schedule) = match (alg.alpha, alg.alpha_random) {
        (_, None) => {
            unused("alpha_seed", alg.alpha_seed.is_some())?;
            let alpha = match alg.alpha {
                Some(a) => a.0,
                None if algorithm.is_state_map() => 1.0,
                None => return Err("`alpha` is required".into()),
            };
            (alpha, AlphaSchedule::Constant)
        }
        (None, Some((lo, hi))) => {
            (hi.0, AlphaSchedule::Random { lo: lo.0, hi: hi.0, seed: alg.alpha_seed.unwrap_or(0) })
        }
        (Some(_), Some(_)) => return Err("give either `alpha` or `alpha_random`, not both".into()),
    };
    Ok((algorithm, alpha, schedule))
}

fn build_continuity(c: &ContinuitySection, omega0: f64) -> std::result::Result<ContinuityConfig, String> {
    let mode = match c.mode {
        ModeKind::Jump => ContinuityMode::Jump,
        ModeKind::ConstantFrequency => ContinuityMode::ConstantFrequency,
        ModeKind::ConstantTime => ContinuityMode::ConstantTime,
    };
    let (up, down) = match (c.omega_a, c.omega_a_up, c.omega_a_down) {
        (Some(a), None, None) => (Some(a.0), Some(a.0)),
        (None, up, down) => (up.map(|v| v.0), down.map(|v| v.0)),
        _ => return Err("give either `omega_a` or `omega_a_up`/`omega_a_down`, not both".into()),
    };
    let (up, down, tau) = match mode {
        ContinuityMode::Jump => (1.0, 1.0, 1.0),
        ContinuityMode::ConstantFrequency => {
            let (Some(up), Some(down)) = (up, down) else {
                return Err("constant_frequency needs `omega_a` (or both `omega_a_up` and `omega_a_down`)".into());
            };
            (up, down, 1.0)
        }
        ContinuityMode::ConstantTime => (1.0, 1.0, c.tau.ok_or("constant_time needs `tau`")?.0),
    };
    ContinuityConfig::new(mode, up * omega0, down * omega0, tau, omega0).map_err(|e| e.to_string())
}

fn build_initial(s: &InitialSection, n: usize) -> std::result::Result<InitialPhases, String> {
    match &s.phases {
        Some(phases) => {
            if s.seed.is_some() || s.arc.is_some() || s.offset.is_some() {
                return Err("explicit `phases` exclude `seed`, `arc` and `offset`".into());
            }
            if phases.len() != n {
                return Err(format!("{} initial phases given for {n} oscillators", phases.len()));
            }
            Ok(InitialPhases::Explicit(phases.iter().map(|p| p.0).collect()))
        }
        None => Ok(InitialPhases::RandomArc {
            seed: s.seed.unwrap_or(0),
            arc_length: s.arc.map_or(DEFAULT_INITIAL_ARC, |v| v.0),
            arc_offset: s.offset.map_or(0.0, |v| v.0),
        }),
    }
}

/// Set `section.key = value` in scenario text, where `value` is a TOML
/// literal. Used to instantiate sweep templates.
pub fn override_key(text: &str, dotted: &str, value: &str) -> Result<String> {
    let mut doc: toml::Table = toml::from_str(text)?;
    let (section, key) = dotted
        .split_once('.')
        .ok_or_else(|| Error::InvalidConfig(format!("parameter `{dotted}` must be written as section.key")))?;
    let parsed: toml::Table = toml::from_str(&format!("v = {value}"))
        .or_else(|_| toml::from_str(&format!("v = {value:?}")))
        .map_err(|_| Error::InvalidConfig(format!("cannot parse value `{value}` for `{dotted}`")))?;
    let table = doc
        .entry(section)
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .ok_or_else(|| Error::InvalidConfig(format!("`{section}` is not a table")))?;
    table.insert(key.to_string(), parsed["v"].clone());
    toml::to_string(&doc).map_err(|e| Error::InvalidConfig(e.to_string()))
}
