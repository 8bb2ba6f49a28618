//! Deterministic discrete-event simulation of a pulse-coupled network.
//!
//! Phases evolve piecewise-linearly, so every event time (threshold
//! crossing, end of an adjustment, sample tick) is solved in closed form.
//! Each oscillator is stored as an anchor `(time, phase)` plus the
//! adjustment plan started at that anchor; its phase at any later time is
//! evaluated on demand.
//!
//! Events closer together than [`TIME_TOL`] are handled as one instant.
//! Within an instant, firings are processed before pulse receptions, and
//! ties are broken by ascending oscillator index. Oscillators that fire in
//! an instant ignore every pulse delivered during that same instant, so a
//! group that fires together stays together.
//!
//! An oscillator that reaches the threshold in the middle of a continuous
//! adjustment resets to 0 and finishes the adjustment from there. Only a
//! pulse-driven change (a new plan or an absorption) replaces a plan.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuity::{
    effective_coupling, phase_at, replan, AdjustmentPlan, ContinuityConfig, ContinuityMode, CouplingRecord,
};
use crate::error::{Error, Result};
use crate::phase::{containing_arc, Phase, PhaseVector};
use crate::prc::{prc_delay_advance, state_map_jump, Algorithm, RfaAccumulator};
use crate::topology::Graph;

/// Events within this many seconds of each other share one instant.
pub const TIME_TOL: f64 = 1e-12;

/// Per-reception source of the coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSchedule {
    Constant,
    /// Drawn uniformly from `[lo, hi]` at every pulse reception.
    Random {
        lo: f64,
        hi: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPhases {
    Explicit(Vec<f64>),
    /// Uniform draws in `[arc_offset, arc_offset + arc_length)`, wrapped.
    RandomArc {
        seed: u64,
        arc_length: f64,
        arc_offset: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncCriterion {
    pub tol: f64,
    pub hold: f64,
}

/// Preconditions of the containing-arc convergence guarantee, enforced at
/// initialization: delay-advance curve, initial arc below `lambda_bar`,
/// `lambda_bar <= 1/2`, and refractory period at most `1 - lambda_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremCheck {
    pub lambda_bar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub graph: Graph,
    pub algorithm: Algorithm,
    /// Nominal coupling strength, in `(0, 1]`.
    pub alpha: f64,
    pub continuity: ContinuityConfig,
    pub initial: InitialPhases,
    pub horizon: f64,
    pub sample_dt: f64,
    pub alpha_schedule: AlphaSchedule,
    pub theorem_check: Option<TheoremCheck>,
    pub allow_disconnected: bool,
    /// Stop early once the containing arc has stayed below `tol` for `hold` seconds.
    pub stop_on_sync: Option<SyncCriterion>,
}

impl SimConfig {
    /// A config with a 60 s horizon, 10 ms sampling and constant coupling.
    pub fn new(
        graph: Graph,
        algorithm: Algorithm,
        alpha: f64,
        continuity: ContinuityConfig,
        initial: InitialPhases,
    ) -> Self {
        SimConfig {
            graph,
            algorithm,
            alpha,
            continuity,
            initial,
            horizon: 60.0,
            sample_dt: 0.01,
            alpha_schedule: AlphaSchedule::Constant,
            theorem_check: None,
            allow_disconnected: false,
            stop_on_sync: None,
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn omega0(&self) -> f64 {
        self.continuity.omega0()
    }

    pub fn initial_phases(&self) -> Result<PhaseVector> {
        match &self.initial {
            InitialPhases::Explicit(v) => {
                if v.len() != self.n() {
                    return Err(Error::InvalidConfig(format!(
                        "{} initial phases given for {} oscillators",
                        v.len(),
                        self.n()
                    )));
                }
                PhaseVector::from_values(v)
            }
            &InitialPhases::RandomArc { seed, arc_length, arc_offset } => {
                if !(0.0..1.0).contains(&arc_length) || !arc_offset.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "initial arc length {arc_length} must lie in [0, 1) with a finite offset"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let phases = (0..self.n())
                    .map(|_| crate::phase::wrap_phase(arc_offset + arc_length * rng.random::<f64>()))
                    .collect::<Result<Vec<_>>>()?;
                PhaseVector::new(phases)
            }
        }
    }

    /// Bound on the initial containing arc: the configured arc length for
    /// random starts, the measured arc for explicit ones.
    pub fn initial_arc_bound(&self) -> Result<f64> {
        match self.initial {
            InitialPhases::RandomArc { arc_length, .. } => Ok(arc_length),
            InitialPhases::Explicit(_) => Ok(containing_arc(&self.initial_phases()?)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("coupling strength alpha = {} must lie in (0, 1]", self.alpha));
        }
        if self.algorithm.is_state_map() {
            if self.alpha != 1.0 {
                return bad(format!(
                    "{} has no coupling parameter; alpha must be 1, got {}",
                    self.algorithm.name(),
                    self.alpha
                ));
            }
            if self.alpha_schedule != AlphaSchedule::Constant {
                return bad(format!("{} does not accept a coupling schedule", self.algorithm.name()));
            }
        }
        if let AlphaSchedule::Random { lo, hi, .. } = self.alpha_schedule {
            if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
                return bad(format!("random coupling range [{lo}, {hi}] must satisfy 0 < lo <= hi <= 1"));
            }
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return bad(format!("horizon {} must be finite and >= 0", self.horizon));
        }
        if !(self.sample_dt.is_finite() && self.sample_dt > 0.0) {
            return bad(format!("sample_dt {} must be > 0", self.sample_dt));
        }
        if let Some(c) = self.stop_on_sync {
            if !(c.tol > 0.0 && c.hold >= 0.0) {
                return bad(format!("sync tolerance {} must be > 0 and hold {} >= 0", c.tol, c.hold));
            }
        }
        if !self.allow_disconnected && !self.graph.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let initial = self.initial_phases()?;
        if let Some(check) = self.theorem_check {
            let Algorithm::DelayAdvance(params) = self.algorithm else {
                return bad("theorem check applies only to the delay-advance curve".into());
            };
            let lb = check.lambda_bar;
            if !(lb > 0.0 && lb <= 0.5) {
                return bad(format!("lambda_bar = {lb} must lie in (0, 1/2]"));
            }
            let arc = self.initial_arc_bound()?.max(containing_arc(&initial));
            if arc >= lb {
                return bad(format!("initial containing arc {arc} must be below lambda_bar = {lb}"));
            }
            if params.refractory() > 1.0 - lb {
                return bad(format!("refractory period {} exceeds 1 - lambda_bar = {}", params.refractory(), 1.0 - lb));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub phases: PhaseVector,
    pub omegas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Firing {
    pub time: f64,
    pub oscillator: usize,
}

/// Phases right after all firings of one instant were processed.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub phases: PhaseVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub n: usize,
    pub omega0: f64,
    pub alpha: f64,
    pub samples: Vec<Sample>,
    pub firings: Vec<Firing>,
    pub snapshots: Vec<Snapshot>,
    pub couplings: Vec<CouplingRecord>,
    pub pulses_delivered: u64,
    /// Last simulated instant: the horizon, or the early-stop time.
    pub end_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorState {
    pub index: usize,
    pub anchor_time: f64,
    pub anchor_theta: f64,
    pub plan: AdjustmentPlan,
    /// Coupling strength the current plan was computed with.
    pub plan_alpha: f64,
    pub rfa: RfaAccumulator,
    pub last_fire_time: Option<f64>,
    generation: u64,
}

impl OscillatorState {
    fn new(index: usize, theta: f64, omega0: f64) -> Self {
        OscillatorState {
            index,
            anchor_time: 0.0,
            anchor_theta: theta,
            plan: AdjustmentPlan::null(omega0, 0.0),
            plan_alpha: 0.0,
            rfa: RfaAccumulator::default(),
            last_fire_time: None,
            generation: 0,
        }
    }

    /// Unwrapped phase at absolute time `t`.
    pub fn theta(&self, t: f64, omega0: f64) -> f64 {
        phase_at(&self.plan, self.anchor_theta, t - self.anchor_time, omega0)
    }

    pub fn omega(&self, t: f64, omega0: f64) -> f64 {
        self.plan.rate_after(t - self.anchor_time, omega0)
    }
}

/// Seconds from the anchor until the phase reaches 1.
///
/// Errors if the plan would carry the phase below 0.
pub fn time_to_threshold(osc: &OscillatorState, omega0: f64) -> Result<Option<f64>> {
    let theta = osc.anchor_theta;
    let plan = &osc.plan;
    let mut start = theta;
    let mut offset = 0.0;
    if plan.remaining > 0.0 {
        let end = theta + plan.omega * plan.remaining;
        if plan.omega > 0.0 && end >= 1.0 {
            return Ok(Some((1.0 - theta) / plan.omega));
        }
        if end < -TIME_TOL {
            return Err(Error::DownwardZeroCrossing {
                oscillator: osc.index,
                time: osc.anchor_time - theta / plan.omega,
            });
        }
        start = end.max(0.0);
        offset = plan.remaining;
    }
    if omega0 <= 0.0 {
        return Ok(None);
    }
    Ok(Some(offset + (1.0 - start) / omega0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Fire(usize),
    PlanExpiry(usize),
    Sample,
}

impl EventKind {
    fn rank(&self) -> (u8, usize) {
        match *self {
            EventKind::Fire(i) => (0, i),
            EventKind::PlanExpiry(i) => (1, i),
            EventKind::Sample => (2, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    event: Event,
    generation: u64,
    seq: u64,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.event
            .time
            .total_cmp(&other.event.time)
            .then_with(|| self.event.kind.rank().cmp(&other.event.kind.rank()))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

/// What happened during one call to [`Simulation::step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    /// Oscillators that fired, in processing order (cascades last).
    pub fired: Vec<usize>,
    pub pulses_delivered: u64,
    pub sampled: bool,
}

#[derive(Debug, Clone, Copy)]
struct SyncTracker {
    criterion: SyncCriterion,
    below_since: Option<f64>,
}

impl SyncTracker {
    fn observe(&mut self, t: f64, lambda: f64) -> bool {
        if lambda < self.criterion.tol {
            let since = *self.below_since.get_or_insert(t);
            t - since >= self.criterion.hold
        } else {
            self.below_since = None;
            false
        }
    }
}

pub struct Simulation {
    cfg: SimConfig,
    oscs: Vec<OscillatorState>,
    now: f64,
    queue: BinaryHeap<Reverse<Scheduled>>,
    seq: u64,
    alpha_rng: Option<(ChaCha8Rng, f64, f64)>,
    next_sample: u64,
    trace: Trace,
    sync: Option<SyncTracker>,
    finished: bool,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let omega0 = cfg.omega0();
        let phases = cfg.initial_phases()?;
        let oscs = phases.iter().enumerate().map(|(i, p)| OscillatorState::new(i, p.value(), omega0)).collect();
        let alpha_rng = match cfg.alpha_schedule {
            AlphaSchedule::Constant => None,
            AlphaSchedule::Random { lo, hi, seed } => Some((ChaCha8Rng::seed_from_u64(seed), lo, hi)),
        };
        let trace = Trace {
            n: cfg.n(),
            omega0,
            alpha: cfg.alpha,
            samples: Vec::new(),
            firings: Vec::new(),
            snapshots: Vec::new(),
            couplings: Vec::new(),
            pulses_delivered: 0,
            end_time: 0.0,
        };
        let sync = cfg.stop_on_sync.map(|criterion| SyncTracker { criterion, below_since: None });
        let mut sim = Simulation {
            cfg,
            oscs,
            now: 0.0,
            queue: BinaryHeap::new(),
            seq: 0,
            alpha_rng,
            next_sample: 0,
            trace,
            sync,
            finished: false,
        };
        sim.push(Event { time: 0.0, kind: EventKind::Sample }, 0);
        for i in 0..sim.oscs.len() {
            sim.schedule_oscillator(i)?;
        }
        Ok(sim)
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn oscillators(&self) -> &[OscillatorState] {
        &self.oscs
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Current phases, all in `[0, 1)`.
    pub fn phases(&self) -> PhaseVector {
        self.phases_at(self.now)
    }

    pub fn into_trace(mut self) -> Trace {
        if !self.finished {
            self.trace.end_time = self.now;
        }
        self.trace
    }

    fn omega0(&self) -> f64 {
        self.cfg.continuity.omega0()
    }

    fn push(&mut self, event: Event, generation: u64) {
        self.seq += 1;
        self.queue.push(Reverse(Scheduled { event, generation, seq: self.seq }));
    }

    fn is_stale(&self, s: &Scheduled) -> bool {
        match s.event.kind {
            EventKind::Fire(i) | EventKind::PlanExpiry(i) => self.oscs[i].generation != s.generation,
            EventKind::Sample => false,
        }
    }

    fn schedule_oscillator(&mut self, i: usize) -> Result<()> {
        let osc = self.oscs[i];
        if let Some(dt) = time_to_threshold(&osc, self.omega0())? {
            self.push(Event { time: osc.anchor_time + dt, kind: EventKind::Fire(i) }, osc.generation);
        }
        if osc.plan.is_active() {
            let t = osc.plan.started_at + osc.plan.remaining;
            self.push(Event { time: t, kind: EventKind::PlanExpiry(i) }, osc.generation);
        }
        Ok(())
    }

    fn phase_of(&self, i: usize, t: f64) -> Phase {
        clamp_phase(self.oscs[i].theta(t, self.omega0()))
    }

    fn phases_at(&self, t: f64) -> PhaseVector {
        let phases = (0..self.oscs.len()).map(|i| self.phase_of(i, t)).collect();
        PhaseVector::new(phases).expect("network has at least one oscillator")
    }

    fn pop_valid(&mut self) -> Option<Scheduled> {
        while let Some(Reverse(s)) = self.queue.pop() {
            if !self.is_stale(&s) {
                return Some(s);
            }
        }
        None
    }

    /// Advance to the next instant and process every event in it.
    ///
    /// Returns `None` once the horizon is reached or the sync criterion stops the run.
    pub fn step(&mut self) -> Result<Option<StepRecord>> {
        if self.finished {
            return Ok(None);
        }
        let Some(head) = self.pop_valid() else {
            self.finish(self.cfg.horizon);
            return Ok(None);
        };
        if head.event.time > self.cfg.horizon + TIME_TOL {
            self.finish(self.cfg.horizon);
            return Ok(None);
        }
        if head.event.time < self.now - TIME_TOL {
            return Err(Error::EventOrder { now: self.now, event: head.event.time });
        }
        let t = head.event.time.max(self.now);
        let mut group = vec![head];
        while let Some(Reverse(next)) = self.queue.peek() {
            if next.event.time > t + TIME_TOL {
                break;
            }
            let next = self.queue.pop().expect("peeked").0;
            if !self.is_stale(&next) {
                group.push(next);
            }
        }
        self.now = t;

        let mut fires: Vec<usize> = group
            .iter()
            .filter_map(|s| match s.event.kind {
                EventKind::Fire(i) => Some(i),
                _ => None,
            })
            .collect();
        fires.sort_unstable();
        fires.dedup();
        let pulses_before = self.trace.pulses_delivered;
        let fired = if fires.is_empty() { Vec::new() } else { self.fire_batch(fires)? };

        for s in &group {
            if let EventKind::PlanExpiry(i) = s.event.kind {
                if !self.is_stale(s) {
                    self.complete_plan(i);
                }
            }
        }

        let sample_time = group.iter().find(|s| s.event.kind == EventKind::Sample).map(|s| s.event.time);
        if let Some(ts) = sample_time {
            self.record_sample(ts);
        }

        if !fired.is_empty() || sample_time.is_some() {
            if let Some(tracker) = self.sync.as_mut() {
                let lambda = containing_arc(&phases_for(&self.oscs, t, self.cfg.continuity.omega0()));
                if tracker.observe(t, lambda) {
                    self.finish(t);
                }
            }
        }

        Ok(Some(StepRecord {
            time: t,
            fired,
            pulses_delivered: self.trace.pulses_delivered - pulses_before,
            sampled: sample_time.is_some(),
        }))
    }

    fn finish(&mut self, end: f64) {
        self.finished = true;
        self.trace.end_time = end.max(self.now);
    }

    fn record_sample(&mut self, ts: f64) {
        let omega0 = self.omega0();
        let phases = self.phases_at(ts);
        let omegas = self.oscs.iter().map(|o| o.omega(ts, omega0)).collect();
        self.trace.samples.push(Sample { time: ts, phases, omegas });
        self.next_sample += 1;
        let next = self.next_sample as f64 * self.cfg.sample_dt;
        if next <= self.cfg.horizon + TIME_TOL {
            self.push(Event { time: next, kind: EventKind::Sample }, 0);
        }
    }

    fn complete_plan(&mut self, i: usize) {
        let t = self.now;
        let omega0 = self.omega0();
        let osc = &mut self.oscs[i];
        if !osc.plan.is_active() {
            return;
        }
        let tau = osc.plan.remaining;
        self.trace.couplings.push(CouplingRecord {
            oscillator: i,
            fire_time: t,
            t0: tau,
            tau_i: tau,
            alpha: osc.plan_alpha,
            alpha_effective: effective_coupling(tau, tau, osc.plan_alpha),
        });
        osc.anchor_theta = osc.theta(t, omega0);
        osc.anchor_time = t;
        osc.plan = AdjustmentPlan::null(omega0, t);
    }

    fn draw_alpha(&mut self) -> f64 {
        match self.alpha_rng.as_mut() {
            None => self.cfg.alpha,
            Some((rng, lo, hi)) => rng.random_range(*lo..=*hi),
        }
    }

    fn fire_batch(&mut self, initial: Vec<usize>) -> Result<Vec<usize>> {
        let n = self.oscs.len();
        let mut fired = vec![false; n];
        let mut dirty = vec![false; n];
        let mut order = Vec::new();
        let mut senders = VecDeque::new();
        for i in initial {
            self.fire(i, false, &mut fired, &mut dirty)?;
            order.push(i);
            senders.push_back(i);
        }
        while let Some(s) = senders.pop_front() {
            let recipients = self.cfg.graph.out_neighbors(s).to_vec();
            for r in recipients {
                self.trace.pulses_delivered += 1;
                if fired[r] {
                    continue;
                }
                if self.receive(r, &mut dirty)? {
                    self.fire(r, true, &mut fired, &mut dirty)?;
                    order.push(r);
                    senders.push_back(r);
                }
            }
        }
        for i in (0..n).filter(|&i| dirty[i]) {
            self.schedule_oscillator(i)?;
        }
        let phases = self.phases_at(self.now);
        self.trace.snapshots.push(Snapshot { time: self.now, phases });
        Ok(order)
    }

    /// Fire `i`. A threshold crossing keeps any unfinished adjustment running
    /// from the reset phase; an absorption replaces it.
    fn fire(&mut self, i: usize, absorbed: bool, fired: &mut [bool], dirty: &mut [bool]) -> Result<()> {
        let t = self.now;
        let omega0 = self.omega0();
        if self.oscs[i].plan.is_active() && t - self.oscs[i].plan.started_at >= self.oscs[i].plan.remaining - TIME_TOL {
            self.complete_plan(i);
        }
        let osc = &mut self.oscs[i];
        let elapsed = t - osc.plan.started_at;
        if osc.plan.is_active() && !absorbed {
            // unwrapped anchor: the plan segment carries on past the reset
            osc.anchor_theta -= 1.0;
        } else {
            if osc.plan.is_active() && elapsed > 0.0 {
                self.trace.couplings.push(CouplingRecord {
                    oscillator: i,
                    fire_time: t,
                    t0: elapsed,
                    tau_i: osc.plan.remaining,
                    alpha: osc.plan_alpha,
                    alpha_effective: effective_coupling(elapsed, osc.plan.remaining, osc.plan_alpha),
                });
            }
            osc.anchor_time = t;
            osc.anchor_theta = 0.0;
            osc.plan = AdjustmentPlan::null(omega0, t);
        }
        osc.last_fire_time = Some(t);
        osc.generation += 1;
        fired[i] = true;
        dirty[i] = true;
        self.trace.firings.push(Firing { time: t, oscillator: i });

        if self.cfg.algorithm.is_reachback() {
            let (phi, acc) = self.oscs[i].rfa.flush();
            self.oscs[i].rfa = acc;
            if phi > 0.0 && self.adjust(i, phi, 1.0, dirty)? {
                // a flush can not fire twice in one instant
                let osc = &mut self.oscs[i];
                osc.anchor_theta = crate::phase::wrap_phase(osc.anchor_theta)?.value();
            }
        }
        Ok(())
    }

    /// Deliver one pulse to `r`. Returns true if `r` must fire in this instant.
    fn receive(&mut self, r: usize, dirty: &mut [bool]) -> Result<bool> {
        let theta = self.phase_of(r, self.now);
        match self.cfg.algorithm {
            Algorithm::DelayAdvance(params) => {
                if theta.value() < params.refractory() {
                    return Ok(false);
                }
                let phi = prc_delay_advance(theta, &params).phi;
                let alpha = self.draw_alpha();
                self.adjust(r, alpha * phi, alpha, dirty)
            }
            Algorithm::StateMap(params) if self.cfg.algorithm.is_reachback() => {
                let osc = &mut self.oscs[r];
                // evaluated where the jumps recorded so far would have put it
                let virtual_theta = theta.value() + osc.rfa.pending();
                if virtual_theta < 1.0 {
                    osc.rfa = osc.rfa.record(Phase::new(virtual_theta)?, &params)?;
                }
                Ok(false)
            }
            Algorithm::StateMap(params) => {
                let resp = state_map_jump(theta, &params)?;
                if resp.absorb {
                    return Ok(true);
                }
                self.adjust(r, resp.phi, 1.0, dirty)
            }
        }
    }

    /// Replace `i`'s plan with one realizing `psi` from its current phase.
    /// Returns true if a jump carried the phase to the threshold.
    fn adjust(&mut self, i: usize, psi: f64, alpha: f64, dirty: &mut [bool]) -> Result<bool> {
        let t = self.now;
        let omega0 = self.omega0();
        let continuity = self.cfg.continuity;
        let osc = &mut self.oscs[i];
        let theta = osc.theta(t, omega0).max(0.0);
        let old = osc.plan;
        let elapsed = t - old.started_at;
        let (next, _) = replan(&old, elapsed, psi, &continuity, t)?;
        // zero-length interruptions realize nothing and are not logged
        if old.is_active() && elapsed > 0.0 {
            self.trace.couplings.push(CouplingRecord {
                oscillator: i,
                fire_time: t,
                t0: elapsed,
                tau_i: old.remaining,
                alpha: osc.plan_alpha,
                alpha_effective: effective_coupling(elapsed, old.remaining, osc.plan_alpha),
            });
        }
        osc.generation += 1;
        dirty[i] = true;
        osc.anchor_time = t;
        osc.plan_alpha = alpha;
        let mut reached = false;
        if continuity.mode() == ContinuityMode::Jump {
            if psi != 0.0 {
                self.trace.couplings.push(CouplingRecord {
                    oscillator: i,
                    fire_time: t,
                    t0: 0.0,
                    tau_i: 0.0,
                    alpha,
                    alpha_effective: effective_coupling(0.0, 0.0, alpha),
                });
            }
            let jumped = theta + psi;
            if jumped < -TIME_TOL {
                return Err(Error::DownwardZeroCrossing { oscillator: i, time: t });
            }
            reached = jumped >= 1.0 - omega0 * TIME_TOL;
            osc.anchor_theta = jumped.clamp(0.0, 1.0);
            osc.plan = next;
        } else {
            osc.anchor_theta = theta;
            osc.plan = next;
        }
        Ok(reached)
    }
}

fn phases_for(oscs: &[OscillatorState], t: f64, omega0: f64) -> PhaseVector {
    PhaseVector::new(oscs.iter().map(|o| clamp_phase(o.theta(t, omega0))).collect())
        .expect("network has at least one oscillator")
}

/// Map a computed phase into `[0, 1)`, absorbing rounding at the ends.
fn clamp_phase(x: f64) -> Phase {
    let below_one = 1.0 - f64::EPSILON / 2.0;
    Phase::new(x.clamp(0.0, below_one)).expect("clamped into [0, 1)")
}

/// Run `cfg` to its horizon (or early stop) and return the trace.
pub fn run(cfg: SimConfig) -> Result<Trace> {
    let mut sim = Simulation::new(cfg)?;
    while sim.step()?.is_some() {}
    Ok(sim.into_trace())
}
