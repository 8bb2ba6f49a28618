//! Convergence analysis over recorded traces.

use crate::continuity::CouplingRecord;
use crate::engine::{Firing, Trace, TIME_TOL};
use crate::phase::containing_arc;

/// Default synchronization tolerance on the containing arc.
pub const DEFAULT_SYNC_TOL: f64 = 1e-6;

/// Slack allowed when comparing containing arcs across cycle boundaries.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub time: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSeries {
    pub points: Vec<ArcPoint>,
}

impl ArcSeries {
    /// Containing arc at time `t`: the last point recorded at that instant.
    pub fn at(&self, t: f64) -> Option<f64> {
        let idx = self.points.partition_point(|p| p.time <= t + TIME_TOL);
        let p = self.points.get(idx.checked_sub(1)?)?;
        ((p.time - t).abs() <= TIME_TOL).then_some(p.lambda)
    }

    pub fn last(&self) -> Option<ArcPoint> {
        self.points.last().copied()
    }
}

/// Containing arc at every sample and after every firing instant.
///
/// Where a sample and a firing instant coincide, one point is kept.
pub fn arc_series(trace: &Trace) -> ArcSeries {
    let mut raw: Vec<(f64, u8, f64)> = trace
        .samples
        .iter()
        .map(|s| (s.time, 1, containing_arc(&s.phases)))
        .chain(trace.snapshots.iter().map(|s| (s.time, 0, containing_arc(&s.phases))))
        .collect();
    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut points: Vec<ArcPoint> = Vec::with_capacity(raw.len());
    for (time, _, lambda) in raw {
        match points.last() {
            Some(last) if time - last.time <= TIME_TOL => {}
            _ => points.push(ArcPoint { time, lambda }),
        }
    }
    ArcSeries { points }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncReport {
    pub synced: bool,
    pub sync_time: Option<f64>,
    pub tolerance: f64,
    pub cycles_to_sync: Option<usize>,
}

/// First time the arc drops below `tol` and stays there for `hold` seconds.
///
/// The hold window must be covered by the series.
pub fn sync_time(series: &ArcSeries, tol: f64, hold: f64) -> SyncReport {
    let mut since: Option<f64> = None;
    let mut found = None;
    for p in &series.points {
        if p.lambda < tol {
            let start = *since.get_or_insert(p.time);
            if p.time - start >= hold {
                found = Some(start);
                break;
            }
        } else {
            since = None;
        }
    }
    SyncReport { synced: found.is_some(), sync_time: found, tolerance: tol, cycles_to_sync: None }
}

/// [`sync_time`] plus the number of completed firing cycles up to the sync time.
pub fn sync_report(series: &ArcSeries, firings: &[Firing], n: usize, tol: f64, hold: f64) -> SyncReport {
    let mut report = sync_time(series, tol, hold);
    if let Some(ts) = report.sync_time {
        let count = cycle_boundaries(firings, n).iter().filter(|&&t| t <= ts + TIME_TOL).count();
        report.cycles_to_sync = Some(count);
    }
    report
}

/// Instants at which every oscillator has fired at least once since the
/// previous boundary.
pub fn cycle_boundaries(firings: &[Firing], n: usize) -> Vec<f64> {
    let mut seen = vec![false; n];
    let mut remaining = n;
    let mut out = Vec::new();
    let mut i = 0;
    while i < firings.len() {
        let t = firings[i].time;
        // consume the whole instant before testing for a boundary
        while i < firings.len() && firings[i].time - t <= TIME_TOL {
            let o = firings[i].oscillator;
            if o < n && !seen[o] {
                seen[o] = true;
                remaining -= 1;
            }
            i += 1;
        }
        if remaining == 0 {
            out.push(t);
            seen.iter_mut().for_each(|s| *s = false);
            remaining = n;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityViolation {
    pub time: f64,
    pub previous: f64,
    pub current: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonotonicityReport {
    pub monotone: bool,
    /// `(time, lambda)` at the start and at each cycle boundary.
    pub boundaries: Vec<(f64, f64)>,
    pub violations: Vec<MonotonicityViolation>,
    /// Oscillators that fired again before the cycle completed.
    pub repeat_firings: Vec<Firing>,
}

/// Check that the containing arc never grows from one cycle boundary to the next.
pub fn cycle_monotonicity(series: &ArcSeries, firings: &[Firing], n: usize) -> MonotonicityReport {
    let mut boundaries = Vec::new();
    if let Some(first) = series.points.first() {
        boundaries.push((first.time, first.lambda));
    }
    for t in cycle_boundaries(firings, n) {
        if let Some(lambda) = series.at(t) {
            boundaries.push((t, lambda));
        }
    }
    let violations: Vec<_> = boundaries
        .windows(2)
        .filter(|w| w[1].1 > w[0].1 + MONOTONE_TOL)
        .map(|w| MonotonicityViolation { time: w[1].0, previous: w[0].1, current: w[1].1 })
        .collect();
    MonotonicityReport {
        monotone: violations.is_empty(),
        boundaries,
        violations,
        repeat_firings: repeat_firings(firings, n),
    }
}

fn repeat_firings(firings: &[Firing], n: usize) -> Vec<Firing> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut i = 0;
    while i < firings.len() {
        let t = firings[i].time;
        while i < firings.len() && firings[i].time - t <= TIME_TOL {
            let f = firings[i];
            if f.oscillator < n {
                if seen[f.oscillator] {
                    out.push(f);
                }
                seen[f.oscillator] = true;
            }
            i += 1;
        }
        if seen.iter().all(|&s| s) {
            seen.iter_mut().for_each(|s| *s = false);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Share of adjustments cut short before completing.
    pub interrupted_fraction: f64,
}

/// Statistics of realized coupling; `None` for an empty log.
pub fn coupling_summary(records: &[CouplingRecord]) -> Option<CouplingSummary> {
    if records.is_empty() {
        return None;
    }
    let values = records.iter().map(|r| r.alpha_effective);
    let min = values.clone().fold(f64::INFINITY, f64::min);
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.sum::<f64>() / records.len() as f64;
    let interrupted = records.iter().filter(|r| r.t0 < r.tau_i).count();
    Some(CouplingSummary {
        count: records.len(),
        min,
        max,
        mean,
        interrupted_fraction: interrupted as f64 / records.len() as f64,
    })
}

/// Every record satisfies `0 < alpha_effective <= alpha`.
pub fn coupling_within_bounds(records: &[CouplingRecord]) -> bool {
    records.iter().all(|r| r.alpha_effective > 0.0 && r.alpha_effective <= r.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuity::ContinuityConfig;
    use crate::engine::{run, InitialPhases, SimConfig};
    use crate::prc::{Algorithm, DelayAdvanceParams};
    use crate::topology::Graph;

    fn series(points: &[(f64, f64)]) -> ArcSeries {
        ArcSeries { points: points.iter().map(|&(time, lambda)| ArcPoint { time, lambda }).collect() }
    }

    fn fire(time: f64, oscillator: usize) -> Firing {
        Firing { time, oscillator }
    }

    fn hand_trace() -> Trace {
        let mut cfg = SimConfig::new(
            Graph::all_to_all(2).unwrap(),
            Algorithm::DelayAdvance(DelayAdvanceParams::new(0.0).unwrap()),
            0.5,
            ContinuityConfig::jump(1.0).unwrap(),
            InitialPhases::Explicit(vec![0.0, 0.6]),
        );
        cfg.horizon = 1.25;
        cfg.sample_dt = 0.1;
        run(cfg).unwrap()
    }

    #[test]
    fn hand_trace_arc_series() {
        let s = arc_series(&hand_trace());
        assert!((s.at(0.0).unwrap() - 0.4).abs() < 1e-12);
        assert!((s.at(0.4).unwrap() - 0.2).abs() < 1e-12);
        assert!((s.at(1.2).unwrap() - 0.1).abs() < 1e-12);
        assert!((s.last().unwrap().lambda - 0.1).abs() < 1e-12);
        assert!(s.points.windows(2).all(|w| w[1].time > w[0].time));
    }

    #[test]
    fn hand_trace_monotone() {
        let trace = hand_trace();
        let rep = cycle_monotonicity(&arc_series(&trace), &trace.firings, 2);
        assert!(rep.monotone);
        let lambdas: Vec<f64> = rep.boundaries.iter().map(|b| b.1).collect();
        assert_eq!(lambdas.len(), 2);
        assert!((lambdas[0] - 0.4).abs() < 1e-12 && (lambdas[1] - 0.1).abs() < 1e-12);
        assert!(rep.repeat_firings.is_empty());
    }

    #[test]
    fn single_oscillator_arc_is_zero() {
        let mut cfg = SimConfig::new(
            Graph::all_to_all(1).unwrap(),
            Algorithm::DelayAdvance(DelayAdvanceParams::new(0.0).unwrap()),
            0.5,
            ContinuityConfig::jump(1.0).unwrap(),
            InitialPhases::Explicit(vec![0.3]),
        );
        cfg.horizon = 3.0;
        let s = arc_series(&run(cfg).unwrap());
        assert!(s.points.iter().all(|p| p.lambda == 0.0));
    }

    #[test]
    fn sync_time_examples() {
        let zero = series(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.5, 0.0)]);
        assert_eq!(sync_time(&zero, 1e-6, 1.0).sync_time, Some(0.0));

        let never = series(&[(0.0, 0.3), (1.0, 0.2), (2.0, 0.1)]);
        assert!(!sync_time(&never, 1e-6, 1.0).synced);

        let dip = series(&[(0.0, 0.3), (1.0, 1e-8), (1.5, 0.2), (2.0, 1e-9), (2.5, 1e-9), (3.0, 1e-10)]);
        let rep = sync_time(&dip, 1e-6, 1.0);
        assert_eq!(rep.sync_time, Some(2.0));

        // hold window not covered
        let short = series(&[(0.0, 0.3), (1.0, 0.0)]);
        assert!(!sync_time(&short, 1e-6, 1.0).synced);
    }

    #[test]
    fn cycle_boundaries_require_every_oscillator() {
        let firings =
            [fire(0.1, 0), fire(0.2, 1), fire(0.3, 0), fire(0.35, 2), fire(1.1, 1), fire(1.1, 0), fire(1.2, 2)];
        assert_eq!(cycle_boundaries(&firings, 3), vec![0.35, 1.2]);
        let rep = cycle_monotonicity(&series(&[(0.0, 0.5), (0.35, 0.3), (1.2, 0.2)]), &firings, 3);
        assert_eq!(rep.repeat_firings, vec![fire(0.3, 0)]);
    }

    #[test]
    fn corrupted_series_reports_violation() {
        let firings = [fire(0.5, 0), fire(0.6, 1), fire(1.5, 0), fire(1.6, 1)];
        let s = series(&[(0.0, 0.3), (0.6, 0.2), (1.6, 0.25)]);
        let rep = cycle_monotonicity(&s, &firings, 2);
        assert!(!rep.monotone);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].time, 1.6);
    }

    #[test]
    fn synchronized_series_is_monotone() {
        let firings = [fire(1.0, 0), fire(1.0, 1), fire(2.0, 0), fire(2.0, 1)];
        let s = series(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(cycle_monotonicity(&s, &firings, 2).monotone);
        let rep = sync_report(&s, &firings, 2, 1e-6, 1.0);
        assert_eq!(rep.sync_time, Some(0.0));
        assert_eq!(rep.cycles_to_sync, Some(0));
    }

    #[test]
    fn coupling_summary_cases() {
        assert!(coupling_summary(&[]).is_none());
        let jump = hand_trace();
        let sum = coupling_summary(&jump.couplings).unwrap();
        assert_eq!((sum.min, sum.max), (0.5, 0.5));
        assert_eq!(sum.interrupted_fraction, 0.0);

        let r = |t0: f64, tau_i: f64| CouplingRecord {
            oscillator: 0,
            fire_time: 1.0,
            t0,
            tau_i,
            alpha: 0.5,
            alpha_effective: crate::continuity::effective_coupling(t0, tau_i, 0.5),
        };
        let sum = coupling_summary(&[r(0.2, 0.5), r(0.5, 0.5)]).unwrap();
        assert!((sum.min - 0.2).abs() < 1e-15);
        assert_eq!(sum.interrupted_fraction, 0.5);
        assert!(coupling_within_bounds(&[r(0.2, 0.5)]));
        assert!(!coupling_within_bounds(&[r(0.0, 0.5)]));
    }
}
