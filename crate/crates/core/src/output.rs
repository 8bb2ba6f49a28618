//! CSV export, text reports and the generated plot script.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::engine::{run, SimConfig, Trace};
use crate::error::{Error, Result};
use crate::metrics::{
    arc_series, coupling_summary, cycle_monotonicity, sync_report, ArcSeries, CouplingSummary, MonotonicityReport,
    SyncReport,
};

pub const PLOT_SCRIPT: &str = include_str!("plot.py");

/// Summary of one finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub sync: SyncReport,
    pub monotonicity: MonotonicityReport,
    pub coupling: Option<CouplingSummary>,
    pub final_lambda: f64,
    pub firings: usize,
    pub end_time: f64,
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn analyze(trace: &Trace, series: &ArcSeries, sync_tol: f64, sync_hold: f64) -> RunOutcome {
    RunOutcome {
        sync: sync_report(series, &trace.firings, trace.n, sync_tol, sync_hold),
        monotonicity: cycle_monotonicity(series, &trace.firings, trace.n),
        coupling: coupling_summary(&trace.couplings),
        final_lambda: series.last().map_or(0.0, |p| p.lambda),
        firings: trace.firings.len(),
        end_time: trace.end_time,
    }
}

/// Run `cfg` and write its full output set into `dir`.
pub fn write_run(cfg: &SimConfig, dir: &Path, label: &str, sync_tol: f64, sync_hold: f64) -> Result<RunOutcome> {
    let trace = run(cfg.clone())?;
    write_trace(&trace, cfg, dir, label, sync_tol, sync_hold)
}

pub fn write_trace(
    trace: &Trace,
    cfg: &SimConfig,
    dir: &Path,
    label: &str,
    sync_tol: f64,
    sync_hold: f64,
) -> Result<RunOutcome> {
    fs::create_dir_all(dir)?;
    let series = arc_series(trace);
    let outcome = analyze(trace, &series, sync_tol, sync_hold);
    write_phases(trace, &dir.join("phases.csv"))?;
    write_firings(trace, &dir.join("firings.csv"))?;
    write_arc(&series, &dir.join("arc.csv"))?;
    write_couplings(trace, &dir.join("coupling.csv"))?;
    fs::write(dir.join("report.txt"), render_report(cfg, label, &outcome))?;
    fs::write(dir.join("plot.py"), PLOT_SCRIPT)?;
    Ok(outcome)
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?)
}

pub fn write_phases(trace: &Trace, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let n = trace.n;
    let mut header = vec!["time".to_string()];
    header.extend((1..=n).map(|i| format!("theta_{i}")));
    header.extend((1..=n).map(|i| format!("omega_{i}")));
    w.write_record(&header)?;
    for s in &trace.samples {
        let mut row = vec![fmt_f64(s.time)];
        row.extend(s.phases.iter().map(|p| fmt_f64(p.value())));
        row.extend(s.omegas.iter().map(|&o| fmt_f64(o)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_firings(trace: &Trace, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["time", "oscillator"])?;
    for f in &trace.firings {
        w.write_record([fmt_f64(f.time), (f.oscillator + 1).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_arc(series: &ArcSeries, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["time", "lambda"])?;
    for p in &series.points {
        w.write_record([fmt_f64(p.time), fmt_f64(p.lambda)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_couplings(trace: &Trace, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["oscillator", "fire_time", "t0", "tau_i", "alpha", "alpha_effective"])?;
    for c in &trace.couplings {
        w.write_record([
            (c.oscillator + 1).to_string(),
            fmt_f64(c.fire_time),
            fmt_f64(c.t0),
            fmt_f64(c.tau_i),
            fmt_f64(c.alpha),
            fmt_f64(c.alpha_effective),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row of phases.csv: time, phases, frequencies.
pub type PhaseRow = (f64, Vec<f64>, Vec<f64>);

pub fn read_phases(path: &Path) -> Result<Vec<PhaseRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let cols = r.headers()?.len();
    if cols < 3 || cols % 2 == 0 {
        return Err(Error::InvalidConfig(format!("phases file has {cols} columns")));
    }
    let n = (cols - 1) / 2;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad number {f:?} in phases file"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push((vals[0], vals[1..=n].to_vec(), vals[n + 1..].to_vec()));
    }
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), fmt_f64)
}

pub fn render_report(cfg: &SimConfig, label: &str, o: &RunOutcome) -> String {
    let mut s = String::new();
    let c = &cfg.continuity;
    let _ = writeln!(s, "label: {label}");
    let _ = writeln!(s, "oscillators: {}", cfg.n());
    let _ = writeln!(s, "edges: {}", cfg.graph.edge_count());
    let _ = writeln!(s, "algorithm: {}", cfg.algorithm.name());
    let _ = writeln!(s, "alpha: {}", fmt_f64(cfg.alpha));
    let _ = writeln!(s, "mode: {}", c.mode().name());
    match c.mode() {
        crate::ContinuityMode::Jump => {}
        crate::ContinuityMode::ConstantFrequency => {
            let _ = writeln!(s, "omega_a_up: {}", fmt_f64(c.omega_a_up()));
            let _ = writeln!(s, "omega_a_down: {}", fmt_f64(c.omega_a_down()));
        }
        crate::ContinuityMode::ConstantTime => {
            let _ = writeln!(s, "tau: {}", fmt_f64(c.tau()));
        }
    }
    let _ = writeln!(s, "omega0: {}", fmt_f64(c.omega0()));
    let _ = writeln!(s, "end_time: {}", fmt_f64(o.end_time));
    let _ = writeln!(s, "firings: {}", o.firings);
    let _ = writeln!(s, "final_lambda: {}", fmt_f64(o.final_lambda));
    let _ = writeln!(s);
    let _ = writeln!(s, "synced: {}", o.sync.synced);
    let _ = writeln!(s, "sync_tolerance: {}", fmt_f64(o.sync.tolerance));
    let _ = writeln!(s, "sync_time: {}", opt(o.sync.sync_time));
    let _ = writeln!(s, "cycles_to_sync: {}", o.sync.cycles_to_sync.map_or("none".into(), |c| c.to_string()));
    let _ = writeln!(s);
    let m = &o.monotonicity;
    let _ = writeln!(s, "monotone: {}", m.monotone);
    let _ = writeln!(s, "cycle_boundaries: {}", m.boundaries.len());
    let _ = writeln!(s, "monotonicity_violations: {}", m.violations.len());
    for v in &m.violations {
        let _ = writeln!(s, "  t = {}: {} -> {}", fmt_f64(v.time), fmt_f64(v.previous), fmt_f64(v.current));
    }
    let _ = writeln!(s, "repeat_firings: {}", m.repeat_firings.len());
    let _ = writeln!(s);
    match &o.coupling {
        None => {
            let _ = writeln!(s, "coupling_records: 0");
        }
        Some(cs) => {
            let _ = writeln!(s, "coupling_records: {}", cs.count);
            let _ = writeln!(s, "alpha_effective_min: {}", fmt_f64(cs.min));
            let _ = writeln!(s, "alpha_effective_max: {}", fmt_f64(cs.max));
            let _ = writeln!(s, "alpha_effective_mean: {}", fmt_f64(cs.mean));
            let _ = writeln!(s, "interrupted_fraction: {}", fmt_f64(cs.interrupted_fraction));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuity::ContinuityConfig;
    use crate::engine::InitialPhases;
    use crate::prc::{Algorithm, DelayAdvanceParams};
    use crate::topology::Graph;

    fn cfg(n: usize, horizon: f64) -> SimConfig {
        let mut c = SimConfig::new(
            Graph::all_to_all(n).unwrap(),
            Algorithm::DelayAdvance(DelayAdvanceParams::new(0.0).unwrap()),
            0.5,
            ContinuityConfig::constant_frequency(0.3, 1.0).unwrap(),
            InitialPhases::RandomArc { seed: 2, arc_length: 0.4, arc_offset: 0.0 },
        );
        c.horizon = horizon;
        c
    }

    fn lines(path: &Path) -> Vec<String> {
        fs::read_to_string(path).unwrap().lines().map(String::from).collect()
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 5e-324, 0.9999999999999999, 123456.789, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn phases_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg(4, 5.0);
        let trace = run(c.clone()).unwrap();
        write_trace(&trace, &c, dir.path(), "t", 1e-6, 1.0).unwrap();
        let rows = read_phases(&dir.path().join("phases.csv")).unwrap();
        assert_eq!(rows.len(), trace.samples.len());
        for ((t, th, om), s) in rows.iter().zip(&trace.samples) {
            assert_eq!(*t, s.time);
            assert_eq!(th.as_slice(), s.phases.values().as_slice());
            assert_eq!(om, &s.omegas);
        }
    }

    #[test]
    fn output_set_layout() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg(3, 3.0);
        write_run(&c, dir.path(), "layout", 1e-6, 1.0).unwrap();
        for f in ["phases.csv", "firings.csv", "arc.csv", "coupling.csv", "report.txt", "plot.py"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert_eq!(lines(&dir.path().join("phases.csv"))[0], "time,theta_1,theta_2,theta_3,omega_1,omega_2,omega_3");
        assert_eq!(lines(&dir.path().join("firings.csv"))[0], "time,oscillator");
        assert_eq!(lines(&dir.path().join("arc.csv"))[0], "time,lambda");
        assert_eq!(lines(&dir.path().join("coupling.csv"))[0], "oscillator,fire_time,t0,tau_i,alpha,alpha_effective");
        let raw = fs::read(dir.path().join("phases.csv")).unwrap();
        assert!(!raw.contains(&b'\r'));
        let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
        assert!(report.contains("label: layout") && report.contains("monotone:"));
    }

    #[test]
    fn zero_horizon_writes_headers_and_initial_sample() {
        let dir = tempfile::tempdir().unwrap();
        write_run(&cfg(3, 0.0), dir.path(), "zero", 1e-6, 1.0).unwrap();
        assert_eq!(lines(&dir.path().join("phases.csv")).len(), 2);
        assert_eq!(lines(&dir.path().join("firings.csv")).len(), 1);
        assert_eq!(lines(&dir.path().join("coupling.csv")).len(), 1);
    }

    #[test]
    fn single_oscillator_arc_is_zero() {
        let dir = tempfile::tempdir().unwrap();
        write_run(&cfg(1, 3.0), dir.path(), "one", 1e-6, 1.0).unwrap();
        let arc = lines(&dir.path().join("arc.csv"));
        assert!(arc.len() > 2);
        for row in &arc[1..] {
            let lambda: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(lambda, 0.0);
        }
    }

    #[test]
    fn unwritable_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        assert!(write_run(&cfg(2, 1.0), &blocker.join("sub"), "x", 1e-6, 1.0).is_err());
    }
}
