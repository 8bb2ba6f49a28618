//! Parameter sweeps over a scenario template.
//!
//! Every grid point is combined with every seed; the runs execute in
//! parallel and the rows come back in grid-major, seed-minor order.

use std::path::Path;

use rayon::prelude::*;

use crate::config::{override_key, parse_config_str};
use crate::engine::run;
use crate::error::{Error, Result};
use crate::metrics::{arc_series, cycle_monotonicity, sync_report};
use crate::output::fmt_f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepAxis {
    /// Dotted `section.key` path into the scenario file.
    pub key: String,
    /// TOML literals.
    pub values: Vec<String>,
}

impl SweepAxis {
    /// Parse `section.key=v1,v2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (key, values) = spec.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("sweep parameter {spec:?} must look like section.key=v1,v2"))
        })?;
        let key = key.trim();
        if !key.contains('.') {
            return Err(Error::InvalidConfig(format!("sweep key {key:?} must be written as section.key")));
        }
        let values = values.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect();
        Ok(SweepAxis { key: key.to_string(), values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: Vec<String>,
    pub seed: u64,
    pub synced: bool,
    pub sync_time: Option<f64>,
    pub min_alpha_effective: Option<f64>,
    pub monotone: bool,
}

/// Cartesian product of the axes. No axes, or any empty axis, gives no points.
pub fn grid_points(axes: &[SweepAxis]) -> Vec<Vec<String>> {
    if axes.is_empty() {
        return Vec::new();
    }
    let mut points = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    points
}

pub fn run_sweep(template: &str, base_dir: Option<&Path>, axes: &[SweepAxis], seeds: &[u64]) -> Result<Vec<SweepRow>> {
    parse_config_str(template, base_dir)?;
    let points = grid_points(axes);
    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|p| seeds.iter().map(move |&s| (p, s))).collect();
    jobs.par_iter()
        .map(|&(p, seed)| {
            let mut text = template.to_string();
            for (axis, value) in axes.iter().zip(&points[p]) {
                text = override_key(&text, &axis.key, value)?;
            }
            let mut scenario = parse_config_str(&text, base_dir)?;
            scenario.override_seed(seed);
            let trace = run(scenario.sim)?;
            let series = arc_series(&trace);
            let sync = sync_report(&series, &trace.firings, trace.n, scenario.sync_tol, scenario.sync_hold);
            let mono = cycle_monotonicity(&series, &trace.firings, trace.n);
            let min_alpha_effective = trace.couplings.iter().map(|c| c.alpha_effective).reduce(f64::min);
            Ok(SweepRow {
                point: points[p].clone(),
                seed,
                synced: sync.synced,
                sync_time: sync.sync_time,
                min_alpha_effective,
                monotone: mono.monotone,
            })
        })
        .collect()
}

pub fn write_sweep_csv(axes: &[SweepAxis], rows: &[SweepRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    let mut header: Vec<String> = axes.iter().map(|a| a.key.clone()).collect();
    header.extend(["seed", "synced", "sync_time", "min_alpha_effective", "monotone"].map(String::from));
    w.write_record(&header)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for r in rows {
        let mut rec = r.point.clone();
        rec.push(r.seed.to_string());
        rec.push(r.synced.to_string());
        rec.push(opt(r.sync_time));
        rec.push(opt(r.min_alpha_effective));
        rec.push(r.monotone.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Median sync time per grid point, in grid order. Runs that never
/// synchronized count as infinitely slow.
pub fn median_sync_times(rows: &[SweepRow]) -> Vec<(Vec<String>, f64)> {
    let mut out: Vec<(Vec<String>, Vec<f64>)> = Vec::new();
    for r in rows {
        let t = r.sync_time.unwrap_or(f64::INFINITY);
        match out.last_mut() {
            Some((p, ts)) if *p == r.point => ts.push(t),
            _ => out.push((r.point.clone(), vec![t])),
        }
    }
    out.into_iter()
        .map(|(p, mut ts)| {
            ts.sort_by(f64::total_cmp);
            let m = ts.len() / 2;
            let median = if ts.len() % 2 == 1 { ts[m] } else { 0.5 * (ts[m - 1] + ts[m]) };
            (p, median)
        })
        .collect()
}
