//! Circular phase arithmetic on the unit interval `[0, 1)`.
//!
//! Oscillator indices are zero-based throughout the library API. File formats
//! (CSV, edge lists) use one-based indices.

use crate::error::{Error, Result};

/// A point on the unit circle, stored as a fraction of one period.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    /// Checked constructor; rejects values outside `[0, 1)`.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinitePhase(value));
        }
        if !(0.0..1.0).contains(&value) {
            return Err(Error::PhaseOutOfRange(value));
        }
        Ok(Phase(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Phase> for f64 {
    fn from(p: Phase) -> f64 {
        p.0
    }
}

/// Reduce a raw phase value modulo one.
pub fn wrap_phase(x: f64) -> Result<Phase> {
    if !x.is_finite() {
        return Err(Error::NonFinitePhase(x));
    }
    let r = x.rem_euclid(1.0);
    // rem_euclid of a tiny negative number rounds up to exactly 1.0
    Ok(Phase(if r >= 1.0 { 0.0 } else { r }))
}

/// The phases of all oscillators in a network, indexed by oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(Vec<Phase>);

impl PhaseVector {
    pub fn new(phases: Vec<Phase>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::EmptyPhaseVector);
        }
        Ok(PhaseVector(phases))
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        let phases = values.iter().map(|&v| Phase::new(v)).collect::<Result<Vec<_>>>()?;
        Self::new(phases)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Phase> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Phase> + '_ {
        self.0.iter().copied()
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn as_slice(&self) -> &[Phase] {
        &self.0
    }
}

/// Forward arc length travelled from `a` to reach `b`.
///
/// Equal phases have a zero gap.
pub fn gap(a: Phase, b: Phase) -> f64 {
    let (a, b) = (a.0, b.0);
    if b > a {
        b - a
    } else if a > b {
        1.0 - (a - b)
    } else {
        0.0
    }
}

/// Indices sorted by ascending phase, ties broken by ascending index.
pub fn order_by_phase(phases: &PhaseVector) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..phases.len()).collect();
    // sort_by is stable, so equal phases keep index order
    idx.sort_by(|&i, &j| phases.0[i].0.total_cmp(&phases.0[j].0));
    idx
}

/// Length of the smallest arc of the circle containing every phase.
///
/// Zero for a single oscillator and whenever all phases coincide.
pub fn containing_arc(phases: &PhaseVector) -> f64 {
    let order = order_by_phase(phases);
    let n = order.len();
    if n < 2 {
        return 0.0;
    }
    let first = phases.0[order[0]];
    let last = phases.0[order[n - 1]];
    if first == last {
        return 0.0;
    }
    let mut max_gap = gap(last, first);
    for w in order.windows(2) {
        max_gap = max_gap.max(gap(phases.0[w[0]], phases.0[w[1]]));
    }
    1.0 - max_gap
}

/// [`containing_arc`] over raw values, for callers without a validated vector.
pub fn containing_arc_of(values: &[f64]) -> Result<f64> {
    Ok(containing_arc(&PhaseVector::from_values(values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> PhaseVector {
        PhaseVector::from_values(v).unwrap()
    }

    fn ph(v: f64) -> Phase {
        Phase::new(v).unwrap()
    }

    /// Brute force: try every phase as the arc's starting point and take the
    /// shortest forward sweep that covers all others.
    fn arc_oracle(v: &[f64]) -> f64 {
        v.iter()
            .map(|&start| v.iter().map(|&x| (x - start).rem_euclid(1.0)).fold(0.0_f64, f64::max))
            .fold(1.0_f64, f64::min)
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_phase(0.0).unwrap().value(), 0.0);
        assert!((wrap_phase(1.25).unwrap().value() - 0.25).abs() < 1e-15);
        assert!((wrap_phase(-0.1).unwrap().value() - 0.9).abs() < 1e-15);
        assert_eq!(wrap_phase(-1e-18).unwrap().value(), 0.0);
        assert!(matches!(wrap_phase(f64::NAN), Err(Error::NonFinitePhase(_))));
        assert!(wrap_phase(f64::INFINITY).is_err());
    }

    #[test]
    fn phase_constructor_rejects_out_of_range() {
        assert!(Phase::new(1.0).is_err());
        assert!(Phase::new(-0.01).is_err());
        assert!(Phase::new(0.999).is_ok());
    }

    #[test]
    fn gap_examples() {
        assert!((gap(ph(0.2), ph(0.9)) - 0.7).abs() < 1e-15);
        assert!((gap(ph(0.9), ph(0.1)) - 0.2).abs() < 1e-15);
        assert_eq!(gap(ph(0.4), ph(0.4)), 0.0);
    }

    #[test]
    fn containing_arc_examples() {
        assert!((containing_arc(&pv(&[0.1, 0.2, 0.9])) - 0.3).abs() < 1e-12);
        assert_eq!(containing_arc(&pv(&[0.5, 0.5, 0.5])), 0.0);
        assert!((containing_arc(&pv(&[0.0, 0.5])) - 0.5).abs() < 1e-15);
        assert_eq!(containing_arc(&pv(&[0.3])), 0.0);
        assert!(matches!(containing_arc_of(&[]), Err(Error::EmptyPhaseVector)));
    }

    #[test]
    fn containing_arc_with_partial_duplicates() {
        assert!((containing_arc(&pv(&[0.1, 0.1, 0.5])) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_by_phase(&pv(&[0.9, 0.1])), vec![1, 0]);
        assert_eq!(order_by_phase(&pv(&[0.3, 0.3])), vec![0, 1]);
        assert_eq!(order_by_phase(&pv(&[0.1, 0.2, 0.9])), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn arc_matches_brute_force(v in prop::collection::vec(0.0f64..1.0, 1..8)) {
            let got = containing_arc(&pv(&v));
            prop_assert!((got - arc_oracle(&v)).abs() < 1e-12);
            prop_assert!((0.0..1.0).contains(&got));
        }

        #[test]
        fn arc_rotation_invariant(v in prop::collection::vec(0.0f64..1.0, 1..8), c in -3.0f64..3.0) {
            let rotated: Vec<f64> = v.iter().map(|&x| wrap_phase(x + c).unwrap().value()).collect();
            prop_assert!((containing_arc(&pv(&v)) - containing_arc(&pv(&rotated))).abs() < 1e-12);
        }

        #[test]
        fn arc_zero_iff_all_equal(v in prop::collection::vec(prop::sample::select(vec![0.1, 0.35, 0.8]), 1..6)) {
            let all_eq = v.iter().all(|&x| x == v[0]);
            prop_assert_eq!(containing_arc(&pv(&v)) == 0.0, all_eq);
        }

        #[test]
        fn two_oscillator_arc(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let d = (a - b).abs();
            prop_assert!((containing_arc(&pv(&[a, b])) - d.min(1.0 - d)).abs() < 1e-12);
        }

        #[test]
        fn cyclic_gaps_sum_to_one(v in prop::collection::vec(0.0f64..1.0, 2..8)) {
            let p = pv(&v);
            let order = order_by_phase(&p);
            prop_assume!(p.get(order[0]) != p.get(order[order.len() - 1]));
            let total: f64 = (0..order.len())
                .map(|k| gap(p.get(order[k]).unwrap(), p.get(order[(k + 1) % order.len()]).unwrap()))
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
