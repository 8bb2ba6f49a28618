use proptest::prelude::*;

use pco_sim::continuity::{ContinuityConfig, ContinuityMode};
use pco_sim::engine::{InitialPhases, SimConfig};
use pco_sim::prc::{Algorithm, DelayAdvanceParams, StateCurve, StateMapParams};
use pco_sim::run;
use pco_sim::topology::Graph;

fn continuity(mode: usize, knob: f64) -> ContinuityConfig {
    match ContinuityMode::ALL[mode] {
        ContinuityMode::Jump => ContinuityConfig::jump(1.0),
        ContinuityMode::ConstantFrequency => ContinuityConfig::constant_frequency(0.05 + knob, 1.0),
        ContinuityMode::ConstantTime => ContinuityConfig::constant_time(0.05 + knob, 1.0),
    }
    .unwrap()
}

fn algorithm(kind: usize, d: f64) -> (Algorithm, bool) {
    let sm = |c| Algorithm::StateMap(StateMapParams::new(0.002, c).unwrap());
    match kind {
        0 => (Algorithm::DelayAdvance(DelayAdvanceParams::new(d).unwrap()), false),
        1 => (sm(StateCurve::Peskin { gamma: 3.0 }), true),
        2 => (sm(StateCurve::MirolloStrogatz { b: 5.0 }), true),
        _ => (sm(StateCurve::Rfa), true),
    }
}

prop_compose! {
    fn any_config()(
        n in 1usize..=6,
        ring in any::<bool>(),
        kind in 0usize..4,
        d in 0.0f64..=0.5,
        alpha in 0.05f64..=1.0,
        mode in 0usize..3,
        knob in 0.0f64..1.0,
        seed in any::<u64>(),
        arc in 0.0f64..0.99,
    ) -> SimConfig {
        let graph = if ring && n >= 2 { Graph::ring(n) } else { Graph::all_to_all(n) }.unwrap();
        let (alg, state_map) = algorithm(kind, d);
        let mut cfg = SimConfig::new(
            graph,
            alg,
            if state_map { 1.0 } else { alpha },
            continuity(mode, knob),
            InitialPhases::RandomArc { seed, arc_length: arc, arc_offset: 0.0 },
        );
        cfg.horizon = 8.0;
        cfg.sample_dt = 0.05;
        cfg
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn runs_are_deterministic(cfg in any_config()) {
        let a = run(cfg.clone()).unwrap();
        let b = run(cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trace_invariants(cfg in any_config()) {
        let graph = cfg.graph.clone();
        let trace = run(cfg).unwrap();
        let expected: u64 = trace.firings.iter().map(|f| graph.out_degree(f.oscillator) as u64).sum();
        prop_assert_eq!(trace.pulses_delivered, expected);
        for (k, s) in trace.samples.iter().enumerate() {
            prop_assert!((s.time - k as f64 * 0.05).abs() < 1e-9);
            for p in s.phases.iter() {
                prop_assert!((0.0..1.0).contains(&p.value()));
            }
        }
        prop_assert!(trace.firings.windows(2).all(|w| w[0].time <= w[1].time));
        prop_assert!(trace.firings.iter().all(|f| f.time <= 8.0 + 1e-12));
        for c in &trace.couplings {
            prop_assert!(c.alpha_effective > 0.0 && c.alpha_effective <= c.alpha);
        }
    }

    #[test]
    fn isolated_oscillator_fires_once_per_period(theta in 0.0f64..1.0) {
        let mut cfg = SimConfig::new(
            Graph::all_to_all(1).unwrap(),
            algorithm(0, 0.0).0,
            0.5,
            continuity(1, 0.3),
            InitialPhases::Explicit(vec![theta]),
        );
        cfg.horizon = 5.0;
        let trace = run(cfg).unwrap();
        for (k, f) in trace.firings.iter().enumerate() {
            prop_assert!((f.time - (1.0 - theta + k as f64)).abs() < 1e-9);
        }
        prop_assert!(trace.couplings.is_empty());
    }
}
