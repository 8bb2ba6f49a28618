use pco_sim::sweep::{median_sync_times, run_sweep, SweepAxis};

const TEMPLATE: &str = r#"
[network]
n = 6
topology = "all_to_all"

[algorithm]
kind = "prc"
alpha = 0.5

[continuity]
mode = "constant_frequency"
omega_a = 0.3

[initial]
arc = 0.45
"#;

#[test]
fn median_sync_time_non_increasing_in_omega_a() {
    let axes = [SweepAxis::parse("continuity.omega_a=0.1,0.3,1.0").unwrap()];
    let seeds: Vec<u64> = (0..20).collect();
    let rows = run_sweep(TEMPLATE, None, &axes, &seeds).unwrap();
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r.synced && r.monotone));
    let medians = median_sync_times(&rows);
    assert_eq!(medians.len(), 3);
    assert!(medians.windows(2).all(|w| w[1].1 <= w[0].1), "{medians:?}");
}
