use vaoi::sim::{monte_carlo, simulate_contact, simulate_exchange, two_sample_z, MobilityMode, SimOptions};
use vaoi::{v_exchange_dc, v_symmetric, Config, MobilityScaling, TopologyKind};

fn dc_linear(n: usize) -> Config {
    Config::new(n, 1.0, 1.0, TopologyKind::Disconnected, MobilityScaling::Linear).unwrap()
}

#[test]
fn long_run_matches_recursion() {
    let r = simulate_contact(&dc_linear(4), 1e6, 2024).unwrap();
    let theory = 77.0 / 60.0;
    assert!((r.network_avg_age - theory).abs() < 0.02 * theory, "{}", r.network_avg_age);
    for node in &r.per_node_time_avg_age {
        assert!((node - theory).abs() < 0.05 * theory);
    }
}

#[test]
fn exchange_rate_does_not_move_the_mean() {
    let config = dc_linear(4);
    let theory = v_exchange_dc(4, 1.0, 1.0).unwrap();
    for lambda_m in [0.0, 5.0] {
        let r = simulate_exchange(&config, lambda_m, 1e6, 99).unwrap();
        assert!((r.network_avg_age - theory).abs() < 0.03 * theory, "lambda_m={lambda_m}: {}", r.network_avg_age);
    }
}

#[test]
fn confidence_interval_coverage() {
    let config = dc_linear(4);
    let theory = v_symmetric(&config).unwrap().v1();
    let covered = (0..20u64)
        .filter(|&trial| {
            let opts = SimOptions::new(1e4, 10_000 + 100 * trial);
            monte_carlo(&config, MobilityMode::Contact, &opts, 20).unwrap().covers(theory, 1.0)
        })
        .count();
    assert!(covered >= 18, "covered {covered}/20");
}

#[test]
fn fc_is_no_older_than_dc_in_simulation() {
    for scaling in [MobilityScaling::Linear, MobilityScaling::Constant { c: 5.0 }] {
        let dc = Config::new(8, 2.0, 1.0, TopologyKind::Disconnected, scaling).unwrap();
        let fc = Config { topology: TopologyKind::FullyConnected, ..dc };
        let opts = SimOptions::new(5e4, 7);
        let a = monte_carlo(&dc, MobilityMode::Contact, &opts, 8).unwrap();
        let b = monte_carlo(&fc, MobilityMode::Contact, &opts, 8).unwrap();
        assert!(two_sample_z(&b, &a) <= 3.0, "fc {} dc {}", b.mean, a.mean);
        assert!(b.mean < a.mean);
    }
}

#[test]
fn warmup_removes_start_bias() {
    // Ages start at zero, so short runs without warm-up read low.
    let config = dc_linear(4);
    let theory = 77.0 / 60.0;
    let cold = monte_carlo(&config, MobilityMode::Contact, &SimOptions::new(20.0, 5), 400).unwrap();
    let warm = monte_carlo(&config, MobilityMode::Contact, &SimOptions::new(40.0, 5).with_warmup(0.5), 400).unwrap();
    assert!(cold.mean < theory);
    assert!((warm.mean - theory).abs() < (cold.mean - theory).abs());
}
