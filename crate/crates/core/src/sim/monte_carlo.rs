use rayon::prelude::*;

use super::engine::{simulate_contact_with, simulate_exchange_with, SimOptions, SimResult};
use crate::error::{Error, Result};
use crate::model::NetworkConfig;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobilityMode {
    Contact,
    Exchange { lambda_m: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub mean: f64,
    pub half_width_95: f64,
    pub std_dev: f64,
    /// One result per replication, in seed order.
    pub runs: Vec<SimResult>,
}

impl MonteCarloSummary {
    /// `(mean - target) / standard error`; infinite when the spread is zero
    /// but the mean differs.
    pub fn z_score(&self, target: f64) -> f64 {
        let se = self.half_width_95 / Z_95;
        let diff = self.mean - target;
        if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }

    /// Does `target` lie within `k` half-widths of the mean?
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.half_width_95
    }
}

/// Independent replications with seeds `base_seed + r`.
///
/// Replications may run in parallel; aggregation is in seed order, so the
/// output does not depend on scheduling.
pub fn monte_carlo(
    config: &NetworkConfig<f64>,
    mode: MobilityMode,
    opts: &SimOptions,
    replications: usize,
) -> Result<MonteCarloSummary> {
    if replications < 2 {
        return Err(Error::Domain(format!("need at least 2 replications, got {replications}")));
    }
    let runs = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let o = SimOptions { seed: opts.seed.wrapping_add(r), ..*opts };
            match mode {
                MobilityMode::Contact => simulate_contact_with(config, &o),
                MobilityMode::Exchange { lambda_m } => simulate_exchange_with(config, lambda_m, &o),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(runs))
}

pub fn summarize(runs: Vec<SimResult>) -> MonteCarloSummary {
    let k = runs.len() as f64;
    let mean = runs.iter().map(|r| r.network_avg_age).sum::<f64>() / k;
    let var = runs.iter().map(|r| (r.network_avg_age - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let std_dev = var.sqrt();
    MonteCarloSummary { mean, half_width_95: Z_95 * std_dev / k.sqrt(), std_dev, runs }
}

/// Two-sample z statistic between independent estimates.
pub fn two_sample_z(a: &MonteCarloSummary, b: &MonteCarloSummary) -> f64 {
    let se = ((a.half_width_95 / Z_95).powi(2) + (b.half_width_95 / Z_95).powi(2)).sqrt();
    if se > 0.0 {
        (a.mean - b.mean) / se
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MobilityScaling, TopologyKind};

    fn dc4() -> NetworkConfig<f64> {
        NetworkConfig::new(4, 1.0, 1.0, TopologyKind::Disconnected, MobilityScaling::Linear).unwrap()
    }

    #[test]
    fn bit_identical_repeats() {
        let opts = SimOptions::new(2e3, 11);
        let a = monte_carlo(&dc4(), MobilityMode::Contact, &opts, 4).unwrap();
        let b = monte_carlo(&dc4(), MobilityMode::Contact, &opts, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![11, 12, 13, 14]);
    }

    #[test]
    fn one_replication_rejected() {
        assert!(monte_carlo(&dc4(), MobilityMode::Contact, &SimOptions::new(10.0, 0), 1).is_err());
    }

    #[test]
    fn z_score_edges() {
        let runs = vec![
            SimResult { per_node_time_avg_age: vec![1.0], network_avg_age: 1.0, horizon: 1.0, window: 1.0, events_processed: 0, seed: 0 };
            3
        ];
        let s = summarize(runs);
        assert_eq!(s.half_width_95, 0.0);
        assert_eq!(s.z_score(1.0), 0.0);
        assert_eq!(s.z_score(0.0), f64::INFINITY);
    }
}
