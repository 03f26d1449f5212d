use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::event::{Event, EventTable, SimState};
use crate::error::{Error, Result};
use crate::model::{build_rates, NetworkConfig, RateSet, TopologyKind};

/// Generator behind every trajectory, seeded with `seed_from_u64`.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub horizon: f64,
    pub seed: u64,
    /// Fraction of the horizon discarded before averaging starts.
    pub warmup: f64,
}

impl SimOptions {
    pub fn new(horizon: f64, seed: u64) -> Self {
        SimOptions { horizon, seed, warmup: 0.0 }
    }

    pub fn with_warmup(mut self, warmup: f64) -> Self {
        self.warmup = warmup;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(0.0..1.0).contains(&self.warmup) {
            return Err(Error::Domain(format!("warmup fraction must lie in [0, 1), got {}", self.warmup)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// `(1/T) ∫ Δ_i(t) dt` over the averaging window, per node.
    pub per_node_time_avg_age: Vec<f64>,
    pub network_avg_age: f64,
    pub horizon: f64,
    /// Length of the averaging window, `horizon * (1 - warmup)`.
    pub window: f64,
    pub events_processed: u64,
    pub seed: u64,
}

/// Exact integral of piecewise-constant ages.
///
/// Node areas are updated lazily: `∫Δ_i = ∫N_s - ∫N_i`, and `N_i` only
/// changes when an event touches node `i`, so each event costs O(1).
struct AgeIntegrator {
    clock: f64,
    source_area: f64,
    mark: Vec<f64>,
    since: Vec<f64>,
    node_area: Vec<f64>,
}

impl AgeIntegrator {
    fn new(n: usize) -> Self {
        AgeIntegrator { clock: 0.0, source_area: 0.0, mark: vec![0.0; n], since: vec![0.0; n], node_area: vec![0.0; n] }
    }

    #[inline]
    fn advance(&mut self, to: f64, source_version: u64) {
        self.source_area += source_version as f64 * (to - self.clock);
        self.clock = to;
    }

    /// Closes node `i`'s open segment, during which it held `version`.
    #[inline]
    fn touch(&mut self, node: usize, version: u64) {
        let k = node - 1;
        self.node_area[k] += (self.source_area - self.mark[k]) - version as f64 * (self.clock - self.since[k]);
        self.mark[k] = self.source_area;
        self.since[k] = self.clock;
    }

    fn flush(&mut self, state: &SimState) {
        for (k, &v) in state.versions.iter().enumerate() {
            self.touch(k + 1, v);
        }
    }

    fn restart_window(&mut self, state: &SimState) {
        self.flush(state);
        self.node_area.iter_mut().for_each(|a| *a = 0.0);
    }
}

/// Simulates an arbitrary rate set; meetings follow the contact rule.
pub fn simulate_rates(rates: &RateSet<f64>, opts: &SimOptions) -> Result<SimResult> {
    run(&EventTable::from_rates(rates)?, rates.n(), opts)
}

/// Contact mobility: meetings leave both parties with the fresher version.
pub fn simulate_contact(config: &NetworkConfig<f64>, horizon: f64, seed: u64) -> Result<SimResult> {
    simulate_contact_with(config, &SimOptions::new(horizon, seed))
}

pub fn simulate_contact_with(config: &NetworkConfig<f64>, opts: &SimOptions) -> Result<SimResult> {
    simulate_rates(&build_rates(config)?, opts)
}

/// Rate table of the exchange-mobility baseline: self-updates, source pushes
/// at `λ/n` per node, and a position swap at `lambda_m` for every node pair.
pub fn exchange_table(config: &NetworkConfig<f64>, lambda_m: f64) -> Result<EventTable> {
    config.validate()?;
    if config.topology != TopologyKind::Disconnected {
        return Err(Error::UnsupportedTopology);
    }
    if !(lambda_m >= 0.0 && lambda_m.is_finite()) {
        return Err(Error::Domain(format!("exchange rate must be nonnegative, got {lambda_m}")));
    }
    let n = config.n;
    let push = config.source_push_rate();
    let mut entries = vec![(config.lambda_e, Event::SourceSelfUpdate)];
    entries.extend((1..=n).map(|j| (push, Event::SourcePush(j))));
    for i in 1..=n {
        for j in i + 1..=n {
            entries.push((lambda_m, Event::Exchange(i, j)));
        }
    }
    EventTable::new(entries)
}

pub fn simulate_exchange(config: &NetworkConfig<f64>, lambda_m: f64, horizon: f64, seed: u64) -> Result<SimResult> {
    simulate_exchange_with(config, lambda_m, &SimOptions::new(horizon, seed))
}

pub fn simulate_exchange_with(config: &NetworkConfig<f64>, lambda_m: f64, opts: &SimOptions) -> Result<SimResult> {
    run(&exchange_table(config, lambda_m)?, config.n, opts)
}

fn run(table: &EventTable, n: usize, opts: &SimOptions) -> Result<SimResult> {
    opts.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut state = SimState::new(n);
    let mut integ = AgeIntegrator::new(n);
    let warmup_at = opts.horizon * opts.warmup;
    let mut in_window = warmup_at == 0.0;
    let mut events = 0u64;

    loop {
        let (dt, event) = table.sample(&mut rng);
        let next = integ.clock + dt;
        if !in_window && next >= warmup_at {
            integ.advance(warmup_at, state.source_version);
            integ.restart_window(&state);
            in_window = true;
        }
        if next >= opts.horizon {
            integ.advance(opts.horizon, state.source_version);
            break;
        }
        integ.advance(next, state.source_version);
        state.apply_observed(&event, |node, old| integ.touch(node, old));
        events += 1;
    }
    integ.flush(&state);

    let window = opts.horizon - warmup_at;
    let per_node: Vec<f64> = integ.node_area.iter().map(|a| (a / window).max(0.0)).collect();
    let network = per_node.iter().sum::<f64>() / n as f64;
    Ok(SimResult {
        per_node_time_avg_age: per_node,
        network_avg_age: network,
        horizon: opts.horizon,
        window,
        events_processed: events,
        seed: opts.seed,
    })
}
