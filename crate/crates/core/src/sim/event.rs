use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::model::RateSet;

/// One transition of the version process. Node ids are `1..=n`, `0` is the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    /// The source moves to a new version.
    SourceSelfUpdate,
    /// The source pushes its current version to a node.
    SourcePush(usize),
    /// Node `from` pushes its version to node `to`.
    Gossip { from: usize, to: usize },
    /// Two parties meet and both keep the fresher version. Either may be the source.
    ContactMeet(usize, usize),
    /// Two nodes swap positions, and with them their versions.
    Exchange(usize, usize),
}

/// Version counters of the source and every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    pub source_version: u64,
    /// `versions[i - 1]` is `N_i`.
    pub versions: Vec<u64>,
}

impl SimState {
    pub fn new(n: usize) -> Self {
        SimState { source_version: 0, versions: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.versions.len()
    }

    pub fn version(&self, party: usize) -> u64 {
        if party == 0 {
            self.source_version
        } else {
            self.versions[party - 1]
        }
    }

    /// `Δ_i = N_s - N_i`
    pub fn age(&self, node: usize) -> u64 {
        self.source_version - self.versions[node - 1]
    }

    pub fn ages(&self) -> Vec<u64> {
        self.versions.iter().map(|v| self.source_version - v).collect()
    }

    fn check(&self, party: usize, allow_source: bool) -> Result<()> {
        if party > self.n() || (party == 0 && !allow_source) {
            Err(Error::IndexOutOfRange { index: party, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn validate_event(&self, event: &Event) -> Result<()> {
        match *event {
            Event::SourceSelfUpdate => Ok(()),
            Event::SourcePush(j) => self.check(j, false),
            Event::Gossip { from, to } | Event::Exchange(from, to) => {
                self.check(from, false)?;
                self.check(to, false)?;
                if from == to {
                    return Err(Error::InvalidConfig("event needs two distinct nodes".into()));
                }
                Ok(())
            }
            Event::ContactMeet(i, j) => {
                self.check(i, true)?;
                self.check(j, true)?;
                if i == j {
                    return Err(Error::InvalidConfig("a meeting needs two distinct parties".into()));
                }
                Ok(())
            }
        }
    }

    pub fn apply(&mut self, event: &Event) -> Result<()> {
        self.validate_event(event)?;
        self.apply_observed(event, |_, _| {});
        Ok(())
    }

    /// Applies a pre-validated event. `before_change(node, old_version)` runs
    /// right before a node's version is overwritten.
    pub(crate) fn apply_observed(&mut self, event: &Event, mut before_change: impl FnMut(usize, u64)) {
        let mut set = |versions: &mut [u64], node: usize, value: u64| {
            let slot = &mut versions[node - 1];
            if *slot != value {
                before_change(node, *slot);
                *slot = value;
            }
        };
        match *event {
            Event::SourceSelfUpdate => self.source_version += 1,
            Event::SourcePush(j) => set(&mut self.versions, j, self.source_version),
            Event::Gossip { from, to } => {
                let fresher = self.versions[from - 1].max(self.versions[to - 1]);
                set(&mut self.versions, to, fresher);
            }
            Event::ContactMeet(0, j) | Event::ContactMeet(j, 0) => set(&mut self.versions, j, self.source_version),
            Event::ContactMeet(i, j) => {
                let fresher = self.versions[i - 1].max(self.versions[j - 1]);
                set(&mut self.versions, i, fresher);
                set(&mut self.versions, j, fresher);
            }
            Event::Exchange(i, j) => {
                let (vi, vj) = (self.versions[i - 1], self.versions[j - 1]);
                set(&mut self.versions, i, vj);
                set(&mut self.versions, j, vi);
            }
        }
    }
}

/// Applies one event to a copy of the state.
pub fn apply_event(state: &SimState, event: Event) -> Result<SimState> {
    let mut next = state.clone();
    next.apply(&event)?;
    Ok(next)
}

/// Superposition of independent Poisson clocks as one exponential clock plus
/// a categorical choice proportional to rate (Walker alias table).
#[derive(Debug, Clone)]
pub struct EventTable {
    alias: WeightedAliasIndex<f64>,
    rates: Vec<f64>,
    events: Vec<Event>,
    total: f64,
}

impl EventTable {
    /// Builds a table from `(rate, event)` pairs; zero rates are dropped.
    pub fn new(entries: impl IntoIterator<Item = (f64, Event)>) -> Result<Self> {
        let mut rates = Vec::new();
        let mut events = Vec::new();
        for (rate, event) in entries {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::InvalidConfig(format!("bad rate {rate} for {event:?}")));
            }
            if rate > 0.0 {
                rates.push(rate);
                events.push(event);
            }
        }
        if events.is_empty() {
            return Err(Error::ZeroTotalRate);
        }
        let total = rates.iter().sum();
        let alias = WeightedAliasIndex::new(rates.clone()).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(EventTable { alias, rates, events, total })
    }

    /// Every transition with a positive rate in the rate set.
    pub fn from_rates(rates: &RateSet<f64>) -> Result<Self> {
        rates.validate()?;
        let n = rates.n();
        let mut entries = vec![(rates.lambda_e, Event::SourceSelfUpdate)];
        entries.extend((1..=n).map(|j| (rates.source_push(j), Event::SourcePush(j))));
        for from in 1..=n {
            for to in 1..=n {
                if from != to {
                    entries.push((rates.gossip[(from, to)], Event::Gossip { from, to }));
                }
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                entries.push((rates.mobility[(i, j)], Event::ContactMeet(i, j)));
            }
        }
        Self::new(entries)
    }

    pub fn total_rate(&self) -> f64 {
        self.total
    }

    /// `(rate, event)` for every transition with a positive rate.
    pub fn entries(&self) -> impl Iterator<Item = (f64, Event)> + '_ {
        self.rates.iter().copied().zip(self.events.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, Event) {
        let e: f64 = Exp1.sample(rng);
        let dt = e / self.total;
        (dt, self.events[self.alias.sample(rng)])
    }
}

/// Draws the time to the next event and its kind.
///
/// Builds the rate table on every call; loops should build an [`EventTable`] once.
pub fn sample_next_event<R: Rng + ?Sized>(rates: &RateSet<f64>, rng: &mut R) -> Result<(f64, Event)> {
    Ok(EventTable::from_rates(rates)?.sample(rng))
}
