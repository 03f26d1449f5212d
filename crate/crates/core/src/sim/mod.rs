//! Event-driven Monte Carlo simulation of the version-age process.

mod engine;
mod event;
mod monte_carlo;

pub use engine::{
    exchange_table, simulate_contact, simulate_contact_with, simulate_exchange, simulate_exchange_with,
    simulate_rates, SimOptions, SimResult, RNG_NAME,
};
pub use event::{apply_event, sample_next_event, Event, EventTable, SimState};
pub use monte_carlo::{monte_carlo, summarize, two_sample_z, MobilityMode, MonteCarloSummary, Z_95};
