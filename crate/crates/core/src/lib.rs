//! Steady-state version age of information in gossip networks with contact
//! mobility.
//!
//! - [`model`]: configuration, topology and rate construction.
//! - [`analytic`]: exact ages from the subset recursion and the symmetric
//!   cardinality recursions.
//! - [`scaling`]: closed-form upper bounds on the single-node age.
//! - [`sim`]: event-driven Monte Carlo simulation.
//! - [`cost`]: the age/mobility-cost trade-off.
//!
//! The analytic modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod analytic;
pub mod cost;
pub mod error;
pub mod model;
pub mod scalar;
pub mod scaling;
pub mod sim;

pub use analytic::{
    solve_subset_dp, solve_subset_dp_with_cap, v_closed_form_dc_linear, v_exchange_dc, v_n_terminal,
    v_symmetric, SubsetAgeTable, SymmetricAgeProfile,
};
pub use cost::{cost_j, cost_sweep, optimal_cost, optimal_lambda, CostProfile, CostSweep};
pub use error::{Error, Result};
pub use model::{build_rates, f_eval, ConfigDocument, MobilityScaling, NetworkConfig, RateSet, TopologyKind};
pub use scalar::{harmonic, Scalar};
pub use scaling::{k_constant, scaling_sweep, upper_bound_v1, ScalingReport};

pub type Config = NetworkConfig<f64>;
pub type Rates = RateSet<f64>;
pub type Scaling = MobilityScaling<f64>;
pub type AgeTable = SubsetAgeTable<f64>;
pub type AgeProfile = SymmetricAgeProfile<f64>;
pub type Report = ScalingReport<f64>;
pub type Profile = CostProfile<f64>;
pub type Sweep = CostSweep<f64>;
