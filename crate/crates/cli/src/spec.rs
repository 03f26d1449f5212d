//! Resolved description of one CLI run. Its JSON form is hashed into the
//! metadata line of every output file.

use serde::{Deserialize, Serialize};

use vaoi::model::{ConfigDocument, ScalingKind};
use vaoi::TopologyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analytic,
    Simulate,
    Scaling,
    Cost,
    Validate,
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub figure: Option<FigureId>,
    pub config: ConfigDocument,
    pub n_list: Vec<usize>,
    /// Node counts of simulated figure points.
    pub sim_n_list: Vec<usize>,
    /// `λ_e / λ` values; `λ` stays at `config.lambda`.
    pub ratios: Vec<f64>,
    pub topologies: Vec<TopologyKind>,
    pub scalings: Vec<ScalingKind>,
    pub horizon: f64,
    pub replications: usize,
    pub seed: u64,
    pub warmup: f64,
    pub alphas: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    /// Exchange mobility rate; `None` means contact mobility.
    pub exchange: Option<f64>,
}

impl ExperimentSpec {
    pub fn c(&self) -> f64 {
        self.config.scaling.c.unwrap_or(5.0)
    }

    pub fn validate(&self) -> Result<(), String> {
        let lists: [(&str, bool); 6] = [
            ("n list", self.n_list.is_empty()),
            ("ratio list", self.ratios.is_empty()),
            ("topology list", self.topologies.is_empty()),
            ("scaling list", self.scalings.is_empty()),
            ("alpha list", self.alphas.is_empty()),
            ("lambda grid", self.lambda_grid.is_empty()),
        ];
        if let Some((name, _)) = lists.iter().find(|(_, empty)| *empty) {
            return Err(format!("{name} must not be empty"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.replications < 2 && matches!(self.command, Command::Simulate | Command::Validate) {
            return Err("at least 2 replications are needed for a confidence interval".into());
        }
        if !(0.0..1.0).contains(&self.warmup) {
            return Err(format!("warmup must lie in [0, 1), got {}", self.warmup));
        }
        if self.ratios.iter().any(|r| r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
            return Err("ratios must be positive".into());
        }
        Ok(())
    }
}
