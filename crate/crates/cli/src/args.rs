use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vaoi::model::{ConfigDocument, ScalingDocument, ScalingKind};
use vaoi::TopologyKind;

use crate::commands::{default_alphas, default_lambda_grid, default_scaling_grid, figure_sim_grid, figure_theory_grid};
use crate::spec::{Command, ExperimentSpec, FigureId};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "vaoi", version, about = "Version age of information in gossip networks with contact mobility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Exact steady-state ages and the closed-form bound.
    Analytic(CommonArgs),
    /// Monte Carlo estimate of the network-average age.
    Simulate(CommonArgs),
    /// Exact age against its bound over a sweep of n.
    Scaling(CommonArgs),
    /// Age/mobility-cost trade-off over a lambda grid.
    Cost(CommonArgs),
    /// Simulation against theory on a grid; exits 1 if any cell fails.
    Validate(CommonArgs),
    /// CSV data behind one of the figure sets fig2..fig7.
    Figures {
        #[arg(value_enum)]
        id: FigureId,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TopologyArg {
    Dc,
    Fc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScalingArg {
    Linear,
    Log,
    Const,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON network config; other flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "lambda-e")]
    pub lambda_e: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub topology: Option<TopologyArg>,
    #[arg(long, value_enum)]
    pub scaling: Option<ScalingArg>,
    /// Constant c of the log and constant scalings.
    #[arg(long)]
    pub c: Option<f64>,
    /// Turns contact mobility off.
    #[arg(long)]
    pub no_mobility: bool,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of each trajectory discarded before averaging.
    #[arg(long)]
    pub warmup: Option<f64>,
    /// Simulate exchange mobility instead of contact mobility.
    #[arg(long, requires = "lambda_m")]
    pub exchange: bool,
    #[arg(long = "lambda-m")]
    pub lambda_m: Option<f64>,
    #[arg(long = "n-list", value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long = "sim-n-list", value_delimiter = ',')]
    pub sim_n_list: Option<Vec<usize>>,
    /// lambda_e / lambda values for validate and figures.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long = "lambda-grid", value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a JSON mirror of the rows.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn topology(arg: TopologyArg) -> TopologyKind {
    match arg {
        TopologyArg::Dc => TopologyKind::Disconnected,
        TopologyArg::Fc => TopologyKind::FullyConnected,
    }
}

fn scaling_kind(arg: ScalingArg) -> ScalingKind {
    match arg {
        ScalingArg::Linear => ScalingKind::Linear,
        ScalingArg::Log => ScalingKind::Log,
        ScalingArg::Const => ScalingKind::Const,
    }
}

impl Sub {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Sub::Analytic(a) | Sub::Simulate(a) | Sub::Scaling(a) | Sub::Cost(a) | Sub::Validate(a) => a,
            Sub::Figures { common, .. } => common,
        }
    }

    pub fn command(&self) -> (Command, Option<FigureId>) {
        match self {
            Sub::Analytic(_) => (Command::Analytic, None),
            Sub::Simulate(_) => (Command::Simulate, None),
            Sub::Scaling(_) => (Command::Scaling, None),
            Sub::Cost(_) => (Command::Cost, None),
            Sub::Validate(_) => (Command::Validate, None),
            Sub::Figures { id, .. } => (Command::Figures, Some(*id)),
        }
    }

    /// Fills every unset flag with its per-command default.
    pub fn resolve(&self) -> Result<ExperimentSpec, CliError> {
        let a = self.common();
        let (command, figure) = self.command();
        let mut doc = match &a.config {
            Some(path) => ConfigDocument::load(path)?,
            None => ConfigDocument {
                n: 4,
                lambda_e: 1.0,
                lambda: 1.0,
                topology: TopologyKind::Disconnected,
                scaling: ScalingDocument { kind: ScalingKind::Linear, c: None },
                mobility: true,
            },
        };
        if let Some(n) = a.n {
            doc.n = n;
        }
        if let Some(x) = a.lambda_e {
            doc.lambda_e = x;
        }
        if let Some(x) = a.lambda {
            doc.lambda = x;
        }
        if let Some(t) = a.topology {
            doc.topology = topology(t);
        }
        if let Some(s) = a.scaling {
            doc.scaling.kind = scaling_kind(s);
        }
        if a.c.is_some() {
            doc.scaling.c = a.c;
        }
        if doc.scaling.kind != ScalingKind::Linear && doc.scaling.c.is_none() {
            doc.scaling.c = Some(5.0);
        }
        if a.no_mobility {
            doc.mobility = false;
        }
        if a.exchange && doc.topology != TopologyKind::Disconnected {
            return Err(CliError::Usage("--exchange requires --topology dc".into()));
        }

        let is = |c: Command| command == c;
        let n_list = a.n_list.clone().unwrap_or_else(|| match command {
            Command::Validate => vec![4, 16],
            Command::Figures => figure_theory_grid(),
            Command::Scaling => default_scaling_grid(),
            _ => vec![doc.n],
        });
        let horizon = a.horizon.unwrap_or(if is(Command::Validate) { 1e6 } else { 1e5 });
        let topologies = match (a.topology, is(Command::Validate)) {
            (None, true) => vec![TopologyKind::Disconnected, TopologyKind::FullyConnected],
            _ => vec![doc.topology],
        };
        let scalings = match (a.scaling, is(Command::Validate)) {
            (None, true) => vec![ScalingKind::Linear, ScalingKind::Log, ScalingKind::Const],
            _ => vec![doc.scaling.kind],
        };
        let spec = ExperimentSpec {
            command,
            figure,
            config: doc,
            n_list,
            sim_n_list: a.sim_n_list.clone().unwrap_or_else(figure_sim_grid),
            ratios: a.ratios.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0, 5.0]),
            topologies,
            scalings,
            horizon,
            replications: a.reps.unwrap_or(10),
            seed: a.seed.unwrap_or(1),
            warmup: a.warmup.unwrap_or(0.0),
            alphas: a.alphas.clone().unwrap_or_else(default_alphas),
            lambda_grid: a.lambda_grid.clone().unwrap_or_else(default_lambda_grid),
            exchange: if a.exchange { a.lambda_m } else { None },
        };
        spec.validate().map_err(CliError::Usage)?;
        Ok(spec)
    }
}
