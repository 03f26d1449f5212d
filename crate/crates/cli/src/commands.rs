use vaoi::analytic::v_exchange_dc;
use vaoi::cost::{cost_sweep, log_grid};
use vaoi::model::ScalingKind;
use vaoi::scaling::{default_n_grid, growth_envelope, upper_bound_v1};
use vaoi::sim::{monte_carlo, MobilityMode, MonteCarloSummary, SimOptions};
use vaoi::{v_symmetric, Config, MobilityScaling, Scaling, TopologyKind};

use crate::output::{Row, Source};
use crate::spec::{ExperimentSpec, FigureId};
use crate::CliError;

/// `|z|` above which a validation cell fails.
pub const VALIDATION_Z: f64 = 3.0;

#[derive(Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    /// Human-readable lines for stdout when the CSV goes to a file.
    pub report: Vec<String>,
    pub all_pass: bool,
}

pub fn scaling_from(kind: ScalingKind, c: f64) -> Scaling {
    match kind {
        ScalingKind::Linear => MobilityScaling::Linear,
        ScalingKind::Log => MobilityScaling::LogScaled { c },
        ScalingKind::Const => MobilityScaling::Constant { c },
    }
}

fn base_row(config: &Config, source: Source, value: f64) -> Row {
    Row {
        topology: config.topology.name().into(),
        scaling: config.scaling.name().into(),
        c: config.scaling.c(),
        n: config.n,
        lambda_e: config.lambda_e,
        lambda: config.lambda,
        source,
        value,
        ci_half_width: None,
        seed: None,
        alpha: None,
        note: String::new(),
    }
}

fn exchange_row(config: &Config, lambda_m: f64, source: Source, value: f64) -> Row {
    Row { scaling: "exchange".into(), c: Some(lambda_m), ..base_row(config, source, value) }
}

fn summary_row(config: &Config, mode: MobilityMode, mc: &MonteCarloSummary, seed: u64) -> Row {
    let row = match mode {
        MobilityMode::Contact => base_row(config, Source::Simulation, mc.mean),
        MobilityMode::Exchange { lambda_m } => exchange_row(config, lambda_m, Source::Simulation, mc.mean),
    };
    Row { ci_half_width: Some(mc.half_width_95), seed: Some(seed), ..row }
}

fn theory_v1(config: &Config, mode: MobilityMode) -> Result<f64, CliError> {
    Ok(match mode {
        MobilityMode::Contact => v_symmetric(config)?.v1(),
        MobilityMode::Exchange { .. } => v_exchange_dc(config.n, config.lambda_e, config.lambda)?,
    })
}

fn mode_of(spec: &ExperimentSpec) -> MobilityMode {
    spec.exchange.map_or(MobilityMode::Contact, |lambda_m| MobilityMode::Exchange { lambda_m })
}

fn sim_options(spec: &ExperimentSpec, seed: u64) -> SimOptions {
    SimOptions::new(spec.horizon, seed).with_warmup(spec.warmup)
}

/// Exact ages and bounds for the configured network.
pub fn run_analytic(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let config: Config = spec.config.to_config()?;
    let mut out = RunOutput { all_pass: true, ..Default::default() };
    if let Some(lambda_m) = spec.exchange {
        let v = v_exchange_dc(config.n, config.lambda_e, config.lambda)?;
        out.rows.push(exchange_row(&config, lambda_m, Source::Theory, v));
        out.report.push(format!("exchange mobility: v = {v}"));
        return Ok(out);
    }
    let profile = v_symmetric(&config)?;
    for (k, &v) in profile.as_slice().iter().enumerate() {
        out.rows.push(Row { note: format!("j={}", k + 1), ..base_row(&config, Source::Theory, v) });
    }
    out.report.push(format!("v1 = {}", profile.v1()));
    if config.n >= 2 && config.mobility_enabled {
        let bound = upper_bound_v1(config.scaling, config.topology, config.n, config.lambda_e, config.lambda)?;
        out.rows.push(Row { note: "j=1".into(), ..base_row(&config, Source::Bound, bound) });
        out.report.push(format!("upper bound = {bound}"));
    }
    Ok(out)
}

pub fn run_simulate(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let config: Config = spec.config.to_config()?;
    let mode = mode_of(spec);
    let mc = monte_carlo(&config, mode, &sim_options(spec, spec.seed), spec.replications)?;
    let mut out = RunOutput { all_pass: true, ..Default::default() };
    for run in &mc.runs {
        let mut row = summary_row(&config, mode, &mc, run.seed);
        row.value = run.network_avg_age;
        row.ci_half_width = None;
        row.note = "replication".into();
        out.rows.push(row);
    }
    out.rows.push(Row { note: "mean".into(), ..summary_row(&config, mode, &mc, spec.seed) });
    let theory = theory_v1(&config, mode)?;
    out.rows.push(match mode {
        MobilityMode::Contact => base_row(&config, Source::Theory, theory),
        MobilityMode::Exchange { lambda_m } => exchange_row(&config, lambda_m, Source::Theory, theory),
    });
    out.report.push(format!(
        "simulated {:.6} ± {:.6} (95%), theory {:.6}, z = {:.2}",
        mc.mean,
        mc.half_width_95,
        theory,
        mc.z_score(theory)
    ));
    Ok(out)
}

pub fn run_scaling(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let config: Config = spec.config.to_config()?;
    let report = vaoi::scaling_sweep(config.scaling, config.topology, &spec.n_list, config.lambda_e, config.lambda)?;
    let mut out = RunOutput { all_pass: report.violations().is_empty(), ..Default::default() };
    for s in &report.samples {
        let at_n = config.with_n(s.n);
        let note = format!("ratio_to_envelope={}", crate::output::fmt_g12(s.ratio));
        out.rows.push(Row { note: note.clone(), ..base_row(&at_n, Source::Theory, s.v1_exact) });
        out.rows.push(Row { note, ..base_row(&at_n, Source::Bound, s.upper_bound) });
        out.report.push(format!(
            "n={:>6} v1={:.6e} bound={:.6e} v1/g(n)={:.4}",
            s.n,
            s.v1_exact,
            s.upper_bound,
            s.v1_exact / growth_envelope(config.scaling, s.n)
        ));
    }
    out.report.push(format!("max ratio {:.4}, {} bound violations", report.max_ratio, report.violations().len()));
    Ok(out)
}

pub fn run_cost(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let config: Config = spec.config.to_config()?;
    cost_rows(&config, &spec.alphas, &spec.lambda_grid)
}

fn cost_rows(config: &Config, alphas: &[f64], grid: &[f64]) -> Result<RunOutput, CliError> {
    let sweep = cost_sweep(alphas, grid, config.scaling, config.topology, config.n, config.lambda_e)?;
    let mut out = RunOutput { all_pass: true, ..Default::default() };
    for row in &sweep.rows {
        let at = config.with_lambda(row.lambda);
        let mark = |flag: bool| if flag { "cost;argmin" } else { "cost" }.to_string();
        out.rows.push(Row {
            alpha: Some(row.alpha),
            note: mark(row.exact_argmin),
            ..base_row(&at, Source::Theory, row.exact_cost)
        });
        out.rows.push(Row {
            alpha: Some(row.alpha),
            note: mark(row.bound_argmin),
            ..base_row(&at, Source::Bound, row.bound_cost)
        });
    }
    for p in &sweep.profiles {
        let at = config.with_lambda(p.lambda_star);
        out.rows.push(Row { alpha: Some(p.alpha), note: "lambda_star".into(), ..base_row(&at, Source::Bound, p.j_star) });
        let grid_best = sweep.rows_for(p.alpha).find(|r| r.bound_argmin).map(|r| r.lambda).unwrap_or(f64::NAN);
        out.report.push(format!(
            "{} alpha={} K={:.6} lambda*={:.6} J*={:.6} grid argmin lambda={:.6}",
            config.scaling, p.alpha, p.k, p.lambda_star, p.j_star, grid_best
        ));
    }
    Ok(out)
}

struct Cell {
    config: Config,
    mode: MobilityMode,
}

fn validation_cells(spec: &ExperimentSpec) -> Result<Vec<Cell>, CliError> {
    let lambda = spec.config.lambda;
    let mut cells = Vec::new();
    if let Some(lambda_m) = spec.exchange {
        for &n in &spec.n_list {
            for &ratio in &spec.ratios {
                let config = Config::new(n, ratio * lambda, lambda, TopologyKind::Disconnected, MobilityScaling::Linear)?;
                cells.push(Cell { config, mode: MobilityMode::Exchange { lambda_m } });
            }
        }
        return Ok(cells);
    }
    for &topology in &spec.topologies {
        for &kind in &spec.scalings {
            for &n in &spec.n_list {
                for &ratio in &spec.ratios {
                    let scaling = scaling_from(kind, spec.c());
                    let config = Config::new(n, ratio * lambda, lambda, topology, scaling)?;
                    cells.push(Cell { config, mode: MobilityMode::Contact });
                }
            }
        }
    }
    Ok(cells)
}

/// Simulation against theory on every grid cell; a cell passes at `|z| <= 3`.
pub fn run_validate(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let mut out = RunOutput { all_pass: true, ..Default::default() };
    let cells = validation_cells(spec)?;
    let mut passed = 0;
    for (k, cell) in cells.iter().enumerate() {
        let seed = spec.seed.wrapping_add(1_000 * k as u64);
        let theory = theory_v1(&cell.config, cell.mode)?;
        let mc = monte_carlo(&cell.config, cell.mode, &sim_options(spec, seed), spec.replications)?;
        let z = mc.z_score(theory);
        let pass = z.abs() <= VALIDATION_Z;
        passed += pass as usize;
        out.all_pass &= pass;
        let verdict = if pass { "PASS" } else { "FAIL" };
        let sim = summary_row(&cell.config, cell.mode, &mc, seed);
        let theory_row = Row { ci_half_width: None, seed: None, source: Source::Theory, value: theory, ..sim.clone() };
        out.report.push(format!(
            "{verdict} {}/{}/n={}/ratio={}: theory {:.6} sim {:.6} ± {:.6} z={:.2}",
            sim.topology,
            sim.scaling,
            cell.config.n,
            cell.config.lambda_e / cell.config.lambda,
            theory,
            mc.mean,
            mc.half_width_95,
            z
        ));
        out.rows.push(theory_row);
        out.rows.push(Row { note: format!("z={:.4};{verdict}", z), ..sim });
    }
    out.report.push(format!("{passed}/{} cells pass", cells.len()));
    Ok(out)
}

/// Theory grid used by the figure data when no n list is given.
pub fn figure_theory_grid() -> Vec<usize> {
    (2..=20).chain((5..=10).map(|k| 1usize << k)).collect()
}

pub fn figure_sim_grid() -> Vec<usize> {
    vec![2, 4, 8, 16]
}

/// Rows behind one figure.
///
/// Figs. 2 to 6 use `λ = 1`, `c = 5` and `λ_e ∈ {0.5, 1, 2, 5}`; Figs. 2, 4
/// and 6 add simulated points. Fig. 7 is the cost trade-off at `n = 1000`,
/// `λ_e = 1`, `c = 1` for the disconnected network.
pub fn run_figure_data(figure: FigureId, spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    let (theory_grid, sim_grid) = (&spec.n_list, &spec.sim_n_list);
    let c = spec.config.scaling.c.unwrap_or(if figure == FigureId::Fig7 { 1.0 } else { 5.0 });
    let (scaling, simulate) = match figure {
        FigureId::Fig2 => (MobilityScaling::Linear, true),
        FigureId::Fig3 => (MobilityScaling::LogScaled { c }, false),
        FigureId::Fig4 => (MobilityScaling::LogScaled { c }, true),
        FigureId::Fig5 => (MobilityScaling::Constant { c }, false),
        FigureId::Fig6 => (MobilityScaling::Constant { c }, true),
        FigureId::Fig7 => {
            let mut out = RunOutput { all_pass: true, ..Default::default() };
            for s in [MobilityScaling::Linear, MobilityScaling::LogScaled { c }, MobilityScaling::Constant { c }] {
                let config = Config::new(1000, 1.0, 1.0, TopologyKind::Disconnected, s)?;
                let part = cost_rows(&config, &spec.alphas, &spec.lambda_grid)?;
                out.rows.extend(part.rows);
                out.report.extend(part.report);
            }
            return Ok(out);
        }
    };
    let mut out = RunOutput { all_pass: true, ..Default::default() };
    let mut cell = 0u64;
    for topology in [TopologyKind::Disconnected, TopologyKind::FullyConnected] {
        for &ratio in &spec.ratios {
            for &n in theory_grid.iter() {
                let config = Config::new(n, ratio, 1.0, topology, scaling)?;
                out.rows.push(base_row(&config, Source::Theory, v_symmetric(&config)?.v1()));
            }
            if !simulate {
                continue;
            }
            for &n in sim_grid.iter() {
                let config = Config::new(n, ratio, 1.0, topology, scaling)?;
                let seed = spec.seed.wrapping_add(1_000 * cell);
                cell += 1;
                let mc = monte_carlo(&config, MobilityMode::Contact, &sim_options(spec, seed), spec.replications)?;
                out.rows.push(summary_row(&config, MobilityMode::Contact, &mc, seed));
            }
        }
    }
    out.report.push(format!("{} rows", out.rows.len()));
    Ok(out)
}

pub fn default_alphas() -> Vec<f64> {
    vec![0.1, 0.3, 0.5, 0.7, 0.9]
}

pub fn default_lambda_grid() -> Vec<f64> {
    log_grid(1e-3, 1e2, 201)
}

pub fn default_scaling_grid() -> Vec<usize> {
    default_n_grid()
}
