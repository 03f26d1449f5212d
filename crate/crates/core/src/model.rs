//! Network configuration, topology and per-pair rate construction.
//!
//! Node ids run over `1..=n`; id `0` is the source. Every matrix in a
//! [`RateSet`] is `(n + 1) x (n + 1)` so the same ids index all of them.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How the pairwise mobility rate `λ / f(n)` scales with network size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobilityScaling<T> {
    /// `f(n) = n`
    Linear,
    /// `f(n) = c ln n`
    LogScaled { c: T },
    /// `f(n) = c`
    Constant { c: T },
}

impl<T: Scalar> MobilityScaling<T> {
    pub fn c(&self) -> Option<T> {
        match *self {
            MobilityScaling::Linear => None,
            MobilityScaling::LogScaled { c } | MobilityScaling::Constant { c } => Some(c),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MobilityScaling::Linear => "linear",
            MobilityScaling::LogScaled { .. } => "log",
            MobilityScaling::Constant { .. } => "const",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.c() {
            Some(c) if !(c > T::zero() && c.is_finite()) => {
                Err(Error::InvalidConfig(format!("scaling constant c must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Smallest node count for which `f(n) > 0`.
    pub fn min_nodes(&self) -> usize {
        match self {
            MobilityScaling::LogScaled { .. } => 2,
            _ => 1,
        }
    }
}

impl<T: Scalar> fmt::Display for MobilityScaling<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MobilityScaling::Linear => write!(f, "f(n)=n"),
            MobilityScaling::LogScaled { c } => write!(f, "f(n)={c}ln(n)"),
            MobilityScaling::Constant { c } => write!(f, "f(n)={c}"),
        }
    }
}

/// Evaluates the mobility scaling function `f(n)`.
pub fn f_eval<T: Scalar>(scaling: MobilityScaling<T>, n: usize) -> Result<T> {
    scaling.validate()?;
    if n < scaling.min_nodes() {
        return Err(Error::Domain(format!(
            "{} needs n >= {}, got {n}",
            scaling,
            scaling.min_nodes()
        )));
    }
    let nn = T::from_count(n);
    Ok(match scaling {
        MobilityScaling::Linear => nn,
        MobilityScaling::LogScaled { c } => c * nn.ln(),
        MobilityScaling::Constant { c } => c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    /// No gossip links between nodes.
    #[serde(rename = "dc")]
    Disconnected,
    /// Every ordered node pair gossips at `λ / (n - 1)`.
    #[serde(rename = "fc")]
    FullyConnected,
}

impl TopologyKind {
    pub fn name(&self) -> &'static str {
        match self {
            TopologyKind::Disconnected => "dc",
            TopologyKind::FullyConnected => "fc",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig<T> {
    /// Number of nodes, source excluded.
    pub n: usize,
    /// Source self-update rate.
    pub lambda_e: T,
    /// Aggregate source-to-nodes rate; also the base gossip and mobility rate.
    pub lambda: T,
    pub topology: TopologyKind,
    pub scaling: MobilityScaling<T>,
    pub mobility_enabled: bool,
}

impl<T: Scalar> NetworkConfig<T> {
    pub fn new(
        n: usize,
        lambda_e: T,
        lambda: T,
        topology: TopologyKind,
        scaling: MobilityScaling<T>,
    ) -> Result<Self> {
        let config = NetworkConfig { n, lambda_e, lambda, topology, scaling, mobility_enabled: true };
        config.validate()?;
        Ok(config)
    }

    pub fn without_mobility(mut self) -> Self {
        self.mobility_enabled = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.lambda_e > T::zero() && self.lambda_e.is_finite()) {
            return Err(Error::InvalidConfig(format!("lambda_e must be positive, got {}", self.lambda_e)));
        }
        if !(self.lambda > T::zero() && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!("lambda must be positive, got {}", self.lambda)));
        }
        self.scaling.validate()?;
        if self.n < self.scaling.min_nodes() {
            return Err(Error::InvalidConfig(format!(
                "{} needs n >= {}, got {}",
                self.scaling,
                self.scaling.min_nodes(),
                self.n
            )));
        }
        Ok(())
    }

    /// Rate `λ / f(n)` of every mobility pair, or zero with mobility off.
    pub fn mobility_pair_rate(&self) -> Result<T> {
        if !self.mobility_enabled {
            return Ok(T::zero());
        }
        Ok(self.lambda / f_eval(self.scaling, self.n)?)
    }

    /// Rate `λ / (n - 1)` of every gossip link, or zero when disconnected.
    pub fn gossip_pair_rate(&self) -> T {
        match self.topology {
            TopologyKind::FullyConnected if self.n > 1 => self.lambda / T::from_count(self.n - 1),
            _ => T::zero(),
        }
    }

    pub fn source_push_rate(&self) -> T {
        self.lambda / T::from_count(self.n)
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_lambda_e(mut self, lambda_e: T) -> Self {
        self.lambda_e = lambda_e;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn to_f64(&self) -> NetworkConfig<f64> {
        NetworkConfig {
            n: self.n,
            lambda_e: self.lambda_e.to_f64_lossy(),
            lambda: self.lambda.to_f64_lossy(),
            topology: self.topology,
            scaling: match self.scaling {
                MobilityScaling::Linear => MobilityScaling::Linear,
                MobilityScaling::LogScaled { c } => MobilityScaling::LogScaled { c: c.to_f64_lossy() },
                MobilityScaling::Constant { c } => MobilityScaling::Constant { c: c.to_f64_lossy() },
            },
            mobility_enabled: self.mobility_enabled,
        }
    }
}

/// Dense square matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == T::zero())
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

/// Fully expanded event rates of one network.
///
/// `source_to_node[j - 1]` is `λ_{0j}`. `gossip[(i, j)]` is the rate at which
/// node `i` pushes to node `j`; row and column 0 are unused. `mobility` is
/// symmetric over `{0} ∪ 𝒩` with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSet<T> {
    n: usize,
    pub lambda_e: T,
    pub source_to_node: Vec<T>,
    pub gossip: SquareMatrix<T>,
    pub mobility: SquareMatrix<T>,
}

impl<T: Scalar> RateSet<T> {
    /// All rates zero except the source self-update rate.
    pub fn empty(n: usize, lambda_e: T) -> Self {
        RateSet {
            n,
            lambda_e,
            source_to_node: vec![T::zero(); n],
            gossip: SquareMatrix::zeros(n + 1),
            mobility: SquareMatrix::zeros(n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source_push(&self, j: usize) -> T {
        self.source_to_node[j - 1]
    }

    pub fn set_source_push(&mut self, j: usize, rate: T) -> Result<()> {
        self.check_node(j)?;
        self.source_to_node[j - 1] = rate;
        Ok(())
    }

    /// Sets the directed gossip rate from node `i` to node `j`.
    pub fn set_gossip(&mut self, i: usize, j: usize, rate: T) -> Result<()> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::InvalidConfig("gossip needs two distinct nodes".into()));
        }
        self.gossip[(i, j)] = rate;
        Ok(())
    }

    /// Sets the unordered mobility rate of `{i, j}`; either may be the source.
    pub fn set_mobility(&mut self, i: usize, j: usize, rate: T) -> Result<()> {
        for k in [i, j] {
            if k > self.n {
                return Err(Error::IndexOutOfRange { index: k, n: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidConfig("a meeting needs two distinct parties".into()));
        }
        self.mobility[(i, j)] = rate;
        self.mobility[(j, i)] = rate;
        Ok(())
    }

    fn check_node(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n {
            Err(Error::IndexOutOfRange { index: j, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |x: T| !(x >= T::zero() && x.is_finite());
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if bad(self.lambda_e) {
            return Err(Error::InvalidConfig("lambda_e must be finite and nonnegative".into()));
        }
        if self.source_to_node.iter().any(|&x| bad(x)) {
            return Err(Error::InvalidConfig("source rates must be finite and nonnegative".into()));
        }
        for i in 0..=self.n {
            if self.gossip[(i, i)] != T::zero() || self.mobility[(i, i)] != T::zero() {
                return Err(Error::InvalidConfig("rate matrices need a zero diagonal".into()));
            }
            for j in 0..=self.n {
                if bad(self.gossip[(i, j)]) || bad(self.mobility[(i, j)]) {
                    return Err(Error::InvalidConfig("pair rates must be finite and nonnegative".into()));
                }
                if (i == 0 || j == 0) && self.gossip[(i, j)] != T::zero() {
                    return Err(Error::InvalidConfig("the source does not gossip".into()));
                }
                if self.mobility[(i, j)] != self.mobility[(j, i)] {
                    return Err(Error::InvalidConfig("mobility rates must be symmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Every distinct pair over `{0} ∪ 𝒩` has a positive meeting rate.
    pub fn has_full_mobility(&self) -> bool {
        (0..=self.n).all(|i| (i + 1..=self.n).all(|j| self.mobility[(i, j)] > T::zero()))
    }

    /// Sum of every event rate, `λ_e` included.
    pub fn total_rate(&self) -> T {
        let mut total = self.lambda_e;
        for &r in &self.source_to_node {
            total = total + r;
        }
        for i in 0..=self.n {
            for j in 0..=self.n {
                total = total + self.gossip[(i, j)];
                if i < j {
                    total = total + self.mobility[(i, j)];
                }
            }
        }
        total
    }
}

/// Builds the symmetric rate set of a configuration.
pub fn build_rates<T: Scalar>(config: &NetworkConfig<T>) -> Result<RateSet<T>> {
    config.validate()?;
    let n = config.n;
    let mut rates = RateSet::empty(n, config.lambda_e);
    let push = config.source_push_rate();
    let gossip = config.gossip_pair_rate();
    let meet = config.mobility_pair_rate()?;
    rates.source_to_node.iter_mut().for_each(|r| *r = push);
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                rates.gossip[(i, j)] = gossip;
            }
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                rates.mobility[(i, j)] = meet;
            }
        }
    }
    Ok(rates)
}

/// On-disk config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub n: usize,
    pub lambda_e: f64,
    pub lambda: f64,
    pub topology: TopologyKind,
    pub scaling: ScalingDocument,
    #[serde(default = "default_true")]
    pub mobility: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingKind {
    Linear,
    Log,
    Const,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingDocument {
    pub kind: ScalingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl ScalingDocument {
    pub fn to_scaling<T: Scalar>(&self) -> Result<MobilityScaling<T>> {
        let c = || {
            self.c
                .map(T::lit)
                .ok_or_else(|| Error::InvalidConfig(format!("scaling kind {:?} needs c", self.kind)))
        };
        let scaling = match self.kind {
            ScalingKind::Linear => MobilityScaling::Linear,
            ScalingKind::Log => MobilityScaling::LogScaled { c: c()? },
            ScalingKind::Const => MobilityScaling::Constant { c: c()? },
        };
        scaling.validate()?;
        Ok(scaling)
    }

    pub fn from_scaling<T: Scalar>(scaling: &MobilityScaling<T>) -> Self {
        let (kind, c) = match *scaling {
            MobilityScaling::Linear => (ScalingKind::Linear, None),
            MobilityScaling::LogScaled { c } => (ScalingKind::Log, Some(c.to_f64_lossy())),
            MobilityScaling::Constant { c } => (ScalingKind::Const, Some(c.to_f64_lossy())),
        };
        ScalingDocument { kind, c }
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_config<T: Scalar>(&self) -> Result<NetworkConfig<T>> {
        let config = NetworkConfig {
            n: self.n,
            lambda_e: T::lit(self.lambda_e),
            lambda: T::lit(self.lambda),
            topology: self.topology,
            scaling: self.scaling.to_scaling()?,
            mobility_enabled: self.mobility,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_config<T: Scalar>(config: &NetworkConfig<T>) -> Self {
        ConfigDocument {
            n: config.n,
            lambda_e: config.lambda_e.to_f64_lossy(),
            lambda: config.lambda.to_f64_lossy(),
            topology: config.topology,
            scaling: ScalingDocument::from_scaling(&config.scaling),
            mobility: config.mobility_enabled,
        }
    }
}
