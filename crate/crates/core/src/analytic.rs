//! Exact steady-state version ages.
//!
//! [`solve_subset_dp`] handles arbitrary rate sets by back-substituting the
//! subset balance equation over all `2^n - 1` node subsets. [`v_symmetric`]
//! is the `O(n)` cardinality recursion for the symmetric DC/FC settings.

use crate::error::{Error, Result};
use crate::model::{MobilityScaling, NetworkConfig, RateSet, TopologyKind};
use crate::scalar::{harmonic, Scalar};

/// Largest node count [`solve_subset_dp`] accepts by default.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Expected minimum age `ṽ_S` for every nonempty node subset `S`.
///
/// Subsets are bitmasks with bit `i - 1` standing for node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetAgeTable<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> SubsetAgeTable<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// `ṽ_S` for a nonempty bitmask.
    pub fn get(&self, mask: u64) -> T {
        assert!(mask != 0 && mask <= self.full_mask(), "subset mask {mask:#x} out of range");
        self.values[mask as usize]
    }

    /// `ṽ_S` for a list of 1-based node ids.
    pub fn get_nodes(&self, nodes: &[usize]) -> T {
        self.get(mask_of(nodes))
    }

    /// Iterates `(mask, ṽ_S)` over every nonempty subset.
    pub fn iter(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.values.iter().enumerate().skip(1).map(|(m, &v)| (m as u64, v))
    }

    /// Mean of `ṽ_S` over all subsets of the given size.
    pub fn mean_of_cardinality(&self, size: usize) -> T {
        let (sum, count) = self
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == size)
            .fold((T::zero(), 0usize), |(s, c), (_, v)| (s + v, c + 1));
        sum / T::from_count(count)
    }

    /// Checks `ṽ_S >= 0` and `S ⊆ S' ⇒ ṽ_{S'} ≤ ṽ_S` on every one-element extension.
    pub fn is_superset_monotone(&self) -> bool {
        self.iter().all(|(mask, v)| {
            v >= T::zero()
                && (0..self.n)
                    .map(|b| 1u64 << b)
                    .filter(|bit| mask & bit == 0)
                    .all(|bit| self.get(mask | bit) <= v)
        })
    }
}

pub fn mask_of(nodes: &[usize]) -> u64 {
    nodes.iter().fold(0u64, |m, &i| m | (1u64 << (i - 1)))
}

/// Solves the subset balance equations with the default node cap.
pub fn solve_subset_dp<T: Scalar>(rates: &RateSet<T>) -> Result<SubsetAgeTable<T>> {
    solve_subset_dp_with_cap(rates, DEFAULT_SUBSET_CAP)
}

/// For each nonempty `S`:
///
/// ```text
/// ṽ_S = (λ_e + Σ_{i∈N(S)} λ_i(S) ṽ_{S∪{i}} + Σ_{i∈M(S)} λ^m_i(S) ṽ_{S∪{i}})
///     / (λ_0(S) + Σ_{i∈N(S)} λ_i(S) + λ^m_0(S) + Σ_{i∈M(S)} λ^m_i(S))
/// ```
///
/// `S ∪ {i}` always has a larger bitmask than `S`, so walking masks from the
/// full set downwards visits every superset before the subsets that need it.
pub fn solve_subset_dp_with_cap<T: Scalar>(rates: &RateSet<T>, cap: usize) -> Result<SubsetAgeTable<T>> {
    rates.validate()?;
    let n = rates.n();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded { n, cap });
    }
    let full = (1u64 << n) - 1;
    let mut values = vec![T::zero(); full as usize + 1];
    let zero = T::zero();

    for mask in (1..=full).rev() {
        let members: Vec<usize> = (1..=n).filter(|&j| mask & (1 << (j - 1)) != 0).collect();

        // λ_0(S) + λ^m_0(S)
        let mut denominator = members
            .iter()
            .fold(zero, |acc, &j| acc + rates.source_push(j) + rates.mobility[(0, j)]);
        let mut numerator = rates.lambda_e;

        for i in (1..=n).filter(|&i| mask & (1 << (i - 1)) == 0) {
            let (gossip_in, meet_in) = members.iter().fold((zero, zero), |(g, m), &j| {
                (g + rates.gossip[(i, j)], m + rates.mobility[(i, j)])
            });
            let with_i = values[(mask | (1 << (i - 1))) as usize];
            // i ∈ N(S)
            if gossip_in > zero {
                numerator = numerator + gossip_in * with_i;
                denominator = denominator + gossip_in;
            }
            // i ∈ M(S)
            if meet_in > zero {
                numerator = numerator + meet_in * with_i;
                denominator = denominator + meet_in;
            }
        }

        if denominator <= zero {
            return Err(Error::ZeroDenominator { mask });
        }
        values[mask as usize] = numerator / denominator;
    }

    Ok(SubsetAgeTable { n, values })
}

/// `ṽ_j` for `j = 1..=n` in a symmetric network.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricAgeProfile<T> {
    values: Vec<T>,
}

impl<T: Scalar> SymmetricAgeProfile<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Age of any subset with `j` nodes, `1 <= j <= n`.
    pub fn get(&self, j: usize) -> T {
        self.values[j - 1]
    }

    /// Age of a single node.
    pub fn v1(&self) -> T {
        self.values[0]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }
}

/// Runs the cardinality recursion that matches the config's topology.
///
/// The terminal value `ṽ_n` comes from setting `j = n` in the recursion;
/// the remaining entries are back-substituted from `j = n - 1` down to 1.
pub fn v_symmetric<T: Scalar>(config: &NetworkConfig<T>) -> Result<SymmetricAgeProfile<T>> {
    config.validate()?;
    let values = match config.topology {
        TopologyKind::Disconnected => recursion_dc(config)?,
        TopologyKind::FullyConnected => recursion_fc(config)?,
    };
    Ok(SymmetricAgeProfile { values })
}

/// ```text
/// ṽ_j = (λ_e + j(n-j) λ/f(n) ṽ_{j+1}) / (jλ/n + jλ/f(n) + j(n-j) λ/f(n))
/// ```
fn recursion_dc<T: Scalar>(config: &NetworkConfig<T>) -> Result<Vec<T>> {
    let n = config.n;
    let nn = T::from_count(n);
    let lambda = config.lambda;
    let meet = config.mobility_pair_rate()?;
    let mut v = vec![T::zero(); n + 1];
    let mut next = T::zero();
    for j in (1..=n).rev() {
        let jj = T::from_count(j);
        let pairs = jj * T::from_count(n - j);
        let numerator = config.lambda_e + pairs * meet * next;
        let denominator = jj * lambda / nn + jj * meet + pairs * meet;
        next = numerator / denominator;
        v[j] = next;
    }
    v.remove(0);
    Ok(v)
}

/// ```text
/// λ_eff = λ/(n-1) + λ/f(n)
/// ṽ_j = (λ_e + j(n-j) λ_eff ṽ_{j+1}) / (jλ/n + jλ/f(n) + j(n-j) λ_eff)
/// ```
fn recursion_fc<T: Scalar>(config: &NetworkConfig<T>) -> Result<Vec<T>> {
    let n = config.n;
    let nn = T::from_count(n);
    let lambda = config.lambda;
    let meet = config.mobility_pair_rate()?;
    let lambda_eff = config.gossip_pair_rate() + meet;
    let mut v = vec![T::zero(); n + 1];
    let mut next = T::zero();
    for j in (1..=n).rev() {
        let jj = T::from_count(j);
        let pairs = jj * T::from_count(n - j);
        let numerator = config.lambda_e + pairs * lambda_eff * next;
        let denominator = jj * lambda / nn + jj * meet + pairs * lambda_eff;
        next = numerator / denominator;
        v[j] = next;
    }
    v.remove(0);
    Ok(v)
}

/// Closed form of `ṽ_1` for the disconnected network with `f(n) = n`:
/// `(λ_e/λ) H_{n-1} - λ_e(n-1)/(λ(n+1)) + λ_e/(λ n(n+1))`.
pub fn v_closed_form_dc_linear<T: Scalar>(n: usize, lambda_e: T, lambda: T) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("closed form needs n >= 2, got {n}")));
    }
    let nn = T::from_count(n);
    let one = T::one();
    let ratio = lambda_e / lambda;
    Ok(ratio * harmonic::<T>(n - 1) - ratio * (nn - one) / (nn + one) + ratio / (nn * (nn + one)))
}

/// Age of the full node set, `ṽ_n`, from the closed forms per scaling.
pub fn v_n_terminal<T: Scalar>(config: &NetworkConfig<T>) -> Result<T> {
    config.validate()?;
    let nn = T::from_count(config.n);
    let (le, l) = (config.lambda_e, config.lambda);
    if !config.mobility_enabled {
        return Ok(le / l);
    }
    Ok(match config.scaling {
        MobilityScaling::Linear => le / (T::lit(2.0) * l),
        MobilityScaling::LogScaled { c } => c * le * nn.ln() / (l * (nn + c * nn.ln())),
        MobilityScaling::Constant { c } => c * le / (l * (c + nn)),
    })
}

/// Steady-state age of every node of a disconnected network under exchange
/// mobility, `n λ_e / λ`. The exchange rate does not enter.
pub fn v_exchange_dc<T: Scalar>(n: usize, lambda_e: T, lambda: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !lambda_e.is_non_negative() || !lambda.is_positive() {
        return Err(Error::Domain("rates must be positive".into()));
    }
    Ok(T::from_count(n) * lambda_e / lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_rates;
    use approx::assert_relative_eq;

    fn sym(n: usize, topology: TopologyKind, scaling: MobilityScaling<f64>) -> NetworkConfig<f64> {
        NetworkConfig::new(n, 1.0, 1.0, topology, scaling).unwrap()
    }

    #[test]
    fn single_node_without_mobility() {
        let mut rates = RateSet::empty(1, 1.0);
        rates.set_source_push(1, 1.0).unwrap();
        let table = solve_subset_dp(&rates).unwrap();
        assert_eq!(table.get(1), 1.0);
    }

    #[test]
    fn single_node_with_source_contact() {
        let mut rates = RateSet::empty(1, 1.0);
        rates.set_source_push(1, 1.0).unwrap();
        rates.set_mobility(0, 1, 1.0).unwrap();
        assert_eq!(solve_subset_dp(&rates).unwrap().get(1), 0.5);
    }

    #[test]
    fn two_node_dc_linear_dp() {
        let rates = build_rates(&sym(2, TopologyKind::Disconnected, MobilityScaling::Linear)).unwrap();
        let table = solve_subset_dp(&rates).unwrap();
        assert_relative_eq!(table.get_nodes(&[1]), 5.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(table.get_nodes(&[2]), 5.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(table.get_nodes(&[1, 2]), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn dp_rejects_unreachable_subset() {
        let mut rates = RateSet::empty(2, 1.0);
        rates.set_source_push(1, 1.0).unwrap();
        assert!(matches!(solve_subset_dp(&rates), Err(Error::ZeroDenominator { mask: 2 })));
    }

    #[test]
    fn dp_cap() {
        let rates = RateSet::empty(5, 1.0);
        assert_eq!(solve_subset_dp_with_cap(&rates, 4), Err(Error::CapExceeded { n: 5, cap: 4 }));
    }

    #[test]
    fn symmetric_recursion_spot_values() {
        let v = v_symmetric(&sym(2, TopologyKind::Disconnected, MobilityScaling::Linear)).unwrap();
        assert_relative_eq!(v.get(1), 5.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(v.get(2), 0.5, max_relative = 1e-15);
        let v = v_symmetric(&sym(4, TopologyKind::Disconnected, MobilityScaling::Linear)).unwrap();
        assert_relative_eq!(v.v1(), 77.0 / 60.0, max_relative = 1e-14);
    }

    #[test]
    fn one_node_fc_equals_dc() {
        let v = v_symmetric(&sym(1, TopologyKind::FullyConnected, MobilityScaling::Linear)).unwrap();
        assert_eq!(v.as_slice(), &[0.5]);
        for scaling in [MobilityScaling::Linear, MobilityScaling::Constant { c: 5.0 }] {
            let fc = v_symmetric(&sym(1, TopologyKind::FullyConnected, scaling)).unwrap();
            let dc = v_symmetric(&sym(1, TopologyKind::Disconnected, scaling)).unwrap();
            assert_eq!(fc, dc);
        }
    }

    #[test]
    fn closed_form_values() {
        assert_relative_eq!(v_closed_form_dc_linear(2, 1.0, 1.0).unwrap(), 5.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(v_closed_form_dc_linear(4, 1.0, 1.0).unwrap(), 77.0 / 60.0, max_relative = 1e-15);
        assert_relative_eq!(v_closed_form_dc_linear(2, 2.0, 1.0).unwrap(), 5.0 / 3.0, max_relative = 1e-15);
        assert!(v_closed_form_dc_linear(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn terminal_values() {
        for n in [1, 2, 7, 100] {
            let c = sym(n, TopologyKind::Disconnected, MobilityScaling::Linear);
            assert_eq!(v_n_terminal(&c).unwrap(), 0.5);
        }
        let c = sym(5, TopologyKind::Disconnected, MobilityScaling::Constant { c: 5.0 });
        assert_relative_eq!(v_n_terminal(&c).unwrap(), 0.5, max_relative = 1e-15);
        let c = sym(2, TopologyKind::Disconnected, MobilityScaling::LogScaled { c: 5.0 });
        let l2 = 2f64.ln();
        assert_relative_eq!(v_n_terminal(&c).unwrap(), 5.0 * l2 / (2.0 + 5.0 * l2), max_relative = 1e-15);
        assert_relative_eq!(v_n_terminal(&c).unwrap(), 0.634, epsilon = 1e-3);
    }

    #[test]
    fn exchange_values() {
        assert_eq!(v_exchange_dc(10, 1.0, 1.0).unwrap(), 10.0);
        assert_eq!(v_exchange_dc(1, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(v_exchange_dc(4, 2.0, 0.5).unwrap(), 16.0);
        assert!(v_exchange_dc(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn works_in_f32() {
        let config = NetworkConfig::<f32>::new(4, 1.0, 1.0, TopologyKind::Disconnected, MobilityScaling::Linear)
            .unwrap();
        let v = v_symmetric(&config).unwrap();
        assert!((v.v1() - 77.0 / 60.0).abs() < 1e-5);
        let table = solve_subset_dp(&build_rates(&config).unwrap()).unwrap();
        assert!((table.get_nodes(&[3]) - 77.0 / 60.0).abs() < 1e-5);
    }

    #[test]
    fn dp_table_monotone() {
        let config = sym(6, TopologyKind::FullyConnected, MobilityScaling::LogScaled { c: 3.0 });
        let table = solve_subset_dp(&build_rates(&config).unwrap()).unwrap();
        assert!(table.is_superset_monotone());
    }
}
