//! Age versus mobility-cost trade-off, `J_α(λ) = α ṽ_1(λ) + (1 - α) λ`.
//!
//! The closed-form optimum minimizes the bound version `α K / λ + (1 - α) λ`.

use crate::analytic::v_symmetric;
use crate::error::{Error, Result};
use crate::model::{MobilityScaling, NetworkConfig, TopologyKind};
use crate::scalar::Scalar;
use crate::scaling::k_constant;

fn check_alpha_k<T: Scalar>(alpha: T, k: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(k > T::zero() && k.is_finite()) {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    Ok(())
}

/// `α K / λ + (1 - α) λ`
pub fn cost_j<T: Scalar>(alpha: T, k: T, lambda: T) -> Result<T> {
    check_alpha_k(alpha, k)?;
    if !lambda.is_positive() {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok(alpha * k / lambda + (T::one() - alpha) * lambda)
}

/// `λ* = sqrt(α K / (1 - α))`
pub fn optimal_lambda<T: Scalar>(alpha: T, k: T) -> Result<T> {
    check_alpha_k(alpha, k)?;
    Ok((alpha * k / (T::one() - alpha)).sqrt())
}

/// `J_α(λ*) = 2 sqrt(α (1 - α) K)`
pub fn optimal_cost<T: Scalar>(alpha: T, k: T) -> Result<T> {
    check_alpha_k(alpha, k)?;
    Ok(T::lit(2.0) * (alpha * (T::one() - alpha) * k).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostProfile<T> {
    pub alpha: T,
    pub k: T,
    pub lambda_star: T,
    pub j_star: T,
}

impl<T: Scalar> CostProfile<T> {
    pub fn new(alpha: T, k: T) -> Result<Self> {
        Ok(CostProfile { alpha, k, lambda_star: optimal_lambda(alpha, k)?, j_star: optimal_cost(alpha, k)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRow<T> {
    pub alpha: T,
    pub lambda: T,
    /// `α K / λ + (1 - α) λ`
    pub bound_cost: T,
    /// `α ṽ_1(λ) + (1 - α) λ`
    pub exact_cost: T,
    pub bound_argmin: bool,
    pub exact_argmin: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostSweep<T> {
    pub scaling: MobilityScaling<T>,
    pub topology: TopologyKind,
    pub n: usize,
    pub lambda_e: T,
    pub profiles: Vec<CostProfile<T>>,
    pub rows: Vec<CostRow<T>>,
}

impl<T: Scalar> CostSweep<T> {
    pub fn rows_for(&self, alpha: T) -> impl Iterator<Item = &CostRow<T>> {
        self.rows.iter().filter(move |r| r.alpha == alpha)
    }
}

/// Evaluates bound and exact costs on every `(α, λ)` cell.
///
/// `λ` drives both the source rate and the mobility rate, so the exact age is
/// recomputed per grid point.
pub fn cost_sweep<T: Scalar>(
    alpha_list: &[T],
    lambda_grid: &[T],
    scaling: MobilityScaling<T>,
    topology: TopologyKind,
    n: usize,
    lambda_e: T,
) -> Result<CostSweep<T>> {
    if alpha_list.is_empty() || lambda_grid.is_empty() {
        return Err(Error::Domain("alpha list and lambda grid must be nonempty".into()));
    }
    let k = k_constant(scaling, n, lambda_e)?;
    let ages = lambda_grid
        .iter()
        .map(|&lambda| {
            let config = NetworkConfig::new(n, lambda_e, lambda, topology, scaling)?;
            Ok(v_symmetric(&config)?.v1())
        })
        .collect::<Result<Vec<T>>>()?;

    let mut profiles = Vec::with_capacity(alpha_list.len());
    let mut rows = Vec::with_capacity(alpha_list.len() * lambda_grid.len());
    for &alpha in alpha_list {
        profiles.push(CostProfile::new(alpha, k)?);
        let start = rows.len();
        for (&lambda, &age) in lambda_grid.iter().zip(&ages) {
            rows.push(CostRow {
                alpha,
                lambda,
                bound_cost: cost_j(alpha, k, lambda)?,
                exact_cost: alpha * age + (T::one() - alpha) * lambda,
                bound_argmin: false,
                exact_argmin: false,
            });
        }
        let block = &mut rows[start..];
        let argmin = |key: fn(&CostRow<T>) -> T, block: &[CostRow<T>]| {
            (0..block.len()).fold(0, |best, i| if key(&block[i]) < key(&block[best]) { i } else { best })
        };
        let b = argmin(|r| r.bound_cost, block);
        let e = argmin(|r| r.exact_cost, block);
        block[b].bound_argmin = true;
        block[e].exact_argmin = true;
    }
    Ok(CostSweep { scaling, topology, n, lambda_e, profiles, rows })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Scalar>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let steps = T::from_count(count - 1);
    (0..count).map(|i| (a + (b - a) * T::from_count(i) / steps).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cost_values() {
        assert_eq!(cost_j(0.5, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(cost_j(0.5, 4.0, 2.0).unwrap(), 2.0);
        assert_relative_eq!(cost_j(0.8, 1.0, 2.0).unwrap(), 0.8, max_relative = 1e-15);
        assert!(cost_j(0.0, 1.0, 1.0).is_err());
        assert!(cost_j(1.0, 1.0, 1.0).is_err());
        assert!(cost_j(0.5, 0.0, 1.0).is_err());
        assert!(cost_j(0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn optimum_values() {
        assert_eq!(optimal_lambda(0.5, 1.0).unwrap(), 1.0);
        assert_eq!(optimal_cost(0.5, 1.0).unwrap(), 1.0);
        assert_relative_eq!(optimal_lambda(0.8, 1.0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(optimal_cost(0.8, 1.0).unwrap(), 0.8, max_relative = 1e-15);
        assert_eq!(optimal_lambda(0.5, 4.0).unwrap(), 2.0);
        assert_eq!(optimal_cost(0.5, 4.0).unwrap(), 2.0);
    }

    #[test]
    fn profile_is_consistent() {
        let p = CostProfile::new(0.3, 2.5).unwrap();
        assert_relative_eq!(cost_j(p.alpha, p.k, p.lambda_star).unwrap(), p.j_star, max_relative = 1e-14);
    }

    #[test]
    fn sweep_small() {
        let sweep =
            cost_sweep(&[0.5], &[0.5, 1.0, 2.0], MobilityScaling::Linear, TopologyKind::Disconnected, 2, 1.0).unwrap();
        let at_one = sweep.rows.iter().find(|r| r.lambda == 1.0).unwrap();
        assert_relative_eq!(at_one.bound_cost, 0.5 * (2f64.ln() + 1.0) + 0.5, max_relative = 1e-15);
        assert_relative_eq!(at_one.bound_cost, 1.3466, epsilon = 1e-4);
        assert_relative_eq!(at_one.exact_cost, 0.5 * 5.0 / 6.0 + 0.5, max_relative = 1e-14);
        for row in &sweep.rows {
            assert!(row.exact_cost <= row.bound_cost);
        }
        assert_eq!(sweep.rows.iter().filter(|r| r.bound_argmin).count(), 1);
        assert!(cost_sweep(&[], &[1.0], MobilityScaling::Linear, TopologyKind::Disconnected, 2, 1.0).is_err());
    }

    #[test]
    fn grid_spacing() {
        let g = log_grid(0.01, 100.0, 5);
        assert_eq!(g.len(), 5);
        assert_relative_eq!(g[0], 0.01, max_relative = 1e-12);
        assert_relative_eq!(g[2], 1.0, max_relative = 1e-12);
        assert_relative_eq!(g[4], 100.0, max_relative = 1e-12);
    }
}
