//! Upper bounds on the single-node age and how they scale with `n`.

use crate::analytic::v_symmetric;
use crate::error::{Error, Result};
use crate::model::{MobilityScaling, NetworkConfig, TopologyKind};
use crate::scalar::{harmonic, Scalar};

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Domain(format!("bounds need n >= 2, got {n}")))
    } else {
        Ok(())
    }
}

/// Constant `K` with `ṽ_1(λ) <= K / λ` in the disconnected network.
pub fn k_constant<T: Scalar>(scaling: MobilityScaling<T>, n: usize, lambda_e: T) -> Result<T> {
    check_n(n)?;
    scaling.validate()?;
    let nn = T::from_count(n);
    let ln = nn.ln();
    let one = T::one();
    Ok(match scaling {
        MobilityScaling::Linear => lambda_e * (ln + one),
        MobilityScaling::LogScaled { c } => {
            c * lambda_e * ln * ln / nn + c * lambda_e * ln / nn + c * lambda_e * ln / (nn * (nn + c * ln))
        }
        MobilityScaling::Constant { c } => c * lambda_e * (ln + one) / nn + c * lambda_e / (nn * (c + nn)),
    })
}

/// Closed-form upper bound on `ṽ_1`.
///
/// Disconnected: `K / λ`. Fully connected uses `λ_eff = λ/(n-1) + λ/f(n)`:
/// - `f = n`: `(λ_e/λ) 2(n-1)H_{n-1}/(2n-1) + λ_e/(2λ)`
/// - `f = c ln n`: `2cλ_e(ln n + 1) ln n / (λ(n-1)) + cλ_e ln n / (λ(c ln n + n))`
/// - `f = c`: `2cλ_e(ln n + 1)/(λn) + cλ_e/(λ(c+n))`
pub fn upper_bound_v1<T: Scalar>(
    scaling: MobilityScaling<T>,
    topology: TopologyKind,
    n: usize,
    lambda_e: T,
    lambda: T,
) -> Result<T> {
    check_n(n)?;
    if !lambda.is_positive() {
        return Err(Error::Domain("lambda must be positive".into()));
    }
    if topology == TopologyKind::Disconnected {
        return Ok(k_constant(scaling, n, lambda_e)? / lambda);
    }
    scaling.validate()?;
    let nn = T::from_count(n);
    let ln = nn.ln();
    let one = T::one();
    let two = T::lit(2.0);
    Ok(match scaling {
        MobilityScaling::Linear => {
            let h = harmonic::<T>(n - 1);
            lambda_e / lambda * two * (nn - one) * h / (two * nn - one) + lambda_e / (two * lambda)
        }
        MobilityScaling::LogScaled { c } => {
            two * c * lambda_e * (ln + one) * ln / (lambda * (nn - one))
                + c * lambda_e * ln / (lambda * (c * ln + nn))
        }
        MobilityScaling::Constant { c } => {
            two * c * lambda_e * (ln + one) / (lambda * nn) + c * lambda_e / (lambda * (c + nn))
        }
    })
}

/// Order-of-growth envelope `g(n)`: `ln n`, `(ln n)^2 / n` or `ln n / n`.
pub fn growth_envelope<T: Scalar>(scaling: MobilityScaling<T>, n: usize) -> T {
    let nn = T::from_count(n);
    let ln = nn.ln();
    match scaling {
        MobilityScaling::Linear => ln,
        MobilityScaling::LogScaled { .. } => ln * ln / nn,
        MobilityScaling::Constant { .. } => ln / nn,
    }
}

/// `n = 2, 4, ..., 2048`.
pub fn default_n_grid() -> Vec<usize> {
    (1..=11).map(|k| 1usize << k).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSample<T> {
    pub n: usize,
    pub v1_exact: T,
    pub upper_bound: T,
    /// `v1_exact / g(n)`.
    pub ratio: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport<T> {
    pub scaling: MobilityScaling<T>,
    pub topology: TopologyKind,
    pub samples: Vec<ScalingSample<T>>,
    pub max_ratio: T,
}

impl<T: Scalar> ScalingReport<T> {
    /// Samples where the exact age exceeds its bound.
    pub fn violations(&self) -> Vec<&ScalingSample<T>> {
        self.samples.iter().filter(|s| s.v1_exact > s.upper_bound).collect()
    }
}

pub fn scaling_sweep<T: Scalar>(
    scaling: MobilityScaling<T>,
    topology: TopologyKind,
    n_list: &[usize],
    lambda_e: T,
    lambda: T,
) -> Result<ScalingReport<T>> {
    let mut samples = Vec::with_capacity(n_list.len());
    let mut max_ratio = T::zero();
    for &n in n_list {
        check_n(n)?;
        let config = NetworkConfig::new(n, lambda_e, lambda, topology, scaling)?;
        let v1_exact = v_symmetric(&config)?.v1();
        let upper_bound = upper_bound_v1(scaling, topology, n, lambda_e, lambda)?;
        let ratio = v1_exact / growth_envelope(scaling, n);
        max_ratio = max_ratio.max(ratio);
        samples.push(ScalingSample { n, v1_exact, upper_bound, ratio });
    }
    Ok(ScalingReport { scaling, topology, samples, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const DC: TopologyKind = TopologyKind::Disconnected;
    const FC: TopologyKind = TopologyKind::FullyConnected;

    #[test]
    fn k_values() {
        let l2 = 2f64.ln();
        assert_relative_eq!(k_constant(MobilityScaling::Linear, 2, 1.0).unwrap(), l2 + 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            k_constant(MobilityScaling::Constant { c: 1.0 }, 2, 1.0).unwrap(),
            (l2 + 1.0) / 2.0 + 1.0 / 6.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(k_constant(MobilityScaling::Constant { c: 1.0 }, 2, 1.0).unwrap(), 1.0132, epsilon = 1e-4);
        assert_eq!(k_constant(MobilityScaling::Linear, 2, 0.0).unwrap(), 0.0);
        assert!(k_constant(MobilityScaling::<f64>::Linear, 1, 1.0).is_err());
    }

    #[test]
    fn bound_values() {
        let l2 = 2f64.ln();
        assert_relative_eq!(upper_bound_v1(MobilityScaling::Linear, DC, 2, 1.0, 1.0).unwrap(), l2 + 1.0);
        let b = upper_bound_v1(MobilityScaling::Constant { c: 5.0 }, DC, 10, 1.0, 1.0).unwrap();
        assert_relative_eq!(b, 5.0 * (10f64.ln() + 1.0) / 10.0 + 5.0 / 150.0, max_relative = 1e-15);
        assert_relative_eq!(b, 1.6846, epsilon = 1e-4);
        let b = upper_bound_v1(MobilityScaling::Linear, FC, 2, 1.0, 1.0).unwrap();
        assert_relative_eq!(b, 2.0 / 3.0 + 0.5, max_relative = 1e-15);
        assert!(upper_bound_v1(MobilityScaling::<f64>::Linear, FC, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn dc_bound_is_k_over_lambda() {
        for scaling in [MobilityScaling::Linear, MobilityScaling::LogScaled { c: 5.0 }, MobilityScaling::Constant { c: 5.0 }] {
            for n in [2usize, 3, 10, 999] {
                for lambda in [0.1, 1.0, 7.5] {
                    let k = k_constant(scaling, n, 2.0).unwrap();
                    assert_eq!(upper_bound_v1(scaling, DC, n, 2.0, lambda).unwrap(), k / lambda);
                }
            }
        }
    }

    #[test]
    fn sweep_dc_linear() {
        let report = scaling_sweep(MobilityScaling::Linear, DC, &[2, 4], 1.0, 1.0).unwrap();
        assert_eq!(report.samples.len(), 2);
        assert_relative_eq!(report.samples[0].v1_exact, 5.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(report.samples[0].upper_bound, 1.693, epsilon = 1e-3);
        assert_relative_eq!(report.samples[1].v1_exact, 77.0 / 60.0, max_relative = 1e-14);
        assert_relative_eq!(report.samples[1].upper_bound, 2.386, epsilon = 1e-3);
        assert!(report.violations().is_empty());
    }

    #[test]
    fn sweep_edge_cases() {
        let report = scaling_sweep(MobilityScaling::Constant { c: 5.0 }, DC, &[2], 1.0, 1.0).unwrap();
        assert!(report.samples[0].v1_exact <= report.samples[0].upper_bound);
        let empty = scaling_sweep(MobilityScaling::<f64>::Linear, FC, &[], 1.0, 1.0).unwrap();
        assert!(empty.samples.is_empty());
        assert_eq!(empty.max_ratio, 0.0);
        assert!(scaling_sweep(MobilityScaling::<f64>::Linear, FC, &[1], 1.0, 1.0).is_err());
    }

    #[test]
    fn default_grid() {
        let grid = default_n_grid();
        assert_eq!(grid.first(), Some(&2));
        assert_eq!(grid.last(), Some(&2048));
        assert_eq!(grid.len(), 11);
    }
}
