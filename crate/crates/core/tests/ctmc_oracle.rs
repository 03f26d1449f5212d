//! Checks the subset recursion against the stationary law of the truncated
//! age chain, solved by power iteration on the uniformized chain.

use vaoi::analytic::mask_of;
use vaoi::{build_rates, solve_subset_dp, Config, MobilityScaling, Rates, TopologyKind};

/// Ages `(X_1..X_n)` capped at `cap`; returns `E[min_{i in S} X_i]` for every mask.
fn stationary_min_ages(rates: &Rates, cap: usize) -> Vec<f64> {
    let n = rates.n();
    let radix = cap + 1;
    let states = radix.pow(n as u32);
    let decode = |mut s: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let a = s % radix;
                s /= radix;
                a
            })
            .collect()
    };
    let encode = |ages: &[usize]| ages.iter().rev().fold(0, |acc, &a| acc * radix + a);

    // (rate, target state) lists built straight from the age reset map.
    let mut moves: Vec<Vec<(f64, usize)>> = Vec::with_capacity(states);
    for s in 0..states {
        let x = decode(s);
        let mut out = Vec::new();
        let older: Vec<usize> = x.iter().map(|&a| (a + 1).min(cap)).collect();
        out.push((rates.lambda_e, encode(&older)));
        for j in 1..=n {
            let mut y = x.clone();
            y[j - 1] = 0;
            out.push((rates.source_push(j) + rates.mobility[(0, j)], encode(&y)));
        }
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let mut y = x.clone();
                y[j - 1] = x[j - 1].min(x[i - 1]);
                out.push((rates.gossip[(i, j)], encode(&y)));
                if i < j {
                    let m = x[i - 1].min(x[j - 1]);
                    let mut y = x.clone();
                    y[i - 1] = m;
                    y[j - 1] = m;
                    out.push((rates.mobility[(i, j)], encode(&y)));
                }
            }
        }
        out.retain(|(r, _)| *r > 0.0);
        moves.push(out);
    }
    let unif: f64 = moves.iter().map(|m| m.iter().map(|(r, _)| r).sum::<f64>()).fold(0.0, f64::max);

    let mut pi = vec![1.0 / states as f64; states];
    let mut next = vec![0.0; states];
    for _ in 0..200_000 {
        next.iter_mut().for_each(|p| *p = 0.0);
        for s in 0..states {
            let mut stay = unif;
            for &(r, t) in &moves[s] {
                next[t] += pi[s] * r / unif;
                stay -= r;
            }
            next[s] += pi[s] * stay / unif;
        }
        let diff: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if diff < 1e-14 {
            break;
        }
    }

    let full = (1usize << n) - 1;
    let mut out = vec![0.0; full + 1];
    for (s, p) in pi.iter().enumerate() {
        let x = decode(s);
        for (mask, slot) in out.iter_mut().enumerate().skip(1) {
            let m = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| x[b]).min().unwrap();
            *slot += p * m as f64;
        }
    }
    out
}

#[test]
fn two_node_symmetric_matches_chain() {
    let config = Config::new(2, 1.0, 1.0, TopologyKind::Disconnected, MobilityScaling::Linear).unwrap();
    let rates = build_rates(&config).unwrap();
    let oracle = stationary_min_ages(&rates, 60);
    assert!((oracle[1] - 5.0 / 6.0).abs() < 1e-6, "{}", oracle[1]);
    assert!((oracle[2] - 5.0 / 6.0).abs() < 1e-6);
    assert!((oracle[3] - 0.5).abs() < 1e-6);
    let table = solve_subset_dp(&rates).unwrap();
    for mask in 1..=3u64 {
        assert!((table.get(mask) - oracle[mask as usize]).abs() < 1e-6);
    }
}

#[test]
fn asymmetric_three_node_matches_chain() {
    let mut rates = Rates::empty(3, 0.6);
    rates.set_source_push(1, 1.3).unwrap();
    rates.set_source_push(2, 0.2).unwrap();
    rates.set_gossip(1, 2, 0.9).unwrap();
    rates.set_gossip(2, 3, 0.4).unwrap();
    rates.set_gossip(3, 1, 0.25).unwrap();
    rates.set_mobility(0, 3, 0.5).unwrap();
    rates.set_mobility(1, 3, 0.7).unwrap();
    rates.set_mobility(0, 2, 0.1).unwrap();
    let oracle = stationary_min_ages(&rates, 36);
    let table = solve_subset_dp(&rates).unwrap();
    for mask in 1..=7u64 {
        let (dp, ch) = (table.get(mask), oracle[mask as usize]);
        assert!((dp - ch).abs() < 1e-5 * dp.max(1.0), "mask {mask}: dp {dp} chain {ch}");
    }
    assert!(table.get_nodes(&[1, 3]) <= table.get(mask_of(&[1])));
}

#[test]
fn fc_log_three_nodes_matches_chain() {
    let config = Config::new(3, 0.5, 1.0, TopologyKind::FullyConnected, MobilityScaling::LogScaled { c: 2.0 }).unwrap();
    let rates = build_rates(&config).unwrap();
    let oracle = stationary_min_ages(&rates, 30);
    let table = solve_subset_dp(&rates).unwrap();
    for mask in 1..=7u64 {
        assert!((table.get(mask) - oracle[mask as usize]).abs() < 1e-6);
    }
}
