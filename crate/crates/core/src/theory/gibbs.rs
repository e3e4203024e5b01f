//! Minimum-cost rate-1 output distribution at a given entropy.

use serde::Serialize;

use super::{asymptotic_cost, word_len_of, CostProfile, SourceModel, TheoryError};

const ENTROPY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsSolution {
    /// `P_i` proportional to `2^(-mu c_i)`, in cost order.
    pub probs: Vec<f64>,
    /// Infinite when the target is the entropy of the cheapest codewords alone.
    pub mu: f64,
}

fn gibbs_probs(costs: &[f64], mu: f64) -> Vec<f64> {
    let c0 = costs[0];
    if mu.is_infinite() {
        let k = costs.iter().filter(|&&c| c == c0).count() as f64;
        return costs.iter().map(|&c| if c == c0 { 1.0 / k } else { 0.0 }).collect();
    }
    let w: Vec<f64> = costs.iter().map(|&c| (-mu * (c - c0)).exp2()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Entropy in bits of the Gibbs distribution at multiplier `mu`.
pub fn gibbs_entropy(costs: &[f64], mu: f64) -> f64 {
    let c0 = costs[0];
    if mu.is_infinite() {
        return (costs.iter().filter(|&&c| c == c0).count() as f64).log2();
    }
    let w: Vec<f64> = costs.iter().map(|&c| (-mu * (c - c0)).exp2()).collect();
    let z: f64 = w.iter().sum();
    let mean_excess: f64 = w.iter().zip(costs).map(|(x, &c)| x * (c - c0)).sum::<f64>() / z;
    z.log2() + mu * mean_excess
}

/// Finds the Gibbs distribution over `profile` whose entropy is `h` bits.
pub fn optimal_rate1_distribution(h: f64, profile: &CostProfile) -> Result<GibbsSolution, TheoryError> {
    let costs = profile.costs();
    let m = word_len_of(costs.len())?;
    let max = m as f64;
    let min = gibbs_entropy(costs, f64::INFINITY);
    if !h.is_finite() || h > max + ENTROPY_TOL || h < min - ENTROPY_TOL {
        if min == max && h.is_finite() && h >= 0.0 && h < max {
            return Err(TheoryError::NoMultiplier);
        }
        return Err(TheoryError::EntropyOutOfRange { h, min, max });
    }
    if h >= max - ENTROPY_TOL {
        return Ok(GibbsSolution {
            probs: gibbs_probs(costs, 0.0),
            mu: 0.0,
        });
    }
    if h <= min + ENTROPY_TOL {
        return Ok(GibbsSolution {
            probs: gibbs_probs(costs, f64::INFINITY),
            mu: f64::INFINITY,
        });
    }
    let mut hi = 1.0;
    while gibbs_entropy(costs, hi) > h {
        hi *= 2.0;
        if hi > 1e12 {
            // the target sits within rounding of the lower limit
            return Ok(GibbsSolution {
                probs: gibbs_probs(costs, f64::INFINITY),
                mu: f64::INFINITY,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let e = gibbs_entropy(costs, mid);
        if (e - h).abs() < ENTROPY_TOL {
            lo = mid;
            hi = mid;
            break;
        }
        if e > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    Ok(GibbsSolution {
        probs: gibbs_probs(costs, mu),
        mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityGap {
    /// Long-run cost per word of the direct shaping code.
    pub c_dsc: f64,
    /// Least cost per word of any rate-1 code for a source of the same entropy.
    pub c_min: f64,
    pub gap: f64,
}

/// Compares the direct shaping code's long-run cost with the rate-1 optimum.
/// The gap is zero exactly when the source already has Gibbs form.
pub fn optimality_gap(source: &SourceModel, profile: &CostProfile) -> Result<OptimalityGap, TheoryError> {
    let m = source.word_len();
    let c_dsc = asymptotic_cost(source, profile, m)?.per_word;
    let costs = profile.costs();
    let c_min = if source.entropy() < gibbs_entropy(costs, f64::INFINITY) {
        // below the cheapest codewords' own entropy: send only cheapest codewords
        costs[0]
    } else {
        let g = optimal_rate1_distribution(source.entropy(), profile)?;
        g.probs.iter().zip(costs).map(|(p, c)| p * c).sum()
    };
    Ok(OptimalityGap {
        c_dsc,
        c_min,
        gap: c_dsc - c_min,
    })
}

#[cfg(test)]
mod tests {
    use super::super::entropy_bits;
    use super::*;

    fn slc2() -> CostProfile {
        CostProfile::new(&[0.0, 1.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn max_entropy_is_uniform() {
        let g = optimal_rate1_distribution(2.0, &slc2()).unwrap();
        assert_eq!(g.mu, 0.0);
        assert!(g.probs.iter().all(|&p| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn bisection_is_self_consistent() {
        let h = 1.8465;
        let g = optimal_rate1_distribution(h, &slc2()).unwrap();
        assert!((entropy_bits(&g.probs) - h).abs() < 1e-10);
        // P_i / P_0 = 2^(-mu c_i)
        for (p, c) in g.probs.iter().zip(slc2().costs()) {
            assert!((p / g.probs[0] - (-g.mu * c).exp2()).abs() < 1e-12);
        }
        assert!(g.mu > 0.0);
    }

    #[test]
    fn out_of_range_targets() {
        assert!(matches!(optimal_rate1_distribution(2.5, &slc2()), Err(TheoryError::EntropyOutOfRange { .. })));
        assert!(matches!(optimal_rate1_distribution(-0.1, &slc2()), Err(TheoryError::EntropyOutOfRange { .. })));
        let flat = CostProfile::new(&[1.0; 4]).unwrap();
        assert!(matches!(optimal_rate1_distribution(1.5, &flat), Err(TheoryError::NoMultiplier)));
        assert!(optimal_rate1_distribution(2.0, &flat).is_ok());
        // two cheapest words give a 1-bit floor
        let two = CostProfile::new(&[0.0, 0.0, 1.0, 3.0]).unwrap();
        let g = optimal_rate1_distribution(1.0, &two).unwrap();
        assert!(g.mu.is_infinite());
        assert_eq!(g.probs, vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn example_source_is_suboptimal() {
        let s = SourceModel::new(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let g = optimality_gap(&s, &slc2()).unwrap();
        assert!((g.c_dsc - 0.7).abs() < 1e-12);
        assert!(g.gap > 0.01, "{g:?}");
    }

    #[test]
    fn gibbs_source_has_zero_gap() {
        for mu in [0.3, 1.0, 2.5] {
            let g = gibbs_probs(slc2().costs(), mu);
            let gap = optimality_gap(&SourceModel::new(&g).unwrap(), &slc2()).unwrap();
            assert!(gap.gap.abs() < 1e-9, "mu={mu} {gap:?}");
        }
    }

    #[test]
    fn degenerate_source() {
        let s = SourceModel::new(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let g = optimality_gap(&s, &slc2()).unwrap();
        assert_eq!((g.c_dsc, g.c_min, g.gap), (0.0, 0.0, 0.0));
    }
}
