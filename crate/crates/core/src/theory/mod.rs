//! Long-run cost of direct shaping codes, the rate-1 optimum it is compared
//! against, and level costs derived from measured cell error rate curves.
//!
//! The code rate and expansion factor are both fixed at 1 here.

mod cer;
mod gibbs;

pub use cer::{cost_model_from_cer, parse_cer_csv, CerCostModel, CerCurve};
pub use gibbs::{gibbs_entropy, optimal_rate1_distribution, optimality_gap, GibbsSolution, OptimalityGap};

use serde::Serialize;
use thiserror::Error;

use crate::output::OutputList;
use crate::slc::CodecError;
use crate::source::{validate_distribution, DistributionError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("{0} entries is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cost {0} is negative or not finite")]
    BadCost(f64),
    #[error("entropy {h} bits is outside the achievable range [{min}, {max}]")]
    EntropyOutOfRange { h: f64, min: f64, max: f64 },
    #[error("all costs are equal, so only the uniform distribution is of Gibbs form")]
    NoMultiplier,
    #[error("curve for level {0} has no samples")]
    EmptyCurve(u8),
    #[error("bad curve: {0}")]
    BadCurve(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Entropy in bits of a distribution, with `0 log 0 = 0`.
pub fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

fn word_len_of(size: usize) -> Result<usize, TheoryError> {
    if size == 0 || !size.is_power_of_two() {
        return Err(TheoryError::NotPowerOfTwo(size));
    }
    Ok(size.trailing_zeros() as usize)
}

/// An i.i.d. word source, probabilities sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceModel {
    probs: Vec<f64>,
    entropy: f64,
}

impl SourceModel {
    /// Validates and sorts `probs` into descending order.
    pub fn new(probs: &[f64]) -> Result<Self, TheoryError> {
        word_len_of(probs.len())?;
        validate_distribution(probs)?;
        let mut probs = probs.to_vec();
        probs.sort_by(|a, b| b.total_cmp(a));
        let entropy = entropy_bits(&probs);
        Ok(Self { probs, entropy })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Bits per word.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    pub fn word_len(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }
}

/// Per-codeword costs sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProfile {
    costs: Vec<f64>,
}

impl CostProfile {
    /// Validates and sorts `costs` into ascending order.
    pub fn new(costs: &[f64]) -> Result<Self, TheoryError> {
        word_len_of(costs.len())?;
        if let Some(&c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(TheoryError::BadCost(c));
        }
        let mut costs = costs.to_vec();
        costs.sort_by(f64::total_cmp);
        Ok(Self { costs })
    }

    pub fn from_output_list(list: &OutputList) -> Self {
        Self {
            costs: list.costs().to_vec(),
        }
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCost {
    /// Expected cost per input word.
    pub per_word: f64,
    /// Expected cost per input bit.
    pub per_bit: f64,
}

/// Long-run average cost once the dictionary is stable: the `i`-th most
/// likely word is sent as the `i`-th cheapest codeword.
pub fn asymptotic_cost(source: &SourceModel, profile: &CostProfile, m: usize) -> Result<AsymptoticCost, TheoryError> {
    for got in [source.probs.len(), profile.costs.len()] {
        if got != 1 << m {
            return Err(TheoryError::LengthMismatch { expected: 1 << m, got });
        }
    }
    let per_word: f64 = source.probs.iter().zip(&profile.costs).map(|(p, c)| p * c).sum();
    Ok(AsymptoticCost {
        per_word,
        per_bit: per_word / m as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::slc_output_list;

    #[test]
    fn example_distribution() {
        let s = SourceModel::new(&[0.1, 0.2, 0.4, 0.3]).unwrap();
        assert_eq!(s.probs(), &[0.4, 0.3, 0.2, 0.1]);
        let c = CostProfile::from_output_list(&slc_output_list(2).unwrap());
        assert_eq!(c.costs(), &[0.0, 1.0, 1.0, 2.0]);
        let a = asymptotic_cost(&s, &c, 2).unwrap();
        assert!((a.per_word - 0.7).abs() < 1e-12);
        assert!((a.per_bit - 0.35).abs() < 1e-12);
    }

    #[test]
    fn uniform_and_degenerate() {
        let c = CostProfile::new(&[2.0, 0.5, 1.0, 0.0]).unwrap();
        let u = asymptotic_cost(&SourceModel::new(&[0.25; 4]).unwrap(), &c, 2).unwrap();
        assert!((u.per_word - 0.875).abs() < 1e-12);
        let d = asymptotic_cost(&SourceModel::new(&[0.0, 1.0, 0.0, 0.0]).unwrap(), &c, 2).unwrap();
        assert_eq!(d.per_word, 0.0);
    }

    #[test]
    fn entropy_matches_definition() {
        let s = SourceModel::new(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let h: f64 = -[0.4f64, 0.3, 0.2, 0.1].iter().map(|p| p * p.log2()).sum::<f64>();
        assert!((s.entropy() - h).abs() < 1e-12);
        assert_eq!(s.word_len(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(SourceModel::new(&[0.5, 0.3, 0.2]), Err(TheoryError::NotPowerOfTwo(3))));
        assert!(SourceModel::new(&[0.5, 0.6]).is_err());
        assert!(CostProfile::new(&[0.0, -1.0]).is_err());
        let s = SourceModel::new(&[0.5, 0.5]).unwrap();
        let c = CostProfile::new(&[0.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(asymptotic_cost(&s, &c, 1), Err(TheoryError::LengthMismatch { .. })));
    }
}
