//! I.i.d. word sources over the `2^m` length-`m` words.
//!
//! Probability `P_i` belongs to the `i`-th word of the canonical SLC output
//! list (`11, 10, 01, 00` for `m = 2`), so the most likely word is also the
//! cheapest one.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::output::slc_output_list;
use crate::word::{BitWord, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("distribution has {got} entries, expected {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("probability {0} is negative or not finite")]
    BadProbability(f64),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
}

/// Tolerance on `sum(P) = 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;

pub fn validate_distribution(p: &[f64]) -> Result<(), DistributionError> {
    if let Some(&x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(DistributionError::BadProbability(x));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(DistributionError::NotNormalized(sum));
    }
    Ok(())
}

/// Checks `p` is a distribution over exactly `2^m` words.
pub fn validate_word_distribution(p: &[f64], m: usize) -> Result<(), DistributionError> {
    crate::word::check_word_len(m)?;
    if p.len() != 1 << m {
        return Err(DistributionError::WrongSize {
            expected: 1 << m,
            got: p.len(),
        });
    }
    validate_distribution(p)
}

/// Source words in probability-index order.
pub fn source_alphabet(m: usize) -> Result<Vec<BitWord>, WordError> {
    match slc_output_list(m) {
        Ok(list) => Ok(list.words().to_vec()),
        Err(crate::output::OutputListError::Word(e)) => Err(e),
        Err(e) => unreachable!("unit costs are valid: {e}"),
    }
}

/// Per-trial generator: trial `k` reads stream `k` of the master seed, so
/// results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone)]
pub struct IidSource {
    words: Vec<BitWord>,
    index: WeightedIndex<f64>,
}

impl IidSource {
    pub fn new(p: &[f64], m: usize) -> Result<Self, DistributionError> {
        validate_word_distribution(p, m)?;
        let index = WeightedIndex::new(p).map_err(|_| DistributionError::NotNormalized(p.iter().sum()))?;
        Ok(Self {
            words: source_alphabet(m)?,
            index,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitWord {
        self.words[self.index.sample(rng)]
    }

    pub fn sequence<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<BitWord> {
        (0..len).map(|_| self.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_follows_cost_order() {
        let a: Vec<String> = source_alphabet(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(a, ["11", "10", "01", "00"]);
    }

    #[test]
    fn validation() {
        assert!(validate_word_distribution(&[0.4, 0.3, 0.2, 0.1], 2).is_ok());
        assert!(matches!(
            validate_word_distribution(&[0.5, 0.5], 2),
            Err(DistributionError::WrongSize { .. })
        ));
        assert!(matches!(validate_distribution(&[0.5, 0.6]), Err(DistributionError::NotNormalized(_))));
        assert!(matches!(validate_distribution(&[1.5, -0.5]), Err(DistributionError::BadProbability(_))));
    }

    #[test]
    fn empirical_frequencies() {
        let src = IidSource::new(&[0.4, 0.3, 0.2, 0.1], 2).unwrap();
        let mut rng = trial_rng(1, 0);
        let seq = src.sequence(&mut rng, 100_000);
        let top = seq.iter().filter(|w| w.to_string() == "11").count() as f64 / 1e5;
        assert!((top - 0.4).abs() < 0.01);
    }

    #[test]
    fn trial_streams_are_distinct_and_repeatable() {
        let a: u64 = trial_rng(5, 0).random();
        let b: u64 = trial_rng(5, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(5, 0).random::<u64>());
    }
}
