//! Cost-ordered output codeword lists.

use thiserror::Error;

use crate::word::{check_word_len, BitWord, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OutputListError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("symbol cost {0} is negative or not finite")]
    BadCost(f64),
    #[error("expected {expected} codewords, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("codeword {0} appears more than once or has the wrong length")]
    NotPermutation(BitWord),
    #[error("costs must be non-decreasing along the list (index {0})")]
    Unordered(usize),
}

/// Maps dictionary ranks to output codewords and back.
///
/// Rank 0 is the most frequent dictionary entry and is paired with the
/// cheapest codeword.
pub trait Codebook {
    fn word_len(&self) -> usize;

    fn codeword(&self, rank: usize) -> BitWord;

    fn rank_of(&self, codeword: BitWord) -> usize;
}

impl<C: Codebook + ?Sized> Codebook for std::sync::Arc<C> {
    fn word_len(&self) -> usize {
        (**self).word_len()
    }

    fn codeword(&self, rank: usize) -> BitWord {
        (**self).codeword(rank)
    }

    fn rank_of(&self, codeword: BitWord) -> usize {
        (**self).rank_of(codeword)
    }
}

/// A fixed list of all `2^m` codewords ordered by non-decreasing total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputList {
    m: usize,
    words: Vec<BitWord>,
    costs: Vec<f64>,
    // rank of each codeword, indexed by its value
    ranks: Vec<u32>,
}

impl OutputList {
    /// Builds a list from an explicit ordering. `words` must be a permutation
    /// of all length-`m` words and `costs` must be non-decreasing.
    pub fn from_parts(m: usize, words: Vec<BitWord>, costs: Vec<f64>) -> Result<Self, OutputListError> {
        check_word_len(m)?;
        let size = 1usize << m;
        if words.len() != size || costs.len() != size {
            return Err(OutputListError::WrongSize {
                expected: size,
                got: words.len().min(costs.len()),
            });
        }
        if let Some(&c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(OutputListError::BadCost(c));
        }
        if let Some(i) = costs.windows(2).position(|w| w[1] < w[0]) {
            return Err(OutputListError::Unordered(i + 1));
        }
        let mut ranks = vec![u32::MAX; size];
        for (rank, w) in words.iter().enumerate() {
            if w.len() != m || ranks[w.value() as usize] != u32::MAX {
                return Err(OutputListError::NotPermutation(*w));
            }
            ranks[w.value() as usize] = rank as u32;
        }
        Ok(Self {
            m,
            words,
            costs,
            ranks,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BitWord] {
        &self.words
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost_of(&self, codeword: BitWord) -> f64 {
        self.costs[self.rank_of(codeword)]
    }
}

impl Codebook for OutputList {
    fn word_len(&self) -> usize {
        self.m
    }

    #[inline]
    fn codeword(&self, rank: usize) -> BitWord {
        self.words[rank]
    }

    #[inline]
    fn rank_of(&self, codeword: BitWord) -> usize {
        self.ranks[codeword.value() as usize] as usize
    }
}

/// Per-symbol costs for SLC codewords. The default charges one unit per
/// programmed (`0`) cell and nothing for an erased (`1`) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolCosts {
    pub zero: f64,
    pub one: f64,
}

impl Default for SymbolCosts {
    fn default() -> Self {
        Self { zero: 1.0, one: 0.0 }
    }
}

/// All `2^m` words sorted by total symbol cost ascending; equal-cost words are
/// listed by descending unsigned value (`11, 10, 01, 00` for `m = 2`).
pub fn canonical_output_list(m: usize, symbol_costs: SymbolCosts) -> Result<OutputList, OutputListError> {
    check_word_len(m)?;
    for c in [symbol_costs.zero, symbol_costs.one] {
        if !c.is_finite() || c < 0.0 {
            return Err(OutputListError::BadCost(c));
        }
    }
    let cost = |w: BitWord| w.count_zeros() as f64 * symbol_costs.zero + w.count_ones() as f64 * symbol_costs.one;
    let mut words: Vec<BitWord> = BitWord::all(m)?.collect();
    words.sort_by(|a, b| cost(*a).total_cmp(&cost(*b)).then(b.value().cmp(&a.value())));
    let costs = words.iter().map(|&w| cost(w)).collect();
    OutputList::from_parts(m, words, costs)
}

/// The canonical SLC list with unit cost per `0` symbol.
pub fn slc_output_list(m: usize) -> Result<OutputList, OutputListError> {
    canonical_output_list(m, SymbolCosts::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing(l: &OutputList) -> Vec<String> {
        l.words().iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn two_bit_list_matches_example_dictionary() {
        let l = slc_output_list(2).unwrap();
        assert_eq!(listing(&l), ["11", "10", "01", "00"]);
        assert_eq!(l.costs(), &[0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn one_bit_list() {
        assert_eq!(listing(&slc_output_list(1).unwrap()), ["1", "0"]);
    }

    #[test]
    fn three_bit_list_brute_force() {
        // sort all 8 words by (zeros asc, value desc) independently
        let mut expect: Vec<u32> = (0..8).collect();
        expect.sort_by_key(|&v| (3 - (v as u32).count_ones(), std::cmp::Reverse(v)));
        let expect: Vec<String> = expect.iter().map(|v| format!("{v:03b}")).collect();
        assert_eq!(expect, ["111", "110", "101", "011", "100", "010", "001", "000"]);
        assert_eq!(listing(&slc_output_list(3).unwrap()), expect);
    }

    #[test]
    fn rank_lookup_inverts_codeword() {
        let l = slc_output_list(5).unwrap();
        for r in 0..l.len() {
            assert_eq!(l.rank_of(l.codeword(r)), r);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(slc_output_list(0), Err(OutputListError::Word(_))));
        assert!(matches!(slc_output_list(17), Err(OutputListError::Word(_))));
        assert!(canonical_output_list(2, SymbolCosts { zero: -1.0, one: 0.0 }).is_err());
        let w: Vec<BitWord> = BitWord::all(1).unwrap().collect();
        assert!(matches!(
            OutputList::from_parts(1, w.clone(), vec![1.0, 0.0]),
            Err(OutputListError::Unordered(1))
        ));
        assert!(matches!(
            OutputList::from_parts(1, vec![w[0], w[0]], vec![0.0, 0.0]),
            Err(OutputListError::NotPermutation(_))
        ));
    }
}
