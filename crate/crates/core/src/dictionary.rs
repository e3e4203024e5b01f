//! The adaptive frequency-ranked dictionary shared by every codec.
//!
//! Entries are kept in non-increasing count order. When a word is seen its
//! count goes from `n` to `n + 1` and it moves above every entry whose count is
//! at most `n + 1`, so it overtakes equal-count peers. Encoder and decoder
//! apply the same rule, which is what keeps them in lockstep.

use crate::output::{Codebook, OutputList};
use crate::word::{BitWord, WordError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DictionaryError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("codebook has word length {codebook}, dictionary expects {m}")]
    SizeMismatch { m: usize, codebook: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub word: BitWord,
    pub count: u64,
}

/// What a single count update did to the ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Update {
    pub word: BitWord,
    /// Rank before the update (0-based).
    pub from: usize,
    /// Rank after the update.
    pub to: usize,
    pub count: u64,
    /// Set when the updated word caught up with the entry it just overtook,
    /// leaving a zero distance at rank `to`.
    pub tied_with: Option<BitWord>,
}

/// Frequency ordered input list paired with a fixed codebook.
#[derive(Debug, Clone)]
pub struct AdaptiveDictionary<C = OutputList> {
    m: usize,
    entries: Vec<Entry>,
    // current rank of each input word, indexed by word value
    position: Vec<u32>,
    processed: u64,
    // number of adjacent entries with equal counts
    ties: usize,
    codebook: C,
}

impl<C: Codebook> AdaptiveDictionary<C> {
    /// Fresh dictionary: all words in ascending lexicographic order with count 0.
    pub fn new(m: usize, codebook: C) -> Result<Self, DictionaryError> {
        let words: Vec<BitWord> = BitWord::all(m)?.collect();
        if codebook.word_len() != m {
            return Err(DictionaryError::SizeMismatch {
                m,
                codebook: codebook.word_len(),
            });
        }
        let size = words.len();
        Ok(Self {
            m,
            entries: words.into_iter().map(|word| Entry { word, count: 0 }).collect(),
            position: (0..size as u32).collect(),
            processed: 0,
            ties: size - 1,
            codebook,
        })
    }

    pub fn word_len(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn codebook(&self) -> &C {
        &self.codebook
    }

    /// Number of words processed so far (the sum of all counts).
    pub fn processed(&self) -> u64 {
        self.processed
    }

    pub fn rank_of(&self, word: BitWord) -> usize {
        self.position[word.value() as usize] as usize
    }

    pub fn count_of(&self, word: BitWord) -> u64 {
        self.entries[self.rank_of(word)].count
    }

    /// Number of adjacent entry pairs with equal counts.
    pub fn zero_distances(&self) -> usize {
        self.ties
    }

    /// True when counts are strictly decreasing along the list.
    pub fn is_strictly_ordered(&self) -> bool {
        self.ties == 0
    }

    /// Distances `n_i - n_{i+1}` between adjacent entries, for `i = 1..2^m-1`.
    pub fn distances(&self) -> Vec<u64> {
        self.entries.windows(2).map(|w| w[0].count - w[1].count).collect()
    }

    /// Maps `word` to the codeword at its current rank, then updates counts.
    pub fn encode_step(&mut self, word: BitWord) -> BitWord {
        self.encode_traced(word).0
    }

    pub fn encode_traced(&mut self, word: BitWord) -> (BitWord, Update) {
        assert_eq!(word.len(), self.m, "word length does not match dictionary");
        let rank = self.rank_of(word);
        let out = self.codebook.codeword(rank);
        (out, self.bump(rank))
    }

    /// Maps `codeword` back to the input word at the same rank, then applies the
    /// same update as the encoder.
    pub fn decode_step(&mut self, codeword: BitWord) -> BitWord {
        self.decode_traced(codeword).0
    }

    pub fn decode_traced(&mut self, codeword: BitWord) -> (BitWord, Update) {
        assert_eq!(codeword.len(), self.m, "codeword length does not match dictionary");
        let rank = self.codebook.rank_of(codeword);
        let word = self.entries[rank].word;
        (word, self.bump(rank))
    }

    /// Counts one more occurrence of the entry at `rank` and reorders.
    fn bump(&mut self, p: usize) -> Update {
        let count = self.entries[p].count + 1;
        let q = self.entries[..p].partition_point(|e| e.count > count);

        let lo = q.saturating_sub(1);
        let hi = (p + 1).min(self.entries.len() - 1);
        let before = self.ties_in(lo, hi);

        self.entries[p].count = count;
        self.entries[q..=p].rotate_right(1);
        for r in q..=p {
            self.position[self.entries[r].word.value() as usize] = r as u32;
        }
        self.ties = self.ties - before + self.ties_in(lo, hi);
        self.processed += 1;

        let tied_with = (q < p && self.entries[q + 1].count == count).then(|| self.entries[q + 1].word);
        Update {
            word: self.entries[q].word,
            from: p,
            to: q,
            count,
            tied_with,
        }
    }

    // equal-count adjacent pairs (j, j+1) for j in lo..hi
    fn ties_in(&self, lo: usize, hi: usize) -> usize {
        (lo..hi)
            .filter(|&j| self.entries[j].count == self.entries[j + 1].count)
            .count()
    }
}

impl<C: Codebook + Clone> AdaptiveDictionary<C> {
    /// Restores a dictionary from explicit entries (e.g. a checkpoint).
    ///
    /// Returns `None` unless the entries are a permutation of all words with
    /// non-increasing counts.
    pub fn from_entries(m: usize, entries: Vec<Entry>, codebook: C) -> Option<Self> {
        let mut d = Self::new(m, codebook).ok()?;
        if entries.len() != d.entries.len() || entries.windows(2).any(|w| w[1].count > w[0].count) {
            return None;
        }
        let mut seen = vec![false; entries.len()];
        for (r, e) in entries.iter().enumerate() {
            if e.word.len() != m || std::mem::replace(&mut seen[e.word.value() as usize], true) {
                return None;
            }
            d.position[e.word.value() as usize] = r as u32;
        }
        d.processed = entries.iter().map(|e| e.count).sum();
        d.entries = entries;
        d.ties = d.ties_in(0, d.entries.len() - 1);
        Some(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::slc_output_list;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn state(d: &AdaptiveDictionary) -> Vec<(String, u64)> {
        d.entries().iter().map(|e| (e.word.to_string(), e.count)).collect()
    }

    fn table(rows: &[(&str, u64)]) -> Vec<(String, u64)> {
        rows.iter().map(|(s, c)| (s.to_string(), *c)).collect()
    }

    fn dict(m: usize) -> AdaptiveDictionary {
        AdaptiveDictionary::new(m, slc_output_list(m).unwrap()).unwrap()
    }

    #[test]
    fn init_is_lexicographic_with_zero_counts() {
        assert_eq!(state(&dict(2)), table(&[("00", 0), ("01", 0), ("10", 0), ("11", 0)]));
        assert_eq!(state(&dict(1)), table(&[("0", 0), ("1", 0)]));
        let d4 = dict(4);
        assert_eq!(d4.entries()[0], Entry { word: w("0000"), count: 0 });
        assert_eq!(d4.entries()[15], Entry { word: w("1111"), count: 0 });
        assert_eq!(d4.distances(), vec![0; 15]);
    }

    #[test]
    fn size_mismatch_rejected() {
        let err = AdaptiveDictionary::new(3, slc_output_list(2).unwrap()).unwrap_err();
        assert_eq!(err, DictionaryError::SizeMismatch { m: 3, codebook: 2 });
    }

    #[test]
    fn first_step_of_example_stream() {
        let mut d = dict(2);
        assert_eq!(d.encode_step(w("10")), w("01"));
        assert_eq!(d.entries()[0], Entry { word: w("10"), count: 1 });
    }

    #[test]
    fn example_stream_reproduces_both_tables() {
        let mut d = dict(2);
        for s in ["10", "11", "00", "10", "11", "10"] {
            d.encode_step(w(s));
        }
        assert_eq!(state(&d), table(&[("10", 3), ("11", 2), ("00", 1), ("01", 0)]));
        assert_eq!(d.distances(), vec![1, 1, 1]);

        assert_eq!(d.encode_step(w("00")), w("01"));
        assert_eq!(state(&d), table(&[("10", 3), ("00", 2), ("11", 2), ("01", 0)]));
        assert_eq!(d.distances(), vec![1, 0, 2]);
    }

    #[test]
    fn decoder_inverts_from_table_state() {
        let mut d = dict(2);
        for s in ["10", "11", "00", "10", "11", "10"] {
            d.decode_step(d.codebook().codeword(d.rank_of(w(s))));
        }
        assert_eq!(d.decode_step(w("01")), w("00"));
        assert_eq!(state(&d), table(&[("10", 3), ("00", 2), ("11", 2), ("01", 0)]));
        assert_eq!(dict(2).decode_step(w("11")), w("00"));
    }

    #[test]
    fn tie_tracking_matches_distances() {
        let mut d = dict(3);
        let stream = [5u32, 1, 5, 7, 1, 1, 0, 3, 3, 3, 6, 2, 4, 4, 5, 5, 5];
        for &v in &stream {
            let up = d.encode_traced(BitWord::new(v, 3).unwrap()).1;
            let zeros = d.distances().iter().filter(|&&x| x == 0).count();
            assert_eq!(d.zero_distances(), zeros);
            if let Some(peer) = up.tied_with {
                assert_eq!(d.count_of(peer), up.count);
                assert_eq!(d.rank_of(peer), up.to + 1);
            }
        }
        assert_eq!(d.processed(), stream.len() as u64);
    }

    #[test]
    fn tie_events_on_example_stream() {
        let mut d = dict(2);
        let ties: Vec<bool> = ["10", "11", "00", "10", "11", "10", "00"]
            .iter()
            .map(|s| d.encode_traced(w(s)).1.tied_with.is_some())
            .collect();
        assert_eq!(ties, [false, true, true, false, true, false, true]);
    }

    #[test]
    fn restore_from_entries() {
        let mut d = dict(2);
        for s in ["10", "11", "00", "10", "11", "10"] {
            d.encode_step(w(s));
        }
        let r = AdaptiveDictionary::from_entries(2, d.entries().to_vec(), slc_output_list(2).unwrap()).unwrap();
        assert_eq!(state(&r), state(&d));
        assert_eq!(r.processed(), 6);
        assert!(r.is_strictly_ordered());
        let mut bad = d.entries().to_vec();
        bad.swap(0, 3);
        assert!(AdaptiveDictionary::from_entries(2, bad, slc_output_list(2).unwrap()).is_none());
    }
}
