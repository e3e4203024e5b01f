//! Fixed-length binary words and bit streams.
//!
//! Bits are stored most-significant first: bit 0 of a [`BitWord`] is its
//! leftmost symbol, and bytes are expanded into a [`BitStream`] MSB first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported parsing length. Dictionaries are dense arrays of `2^m`
/// entries, so anything larger is rejected.
pub const MAX_WORD_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word length {0} outside supported range 1..={MAX_WORD_LEN}")]
    LengthOutOfRange(usize),
    #[error("value {value} does not fit in {len} bits")]
    ValueTooLarge { value: u32, len: usize },
    #[error("invalid bit character {0:?}")]
    InvalidChar(char),
    #[error("stream of {len} bits is not a multiple of word length {m}")]
    Misaligned { len: usize, m: usize },
}

/// Checks that `m` is a supported parsing length.
pub fn check_word_len(m: usize) -> Result<(), WordError> {
    if (1..=MAX_WORD_LEN).contains(&m) {
        Ok(())
    } else {
        Err(WordError::LengthOutOfRange(m))
    }
}

/// A binary word of length `1..=16`, stored as an unsigned value whose most
/// significant bit is the first symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    value: u32,
    len: u8,
}

impl BitWord {
    pub fn new(value: u32, len: usize) -> Result<Self, WordError> {
        check_word_len(len)?;
        if value >> len != 0 {
            return Err(WordError::ValueTooLarge { value, len });
        }
        Ok(Self {
            value,
            len: len as u8,
        })
    }

    /// Builds a word from bits given first-symbol first.
    pub fn from_bits(bits: &[bool]) -> Result<Self, WordError> {
        check_word_len(bits.len())?;
        let value = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Ok(Self {
            value,
            len: bits.len() as u8,
        })
    }

    pub fn zeros(len: usize) -> Result<Self, WordError> {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Result<Self, WordError> {
        check_word_len(len)?;
        Self::new((1u32 << len) - 1, len)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    /// Always false; words have at least one symbol.
    #[inline]
    pub fn is_empty(self) -> bool {
        false
    }

    /// Symbol at position `i`, counting from the left.
    #[inline]
    pub fn bit(self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.value >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn bits(self) -> impl Iterator<Item = bool> {
        (0..self.len()).map(move |i| self.bit(i))
    }

    pub fn count_zeros(self) -> usize {
        self.len() - self.value.count_ones() as usize
    }

    pub fn count_ones(self) -> usize {
        self.value.count_ones() as usize
    }

    pub fn hamming(self, other: BitWord) -> usize {
        debug_assert_eq!(self.len, other.len);
        (self.value ^ other.value).count_ones() as usize
    }

    /// XOR with an error pattern of the same length.
    pub fn flip(self, pattern: u32) -> BitWord {
        BitWord {
            value: (self.value ^ pattern) & ((1u32 << self.len) - 1),
            len: self.len,
        }
    }

    /// All `2^m` words of length `m` in ascending lexicographic order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = BitWord>, WordError> {
        check_word_len(len)?;
        Ok((0..1u32 << len).map(move |value| BitWord {
            value,
            len: len as u8,
        }))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = parse_bits(s)?;
        Self::from_bits(&bits)
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, WordError> {
    s.chars()
        .filter(|c| !matches!(c, '.' | '_' | ' '))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(WordError::InvalidChar(other)),
        })
        .collect()
}

/// A finite binary sequence.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BitStream {
    bits: Vec<bool>,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    /// Expands bytes MSB first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut bits = Vec::with_capacity(bytes.len() * 8);
        for &b in bytes {
            for i in (0..8).rev() {
                bits.push((b >> i) & 1 == 1);
            }
        }
        Self { bits }
    }

    /// Packs bits MSB first; a partial final byte is right-padded with 1s.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                let mut byte = 0xFFu8;
                for (i, &b) in chunk.iter().enumerate() {
                    if !b {
                        byte &= !(0x80 >> i);
                    }
                }
                byte
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn push_word(&mut self, word: BitWord) {
        self.bits.extend(word.bits());
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn count_zeros(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    /// Splits into consecutive length-`m` words. Fails unless the length is a
    /// multiple of `m`.
    pub fn words(&self, m: usize) -> Result<Vec<BitWord>, WordError> {
        check_word_len(m)?;
        if self.bits.len() % m != 0 {
            return Err(WordError::Misaligned {
                len: self.bits.len(),
                m,
            });
        }
        Ok(self
            .bits
            .chunks_exact(m)
            .map(|c| BitWord::from_bits(c).expect("length checked"))
            .collect())
    }

    pub fn from_words<I: IntoIterator<Item = BitWord>>(words: I) -> Self {
        let mut s = Self::new();
        for w in words {
            s.push_word(w);
        }
        s
    }

    /// Right-pads with 1-bits up to a multiple of `m`, returning the number of
    /// bits added.
    pub fn pad_ones(&mut self, m: usize) -> usize {
        let rem = self.bits.len() % m;
        let added = if rem == 0 { 0 } else { m - rem };
        self.bits.extend(std::iter::repeat_n(true, added));
        added
    }
}

impl From<Vec<bool>> for BitStream {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl FromStr for BitStream {
    type Err = WordError;

    /// Parses `"10.11.00"`-style strings; `.`, `_` and spaces are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self {
            bits: parse_bits(s)?,
        })
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.len() <= 64 {
            write!(f, "BitStream({self})")
        } else {
            write!(f, "BitStream({} bits)", self.bits.len())
        }
    }
}
