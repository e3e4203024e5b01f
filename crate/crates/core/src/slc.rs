//! Rate-1 SLC direct shaping encoder and decoder.

use thiserror::Error;

use crate::dictionary::{AdaptiveDictionary, DictionaryError, Update};
use crate::output::{slc_output_list, OutputList, OutputListError};
use crate::report::{csv_text, fmt_num};
use crate::word::{BitStream, BitWord, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    OutputList(#[from] OutputListError),
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error("lower and upper streams hold different word counts ({lower} vs {upper})")]
    LengthMismatch { lower: usize, upper: usize },
    #[error("checkpoint {checkpoint} exceeds stream length {len}")]
    CheckpointOutOfRange { checkpoint: usize, len: usize },
    #[error("checkpoints must be strictly increasing")]
    UnsortedCheckpoints,
    #[error("invalid level {0}; cell levels are 0..=3")]
    BadLevel(u8),
    #[error("invalid cost model: {0}")]
    BadCostModel(String),
    #[error("rank {index} outside 1..={size}")]
    RankOutOfRange { index: u64, size: u64 },
}

fn fresh_dictionary(m: usize) -> Result<AdaptiveDictionary, CodecError> {
    let list = slc_output_list(m)?;
    Ok(AdaptiveDictionary::new(m, list)?)
}

/// Streaming SLC encoder over `m`-bit words.
#[derive(Debug, Clone)]
pub struct SlcEncoder {
    dict: AdaptiveDictionary<OutputList>,
}

impl SlcEncoder {
    pub fn new(m: usize) -> Result<Self, CodecError> {
        Ok(Self {
            dict: fresh_dictionary(m)?,
        })
    }

    pub fn push(&mut self, word: BitWord) -> BitWord {
        self.dict.encode_step(word)
    }

    pub fn push_traced(&mut self, word: BitWord) -> (BitWord, Update) {
        self.dict.encode_traced(word)
    }

    pub fn dictionary(&self) -> &AdaptiveDictionary {
        &self.dict
    }
}

/// Streaming SLC decoder; mirrors [`SlcEncoder`].
#[derive(Debug, Clone)]
pub struct SlcDecoder {
    dict: AdaptiveDictionary<OutputList>,
}

impl SlcDecoder {
    pub fn new(m: usize) -> Result<Self, CodecError> {
        Ok(Self {
            dict: fresh_dictionary(m)?,
        })
    }

    pub fn push(&mut self, codeword: BitWord) -> BitWord {
        self.dict.decode_step(codeword)
    }

    pub fn push_traced(&mut self, codeword: BitWord) -> (BitWord, Update) {
        self.dict.decode_traced(codeword)
    }

    pub fn dictionary(&self) -> &AdaptiveDictionary {
        &self.dict
    }
}

/// Encodes a stream whose length is a multiple of `m`.
pub fn slc_encode(data: &BitStream, m: usize) -> Result<BitStream, CodecError> {
    let mut enc = SlcEncoder::new(m)?;
    let words = data.words(m)?;
    Ok(BitStream::from_words(words.into_iter().map(|w| enc.push(w))))
}

/// Inverse of [`slc_encode`]. Never signals errors on noisy input: a corrupted
/// codeword just decodes to some word.
pub fn slc_decode(code: &BitStream, m: usize) -> Result<BitStream, CodecError> {
    let mut dec = SlcDecoder::new(m)?;
    let words = code.words(m)?;
    Ok(BitStream::from_words(words.into_iter().map(|w| dec.push(w))))
}

/// Encoded stream plus the data length needed to strip padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedCode {
    pub code: BitStream,
    pub data_bits: usize,
}

/// Encodes any stream, right-padding the final word with 1-bits.
pub fn slc_encode_padded(data: &BitStream, m: usize) -> Result<PaddedCode, CodecError> {
    let mut padded = data.clone();
    padded.pad_ones(m);
    Ok(PaddedCode {
        code: slc_encode(&padded, m)?,
        data_bits: data.len(),
    })
}

pub fn slc_decode_padded(code: &PaddedCode, m: usize) -> Result<BitStream, CodecError> {
    let mut out = slc_decode(&code.code, m)?;
    out.truncate(code.data_bits);
    Ok(out)
}

/// Fraction of `0` symbols in the first `gamma` bits, at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFractionProfile {
    pub checkpoints: Vec<usize>,
    pub fractions: Vec<f64>,
}

impl ZeroFractionProfile {
    pub fn to_csv(&self) -> String {
        csv_text(
            &["gamma", "fraction"],
            self.checkpoints
                .iter()
                .zip(&self.fractions)
                .map(|(g, f)| vec![g.to_string(), fmt_num(*f)]),
        )
    }

    pub fn last(&self) -> Option<f64> {
        self.fractions.last().copied()
    }
}

pub fn zero_fraction_profile(stream: &BitStream, checkpoints: &[usize]) -> Result<ZeroFractionProfile, CodecError> {
    validate_checkpoints(checkpoints, stream.len())?;
    let bits = stream.as_slice();
    let mut fractions = Vec::with_capacity(checkpoints.len());
    let mut zeros = 0usize;
    let mut pos = 0usize;
    for &gamma in checkpoints {
        zeros += bits[pos..gamma].iter().filter(|&&b| !b).count();
        pos = gamma;
        fractions.push(if gamma == 0 { 0.0 } else { zeros as f64 / gamma as f64 });
    }
    Ok(ZeroFractionProfile {
        checkpoints: checkpoints.to_vec(),
        fractions,
    })
}

pub(crate) fn validate_checkpoints(checkpoints: &[usize], len: usize) -> Result<(), CodecError> {
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CodecError::UnsortedCheckpoints);
    }
    if let Some(&c) = checkpoints.iter().find(|&&c| c > len) {
        return Err(CodecError::CheckpointOutOfRange { checkpoint: c, len });
    }
    Ok(())
}

/// `count` evenly spaced checkpoints ending at `len`.
pub fn even_checkpoints(len: usize, count: usize) -> Vec<usize> {
    let count = count.max(1).min(len.max(1));
    let mut out: Vec<usize> = (1..=count).map(|k| len * k / count).filter(|&g| g > 0).collect();
    out.dedup();
    out
}
