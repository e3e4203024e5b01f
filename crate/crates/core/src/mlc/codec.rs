//! Paired-page MLC encoder and decoder.

use super::enumerative::EnumerativeIndexer;
use super::MlcCostModel;
use crate::dictionary::AdaptiveDictionary;
use crate::slc::{slc_encode, CodecError, SlcDecoder, SlcEncoder};
use crate::word::{BitStream, BitWord};

/// Upper-page dictionary for one lower page codeword.
pub type UpperDictionary = AdaptiveDictionary<EnumerativeIndexer>;

/// Lower and upper page bit streams of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlcPages {
    pub lower: BitStream,
    pub upper: BitStream,
}

impl MlcPages {
    /// Splits a stream into two equal halves, the first becoming the lower
    /// page. Each half is a whole number of bytes and of `m`-bit words, so
    /// both pages see the same bit phase within bytes; leftover bits at the
    /// end are dropped.
    pub fn split_halves(stream: &BitStream, m: usize) -> Self {
        let m = m.max(1);
        let unit = 8 * m / gcd(8, m);
        let half = stream.len() / (2 * unit) * unit;
        let bits = stream.as_slice();
        Self {
            lower: bits[..half].iter().copied().collect(),
            upper: bits[half..2 * half].iter().copied().collect(),
        }
    }
}

// one lazily built dictionary per lower codeword value
#[derive(Debug, Clone)]
struct UpperBank {
    m: usize,
    model: MlcCostModel,
    dicts: Vec<Option<UpperDictionary>>,
}

impl UpperBank {
    fn new(m: usize, model: MlcCostModel) -> Self {
        Self {
            m,
            model,
            dicts: vec![None; 1 << m],
        }
    }

    fn get_mut(&mut self, v: BitWord) -> &mut UpperDictionary {
        let (m, model) = (self.m, self.model);
        self.dicts[v.value() as usize].get_or_insert_with(|| {
            AdaptiveDictionary::new(m, EnumerativeIndexer::new(v, &model)).expect("indexer length matches")
        })
    }

    fn get(&self, v: BitWord) -> Option<&UpperDictionary> {
        self.dicts.get(v.value() as usize)?.as_ref()
    }
}

/// Streaming MLC encoder: SLC shaping on the lower page, then the upper word
/// goes through the dictionary keyed by the lower codeword just produced.
#[derive(Debug, Clone)]
pub struct MlcEncoder {
    lower: SlcEncoder,
    upper: UpperBank,
}

impl MlcEncoder {
    pub fn new(m: usize, model: MlcCostModel) -> Result<Self, CodecError> {
        Ok(Self {
            lower: SlcEncoder::new(m)?,
            upper: UpperBank::new(m, model),
        })
    }

    /// Encodes one cell word; returns the (lower, upper) codewords.
    pub fn push(&mut self, lower: BitWord, upper: BitWord) -> (BitWord, BitWord) {
        let v = self.lower.push(lower);
        let y = self.upper.get_mut(v).encode_step(upper);
        (v, y)
    }

    pub fn upper_dictionary(&self, v: BitWord) -> Option<&UpperDictionary> {
        self.upper.get(v)
    }
}

#[derive(Debug, Clone)]
pub struct MlcDecoder {
    lower: SlcDecoder,
    upper: UpperBank,
}

impl MlcDecoder {
    pub fn new(m: usize, model: MlcCostModel) -> Result<Self, CodecError> {
        Ok(Self {
            lower: SlcDecoder::new(m)?,
            upper: UpperBank::new(m, model),
        })
    }

    /// Decodes one (lower, upper) codeword pair back to data words.
    pub fn push(&mut self, v: BitWord, y: BitWord) -> (BitWord, BitWord) {
        let lower = self.lower.push(v);
        let upper = self.upper.get_mut(v).decode_step(y);
        (lower, upper)
    }

    pub fn upper_dictionary(&self, v: BitWord) -> Option<&UpperDictionary> {
        self.upper.get(v)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn paired_words(pages: &MlcPages, m: usize) -> Result<(Vec<BitWord>, Vec<BitWord>), CodecError> {
    let lower = pages.lower.words(m)?;
    let upper = pages.upper.words(m)?;
    if lower.len() != upper.len() {
        return Err(CodecError::LengthMismatch {
            lower: lower.len(),
            upper: upper.len(),
        });
    }
    Ok((lower, upper))
}

pub fn mlc_encode(data: &MlcPages, m: usize, model: &MlcCostModel) -> Result<MlcPages, CodecError> {
    let (lower, upper) = paired_words(data, m)?;
    let mut enc = MlcEncoder::new(m, *model)?;
    let (v, y): (Vec<BitWord>, Vec<BitWord>) = lower.into_iter().zip(upper).map(|(l, u)| enc.push(l, u)).unzip();
    Ok(MlcPages {
        lower: BitStream::from_words(v),
        upper: BitStream::from_words(y),
    })
}

pub fn mlc_decode(code: &MlcPages, m: usize, model: &MlcCostModel) -> Result<MlcPages, CodecError> {
    let (v, y) = paired_words(code, m)?;
    let mut dec = MlcDecoder::new(m, *model)?;
    let (lower, upper): (Vec<BitWord>, Vec<BitWord>) = v.into_iter().zip(y).map(|(a, b)| dec.push(a, b)).unzip();
    Ok(MlcPages {
        lower: BitStream::from_words(lower),
        upper: BitStream::from_words(upper),
    })
}

/// Baseline that shapes each page on its own with the SLC code.
pub fn independent_slc_encode(data: &MlcPages, m: usize) -> Result<MlcPages, CodecError> {
    paired_words(data, m)?;
    Ok(MlcPages {
        lower: slc_encode(&data.lower, m)?,
        upper: slc_encode(&data.upper, m)?,
    })
}
