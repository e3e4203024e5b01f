//! Recurrence events in live encode and decode traces.

use crate::dictionary::Update;
use crate::slc::{SlcDecoder, SlcEncoder};
use crate::word::{BitStream, BitWord};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Encoder,
    Decoder,
}

/// A word caught up with its neighbour: their count distance became 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceEvent {
    /// Words processed when the event happened (the event follows word `time`).
    pub time: usize,
    /// 1-based index `i` of the tied pair `(i, i + 1)`.
    pub pair: usize,
    pub side: Side,
    /// The updated word and the entry it tied with.
    pub words: (BitWord, BitWord),
}

impl RecurrenceEvent {
    fn from_update(up: &Update, time: usize, side: Side) -> Option<Self> {
        up.tied_with.map(|peer| Self {
            time,
            pair: up.to + 1,
            side,
            words: (up.word, peer),
        })
    }
}

fn trace<F>(words: &[BitWord], watch_from: usize, side: Side, mut step: F) -> (BitStream, Vec<RecurrenceEvent>)
where
    F: FnMut(BitWord) -> (BitWord, Update),
{
    let mut out = BitStream::new();
    let mut events = Vec::new();
    for (k, &w) in words.iter().enumerate() {
        let (o, up) = step(w);
        out.push_word(o);
        let time = k + 1;
        if time > watch_from {
            events.extend(RecurrenceEvent::from_update(&up, time, side));
        }
    }
    (out, events)
}

/// Encodes `words` with a fresh dictionary and records every recurrence after
/// the first `watch_from` words. The first event is `events[0]`.
pub fn trace_encode_recurrences(
    words: &[BitWord],
    m: usize,
    watch_from: usize,
) -> Result<(BitStream, Vec<RecurrenceEvent>), SimError> {
    let mut enc = SlcEncoder::new(m)?;
    check_lengths(words, m)?;
    Ok(trace(words, watch_from, Side::Encoder, |w| enc.push_traced(w)))
}

/// Decoder-side counterpart of [`trace_encode_recurrences`].
pub fn trace_decode_recurrences(
    codewords: &[BitWord],
    m: usize,
    watch_from: usize,
) -> Result<(BitStream, Vec<RecurrenceEvent>), SimError> {
    let mut dec = SlcDecoder::new(m)?;
    check_lengths(codewords, m)?;
    Ok(trace(codewords, watch_from, Side::Decoder, |c| dec.push_traced(c)))
}

fn check_lengths(words: &[BitWord], m: usize) -> Result<(), SimError> {
    match words.iter().find(|w| w.len() != m) {
        Some(w) => Err(crate::word::WordError::Misaligned { len: w.len(), m }.into()),
        None => Ok(()),
    }
}
