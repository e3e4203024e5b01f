//! Binary symmetric channel, recurrence tracing and the Monte Carlo studies
//! of error propagation.

mod channel;
mod montecarlo;
mod recurrence;

pub use channel::{bsc_transmit, flip_pattern, ChannelSpec};
pub use montecarlo::{
    estimate_corpus_decode_recurrence, estimate_instability, pair_recurrence_mc, pair_recurrence_mc_2d,
    InstabilityConfig, PairEstimate, TrialBatch, CORPUS_PREFIX_BYTES,
};
pub use recurrence::{trace_decode_recurrences, trace_encode_recurrences, RecurrenceEvent, Side};

use thiserror::Error;

use crate::slc::CodecError;
use crate::source::DistributionError;
use crate::word::WordError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("crossover probability {0} outside [0, 0.5)")]
    BadRho(f64),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("corpus holds {bytes} bytes, at least {needed} are needed")]
    CorpusTooShort { bytes: usize, needed: usize },
    #[error("t = {t} exceeds the {len}-word sequence")]
    GridBeyondSequence { t: usize, len: usize },
    #[error("t grid must be strictly increasing")]
    UnsortedGrid,
    #[error("walk needs P1 > P2, got ({p1}, {p2})")]
    NoDrift { p1: f64, p2: f64 },
}

pub(crate) fn check_rho(rho: f64) -> Result<(), SimError> {
    if (0.0..0.5).contains(&rho) {
        Ok(())
    } else {
        Err(SimError::BadRho(rho))
    }
}
