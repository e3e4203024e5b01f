//! Monte Carlo estimates of recurrence probabilities.
//!
//! Time `t` is measured in words. A trial declares a recurrence at `t` when
//! the encoder or the decoder dictionary has two adjacent entries with equal
//! counts at any point after the first `t` words, the first `t` words being
//! decoded noise free.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::flip_pattern;
use super::{check_rho, SimError};
use crate::dictionary::{AdaptiveDictionary, Entry};
use crate::output::{slc_output_list, OutputList};
use crate::report::{csv_text, fmt_num};
use crate::source::{source_alphabet, trial_rng, validate_distribution, IidSource};
use crate::word::{BitStream, BitWord};

type SharedDictionary = AdaptiveDictionary<Arc<OutputList>>;

/// Bytes of corpus prefix used by the corpus decoding study.
pub const CORPUS_PREFIX_BYTES: usize = 10_000;

/// Per-checkpoint recurrence fractions over independent trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialBatch {
    pub trials: usize,
    pub t_grid: Vec<usize>,
    pub fractions: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Unit of `t`.
    pub unit: &'static str,
}

impl TrialBatch {
    fn from_counts(trials: usize, t_grid: &[usize], hits: &[u64]) -> Self {
        let n = trials as f64;
        let fractions: Vec<f64> = hits.iter().map(|&h| h as f64 / n).collect();
        let stderr = fractions.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
        Self {
            trials,
            t_grid: t_grid.to_vec(),
            fractions,
            stderr,
            unit: "words",
        }
    }

    fn empty(t_grid: &[usize]) -> Self {
        Self {
            trials: 0,
            t_grid: t_grid.to_vec(),
            fractions: Vec::new(),
            stderr: Vec::new(),
            unit: "words",
        }
    }

    pub fn to_csv(&self) -> String {
        csv_text(
            &["t", "fraction", "stderr"],
            self.t_grid
                .iter()
                .zip(&self.fractions)
                .zip(&self.stderr)
                .map(|((t, f), s)| vec![t.to_string(), fmt_num(*f), fmt_num(*s)]),
        )
    }
}

fn default_trials() -> usize {
    2000
}

fn default_seq_len() -> usize {
    20_000
}

/// Source/channel setup of the dictionary instability study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstabilityConfig {
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    pub m: usize,
    pub rho: f64,
    pub t_grid: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_seq_len")]
    pub seq_len: usize,
}

fn check_grid(t_grid: &[usize], len: usize) -> Result<(), SimError> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::UnsortedGrid);
    }
    match t_grid.last() {
        Some(&t) if t > len => Err(SimError::GridBeyondSequence { t, len }),
        _ => Ok(()),
    }
}

fn fresh(m: usize, list: &Arc<OutputList>) -> SharedDictionary {
    AdaptiveDictionary::new(m, Arc::clone(list)).expect("list matches m")
}

/// Encodes `words`, returning the codewords, clones of the dictionary after
/// each grid time, and the last time the encoder was unstable (0 counts the
/// fresh dictionary).
fn encode_with_snapshots(
    words: &[BitWord],
    m: usize,
    list: &Arc<OutputList>,
    t_grid: &[usize],
) -> (Vec<BitWord>, Vec<SharedDictionary>, usize) {
    let mut enc = fresh(m, list);
    let mut snaps = Vec::with_capacity(t_grid.len());
    let mut grid = t_grid.iter().peekable();
    let mut last_unstable = 0;
    let mut code = Vec::with_capacity(words.len());
    for s in 0..=words.len() {
        while grid.next_if(|&&t| t == s).is_some() {
            snaps.push(enc.clone());
        }
        if !enc.is_strictly_ordered() {
            last_unstable = s;
        }
        if s < words.len() {
            code.push(enc.encode_step(words[s]));
        }
    }
    (code, snaps, last_unstable)
}

/// Decodes `received[t..]` starting from the clean state at `t`; true if the
/// decoder is unstable at any point.
fn decoder_recurs(mut dec: SharedDictionary, received: &[BitWord]) -> bool {
    if !dec.is_strictly_ordered() {
        return true;
    }
    for &c in received {
        dec.decode_step(c);
        if !dec.is_strictly_ordered() {
            return true;
        }
    }
    false
}

fn noisy<R: rand::Rng>(code: &[BitWord], m: usize, rho: f64, rng: &mut R) -> Vec<BitWord> {
    code.iter().map(|c| c.flip(flip_pattern(rng, m, rho))).collect()
}

fn sum_hits(per_trial: Vec<Vec<bool>>, grid_len: usize) -> Vec<u64> {
    let mut hits = vec![0u64; grid_len];
    for row in per_trial {
        for (h, r) in hits.iter_mut().zip(row) {
            *h += r as u64;
        }
    }
    hits
}

/// Fraction of trials whose dictionaries become unstable after `t` clean
/// words, for each `t` in the grid.
pub fn estimate_instability(cfg: &InstabilityConfig) -> Result<TrialBatch, SimError> {
    check_rho(cfg.rho)?;
    let source = IidSource::new(&cfg.p, cfg.m)?;
    check_grid(&cfg.t_grid, cfg.seq_len)?;
    if cfg.trials == 0 {
        return Ok(TrialBatch::empty(&cfg.t_grid));
    }
    let list = Arc::new(slc_output_list(cfg.m).map_err(crate::slc::CodecError::from)?);
    let per_trial: Vec<Vec<bool>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(cfg.seed, k);
            let words = source.sequence(&mut rng, cfg.seq_len);
            let (code, snaps, last_unstable) = encode_with_snapshots(&words, cfg.m, &list, &cfg.t_grid);
            let received = noisy(&code, cfg.m, cfg.rho, &mut rng);
            cfg.t_grid
                .iter()
                .zip(snaps)
                .map(|(&t, snap)| last_unstable >= t || decoder_recurs(snap, &received[t..]))
                .collect()
        })
        .collect();
    Ok(TrialBatch::from_counts(cfg.trials, &cfg.t_grid, &sum_hits(per_trial, cfg.t_grid.len())))
}

/// Decoder recurrence on a fixed corpus prefix: the first
/// [`CORPUS_PREFIX_BYTES`] bytes are encoded once, and each trial passes the
/// code through its own BSC realisation.
pub fn estimate_corpus_decode_recurrence(
    corpus: &BitStream,
    m: usize,
    rho: f64,
    t_grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<TrialBatch, SimError> {
    check_rho(rho)?;
    let needed = CORPUS_PREFIX_BYTES * 8;
    if corpus.len() < needed {
        return Err(SimError::CorpusTooShort {
            bytes: corpus.len() / 8,
            needed: CORPUS_PREFIX_BYTES,
        });
    }
    let prefix: BitStream = corpus.as_slice()[..needed / m * m].iter().copied().collect();
    let words = prefix.words(m)?;
    check_grid(t_grid, words.len())?;
    if trials == 0 {
        return Ok(TrialBatch::empty(t_grid));
    }
    let list = Arc::new(slc_output_list(m).map_err(crate::slc::CodecError::from)?);
    let (code, snaps, _) = encode_with_snapshots(&words, m, &list, t_grid);
    let per_trial: Vec<Vec<bool>> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let received = noisy(&code, m, rho, &mut rng);
            t_grid
                .iter()
                .zip(&snaps)
                .map(|(&t, snap)| decoder_recurs(snap.clone(), &received[t..]))
                .collect()
        })
        .collect();
    Ok(TrialBatch::from_counts(trials, t_grid, &sum_hits(per_trial, t_grid.len())))
}

/// Monte Carlo probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl PairEstimate {
    fn from_hits(hits: u64, trials: usize) -> Self {
        let n = trials.max(1) as f64;
        let mean = hits as f64 / n;
        Self {
            mean,
            stderr: (mean * (1.0 - mean) / n).sqrt(),
            trials,
        }
    }
}

// distance beyond which a walk with ratio r has < 1e-9 chance of returning
fn safe_ceiling(r: f64) -> u64 {
    ((1e-9f64).ln() / r.ln()).ceil() as u64
}

fn pair_dictionary(words: &[BitWord], lead: u64, list: &Arc<OutputList>) -> SharedDictionary {
    let entries = vec![
        Entry { word: words[0], count: lead },
        Entry { word: words[1], count: 0 },
    ];
    AdaptiveDictionary::from_entries(1, entries, Arc::clone(list)).expect("valid two-word state")
}

fn check_pair(p1: f64, p2: f64) -> Result<(), SimError> {
    validate_distribution(&[p1, p2])?;
    if p1 <= p2 {
        return Err(SimError::NoDrift { p1, p2 });
    }
    Ok(())
}

/// Two-word dictionary encoder started with distance `n`: fraction of trials
/// in which the two counts become equal.
pub fn pair_recurrence_mc(p1: f64, p2: f64, n: u64, trials: usize, seed: u64) -> Result<PairEstimate, SimError> {
    check_pair(p1, p2)?;
    if n == 0 {
        return Ok(PairEstimate::from_hits(trials as u64, trials));
    }
    let words = source_alphabet(1)?;
    let list = Arc::new(slc_output_list(1).map_err(crate::slc::CodecError::from)?);
    let ceiling = n + safe_ceiling(p2 / p1);
    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let mut enc = pair_dictionary(&words, n, &list);
            loop {
                let w = if rand::Rng::random_bool(&mut rng, p1) { words[0] } else { words[1] };
                enc.encode_step(w);
                let d = enc.distances()[0];
                if d == 0 {
                    return 1;
                }
                if d >= ceiling {
                    return 0;
                }
            }
        })
        .sum();
    Ok(PairEstimate::from_hits(hits, trials))
}

/// Two-word encoder and decoder started at distances `(ne, nd)`, the code
/// passing through BSC(`rho`): fraction of trials in which either side ties.
pub fn pair_recurrence_mc_2d(
    p1: f64,
    p2: f64,
    rho: f64,
    ne: u64,
    nd: u64,
    trials: usize,
    seed: u64,
) -> Result<PairEstimate, SimError> {
    check_pair(p1, p2)?;
    check_rho(rho)?;
    if ne == 0 || nd == 0 {
        return Ok(PairEstimate::from_hits(trials as u64, trials));
    }
    let words = source_alphabet(1)?;
    let list = Arc::new(slc_output_list(1).map_err(crate::slc::CodecError::from)?);
    let read1 = (1.0 - rho) * p1 + rho * p2;
    let enc_ceiling = ne + safe_ceiling(p2 / p1);
    let dec_ceiling = nd + safe_ceiling((1.0 - read1) / read1);
    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let mut enc = pair_dictionary(&words, ne, &list);
            let mut dec = pair_dictionary(&words, nd, &list);
            loop {
                let w = if rand::Rng::random_bool(&mut rng, p1) { words[0] } else { words[1] };
                let c = enc.encode_step(w);
                dec.decode_step(c.flip(flip_pattern(&mut rng, 1, rho)));
                let (de, dd) = (enc.distances()[0], dec.distances()[0]);
                if de == 0 || dd == 0 {
                    return 1;
                }
                if de >= enc_ceiling && dd >= dec_ceiling {
                    return 0;
                }
            }
        })
        .sum();
    Ok(PairEstimate::from_hits(hits, trials))
}
