//! Recurrence probabilities and bounds for the adaptive dictionary under a
//! binary symmetric channel.

mod grid;
mod pair;
mod stability;

pub use grid::{grid_lower_bound, grid_lower_bound_parity, interior_spectral_radius, GridOptions, GridSolution, StopReason};
pub use pair::{
    decode_marginals, decode_marginals_raw, dictionary_pair_upper, pair_recurrence_prob, pair_recurrence_upper,
    pair_transition_model, DecodeMarginals, PairWalkModel,
};
pub use stability::{
    count_vector_probability, instability_bound, stability_upper_bound, MAX_INSTABILITY_T, MAX_INSTABILITY_M,
};

use serde::Serialize;
use thiserror::Error;

use crate::report::{csv_text, fmt_num};
use crate::source::DistributionError;
use crate::word::WordError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("crossover probability {0} outside [0, 0.5)")]
    BadRho(f64),
    #[error("pair needs P1 >= P2, got ({p1}, {p2})")]
    Unordered { p1: f64, p2: f64 },
    #[error("state is not stable; the bound does not apply (recurrence probability is 1)")]
    NotStable,
    #[error("decoded marginals not sorted: entry {index} is smaller than the next one")]
    OrderingViolated { index: usize },
    #[error("pair index {i} outside 1..={max}")]
    BadPairIndex { i: usize, max: usize },
    #[error("start ({ne}, {nd}) is not inside the grid of size {l}")]
    StartOutsideGrid { ne: usize, nd: usize, l: usize },
    #[error("walk model invalid: {0}")]
    BadModel(String),
    #[error("enumeration over {parts} parts at t = {t} is beyond the supported cap")]
    Infeasible { parts: usize, t: usize },
    #[error("expected {expected} counts, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A bound as computed, and the same value clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub raw: f64,
    pub clamped: f64,
}

impl Bound {
    pub fn new(raw: f64) -> Self {
        Self {
            raw,
            clamped: raw.clamp(0.0, 1.0),
        }
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<(), AnalysisError> {
    if (0.0..0.5).contains(&rho) {
        Ok(())
    } else {
        Err(AnalysisError::BadRho(rho))
    }
}

/// A bound evaluated over a grid of word counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub t_grid: Vec<usize>,
    pub bounds: Vec<Bound>,
}

impl BoundCurve {
    /// `t,bound` rows using the clamped values.
    pub fn to_csv(&self) -> String {
        csv_text(
            &["t", "bound"],
            self.t_grid
                .iter()
                .zip(&self.bounds)
                .map(|(t, b)| vec![t.to_string(), fmt_num(b.clamped)]),
        )
    }
}

/// [`instability_bound`] at every point of `t_grid`.
pub fn instability_curve(p: &[f64], m: usize, rho: f64, t_grid: &[usize]) -> Result<BoundCurve, AnalysisError> {
    let bounds = t_grid.iter().map(|&t| instability_bound(p, m, rho, t)).collect::<Result<_, _>>()?;
    Ok(BoundCurve {
        t_grid: t_grid.to_vec(),
        bounds,
    })
}

/// One start of a pair recurrence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairStudyRow {
    pub ne: usize,
    pub nd: usize,
    pub lower: f64,
    pub upper: f64,
    pub mc: f64,
}

pub fn pair_study_csv(rows: &[PairStudyRow]) -> String {
    csv_text(
        &["Ne", "Nd", "lower", "upper", "mc"],
        rows.iter().map(|r| {
            vec![
                r.ne.to_string(),
                r.nd.to_string(),
                fmt_num(r.lower),
                fmt_num(r.upper),
                fmt_num(r.mc),
            ]
        }),
    )
}
