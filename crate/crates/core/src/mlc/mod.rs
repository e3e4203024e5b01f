//! MLC shaping: SLC shaping on the lower page and lower-page dependent
//! enumerative dictionaries on the upper page.

mod codec;
mod enumerative;
mod stats;

pub use codec::{independent_slc_encode, mlc_decode, mlc_encode, MlcDecoder, MlcEncoder, MlcPages, UpperDictionary};
pub use enumerative::{cost_polynomial, CostPolynomial, EnumerativeIndexer};
pub use stats::{average_cost, cell_levels, level_fraction_profile, LevelFractionProfile};

use serde::{Deserialize, Serialize};

use crate::slc::CodecError;
use crate::word::BitWord;

/// Costs are compared as integer multiples of `1 / COST_SCALE` so cost classes
/// are exact even for decimal inputs like `0.58`.
pub const COST_SCALE: f64 = 100.0;

/// Cell level for a (lower, upper) bit pair under the Gray map
/// `11 -> 0, 10 -> 1, 00 -> 2, 01 -> 3`.
#[inline]
pub fn level_of(lower: bool, upper: bool) -> u8 {
    match (lower, upper) {
        (true, true) => 0,
        (true, false) => 1,
        (false, false) => 2,
        (false, true) => 3,
    }
}

/// Inverse of [`level_of`].
#[inline]
pub fn bits_of(level: u8) -> (bool, bool) {
    match level {
        0 => (true, true),
        1 => (true, false),
        2 => (false, false),
        3 => (false, true),
        _ => panic!("cell level {level} out of range"),
    }
}

/// Per-level wear costs `[c0, c1, c2, c3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlcCostModel {
    pub level_costs: [f64; 4],
}

impl MlcCostModel {
    pub fn new(level_costs: [f64; 4]) -> Result<Self, CodecError> {
        if level_costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(CodecError::BadCostModel(format!("costs must be finite and non-negative: {level_costs:?}")));
        }
        if level_costs.windows(2).any(|w| w[1] < w[0]) {
            return Err(CodecError::BadCostModel(format!("costs must be non-decreasing: {level_costs:?}")));
        }
        Ok(Self { level_costs })
    }

    /// Parses `{"level_costs": [c0, c1, c2, c3]}`.
    pub fn from_json(text: &str) -> Result<Self, CodecError> {
        let raw: MlcCostModel = serde_json::from_str(text).map_err(|e| CodecError::BadCostModel(e.to_string()))?;
        Self::new(raw.level_costs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cost model serializes")
    }

    #[inline]
    pub fn cost(&self, level: u8) -> f64 {
        self.level_costs[level as usize]
    }

    /// Quantized per-level costs.
    pub fn units(&self) -> [i64; 4] {
        self.level_costs.map(|c| (c * COST_SCALE).round() as i64)
    }
}

/// A length-`m` word of cell levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWord {
    pub levels: Vec<u8>,
}

impl LevelWord {
    pub fn from_pages(lower: BitWord, upper: BitWord) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self {
            levels: lower.bits().zip(upper.bits()).map(|(l, u)| level_of(l, u)).collect(),
        }
    }

    pub fn cost(&self, model: &MlcCostModel) -> f64 {
        self.levels.iter().map(|&z| model.cost(z)).sum()
    }
}

impl std::fmt::Display for LevelWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for z in &self.levels {
            write!(f, "{z}")?;
        }
        Ok(())
    }
}
