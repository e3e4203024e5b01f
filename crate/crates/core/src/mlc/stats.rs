//! Cell level fractions and average cost.

use super::{level_of, MlcCostModel, MlcPages};
use crate::report::{csv_text, fmt_num};
use crate::slc::{validate_checkpoints, CodecError};

/// Cell levels of paired pages, one per bit position.
pub fn cell_levels(pages: &MlcPages) -> Result<Vec<u8>, CodecError> {
    if pages.lower.len() != pages.upper.len() {
        return Err(CodecError::LengthMismatch {
            lower: pages.lower.len(),
            upper: pages.upper.len(),
        });
    }
    Ok(pages
        .lower
        .as_slice()
        .iter()
        .zip(pages.upper.as_slice())
        .map(|(&l, &u)| level_of(l, u))
        .collect())
}

/// Mean cost per cell.
pub fn average_cost(levels: &[u8], model: &MlcCostModel) -> f64 {
    if levels.is_empty() {
        return 0.0;
    }
    let mut hist = [0u64; 4];
    for &z in levels {
        hist[z as usize] += 1;
    }
    weighted(&hist, model) / levels.len() as f64
}

fn weighted(hist: &[u64; 4], model: &MlcCostModel) -> f64 {
    hist.iter().zip(model.level_costs).map(|(&n, c)| n as f64 * c).sum()
}

/// Per-level fractions over the first `gamma` cells at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFractionProfile {
    pub checkpoints: Vec<usize>,
    pub fractions: Vec<[f64; 4]>,
    pub avg_cost: Vec<f64>,
}

impl LevelFractionProfile {
    pub fn to_csv(&self) -> String {
        csv_text(
            &["gamma", "frac_L0", "frac_L1", "frac_L2", "frac_L3", "avg_cost"],
            self.checkpoints.iter().zip(&self.fractions).zip(&self.avg_cost).map(|((g, f), c)| {
                let mut row = vec![g.to_string()];
                row.extend(f.iter().map(|&x| fmt_num(x)));
                row.push(fmt_num(*c));
                row
            }),
        )
    }
}

pub fn level_fraction_profile(
    levels: &[u8],
    checkpoints: &[usize],
    model: &MlcCostModel,
) -> Result<LevelFractionProfile, CodecError> {
    validate_checkpoints(checkpoints, levels.len())?;
    if let Some(&z) = levels.iter().find(|&&z| z > 3) {
        return Err(CodecError::BadLevel(z));
    }
    let mut hist = [0u64; 4];
    let mut pos = 0;
    let mut fractions = Vec::with_capacity(checkpoints.len());
    let mut avg_cost = Vec::with_capacity(checkpoints.len());
    for &gamma in checkpoints {
        for &z in &levels[pos..gamma] {
            hist[z as usize] += 1;
        }
        pos = gamma;
        let n = gamma.max(1) as f64;
        fractions.push(hist.map(|h| h as f64 / n));
        avg_cost.push(weighted(&hist, model) / n);
    }
    Ok(LevelFractionProfile {
        checkpoints: checkpoints.to_vec(),
        fractions,
        avg_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> MlcCostModel {
        MlcCostModel::new([0.0, 0.58, 0.87, 1.29]).unwrap()
    }

    #[test]
    fn all_level_zero() {
        let p = level_fraction_profile(&[0; 10], &[5, 10], &model()).unwrap();
        assert_eq!(p.fractions, vec![[1.0, 0.0, 0.0, 0.0]; 2]);
        assert_eq!(p.avg_cost, vec![0.0, 0.0]);
    }

    #[test]
    fn fractions_reproduce_average_cost() {
        let levels = [0u8, 3, 2, 1, 1, 0, 2, 3, 3, 1, 0];
        let p = level_fraction_profile(&levels, &[4, 11], &model()).unwrap();
        for (f, c) in p.fractions.iter().zip(&p.avg_cost) {
            assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let dot: f64 = f.iter().zip(model().level_costs).map(|(a, b)| a * b).sum();
            assert!((dot - c).abs() < 1e-12);
        }
        assert!((p.avg_cost[1] - average_cost(&levels, &model())).abs() < 1e-12);
        assert!(p.to_csv().starts_with("gamma,frac_L0,frac_L1,frac_L2,frac_L3,avg_cost\n4,"));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(level_fraction_profile(&[0, 4], &[2], &model()), Err(CodecError::BadLevel(4)));
        assert!(level_fraction_profile(&[0, 1], &[3], &model()).is_err());
        let pages = MlcPages {
            lower: "10".parse().unwrap(),
            upper: "1".parse().unwrap(),
        };
        assert!(cell_levels(&pages).is_err());
    }
}
