//! Level costs from cell error rate curves: a level that reaches the
//! tolerable error rate after `T` cycles costs `T0 / T`.

use serde::Serialize;

use super::TheoryError;
use crate::mlc::MlcCostModel;

/// Measured error rate of one cell level against program/erase cycles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CerCurve {
    pub level: u8,
    /// `(cycles, error_rate)` with cycles strictly increasing.
    samples: Vec<(f64, f64)>,
}

impl CerCurve {
    pub fn new(level: u8, samples: Vec<(f64, f64)>) -> Result<Self, TheoryError> {
        if level > 3 {
            return Err(TheoryError::BadCurve(format!("level {level} out of range")));
        }
        if samples.is_empty() {
            return Err(TheoryError::EmptyCurve(level));
        }
        for &(t, phi) in &samples {
            if !(t.is_finite() && t > 0.0) {
                return Err(TheoryError::BadCurve(format!("level {level}: cycles {t} must be positive")));
            }
            if !(0.0..=1.0).contains(&phi) {
                return Err(TheoryError::BadCurve(format!("level {level}: error rate {phi} outside [0, 1]")));
            }
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(TheoryError::BadCurve(format!("level {level}: cycles must increase")));
        }
        Ok(Self { level, samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// First cycle count where the curve reaches `cer_max`, by linear
    /// interpolation, plus whether it later falls back below.
    pub fn first_crossing(&self, cer_max: f64) -> (Option<f64>, bool) {
        let Some(k) = self.samples.iter().position(|&(_, phi)| phi >= cer_max) else {
            return (None, false);
        };
        let recrosses = self.samples[k..].iter().any(|&(_, phi)| phi < cer_max);
        if k == 0 {
            return (Some(self.samples[0].0), recrosses);
        }
        let (t0, f0) = self.samples[k - 1];
        let (t1, f1) = self.samples[k];
        (Some(t0 + (cer_max - f0) * (t1 - t0) / (f1 - f0)), recrosses)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CerCostModel {
    pub model: MlcCostModel,
    /// Lifetime of each level; `None` when the curve never reaches the limit.
    pub t_max: [Option<f64>; 4],
    pub warnings: Vec<String>,
}

/// Derives `[c0, c1, c2, c3]` from one curve per level, a design lifetime
/// `t0` and the tolerable error rate `cer_max`.
pub fn cost_model_from_cer(curves: &[CerCurve], t0: f64, cer_max: f64) -> Result<CerCostModel, TheoryError> {
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(TheoryError::BadCurve(format!("design lifetime {t0} must be positive")));
    }
    if !(cer_max > 0.0 && cer_max <= 1.0) {
        return Err(TheoryError::BadCurve(format!("tolerable error rate {cer_max} outside (0, 1]")));
    }
    let mut by_level: [Option<&CerCurve>; 4] = [None; 4];
    for c in curves {
        if by_level[c.level as usize].replace(c).is_some() {
            return Err(TheoryError::BadCurve(format!("two curves for level {}", c.level)));
        }
    }
    let mut costs = [0.0; 4];
    let mut t_max = [None; 4];
    let mut warnings = Vec::new();
    for level in 0..4 {
        let curve = by_level[level].ok_or_else(|| TheoryError::BadCurve(format!("no curve for level {level}")))?;
        let (cross, recrosses) = curve.first_crossing(cer_max);
        if recrosses {
            warnings.push(format!("level {level}: curve falls back below the limit; using the first crossing"));
        }
        if let Some(t) = cross {
            costs[level] = t0 / t;
            t_max[level] = Some(t);
        } else {
            let last = curve.samples.last().map_or(0.0, |s| s.0);
            if last < t0 {
                warnings.push(format!("level {level}: samples end at {last} cycles, before the design lifetime"));
            }
        }
    }
    Ok(CerCostModel {
        model: MlcCostModel::new(costs)?,
        t_max,
        warnings,
    })
}

/// Parses `level,cycles,error_rate` rows (header optional) into one curve
/// per level, ordered by level.
pub fn parse_cer_csv(text: &str) -> Result<Vec<CerCurve>, TheoryError> {
    let mut samples: [Vec<(f64, f64)>; 4] = Default::default();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (idx == 0 && line.starts_with("level")) {
            continue;
        }
        let bad = |msg: String| TheoryError::Parse { line: idx + 1, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 3 fields, got {}", fields.len())));
        }
        let level: u8 = fields[0].parse().map_err(|_| bad(format!("bad level {:?}", fields[0])))?;
        if level > 3 {
            return Err(bad(format!("level {level} out of range")));
        }
        let t: f64 = fields[1].parse().map_err(|_| bad(format!("bad cycles {:?}", fields[1])))?;
        let phi: f64 = fields[2].parse().map_err(|_| bad(format!("bad error rate {:?}", fields[2])))?;
        samples[level as usize].push((t, phi));
    }
    samples
        .into_iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .map(|(level, s)| CerCurve::new(level as u8, s))
        .collect()
}
