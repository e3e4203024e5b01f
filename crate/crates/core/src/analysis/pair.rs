//! Single-pair recurrence: closed forms, decode marginals and the
//! nine-direction walk of one adjacent pair.

use super::{check_rho, AnalysisError, Bound};
use crate::source::{source_alphabet, validate_distribution, validate_word_distribution};

fn check_pair(p1: f64, p2: f64) -> Result<(), AnalysisError> {
    validate_distribution(&[p1, p2])?;
    if p1 < p2 {
        return Err(AnalysisError::Unordered { p1, p2 });
    }
    Ok(())
}

/// Probability that a two-word encoder started at distance `n` ever ties:
/// `(P2/P1)^n` for `n > 0`, else 1.
pub fn pair_recurrence_prob(p1: f64, p2: f64, n: i64) -> Result<f64, AnalysisError> {
    check_pair(p1, p2)?;
    if n <= 0 || p1 == p2 {
        return Ok(1.0);
    }
    Ok((p2 / p1).powi(n as i32))
}

/// Union bound on encoder or decoder recurrence for a two-word dictionary.
pub fn pair_recurrence_upper(p1: f64, p2: f64, rho: f64, ne: i64, nd: i64) -> Result<Bound, AnalysisError> {
    check_pair(p1, p2)?;
    check_rho(rho)?;
    if ne <= 0 || nd <= 0 {
        return Err(AnalysisError::NotStable);
    }
    let r_dec = (rho * p1 + (1.0 - rho) * p2) / ((1.0 - rho) * p1 + rho * p2);
    Ok(Bound::new((p2 / p1).powi(ne as i32) + r_dec.powi(nd as i32)))
}

/// Probability of the decoder reading each word when both dictionaries hold
/// the same strict order.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeMarginals {
    pub probs: Vec<f64>,
}

// rho^ham (1-rho)^(m-ham) between source codewords i and j
fn channel_matrix(m: usize, rho: f64) -> Result<Vec<Vec<f64>>, AnalysisError> {
    let words = source_alphabet(m)?;
    Ok(words
        .iter()
        .map(|a| {
            words
                .iter()
                .map(|b| {
                    let h = a.hamming(*b) as i32;
                    rho.powi(h) * (1.0 - rho).powi(m as i32 - h)
                })
                .collect()
        })
        .collect())
}

/// Decode marginals without the ordering check.
pub fn decode_marginals_raw(p: &[f64], rho: f64, m: usize) -> Result<Vec<f64>, AnalysisError> {
    validate_word_distribution(p, m)?;
    check_rho(rho)?;
    let ch = channel_matrix(m, rho)?;
    Ok(ch.iter().map(|row| row.iter().zip(p).map(|(c, pj)| c * pj).sum()).collect())
}

/// Decode marginals; fails if they are not non-increasing, since the pair
/// bounds assume the decoder keeps the encoder's order.
pub fn decode_marginals(p: &[f64], rho: f64, m: usize) -> Result<DecodeMarginals, AnalysisError> {
    let probs = decode_marginals_raw(p, rho, m)?;
    if let Some(index) = probs.windows(2).position(|w| w[1] > w[0]) {
        return Err(AnalysisError::OrderingViolated { index: index + 1 });
    }
    Ok(DecodeMarginals { probs })
}

/// Transition probabilities of `(N_i^e, N_i^d)`, indexed `[x + 1][y + 1]`
/// for a step of `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWalkModel {
    pub probs: [[f64; 3]; 3],
}

impl PairWalkModel {
    /// Four-direction walk of a two-word dictionary.
    pub fn two_word(p1: f64, p2: f64, rho: f64) -> Result<Self, AnalysisError> {
        check_pair(p1, p2)?;
        check_rho(rho)?;
        let mut probs = [[0.0; 3]; 3];
        probs[2][2] = (1.0 - rho) * p1;
        probs[2][0] = rho * p1;
        probs[0][0] = (1.0 - rho) * p2;
        probs[0][2] = rho * p2;
        Ok(Self { probs })
    }

    pub fn from_probs(probs: [[f64; 3]; 3]) -> Result<Self, AnalysisError> {
        let model = Self { probs };
        model.validate()?;
        Ok(model)
    }

    #[inline]
    pub fn get(&self, x: i32, y: i32) -> f64 {
        self.probs[(x + 1) as usize][(y + 1) as usize]
    }

    pub fn stay(&self) -> f64 {
        self.get(0, 0)
    }

    /// Non-stay moves with their probabilities.
    pub fn moves(&self) -> Vec<(i32, i32, f64)> {
        let mut out = Vec::with_capacity(8);
        for x in -1..=1 {
            for y in -1..=1 {
                if (x, y) != (0, 0) && self.get(x, y) > 0.0 {
                    out.push((x, y, self.get(x, y)));
                }
            }
        }
        out
    }

    /// True when only diagonal moves have mass.
    pub fn is_four_direction(&self) -> bool {
        [(1, 0), (-1, 0), (0, 1), (0, -1), (0, 0)].iter().all(|&(x, y)| self.get(x, y) == 0.0)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.probs.iter().flatten().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(AnalysisError::BadModel("negative or non-finite probability".into()));
        }
        let sum: f64 = self.probs.iter().flatten().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AnalysisError::BadModel(format!("probabilities sum to {sum}")));
        }
        if self.stay() >= 1.0 {
            return Err(AnalysisError::BadModel("walk never moves".into()));
        }
        Ok(())
    }
}

/// Walk of adjacent pair `(i, i + 1)` (1-based) in a `2^m`-word dictionary.
pub fn pair_transition_model(p: &[f64], rho: f64, m: usize, i: usize) -> Result<PairWalkModel, AnalysisError> {
    validate_word_distribution(p, m)?;
    check_rho(rho)?;
    let size = 1usize << m;
    if i == 0 || i >= size {
        return Err(AnalysisError::BadPairIndex { i, max: size - 1 });
    }
    let ch = channel_matrix(m, rho)?;
    // a = w_i, b = w_{i+1}; ch[r][s] = probability that codeword s is read as r
    let (a, b) = (i - 1, i);
    let others = (0..size).filter(|&j| j != a && j != b);
    let mut q = [[0.0; 3]; 3];
    q[2][2] = ch[a][a] * p[a];
    q[0][0] = ch[b][b] * p[b];
    q[2][0] = ch[b][a] * p[a];
    q[0][2] = ch[a][b] * p[b];
    q[2][1] = others.clone().map(|j| ch[j][a]).sum::<f64>() * p[a];
    q[0][1] = others.clone().map(|j| ch[j][b]).sum::<f64>() * p[b];
    q[1][2] = others.clone().map(|j| ch[a][j] * p[j]).sum();
    q[1][0] = others.map(|j| ch[b][j] * p[j]).sum();
    let moving: f64 = q.iter().flatten().sum();
    q[1][1] = 1.0 - moving;
    Ok(PairWalkModel { probs: q })
}

/// Bound on a future recurrence of pair `(i, i + 1)` from distances
/// `(ne, nd)`.
pub fn dictionary_pair_upper(
    p: &[f64],
    decode: &DecodeMarginals,
    i: usize,
    ne: i64,
    nd: i64,
) -> Result<Bound, AnalysisError> {
    validate_distribution(p)?;
    if decode.probs.len() != p.len() {
        return Err(AnalysisError::LengthMismatch {
            expected: p.len(),
            got: decode.probs.len(),
        });
    }
    if i == 0 || i >= p.len() {
        return Err(AnalysisError::BadPairIndex { i, max: p.len() - 1 });
    }
    if ne <= 0 || nd <= 0 {
        return Err(AnalysisError::NotStable);
    }
    let enc = ratio(p[i], p[i - 1]).powi(ne as i32);
    let dec = ratio(decode.probs[i], decode.probs[i - 1]).powi(nd as i32);
    Ok(Bound::new(enc + dec))
}

// P_{i+1} / P_i with 0/0 read as 1 (two never-seen words stay tied)
pub(crate) fn ratio(next: f64, this: f64) -> f64 {
    if this == 0.0 {
        1.0
    } else {
        next / this
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P4: [f64; 4] = [0.4, 0.3, 0.2, 0.1];

    #[test]
    fn geometric_recurrence() {
        assert_eq!(pair_recurrence_prob(0.6, 0.4, 0).unwrap(), 1.0);
        assert!((pair_recurrence_prob(0.6, 0.4, 2).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(pair_recurrence_prob(0.5, 0.5, 7).unwrap(), 1.0);
        assert!(pair_recurrence_prob(0.4, 0.6, 1).is_err());
    }

    #[test]
    fn two_word_union_bound() {
        let b = pair_recurrence_upper(0.6, 0.4, 0.05, 1, 1).unwrap();
        assert!((b.raw - (0.4 / 0.6 + 0.41 / 0.59)).abs() < 1e-12);
        assert_eq!(b.clamped, 1.0);
        let c = pair_recurrence_upper(0.6, 0.4, 0.0, 3, 5).unwrap();
        assert!((c.raw - ((2.0f64 / 3.0).powi(3) + (2.0f64 / 3.0).powi(5))).abs() < 1e-15);
        assert_eq!(pair_recurrence_upper(0.6, 0.4, 0.05, 0, 3), Err(AnalysisError::NotStable));
    }

    #[test]
    fn marginals_for_one_and_two_bits() {
        let d = decode_marginals(&[0.6, 0.4], 0.05, 1).unwrap();
        assert!((d.probs[0] - 0.59).abs() < 1e-12 && (d.probs[1] - 0.41).abs() < 1e-12);
        assert_eq!(decode_marginals(&P4, 0.0, 2).unwrap().probs, P4.to_vec());
        let d2 = decode_marginals(&P4, 0.2, 2).unwrap();
        assert!((d2.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // 11 is read from 11, 10, 01, 00 with weights .64, .16, .16, .04
        assert!((d2.probs[0] - (0.64 * 0.4 + 0.16 * 0.3 + 0.16 * 0.2 + 0.04 * 0.1)).abs() < 1e-12);
    }

    #[test]
    fn marginal_ordering_violation_reported() {
        // 100 sits one flip from 110 and 101, 011 sits two flips from them
        let p = [0.2, 0.2, 0.2, 0.2, 0.2, 0.0, 0.0, 0.0];
        assert_eq!(decode_marginals(&p, 0.1, 3), Err(AnalysisError::OrderingViolated { index: 4 }));
        assert!(decode_marginals(&p, 0.0, 3).is_ok());
    }

    #[test]
    fn one_bit_model_is_four_direction() {
        let a = pair_transition_model(&[0.6, 0.4], 0.05, 1, 1).unwrap();
        let b = PairWalkModel::two_word(0.6, 0.4, 0.05).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert!((a.probs[x][y] - b.probs[x][y]).abs() < 1e-15);
            }
        }
        assert!(a.is_four_direction());
        let z = pair_transition_model(&P4, 0.0, 2, 2).unwrap();
        assert_eq!(z.get(1, -1), 0.0);
        assert_eq!(z.get(-1, 1), 0.0);
    }

    #[test]
    fn nine_directions_match_enumeration() {
        // brute force over (source word, error pattern)
        let rho = 0.05;
        let words = source_alphabet(2).unwrap();
        for i in 1..=3 {
            let model = pair_transition_model(&P4, rho, 2, i).unwrap();
            let mut q = [[0.0; 3]; 3];
            for (s, &w) in words.iter().enumerate() {
                for e in 0..4u32 {
                    let flips = e.count_ones() as i32;
                    let pr = P4[s] * rho.powi(flips) * (1.0 - rho).powi(2 - flips);
                    let read = words.iter().position(|&c| c == w.flip(e)).unwrap();
                    let step = |k: usize| -> i32 {
                        if k == i - 1 {
                            1
                        } else if k == i {
                            -1
                        } else {
                            0
                        }
                    };
                    q[(step(s) + 1) as usize][(step(read) + 1) as usize] += pr;
                }
            }
            for x in 0..3 {
                for y in 0..3 {
                    assert!((q[x][y] - model.probs[x][y]).abs() < 1e-14, "i={i} ({x},{y})");
                }
            }
            assert!((model.probs.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        assert!(pair_transition_model(&P4, rho, 2, 4).is_err());
    }

    #[test]
    fn pair_bound_reduces_to_two_word_bound() {
        let d = decode_marginals(&[0.6, 0.4], 0.05, 1).unwrap();
        let a = dictionary_pair_upper(&[0.6, 0.4], &d, 1, 3, 4).unwrap();
        let b = pair_recurrence_upper(0.6, 0.4, 0.05, 3, 4).unwrap();
        assert!((a.raw - b.raw).abs() < 1e-12);
    }

    #[test]
    fn pair_bound_on_four_words() {
        let d = decode_marginals(&P4, 0.05, 2).unwrap();
        let v = dictionary_pair_upper(&P4, &d, 2, 3, 3).unwrap();
        let raw = decode_marginals_raw(&P4, 0.05, 2).unwrap();
        let expected = (0.2f64 / 0.3).powi(3) + (raw[2] / raw[1]).powi(3);
        assert!((v.raw - expected).abs() < 1e-12);
        assert!(dictionary_pair_upper(&P4, &d, 2, 0, 3).is_err());
    }
}
