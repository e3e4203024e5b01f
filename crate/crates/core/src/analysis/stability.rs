//! Whole-dictionary recurrence bounds: the odd/even pair product bound for a
//! stable count vector, and its average over all count vectors after `t`
//! words.

use super::pair::{decode_marginals, ratio, DecodeMarginals};
use super::{check_rho, AnalysisError, Bound};
use crate::source::{validate_distribution, validate_word_distribution};

/// Largest word length the count-vector enumeration supports.
pub const MAX_INSTABILITY_M: usize = 2;
/// Largest `t` the count-vector enumeration supports.
pub const MAX_INSTABILITY_T: usize = 500;

fn is_strictly_decreasing(counts: &[u64]) -> bool {
    counts.windows(2).all(|w| w[0] > w[1])
}

// 4 - prod_odd(enc) - prod_even(enc) - prod_odd(dec) - prod_even(dec), where
// pair i couples entries i and i+1 (1-based) and `enc[i-1]`, `dec[i-1]` hold
// the ratios raised to the pair's distance
fn product_bound(enc: &[f64], dec: &[f64]) -> f64 {
    let prod = |terms: &[f64], parity: usize| -> f64 {
        terms
            .iter()
            .enumerate()
            .filter(|(k, _)| (k + 1) % 2 == parity)
            .map(|(_, r)| 1.0 - r)
            .product()
    };
    4.0 - prod(enc, 1) - prod(enc, 0) - prod(dec, 1) - prod(dec, 0)
}

/// Bound on a future recurrence anywhere in a stable dictionary whose
/// encoder and decoder both hold `counts` (indexed by probability rank).
pub fn stability_upper_bound(counts: &[u64], p: &[f64], decode: &DecodeMarginals) -> Result<Bound, AnalysisError> {
    validate_distribution(p)?;
    for got in [counts.len(), decode.probs.len()] {
        if got != p.len() {
            return Err(AnalysisError::LengthMismatch { expected: p.len(), got });
        }
    }
    if !is_strictly_decreasing(counts) {
        return Err(AnalysisError::NotStable);
    }
    let dist: Vec<i32> = counts.windows(2).map(|w| (w[0] - w[1]) as i32).collect();
    let enc: Vec<f64> = (1..p.len()).map(|i| ratio(p[i], p[i - 1]).powi(dist[i - 1])).collect();
    let dec: Vec<f64> = (1..p.len())
        .map(|i| ratio(decode.probs[i], decode.probs[i - 1]).powi(dist[i - 1]))
        .collect();
    Ok(Bound::new(product_bound(&enc, &dec)))
}

fn ln_factorials(t: usize) -> Vec<f64> {
    let mut lf = vec![0.0; t + 1];
    for k in 1..=t {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}

fn ln_weight(counts: &[u64], ln_p: &[f64], lf: &[f64]) -> f64 {
    let t: u64 = counts.iter().sum();
    let mut w = lf[t as usize];
    for (&n, &lp) in counts.iter().zip(ln_p) {
        if n > 0 {
            w += n as f64 * lp - lf[n as usize];
        }
    }
    w
}

/// Multinomial probability of observing exactly `counts` after
/// `sum(counts)` i.i.d. draws.
pub fn count_vector_probability(counts: &[u64], p: &[f64]) -> Result<f64, AnalysisError> {
    validate_distribution(p)?;
    if counts.len() != p.len() {
        return Err(AnalysisError::LengthMismatch {
            expected: p.len(),
            got: counts.len(),
        });
    }
    if counts.iter().zip(p).any(|(&n, &pi)| n > 0 && pi == 0.0) {
        return Ok(0.0);
    }
    let t: u64 = counts.iter().sum();
    let lf = ln_factorials(t as usize);
    let ln_p: Vec<f64> = p.iter().map(|x| x.ln()).collect();
    Ok(ln_weight(counts, &ln_p, &lf).exp())
}

/// Bound on the probability that the dictionary becomes unstable after `t`
/// correctly decoded words: stable count vectors contribute their product
/// bound, all others contribute 1.
///
/// `raw` sums the unclamped product bounds; `clamped` caps each at 1.
pub fn instability_bound(p: &[f64], m: usize, rho: f64, t: usize) -> Result<Bound, AnalysisError> {
    validate_word_distribution(p, m)?;
    check_rho(rho)?;
    if m > MAX_INSTABILITY_M || t > MAX_INSTABILITY_T {
        return Err(AnalysisError::Infeasible { parts: 1 << m, t });
    }
    let decode = decode_marginals(p, rho, m)?;
    let size = p.len();
    let lf = ln_factorials(t);
    let ln_p: Vec<f64> = p.iter().map(|x| x.ln()).collect();
    // ratio^d for every pair and distance
    let pow_table = |probs: &[f64]| -> Vec<Vec<f64>> {
        (1..size)
            .map(|i| {
                let r = ratio(probs[i], probs[i - 1]);
                (0..=t).map(|d| r.powi(d as i32)).collect()
            })
            .collect()
    };
    let enc_pow = pow_table(p);
    let dec_pow = pow_table(&decode.probs);

    let (mut raw, mut clamped) = (0.0, 0.0);
    let mut counts = vec![0u64; size];
    let mut enc = vec![0.0; size - 1];
    let mut dec = vec![0.0; size - 1];
    for_each_composition(t as u64, &mut counts, 0, &mut |n| {
        if n.iter().zip(p).any(|(&c, &pi)| c > 0 && pi == 0.0) {
            return;
        }
        let w = ln_weight(n, &ln_p, &lf).exp();
        if is_strictly_decreasing(n) {
            for i in 0..size - 1 {
                let d = (n[i] - n[i + 1]) as usize;
                enc[i] = enc_pow[i][d];
                dec[i] = dec_pow[i][d];
            }
            let a = product_bound(&enc, &dec);
            raw += a * w;
            clamped += a.clamp(0.0, 1.0) * w;
        } else {
            raw += w;
            clamped += w;
        }
    });
    Ok(Bound {
        raw,
        clamped: clamped.min(1.0),
    })
}

fn for_each_composition(rest: u64, counts: &mut [u64], k: usize, f: &mut impl FnMut(&[u64])) {
    if k + 1 == counts.len() {
        counts[k] = rest;
        f(counts);
        return;
    }
    for c in 0..=rest {
        counts[k] = c;
        for_each_composition(rest - c, counts, k + 1, f);
    }
}
