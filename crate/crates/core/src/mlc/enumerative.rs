//! Enumerative indexing of upper-page words in cost order for a fixed lower
//! page codeword.
//!
//! For lower bits `v_{k+1}..v_m` the generating polynomial
//! `(x^c0 + x^c1)^n1 (x^c2 + x^c3)^n0` counts upper-bit completions by total
//! cost. Cost classes come from the full polynomial; within a class, words are
//! enumerated with `0` before `1` at each position.

use std::collections::BTreeMap;

use super::{level_of, MlcCostModel, COST_SCALE};
use crate::output::Codebook;
use crate::slc::CodecError;
use crate::word::BitWord;

/// Number of completions per total cost, keyed by quantized cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostPolynomial {
    coeffs: BTreeMap<i64, u64>,
}

impl CostPolynomial {
    pub fn one() -> Self {
        Self {
            coeffs: BTreeMap::from([(0, 1)]),
        }
    }

    /// Multiplies by `x^a + x^b`.
    fn times_binomial(&self, a: i64, b: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&d, &n) in &self.coeffs {
            *coeffs.entry(d + a).or_insert(0) += n;
            *coeffs.entry(d + b).or_insert(0) += n;
        }
        Self { coeffs }
    }

    pub fn coefficient_units(&self, units: i64) -> u64 {
        self.coeffs.get(&units).copied().unwrap_or(0)
    }

    pub fn coefficient(&self, cost: f64) -> u64 {
        self.coefficient_units((cost * COST_SCALE).round() as i64)
    }

    /// `(cost, count)` pairs in ascending cost order.
    pub fn terms(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.coeffs.iter().map(|(&d, &n)| (d as f64 / COST_SCALE, n))
    }

    pub fn total(&self) -> u64 {
        self.coeffs.values().sum()
    }
}

/// Generating polynomial for upper-bit completions over the given lower bits.
pub fn cost_polynomial(lower_suffix: &[bool], model: &MlcCostModel) -> CostPolynomial {
    let u = model.units();
    lower_suffix.iter().fold(CostPolynomial::one(), |p, &lower| {
        if lower {
            p.times_binomial(u[0], u[1])
        } else {
            p.times_binomial(u[2], u[3])
        }
    })
}

/// Bijection between ranks `1..=2^m` and upper-page words for one lower page
/// codeword, ordered by non-decreasing cell cost.
#[derive(Debug, Clone)]
pub struct EnumerativeIndexer {
    lower: BitWord,
    // quantized cost of each cell for upper bit 0 and 1
    cell_units: Vec<[i64; 2]>,
    // suffix[k] is the polynomial of lower bits k.. (0-based)
    suffix: Vec<CostPolynomial>,
    class_units: Vec<i64>,
    // cumulative[j] = number of words with cost <= class j
    cumulative: Vec<u64>,
}

impl EnumerativeIndexer {
    pub fn new(lower: BitWord, model: &MlcCostModel) -> Self {
        let m = lower.len();
        let u = model.units();
        let bits: Vec<bool> = lower.bits().collect();
        let cell_units = bits
            .iter()
            .map(|&l| [u[level_of(l, false) as usize], u[level_of(l, true) as usize]])
            .collect();
        let mut suffix = vec![CostPolynomial::one(); m + 1];
        for k in (0..m).rev() {
            let [a, b] = if bits[k] { [u[0], u[1]] } else { [u[2], u[3]] };
            suffix[k] = suffix[k + 1].times_binomial(a, b);
        }
        let mut class_units = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0u64;
        for (&d, &n) in &suffix[0].coeffs {
            acc += n;
            class_units.push(d);
            cumulative.push(acc);
        }
        debug_assert_eq!(acc, 1u64 << m);
        Self {
            lower,
            cell_units,
            suffix,
            class_units,
            cumulative,
        }
    }

    pub fn lower(&self) -> BitWord {
        self.lower
    }

    pub fn word_len(&self) -> usize {
        self.lower.len()
    }

    /// Number of words, `2^m`.
    pub fn size(&self) -> u64 {
        1u64 << self.word_len()
    }

    /// Polynomial for the lower bits after the first `k` positions.
    pub fn suffix_polynomial(&self, k: usize) -> &CostPolynomial {
        &self.suffix[k]
    }

    /// Distinct total costs `C_1 < ... < C_J` with the number of words in each.
    pub fn class_sizes(&self) -> Vec<(f64, u64)> {
        self.suffix[0].terms().collect()
    }

    /// Cumulative class boundaries `n(v, C_j)`; the last equals `2^m`.
    pub fn boundaries(&self) -> &[u64] {
        &self.cumulative
    }

    fn count_units(&self, total: i64, prefix: &[bool]) -> u64 {
        let spent: i64 = prefix
            .iter()
            .zip(&self.cell_units)
            .map(|(&y, c)| c[y as usize])
            .sum();
        self.suffix[prefix.len()].coefficient_units(total - spent)
    }

    /// Number of upper words of total cost `cost` starting with `prefix`.
    pub fn enum_count(&self, cost: f64, prefix: &[bool]) -> u64 {
        assert!(prefix.len() <= self.word_len(), "prefix longer than word");
        self.count_units((cost * COST_SCALE).round() as i64, prefix)
    }

    /// Upper word at 1-based rank `index`.
    pub fn unrank(&self, index: u64) -> Result<BitWord, CodecError> {
        if index == 0 || index > self.size() {
            return Err(CodecError::RankOutOfRange {
                index,
                size: self.size(),
            });
        }
        let j = self.cumulative.partition_point(|&n| n < index);
        let mut rest = index - if j == 0 { 0 } else { self.cumulative[j - 1] };
        let total = self.class_units[j];
        let m = self.word_len();
        let mut value = 0u32;
        let mut spent = 0i64;
        for k in 0..m {
            let zeros = self.suffix[k + 1].coefficient_units(total - spent - self.cell_units[k][0]);
            value <<= 1;
            if rest > zeros {
                rest -= zeros;
                value |= 1;
                spent += self.cell_units[k][1];
            } else {
                spent += self.cell_units[k][0];
            }
        }
        debug_assert_eq!(rest, 1);
        Ok(BitWord::new(value, m).expect("value fits"))
    }

    /// 1-based rank of `upper`; inverse of [`unrank`](Self::unrank).
    pub fn rank(&self, upper: BitWord) -> u64 {
        assert_eq!(upper.len(), self.word_len(), "upper word length mismatch");
        let total: i64 = upper.bits().zip(&self.cell_units).map(|(y, c)| c[y as usize]).sum();
        let j = self
            .class_units
            .binary_search(&total)
            .expect("every word's cost is a class");
        let mut index = 1 + if j == 0 { 0 } else { self.cumulative[j - 1] };
        let mut spent = 0i64;
        for (k, y) in upper.bits().enumerate() {
            if y {
                index += self.suffix[k + 1].coefficient_units(total - spent - self.cell_units[k][0]);
            }
            spent += self.cell_units[k][y as usize];
        }
        index
    }

    /// Total cell cost of `upper` over this lower word, in model units.
    pub fn cost_of(&self, upper: BitWord) -> f64 {
        let units: i64 = upper.bits().zip(&self.cell_units).map(|(y, c)| c[y as usize]).sum();
        units as f64 / COST_SCALE
    }
}

impl Codebook for EnumerativeIndexer {
    fn word_len(&self) -> usize {
        self.lower.len()
    }

    #[inline]
    fn codeword(&self, rank: usize) -> BitWord {
        self.unrank(rank as u64 + 1).expect("rank within dictionary")
    }

    #[inline]
    fn rank_of(&self, codeword: BitWord) -> usize {
        (self.rank(codeword) - 1) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_model() -> MlcCostModel {
        MlcCostModel::new([0.0, 1.0, 1.0, 2.0]).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn terms(p: &CostPolynomial) -> Vec<(f64, u64)> {
        p.terms().collect()
    }

    // all upper words of a given lower word, brute force
    fn brute_costs(v: BitWord, model: &MlcCostModel) -> BTreeMap<i64, u64> {
        let u = model.units();
        let mut out = BTreeMap::new();
        for y in BitWord::all(v.len()).unwrap() {
            let c: i64 = v.bits().zip(y.bits()).map(|(l, b)| u[level_of(l, b) as usize]).sum();
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn polynomial_of_two_bit_suffix() {
        let p = cost_polynomial(&bits("10"), &unit_model());
        assert_eq!(terms(&p), vec![(1.0, 1), (2.0, 2), (3.0, 1)]);
        assert_eq!(terms(&cost_polynomial(&[], &unit_model())), vec![(0.0, 1)]);
    }

    #[test]
    fn polynomial_matches_brute_force() {
        let model = unit_model();
        let p = cost_polynomial(&bits("1110"), &model);
        assert_eq!(terms(&p), vec![(1.0, 1), (2.0, 4), (3.0, 6), (4.0, 4), (5.0, 1)]);
        let fractional = MlcCostModel::new([0.0, 0.58, 0.87, 1.29]).unwrap();
        for v in BitWord::all(5).unwrap() {
            let bits: Vec<bool> = v.bits().collect();
            assert_eq!(cost_polynomial(&bits, &fractional).coeffs, brute_costs(v, &fractional));
        }
    }

    #[test]
    fn counts_with_prefix() {
        let ix = EnumerativeIndexer::new(w("1110"), &unit_model());
        assert_eq!(ix.enum_count(2.0, &[true, true]), 2);
        assert_eq!(ix.enum_count(1.0, &[]), 1);
        assert_eq!(ix.enum_count(0.0, &[]), 0);
        assert_eq!(ix.enum_count(0.5, &[true]), 0);
        assert_eq!(ix.boundaries(), &[1, 5, 11, 15, 16]);
    }

    #[test]
    fn first_ranks_for_example_lower_word() {
        let ix = EnumerativeIndexer::new(w("1110"), &unit_model());
        assert_eq!(ix.unrank(1).unwrap(), w("1110"));
        assert_eq!(ix.cost_of(w("1110")), 1.0);
        assert_eq!(ix.unrank(2).unwrap(), w("0110"));
        assert_eq!(ix.rank(w("1110")), 1);
        assert_eq!(ix.rank(w("0110")), 2);
        assert!(ix.unrank(0).is_err());
        assert!(ix.unrank(17).is_err());
        assert_eq!(EnumerativeIndexer::new(w("1111"), &unit_model()).unrank(1).unwrap(), w("1111"));
    }

    #[test]
    fn cost_two_class_in_zero_first_order() {
        // words of cost 2 over 1110, enumerated lexicographically
        let ix = EnumerativeIndexer::new(w("1110"), &unit_model());
        let class: Vec<BitWord> = BitWord::all(4).unwrap().filter(|&y| ix.cost_of(y) == 2.0).collect();
        assert_eq!(class, vec![w("0110"), w("1010"), w("1100"), w("1111")]);
        let by_rank: Vec<BitWord> = (2..=5).map(|i| ix.unrank(i).unwrap()).collect();
        assert_eq!(by_rank, class);
    }

    #[test]
    fn exhaustive_bijection_small_words() {
        let models = [unit_model(), MlcCostModel::new([0.0, 0.58, 0.87, 1.29]).unwrap()];
        for model in &models {
            for m in 1..=4 {
                for v in BitWord::all(m).unwrap() {
                    let ix = EnumerativeIndexer::new(v, model);
                    let mut seen = vec![false; 1 << m];
                    let mut last = f64::NEG_INFINITY;
                    for i in 1..=ix.size() {
                        let y = ix.unrank(i).unwrap();
                        assert_eq!(ix.rank(y), i);
                        assert!(!std::mem::replace(&mut seen[y.value() as usize], true));
                        let c = ix.cost_of(y);
                        assert!(c >= last);
                        last = c;
                    }
                }
            }
        }
    }
}
