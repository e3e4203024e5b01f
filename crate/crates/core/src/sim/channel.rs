use rand::Rng;

use super::{check_rho, SimError};
use crate::source::trial_rng;
use crate::word::BitStream;

/// BSC parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub rho: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(rho: f64, seed: u64) -> Result<Self, SimError> {
        check_rho(rho)?;
        Ok(Self { rho, seed })
    }
}

/// Flips each bit independently with probability `rho`.
pub fn bsc_transmit(bits: &BitStream, spec: &ChannelSpec) -> Result<BitStream, SimError> {
    check_rho(spec.rho)?;
    let mut rng = trial_rng(spec.seed, 0);
    Ok(bits.as_slice().iter().map(|&b| b ^ rng.random_bool(spec.rho)).collect())
}

/// Random `m`-bit error pattern with independent `rho` flips.
#[inline]
pub fn flip_pattern<R: Rng + ?Sized>(rng: &mut R, m: usize, rho: f64) -> u32 {
    if rho == 0.0 {
        return 0;
    }
    (0..m).fold(0u32, |acc, _| (acc << 1) | rng.random_bool(rho) as u32)
}
