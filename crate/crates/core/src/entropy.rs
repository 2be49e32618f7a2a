//! Entropy measures of a plaintext distribution, in bits.
//!
//! Min entropy is the quantity that matters for brute-force resistance: a
//! guess-and-verify attacker needs 2^min_entropy expected guesses.

use crate::error::{Error, Result};

const NORMALISATION_TOL: f64 = 1e-9;

/// Shannon, collision and min entropy of one distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub shannon: f64,
    pub collision: f64,
    pub min_entropy: f64,
}

/// Compute all three entropy measures of a probability vector.
///
/// Rejects inputs with negative entries or mass not summing to 1 (within 1e-9).
/// The convention 0*lg(0) = 0 applies to empty cells.
pub fn entropy_of(distribution: &[f64]) -> Result<EntropyReport> {
    if distribution.is_empty() {
        return Err(Error::InvalidParams("empty distribution".into()));
    }
    let mut sum = 0.0;
    for (i, &p) in distribution.iter().enumerate() {
        if !(0.0..=1.0 + NORMALISATION_TOL).contains(&p) || p.is_nan() {
            return Err(Error::InvalidParams(format!(
                "probability {p} at index {i} is not in [0,1]"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > NORMALISATION_TOL {
        return Err(Error::InvalidParams(format!(
            "probabilities sum to {sum}, not 1"
        )));
    }

    let mut shannon = 0.0;
    let mut power_sum = 0.0;
    let mut max_p: f64 = 0.0;
    for &p in distribution {
        if p > 0.0 {
            shannon -= p * p.log2();
        }
        power_sum += p * p;
        max_p = max_p.max(p);
    }
    Ok(EntropyReport {
        shannon,
        collision: -power_sum.log2(),
        min_entropy: -max_p.log2(),
    })
}
