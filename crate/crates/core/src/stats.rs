//! Chi-square uniformity testing of ciphertext residue streams.
//!
//! Honest noisy encryptions are uniform mod kappa up to total variation
//! kappa/q; with q many orders of magnitude above kappa the test must pass,
//! and a stream with its randomness pinned must fail.

use num_bigint::BigUint;
use num_traits::One;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::arith::to_usize;
use crate::error::{Error, Result};

/// Samples required per bin before the test is meaningful.
pub const MIN_SAMPLES_PER_BIN: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: u64,
    /// Rejection threshold at the requested significance.
    pub critical: f64,
    pub significance: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Chi-square test of `values mod kappa` against the uniform distribution on
/// [0, kappa). Requires at least `50 * kappa` samples; kappa = 1 is trivially
/// uniform.
pub fn chi_square_uniformity(
    values: &[BigUint],
    kappa: &BigUint,
    significance: f64,
) -> Result<ChiSquareReport> {
    if !(0.0..1.0).contains(&significance) || significance <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "significance {significance} not in (0, 1)"
        )));
    }
    if kappa.is_one() {
        return Ok(ChiSquareReport {
            statistic: 0.0,
            dof: 0,
            critical: 0.0,
            significance,
            samples: values.len(),
            pass: true,
        });
    }
    let bins = to_usize(kappa).ok_or_else(|| {
        Error::InvalidParams("kappa too large for a binned uniformity test".into())
    })?;
    let needed = MIN_SAMPLES_PER_BIN * bins;
    if values.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: values.len(),
        });
    }

    let mut counts = vec![0u64; bins];
    for v in values {
        let r = to_usize(&(v % kappa)).expect("residue below kappa fits usize");
        counts[r] += 1;
    }
    let expected = values.len() as f64 / bins as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = (bins - 1) as u64;
    let dist = ChiSquared::new(dof as f64)
        .map_err(|e| Error::InvalidParams(format!("chi-square dof: {e}")))?;
    let critical = dist.inverse_cdf(1.0 - significance);
    Ok(ChiSquareReport {
        statistic,
        dof,
        critical,
        significance,
        samples: values.len(),
        pass: statistic <= critical,
    })
}
