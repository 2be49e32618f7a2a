//! Scheme identifiers, parameter sets and the size-derivation rules.
//!
//! Sizes are derived from the degree `d` of the target polynomial, the input
//! count bound `2^n_bits` and the input min entropy `rho`. The derivation uses
//! ceilings at every step so results are deterministic and never fall below
//! the analytic thresholds:
//!
//! * plain schemes: `lambda = ceil(3*d*rho/2)`, `eta = ceil(lambda^2/rho) - lambda`
//! * noise schemes: `kappa_bits = d*(n_bits + rho)`, `rho' = rho + kappa_bits`,
//!   `lambda = d*(n_bits + 2*kappa_bits)`, `eta = ceil(lambda^2/rho') - lambda`

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::pow2;
use crate::error::{Error, Result};

/// The scheme family. Scalar variants encrypt to a single residue, vector
/// variants to a k-vector, the CRT variant to K independent 2-vector shards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    He1,
    He1N,
    He2,
    He2N,
    Hek,
    HekN,
    He2NCrt,
}

impl Scheme {
    pub fn is_noisy(self) -> bool {
        matches!(self, Scheme::He1N | Scheme::He2N | Scheme::HekN | Scheme::He2NCrt)
    }

    pub fn is_vector(self) -> bool {
        matches!(
            self,
            Scheme::He2 | Scheme::He2N | Scheme::Hek | Scheme::HekN | Scheme::He2NCrt
        )
    }

    pub fn is_crt(self) -> bool {
        matches!(self, Scheme::He2NCrt)
    }

    /// Default ciphertext dimension; `Hek`/`HekN` take it from the parameter set.
    pub fn default_k(self) -> u32 {
        match self {
            Scheme::He1 | Scheme::He1N => 1,
            Scheme::He2 | Scheme::He2N | Scheme::He2NCrt => 2,
            Scheme::Hek | Scheme::HekN => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::He1 => "he1",
            Scheme::He1N => "he1n",
            Scheme::He2 => "he2",
            Scheme::He2N => "he2n",
            Scheme::Hek => "hek",
            Scheme::HekN => "hekn",
            Scheme::He2NCrt => "he2ncrt",
        }
    }

    pub fn parse(s: &str) -> Result<Scheme> {
        match s.to_ascii_lowercase().as_str() {
            "he1" => Ok(Scheme::He1),
            "he1n" => Ok(Scheme::He1N),
            "he2" => Ok(Scheme::He2),
            "he2n" => Ok(Scheme::He2N),
            "hek" | "he3" | "he4" | "he5" | "he6" => Ok(Scheme::Hek),
            "hekn" | "he3n" | "he4n" => Ok(Scheme::HekN),
            "he2ncrt" => Ok(Scheme::He2NCrt),
            other => Err(Error::Parse(format!("unknown scheme '{other}'"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Derived sizes for one scheme instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSet {
    pub scheme: Scheme,
    /// Degree of the target polynomial, >= 1.
    pub d: u32,
    /// Inputs are counted against 2^n_bits.
    pub n_bits: u32,
    /// Min entropy of the raw inputs, bits.
    pub rho: u32,
    /// Exclusive upper bound on plaintext inputs; 2^rho under the default model.
    pub m_bound: BigUint,
    /// Effective entropy after noise, noise variants only.
    pub rho_prime: Option<u32>,
    /// Bit-length of the noise multiplier kappa, noise variants only.
    pub kappa_bits: Option<u32>,
    /// Bit-length of the secret prime p.
    pub lambda: u32,
    /// Bit-length of the cofactor prime q.
    pub eta: u32,
    /// Ciphertext dimension (1 for scalar schemes).
    pub k: u32,
    /// Shard count, CRT variant only (1 otherwise).
    pub shards: u32,
    /// Set whenever the sizes fall below the brute-force margin lambda >= 2*rho_eff.
    /// Serialized artifacts produced under it are tagged insecure.
    pub insecure_toy: bool,
}

impl ParameterSet {
    /// Entropy the sizes are judged against: `rho` plain, `rho'` with noise.
    pub fn rho_eff(&self) -> u32 {
        self.rho_prime.unwrap_or(self.rho)
    }

    /// Public capacity the evaluator checks running plaintext bounds against:
    /// 2^(lambda-1) <= p.
    pub fn bound_capacity(&self) -> BigUint {
        pow2(self.lambda - 1)
    }

    /// Capacity for the de-noised plaintext value in noise schemes: the
    /// evaluated polynomial must stay below kappa, and 2^(kappa_bits-1) is the
    /// least kappa the key generator may pick.
    pub fn plain_value_capacity(&self) -> Option<BigUint> {
        self.kappa_bits.map(|kb| pow2(kb - 1))
    }

    /// Derive a parameter set from the model quantities, assuming inputs
    /// bounded by M = 2^rho.
    pub fn derive(
        scheme: Scheme,
        d: u32,
        n_bits: u32,
        rho: u32,
        k: Option<u32>,
        shards: Option<u32>,
    ) -> Result<ParameterSet> {
        if d < 1 {
            return Err(Error::InvalidParams("degree d must be >= 1".into()));
        }
        if rho < 1 {
            return Err(Error::InvalidParams("entropy rho must be >= 1".into()));
        }
        let k = match k {
            Some(k) => k,
            None => scheme.default_k(),
        };
        if scheme.is_vector() && k < 2 {
            return Err(Error::InvalidParams(format!(
                "scheme {scheme} needs k >= 2, got {k}"
            )));
        }
        if !scheme.is_vector() && k != 1 {
            return Err(Error::InvalidParams(format!(
                "scheme {scheme} is scalar, k must be 1"
            )));
        }
        if matches!(scheme, Scheme::He2 | Scheme::He2N | Scheme::He2NCrt) && k != 2 {
            return Err(Error::InvalidParams(format!("scheme {scheme} fixes k = 2")));
        }
        let shards = shards.unwrap_or(1);
        if scheme.is_crt() && shards < 1 {
            return Err(Error::InvalidParams("shard count K must be >= 1".into()));
        }
        if !scheme.is_crt() && shards != 1 {
            return Err(Error::InvalidParams(format!(
                "scheme {scheme} is not sharded, K must be 1"
            )));
        }

        let (lambda, eta, kappa_bits, rho_prime);
        if scheme.is_noisy() {
            let kb = d as u64 * (n_bits as u64 + rho as u64);
            let rp = rho as u64 + kb;
            let lam = d as u64 * (n_bits as u64 + 2 * kb);
            let e = (lam * lam).div_ceil(rp).saturating_sub(lam);
            kappa_bits = Some(kb as u32);
            rho_prime = Some(rp as u32);
            lambda = lam;
            eta = e;
        } else {
            let lam = (3 * d as u64 * rho as u64).div_ceil(2);
            let e = (lam * lam).div_ceil(rho as u64).saturating_sub(lam);
            kappa_bits = None;
            rho_prime = None;
            lambda = lam;
            eta = e;
        }
        if eta == 0 {
            return Err(Error::InvalidParams(format!(
                "derived eta is not positive (lambda={lambda})"
            )));
        }
        let lambda = u32::try_from(lambda)
            .map_err(|_| Error::InvalidParams("derived lambda exceeds u32".into()))?;
        let eta = u32::try_from(eta)
            .map_err(|_| Error::InvalidParams("derived eta exceeds u32".into()))?;

        let rho_eff = rho_prime.unwrap_or(rho);
        let set = ParameterSet {
            scheme,
            d,
            n_bits,
            rho,
            m_bound: pow2(rho),
            rho_prime,
            kappa_bits,
            lambda,
            eta,
            k,
            shards,
            insecure_toy: (lambda as u64) < 2 * rho_eff as u64,
        };
        set.validate()?;
        Ok(set)
    }

    /// Check the structural invariants. Capacity relations are checked in bit
    /// form, matching the derivation's own algebra: lambda covers
    /// d*(n_bits + rho) for plain schemes, kappa covers d*(n_bits + rho) and
    /// lambda covers d*(n_bits + 2*kappa_bits) for noise schemes.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if self.d < 1 {
            return fail("d must be >= 1".into());
        }
        if self.lambda < 2 || self.eta < 2 {
            return fail(format!(
                "lambda and eta must be >= 2 (got {}, {})",
                self.lambda, self.eta
            ));
        }
        if self.m_bound < BigUint::one() {
            return fail("input bound M must be positive".into());
        }
        let rho_eff = self.rho_eff() as u64;
        if !self.insecure_toy {
            let floor_eta = (self.lambda as u64 * self.lambda as u64)
                .div_ceil(rho_eff)
                .saturating_sub(self.lambda as u64);
            if (self.eta as u64) < floor_eta {
                return fail(format!(
                    "eta {} below the non-toy floor {floor_eta}",
                    self.eta
                ));
            }
            if (self.lambda as u64) < 2 * rho_eff {
                return fail(format!(
                    "lambda {} below the brute-force margin {} without the toy flag",
                    self.lambda,
                    2 * rho_eff
                ));
            }
        }
        match (self.scheme.is_noisy(), self.kappa_bits, self.rho_prime) {
            (true, Some(kb), Some(rp)) => {
                if rp as u64 != self.rho as u64 + kb as u64 {
                    return fail(format!(
                        "rho' {} must equal rho {} + kappa_bits {kb}",
                        rp, self.rho
                    ));
                }
                let need_kappa = self.d as u64 * (self.n_bits as u64 + self.rho as u64);
                if (kb as u64) < need_kappa {
                    return fail(format!("kappa_bits {kb} below capacity need {need_kappa}"));
                }
                let need_lambda = self.d as u64 * (self.n_bits as u64 + 2 * kb as u64);
                if (self.lambda as u64) < need_lambda {
                    return fail(format!(
                        "lambda {} below noisy capacity need {need_lambda}",
                        self.lambda
                    ));
                }
            }
            (false, None, None) => {
                let need_lambda = self.d as u64 * (self.n_bits as u64 + self.rho as u64);
                // The derivation assumes n <= sqrt(M); n_bits above rho/2 needs
                // a larger lambda than 3*d*rho/2.
                if (self.lambda as u64)
                    < need_lambda.min((3 * self.d as u64 * self.rho as u64).div_ceil(2))
                {
                    return fail(format!(
                        "lambda {} below plain capacity need {need_lambda}",
                        self.lambda
                    ));
                }
            }
            _ => {
                return fail("noise fields must be present exactly for noise schemes".into());
            }
        }
        if self.scheme.is_vector() && self.k < 2 {
            return fail(format!("vector scheme with k={}", self.k));
        }
        if !self.scheme.is_vector() && self.k != 1 {
            return fail(format!("scalar scheme with k={}", self.k));
        }
        if self.scheme.is_crt() {
            if self.shards < 1 {
                return fail("CRT scheme needs K >= 1".into());
            }
        } else if self.shards != 1 {
            return fail("non-CRT scheme with K != 1".into());
        }
        Ok(())
    }
}

/// One line of a presets file: `name scheme d n_bits rho [k] [K]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub scheme: Scheme,
    pub d: u32,
    pub n_bits: u32,
    pub rho: u32,
    pub k: Option<u32>,
    pub shards: Option<u32>,
}

impl Preset {
    pub fn resolve(&self) -> Result<ParameterSet> {
        ParameterSet::derive(self.scheme, self.d, self.n_bits, self.rho, self.k, self.shards)
    }
}

/// Parse a presets file. Blank lines and `#` comments are ignored.
pub fn parse_presets(text: &str) -> Result<Vec<Preset>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 5 || fields.len() > 7 {
            return Err(Error::Parse(format!(
                "presets line {}: expected `name scheme d n_bits rho [k] [K]`",
                lineno + 1
            )));
        }
        let num = |s: &str, what: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| Error::Parse(format!("presets line {}: bad {what} '{s}'", lineno + 1)))
        };
        out.push(Preset {
            name: fields[0].to_string(),
            scheme: Scheme::parse(fields[1])?,
            d: num(fields[2], "d")?,
            n_bits: num(fields[3], "n_bits")?,
            rho: num(fields[4], "rho")?,
            k: fields.get(5).map(|s| num(s, "k")).transpose()?,
            shards: fields.get(6).map(|s| num(s, "K")).transpose()?,
        });
    }
    Ok(out)
}

/// Presets used by the CLI when no file is supplied.
pub const DEFAULT_PRESETS: &str = "\
# name scheme d n_bits rho [k] [K]
he1-d2-r32   he1     2 16 32
he1-d3-r64   he1     3 16 64
he1-d4-r32   he1     4 16 32
he1n-d2-r8   he1n    2 16 8
he1n-d3-r8   he1n    3 16 8
he2-d2-r32   he2     2 16 32
he2n-d2-r8   he2n    2 16 8
he2n-d3-r20  he2n    3 16 20
he3-d2-r32   hek     2 16 32 3
he3n-d2-r8   hekn    2 16 8  3
he2ncrt-k3   he2ncrt 2 16 8  2 3
";
