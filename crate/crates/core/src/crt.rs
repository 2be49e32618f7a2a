//! K-shard variant: the noisy 2-vector scheme evaluated independently modulo
//! K per-shard semiprimes p_j q_j, with results recombined by the Chinese
//! remainder theorem at decryption.
//!
//! One encryption shares a single noise multiplier s across shards, so all
//! shard residues agree modulo kappa after recombination. The computation can
//! exceed any single p_j: correctness only needs the evaluated value below
//! Pi = prod p_j, and each shard worker sees only its own modulus.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{gen_prime, mod_inverse, pow2, rand_below};
use crate::error::{Error, Result};
use crate::params::{ParameterSet, Scheme};
use crate::scalar::draw_kappa;
use crate::vector::{
    generate_with_modulus, AssocFix, StructureConstants, VectorCiphertext, VectorPublicParams,
    VectorSecretKey,
};

/// Secret material: per-shard 2-vector keys sharing one kappa, plus the CRT
/// recombination weights.
#[derive(Debug, Clone)]
pub struct CrtSecretKey {
    pub kappa: BigUint,
    pub shards: Vec<VectorSecretKey>,
    /// Product of the shard primes p_j.
    pub pi: BigUint,
    /// (M_j, mu_j) with M_j = Pi / p_j and mu_j = M_j^{-1} mod p_j.
    pub weights: Vec<(BigUint, BigUint)>,
    pub params: ParameterSet,
}

/// Per-shard public parameters. Every shard's bound capacity is derived from
/// Pi, not from its own p_j: a shard-local computation may overflow p_j as
/// long as the recombined value stays below Pi.
#[derive(Debug, Clone)]
pub struct CrtPublicParams {
    pub shards: Vec<VectorPublicParams>,
    pub bound_capacity: BigUint,
}

/// One ciphertext: K 2-vectors, shard j reduced mod p_j q_j, sharing a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtCiphertext {
    pub shards: Vec<VectorCiphertext>,
    pub bound: BigUint,
}

#[derive(Debug, Clone)]
pub struct CrtKeyBundle {
    pub sk: CrtSecretKey,
    pub pp: CrtPublicParams,
    pub hidden: Vec<StructureConstants>,
    /// Bit-length chosen for each shard prime p_j.
    pub shard_lambda: u32,
    pub shard_eta: u32,
}

/// Per-shard prime size: K shards of lambda_j bits must cover the family's
/// capacity requirement with margin, so lambda_j = ceil((lambda + K)/K) + 1.
/// A single shard must additionally hold a fresh noisy value m + s*kappa,
/// which floors lambda_j at 2*kappa_bits + 2.
pub fn shard_lambda(family_lambda: u32, shards: u32, kappa_bits: u32) -> u32 {
    let k = shards as u64;
    let split = (family_lambda as u64 + k).div_ceil(k) as u32 + 1;
    split.max(2 * kappa_bits + 2)
}

/// Generate a K-shard key for a `He2NCrt` parameter set.
pub fn generate(params: &ParameterSet, rng: &mut impl RngCore) -> Result<CrtKeyBundle> {
    if params.scheme != Scheme::He2NCrt {
        return Err(Error::InvalidParams(format!(
            "scheme {} is not the CRT variant",
            params.scheme
        )));
    }
    params.validate()?;
    let kcount = params.shards as usize;
    let kappa_bits = params
        .kappa_bits
        .ok_or_else(|| Error::InvalidParams("CRT variant requires kappa".into()))?;
    let kappa = draw_kappa(kappa_bits, rng);

    let lam = shard_lambda(params.lambda, params.shards, kappa_bits);
    let rho_eff = params.rho_eff() as u64;
    // toy parameter sets keep q_j small: its size buys security, not correctness
    let eta = if params.insecure_toy {
        lam + 16
    } else {
        (lam as u64 * lam as u64)
            .div_ceil(rho_eff)
            .saturating_sub(lam as u64)
            .max(lam as u64 + 2) as u32
    };

    let shard_params = ParameterSet {
        scheme: Scheme::He2N,
        lambda: lam,
        eta,
        k: 2,
        shards: 1,
        insecure_toy: params.insecure_toy || (lam as u64) < 2 * rho_eff,
        ..params.clone()
    };

    // Pairwise-distinct primes across all shards.
    let mut primes: Vec<BigUint> = Vec::new();
    let mut shard_primes = Vec::with_capacity(kcount);
    for _ in 0..kcount {
        let p = loop {
            let c = gen_prime(lam, rng)?;
            if !primes.contains(&c) {
                break c;
            }
        };
        primes.push(p.clone());
        let q = loop {
            let c = gen_prime(eta, rng)?;
            if !primes.contains(&c) {
                break c;
            }
        };
        primes.push(q.clone());
        shard_primes.push((p, q));
    }

    build_from_primes(params, &shard_params, kappa, shard_primes, rng)
}

/// Assemble a CRT key from explicit shard primes (toy fixtures).
pub fn generate_with_primes(
    params: &ParameterSet,
    kappa: BigUint,
    shard_primes: Vec<(BigUint, BigUint)>,
    rng: &mut impl RngCore,
) -> Result<CrtKeyBundle> {
    let lam = shard_primes
        .iter()
        .map(|(p, _)| p.bits() as u32)
        .max()
        .unwrap_or(2);
    let eta = shard_primes
        .iter()
        .map(|(_, q)| q.bits() as u32)
        .max()
        .unwrap_or(2);
    let shard_params = ParameterSet {
        scheme: Scheme::He2N,
        lambda: lam,
        eta,
        k: 2,
        shards: 1,
        insecure_toy: true,
        ..params.clone()
    };
    build_from_primes(params, &shard_params, kappa, shard_primes, rng)
}

fn build_from_primes(
    params: &ParameterSet,
    shard_params: &ParameterSet,
    kappa: BigUint,
    shard_primes: Vec<(BigUint, BigUint)>,
    rng: &mut impl RngCore,
) -> Result<CrtKeyBundle> {
    let kcount = shard_primes.len();
    if kcount == 0 {
        return Err(Error::InvalidParams("need at least one shard".into()));
    }
    let capacity = pow2((shard_params.lambda - 1) * kcount as u32);

    let mut shards = Vec::with_capacity(kcount);
    let mut pps = Vec::with_capacity(kcount);
    let mut hidden = Vec::with_capacity(kcount);
    let mut pi = BigUint::one();
    for (p, q) in shard_primes {
        pi *= &p;
        let mut bundle = generate_with_modulus(
            shard_params,
            p,
            q,
            Some(kappa.clone()),
            AssocFix::Auto,
            false,
            rng,
        )?;
        bundle.pp.bound_capacity = capacity.clone();
        shards.push(bundle.sk);
        pps.push(bundle.pp);
        hidden.push(bundle.hidden);
    }

    let weights = shards
        .iter()
        .map(|s| {
            let m_j = &pi / &s.p;
            let mu_j = mod_inverse(&m_j, &s.p)
                .ok_or_else(|| Error::InvalidParams("shard primes must be distinct".into()))?;
            Ok((m_j, mu_j))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CrtKeyBundle {
        sk: CrtSecretKey {
            kappa,
            shards,
            pi,
            weights,
            params: params.clone(),
        },
        pp: CrtPublicParams {
            shards: pps,
            bound_capacity: capacity,
        },
        hidden,
        shard_lambda: shard_params.lambda,
        shard_eta: shard_params.eta,
    })
}

impl CrtSecretKey {
    pub fn shard_count(&self) -> usize {
        self.shards.len()
    }

    /// Encrypt m: one noise multiplier s shared across shards, fresh r and t
    /// per shard.
    pub fn encrypt(&self, m: &BigInt, rng: &mut impl RngCore) -> Result<CrtCiphertext> {
        let s = rand_below(&self.kappa, rng);
        let rt: Vec<(BigUint, BigUint)> = self
            .shards
            .iter()
            .map(|sh| {
                let pq = sh.pq();
                (rand_below(&sh.q, rng), rand_below(&pq, rng))
            })
            .collect();
        self.encrypt_with(m, &s, &rt)
    }

    /// Test hook: pinned noise and per-shard randomness.
    pub fn encrypt_with(
        &self,
        m: &BigInt,
        s: &BigUint,
        shard_randomness: &[(BigUint, BigUint)],
    ) -> Result<CrtCiphertext> {
        if shard_randomness.len() != self.shards.len() {
            return Err(Error::InvalidParams(
                "randomness count must match shard count".into(),
            ));
        }
        let mut parts = Vec::with_capacity(self.shards.len());
        for (sh, (r, t)) in self.shards.iter().zip(shard_randomness) {
            parts.push(sh.encrypt_with(m, r, Some(s), std::slice::from_ref(t))?);
        }
        let bound = parts[0].bound.clone();
        Ok(CrtCiphertext {
            shards: parts,
            bound,
        })
    }

    /// Decrypt shard j alone: gamma_j projection mod p_j, then mod kappa.
    pub fn decrypt_shard(&self, j: usize, c: &VectorCiphertext) -> Result<BigInt> {
        self.shards[j].decrypt(c)
    }

    /// Recombine all shard residues modulo Pi, then strip the noise mod kappa.
    pub fn decrypt(&self, c: &CrtCiphertext) -> Result<BigInt> {
        if c.bound >= self.pi {
            return Err(Error::OverflowRisk {
                bound: c.bound.to_string(),
                capacity: self.pi.to_string(),
            });
        }
        Ok(self.decrypt_unchecked(c))
    }

    pub fn decrypt_unchecked(&self, c: &CrtCiphertext) -> BigInt {
        let mut acc = BigUint::zero();
        for ((sh, (m_j, mu_j)), part) in self.shards.iter().zip(&self.weights).zip(&c.shards) {
            let p_j = sh.gamma_project(part) % &sh.p;
            acc += p_j * m_j % &self.pi * mu_j;
        }
        let value = acc % &self.pi;
        BigInt::from(value % &self.kappa)
    }
}

impl CrtPublicParams {
    pub fn shard(&self, j: usize) -> &VectorPublicParams {
        &self.shards[j]
    }

    fn check_bound(&self, bound: &BigUint) -> Result<()> {
        if *bound > self.bound_capacity {
            return Err(Error::OverflowRisk {
                bound: bound.to_string(),
                capacity: self.bound_capacity.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &CrtCiphertext, b: &CrtCiphertext) -> Result<CrtCiphertext> {
        let bound = &a.bound + &b.bound;
        self.check_bound(&bound)?;
        let shards = self
            .shards
            .iter()
            .zip(a.shards.iter().zip(&b.shards))
            .map(|(pp, (x, y))| pp.add_raw(x, y))
            .collect();
        Ok(CrtCiphertext { shards, bound })
    }

    pub fn mul(&self, a: &CrtCiphertext, b: &CrtCiphertext) -> Result<CrtCiphertext> {
        let bound = &a.bound * &b.bound;
        self.check_bound(&bound)?;
        let shards = self
            .shards
            .iter()
            .zip(a.shards.iter().zip(&b.shards))
            .map(|(pp, (x, y))| pp.mul_raw(x, y))
            .collect();
        Ok(CrtCiphertext { shards, bound })
    }

    pub fn constant(&self, value: &BigInt) -> CrtCiphertext {
        let shards: Vec<VectorCiphertext> = self.shards.iter().map(|pp| pp.constant(value)).collect();
        let bound = shards[0].bound.clone();
        CrtCiphertext { shards, bound }
    }
}
