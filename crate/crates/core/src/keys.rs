//! Scheme-erased key and ciphertext wrappers, so the pipeline, CLI and file
//! formats can treat every variant uniformly.

use num_bigint::{BigInt, BigUint};
use rand::RngCore;

use crate::crt::{self, CrtCiphertext, CrtPublicParams, CrtSecretKey};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{ScalarCiphertext, ScalarSecretKey};
use crate::vector::{self, AssocFix, VectorCiphertext, VectorKeyPair};

#[derive(Debug, Clone)]
pub enum AnyKey {
    Scalar(ScalarSecretKey),
    Vector(VectorKeyPair),
    Crt(CrtKeyPair),
}

/// CRT secret key plus its per-shard public parameters.
#[derive(Debug, Clone)]
pub struct CrtKeyPair {
    pub sk: CrtSecretKey,
    pub pp: CrtPublicParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCiphertext {
    Scalar(ScalarCiphertext),
    Vector(VectorCiphertext),
    Crt(CrtCiphertext),
}

impl AnyCiphertext {
    pub fn bound(&self) -> &BigUint {
        match self {
            AnyCiphertext::Scalar(c) => &c.bound,
            AnyCiphertext::Vector(c) => &c.bound,
            AnyCiphertext::Crt(c) => &c.bound,
        }
    }
}

impl AnyKey {
    /// Key generation dispatched on the parameter set's scheme.
    pub fn generate(params: &ParameterSet, signed: bool, rng: &mut impl RngCore) -> Result<AnyKey> {
        if params.scheme.is_crt() {
            if signed {
                return Err(Error::InvalidParams(
                    "the CRT variant does not support the centered encoding".into(),
                ));
            }
            let bundle = crt::generate(params, rng)?;
            Ok(AnyKey::Crt(CrtKeyPair {
                sk: bundle.sk,
                pp: bundle.pp,
            }))
        } else if params.scheme.is_vector() {
            let bundle = vector::generate(params, AssocFix::Auto, signed, rng)?;
            Ok(AnyKey::Vector(bundle.pair()))
        } else {
            Ok(AnyKey::Scalar(ScalarSecretKey::generate(params, signed, rng)?))
        }
    }

    pub fn params(&self) -> &ParameterSet {
        match self {
            AnyKey::Scalar(k) => &k.params,
            AnyKey::Vector(b) => &b.sk.params,
            AnyKey::Crt(b) => &b.sk.params,
        }
    }

    pub fn encrypt(&self, m: &BigInt, rng: &mut impl RngCore) -> Result<AnyCiphertext> {
        Ok(match self {
            AnyKey::Scalar(k) => AnyCiphertext::Scalar(k.encrypt(m, rng)?),
            AnyKey::Vector(b) => AnyCiphertext::Vector(b.sk.encrypt(m, rng)?),
            AnyKey::Crt(b) => AnyCiphertext::Crt(b.sk.encrypt(m, rng)?),
        })
    }

    pub fn decrypt(&self, c: &AnyCiphertext) -> Result<BigInt> {
        match (self, c) {
            (AnyKey::Scalar(k), AnyCiphertext::Scalar(c)) => k.decrypt(c),
            (AnyKey::Vector(b), AnyCiphertext::Vector(c)) => b.sk.decrypt(c),
            (AnyKey::Crt(b), AnyCiphertext::Crt(c)) => b.sk.decrypt(c),
            _ => Err(Error::InvalidParams("ciphertext kind does not match key".into())),
        }
    }

    pub fn decrypt_unchecked(&self, c: &AnyCiphertext) -> Result<BigInt> {
        Ok(match (self, c) {
            (AnyKey::Scalar(k), AnyCiphertext::Scalar(c)) => k.decrypt_unchecked(c),
            (AnyKey::Vector(b), AnyCiphertext::Vector(c)) => b.sk.decrypt_unchecked(c),
            (AnyKey::Crt(b), AnyCiphertext::Crt(c)) => b.sk.decrypt_unchecked(c),
            _ => {
                return Err(Error::InvalidParams(
                    "ciphertext kind does not match key".into(),
                ))
            }
        })
    }

    pub fn add(&self, a: &AnyCiphertext, b: &AnyCiphertext) -> Result<AnyCiphertext> {
        Ok(match (self, a, b) {
            (AnyKey::Scalar(k), AnyCiphertext::Scalar(x), AnyCiphertext::Scalar(y)) => {
                AnyCiphertext::Scalar(k.public_params().add(x, y)?)
            }
            (AnyKey::Vector(bk), AnyCiphertext::Vector(x), AnyCiphertext::Vector(y)) => {
                AnyCiphertext::Vector(bk.pp.add(x, y)?)
            }
            (AnyKey::Crt(bk), AnyCiphertext::Crt(x), AnyCiphertext::Crt(y)) => {
                AnyCiphertext::Crt(bk.pp.add(x, y)?)
            }
            _ => return Err(Error::InvalidParams("mixed ciphertext kinds".into())),
        })
    }

    pub fn mul(&self, a: &AnyCiphertext, b: &AnyCiphertext) -> Result<AnyCiphertext> {
        Ok(match (self, a, b) {
            (AnyKey::Scalar(k), AnyCiphertext::Scalar(x), AnyCiphertext::Scalar(y)) => {
                AnyCiphertext::Scalar(k.public_params().mul(x, y)?)
            }
            (AnyKey::Vector(bk), AnyCiphertext::Vector(x), AnyCiphertext::Vector(y)) => {
                AnyCiphertext::Vector(bk.pp.mul(x, y)?)
            }
            (AnyKey::Crt(bk), AnyCiphertext::Crt(x), AnyCiphertext::Crt(y)) => {
                AnyCiphertext::Crt(bk.pp.mul(x, y)?)
            }
            _ => return Err(Error::InvalidParams("mixed ciphertext kinds".into())),
        })
    }

    /// The noise modulus decryption reduces by, when the scheme has one.
    pub fn kappa(&self) -> Option<&BigUint> {
        match self {
            AnyKey::Scalar(k) => k.kappa.as_ref(),
            AnyKey::Vector(b) => b.sk.kappa.as_ref(),
            AnyKey::Crt(b) => Some(&b.sk.kappa),
        }
    }
}
