//! Scalar schemes: ciphertexts are single residues modulo the semiprime pq.
//!
//! A plaintext m encrypts as `m + r*p mod pq`; decryption reduces mod p. The
//! noisy variant adds a masking term `s*kappa` and strips it with a final
//! reduction mod kappa. Every ciphertext carries a running plaintext-magnitude
//! bound so an evaluator holding only pq can refuse circuits too deep to
//! decrypt; the public side checks bounds against `bound_capacity = 2^(lambda-1) <= p`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{self, centered, gen_prime, pow2, rand_range, residue};
use crate::error::{Error, Result};
use crate::params::{ParameterSet, Scheme};

/// Secret key for the scalar schemes: the prime p, and kappa for the noisy variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSecretKey {
    pub p: BigUint,
    pub q: BigUint,
    /// Present exactly for the noisy variant.
    pub kappa: Option<BigUint>,
    /// Centered-residue plaintext encoding.
    pub signed: bool,
    pub params: ParameterSet,
}

/// Public evaluation parameters: the modulus and the bound capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarPublicParams {
    pub scheme: Scheme,
    pub pq: BigUint,
    pub bound_capacity: BigUint,
}

/// A residue plus the public running bound on the plaintext magnitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarCiphertext {
    pub value: BigUint,
    pub bound: BigUint,
}

/// Draw kappa with the requested bit-length. Any kappa < p works: p prime
/// guarantees gcd(p, kappa) = 1.
pub(crate) fn draw_kappa(kappa_bits: u32, rng: &mut impl RngCore) -> BigUint {
    rand_range(&pow2(kappa_bits - 1), &pow2(kappa_bits), rng)
}

impl ScalarSecretKey {
    /// Generate a key for the given parameter set.
    pub fn generate(params: &ParameterSet, signed: bool, rng: &mut impl RngCore) -> Result<Self> {
        if params.scheme.is_vector() {
            return Err(Error::InvalidParams(format!(
                "scheme {} is not scalar",
                params.scheme
            )));
        }
        params.validate()?;
        let p = gen_prime(params.lambda, rng)?;
        let q = loop {
            let q = gen_prime(params.eta, rng)?;
            if q != p {
                break q;
            }
        };
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        let kappa = params.kappa_bits.map(|kb| draw_kappa(kb, rng));
        Self::from_parts(p, q, kappa, signed, params.clone())
    }

    /// Assemble a key from explicit components (file loading, toy fixtures).
    pub fn from_parts(
        p: BigUint,
        q: BigUint,
        kappa: Option<BigUint>,
        signed: bool,
        params: ParameterSet,
    ) -> Result<Self> {
        if p >= q {
            return Err(Error::InvalidParams("p must be smaller than q".into()));
        }
        if params.scheme.is_noisy() != kappa.is_some() {
            return Err(Error::InvalidParams(
                "kappa must be present exactly for noisy schemes".into(),
            ));
        }
        if let Some(k) = &kappa {
            if *k >= p || k.is_zero() {
                return Err(Error::InvalidParams("kappa must satisfy 0 < kappa < p".into()));
            }
        }
        Ok(ScalarSecretKey { p, q, kappa, signed, params })
    }

    pub fn public_params(&self) -> ScalarPublicParams {
        ScalarPublicParams {
            scheme: self.params.scheme,
            pq: &self.p * &self.q,
            bound_capacity: self.params.bound_capacity(),
        }
    }

    fn check_message(&self, m: &BigInt) -> Result<()> {
        let m_bound = BigInt::from(self.params.m_bound.clone());
        if self.signed {
            let half = BigInt::from(&self.p >> 1);
            if *m < -half.clone() || *m >= half {
                return Err(Error::OutOfRange(format!(
                    "signed plaintext {m} outside [-(p-1)/2, (p-1)/2)"
                )));
            }
            if *m < -m_bound.clone() || *m >= m_bound {
                return Err(Error::OutOfRange(format!(
                    "signed plaintext {m} outside [-M, M)"
                )));
            }
            if let Some(kappa) = &self.kappa {
                // the final centered mod-kappa reduction only represents |m| <= (kappa-1)/2
                let half_kappa = BigInt::from(kappa >> 1);
                if m.magnitude() > half_kappa.magnitude() {
                    return Err(Error::OutOfRange(format!(
                        "signed plaintext {m} exceeds (kappa-1)/2"
                    )));
                }
            }
        } else if m.sign() == num_bigint::Sign::Minus || *m >= m_bound {
            return Err(Error::OutOfRange(format!("plaintext {m} outside [0, M)")));
        }
        Ok(())
    }

    /// Magnitude bound attached to a fresh encryption: M, doubled for the
    /// centered encoding, plus kappa^2 headroom for the noisy variant.
    pub fn fresh_bound(&self) -> BigUint {
        let mut base = self.params.m_bound.clone();
        if self.signed {
            base <<= 1;
        }
        if let Some(kappa) = &self.kappa {
            base += kappa * kappa;
        }
        base
    }

    /// Encrypt with randomness drawn from `rng`: r from [1, q), s from [0, kappa).
    pub fn encrypt(&self, m: &BigInt, rng: &mut impl RngCore) -> Result<ScalarCiphertext> {
        let r = rand_range(&BigUint::one(), &self.q, rng);
        let s = self
            .kappa
            .as_ref()
            .map(|kappa| arith::rand_below(kappa, rng));
        self.encrypt_with(m, &r, s.as_ref())
    }

    /// Test hook: encrypt with pinned randomness. Production encryption goes
    /// through [`Self::encrypt`]; this variant exists so known-answer tests and
    /// negative controls can fix r and s.
    pub fn encrypt_with(
        &self,
        m: &BigInt,
        r: &BigUint,
        s: Option<&BigUint>,
    ) -> Result<ScalarCiphertext> {
        self.check_message(m)?;
        let pq = &self.p * &self.q;
        let mut acc = residue(m, &pq);
        if let Some(kappa) = &self.kappa {
            let s = s.ok_or_else(|| Error::InvalidParams("noisy scheme needs s".into()))?;
            acc = (acc + s * kappa) % &pq;
        }
        acc = (acc + r * &self.p) % &pq;
        Ok(ScalarCiphertext {
            value: acc,
            bound: self.fresh_bound(),
        })
    }

    /// Decrypt, refusing ciphertexts whose bound has outgrown p.
    pub fn decrypt(&self, c: &ScalarCiphertext) -> Result<BigInt> {
        if c.bound >= self.p {
            return Err(Error::OverflowRisk {
                bound: c.bound.to_string(),
                capacity: self.p.to_string(),
            });
        }
        Ok(self.decrypt_unchecked(c))
    }

    /// Force decryption without the bound check; the result is unreliable
    /// whenever the true plaintext magnitude reached p.
    pub fn decrypt_unchecked(&self, c: &ScalarCiphertext) -> BigInt {
        let v = &c.value % &self.p;
        let mut x = if self.signed {
            centered(&v, &self.p)
        } else {
            BigInt::from(v)
        };
        if let Some(kappa) = &self.kappa {
            let r = residue(&x, kappa);
            x = if self.signed {
                centered(&r, kappa)
            } else {
                BigInt::from(r)
            };
        }
        x
    }
}

impl ScalarPublicParams {
    fn check_bound(&self, bound: &BigUint) -> Result<()> {
        if *bound > self.bound_capacity {
            return Err(Error::OverflowRisk {
                bound: bound.to_string(),
                capacity: self.bound_capacity.to_string(),
            });
        }
        Ok(())
    }

    /// Homomorphic addition; bounds add.
    pub fn add(&self, a: &ScalarCiphertext, b: &ScalarCiphertext) -> Result<ScalarCiphertext> {
        let bound = &a.bound + &b.bound;
        self.check_bound(&bound)?;
        Ok(ScalarCiphertext {
            value: (&a.value + &b.value) % &self.pq,
            bound,
        })
    }

    /// Homomorphic multiplication; bounds multiply.
    pub fn mul(&self, a: &ScalarCiphertext, b: &ScalarCiphertext) -> Result<ScalarCiphertext> {
        let bound = &a.bound * &b.bound;
        self.check_bound(&bound)?;
        Ok(ScalarCiphertext {
            value: (&a.value * &b.value) % &self.pq,
            bound,
        })
    }

    /// Trivial encryption of a public constant (r = s = 0), constructible
    /// without the key. Constants carry no entropy to protect.
    pub fn constant(&self, value: &BigInt) -> ScalarCiphertext {
        ScalarCiphertext {
            value: residue(value, &self.pq),
            bound: value.magnitude().clone().max(BigUint::one()),
        }
    }
}
